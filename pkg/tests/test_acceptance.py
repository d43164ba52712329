"""Acceptance gate.

One test per criterion; each prints a single PASS or FAIL line with its
measured detail and asserts the criterion, including its time budget where
one is stated.
"""

import itertools
import random
import time

from coarsecat.errors import IncompatibleStructures, InvalidMorphism
from coarsecat.homotopy import is_coarsely_excisive, is_flasque, is_nice
from coarsecat.limits import (
    Arrow,
    Cocone,
    Cone,
    Diagram,
    admissible as finite_admissible,
    colimit,
    coproduct,
    exists_in_classical,
    limit,
    preservation_test,
    product,
    universal_property_check,
)
from coarsecat.relalg import (
    Carrier,
    PointSet,
    Relation,
    equivalence_closure,
    is_subset,
)
from coarsecat.spaces import (
    GBCSpace,
    Morphism,
    components,
    enumerate_morphisms,
    enumerate_spaces,
    from_generators,
    identity,
    is_isomorphism,
    max_empty,
    split,
    tensor,
)
from coarsecat.symnat import (
    Full,
    SemilinearSet,
    SymSpace,
    Triv,
    ex_PO,
    exa_N,
    sym_admissible,
    sym_pushout,
    truncate_diagram,
)

import conftest
from conftest import brute_coarse_family, brute_member, carrier, mk_space

POOL = [s for n in range(4) for s in enumerate_spaces(n)]
SHAPES = ("empty", "single", "pair", "parallel_pair", "span", "cospan", "chain3")


def _report(label: str, ok: bool, detail: str = "") -> None:
    line = f"{'PASS' if ok else 'FAIL'}: {label}"
    if detail:
        line += f" [{detail}]"
    conftest.ACCEPTANCE_LINES.append(line)
    print(line)
    assert ok, line


# -- criterion 1 -----------------------------------------------------------


def test_criterion_1_normal_form_vs_brute_force_closure():
    started = time.monotonic()
    rng = random.Random(190401)
    cases = 10_000
    family_cache: dict = {}
    for _ in range(cases):
        n = rng.randint(1, 4)
        c = carrier(n)
        k = rng.randint(0, 3)
        gen_pairs = tuple(
            sorted(
                {(rng.randrange(n), rng.randrange(n)) for _ in range(k)}
            )
        )
        key = (n, gen_pairs)
        if key not in family_cache:
            family_cache[key] = brute_coarse_family(n, gen_pairs)
        family = family_cache[key]
        gens = [
            Relation.from_pairs(c, [(c.elements[a], c.elements[b])])
            for a, b in gen_pairs
        ]
        closure = equivalence_closure(gens, c)
        probe = Relation(c, rng.getrandbits(n * n))
        fast = is_subset(probe, closure)
        slow = brute_member(probe.index_pairs(), family)
        assert fast == slow, (n, gen_pairs, sorted(probe.index_pairs()))
    elapsed = time.monotonic() - started
    _report(
        "criterion 1: normal-form membership == brute-force closure",
        elapsed < 120,
        f"{cases} cases, {elapsed:.1f}s",
    )


# -- criterion 2 -----------------------------------------------------------


def _sample_arrow(rng, dom, cod):
    homs = list(enumerate_morphisms(dom, cod))
    if not homs:
        return None
    return homs[rng.randrange(len(homs))]


def _sample_diagram(shape: str, rng) -> Diagram:
    def pick():
        return POOL[rng.randrange(len(POOL))]

    for _ in range(200):
        if shape == "empty":
            return Diagram({})
        if shape == "single":
            return Diagram({"A": pick()})
        if shape == "pair":
            return Diagram({"A": pick(), "B": pick()})
        if shape == "parallel_pair":
            a, b = pick(), pick()
            f, g = _sample_arrow(rng, a, b), _sample_arrow(rng, a, b)
            if f and g:
                return Diagram(
                    {"A": a, "B": b},
                    [Arrow("f", "A", "B", f), Arrow("g", "A", "B", g)],
                )
        if shape == "span":
            c0, l, r = pick(), pick(), pick()
            f, g = _sample_arrow(rng, c0, l), _sample_arrow(rng, c0, r)
            if f and g:
                return Diagram(
                    {"C": c0, "L": l, "R": r},
                    [Arrow("f", "C", "L", f), Arrow("g", "C", "R", g)],
                )
        if shape == "cospan":
            l, r, c0 = pick(), pick(), pick()
            f, g = _sample_arrow(rng, l, c0), _sample_arrow(rng, r, c0)
            if f and g:
                return Diagram(
                    {"L": l, "R": r, "C": c0},
                    [Arrow("f", "L", "C", f), Arrow("g", "R", "C", g)],
                )
        if shape == "chain3":
            a, b, c0 = pick(), pick(), pick()
            f, g = _sample_arrow(rng, a, b), _sample_arrow(rng, b, c0)
            if f and g:
                return Diagram(
                    {"A": a, "B": b, "C": c0},
                    [Arrow("f", "A", "B", f), Arrow("g", "B", "C", g)],
                )
    raise RuntimeError(f"could not sample a {shape} diagram")


def _mutate_space(space: GBCSpace, rng):
    """One strict structural mutation, or None when the space admits none."""
    n = len(space.carrier)
    if n == 0:
        return None
    classes = [set(c.indices()) for c in components(space).classes]
    bounded = set(space.bounded.indices())
    kinds = []
    if len(classes) >= 2:
        kinds.append("merge")
    if any(len(c) >= 2 for c in classes):
        kinds.append("split")
    if any(not c <= bounded for c in classes):
        kinds.append("bound")
    if any(c <= bounded for c in classes):
        kinds.append("unbound")
    if not kinds:
        return None
    kind = kinds[rng.randrange(len(kinds))]
    if kind == "merge":
        i, j = rng.sample(range(len(classes)), 2)
        extra = Relation.from_pairs(
            space.carrier,
            [
                (
                    space.carrier.elements[min(classes[i])],
                    space.carrier.elements[min(classes[j])],
                )
            ],
        )
        e2 = equivalence_closure([space.entourage, extra], space.carrier)
        return GBCSpace(space.carrier, e2, space.bounded)
    if kind == "split":
        cls = rng.choice([c for c in classes if len(c) >= 2])
        x = min(cls)
        bits = space.entourage.bits
        for y in range(n):
            if y != x:
                bits &= ~(1 << x * n + y)
                bits &= ~(1 << y * n + x)
        return GBCSpace(space.carrier, Relation(space.carrier, bits), space.bounded)
    if kind == "bound":
        cls = rng.choice([c for c in classes if not c <= bounded])
        extra = sum(1 << i for i in cls)
        return GBCSpace(
            space.carrier,
            space.entourage,
            PointSet(space.carrier, space.bounded.bits | extra),
        )
    cls = rng.choice([c for c in classes if c <= bounded])
    mask = sum(1 << i for i in cls)
    return GBCSpace(
        space.carrier,
        space.entourage,
        PointSet(space.carrier, space.bounded.bits & ~mask),
    )


def _rebuild_candidate(d: Diagram, side: str, apex: GBCSpace, legs: dict):
    new_legs = {}
    for nm, leg in legs.items():
        if side == "limit":
            new_legs[nm] = Morphism(apex, d.objects[nm], leg.mapping)
        else:
            new_legs[nm] = Morphism(d.objects[nm], apex, leg.mapping)
    cls = Cone if side == "limit" else Cocone
    return cls(d, apex, new_legs)


def test_criterion_2_oracle_and_mutants():
    started = time.monotonic()
    rng = random.Random(24601)
    checked = 0
    for shape in SHAPES:
        if shape == "single":
            diagrams = [Diagram({"A": s}) for s in POOL]
        elif shape == "empty":
            diagrams = [Diagram({})]
        else:
            diagrams = [_sample_diagram(shape, rng) for _ in range(12)]
        for d in diagrams:
            for side, build in (("limit", limit), ("colimit", colimit)):
                space, cand = build(d)
                v = universal_property_check(cand, d, test_cap=3)
                assert v.ok, (shape, side, v.reason, v.witness)
                checked += 1
    accepted = 0
    outcomes = {"rejected": 0, "oracle_failed": 0}
    for shape in SHAPES:
        for draw in range(100):
            side = "limit" if draw % 2 == 0 else "colimit"
            d = _sample_diagram(shape, rng)
            space, cand = (limit if side == "limit" else colimit)(d)
            mutant = None
            broke_saturation = False
            for _ in range(40):
                try:
                    mutant = _mutate_space(space, rng)
                except IncompatibleStructures:
                    broke_saturation = True
                    break
                if mutant is not None:
                    break
                d = _sample_diagram(shape, rng)
                space, cand = (limit if side == "limit" else colimit)(d)
            if broke_saturation:
                outcomes["rejected"] += 1
                continue
            if mutant is None:
                assert shape == "empty" and side == "colimit"
                mutant = max_empty(Carrier(["spare"]))
            try:
                wrong = _rebuild_candidate(d, side, mutant, cand.legs)
            except (InvalidMorphism, IncompatibleStructures, ValueError):
                outcomes["rejected"] += 1
                continue
            v = universal_property_check(wrong, d, test_cap=3)
            if v.ok:
                accepted += 1
            else:
                outcomes["oracle_failed"] += 1
    elapsed = time.monotonic() - started
    _report(
        "criterion 2: oracle accepts constructions, rejects all mutants",
        accepted == 0 and elapsed < 300,
        f"{checked} constructions, 700 mutants "
        f"({outcomes['rejected']} rejected, {outcomes['oracle_failed']} "
        f"oracle-failed), {elapsed:.1f}s",
    )


# -- criterion 3 -----------------------------------------------------------


def test_criterion_3_final_object():
    final = max_empty(Carrier(["pt"]))
    three = enumerate_spaces(3)
    assert len(three) == 22
    for s in three:
        assert len(list(enumerate_morphisms(s, final))) == 1, s
    probe = max_empty(Carrier(["u"]))
    counterexamples = 0
    for n in range(4):
        for s in enumerate_spaces(n):
            if not s.classical:
                continue
            if len(s.carrier) == 0:
                assert len(list(enumerate_morphisms(probe, s))) == 0
            else:
                assert len(list(enumerate_morphisms(probe, s))) != 1
            counterexamples += 1
    _report(
        "criterion 3: one unbounded point is final, no classical space is",
        True,
        f"22 hom-sets of size one, {counterexamples} classical candidates refuted",
    )


# -- criterion 4 -----------------------------------------------------------


def test_criterion_4_glued_half_line_obstruction():
    v = sym_admissible(exa_N())
    assert not v.ok
    assert v.witness["preimage"] == SemilinearSet.naturals().describe()
    for n in range(9):
        assert finite_admissible(truncate_diagram(exa_N(), n)).ok, n
    _report(
        "criterion 4: glued half-line inadmissible with full preimage, "
        "every truncation admissible",
        True,
        "witness preimage is all of N; truncations 0..8 pass",
    )


# -- criterion 5 -----------------------------------------------------------


def test_criterion_5_symbolic_pushout_value():
    result = sym_pushout(ex_PO())
    ok = result == SymSpace(Triv(), Full())
    _report(
        "criterion 5: symbolic pushout is the trivially bounded coarse point",
        ok,
        f"got ({result.bornology_tag}, {result.coarse_tag})",
    )


# -- criterion 6 -----------------------------------------------------------


def test_criterion_6_classical_existence_and_preservation():
    classical = [
        s for n in range(4) for s in enumerate_spaces(n) if s.classical
    ]
    rep = exists_in_classical(Diagram({}), side="limit")
    assert not rep.exists
    diagrams = [Diagram({"A": a}) for a in classical]
    diagrams += [
        Diagram({"A": a, "B": b}) for a in classical for b in classical
    ]
    arrowed = 0
    for a in classical:
        for b in classical:
            for f in enumerate_morphisms(a, b):
                diagrams.append(
                    Diagram({"A": a, "B": b}, [Arrow("f", "A", "B", f)])
                )
                arrowed += 1
    for d in diagrams:
        for side in ("limit", "colimit"):
            rep = exists_in_classical(d, side=side)
            assert rep.exists, (side, d.objects)
            assert preservation_test(d, side=side).ok
    _report(
        "criterion 6: classical (co)limits exist iff the shape is nonempty "
        "and are preserved",
        True,
        f"empty shape refused, {len(diagrams)} diagrams "
        f"({arrowed} with an arrow) pass both sides",
    )


# -- criterion 7 -----------------------------------------------------------


def test_criterion_7_split_isomorphism():
    count = 0
    for n in range(5):
        for s in enumerate_spaces(n):
            rep = split(s)
            fwd = rep.to_parts.then(rep.from_parts)
            bwd = rep.from_parts.then(rep.to_parts)
            assert fwd.mapping == identity(s).mapping
            assert bwd.mapping == tuple(range(len(s.carrier)))
            assert rep.bounded_part.classical
            assert rep.unbounded_part.bounded.is_empty()
            count += 1
    _report(
        "criterion 7: every space splits as bounded plus unbounded part",
        True,
        f"{count} spaces up to four points, mutual inverses verified",
    )


# -- criterion 8 -----------------------------------------------------------


def test_criterion_8_flasque_half_and_excisive_covers():
    for n in range(5):
        for s in enumerate_spaces(n):
            half = split(s).unbounded_part
            v = is_flasque(half, witness=identity(half))
            assert v.ok, (n, v.reason)
            exc = is_coarsely_excisive(s, s.bounded, s.bounded.complement())
            assert exc.ok, (n, exc.reason, exc.witness)
    pool3 = [s for n in range(4) for s in enumerate_spaces(n)]
    pairs = 0
    for a in pool3:
        for b in pool3:
            space, legs = coproduct([a, b])
            y = PointSet(
                space.carrier, (1 << len(a.carrier)) - 1
            )
            v = is_coarsely_excisive(space, y, y.complement())
            assert v.ok, (len(a.carrier), len(b.carrier), v.witness)
            pairs += 1
    _report(
        "criterion 8: unbounded halves are flasque, natural covers are "
        "coarsely excisive",
        True,
        f"125 splits, {pairs} coproduct covers",
    )


# -- criterion 9 -----------------------------------------------------------


def test_criterion_9_fast_path_matches_full_quantification():
    started = time.monotonic()
    nice_checked = excisive_checked = 0
    for n in range(4):
        for s in enumerate_spaces(n):
            for bits in range(1 << n):
                subset = PointSet(s.carrier, bits)
                fast = is_nice(s, subset, exhaustive=False)
                full = is_nice(s, subset, exhaustive=True)
                assert fast.ok == full.ok, (n, bits)
                nice_checked += 1
            for ybits in range(1 << n):
                for zbits in range(1 << n):
                    y = PointSet(s.carrier, ybits)
                    z = PointSet(s.carrier, zbits)
                    fast = is_coarsely_excisive(s, y, z, exhaustive=False)
                    full = is_coarsely_excisive(s, y, z, exhaustive=True)
                    assert fast.ok == full.ok, (n, ybits, zbits)
                    excisive_checked += 1
    elapsed = time.monotonic() - started
    _report(
        "criterion 9: single-entourage fast paths agree with exhaustive "
        "quantification",
        elapsed < 180,
        f"{nice_checked} subsets, {excisive_checked} covers, {elapsed:.1f}s",
    )


# -- criterion 10 ----------------------------------------------------------


def test_criterion_10_units():
    bounded_pt = mk_space(1, classical=True)
    unbounded_pt = max_empty(Carrier(["u"]))
    count = 0
    for n in range(4):
        for s in enumerate_spaces(n):
            t = tensor(s, bounded_pt)
            into = Morphism(s, t, tuple(range(len(s.carrier))))
            assert is_isomorphism(into), ("tensor", n)
            space, legs = product([s, unbounded_pt])
            first = legs[0]
            assert first.is_bijective()
            assert first.inverse()
            count += 1
    _report(
        "criterion 10: bounded point is the tensor unit, unbounded point "
        "the product unit",
        True,
        f"{count} spaces up to three points",
    )
