"""Finite generalized bornological coarse spaces in normal form.

On a finite carrier a coarse structure is exactly the set of subrelations
of one equivalence relation E, and a generalized bornology is exactly the
powerset of one E-saturated region Xb.  A space therefore stores the pair
(E, Xb) plus an optional group action, and every membership or validation
question reduces to bit-mask containment.  Classicality (all singletons
bounded) is the derived condition Xb = carrier.
"""

from __future__ import annotations

import itertools
from dataclasses import dataclass
from typing import Callable, Iterable, Iterator, Sequence

from .errors import (
    CapExceeded,
    CarrierMismatch,
    IncompatibleStructures,
    InvalidMorphism,
    NonInvariantGenerator,
    NotAnEntourage,
)
from .relalg import (
    Carrier,
    PointSet,
    Relation,
    compose,
    equivalence_closure,
    inverse,
    restrict,
    thicken,
)

SPACE_ENUM_CAP = 4
MORPHISM_ENUM_CAP = 5


class GroupAction:
    """Action of a finitely generated group, given by generator permutations.

    Only the generators are stored; every invariance or orbit question is
    settled by closing under generators (a permutation's inverse fixes the
    same subsets, so generator invariance equals group invariance).
    """

    __slots__ = ("carrier", "generators")

    def __init__(self, carrier: Carrier, generators: Iterable):
        n = len(carrier)
        gens = []
        for g in generators:
            if isinstance(g, dict):
                perm = tuple(carrier.index(g[e]) for e in carrier.elements)
            else:
                images = tuple(g)
                if images and isinstance(images[0], int) and n and not all(
                    isinstance(e, int) for e in carrier.elements
                ):
                    perm = images
                else:
                    perm = tuple(carrier.index(x) for x in images)
            if len(perm) != n or sorted(perm) != list(range(n)):
                raise ValueError(f"not a permutation of the carrier: {g!r}")
            gens.append(perm)
        self.carrier = carrier
        self.generators = tuple(gens)

    def is_trivial(self) -> bool:
        ident = tuple(range(len(self.carrier)))
        return all(g == ident for g in self.generators)

    def permute_points(self, perm: tuple, s: PointSet) -> PointSet:
        bits = 0
        for i in s.indices():
            bits |= 1 << perm[i]
        return PointSet(self.carrier, bits)

    def permute_pairs(self, perm: tuple, r: Relation) -> Relation:
        n = len(self.carrier)
        bits = 0
        for i, j in r.index_pairs():
            bits |= 1 << perm[i] * n + perm[j]
        return Relation(self.carrier, bits)

    def invariant_set(self, s: PointSet) -> bool:
        return all(self.permute_points(g, s) == s for g in self.generators)

    def invariant_relation(self, r: Relation) -> bool:
        return all(self.permute_pairs(g, r) == r for g in self.generators)

    def orbit_points(self, s: PointSet) -> PointSet:
        """Closure of s under all generators: the full group orbit."""
        cur = s
        while True:
            nxt = cur
            for g in self.generators:
                nxt = nxt | self.permute_points(g, cur)
            if nxt == cur:
                return cur
            cur = nxt

    def pair_orbits(self, within: Relation) -> list[Relation]:
        """Orbits of the pairs of ``within`` under the group, in ascending
        order of their least packed bit."""
        n = len(self.carrier)
        seen = 0
        orbits = []
        bits = within.bits
        while bits:
            low = bits & -bits
            bits ^= low
            if low & seen:
                continue
            orbit = low
            while True:
                nxt = orbit
                for g in self.generators:
                    nxt |= self.permute_pairs(g, Relation(self.carrier, nxt)).bits
                if nxt == orbit:
                    break
                orbit = nxt
            orbit &= within.bits
            seen |= orbit
            orbits.append(Relation(self.carrier, orbit))
        return orbits

    def iter_elements(self, cap: int = 1000) -> Iterator[tuple]:
        """Lazily expand group elements as words in the generators, breadth
        first, stopping after ``cap`` distinct permutations."""
        ident = tuple(range(len(self.carrier)))
        seen = {ident}
        frontier = [ident]
        yield ident
        while frontier and len(seen) < cap:
            nxt = []
            for w in frontier:
                for g in self.generators:
                    e = tuple(g[i] for i in w)
                    if e not in seen:
                        seen.add(e)
                        nxt.append(e)
                        yield e
                        if len(seen) >= cap:
                            return
            frontier = nxt

    def __eq__(self, other) -> bool:
        return (
            isinstance(other, GroupAction)
            and self.carrier == other.carrier
            and self.generators == other.generators
        )

    def __hash__(self) -> int:
        return hash((self.carrier, self.generators))

    def __repr__(self) -> str:
        return f"GroupAction({len(self.generators)} generators)"


def _actions_match(a: GroupAction | None, b: GroupAction | None) -> bool:
    """Spaces share an action family when both are actionless or both carry
    the same number of generators (positional correspondence)."""
    if a is None or b is None:
        return True
    return len(a.generators) == len(b.generators)


class GBCSpace:
    """A generalized bornological coarse space on a finite carrier.

    ``entourage`` is the maximal entourage E (an equivalence relation) and
    ``bounded`` the maximal bounded region Xb (E-saturated).  The instance
    is immutable; all operations return fresh spaces.
    """

    __slots__ = ("carrier", "entourage", "bounded", "action")

    def __init__(
        self,
        carrier: Carrier,
        entourage: Relation,
        bounded: PointSet,
        action: GroupAction | None = None,
    ):
        if entourage.carrier != carrier or bounded.carrier != carrier:
            raise CarrierMismatch("entourage or bounded region over a different carrier")
        if not entourage.is_reflexive():
            raise IncompatibleStructures(
                "maximal entourage is not reflexive", {"missing": "diagonal"}
            )
        if not entourage.is_symmetric():
            raise IncompatibleStructures(
                "maximal entourage is not symmetric", {"missing": "inverses"}
            )
        if not entourage.is_transitive():
            raise IncompatibleStructures(
                "maximal entourage is not transitive", {"missing": "compositions"}
            )
        escape = thicken(entourage, bounded) - bounded
        if not escape.is_empty():
            x = next(escape.indices())
            partner = next(
                j for j in PointSet(carrier, entourage.row(x)).indices()
                if bounded.has_index(j)
            )
            raise IncompatibleStructures(
                "thickening the bounded region leaves it",
                {
                    "escaping_point": carrier.elements[x],
                    "bounded_point": carrier.elements[partner],
                    "entourage_pair": (carrier.elements[x], carrier.elements[partner]),
                },
            )
        if action is not None:
            if action.carrier != carrier:
                raise CarrierMismatch("action over a different carrier")
            for gi, g in enumerate(action.generators):
                if action.permute_pairs(g, entourage) != entourage:
                    raise NonInvariantGenerator(
                        "coarse structure is not action invariant",
                        {"generator": gi},
                    )
                if action.permute_points(g, bounded) != bounded:
                    raise NonInvariantGenerator(
                        "bornology is not action invariant", {"generator": gi}
                    )
        self.carrier = carrier
        self.entourage = entourage
        self.bounded = bounded
        self.action = action

    @property
    def classical(self) -> bool:
        """Locally bounded: every point is bounded, i.e. Xb = carrier."""
        return self.bounded == PointSet.full(self.carrier)

    @property
    def unbounded(self) -> PointSet:
        return self.bounded.complement()

    def entourage_member(self, u: Relation) -> bool:
        """u belongs to the coarse structure iff u is a subrelation of E."""
        return u <= self.entourage

    def bounded_member(self, b: PointSet) -> bool:
        """b is bounded iff b is contained in Xb."""
        return b <= self.bounded

    def __eq__(self, other) -> bool:
        return (
            isinstance(other, GBCSpace)
            and self.carrier == other.carrier
            and self.entourage == other.entourage
            and self.bounded == other.bounded
            and self.action == other.action
        )

    def __hash__(self) -> int:
        return hash((self.carrier, self.entourage, self.bounded, self.action))

    def __repr__(self) -> str:
        tag = "classical" if self.classical else f"bounded={list(self.bounded.members)}"
        return f"GBCSpace({list(self.carrier.elements)!r}, {tag})"


def from_generators(
    carrier: Carrier,
    coarse_generators: Sequence[Relation] = (),
    bounded_generators: Sequence[PointSet] = (),
    classical: bool = False,
    action: GroupAction | None = None,
) -> GBCSpace:
    """Build the space generated by the given entourages and bounded sets.

    E is the equivalence closure of the coarse generators, Xb the union of
    the bounded generators (the whole carrier when classical).  Raises
    IncompatibleStructures with a witness if thicken(E, Xb) escapes Xb.
    """
    e = equivalence_closure(list(coarse_generators), carrier)
    if classical:
        xb = PointSet.full(carrier)
    else:
        xb = PointSet.empty(carrier)
        for b in bounded_generators:
            xb = xb | b
    return GBCSpace(carrier, e, xb, action)


def min_min(carrier: Carrier, action: GroupAction | None = None) -> GBCSpace:
    """Discrete coarse structure, all (finite) sets bounded: classical."""
    return GBCSpace(carrier, Relation.diagonal(carrier), PointSet.full(carrier), action)


def min_max(carrier: Carrier, action: GroupAction | None = None) -> GBCSpace:
    """Discrete coarse structure with the maximal bornology; on a finite
    carrier this coincides with min_min."""
    return min_min(carrier, action)


def max_max(carrier: Carrier, action: GroupAction | None = None) -> GBCSpace:
    """One coarse component, everything bounded: classical."""
    return GBCSpace(carrier, Relation.full(carrier), PointSet.full(carrier), action)


def max_empty(carrier: Carrier, action: GroupAction | None = None) -> GBCSpace:
    """One coarse component, nothing bounded: the generalized pattern."""
    return GBCSpace(carrier, Relation.full(carrier), PointSet.empty(carrier), action)


class Morphism:
    """A proper controlled map between spaces.  Construction validates; an
    invalid map raises InvalidMorphism listing every violation."""

    __slots__ = ("dom", "cod", "mapping", "equivariant")

    def __init__(
        self,
        dom: GBCSpace,
        cod: GBCSpace,
        mapping: Sequence[int],
        require_equivariant: bool | None = None,
    ):
        m = tuple(mapping)
        violations = morphism_violations(dom, cod, m, require_equivariant)
        eq_viol = [v for v in violations if v["kind"] == "not_equivariant"]
        rest = [v for v in violations if v["kind"] != "not_equivariant"]
        required = _equivariance_required(dom, cod, require_equivariant)
        fatal = rest + (eq_viol if required else [])
        if fatal:
            raise InvalidMorphism(f"map fails validation: {fatal[0]['kind']}", fatal)
        if _has_actions(dom, cod):
            equivariant = not eq_viol
        else:
            equivariant = dom.action is None and cod.action is None
        self.dom = dom
        self.cod = cod
        self.mapping = m
        self.equivariant = equivariant

    @classmethod
    def from_table(
        cls,
        dom: GBCSpace,
        cod: GBCSpace,
        table: dict | Callable,
        require_equivariant: bool | None = None,
    ) -> "Morphism":
        if callable(table):
            mapping = tuple(cod.carrier.index(table(x)) for x in dom.carrier)
        else:
            mapping = tuple(cod.carrier.index(table[x]) for x in dom.carrier)
        return cls(dom, cod, mapping, require_equivariant)

    def __call__(self, x):
        return self.cod.carrier.elements[self.mapping[self.dom.carrier.index(x)]]

    def as_table(self) -> dict:
        return {
            x: self.cod.carrier.elements[self.mapping[i]]
            for i, x in enumerate(self.dom.carrier.elements)
        }

    def then(self, other: "Morphism") -> "Morphism":
        """Composite x -> other(self(x)); codomains must chain."""
        if self.cod != other.dom:
            raise CarrierMismatch("composition endpoints do not match")
        return Morphism(
            self.dom, other.cod, tuple(other.mapping[i] for i in self.mapping)
        )

    def is_bijective(self) -> bool:
        return len(self.dom.carrier) == len(self.cod.carrier) and len(
            set(self.mapping)
        ) == len(self.mapping)

    def inverse(self) -> "Morphism":
        """Inverse morphism of a bijection; raises InvalidMorphism when the
        set inverse fails properness or controlledness."""
        if not self.is_bijective():
            raise InvalidMorphism("map is not bijective", [{"kind": "not_bijective"}])
        inv = [0] * len(self.mapping)
        for i, j in enumerate(self.mapping):
            inv[j] = i
        return Morphism(self.cod, self.dom, tuple(inv))

    def image(self) -> PointSet:
        bits = 0
        for j in self.mapping:
            bits |= 1 << j
        return PointSet(self.cod.carrier, bits)

    def __eq__(self, other) -> bool:
        return (
            isinstance(other, Morphism)
            and self.dom == other.dom
            and self.cod == other.cod
            and self.mapping == other.mapping
        )

    def __hash__(self) -> int:
        return hash((self.dom, self.cod, self.mapping))

    def __repr__(self) -> str:
        return f"Morphism({self.as_table()!r})"


def _has_actions(dom: GBCSpace, cod: GBCSpace) -> bool:
    return dom.action is not None and cod.action is not None


def _equivariance_required(
    dom: GBCSpace, cod: GBCSpace, require: bool | None
) -> bool:
    """Default policy: equivariance is enforced exactly when both spaces
    carry actions and at least one is nontrivial."""
    if require is not None:
        return require
    if not _has_actions(dom, cod):
        return False
    return not (dom.action.is_trivial() and cod.action.is_trivial())


def morphism_violations(
    dom: GBCSpace,
    cod: GBCSpace,
    mapping: Sequence[int],
    require_equivariant: bool | None = None,
) -> list[dict]:
    """Every way the map fails to be a morphism: properness (a bounded point
    whose fiber meets the unbounded region), controlledness (an entourage
    pair whose image leaves E), equivariance (a generator and point where
    the square does not commute)."""
    m = tuple(mapping)
    nd = len(dom.carrier)
    nc = len(cod.carrier)
    out = []
    if len(m) != nd:
        raise ValueError("mapping length does not match the domain carrier")
    if any(j < 0 or j >= nc for j in m):
        raise ValueError("mapping hits indices outside the codomain carrier")
    for i in range(nd):
        if cod.bounded.has_index(m[i]) and not dom.bounded.has_index(i):
            out.append(
                {
                    "kind": "not_proper",
                    "bounded_point": cod.carrier.elements[m[i]],
                    "preimage_point": dom.carrier.elements[i],
                }
            )
    for i, j in dom.entourage.index_pairs():
        if not cod.entourage.has_index(m[i], m[j]):
            out.append(
                {
                    "kind": "not_controlled",
                    "pair": (dom.carrier.elements[i], dom.carrier.elements[j]),
                    "image": (
                        cod.carrier.elements[m[i]],
                        cod.carrier.elements[m[j]],
                    ),
                }
            )
    if _has_actions(dom, cod):
        if not _actions_match(dom.action, cod.action):
            out.append({"kind": "not_equivariant", "generator": None, "point": None})
        else:
            for gi, (gd, gc) in enumerate(
                zip(dom.action.generators, cod.action.generators)
            ):
                for i in range(nd):
                    if m[gd[i]] != gc[m[i]]:
                        out.append(
                            {
                                "kind": "not_equivariant",
                                "generator": gi,
                                "point": dom.carrier.elements[i],
                            }
                        )
                        break
    return out


def mapping_is_valid(dom: GBCSpace, cod: GBCSpace, m: tuple) -> bool:
    """Fast boolean morphism check on an index tuple, no witness built."""
    bc = cod.bounded.bits
    bd = dom.bounded.bits
    for i in range(len(m)):
        if bc >> m[i] & 1 and not bd >> i & 1:
            return False
    ec = cod.entourage
    for i, j in dom.entourage.index_pairs():
        if not ec.has_index(m[i], m[j]):
            return False
    if _has_actions(dom, cod) and _actions_match(dom.action, cod.action):
        for gd, gc in zip(dom.action.generators, cod.action.generators):
            for i in range(len(m)):
                if m[gd[i]] != gc[m[i]]:
                    return False
    return True


def validate_morphism(
    dom: GBCSpace,
    cod: GBCSpace,
    table: dict | Callable | Sequence[int],
    require_equivariant: bool | None = None,
) -> Morphism:
    """Validate a map given as element table, callable or index tuple."""
    if isinstance(table, (dict,)) or callable(table):
        return Morphism.from_table(dom, cod, table, require_equivariant)
    return Morphism(dom, cod, table, require_equivariant)


def identity(space: GBCSpace) -> Morphism:
    return Morphism(space, space, tuple(range(len(space.carrier))))


def is_isomorphism(f: Morphism) -> bool:
    if not f.is_bijective():
        return False
    try:
        f.inverse()
    except InvalidMorphism:
        return False
    return True


def enumerate_morphisms(
    dom: GBCSpace, cod: GBCSpace, cap: int = MORPHISM_ENUM_CAP
) -> Iterator[Morphism]:
    """All morphisms dom -> cod in lexicographic mapping order.  When both
    spaces carry nontrivial actions only equivariant maps are produced."""
    if max(len(dom.carrier), len(cod.carrier)) > cap:
        raise CapExceeded(
            f"hom-set enumeration capped at carrier size {cap}",
            cap=cap,
            hint="pass a larger cap or use --search-cap",
        )
    nd, nc = len(dom.carrier), len(cod.carrier)
    if nd == 0:
        yield Morphism(dom, cod, ())
        return
    if nc == 0:
        return
    for m in itertools.product(range(nc), repeat=nd):
        if mapping_is_valid(dom, cod, m):
            yield Morphism(dom, cod, m)


def pullback_structure(
    table: dict | Callable,
    target: GBCSpace,
    carrier: Carrier,
    action: GroupAction | None = None,
) -> GBCSpace:
    """Structure induced on ``carrier`` by a map into ``target``: largest
    entourage is the pairwise preimage of E, bounded region the preimage of
    Xb.  Compatibility is automatic.  With an action given, the map must be
    equivariant for it."""
    if callable(table):
        m = tuple(target.carrier.index(table(y)) for y in carrier)
    else:
        m = tuple(target.carrier.index(table[y]) for y in carrier)
    n = len(carrier)
    ebits = 0
    for i in range(n):
        for j in range(n):
            if target.entourage.has_index(m[i], m[j]):
                ebits |= 1 << i * n + j
    xbits = 0
    for i in range(n):
        if target.bounded.has_index(m[i]):
            xbits |= 1 << i
    if action is not None:
        cod_gens = (
            target.action.generators
            if target.action is not None
            else tuple(tuple(range(len(target.carrier))) for _ in action.generators)
        )
        if len(cod_gens) != len(action.generators):
            raise NonInvariantGenerator(
                "action generator counts disagree", {"generator": None}
            )
        for gi, (gd, gc) in enumerate(zip(action.generators, cod_gens)):
            for i in range(n):
                if m[gd[i]] != gc[m[i]]:
                    raise NonInvariantGenerator(
                        "map is not equivariant for the given action",
                        {"generator": gi, "point": carrier.elements[i]},
                    )
    return GBCSpace(carrier, Relation(carrier, ebits), PointSet(carrier, xbits), action)


def subspace(space: GBCSpace, members: PointSet) -> tuple[GBCSpace, Morphism]:
    """Subspace on ``members`` with the induced structure plus its inclusion.
    With an action present the subset must be invariant."""
    if members.carrier != space.carrier:
        raise CarrierMismatch("subset over a different carrier")
    sub_action = None
    sub_carrier = Carrier(members.members)
    if space.action is not None:
        if not space.action.invariant_set(members):
            raise NonInvariantGenerator(
                "subspace carrier is not action invariant", {"members": members.members}
            )
        idx = {e: k for k, e in enumerate(sub_carrier.elements)}
        gens = []
        for g in space.action.generators:
            gens.append(
                tuple(
                    idx[space.carrier.elements[g[space.carrier.index(e)]]]
                    for e in sub_carrier.elements
                )
            )
        sub_action = GroupAction(sub_carrier, gens)
    sub = pullback_structure(lambda y: y, space, sub_carrier, sub_action)
    incl = Morphism(
        sub, space, tuple(space.carrier.index(e) for e in sub_carrier.elements)
    )
    return sub, incl


def _combine_actions(
    left: GroupAction | None,
    right: GroupAction | None,
    carrier: Carrier,
    pairs: list[tuple[int, int]],
    left_n: int,
    right_n: int,
) -> GroupAction | None:
    """Componentwise action on a product-style carrier whose points are
    indexed by ``pairs`` of factor indices.  An actionless factor is acted
    on trivially."""
    if left is None and right is None:
        return None
    k = len(left.generators) if left is not None else len(right.generators)
    if left is not None and right is not None and len(right.generators) != k:
        raise NonInvariantGenerator("action generator counts disagree", {})
    lgens = left.generators if left is not None else (tuple(range(left_n)),) * k
    rgens = right.generators if right is not None else (tuple(range(right_n)),) * k
    pos = {p: i for i, p in enumerate(pairs)}
    gens = []
    for gl, gr in zip(lgens, rgens):
        gens.append(tuple(pos[(gl[i], gr[j])] for i, j in pairs))
    return GroupAction(carrier, gens)


def tensor(left: GBCSpace, right: GBCSpace) -> GBCSpace:
    """Monoidal product: componentwise entourages, bounded region the set of
    points bounded in every coordinate (unlike the categorical product,
    where one bounded coordinate suffices)."""
    nl, nr = len(left.carrier), len(right.carrier)
    pairs = [(i, j) for i in range(nl) for j in range(nr)]
    carrier = Carrier(
        (left.carrier.elements[i], right.carrier.elements[j]) for i, j in pairs
    )
    n = len(carrier)
    ebits = 0
    for p, (i, j) in enumerate(pairs):
        for q, (k, l) in enumerate(pairs):
            if left.entourage.has_index(i, k) and right.entourage.has_index(j, l):
                ebits |= 1 << p * n + q
    xbits = 0
    for p, (i, j) in enumerate(pairs):
        if left.bounded.has_index(i) and right.bounded.has_index(j):
            xbits |= 1 << p
    action = _combine_actions(left.action, right.action, carrier, pairs, nl, nr)
    return GBCSpace(carrier, Relation(carrier, ebits), PointSet(carrier, xbits), action)


@dataclass(frozen=True)
class ComponentReport:
    classes: tuple
    count: int
    connected: bool


def components(space: GBCSpace) -> ComponentReport:
    """Coarse components: the classes of E, ordered by least member."""
    n = len(space.carrier)
    seen = 0
    classes = []
    for i in range(n):
        if seen >> i & 1:
            continue
        row = space.entourage.row(i)
        seen |= row
        classes.append(PointSet(space.carrier, row))
    return ComponentReport(tuple(classes), len(classes), len(classes) <= 1)


@dataclass(frozen=True)
class SplitReport:
    bounded_part: GBCSpace
    unbounded_part: GBCSpace
    to_parts: Morphism
    from_parts: Morphism


def split(space: GBCSpace) -> SplitReport:
    """Decompose X as the coproduct of its all-bounded and all-unbounded
    regions; every coarse component lies entirely in one of the two, so the
    canonical comparison maps are mutually inverse isomorphisms."""
    from .limits import coproduct

    xb_space, _ = subspace(space, space.bounded)
    xh_space, _ = subspace(space, space.unbounded)
    cop, _legs = coproduct([xb_space, xh_space])
    table_to = {}
    for e in space.carrier.elements:
        tag = 0 if space.bounded.has(e) else 1
        table_to[e] = (tag, e)
    to_parts = Morphism.from_table(space, cop, table_to)
    from_parts = Morphism.from_table(cop, space, lambda p: p[1])
    return SplitReport(xb_space, xh_space, to_parts, from_parts)


def restrict_entourage(space: GBCSpace, u: Relation) -> GBCSpace:
    """X_U: the same carrier and bornology, coarse structure generated by a
    single entourage U of X (invariant when an action is present)."""
    if not space.entourage_member(u):
        raise NotAnEntourage("relation is not an entourage of the space")
    if space.action is not None and not space.action.invariant_relation(u):
        raise NonInvariantGenerator("entourage is not action invariant", {})
    e = equivalence_closure([u], space.carrier)
    return GBCSpace(space.carrier, e, space.bounded, space.action)


def iter_partitions(n: int) -> Iterator[tuple[int, ...]]:
    """Set partitions of range(n) as restricted-growth strings, in
    lexicographic order."""
    if n == 0:
        yield ()
        return
    a = [0] * n

    def rec(i: int, mx: int) -> Iterator[tuple[int, ...]]:
        if i == n:
            yield tuple(a)
            return
        for v in range(mx + 2):
            a[i] = v
            yield from rec(i + 1, max(mx, v))

    yield from rec(0, -1)


def enumerate_spaces(n: int, cap: int = SPACE_ENUM_CAP) -> list[GBCSpace]:
    """Every space on the canonical carrier 0..n-1, in deterministic order:
    partitions (as restricted-growth strings) crossed with their saturated
    subsets (by ascending class mask)."""
    if n > cap:
        raise CapExceeded(
            f"space enumeration capped at carrier size {cap}",
            cap=cap,
            hint="raise the cap argument",
        )
    carrier = Carrier(range(n))
    out = []
    for rgs in iter_partitions(n):
        k = max(rgs) + 1 if rgs else 0
        class_bits = [0] * k
        for i, c in enumerate(rgs):
            class_bits[c] |= 1 << i
        ebits = 0
        for i in range(n):
            for j in range(n):
                if rgs[i] == rgs[j]:
                    ebits |= 1 << i * n + j
        e = Relation(carrier, ebits)
        for mask in range(1 << k):
            xbits = 0
            for c in range(k):
                if mask >> c & 1:
                    xbits |= class_bits[c]
            out.append(GBCSpace(carrier, e, PointSet(carrier, xbits)))
    return out
