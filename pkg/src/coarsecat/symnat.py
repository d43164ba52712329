"""Symbolic bornological coarse structures on the natural numbers.

A closed-world catalog covers the structures of the motivating infinite
counterexamples: four bornology tags (Fin, All, Triv, FinCap), four coarse
tags (Diag, Full, Band, FinGen), eventually affine self maps of N, and
semilinear subsets of N that are closed under every thickening the
evaluators perform.  All predicates reduce to finite rule tables; inputs
outside the catalog fail loudly instead of being approximated.
"""

from __future__ import annotations

import math
from dataclasses import dataclass

from .errors import (
    CarrierMismatch,
    NonClassicalInput,
    UnsupportedCombination,
    UnsupportedDiagram,
    Verdict,
)
from .relalg import Carrier, PointSet, Relation


def _canonical_semilinear(points, progressions):
    """Unique normal form of a finite union of points and progressions.

    Common period L = lcm of the inputs, one progression per eventual
    residue; the period is then reduced to the minimal divisor of L under
    which the eventual residue set is shift invariant (the true eventual
    period of the set, so presentations of equal sets normalize equally),
    each progression start is walked down through covered points, and the
    finite part keeps exactly the members below their residue's start.
    """
    pts = set()
    for p in points:
        if not isinstance(p, int) or p < 0:
            raise ValueError("semilinear points must be naturals")
        pts.add(p)
    progs = []
    for s, d in progressions:
        if not (isinstance(s, int) and isinstance(d, int)) or s < 0 or d < 1:
            raise ValueError("progression needs a natural start and period >= 1")
        progs.append((s, d))
    if not progs:
        return frozenset(pts), ()
    big = math.lcm(*[d for _, d in progs])
    start_by_res: dict[int, int] = {}
    for s, d in progs:
        for k in range(big // d):
            st = s + k * d
            r = st % big
            start_by_res[r] = min(start_by_res.get(r, st), st)
    for r in list(start_by_res):
        st = start_by_res[r]
        while st - big >= 0 and st - big in pts:
            st -= big
        start_by_res[r] = st
    pts = {x for x in pts if x % big not in start_by_res or x < start_by_res[x % big]}
    residues = set(start_by_res)
    period = big
    for d in range(1, big + 1):
        if big % d == 0 and all((r + d) % big in residues for r in residues):
            period = d
            break

    def in_union(z: int) -> bool:
        if z in pts:
            return True
        r = z % big
        return r in start_by_res and z >= start_by_res[r]

    tails = []
    for rho in sorted({r % period for r in residues}):
        lifts = [r for r in residues if r % period == rho]
        start = max(start_by_res[r] for r in lifts)
        while start - period >= 0 and in_union(start - period):
            start -= period
        tails.append((start, period))
        for r in lifts:
            z = start_by_res[r]
            while z < start:
                pts.add(z)
                z += big
        pts = {x for x in pts if x < start or (x - start) % period != 0}
    return frozenset(pts), tuple(sorted(tails))


@dataclass(frozen=True)
class SemilinearSet:
    """Finite set of naturals plus finitely many arithmetic progressions,
    kept in a canonical form so that structural equality is set equality."""

    finite_part: frozenset = frozenset()
    tails: tuple = ()

    def __post_init__(self):
        fin, tl = _canonical_semilinear(self.finite_part, self.tails)
        object.__setattr__(self, "finite_part", fin)
        object.__setattr__(self, "tails", tl)

    @staticmethod
    def empty() -> "SemilinearSet":
        return SemilinearSet()

    @staticmethod
    def of(points) -> "SemilinearSet":
        return SemilinearSet(frozenset(points), ())

    @staticmethod
    def naturals() -> "SemilinearSet":
        return SemilinearSet(frozenset(), ((0, 1),))

    def contains(self, x: int) -> bool:
        if x in self.finite_part:
            return True
        return any(x >= s and (x - s) % d == 0 for s, d in self.tails)

    @property
    def is_empty(self) -> bool:
        return not self.finite_part and not self.tails

    @property
    def is_finite(self) -> bool:
        return not self.tails

    def union(self, other: "SemilinearSet") -> "SemilinearSet":
        return SemilinearSet(
            self.finite_part | other.finite_part, self.tails + other.tails
        )

    __or__ = union

    def subset_of(self, other: "SemilinearSet") -> bool:
        return self.union(other) == other

    def affine_image(self, a: int, b: int) -> "SemilinearSet":
        """Image under x -> a*x + b."""
        if self.is_empty:
            return self
        if a == 0:
            return SemilinearSet.of([b])
        pts = {a * p + b for p in self.finite_part}
        progs = [(a * s + b, a * d) for s, d in self.tails]
        return SemilinearSet(frozenset(pts), tuple(progs))

    def affine_preimage(self, a: int, b: int, low: int = 0) -> "SemilinearSet":
        """All x >= low with a*x + b in the set."""
        if a == 0:
            if self.contains(b):
                return SemilinearSet(frozenset(), ((low, 1),))
            return SemilinearSet.empty()
        pts = set()
        for v in self.finite_part:
            if v >= b and (v - b) % a == 0 and (v - b) // a >= low:
                pts.add((v - b) // a)
        progs = []
        for s, d in self.tails:
            g = math.gcd(a, d)
            if (s - b) % g != 0:
                continue
            dd = d // g
            x0 = (pow(a // g, -1, dd) * ((s - b) // g)) % dd if dd > 1 else 0
            lo = low
            if s > b:
                lo = max(lo, -((b - s) // a))
            start = lo + (x0 - lo) % dd
            progs.append((start, dd))
        return SemilinearSet(frozenset(pts), tuple(progs))

    def band_thicken(self, r: int) -> "SemilinearSet":
        """All points within distance r of the set."""
        pts = set()
        for p in self.finite_part:
            pts.update(range(max(0, p - r), p + r + 1))
        progs = []
        for s, d in self.tails:
            for delta in range(-r, r + 1):
                ns = s + delta
                progs.append((ns if ns >= 0 else ns % d, d))
        return SemilinearSet(frozenset(pts), tuple(progs))

    def members_below(self, h: int) -> list:
        out = {p for p in self.finite_part if p < h}
        for s, d in self.tails:
            out.update(range(s, h, d))
        return sorted(out)

    def describe(self) -> dict:
        return {
            "finite": sorted(self.finite_part),
            "progressions": [list(t) for t in self.tails],
        }


class BornTag:
    __slots__ = ()


@dataclass(frozen=True)
class Fin(BornTag):
    """All finite subsets of N."""


@dataclass(frozen=True)
class All(BornTag):
    """The full powerset of N."""


@dataclass(frozen=True)
class Triv(BornTag):
    """Only the empty set is bounded."""


@dataclass(frozen=True)
class FinCap(BornTag):
    """All subsets of one fixed finite set."""

    points: frozenset

    def __post_init__(self):
        pts = frozenset(self.points)
        if any(not isinstance(p, int) or p < 0 for p in pts):
            raise ValueError("FinCap needs a finite set of naturals")
        object.__setattr__(self, "points", pts)


class CoarseTag:
    __slots__ = ()


@dataclass(frozen=True)
class Diag(CoarseTag):
    """Subsets of the diagonal."""


@dataclass(frozen=True)
class Full(CoarseTag):
    """All subsets of N x N."""


@dataclass(frozen=True)
class Band(CoarseTag):
    """Generated by the metric entourages U_r = {(x, y) : |x - y| < r}."""


@dataclass(frozen=True)
class FinGen(CoarseTag):
    """Generated by the diagonal and one finite relation; the normal form
    stores the equivalence classes of size at least two of its closure."""

    classes: tuple

    def __post_init__(self):
        seen: set[int] = set()
        cls = []
        for c in self.classes:
            fc = frozenset(c)
            if len(fc) < 2:
                raise ValueError("FinGen classes must have at least two points")
            if any(not isinstance(p, int) or p < 0 for p in fc):
                raise ValueError("FinGen classes must contain naturals")
            if seen & fc:
                raise ValueError("FinGen classes must be disjoint")
            seen |= fc
            cls.append(fc)
        object.__setattr__(self, "classes", tuple(sorted(cls, key=min)))

    def class_of(self, x: int) -> frozenset:
        for c in self.classes:
            if x in c:
                return c
        return frozenset([x])

    def related(self, x: int, y: int) -> bool:
        return x == y or any(x in c and y in c for c in self.classes)


def fingen(pairs) -> CoarseTag:
    """Coarse tag generated by finitely many pairs: Diag when the kernel is
    trivial, otherwise FinGen with merged classes."""
    parent: dict[int, int] = {}

    def find(x: int) -> int:
        parent.setdefault(x, x)
        while parent[x] != x:
            parent[x] = parent[parent[x]]
            x = parent[x]
        return x

    for a, b in pairs:
        ra, rb = find(a), find(b)
        if ra != rb:
            parent[max(ra, rb)] = min(ra, rb)
    groups: dict[int, set] = {}
    for x in parent:
        groups.setdefault(find(x), set()).add(x)
    classes = [frozenset(g) for g in groups.values() if len(g) >= 2]
    if not classes:
        return Diag()
    return FinGen(tuple(classes))


def _canon_born(tag: BornTag) -> BornTag:
    if isinstance(tag, FinCap) and not tag.points:
        return Triv()
    return tag


def _canon_coarse(tag: CoarseTag) -> CoarseTag:
    if isinstance(tag, FinGen) and not tag.classes:
        return Diag()
    return tag


def _fingen_escape(tag: FinGen, cap: frozenset):
    """A point of the cap whose kernel class leaves it, or None."""
    for x in sorted(cap):
        if not tag.class_of(x) <= cap:
            return x
    return None


@dataclass(frozen=True)
class SymSpace:
    """A catalog bornology and coarse structure on N; the pair must thicken
    compatibly: Diag pairs with everything, Full only with All and Triv
    (the full thickening of any nonempty set is N), Band with everything
    of unbounded capacity except fixed finite caps, FinGen with a cap only
    when the cap is saturated under its kernel classes."""

    bornology_tag: BornTag
    coarse_tag: CoarseTag

    def __post_init__(self):
        born = _canon_born(self.bornology_tag)
        coarse = _canon_coarse(self.coarse_tag)
        object.__setattr__(self, "bornology_tag", born)
        object.__setattr__(self, "coarse_tag", coarse)
        if isinstance(coarse, Full) and isinstance(born, (Fin, FinCap)):
            raise UnsupportedCombination(
                "the full thickening of a nonempty bounded set is all of N, "
                "which this bornology does not contain"
            )
        if isinstance(coarse, Band) and isinstance(born, FinCap):
            raise UnsupportedCombination(
                "band thickenings escape every fixed finite cap"
            )
        if isinstance(coarse, FinGen) and isinstance(born, FinCap):
            esc = _fingen_escape(coarse, born.points)
            if esc is not None:
                raise UnsupportedCombination(
                    f"the kernel class of {esc} leaves the cap, so its "
                    "thickening is unbounded"
                )

    @property
    def classical(self) -> bool:
        return isinstance(self.bornology_tag, (Fin, All))

    def bounded_contains(self, s: SemilinearSet) -> bool:
        b = self.bornology_tag
        if isinstance(b, All):
            return True
        if isinstance(b, Triv):
            return s.is_empty
        if isinstance(b, Fin):
            return s.is_finite
        return s.is_finite and s.finite_part <= b.points

    def describe(self) -> dict:
        b = self.bornology_tag
        c = self.coarse_tag
        if isinstance(b, FinCap):
            born = {"tag": "FinCap", "points": sorted(b.points)}
        else:
            born = {"tag": type(b).__name__}
        if isinstance(c, FinGen):
            coarse = {"tag": "FinGen", "classes": sorted(sorted(cl) for cl in c.classes)}
        else:
            coarse = {"tag": type(c).__name__}
        return {"bornology": born, "coarse": coarse}


@dataclass(frozen=True)
class SymMap:
    """Eventually affine self map of N: explicit values on [0, N), then
    x -> a*x + b.  The threshold is canonical: trailing exceptions that
    already agree with the tail are absorbed into it."""

    exceptions: tuple
    tail: tuple

    def __post_init__(self):
        exc = tuple(self.exceptions)
        n, a, b = self.tail
        if n != len(exc):
            raise ValueError("exceptions must cover exactly [0, threshold)")
        if a < 0 or b < 0 or any(not isinstance(v, int) or v < 0 for v in exc):
            raise ValueError("symbolic maps send naturals to naturals")
        while exc and exc[-1] == a * (len(exc) - 1) + b:
            exc = exc[:-1]
        object.__setattr__(self, "exceptions", exc)
        object.__setattr__(self, "tail", (len(exc), a, b))

    @staticmethod
    def identity() -> "SymMap":
        return SymMap((), (0, 1, 0))

    @staticmethod
    def constant(value: int) -> "SymMap":
        return SymMap((), (0, 0, value))

    @property
    def is_identity(self) -> bool:
        return self.tail == (0, 1, 0)

    @property
    def slope(self) -> int:
        return self.tail[1]

    def apply(self, x: int) -> int:
        n, a, b = self.tail
        if x < n:
            return self.exceptions[x]
        return a * x + b

    def image(self) -> SemilinearSet:
        n, a, b = self.tail
        tail_img = SemilinearSet(frozenset(), ((n, 1),)).affine_image(a, b)
        return SemilinearSet.of(self.exceptions) | tail_img

    @property
    def is_constant(self) -> bool:
        n, a, b = self.tail
        return a == 0 and all(v == b for v in self.exceptions)

    def preimage(self, s: SemilinearSet) -> SemilinearSet:
        n, a, b = self.tail
        pts = {x for x in range(n) if s.contains(self.exceptions[x])}
        return SemilinearSet.of(pts) | s.affine_preimage(a, b, low=n)

    def fiber(self, y: int) -> SemilinearSet:
        return self.preimage(SemilinearSet.of([y]))

    def describe(self) -> dict:
        return {"exceptions": list(self.exceptions), "tail": list(self.tail)}


def _distinct_image_pair(f: SymMap):
    """Two arguments with different values, or None for constant maps.
    Any non-constant map in this class differs from f(0) by x = N + 1."""
    base = f.apply(0)
    for x in range(1, f.tail[0] + 2):
        if f.apply(x) != base:
            return (0, x)
    return None


def validate_sym_morphism(dom: SymSpace, cod: SymSpace, f: SymMap) -> Verdict:
    """Decide properness and controlledness of f: dom -> cod by finite rule
    tables over the structure tags.

    Controlled (checked on generators): out of Diag or into Full is free;
    Band to Band holds for every eventually affine map (tail displacement
    is slope bounded); out of Full or Band into Diag needs a constant map,
    into Band a finite image, into FinGen an image inside one kernel class;
    out of FinGen only the finitely many kernel pairs are pushed.

    Proper (checked on a generating family of the codomain bornology):
    into Triv is free, out of All is free; into All from anything smaller
    fails on B = N; into Fin needs finite fibers, i.e. tail slope >= 1 and
    a dominating bornology; into FinCap reduces to one semilinear preimage
    computation.
    """
    violations = []

    dc, cc = dom.coarse_tag, cod.coarse_tag
    if isinstance(dc, Diag) or isinstance(cc, Full):
        pass
    elif isinstance(dc, (Full, Band)):
        if isinstance(cc, Band):
            if isinstance(dc, Full) and f.slope > 0:
                violations.append({
                    "kind": "not_controlled",
                    "entourage": "N x N",
                    "obstruction": "the image contains an unbounded progression",
                })
        elif isinstance(cc, Diag):
            pair = _distinct_image_pair(f)
            if pair is not None:
                violations.append({
                    "kind": "not_controlled",
                    "entourage": "N x N" if isinstance(dc, Full) else "U_r",
                    "pair": list(pair),
                    "image": [f.apply(pair[0]), f.apply(pair[1])],
                })
        else:
            ok = f.slope == 0
            if ok:
                img = sorted({f.apply(x) for x in range(f.tail[0] + 1)})
                ok = all(cc.related(x, y) for x in img for y in img)
            if not ok:
                pair = _distinct_image_pair(f)
                violations.append({
                    "kind": "not_controlled",
                    "entourage": "N x N" if isinstance(dc, Full) else "U_r",
                    "obstruction": "image pairs leave the finite kernel",
                    "pair": list(pair) if pair else None,
                })
    else:
        for cls in dc.classes:
            for x in sorted(cls):
                for y in sorted(cls):
                    if x >= y:
                        continue
                    fx, fy = f.apply(x), f.apply(y)
                    bad = (
                        fx != fy
                        if isinstance(cc, Diag)
                        else not cc.related(fx, fy) if isinstance(cc, FinGen) else False
                    )
                    if bad:
                        violations.append({
                            "kind": "not_controlled",
                            "entourage": "kernel pair",
                            "pair": [x, y],
                            "image": [fx, fy],
                        })

    db, cb = dom.bornology_tag, cod.bornology_tag
    if isinstance(cb, Triv) or isinstance(db, All):
        pass
    elif isinstance(cb, All):
        violations.append({
            "kind": "not_proper",
            "bounded_set": SemilinearSet.naturals().describe(),
            "preimage": SemilinearSet.naturals().describe(),
        })
    elif isinstance(cb, Fin):
        if isinstance(db, Fin):
            if f.slope == 0:
                y = f.tail[2]
                violations.append({
                    "kind": "not_proper",
                    "bounded_set": [y],
                    "preimage": f.fiber(y).describe(),
                })
        else:
            y = f.apply(0)
            violations.append({
                "kind": "not_proper",
                "bounded_set": [y],
                "preimage": f.fiber(y).describe(),
            })
    else:
        pre = f.preimage(SemilinearSet.of(cb.points))
        if isinstance(db, Fin):
            ok = pre.is_finite
        elif isinstance(db, Triv):
            ok = pre.is_empty
        else:
            ok = pre.is_finite and set(pre.finite_part) <= db.points
        if not ok:
            violations.append({
                "kind": "not_proper",
                "bounded_set": sorted(cb.points),
                "preimage": pre.describe(),
            })

    if violations:
        kinds = sorted({v["kind"] for v in violations})
        return Verdict(False, reason=" and ".join(kinds), witness=violations)
    return Verdict(True, reason="proper and controlled")


@dataclass(frozen=True)
class SymArrow:
    name: str
    src: str
    dst: str
    map: SymMap


class SymDiagram:
    """Finitely many named symbolic spaces with named arrows."""

    def __init__(self, objects, arrows=()):
        self.objects = dict(objects)
        built = []
        names = set()
        for a in arrows:
            if not isinstance(a, SymArrow):
                a = SymArrow(*a)
            if a.src not in self.objects or a.dst not in self.objects:
                raise CarrierMismatch(f"arrow {a.name} references a missing object")
            if a.name in names:
                raise CarrierMismatch(f"duplicate arrow name {a.name}")
            names.add(a.name)
            built.append(a)
        self.arrows = tuple(built)

    def all_identity(self) -> bool:
        return all(a.map.is_identity for a in self.arrows)

    def is_connected(self) -> bool:
        names = list(self.objects)
        if len(names) <= 1:
            return True
        adj = {n: set() for n in names}
        for a in self.arrows:
            adj[a.src].add(a.dst)
            adj[a.dst].add(a.src)
        seen = {names[0]}
        stack = [names[0]]
        while stack:
            for m in adj[stack.pop()]:
                if m not in seen:
                    seen.add(m)
                    stack.append(m)
        return len(seen) == len(names)


def _join_coarse(c1: CoarseTag, c2: CoarseTag) -> CoarseTag:
    if isinstance(c1, Full) or isinstance(c2, Full):
        return Full()
    if isinstance(c1, Band) or isinstance(c2, Band):
        return Band()
    if isinstance(c1, Diag):
        return c2
    if isinstance(c2, Diag):
        return c1
    pairs = []
    for tag in (c1, c2):
        for cls in tag.classes:
            anchor = min(cls)
            pairs.extend((anchor, other) for other in cls if other != anchor)
    return fingen(pairs)


def _meet_born(b1: BornTag, b2: BornTag) -> BornTag:
    if isinstance(b1, All):
        return b2
    if isinstance(b2, All):
        return b1
    if isinstance(b1, Triv) or isinstance(b2, Triv):
        return Triv()
    if isinstance(b1, Fin):
        return b2
    if isinstance(b2, Fin):
        return b1
    return _canon_born(FinCap(b1.points & b2.points))


def _colimit_bornology(coarse: CoarseTag, meet: BornTag) -> BornTag:
    """Largest catalog bornology whose members have every thickening by
    the joined coarse structure inside the meet of the object bornologies.

    Per coarse tag: Diag thickens nothing; Full sends any nonempty set to
    N, so anything survives only when the meet is All; Band has no maximal
    entourage, but r-thickenings preserve finiteness and destroy finite
    caps; FinGen has the maximal entourage diagonal-plus-kernel, which
    shrinks a cap to its saturated part."""
    if isinstance(coarse, Diag):
        return meet
    if isinstance(coarse, Full):
        return All() if isinstance(meet, All) else Triv()
    if isinstance(coarse, Band):
        return Triv() if isinstance(meet, FinCap) else meet
    if isinstance(meet, FinCap):
        kept = frozenset(
            x for x in meet.points if coarse.class_of(x) <= meet.points
        )
        return _canon_born(FinCap(kept))
    return meet


def sym_pushout(d: SymDiagram) -> SymSpace:
    """Pushout of a span of identity maps: the coarse structure is the join
    of the three coarse tags and the bornology is the largest one making
    the identity cocone legs proper, evaluated through the thickening
    table of the joined structure."""
    if len(d.objects) != 3 or len(d.arrows) != 2:
        raise UnsupportedDiagram("pushout needs a span: three objects, two arrows")
    a1, a2 = d.arrows
    if a1.src != a2.src or a1.dst == a2.dst or {a1.dst, a2.dst} | {a1.src} != set(d.objects):
        raise UnsupportedDiagram("pushout needs two arrows out of one center")
    if not d.all_identity():
        raise UnsupportedDiagram("only identity legs are supported")
    coarse: CoarseTag = Diag()
    meet: BornTag = All()
    for s in d.objects.values():
        coarse = _join_coarse(coarse, s.coarse_tag)
        meet = _meet_born(meet, s.bornology_tag)
    return SymSpace(_colimit_bornology(coarse, meet), coarse)


def sym_admissible(d: SymDiagram) -> Verdict:
    """Criterion for a diagram of classical symbolic spaces to admit a
    classical colimit: every chain of thickenings of a colimit point by
    pushed entourages must pull back to a bounded set in every object.

    The chain quantifier collapses per coarse tag: Diag steps do nothing;
    FinGen steps add at most the finitely many points of the kernel
    classes; Band steps displace by a finite distance, so finite chains of
    them keep a singleton finite (bounded for Fin and All alike); one Full
    step from any point reaches all of N, which only an All bornology
    absorbs.  Hence a connected identity diagram fails exactly when some
    object carries the Full coarse structure and another only bounds
    finite sets."""
    if not d.objects:
        raise UnsupportedDiagram("the set-colimit of an empty diagram is empty, not N")
    if not d.all_identity():
        raise UnsupportedDiagram(
            "set-colimit identifications are only computed for identity maps"
        )
    if not d.is_connected():
        raise UnsupportedDiagram(
            "a disconnected diagram has set-colimit a disjoint union of copies of N"
        )
    non_classical = [n for n, s in d.objects.items() if not s.classical]
    if non_classical:
        raise NonClassicalInput(
            f"objects outside the classical category: {non_classical}"
        )
    fulls = [n for n, s in d.objects.items() if isinstance(s.coarse_tag, Full)]
    fins = [n for n, s in d.objects.items() if isinstance(s.bornology_tag, Fin)]
    if fulls and fins:
        return Verdict(
            False,
            reason="a full thickening of a point pulls back to all of N "
            "in an object bounding only finite sets",
            witness={
                "b": 0,
                "k": fins[0],
                "chain": [fulls[0]],
                "preimage": SemilinearSet.naturals().describe(),
            },
        )
    if not fins:
        return Verdict(True, reason="every bornology is the full powerset")
    return Verdict(
        True,
        reason="no full coarse tag: all thickening chains have finite "
        "displacement and keep singletons finite",
    )


def exa_N() -> SymDiagram:
    """Span of identity maps out of N with discrete coarse structure and
    maximal bornology, into the coarsely connected space and into the
    classical discrete space.  Not colimit admissible."""
    return SymDiagram(
        {
            "N_min_max": SymSpace(All(), Diag()),
            "N_max_max": SymSpace(All(), Full()),
            "N_min_min": SymSpace(Fin(), Diag()),
        },
        [
            SymArrow("to_max_max", "N_min_max", "N_max_max", SymMap.identity()),
            SymArrow("to_min_min", "N_min_max", "N_min_min", SymMap.identity()),
        ],
    )


def ex_PO() -> SymDiagram:
    """The same span, read as a pushout problem; its pushout is N with the
    maximal coarse structure and the trivial bornology."""
    return exa_N()


FIXTURES = {"exa_N": exa_N, "ex_PO": ex_PO}


def truncate_space(s: SymSpace, n: int) -> "GBCSpace":
    """Finite restriction to the carrier {0, .., n-1} (as strings): Band
    collapses to the full relation, FinGen to its kernel inside the range,
    Fin and All to the full bornology (classicality matches the tags)."""
    from .spaces import GBCSpace

    carrier = Carrier([str(i) for i in range(n)])
    c = s.coarse_tag
    if isinstance(c, Diag):
        e = Relation.diagonal(carrier)
    elif isinstance(c, (Full, Band)):
        e = Relation.full(carrier)
    else:
        pairs = []
        for cls in c.classes:
            inside = sorted(x for x in cls if x < n)
            pairs.extend(
                (str(x), str(y)) for x in inside for y in inside if x != y
            )
        e = Relation.diagonal(carrier) | Relation.from_pairs(carrier, pairs)
    b = s.bornology_tag
    if isinstance(b, (Fin, All)):
        xb = PointSet.full(carrier)
    elif isinstance(b, Triv):
        xb = PointSet.empty(carrier)
    else:
        xb = PointSet.from_members(carrier, [str(p) for p in b.points if p < n])
    return GBCSpace(carrier, e, xb)


def truncate_map(f: SymMap, n: int) -> tuple:
    """Index table of f on {0, .., n-1}; the image must stay in range."""
    out = []
    for x in range(n):
        v = f.apply(x)
        if v >= n:
            raise CarrierMismatch(
                f"truncated image escapes the carrier: {x} maps to {v} >= {n}"
            )
        out.append(v)
    return tuple(out)


def truncate_diagram(d: SymDiagram, n: int) -> "Diagram":
    """Finite diagram over {0, .., n-1} with the truncated structures."""
    from .limits import Arrow, Diagram
    from .spaces import Morphism

    objects = {name: truncate_space(s, n) for name, s in d.objects.items()}
    arrows = [
        Arrow(
            a.name,
            a.src,
            a.dst,
            Morphism(objects[a.src], objects[a.dst], truncate_map(a.map, n)),
        )
        for a in d.arrows
    ]
    return Diagram(objects, arrows)
