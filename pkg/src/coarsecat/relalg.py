"""Relation algebra over a fixed finite ordered carrier.

A relation on an n-point carrier is a single Python int with n*n bits,
bit i*n + j standing for the ordered pair (element i, element j); a point
set is an int with n bits.  All operations downstream reduce to integer
bit twiddling, so carriers well past 64 points keep working, they only
get slower.  The carrier's element order is fixed at construction and
determines every bit index, iteration order and report order.
"""

from __future__ import annotations

from typing import Hashable, Iterable, Iterator, Sequence

from .errors import CarrierMismatch


class Carrier:
    """Ordered universe of distinct points.  Identity is structural: two
    carriers are equal iff they list the same elements in the same order."""

    __slots__ = ("elements", "_index")

    def __init__(self, elements: Iterable[Hashable]):
        elems = tuple(elements)
        index: dict = {}
        for i, e in enumerate(elems):
            if e in index:
                raise ValueError(f"duplicate carrier element {e!r}")
            index[e] = i
        self.elements = elems
        self._index = index

    def index(self, element) -> int:
        try:
            return self._index[element]
        except KeyError:
            raise KeyError(f"{element!r} is not a carrier element") from None

    def __len__(self) -> int:
        return len(self.elements)

    def __iter__(self) -> Iterator:
        return iter(self.elements)

    def __contains__(self, element) -> bool:
        return element in self._index

    def __eq__(self, other) -> bool:
        return isinstance(other, Carrier) and self.elements == other.elements

    def __hash__(self) -> int:
        return hash(self.elements)

    def __repr__(self) -> str:
        return f"Carrier({list(self.elements)!r})"


def _same_carrier(a, b) -> None:
    if a.carrier != b.carrier:
        raise CarrierMismatch(
            f"carrier mismatch: {a.carrier!r} vs {b.carrier!r}"
        )


class PointSet:
    """Subset of a carrier, stored as an n-bit mask."""

    __slots__ = ("carrier", "bits")

    def __init__(self, carrier: Carrier, bits: int):
        n = len(carrier)
        if bits < 0 or bits >> n:
            raise ValueError("point-set bits out of range for carrier")
        self.carrier = carrier
        self.bits = bits

    @classmethod
    def empty(cls, carrier: Carrier) -> "PointSet":
        return cls(carrier, 0)

    @classmethod
    def full(cls, carrier: Carrier) -> "PointSet":
        return cls(carrier, (1 << len(carrier)) - 1)

    @classmethod
    def from_members(cls, carrier: Carrier, members: Iterable) -> "PointSet":
        bits = 0
        for m in members:
            bits |= 1 << carrier.index(m)
        return cls(carrier, bits)

    @property
    def members(self) -> tuple:
        return tuple(
            e for i, e in enumerate(self.carrier.elements) if self.bits >> i & 1
        )

    def indices(self) -> Iterator[int]:
        bits = self.bits
        while bits:
            low = bits & -bits
            yield low.bit_length() - 1
            bits ^= low

    def has(self, element) -> bool:
        return self.bits >> self.carrier.index(element) & 1 == 1

    def has_index(self, i: int) -> bool:
        return self.bits >> i & 1 == 1

    def complement(self) -> "PointSet":
        return PointSet(self.carrier, self.bits ^ (1 << len(self.carrier)) - 1)

    def is_empty(self) -> bool:
        return self.bits == 0

    def __len__(self) -> int:
        return self.bits.bit_count()

    def __or__(self, other) -> "PointSet":
        _same_carrier(self, other)
        return PointSet(self.carrier, self.bits | other.bits)

    def __and__(self, other) -> "PointSet":
        _same_carrier(self, other)
        return PointSet(self.carrier, self.bits & other.bits)

    def __sub__(self, other) -> "PointSet":
        _same_carrier(self, other)
        return PointSet(self.carrier, self.bits & ~other.bits)

    def __le__(self, other) -> bool:
        _same_carrier(self, other)
        return self.bits & ~other.bits == 0

    def __eq__(self, other) -> bool:
        return (
            isinstance(other, PointSet)
            and self.carrier == other.carrier
            and self.bits == other.bits
        )

    def __hash__(self) -> int:
        return hash((self.carrier, self.bits))

    def __repr__(self) -> str:
        return f"PointSet({list(self.members)!r})"


class Relation:
    """Binary relation on a carrier, packed into one int of n*n bits."""

    __slots__ = ("carrier", "bits")

    def __init__(self, carrier: Carrier, bits: int):
        n = len(carrier)
        if bits < 0 or bits >> n * n:
            raise ValueError("relation bits out of range for carrier")
        self.carrier = carrier
        self.bits = bits

    @classmethod
    def empty(cls, carrier: Carrier) -> "Relation":
        return cls(carrier, 0)

    @classmethod
    def diagonal(cls, carrier: Carrier) -> "Relation":
        n = len(carrier)
        bits = 0
        for i in range(n):
            bits |= 1 << i * n + i
        return cls(carrier, bits)

    @classmethod
    def full(cls, carrier: Carrier) -> "Relation":
        n = len(carrier)
        return cls(carrier, (1 << n * n) - 1)

    @classmethod
    def from_pairs(cls, carrier: Carrier, pairs: Iterable) -> "Relation":
        n = len(carrier)
        bits = 0
        for x, y in pairs:
            bits |= 1 << carrier.index(x) * n + carrier.index(y)
        return cls(carrier, bits)

    def row(self, i: int) -> int:
        n = len(self.carrier)
        return self.bits >> i * n & (1 << n) - 1

    def has(self, x, y) -> bool:
        return self.has_index(self.carrier.index(x), self.carrier.index(y))

    def has_index(self, i: int, j: int) -> bool:
        return self.bits >> i * len(self.carrier) + j & 1 == 1

    @property
    def pairs(self) -> tuple:
        elems = self.carrier.elements
        return tuple((elems[i], elems[j]) for i, j in self.index_pairs())

    def index_pairs(self) -> Iterator[tuple[int, int]]:
        n = len(self.carrier)
        bits = self.bits
        while bits:
            low = bits & -bits
            k = low.bit_length() - 1
            yield divmod(k, n)
            bits ^= low

    def is_reflexive(self) -> bool:
        return Relation.diagonal(self.carrier) <= self

    def is_symmetric(self) -> bool:
        return self.bits == inverse(self).bits

    def is_transitive(self) -> bool:
        return compose(self, self) <= self

    def is_equivalence(self) -> bool:
        return self.is_reflexive() and self.is_symmetric() and self.is_transitive()

    def is_empty(self) -> bool:
        return self.bits == 0

    def __len__(self) -> int:
        return self.bits.bit_count()

    def __or__(self, other) -> "Relation":
        _same_carrier(self, other)
        return Relation(self.carrier, self.bits | other.bits)

    def __and__(self, other) -> "Relation":
        _same_carrier(self, other)
        return Relation(self.carrier, self.bits & other.bits)

    def __sub__(self, other) -> "Relation":
        _same_carrier(self, other)
        return Relation(self.carrier, self.bits & ~other.bits)

    def __le__(self, other) -> bool:
        _same_carrier(self, other)
        return self.bits & ~other.bits == 0

    def __eq__(self, other) -> bool:
        return (
            isinstance(other, Relation)
            and self.carrier == other.carrier
            and self.bits == other.bits
        )

    def __hash__(self) -> int:
        return hash((self.carrier, self.bits))

    def __repr__(self) -> str:
        return f"Relation({list(self.pairs)!r})"


def inverse(u: Relation) -> Relation:
    """Swap every pair: (x, y) is in the result iff (y, x) is in u."""
    n = len(u.carrier)
    bits = u.bits
    out = 0
    while bits:
        low = bits & -bits
        k = low.bit_length() - 1
        i, j = divmod(k, n)
        out |= 1 << j * n + i
        bits ^= low
    return Relation(u.carrier, out)


def compose(u: Relation, v: Relation) -> Relation:
    """Relational composition: (x, y) in result iff some z has
    (x, z) in u and (z, y) in v."""
    _same_carrier(u, v)
    n = len(u.carrier)
    if n == 0:
        return u
    mask = (1 << n) - 1
    vrows = [v.bits >> j * n & mask for j in range(n)]
    out = 0
    for i in range(n):
        row = u.bits >> i * n & mask
        acc = 0
        while row:
            low = row & -row
            acc |= vrows[low.bit_length() - 1]
            row ^= low
        out |= acc << i * n
    return Relation(u.carrier, out)


def thicken(u: Relation, b: PointSet) -> PointSet:
    """U[B] = {x : (x, b) in U for some b in B}."""
    _same_carrier(u, b)
    n = len(u.carrier)
    mask = (1 << n) - 1
    out = 0
    ub = u.bits
    sb = b.bits
    for i in range(n):
        if ub >> i * n & mask & sb:
            out |= 1 << i
    return PointSet(u.carrier, out)


def union(*relations: Relation) -> Relation:
    if not relations:
        raise ValueError("union of no relations needs a carrier")
    out = relations[0]
    for r in relations[1:]:
        out = out | r
    return out


def is_subset(u: Relation, v: Relation) -> bool:
    return u <= v


def restrict(u: Relation, s: PointSet) -> Relation:
    """Restrict u to pairs with both endpoints in s (same carrier)."""
    _same_carrier(u, s)
    n = len(u.carrier)
    out = 0
    for i in s.indices():
        out |= (u.row(i) & s.bits) << i * n
    return Relation(u.carrier, out)


def equivalence_closure(
    generators: Sequence[Relation], carrier: Carrier | None = None
) -> Relation:
    """Least equivalence relation containing every generator.

    Starts from the diagonal plus the symmetrized union and squares to the
    transitive fixed point, so the number of compose calls is logarithmic
    in the diameter.
    """
    if carrier is None:
        if not generators:
            raise ValueError("equivalence_closure of nothing needs a carrier")
        carrier = generators[0].carrier
    acc = Relation.diagonal(carrier)
    for g in generators:
        if g.carrier != carrier:
            raise CarrierMismatch("generator over a different carrier")
        acc = acc | g
    acc = acc | inverse(acc)
    while True:
        nxt = acc | compose(acc, acc)
        if nxt == acc:
            return acc
        acc = nxt
