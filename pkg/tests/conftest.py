"""Shared builders for the test suite.

Oracles here are deliberately naive: set-based closure enumerations that
never touch the packed-int fast paths they are checking.
"""

from __future__ import annotations

import itertools

from coarsecat.relalg import Carrier, PointSet, Relation
from coarsecat.spaces import GBCSpace, GroupAction, from_generators

NAMES = "abcdefgh"

ACCEPTANCE_LINES: list[str] = []


def pytest_terminal_summary(terminalreporter):
    if ACCEPTANCE_LINES:
        terminalreporter.section("acceptance criteria")
        for line in ACCEPTANCE_LINES:
            terminalreporter.write_line(line)


def carrier(n: int) -> Carrier:
    return Carrier(NAMES[:n])


def rel(c: Carrier, pairs) -> Relation:
    return Relation.from_pairs(c, pairs)


def pset(c: Carrier, members) -> PointSet:
    return PointSet.from_members(c, members)


def mk_space(n: int, epairs=(), bsets=(), classical=False, action=None) -> GBCSpace:
    c = carrier(n)
    act = GroupAction(c, action) if action is not None else None
    return from_generators(
        c,
        [rel(c, [p]) for p in epairs],
        [pset(c, b) for b in bsets],
        classical=classical,
        action=act,
    )


def brute_coarse_family(n: int, gen_pairs) -> set[frozenset]:
    """All relations expressible from the generators and the diagonal via
    union, inverse, and composition, as frozensets of index pairs.  A
    relation belongs to the generated coarse structure iff it is a subset
    of some member (subsets close the structure downward)."""
    diag = frozenset((i, i) for i in range(n))
    family = {diag}
    for p in gen_pairs:
        family.add(frozenset([p]) | diag)
    while True:
        fresh = set()
        for u in family:
            inv = frozenset((b, a) for a, b in u)
            if inv not in family:
                fresh.add(inv)
            for v in family:
                uv = u | v
                if uv not in family:
                    fresh.add(uv)
                comp = frozenset(
                    (x, y)
                    for (x, z1) in u
                    for (z2, y) in v
                    if z1 == z2
                )
                if comp not in family:
                    fresh.add(comp)
        if not fresh:
            return family
        family |= fresh


def brute_member(pairs, family) -> bool:
    s = frozenset(pairs)
    return any(s <= v for v in family)


def brute_bornology(n: int, gen_sets, classical: bool) -> set[frozenset]:
    """Downward plus finite-union closure of the generating bounded sets,
    with every singleton thrown in when the space is classical."""
    gens = [frozenset(g) for g in gen_sets]
    if classical:
        gens += [frozenset([i]) for i in range(n)]
    gens.append(frozenset())
    family = set()
    for k in range(len(gens) + 1):
        for combo in itertools.combinations(gens, k):
            u = frozenset().union(*combo) if combo else frozenset()
            family.add(u)
    out = set()
    for u in family:
        for k in range(len(u) + 1):
            for sub in itertools.combinations(sorted(u), k):
                out.add(frozenset(sub))
    return out
