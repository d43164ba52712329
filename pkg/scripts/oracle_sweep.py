"""Sweep the universal-property oracle over sampled diagram shapes.

Samples diagrams of one shape over all spaces with at most three points,
computes the limit and colimit, and times the brute-force oracle on each.
"""

import argparse
import random
import time

from coarsecat.limits import (
    Arrow,
    Diagram,
    colimit,
    limit,
    universal_property_check,
)
from coarsecat.spaces import enumerate_morphisms, enumerate_spaces

SHAPES = ("single", "pair", "parallel_pair", "span", "cospan", "chain3")


def sample_diagram(shape: str, rng: random.Random, pool) -> Diagram:
    def pick():
        return pool[rng.randrange(len(pool))]

    def arrow(dom, cod):
        homs = list(enumerate_morphisms(dom, cod))
        return homs[rng.randrange(len(homs))] if homs else None

    while True:
        if shape == "single":
            return Diagram({"A": pick()})
        if shape == "pair":
            return Diagram({"A": pick(), "B": pick()})
        if shape == "parallel_pair":
            a, b = pick(), pick()
            f, g = arrow(a, b), arrow(a, b)
            if f and g:
                return Diagram(
                    {"A": a, "B": b},
                    [Arrow("f", "A", "B", f), Arrow("g", "A", "B", g)],
                )
        if shape == "span":
            c, l, r = pick(), pick(), pick()
            f, g = arrow(c, l), arrow(c, r)
            if f and g:
                return Diagram(
                    {"C": c, "L": l, "R": r},
                    [Arrow("f", "C", "L", f), Arrow("g", "C", "R", g)],
                )
        if shape == "cospan":
            l, r, c = pick(), pick(), pick()
            f, g = arrow(l, c), arrow(r, c)
            if f and g:
                return Diagram(
                    {"L": l, "R": r, "C": c},
                    [Arrow("f", "L", "C", f), Arrow("g", "R", "C", g)],
                )
        if shape == "chain3":
            a, b, c = pick(), pick(), pick()
            f, g = arrow(a, b), arrow(b, c)
            if f and g:
                return Diagram(
                    {"A": a, "B": b, "C": c},
                    [Arrow("f", "A", "B", f), Arrow("g", "B", "C", g)],
                )


def main() -> None:
    parser = argparse.ArgumentParser(description=__doc__)
    parser.add_argument("--shape", choices=SHAPES, default="span")
    parser.add_argument("--samples", type=int, default=20)
    parser.add_argument("--seed", type=int, default=0)
    parser.add_argument("--test-cap", type=int, default=3)
    args = parser.parse_args()

    rng = random.Random(args.seed)
    pool = [s for n in range(4) for s in enumerate_spaces(n)]
    total = 0.0
    for i in range(args.samples):
        d = sample_diagram(args.shape, rng, pool)
        for side, build in (("limit", limit), ("colimit", colimit)):
            space, cand = build(d)
            started = time.monotonic()
            v = universal_property_check(cand, d, test_cap=args.test_cap)
            elapsed = time.monotonic() - started
            total += elapsed
            status = "ok" if v.ok else f"FAILED: {v.reason}"
            print(
                f"[{i:3}] {args.shape} {side}: apex {len(space.carrier)} "
                f"points, oracle {status} in {elapsed * 1000:.1f} ms"
            )
            if not v.ok:
                raise SystemExit(1)
    print(f"total oracle time {total:.2f}s over {2 * args.samples} checks")


if __name__ == "__main__":
    main()
