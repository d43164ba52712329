"""Census of all spaces on small carriers.

Counts every distinct structure per carrier size and breaks the census
down by classicality, connectedness, and bornology size.
"""

import argparse
from collections import Counter

from coarsecat.spaces import components, enumerate_spaces


def census(max_size: int, show_rows: bool) -> None:
    for n in range(max_size + 1):
        spaces = enumerate_spaces(n, cap=max_size)
        tally = Counter()
        for s in spaces:
            tally[
                (
                    s.classical,
                    components(s).connected,
                    len(list(s.bounded.indices())),
                )
            ] += 1
        print(f"carrier size {n}: {len(spaces)} spaces")
        if show_rows:
            for (classical, connected, nbounded), count in sorted(tally.items()):
                print(
                    f"  classical={classical!s:5} connected={connected!s:5} "
                    f"bounded_points={nbounded}: {count}"
                )


def main() -> None:
    parser = argparse.ArgumentParser(description=__doc__)
    parser.add_argument("--max-size", type=int, default=4)
    parser.add_argument("--details", action="store_true")
    args = parser.parse_args()
    census(args.max_size, args.details)


if __name__ == "__main__":
    main()
