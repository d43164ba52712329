"""Walk through the glued half-line counterexample.

Three copies of the natural numbers, with extreme structures, glued by
identity maps: the colimit loses classicality because one thickening of a
single point pulls back to the whole line.  Every finite truncation is
fine, which is exactly why the obstruction needs the symbolic tier.
"""

import argparse
import json

from coarsecat.limits import admissible as finite_admissible
from coarsecat.symnat import (
    exa_N,
    ex_PO,
    sym_admissible,
    sym_pushout,
    truncate_diagram,
)


def main() -> None:
    parser = argparse.ArgumentParser(description=__doc__)
    parser.add_argument("--truncations", type=int, default=6)
    args = parser.parse_args()

    d = exa_N()
    print("objects:")
    for name, s in d.objects.items():
        print(f"  {name}: {s.describe()}")
    verdict = sym_admissible(d)
    print(f"admissible: {verdict.ok}")
    print(f"reason: {verdict.reason}")
    print("witness:", json.dumps(verdict.witness, default=repr, indent=2))

    print()
    for n in range(args.truncations + 1):
        v = finite_admissible(truncate_diagram(d, n))
        print(f"truncation at {n}: admissible={v.ok}")

    print()
    result = sym_pushout(ex_PO())
    print(f"pushout of the same span: {result.describe()}")


if __name__ == "__main__":
    main()
