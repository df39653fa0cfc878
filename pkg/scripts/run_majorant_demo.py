"""Prime majorant demo.

Runs the budgeted-simulation majorant over the bundled register machine
programs and prints, per input n, the raw program output, the majorant
value d(n), and the instrumented step counts for a value query and for a
cheap threshold query. The threshold column is the payoff: at_least(n, m)
charges O(m^2) steps no matter how fast the program grows.
"""

import argparse
from pathlib import Path

from conjlab.sepfunc import fast_majorant
from conjlab.machine import parse_program

PROGRAMS = Path(__file__).parent / "programs"


def demo(path: Path, n_max: int, threshold: int):
    prog = parse_program(path.read_text())
    d = fast_majorant(prog)
    print(f"== {path.name}")
    print(f"{'n':>3} {'output':>9} {'d(n)':>9} {'value steps':>12} "
          f"{'at_least({t}) steps'.format(t=threshold):>20}")
    for n in range(n_max + 1):
        out = d.program_output(n)
        probe = fast_majorant(prog)  # fresh instance, unmemoized counts
        value, vsteps = probe.value_with_steps(n)
        probe = fast_majorant(prog)
        _, asteps = probe.at_least_with_steps(n, threshold)
        print(f"{n:>3} {out:>9} {value:>9} {vsteps:>12} {asteps:>20}")
    print()


def main():
    ap = argparse.ArgumentParser(description=__doc__.split("\n")[0])
    ap.add_argument("--n-max", type=int, default=10)
    ap.add_argument("--threshold", type=int, default=50)
    ap.add_argument("--program", action="append",
                    help="path to a .rm file (repeatable); default: all bundled")
    args = ap.parse_args()

    paths = [Path(p) for p in args.program] if args.program \
        else sorted(PROGRAMS.glob("*.rm"))
    for path in paths:
        demo(path, args.n_max, args.threshold)


if __name__ == "__main__":
    main()
