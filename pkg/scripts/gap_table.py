"""Certified inapproximability factor of the ℓp reduction over a grid of p, as CSV."""

import argparse
import math
import sys

from steiner_lab import lp_gadgets as lg
from steiner_lab.errors import ValidationError
from steiner_lab.io import to_csv
from steiner_lab.metric import format_p
from steiner_lab.setsystems import SoundnessParams

DEFAULT_P = (1.5, 2.0, 2.5, 3.0, 3.5, lg.TIGHT_P, 4.0, 6.0, 8.0, 16.0, math.inf)


def main(argv=None):
    ap = argparse.ArgumentParser(description=__doc__)
    ap.add_argument("--eps", type=float, default=0.1)
    ap.add_argument("--delta", type=float, default=0.05)
    ap.add_argument("--p", type=float, nargs="+", default=DEFAULT_P)
    args = ap.parse_args(argv)
    sp = SoundnessParams(args.eps, args.delta)
    rows = []
    for p in args.p:
        try:
            rep = lg.gap_report(p, sp)
            rows.append((format_p(p), rep["theta"], rep["gap"], lg.intro_gamma(p, sp)))
        except ValidationError as exc:
            rows.append((format_p(p), "", "", str(exc)))
    sys.stdout.write(to_csv(["p", "theta", "gap", "headline_gamma"], rows))


if __name__ == "__main__":
    main()
