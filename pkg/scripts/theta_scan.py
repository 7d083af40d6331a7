"""Scan θ at fixed p: validity margin, embeddability and gap factor, as CSV."""

import argparse
import sys

import numpy as np

from steiner_lab import lp_gadgets as lg
from steiner_lab.io import to_csv
from steiner_lab.metric import parse_p
from steiner_lab.reduction import is_steiner_embeddable
from steiner_lab.setsystems import SoundnessParams


def main(argv=None):
    ap = argparse.ArgumentParser(description=__doc__)
    ap.add_argument("--p", default="2")
    ap.add_argument("--eps", type=float, default=0.1)
    ap.add_argument("--delta", type=float, default=0.05)
    ap.add_argument("--samples", type=int, default=51)
    args = ap.parse_args(argv)
    p = parse_p(args.p)
    sp = SoundnessParams(args.eps, args.delta)
    rows = []
    for theta in np.linspace(0.5 / args.samples, 0.5, args.samples):
        valid = lg.theta_valid(p, theta)
        status = is_steiner_embeddable(lg.lp_tuple(p, theta, check=False)).status
        gap = lg.lp_gap_factor(p, theta, sp) if valid else ""
        rows.append((float(theta), lg.theta_margin(p, theta), valid, status, gap))
    sys.stdout.write(to_csv(["theta", "margin", "valid", "embeddable", "gap"], rows))
    if p > 1:
        try:
            print(f"# optimal theta {lg.optimal_theta(p, sp):.6g}", file=sys.stderr)
        except ValueError as exc:
            print(f"# {exc}", file=sys.stderr)


if __name__ == "__main__":
    main()
