"""Per-pair distortion of the code-based embedding on an ℓp gadget point set, as CSV."""

import argparse
import sys

import numpy as np

from steiner_lab.embeddings import DimReductionParams, LinearCode, measure_distortion
from steiner_lab.lp_gadgets import LpGadgetParams, build_lp_dst_instance
from steiner_lab.setsystems import SetSystem

DESIGN = SetSystem(9, ((1, 2, 3), (4, 5, 6), (7, 8, 9), (1, 4, 7), (2, 5, 8), (3, 6, 9), (1, 5, 9)))


def main(argv=None):
    ap = argparse.ArgumentParser(description=__doc__)
    ap.add_argument("--p", type=float, default=2.0)
    ap.add_argument("--theta", type=float, default=1 / 6)
    ap.add_argument("--q", type=int, default=7)
    ap.add_argument("--K", type=int, default=2)
    ap.add_argument("--N", type=int, default=7)
    args = ap.parse_args(argv)
    inst = build_lp_dst_instance(DESIGN, LpGadgetParams(args.p, args.theta))
    params = DimReductionParams(LinearCode(args.q, args.K, args.N), 3, 1.0)
    rep = measure_distortion(np.asarray(inst.all_points()), args.p, params)
    sys.stdout.write(rep.to_csv())
    print(
        f"# ratios [{rep.min_ratio:.4f}, {rep.max_ratio:.4f}] band [{rep.lower_bound:.4f}, {rep.upper_bound:.4f}] ok={rep.ok}",
        file=sys.stderr,
    )


if __name__ == "__main__":
    main()
