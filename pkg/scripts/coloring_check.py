"""Compare the exact ℓ∞ Steiner cost of the coloring gadget with (n + χ)/2 on small graphs."""

import argparse
import sys
import time

from steiner_lab.coloring import build_cst_instance, exact_chromatic_number
from steiner_lab.graphs import small_graphs
from steiner_lab.io import to_csv
from steiner_lab.solvers import exact_cst


def main(argv=None):
    ap = argparse.ArgumentParser(description=__doc__)
    ap.add_argument("--max-vertices", type=int, default=5)
    args = ap.parse_args(argv)
    rows = []
    for g in small_graphs(args.max_vertices, connected=True):
        inst, _ = build_cst_instance(g)
        if len(inst.terminals) > 6:
            continue
        t0 = time.perf_counter()
        cost = exact_cst(inst).cost
        chi = exact_chromatic_number(g)
        edges = " ".join(f"{u + 1}-{v + 1}" for u, v in g.edges)
        rows.append((g.n, edges, chi, cost, (g.n + chi) / 2, abs(cost - (g.n + chi) / 2), time.perf_counter() - t0))
    sys.stdout.write(to_csv(["n", "edges", "chi", "cst_cost", "expected", "abs_err", "seconds"], rows))


if __name__ == "__main__":
    main()
