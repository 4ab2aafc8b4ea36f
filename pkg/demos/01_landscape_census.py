"""Census of stationary points on a six-variable problem.

Builds the rank-one-plus-identity example (Q = cc' + I with c = 1..6,
p = all-ones) and counts its stationary points under three nested
conditions: basic (optimal on its own support), L-stationary (fixed point
of the step-1/L proximal-gradient map), and block-k stationary (no size-k
coordinate block admits an improvement).  The chain tightens as k grows,
ending at the global minimizer alone.

Run:  python3 demos/01_landscape_census.py
"""

import numpy as np

from blockdec import (composite_value, enumerate_basic_points, is_block_k,
                      is_l_stationary, landscape_table, table1_problem)


def census(mode):
    prob = table1_problem(mode)
    counts = landscape_table(prob)
    cols = ["basic", "l_stat"] + [f"block_{k}" for k in sorted(counts.block)]
    print(f"\n--- {mode}: {prob.term} ---")
    print("  ".join(f"{c:>8}" for c in cols))
    print("  ".join(f"{v:>8}" for v in counts.row()))
    return prob


def main():
    print(__doc__.strip().split("\n")[0])

    census("cons")
    prob = census("regu")

    # walk the survivors of the penalized problem explicitly
    print("\nblock-2 stationary points of the penalized problem:")
    for S, x in enumerate_basic_points(prob):
        if is_l_stationary(prob, x) and is_block_k(prob, x, 2):
            tag = "global" if is_block_k(prob, x, 3) else "local "
            print(f"  {tag}  support={S}  F={composite_value(prob, x):.10f}")

    print("\nThe two survivors differ by only ~4.5e-4 in objective — a")
    print("plain proximal-gradient method that lands on the wrong one has")
    print("no size-1 escape, but a size-3 block move separates them.")

    S_local = (0, 1, 2, 5)
    x = np.zeros(6)
    c = np.arange(1.0, 7.0)
    Q = np.outer(c, c) + np.eye(6)
    x[list(S_local)] = np.linalg.solve(Q[np.ix_(S_local, S_local)], -np.ones(4))
    print(f"\nrunner-up point: block-2 stationary: {is_block_k(prob, x, 2)}, "
          f"block-3 stationary: {is_block_k(prob, x, 3)}")


if __name__ == "__main__":
    main()
