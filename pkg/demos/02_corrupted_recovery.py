"""Block decomposition vs. hard-thresholding descent on corrupted data.

A 64x256 Gaussian design gets 2% of its entries scaled by 100, which
wrecks the conditioning and litters the landscape with poor fixed points.
Plain proximal-gradient descent (IHT) stalls at whatever support it first
locks onto; the decomposition solver keeps re-optimizing small coordinate
blocks exactly and works its way to substantially lower objectives.

Run:  python3 demos/02_corrupted_recovery.py
"""

import numpy as np

from blockdec import (Cardinality, CompositeProblem, DecConfig,
                      QuadraticObjective, apgm, composite_value, corrupt,
                      gen_random, init_solution, pgm, run_dec)


def make_instance(s, seed):
    A, b, _ = gen_random(64, 256, s, seed=seed)
    A = corrupt(A, fraction=0.02, factor=100.0, seed=seed + 1)
    return CompositeProblem(QuadraticObjective(A=A, b=b), Cardinality(s))


def main():
    s, seed = 10, 0
    prob = make_instance(s, seed)
    x0 = init_solution(256, prob.term, seed)
    print(f"instance: m=64 n=256 s={s}, 2% of entries scaled x100")
    print(f"starting objective F(x0) = {composite_value(prob, x0):.2f}\n")

    x_dec, trace = run_dec(prob, x0, DecConfig(n_random=4, n_greedy=2,
                                               seed=seed))
    x_pgm, trace_pgm = pgm(prob, x0)
    x_apgm, trace_apgm = apgm(prob, x0)

    print(f"{'solver':<10} {'iters':>6} {'final objective':>16}")
    for name, x, tr in [("dec-R4G2", x_dec, trace),
                        ("pgm", x_pgm, trace_pgm),
                        ("apgm", x_apgm, trace_apgm)]:
        print(f"{name:<10} {len(tr):>6} {composite_value(prob, x):>16.2f}")

    # snapshot the descent: the decomposition keeps finding block moves
    # long after plain descent has flatlined
    objs = trace.objectives()
    marks = [0, 10, 50, 100, 200, len(objs) - 1]
    print("\ndec objective along the way:")
    for t in marks:
        if t < len(objs):
            print(f"  iter {t:>4}: {objs[t]:.2f}")
    print("(the flat start is real: the tiny random init already uses the")
    print(" whole cardinality budget, so the solver must draw a block that")
    print(" swaps a junk coordinate out before it can make progress)")

    print("\nmedians over ten such instances favor the decomposition by a")
    print("wide margin; run `blockdec benchmark` with a config like")
    print("demos/bench_corrupt.json to reproduce the sweep.")


if __name__ == "__main__":
    main()
