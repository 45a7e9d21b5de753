#!/usr/bin/env python3
"""Solve the 4x4 intertwiner for a pair of rank-one evaluation modules,
print it entrywise, and probe its degeneration loci."""

import argparse
import time

from qloopk.repcore import build_eval_rep_sl2
from qloopk.rmat import detect_degeneration, solve_R, verify_R_unitarity
from qloopk.scalars import const, one, q


def main():
    ap = argparse.ArgumentParser(description=__doc__)
    ap.add_argument("--spin2", type=int, default=1,
                    help="twice the spin of each factor (default 1)")
    args = ap.parse_args()

    a, b = const("a"), const("b")
    V = build_eval_rep_sl2(args.spin2, a)
    W = build_eval_rep_sl2(args.spin2, b)

    t0 = time.monotonic()
    res = solve_R(V, W)
    print(f"solved in {time.monotonic() - t0:.2f}s, "
          f"kernel dimension {res.kernel_dim}")
    for i in range(res.matrix.nrows):
        for j in range(res.matrix.ncols):
            e = res.matrix[i, j]
            if not e.is_zero():
                print(f"  R[{i},{j}] = {e}")

    print("unitarity:", verify_R_unitarity(V, W, Rvw=res.matrix).ok)
    for point, label in (({"b": a * q ** 2, "z": one}, "b = q^2 a, z = 1"),
                         ({"b": a * q ** -2, "z": one}, "b = q^-2 a, z = 1"),
                         ({"b": a, "z": q}, "b = a, z = q")):
        kind = detect_degeneration(V, W, point, R=res.matrix)
        print(f"at {label}: {kind}")


if __name__ == "__main__":
    main()
