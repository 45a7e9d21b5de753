#!/usr/bin/env python3
"""End-to-end boundary run for a shipped scenario: solve the K-matrix,
then verify the twisted and untwisted reflection identities and the
paired unitarity relation, timing each stage."""

import argparse
import json
import time

from qloopk.cli import Scenario, _load_scenario
from qloopk.kmat import solve_K, verify_K_unitarity, verify_gre, \
    verify_standard_re


def timed(label, fn):
    t0 = time.monotonic()
    out = fn()
    print(f"{label}: {time.monotonic() - t0:.2f}s")
    return out


def main():
    ap = argparse.ArgumentParser(description=__doc__)
    ap.add_argument("scenario", nargs="?", default="qonsager-sl2-fundamental")
    args = ap.parse_args()

    data = _load_scenario(args.scenario)
    sc = Scenario(data, {})
    V, W = sc.reps["V"], sc.reps["W"]

    res = timed("solve-K", lambda: solve_K(V, sc.twist, sc.shift, sc.params))
    print(f"  kernel dimension {res.kernel_dim}, "
          f"normalization {res.normalization['mode']}")
    for i in range(res.matrix.nrows):
        for j in range(res.matrix.ncols):
            print(f"  K[{i},{j}] = {res.matrix[i, j]}")

    gre = timed("verify-gre", lambda: verify_gre(
        V, W, sc.twist, sc.shift, sc.params, KV=res))
    print(f"  ok = {gre.ok}")

    sc_re = Scenario.stage(data, "verify-re", {})
    re = timed("verify-re", lambda: verify_standard_re(
        sc_re.reps["V"], sc_re.reps["W"], sc_re.params, sc_re.shift))
    print(f"  ok = {re.ok}")

    sc_un = Scenario.stage(data, "verify-unitarity", {})
    un = timed("verify-unitarity", lambda: verify_K_unitarity(
        sc_un.reps["V"], sc_un.twist, sc_un.shift, sc_un.params))
    print(f"  ok = {un.ok}  ({un.detail})")

    print(json.dumps({"scenario": data["name"],
                      "ok": gre.ok and re.ok and un.ok}))


if __name__ == "__main__":
    main()
