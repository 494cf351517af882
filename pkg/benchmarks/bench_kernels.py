"""Time the numba and numpy variants of every kernel on the same inputs.

Run ``python3 benchmarks/bench_kernels.py``; pass ``--json`` for machine output.
Each timing is the best of ``--repeat`` runs after one warm-up call, so JIT
compilation is excluded. Outputs of the two variants are compared first.
"""

from __future__ import annotations

import argparse
import json
import time

import numpy as np

from qframe import kernels
from qframe._accel import USE_NUMBA


def case_infomorphism(rng, n):
    src = rng.random((n, n)) < 0.5
    tgt = rng.random((n, n)) < 0.5
    return (src, tgt, rng.integers(0, n, n), rng.integers(0, n, n))


def case_restriction(rng, n):
    radices = np.full(n, 2, dtype=np.int64)
    pairs = [(i, j) for i in range(n) for j in range(i + 1, n)]
    ctx_obs = np.array(pairs, dtype=np.int64)
    ctx_len = np.full(len(pairs), 2, dtype=np.int64)
    ctx_off = np.arange(len(pairs), dtype=np.int64) * 4
    return (radices, ctx_obs, ctx_len, ctx_off)


def case_marginalize(rng, n):
    radices, ctx_obs, ctx_len, ctx_off = case_restriction(rng, n)
    rows = kernels.restriction_rows_np(radices, ctx_obs, ctx_len, ctx_off)
    w = rng.random(rows.shape[1])
    return (w / w.sum(), rows, int(ctx_off[-1]) + 4)


def case_bipartition(rng, n):
    psi = rng.standard_normal(2 ** n) + 1j * rng.standard_normal(2 ** n)
    keep = np.zeros(n, dtype=np.bool_)
    keep[::2] = True
    return (psi / np.linalg.norm(psi), np.full(n, 2, dtype=np.int64), keep)


CASES = {
    "infomorphism_mismatch": (case_infomorphism, (8, 64, 512)),
    "restriction_rows": (case_restriction, (4, 10, 16)),
    "marginalize": (case_marginalize, (4, 10, 16)),
    "bipartition_matrix": (case_bipartition, (4, 12, 20)),
}


def best_time(fn, args, repeat):
    fn(*args)
    best = float("inf")
    for _ in range(repeat):
        t0 = time.perf_counter()
        fn(*args)
        best = min(best, time.perf_counter() - t0)
    return best


def run(repeat: int = 5, seed: int = 0) -> list[dict]:
    rng = np.random.default_rng(seed)
    rows = []
    for name, (make, sizes) in CASES.items():
        impls = kernels.IMPLEMENTATIONS[name]
        for n in sizes:
            args = make(rng, n)
            ref = impls["numpy"](*args)
            row = {"kernel": name, "size": n, "numpy_s": best_time(impls["numpy"], args, repeat)}
            if "numba" in impls:
                out = impls["numba"](*args)
                if not np.allclose(out, ref):
                    raise AssertionError(f"{name}(n={n}): numba and numpy disagree")
                row["numba_s"] = best_time(impls["numba"], args, repeat)
                row["speedup"] = row["numpy_s"] / row["numba_s"] if row["numba_s"] else float("inf")
            rows.append(row)
    return rows


def main() -> None:
    ap = argparse.ArgumentParser(description=__doc__.splitlines()[0])
    ap.add_argument("--repeat", type=int, default=5)
    ap.add_argument("--seed", type=int, default=0)
    ap.add_argument("--json", action="store_true")
    a = ap.parse_args()
    rows = run(a.repeat, a.seed)
    if a.json:
        print(json.dumps({"numba_enabled": USE_NUMBA, "results": rows}, indent=2))
        return
    print(f"numba enabled: {USE_NUMBA}")
    print(f"{'kernel':24s} {'size':>5s} {'numpy [s]':>12s} {'numba [s]':>12s} {'speedup':>8s}")
    for r in rows:
        nb = f"{r['numba_s']:12.2e}" if "numba_s" in r else f"{'-':>12s}"
        sp = f"{r['speedup']:8.1f}" if "speedup" in r else f"{'-':>8s}"
        print(f"{r['kernel']:24s} {r['size']:5d} {r['numpy_s']:12.2e} {nb} {sp}")


if __name__ == "__main__":
    main()
