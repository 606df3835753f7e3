"""Time the compiled kernels against the numpy fallback.

    python benchmarks/bench_kernels.py [--repeat 5]

Both variants are called directly, so the env flag does not matter here.
The first numba call (compilation or cache load) is excluded.
"""

from __future__ import annotations

import argparse
import time

import numpy as np

from graphmalcev import _accel, kernels
from graphmalcev import algebra as A
from graphmalcev.fixtures import k4, path4
from graphmalcev.relations import FinRelation
from graphmalcev.terms import parse_term, term_to_graph


def best_of(fn, repeat):
    times = []
    for _ in range(repeat):
        t0 = time.perf_counter()
        fn()
        times.append(time.perf_counter() - t0)
    return min(times)


def cases(rng):
    s = 48
    a = rng.random((s, s)) < 0.1
    b = rng.random((s, s)) < 0.1
    yield "compose 48x48", (kernels.compose_nb, kernels.compose_np), (a, b)

    c3 = A.power(A.chain(3), 2)
    meet = c3.ops[0]
    rel = np.eye(c3.size, dtype=bool) | (rng.random((c3.size, c3.size)) < 0.2)
    yield "op_image chain3^2", (kernels.op_image_nb, kernels.op_image_np), (meet.table, 2, c3.size, rel)

    z = A.power(A.z2(), 3)
    yield "op_preserves z2^3", (kernels.op_preserves_nb, kernels.op_preserves_np), (
        z.ops[0].table, 2, z.size, np.eye(z.size, dtype=bool)
    )

    big = A.power(A.chain(2), 4)
    args = (big.size, *big._packed(), np.array([0], dtype=np.int64), np.array([5], dtype=np.int64))
    yield "generated congruence chain2^4", (kernels.cg_nb, kernels.cg_np), args

    for name, g in (
        ("relation k4, s=6", k4()),
        ("relation path4, s=6", path4()),
        ("relation a1 o (a2 & a1) o a2, s=6", term_to_graph(parse_term("a1 o (a2 & a1) o a2", 2), 2)),
    ):
        mats = []
        for _ in range(g.n):
            m = rng.random((6, 6)) < 0.25
            m = m | m.T | np.eye(6, dtype=bool)
            mats.append(m)
        mats = np.stack(mats)
        indptr, nbr, lab = g.csr
        yield name, (kernels.relation_nb, kernels.relation_np), (
            len(g.vertices), indptr, nbr, lab, mats, g.distinguished_index
        )


def main(argv=None):
    ap = argparse.ArgumentParser(description=__doc__.splitlines()[0])
    ap.add_argument("--repeat", type=int, default=5)
    ap.add_argument("--seed", type=int, default=0)
    args = ap.parse_args(argv)
    if not _accel.NUMBA_AVAILABLE:
        print("numba is not installed; only the numpy path can run")
    rng = np.random.default_rng(args.seed)
    print(f"{'kernel':40s} {'numba (ms)':>12s} {'numpy (ms)':>12s} {'speedup':>9s}")
    for name, (nb, np_fn), call_args in cases(rng):
        t_np = best_of(lambda: np_fn(*call_args), args.repeat)
        if _accel.NUMBA_AVAILABLE:
            out_nb = nb(*call_args)  # warm-up
            out_np = np_fn(*call_args)
            if name.startswith("generated"):
                same = np.array_equal(FinRelation.from_partition(out_nb).matrix, FinRelation.from_partition(out_np).matrix)
            else:
                same = np.array_equal(np.asarray(out_nb), np.asarray(out_np))
            assert same, f"backends disagree on {name}"
            t_nb = best_of(lambda: nb(*call_args), args.repeat)
            print(f"{name:40s} {t_nb * 1e3:12.3f} {t_np * 1e3:12.3f} {t_np / t_nb:8.1f}x")
        else:
            print(f"{name:40s} {'-':>12s} {t_np * 1e3:12.3f} {'-':>9s}")


if __name__ == "__main__":
    main()
