"""Compare the compiled and pure-Python enumeration kernels.

    python3 benchmarks/bench_kernels.py [--repeat N]

Each workload is run on both backends; outputs are checked for equality
before timings are reported.
"""
import argparse
import time

from fantastack import kernels
from fantastack.arcs import beta_fiber
from fantastack.cones import Cone, points_up_to_grade
from fantastack.stacky import affine_toric_data, canonical_stack

CONIFOLD = Cone([(0, 0, 1), (1, 0, 1), (0, 1, 1), (1, 1, 1)])
A1 = Cone([(1, 0), (1, 2)])


def conifold_points(backend):
    s = affine_toric_data(CONIFOLD)
    return points_up_to_grade(s.sigma, s.qm[0], 40, backend)


def a1_points(backend):
    s = affine_toric_data(A1)
    return points_up_to_grade(s.sigma, s.qm[0], 400, backend)


def conifold_fibers(backend):
    f = canonical_stack(CONIFOLD)
    s = f.affine(0)
    return [beta_fiber(f, s, w, backend).lifts for w in points_up_to_grade(s.sigma, s.qm[0], 14)]


def raw_solve_box(backend):
    a = [[1, 2, 3, 4, 5, 6], [1, 1, 1, 1, 1, 1]]
    return kernels.solve_box(a, [60, 20], [20] * 6, backend)


WORKLOADS = {
    "cone points, conifold grade <= 40": conifold_points,
    "cone points, A1 grade <= 400": a1_points,
    "beta-fibers, conifold grade <= 14": conifold_fibers,
    "solve_box, 2x6 system": raw_solve_box,
}


def timed(fn, backend, repeat):
    best = float("inf")
    out = None
    for _ in range(repeat):
        t = time.perf_counter()
        out = fn(backend)
        best = min(best, time.perf_counter() - t)
    return best, out


def main():
    ap = argparse.ArgumentParser(description=__doc__.splitlines()[0])
    ap.add_argument("--repeat", type=int, default=3)
    args = ap.parse_args()
    if "cython" not in kernels.BACKENDS:
        print("compiled kernels are not built; only the Python backend is available")
        return
    print(f"{'workload':<38} {'python':>10} {'cython':>10} {'speedup':>8}")
    for name, fn in WORKLOADS.items():
        tp, op = timed(fn, "python", args.repeat)
        tc, oc = timed(fn, "cython", args.repeat)
        if op != oc:
            raise SystemExit(f"backends disagree on {name!r}")
        print(f"{name:<38} {tp:>9.4f}s {tc:>9.4f}s {tp / tc:>7.1f}x")


if __name__ == "__main__":
    main()
