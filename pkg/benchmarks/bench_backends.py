"""Timing comparison of the compiled and pure-Python kernel backends.

Runs the hot kernels on representative workloads from this package:
Jacobi eigendecompositions at moment-matrix sizes, PSD projections,
the splitting-solver inner iteration, the Born contraction, and one
full simplex search.  Usage:

    python benchmarks/bench_backends.py
"""

import time

import numpy as np

from maxrand import _pykernels as pk

try:
    from maxrand import _ckernels as ck
except ImportError:
    ck = None


def timeit(fn, repeats):
    t0 = time.perf_counter()
    for _ in range(repeats):
        fn()
    return (time.perf_counter() - t0) / repeats


def bench(name, make_args, call, repeats_compiled, repeats_python):
    args = make_args()
    t_py = timeit(lambda: call(pk, *args), repeats_python)
    if ck is not None:
        t_ck = timeit(lambda: call(ck, *args), repeats_compiled)
        ratio = t_py / t_ck
        print(f"{name:38s} compiled {t_ck * 1e6:10.1f} us   "
              f"python {t_py * 1e6:10.1f} us   speedup {ratio:7.1f}x")
    else:
        print(f"{name:38s} compiled       (not built)   "
              f"python {t_py * 1e6:10.1f} us")


def main():
    rng = np.random.default_rng(0)
    print(f"compiled backend available: {ck is not None}\n")

    for n in (4, 9, 13, 26):
        a = rng.standard_normal((n, n))
        a = (a + a.T) / 2
        bench(f"eigh_sym {n}x{n}", lambda a=a: (a,),
              lambda mod, a: mod.eigh_sym(a), 2000, 20)

    for n in (4, 13):
        m = rng.standard_normal((n, n)) + 1j * rng.standard_normal((n, n))
        m = (m + m.conj().T) / 2
        bench(f"eigh_herm {n}x{n}", lambda m=m: (m.real, m.imag),
              lambda mod, re, im: mod.eigh_herm(re, im), 1000, 10)

    a = rng.standard_normal((13, 13))
    a = (a + a.T) / 2
    bench("psd_project_sym 13x13", lambda: (a,),
          lambda mod, a: mod.psd_project_sym(a), 1000, 10)

    st = rng.standard_normal(8) + 1j * rng.standard_normal(8)
    st /= np.linalg.norm(st)
    vecs = rng.standard_normal((3, 2)) + 1j * rng.standard_normal((3, 2))
    vecs /= np.linalg.norm(vecs, axis=1, keepdims=True)
    bench("born_probability (3 parties)", lambda: (st, vecs),
          lambda mod, s, v: mod.born_probability(s, v), 20000, 2000)

    # splitting-solver chunk: four 9x9 blocks, 180 coordinates
    def admm_args():
        bdim = np.array([9, 9, 9, 9], dtype=np.intc)
        bkind = np.zeros(4, dtype=np.intc)
        boff = np.array([0, 45, 90, 135], dtype=np.intc)
        n = 180
        arows = rng.standard_normal((60, n))
        p = np.eye(n) - arows.T @ np.linalg.solve(arows @ arows.T, arows)
        q = arows.T @ np.linalg.solve(arows @ arows.T, rng.standard_normal(60))
        return (p, q, np.zeros(n), q.copy(), np.zeros(n), np.zeros(n),
                bkind, bdim, boff)

    bench("admm_chunk 4x(9x9), 100 iterations", admm_args,
          lambda mod, *a: mod.admm_chunk(*a[:6],
                                         a[6], a[7], a[8], 100, 1.7), 20, 1)

    # one simplex search on the two-user family problem
    cons_in = np.array([[0, 0], [0, 1], [1, 0]], dtype=np.intc)
    cons_out = np.zeros((3, 2), dtype=np.intc)
    cons_val = np.array([0.25, 0.45, 0.45])
    obj_in = np.array([1, 1], dtype=np.intc)
    obj_out = np.array([0, 0], dtype=np.intc)
    x0 = np.concatenate([[0.7], np.linspace(0.3, 2.8, 8)])
    bench("nm_family_minimize (5000 evals)", lambda: (),
          lambda mod: mod.nm_family_minimize(2, 2, 1, cons_in, cons_out,
                                             cons_val, obj_in, obj_out, 1e6,
                                             x0, 0.0, 5000, 1e-12, 1e-16), 5, 1)


if __name__ == "__main__":
    main()
