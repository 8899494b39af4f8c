"""Time the compiled kernels against the numpy fallback.

    python3 benchmarks/bench_kernels.py [--n 128] [--repeat 5]

Each kernel is run on identical inputs by both backends; the script also
reports the largest relative difference between their outputs (the stencil
kernels agree bit for bit; the pair sums differ in summation order).
"""

import argparse
import timeit

import numpy as np

from qprint import kernels


def inputs(n, seed=0):
    rng = np.random.default_rng(seed)
    psi = rng.normal(size=(n, n)) + 1j * rng.normal(size=(n, n))
    ph = rng.uniform(0, 2 * np.pi, size=(2, n, n))
    ux = np.ascontiguousarray(np.exp(1j * ph[0])[:-1])
    uy = np.ascontiguousarray(np.exp(1j * ph[1])[:, :-1])
    M = rng.normal(size=(n, n, 3))
    M /= np.linalg.norm(M, axis=-1, keepdims=True)
    B = rng.normal(size=(n, n, 3))
    jx, jy = rng.normal(size=(2, n // 4, n // 4))
    return psi, ux, uy, M, B, np.ascontiguousarray(jx), np.ascontiguousarray(jy)


def cases(n):
    psi, ux, uy, M, B, jx, jy = inputs(n)
    out_c = np.empty_like(psi)
    out_v = np.empty_like(M)
    nb = int(np.hypot(*jx.shape)) + 2
    return {
        f"tdgl_step {n}x{n}": (lambda k: k.tdgl_step(psi, ux, uy, 0.01, 0.5, out_c, 0, n) or out_c.copy()),
        f"llg_stage {n}x{n}": (lambda k: k.llg_stage(M, B, 1.0, 0.3, 1.0, 0.99, 0.1, out_v, 0, n) and out_v.copy()),
        f"jj_pair_sums {n // 4}x{n // 4}": (lambda k: k.jj_pair_sums(jx, jy, nb)),
    }


def flat(r):
    parts = r if isinstance(r, tuple) else (r,)
    return np.concatenate([np.ravel(np.asarray(x)).astype(complex) for x in parts])


def rel_diff(a, b):
    a, b = flat(a), flat(b)
    return float(np.max(np.abs(a - b)) / max(np.max(np.abs(a)), 1e-300))


def main():
    ap = argparse.ArgumentParser()
    ap.add_argument("--n", type=int, default=128)
    ap.add_argument("--repeat", type=int, default=5)
    args = ap.parse_args()
    try:
        ck = kernels.get_backend("cython")
    except ImportError:
        print("compiled extension not built; nothing to compare")
        return
    py = kernels.get_backend("numpy")
    print(f"{'kernel':<24}{'numpy ms':>12}{'cython ms':>12}{'speedup':>10}{'max rel diff':>14}")
    for name, fn in cases(args.n).items():
        diff = rel_diff(fn(py), fn(ck))
        t = {}
        for label, k in (("numpy", py), ("cython", ck)):
            timer = timeit.Timer(lambda: fn(k))
            loops, _ = timer.autorange()
            t[label] = min(timer.repeat(args.repeat, loops)) / loops * 1e3
        print(f"{name:<24}{t['numpy']:>12.3f}{t['cython']:>12.3f}{t['numpy'] / t['cython']:>10.1f}{diff:>14.1e}")


if __name__ == "__main__":
    main()
