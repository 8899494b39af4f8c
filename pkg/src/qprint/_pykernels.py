"""Pure-numpy stencil kernels.

Each kernel fills rows ``[i0, i1)`` of a preallocated output so callers can
split the x axis across workers.  The arithmetic order matches the compiled
kernels in ``_ckernels.pyx`` term by term.
"""

import numpy as np

BACKEND = "numpy"


def tdgl_step(psi, ux, uy, dt, dx, out, i0, i1):
    """Forward-Euler TDGL update with link variables and insulating edges.

    Written in real arithmetic: numpy's complex multiply may fuse
    multiply-adds depending on the host CPU, which would break bitwise
    reproducibility.
    """
    nx, ny = psi.shape
    lo, hi = max(i0 - 1, 0), min(i1 + 1, nx)
    pr, pi = psi.real[lo:hi], psi.imag[lo:hi]
    xr, xi = ux.real[lo : hi - 1], ux.imag[lo : hi - 1]
    yr, yi = uy.real[lo:hi], uy.imag[lo:hi]
    ar = np.zeros(pr.shape)
    ai = np.zeros(pr.shape)
    # missing neighbours contribute nothing: zero covariant normal derivative
    ar[:-1] += (xr * pr[1:] - xi * pi[1:]) - pr[:-1]
    ai[:-1] += (xr * pi[1:] + xi * pr[1:]) - pi[:-1]
    ar[1:] += (xr * pr[:-1] + xi * pi[:-1]) - pr[1:]
    ai[1:] += (xr * pi[:-1] - xi * pr[:-1]) - pi[1:]
    ar[:, :-1] += (yr * pr[:, 1:] - yi * pi[:, 1:]) - pr[:, :-1]
    ai[:, :-1] += (yr * pi[:, 1:] + yi * pr[:, 1:]) - pi[:, :-1]
    ar[:, 1:] += (yr * pr[:, :-1] + yi * pi[:, :-1]) - pr[:, 1:]
    ai[:, 1:] += (yr * pi[:, :-1] - yi * pr[:, :-1]) - pi[:, 1:]
    inv_dx2 = 1.0 / (dx * dx)
    s = slice(i0 - lo, i1 - lo)
    qr, qi = pr[s], pi[s]
    g = 1.0 - (qr * qr + qi * qi)
    o = out[i0:i1]
    o.real = qr + dt * (ar[s] * inv_dx2 + g * qr)
    o.imag = qi + dt * (ai[s] * inv_dx2 + g * qi)


def llg_stage(M, B, J, K, zs, pref, alpha, out, i0, i1):
    """Landau-Lifshitz right-hand side on rows [i0, i1); returns max |H_eff|."""
    nx, ny, _ = M.shape
    lo, hi = max(i0 - 1, 0), min(i1 + 1, nx)
    m = M[lo:hi]
    nb = np.zeros_like(m)
    nb[:-1] += m[1:]
    nb[1:] += m[:-1]
    nb[:, :-1] += m[:, 1:]
    nb[:, 1:] += m[:, :-1]
    s = slice(i0 - lo, i1 - lo)
    m = m[s]
    H = J * nb[s]
    H[..., 2] += K * m[..., 2]
    H += zs * B[i0:i1]
    mxh = np.cross(m, H)
    mxmxh = np.cross(m, mxh)
    out[i0:i1] = -pref * (mxh + alpha * mxmxh)
    if H.size == 0:
        return 0.0
    return float(np.sqrt(np.max(H[..., 0] ** 2 + H[..., 1] ** 2 + H[..., 2] ** 2)))


def jj_pair_sums(jx, jy, nbins):
    """Pair sums of J(r).J(r') and pair counts binned by |r - r'| (grid units).

    Unordered pairs, self pairs in bin 0; bin index is round-half-up of the
    separation.
    """
    nx, ny = jx.shape
    sums = np.zeros(nbins)
    counts = np.zeros(nbins, dtype=np.int64)
    for di in range(nx):
        for dj in range(-(ny - 1), ny):
            if di == 0 and dj < 0:
                continue
            b = int(np.sqrt(di * di + dj * dj) + 0.5)
            if b >= nbins:
                continue
            if dj >= 0:
                a = (slice(0, nx - di), slice(0, ny - dj))
                c = (slice(di, nx), slice(dj, ny))
            else:
                a = (slice(0, nx - di), slice(-dj, ny))
                c = (slice(di, nx), slice(0, ny + dj))
            sums[b] += np.sum(jx[a] * jx[c] + jy[a] * jy[c])
            counts[b] += (nx - di) * (ny - abs(dj))
    return sums, counts
