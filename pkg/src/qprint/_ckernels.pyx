# cython: language_level=3, boundscheck=False, wraparound=False, cdivision=True, initializedcheck=False
"""Compiled stencil kernels; same contracts and arithmetic order as _pykernels."""

from libc.math cimport sqrt

BACKEND = "cython"


def tdgl_step(double complex[:, ::1] psi, double complex[:, ::1] ux, double complex[:, ::1] uy,
              double dt, double dx, double complex[:, ::1] out, Py_ssize_t i0, Py_ssize_t i1):
    cdef Py_ssize_t nx = psi.shape[0], ny = psi.shape[1], i, j
    cdef double inv_dx2 = 1.0 / (dx * dx)
    cdef double ar, ai, qr, qi, pr, pi, ur, ui, g
    with nogil:
        for i in range(i0, i1):
            for j in range(ny):
                qr = psi[i, j].real
                qi = psi[i, j].imag
                ar = 0.0
                ai = 0.0
                if i < nx - 1:
                    ur = ux[i, j].real
                    ui = ux[i, j].imag
                    pr = psi[i + 1, j].real
                    pi = psi[i + 1, j].imag
                    ar = ar + ((ur * pr - ui * pi) - qr)
                    ai = ai + ((ur * pi + ui * pr) - qi)
                if i > 0:
                    ur = ux[i - 1, j].real
                    ui = ux[i - 1, j].imag
                    pr = psi[i - 1, j].real
                    pi = psi[i - 1, j].imag
                    ar = ar + ((ur * pr + ui * pi) - qr)
                    ai = ai + ((ur * pi - ui * pr) - qi)
                if j < ny - 1:
                    ur = uy[i, j].real
                    ui = uy[i, j].imag
                    pr = psi[i, j + 1].real
                    pi = psi[i, j + 1].imag
                    ar = ar + ((ur * pr - ui * pi) - qr)
                    ai = ai + ((ur * pi + ui * pr) - qi)
                if j > 0:
                    ur = uy[i, j - 1].real
                    ui = uy[i, j - 1].imag
                    pr = psi[i, j - 1].real
                    pi = psi[i, j - 1].imag
                    ar = ar + ((ur * pr + ui * pi) - qr)
                    ai = ai + ((ur * pi - ui * pr) - qi)
                g = 1.0 - (qr * qr + qi * qi)
                out[i, j].real = qr + dt * (ar * inv_dx2 + g * qr)
                out[i, j].imag = qi + dt * (ai * inv_dx2 + g * qi)


def llg_stage(double[:, :, ::1] M, double[:, :, ::1] B, double J, double K, double zs,
              double pref, double alpha, double[:, :, ::1] out, Py_ssize_t i0, Py_ssize_t i1):
    cdef Py_ssize_t nx = M.shape[0], ny = M.shape[1], i, j, c
    cdef double nb[3]
    cdef double h0, h1, h2, m0, m1, m2, a0, a1, a2, b0, b1, b2, hmax2 = 0.0, h2n
    with nogil:
        for i in range(i0, i1):
            for j in range(ny):
                for c in range(3):
                    nb[c] = 0.0
                    if i < nx - 1:
                        nb[c] = nb[c] + M[i + 1, j, c]
                    if i > 0:
                        nb[c] = nb[c] + M[i - 1, j, c]
                    if j < ny - 1:
                        nb[c] = nb[c] + M[i, j + 1, c]
                    if j > 0:
                        nb[c] = nb[c] + M[i, j - 1, c]
                m0 = M[i, j, 0]
                m1 = M[i, j, 1]
                m2 = M[i, j, 2]
                h0 = J * nb[0]
                h1 = J * nb[1]
                h2 = J * nb[2]
                h2 = h2 + K * m2
                h0 = h0 + zs * B[i, j, 0]
                h1 = h1 + zs * B[i, j, 1]
                h2 = h2 + zs * B[i, j, 2]
                h2n = h0 * h0 + h1 * h1 + h2 * h2
                if h2n > hmax2:
                    hmax2 = h2n
                a0 = m1 * h2 - m2 * h1
                a1 = m2 * h0 - m0 * h2
                a2 = m0 * h1 - m1 * h0
                b0 = m1 * a2 - m2 * a1
                b1 = m2 * a0 - m0 * a2
                b2 = m0 * a1 - m1 * a0
                out[i, j, 0] = -pref * (a0 + alpha * b0)
                out[i, j, 1] = -pref * (a1 + alpha * b1)
                out[i, j, 2] = -pref * (a2 + alpha * b2)
    return sqrt(hmax2)


def jj_pair_sums(double[:, ::1] jx, double[:, ::1] jy, Py_ssize_t nbins):
    import numpy as np
    cdef Py_ssize_t nx = jx.shape[0], ny = jx.shape[1], di, dj, i, j, b
    sums_a = np.zeros(nbins)
    counts_a = np.zeros(nbins, dtype=np.int64)
    cdef double[::1] sums = sums_a
    cdef long long[::1] counts = counts_a
    cdef double s
    with nogil:
        for di in range(nx):
            for dj in range(-(ny - 1), ny):
                if di == 0 and dj < 0:
                    continue
                b = <Py_ssize_t>(sqrt(<double>(di * di + dj * dj)) + 0.5)
                if b >= nbins:
                    continue
                s = 0.0
                for i in range(nx - di):
                    if dj >= 0:
                        for j in range(ny - dj):
                            s += jx[i, j] * jx[i + di, j + dj] + jy[i, j] * jy[i + di, j + dj]
                    else:
                        for j in range(-dj, ny):
                            s += jx[i, j] * jx[i + di, j + dj] + jy[i, j] * jy[i + di, j + dj]
                sums[b] += s
                counts[b] += (nx - di) * (ny - (dj if dj >= 0 else -dj))
    return sums_a, counts_a
