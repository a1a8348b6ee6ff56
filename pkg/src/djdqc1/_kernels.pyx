# cython: language_level=3, boundscheck=False, wraparound=False, cdivision=True, initializedcheck=False
"""Compiled hot kernels.  See ``_kernels_py`` for the reference semantics."""

import numpy as np
cimport numpy as cnp
from libc.math cimport sqrt, log2, cos, sin, fabs

cnp.import_array()

ctypedef double complex cplx

cdef double EIG_FLOOR = 1e-300


cdef inline double cabs2(cplx z) nogil:
    return z.real * z.real + z.imag * z.imag


cdef void tridiagonal_eigvals(double[::1] d, double[::1] e, int n) noexcept nogil:
    """Implicit QL with Wilkinson shifts; e[i] couples d[i], d[i+1]; e[n-1] = 0."""
    cdef int l, m, i, it
    cdef double g, r, s, c, p, f, b, dd
    cdef bint underflow
    for l in range(n):
        it = 0
        while True:
            m = l
            while m < n - 1:
                dd = fabs(d[m]) + fabs(d[m + 1])
                if fabs(e[m]) <= 2.2e-16 * dd or fabs(e[m]) < 1e-300:
                    break
                m += 1
            if m == l or it >= 60:
                break
            it += 1
            g = (d[l + 1] - d[l]) / (2.0 * e[l])
            r = sqrt(g * g + 1.0)
            g = d[m] - d[l] + e[l] / (g + (r if g >= 0.0 else -r))
            s = 1.0
            c = 1.0
            p = 0.0
            underflow = False
            i = m - 1
            while i >= l:
                f = s * e[i]
                b = c * e[i]
                r = sqrt(f * f + g * g)
                e[i + 1] = r
                if r == 0.0:
                    d[i + 1] -= p
                    e[m] = 0.0
                    underflow = True
                    break
                s = f / r
                c = g / r
                g = d[i + 1] - p
                r = (d[i] - g) * s + 2.0 * c * b
                p = s * r
                d[i + 1] = g + p
                g = c * r - b
                i -= 1
            if underflow:
                continue
            d[l] -= p
            e[l] = g
            e[m] = 0.0


cdef void hermitian_eigvals(cplx[:, ::1] a, double[::1] w, double[::1] e, cplx[::1] v, cplx[::1] p, int n) noexcept nogil:
    """Eigenvalues of Hermitian `a` (destroyed) into `w`, unsorted.

    Householder reduction to a real tridiagonal matrix, then implicit QL.
    `e`, `v`, `p` are scratch buffers of length >= n.
    """
    cdef int k, i, j, L
    cdef double alpha, sub, mag0, tau, kk
    cdef cplx ph, x0, dot
    for k in range(n - 2):
        L = n - k - 1
        sub = 0.0
        for i in range(1, L):
            sub += cabs2(a[k + 1 + i, k])
        x0 = a[k + 1, k]
        mag0 = sqrt(cabs2(x0))
        if sub == 0.0:
            w[k] = a[k, k].real
            e[k] = mag0
            continue
        alpha = sqrt(sub + mag0 * mag0)
        if mag0 > 0.0:
            ph = x0 / mag0
        else:
            ph = 1.0
        v[0] = x0 + ph * alpha
        for i in range(1, L):
            v[i] = a[k + 1 + i, k]
        tau = 0.0
        for i in range(L):
            tau += cabs2(v[i])
        tau = 2.0 / tau
        # p = tau * A22 v
        for i in range(L):
            dot = 0.0
            for j in range(L):
                dot = dot + a[k + 1 + i, k + 1 + j] * v[j]
            p[i] = tau * dot
        # K = tau/2 * v^dagger p (real), w = p - K v stored back in p
        kk = 0.0
        for i in range(L):
            kk += (v[i].conjugate() * p[i]).real
        kk *= 0.5 * tau
        for i in range(L):
            p[i] = p[i] - kk * v[i]
        for i in range(L):
            for j in range(L):
                a[k + 1 + i, k + 1 + j] = a[k + 1 + i, k + 1 + j] - v[i] * p[j].conjugate() - p[i] * v[j].conjugate()
        w[k] = a[k, k].real
        e[k] = alpha
    if n >= 2:
        w[n - 2] = a[n - 2, n - 2].real
        e[n - 2] = sqrt(cabs2(a[n - 1, n - 2]))
    w[n - 1] = a[n - 1, n - 1].real
    e[n - 1] = 0.0
    tridiagonal_eigvals(w, e, n)


cdef void sort_inplace(double[::1] w, int n) noexcept nogil:
    cdef int i, j
    cdef double v
    for i in range(1, n):
        v = w[i]
        j = i - 1
        while j >= 0 and w[j] > v:
            w[j + 1] = w[j]
            j -= 1
        w[j + 1] = v


cdef class Scratch:
    """Work buffers for an n x n eigenproblem."""
    cdef double[::1] w
    cdef double[::1] e
    cdef cplx[::1] v
    cdef cplx[::1] p
    cdef cplx[:, ::1] sv
    cdef cplx[:, ::1] sp

    def __cinit__(self, int n):
        self.w = np.empty(n)
        self.e = np.empty(n)
        self.v = np.empty(n, dtype=np.complex128)
        self.p = np.empty(n, dtype=np.complex128)
        self.sv = np.empty((n, n), dtype=np.complex128)
        self.sp = np.empty((n, n), dtype=np.complex128)


def eigvalsh(h):
    cdef cplx[:, ::1] a = np.array(h, dtype=np.complex128, order="C")
    cdef int n = a.shape[0]
    cdef Scratch sc = Scratch(n)
    w_arr = np.empty(n)
    cdef double[::1] w = w_arr
    with nogil:
        hermitian_eigvals(a, w, sc.e, sc.v, sc.p, n)
        sort_inplace(w, n)
    return w_arr


cdef double outcome_term(cplx[:, ::1] a, Scratch sc, int n) noexcept nogil:
    """p*S(sigma/p) for an unnormalized conditional state held in `a`."""
    cdef int i
    cdef double p = 0.0, h = 0.0, lam
    for i in range(n):
        p += a[i, i].real
    hermitian_eigvals(a, sc.w, sc.e, sc.v, sc.p, n)
    for i in range(n):
        lam = sc.w[i]
        if lam > EIG_FLOOR:
            h -= lam * log2(lam)
    if p > EIG_FLOOR:
        h += p * log2(p)
    return h


cdef double measured_entropy_c(
    const cplx[:, ::1] r00, const cplx[:, ::1] r01, const cplx[:, ::1] r11,
    double theta, double phi, Scratch sc, int n,
) noexcept nogil:
    cdef int i, j
    cdef double c = cos(0.5 * theta), s = sin(0.5 * theta)
    cdef double cc = c * c, ss = s * s, cs = c * s
    cdef cplx e
    e.real = cos(phi)
    e.imag = sin(phi)
    cdef cplx cross
    for i in range(n):
        for j in range(n):
            cross = e * r01[i, j] + (e * r01[j, i]).conjugate()
            sc.sv[i, j] = cc * r00[i, j] + ss * r11[i, j] + cs * cross
            sc.sp[i, j] = ss * r00[i, j] + cc * r11[i, j] - cs * cross
    return outcome_term(sc.sv, sc, n) + outcome_term(sc.sp, sc, n)


def measured_entropy(r00, r01, r11, double theta, double phi):
    cdef const cplx[:, ::1] a00 = np.ascontiguousarray(r00, dtype=np.complex128)
    cdef const cplx[:, ::1] a01 = np.ascontiguousarray(r01, dtype=np.complex128)
    cdef const cplx[:, ::1] a11 = np.ascontiguousarray(r11, dtype=np.complex128)
    cdef int n = a00.shape[0]
    cdef Scratch sc = Scratch(n)
    cdef double out
    with nogil:
        out = measured_entropy_c(a00, a01, a11, theta, phi, sc, n)
    return out


def measured_entropy_grid(r00, r01, r11, thetas, phis):
    cdef const cplx[:, ::1] a00 = np.ascontiguousarray(r00, dtype=np.complex128)
    cdef const cplx[:, ::1] a01 = np.ascontiguousarray(r01, dtype=np.complex128)
    cdef const cplx[:, ::1] a11 = np.ascontiguousarray(r11, dtype=np.complex128)
    cdef const double[::1] th = np.ascontiguousarray(thetas, dtype=np.float64)
    cdef const double[::1] ph = np.ascontiguousarray(phis, dtype=np.float64)
    cdef int n = a00.shape[0]
    cdef int nt = th.shape[0], nph = ph.shape[0]
    cdef Scratch sc = Scratch(n)
    out_arr = np.empty((nt, nph))
    cdef double[:, ::1] out = out_arr
    cdef int i, j
    with nogil:
        for i in range(nt):
            for j in range(nph):
                out[i, j] = measured_entropy_c(a00, a01, a11, th[i], ph[j], sc, n)
    return out_arr


def product_rotate(rho, angles):
    cdef cplx[:, ::1] a = np.array(rho, dtype=np.complex128, order="C")
    cdef const double[::1] ang = np.ascontiguousarray(angles, dtype=np.float64)
    cdef int d = a.shape[0]
    cdef int m = ang.shape[0] // 2
    cdef int q, i, k, bit
    cdef double c, s
    cdef cplx e, u00, u01, u10, u11, x0, x1
    with nogil:
        for q in range(m):
            c = cos(0.5 * ang[2 * q])
            s = sin(0.5 * ang[2 * q])
            e.real = cos(ang[2 * q + 1])
            e.imag = sin(ang[2 * q + 1])
            # U = [[c, s], [e s, -e c]]
            u00 = c
            u01 = s
            u10 = e * s
            u11 = -e * c
            bit = 1 << (m - 1 - q)
            # rows: rho <- U^dagger rho
            for i in range(d):
                if i & bit:
                    continue
                for k in range(d):
                    x0 = a[i, k]
                    x1 = a[i | bit, k]
                    a[i, k] = u00.conjugate() * x0 + u10.conjugate() * x1
                    a[i | bit, k] = u01.conjugate() * x0 + u11.conjugate() * x1
            # columns: rho <- rho U
            for i in range(d):
                if i & bit:
                    continue
                for k in range(d):
                    x0 = a[k, i]
                    x1 = a[k, i | bit]
                    a[k, i] = x0 * u00 + x1 * u10
                    a[k, i | bit] = x0 * u01 + x1 * u11
    return np.asarray(a)
