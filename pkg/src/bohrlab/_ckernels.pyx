# cython: boundscheck=False, wraparound=False, cdivision=True
"""Compiled hot kernels; same contracts as ``_pykernels``."""
import numpy as np
cimport numpy as cnp
from libc.math cimport sqrt, fabs, hypot
from libc.stdlib cimport malloc, free

cnp.import_array()

ctypedef double complex cplx


cdef inline double _abs2(cplx v) nogil:
    return v.real * v.real + v.imag * v.imag


cdef double _norm2x2(cplx a, cplx b, cplx c, cplx d) nogil:
    # eigenvalues of M M^*; the discriminant as a sum of squares keeps full
    # precision when the singular values nearly coincide
    cdef double m11 = _abs2(a) + _abs2(b)
    cdef double m22 = _abs2(c) + _abs2(d)
    cdef cplx m12 = a * c.conjugate() + b * d.conjugate()
    cdef double s = m11 + m22
    cdef double disc = (m11 - m22) * (m11 - m22) + 4.0 * _abs2(m12)
    return sqrt(0.5 * (s + sqrt(disc)))


cdef double _norm_jacobi(cplx* m, int d) nogil:
    # one-sided (Hestenes) Jacobi on the columns of a scratch copy; column-major
    cdef int sweep, p, q, i, rotated
    cdef double alpha, beta, g, zeta, t, cs, sn, best
    cdef cplx gamma, ph, xp, xq
    for sweep in range(80):
        rotated = 0
        for p in range(d - 1):
            for q in range(p + 1, d):
                alpha = 0.0
                beta = 0.0
                gamma = 0.0
                for i in range(d):
                    alpha += _abs2(m[p * d + i])
                    beta += _abs2(m[q * d + i])
                    gamma += m[p * d + i].conjugate() * m[q * d + i]
                g = sqrt(_abs2(gamma))
                if g <= 1e-300 or g <= 1e-15 * sqrt(alpha * beta):
                    continue
                rotated = 1
                ph = gamma / g
                zeta = (beta - alpha) / (2.0 * g)
                if zeta >= 0.0:
                    t = 1.0 / (zeta + sqrt(1.0 + zeta * zeta))
                else:
                    t = -1.0 / (-zeta + sqrt(1.0 + zeta * zeta))
                cs = 1.0 / sqrt(1.0 + t * t)
                sn = cs * t
                for i in range(d):
                    xp = m[p * d + i]
                    xq = m[q * d + i] / ph
                    m[p * d + i] = cs * xp - sn * xq
                    m[q * d + i] = sn * xp + cs * xq
        if not rotated:
            break
    best = 0.0
    for p in range(d):
        alpha = 0.0
        for i in range(d):
            alpha += _abs2(m[p * d + i])
        if alpha > best:
            best = alpha
    return sqrt(best)


cdef double _norm(const cplx[:, ::1] a, cplx* scratch) nogil:
    cdef int d = a.shape[0]
    cdef int i, j
    if d == 1:
        return sqrt(_abs2(a[0, 0]))
    if d == 2:
        return _norm2x2(a[0, 0], a[0, 1], a[1, 0], a[1, 1])
    for j in range(d):
        for i in range(d):
            scratch[j * d + i] = a[i, j]
    return _norm_jacobi(scratch, d)


# Jacobi beats a LAPACK round trip only for small blocks.
JACOBI_MAX_DIM = 4


def coeff_norms(coeffs):
    cdef const cplx[:, :, ::1] c = np.ascontiguousarray(coeffs, dtype=np.complex128)
    cdef Py_ssize_t n_terms = c.shape[0], k
    cdef int d = c.shape[1]
    if d > JACOBI_MAX_DIM:
        return np.linalg.svd(np.asarray(c), compute_uv=False)[:, 0]
    out = np.empty(n_terms, dtype=np.float64)
    cdef double[::1] o = out
    if d == 1:
        for k in range(n_terms):
            o[k] = sqrt(_abs2(c[k, 0, 0]))
        return out
    cdef cplx* scratch = <cplx*> malloc(d * d * sizeof(cplx))
    try:
        with nogil:
            for k in range(n_terms):
                o[k] = _norm(c[k], scratch)
    finally:
        free(scratch)
    return out


cdef void _horner(const cplx[:, :, ::1] c, cplx zk, cplx[:, ::1] acc) noexcept nogil:
    cdef Py_ssize_t n_terms = c.shape[0], n
    cdef int d = c.shape[1], i, j
    for i in range(d):
        for j in range(d):
            acc[i, j] = c[n_terms - 1, i, j]
    for n in range(n_terms - 2, -1, -1):
        for i in range(d):
            for j in range(d):
                acc[i, j] = acc[i, j] * zk + c[n, i, j]


def matpoly_norms(coeffs, zs):
    cdef const cplx[:, :, ::1] c = np.ascontiguousarray(coeffs, dtype=np.complex128)
    cdef const cplx[::1] z = np.ascontiguousarray(zs, dtype=np.complex128)
    cdef Py_ssize_t n_terms = c.shape[0], m_pts = z.shape[0], k, n
    cdef int d = c.shape[1]
    cdef cplx acc1
    out = np.empty(m_pts, dtype=np.float64)
    cdef double[::1] o = out
    if d == 1:
        with nogil:
            for k in range(m_pts):
                acc1 = c[n_terms - 1, 0, 0]
                for n in range(n_terms - 2, -1, -1):
                    acc1 = acc1 * z[k] + c[n, 0, 0]
                o[k] = sqrt(_abs2(acc1))
        return out
    if d > JACOBI_MAX_DIM:
        vals_arr = np.empty((m_pts, d, d), dtype=np.complex128)
        _fill_values(c, z, vals_arr)
        return np.linalg.svd(vals_arr, compute_uv=False)[:, 0]
    acc_arr = np.empty((d, d), dtype=np.complex128)
    cdef cplx[:, ::1] acc = acc_arr
    cdef cplx* scratch = <cplx*> malloc(d * d * sizeof(cplx))
    try:
        with nogil:
            for k in range(m_pts):
                _horner(c, z[k], acc)
                o[k] = _norm(acc, scratch)
    finally:
        free(scratch)
    return out


cdef void _fill_values(const cplx[:, :, ::1] c, const cplx[::1] z, cplx[:, :, ::1] vals):
    cdef Py_ssize_t k
    with nogil:
        for k in range(z.shape[0]):
            _horner(c, z[k], vals[k])


def power_sums(norms, double r):
    cdef const double[::1] c = np.ascontiguousarray(norms, dtype=np.float64)
    cdef Py_ssize_t n
    cdef double rp = 1.0, lin = 0.0, sq_g = 0.0, sq_h = 0.0, term
    for n in range(c.shape[0]):
        lin += c[n] * rp
        term = c[n] * c[n] * rp * rp
        if n >= 1:
            sq_h += term
        if n >= 2:
            sq_g += term
        rp *= r
    if r == 0.0:
        return lin, 0.0, sq_h
    return lin, sq_g / r, sq_h
