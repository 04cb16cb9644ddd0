# cython: boundscheck=False, wraparound=False, cdivision=True
"""Compiled twins of the kernels in pure.py."""

import numpy as np

cimport numpy as cnp
from libc.math cimport atan2, cos, fabs, pow, sin, sqrt

cnp.import_array()


def gauge_ellipsoid(pts, mat, center):
    cdef const double[:, ::1] p = np.ascontiguousarray(np.atleast_2d(pts), dtype=np.float64)
    cdef const double[:, ::1] m = np.ascontiguousarray(mat, dtype=np.float64)
    cdef const double[::1] c = np.ascontiguousarray(center, dtype=np.float64)
    cdef Py_ssize_t npts = p.shape[0], n = p.shape[1], i, j, k
    out_arr = np.empty(npts, dtype=np.float64)
    cdef double[::1] out = out_arr
    cdef double acc, dj
    cdef double[::1] d = np.empty(n, dtype=np.float64)
    for i in range(npts):
        for j in range(n):
            d[j] = p[i, j] - c[j]
        acc = 0.0
        for j in range(n):
            dj = 0.0
            for k in range(n):
                dj += m[j, k] * d[k]
            acc += d[j] * dj
        out[i] = sqrt(acc)
    return out_arr


def gauge_superellipsoid(pts, inv_axes, exponent, center):
    cdef const double[:, ::1] p = np.ascontiguousarray(np.atleast_2d(pts), dtype=np.float64)
    cdef const double[::1] ia = np.ascontiguousarray(inv_axes, dtype=np.float64)
    cdef const double[::1] c = np.ascontiguousarray(center, dtype=np.float64)
    cdef double q = float(exponent)
    cdef Py_ssize_t npts = p.shape[0], n = p.shape[1], i, j, k
    # body exponents are even integers, so |d|^q is (d*d)^(q/2) by repeated
    # multiplication -- an order of magnitude cheaper than libm pow per term
    cdef Py_ssize_t iq = <Py_ssize_t>q
    cdef Py_ssize_t half = iq // 2
    cdef bint even_int = q == <double>iq and iq >= 2 and iq % 2 == 0
    out_arr = np.empty(npts, dtype=np.float64)
    cdef double[::1] out = out_arr
    cdef double acc, d2, term
    for i in range(npts):
        acc = 0.0
        if even_int:
            for j in range(n):
                d2 = (p[i, j] - c[j]) * ia[j]
                d2 = d2 * d2
                term = d2
                for k in range(half - 1):
                    term *= d2
                acc += term
        else:
            for j in range(n):
                acc += pow(fabs((p[i, j] - c[j]) * ia[j]), q)
        out[i] = pow(acc, 1.0 / q)
    return out_arr


def gauge_perturbed_ellipse(pts, axis_a, axis_b, eps, freq, center):
    cdef const double[:, ::1] p = np.ascontiguousarray(np.atleast_2d(pts), dtype=np.float64)
    cdef const double[::1] c = np.ascontiguousarray(center, dtype=np.float64)
    cdef double a = axis_a, b = axis_b, e = eps
    cdef double k = freq
    cdef Py_ssize_t npts = p.shape[0], i
    out_arr = np.empty(npts, dtype=np.float64)
    cdef double[::1] out = out_arr
    cdef double dx, dy, rho, theta, r0
    for i in range(npts):
        dx = p[i, 0] - c[0]
        dy = p[i, 1] - c[1]
        rho = sqrt(dx * dx + dy * dy)
        theta = atan2(dy, dx)
        r0 = a * b / sqrt(b * b * cos(theta) ** 2 + a * a * sin(theta) ** 2)
        out[i] = rho / (r0 * (1.0 + e * cos(k * theta)))
    return out_arr


def gauge_polygon(pts, normals, offsets):
    cdef const double[:, ::1] p = np.ascontiguousarray(np.atleast_2d(pts), dtype=np.float64)
    cdef const double[:, ::1] nrm = np.ascontiguousarray(normals, dtype=np.float64)
    cdef const double[::1] off = np.ascontiguousarray(offsets, dtype=np.float64)
    cdef Py_ssize_t npts = p.shape[0], ne = nrm.shape[0], i, j
    out_arr = np.empty(npts, dtype=np.float64)
    cdef double[::1] out = out_arr
    cdef double best, v
    for i in range(npts):
        best = -1e300
        for j in range(ne):
            v = (p[i, 0] * nrm[j, 0] + p[i, 1] * nrm[j, 1]) / off[j]
            if v > best:
                best = v
        out[i] = best
    return out_arr


def cheb_u_series(u, coeffs):
    cdef const double[::1] uu = np.ascontiguousarray(np.atleast_1d(u), dtype=np.float64)
    cdef const double[::1] cc = np.ascontiguousarray(coeffs, dtype=np.float64)
    cdef Py_ssize_t npts = uu.shape[0], nc = cc.shape[0], i, k
    out_arr = np.empty(npts, dtype=np.float64)
    cdef double[::1] out = out_arr
    cdef double b1, b2, tmp, x
    for i in range(npts):
        x = uu[i]
        b1 = 0.0
        b2 = 0.0
        for k in range(nc - 1, -1, -1):
            tmp = cc[k] + 2.0 * x * b1 - b2
            b2 = b1
            b1 = tmp
        out[i] = b1
    return out_arr


def cheb_t1_series(u, coeffs):
    cdef const double[::1] uu = np.ascontiguousarray(np.atleast_1d(u), dtype=np.float64)
    cdef const double[::1] cc = np.ascontiguousarray(coeffs, dtype=np.float64)
    cdef Py_ssize_t npts = uu.shape[0], nc = cc.shape[0], i, k
    out_arr = np.empty(npts, dtype=np.float64)
    cdef double[::1] out = out_arr
    cdef double b1, b2, tmp, x
    for i in range(npts):
        x = uu[i]
        b1 = 0.0
        b2 = 0.0
        for k in range(nc - 1, -1, -1):
            tmp = cc[k] + 2.0 * x * b1 - b2
            b2 = b1
            b1 = tmp
        out[i] = x * b1 - b2
    return out_arr
