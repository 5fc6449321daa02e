# cython: boundscheck=False, wraparound=False, cdivision=True
"""Compiled kernels; mirror ``_kernels_py`` operation for operation."""

import numpy as np
cimport numpy as cnp
from libc.math cimport sqrt, fabs

cnp.import_array()

DEF OK = 0
DEF COMMON_RAY = 1
DEF DEGENERATE_WITNESS = 2

cdef double SQRT2 = sqrt(2.0)


cdef inline void _spinor(double x, double y, double z, double* a, double* b) nogil:
    cdef double a2 = (z + x) * 0.5
    cdef double b2 = (z - x) * 0.5
    if a2 >= b2:
        if a2 > 0:
            a[0] = sqrt(a2)
            b[0] = (-y * 0.5) / a[0]
        else:
            a[0] = 0.0
            b[0] = 0.0
    else:
        b[0] = sqrt(b2)
        a[0] = (-y * 0.5) / b[0]


cdef int _extend(double u0x, double u0y, double u0z,
                 double u1x, double u1y, double u1z,
                 double wx, double wy, double wz,
                 double l0, double l1, double tol, double* out) nogil:
    cdef double a0, b0, a1, b1, aw, bw, d, n0, n1, nw, xw, yw, scale, x, y, a, b
    _spinor(u0x, u0y, u0z, &a0, &b0)
    _spinor(u1x, u1y, u1z, &a1, &b1)
    _spinor(wx, wy, wz, &aw, &bw)
    d = a0 * b1 - a1 * b0
    n0 = sqrt(a0 * a0 + b0 * b0)
    n1 = sqrt(a1 * a1 + b1 * b1)
    nw = sqrt(aw * aw + bw * bw)
    if fabs(d) <= tol * n0 * n1:
        return COMMON_RAY
    xw = aw * b1 - a1 * bw
    yw = a0 * bw - aw * b0
    if fabs(xw) <= tol * nw * n1 or fabs(yw) <= tol * n0 * nw:
        return DEGENERATE_WITNESS
    scale = 1.0 / (SQRT2 * fabs(d))
    x = l1 * scale
    y = l0 * scale
    if (xw > 0) == (yw > 0):
        y = -y
    a = x * a0 + y * a1
    b = x * b0 + y * b1
    out[0] = a * a - b * b
    out[1] = -2.0 * a * b
    out[2] = a * a + b * b
    return OK


def spinor(double x, double y, double z):
    cdef double a, b
    _spinor(x, y, z, &a, &b)
    return a, b


def extend_one(double u0x, double u0y, double u0z, double u1x, double u1y, double u1z,
               double wx, double wy, double wz, double l0, double l1, double tol):
    cdef double out[3]
    out[0] = 0.0
    out[1] = 0.0
    out[2] = 0.0
    cdef int st = _extend(u0x, u0y, u0z, u1x, u1y, u1z, wx, wy, wz, l0, l1, tol, out)
    return out[0], out[1], out[2], st


def extend_batch(U0, U1, W, L0, L1, double tol=1e-12):
    cdef double[:, ::1] u0 = np.ascontiguousarray(U0, dtype=np.float64)
    cdef double[:, ::1] u1 = np.ascontiguousarray(U1, dtype=np.float64)
    cdef double[:, ::1] w = np.ascontiguousarray(W, dtype=np.float64)
    cdef double[::1] l0 = np.ascontiguousarray(L0, dtype=np.float64)
    cdef double[::1] l1 = np.ascontiguousarray(L1, dtype=np.float64)
    cdef Py_ssize_t n = u0.shape[0], i
    V = np.zeros((n, 3), dtype=np.float64)
    status = np.zeros(n, dtype=np.int32)
    cdef double[:, ::1] v = V
    cdef int[::1] st = status
    with nogil:
        for i in range(n):
            st[i] = _extend(u0[i, 0], u0[i, 1], u0[i, 2],
                            u1[i, 0], u1[i, 1], u1[i, 2],
                            w[i, 0], w[i, 1], w[i, 2],
                            l0[i], l1[i], tol, &v[i, 0])
    return V, status


cdef inline double _lambda(double u0x, double u0y, double u0z,
                           double u1x, double u1y, double u1z) nogil:
    cdef double a0, b0, a1, b1
    _spinor(u0x, u0y, u0z, &a0, &b0)
    _spinor(u1x, u1y, u1z, &a1, &b1)
    return SQRT2 * fabs(a0 * b1 - a1 * b0)


def lambda_one(double u0x, double u0y, double u0z, double u1x, double u1y, double u1z):
    return _lambda(u0x, u0y, u0z, u1x, u1y, u1z)


def lambda_batch(U0, U1):
    cdef double[:, ::1] a = np.ascontiguousarray(U0, dtype=np.float64)
    cdef double[:, ::1] b = np.ascontiguousarray(U1, dtype=np.float64)
    cdef Py_ssize_t n = a.shape[0], i
    out = np.empty(n, dtype=np.float64)
    cdef double[::1] o = out
    with nogil:
        for i in range(n):
            o[i] = _lambda(a[i, 0], a[i, 1], a[i, 2], b[i, 0], b[i, 1], b[i, 2])
    return out
