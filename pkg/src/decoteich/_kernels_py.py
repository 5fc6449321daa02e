"""Pure-Python kernels, used when the compiled extension is unavailable.

Same signatures and the same floating-point operation order as
``_kernels.pyx``.  Status codes: 0 ok, 1 common ray, 2 degenerate witness.

Light-cone points are handled through real spinors ``(a, b)`` with
``u = (a^2 - b^2, -2ab, a^2 + b^2)``.  Then ``-<u0, u1> = 2 det(s0, s1)^2``,
and the point across the plane ``span(u0, u1)`` is the spinor
``x s0 + y s1`` with ``|x| = l1 / (sqrt2 |D|)``, ``|y| = l0 / (sqrt2 |D|)``.
Working with spinors avoids the cancellation in Minkowski pairings of large
light-cone vectors whose pairing is small.
"""

import math

import numpy as np

OK = 0
COMMON_RAY = 1
DEGENERATE_WITNESS = 2

_SQRT2 = math.sqrt(2.0)


def spinor(x, y, z):
    a2 = (z + x) * 0.5
    b2 = (z - x) * 0.5
    if a2 >= b2:
        a = math.sqrt(a2) if a2 > 0 else 0.0
        b = (-y * 0.5) / a if a > 0 else 0.0
    else:
        b = math.sqrt(b2)
        a = (-y * 0.5) / b
    return a, b


def extend_one(u0x, u0y, u0z, u1x, u1y, u1z, wx, wy, wz, l0, l1, tol):
    """Light-cone point across the plane ``span(u0, u1)`` from ``w``.

    Returns ``(vx, vy, vz, status)``.
    """
    a0, b0 = spinor(u0x, u0y, u0z)
    a1, b1 = spinor(u1x, u1y, u1z)
    aw, bw = spinor(wx, wy, wz)
    d = a0 * b1 - a1 * b0
    n0 = math.sqrt(a0 * a0 + b0 * b0)
    n1 = math.sqrt(a1 * a1 + b1 * b1)
    nw = math.sqrt(aw * aw + bw * bw)
    if abs(d) <= tol * n0 * n1:
        return 0.0, 0.0, 0.0, COMMON_RAY
    # w = xw s0 + yw s1 up to the common factor 1/d
    xw = aw * b1 - a1 * bw
    yw = a0 * bw - aw * b0
    if abs(xw) <= tol * nw * n1 or abs(yw) <= tol * n0 * nw:
        return 0.0, 0.0, 0.0, DEGENERATE_WITNESS
    scale = 1.0 / (_SQRT2 * abs(d))
    x = l1 * scale
    y = l0 * scale
    if (xw > 0) == (yw > 0):
        y = -y
    a = x * a0 + y * a1
    b = x * b0 + y * b1
    return a * a - b * b, -2.0 * a * b, a * a + b * b, OK


def extend_batch(U0, U1, W, L0, L1, tol=1e-12):
    U0 = np.ascontiguousarray(U0, dtype=float)
    U1 = np.ascontiguousarray(U1, dtype=float)
    W = np.ascontiguousarray(W, dtype=float)
    n = U0.shape[0]
    V = np.empty((n, 3))
    status = np.zeros(n, dtype=np.int32)
    for i in range(n):
        a, b, w = U0[i], U1[i], W[i]
        vx, vy, vz, st = extend_one(a[0], a[1], a[2], b[0], b[1], b[2],
                                    w[0], w[1], w[2], float(L0[i]), float(L1[i]), tol)
        V[i, 0] = vx
        V[i, 1] = vy
        V[i, 2] = vz
        status[i] = st
    return V, status


def lambda_one(u0x, u0y, u0z, u1x, u1y, u1z):
    """``sqrt(-<u0, u1>)`` as ``sqrt2 |det(s0, s1)|``."""
    a0, b0 = spinor(u0x, u0y, u0z)
    a1, b1 = spinor(u1x, u1y, u1z)
    return _SQRT2 * abs(a0 * b1 - a1 * b0)


def lambda_batch(U0, U1):
    """Row-wise lambda lengths of light-cone points."""
    U0 = np.ascontiguousarray(U0, dtype=float)
    U1 = np.ascontiguousarray(U1, dtype=float)
    n = U0.shape[0]
    out = np.empty(n)
    for i in range(n):
        a, b = U0[i], U1[i]
        out[i] = lambda_one(a[0], a[1], a[2], b[0], b[1], b[2])
    return out
