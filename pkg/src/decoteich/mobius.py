"""Real Moebius transformations as 2x2 ``numpy`` arrays with determinant 1."""

from __future__ import annotations

import math

import numpy as np

from .minkowski import boundary_homogeneous


def normalize_sl2(m) -> np.ndarray:
    """Scale to determinant 1 and fix the sign (first entry of magnitude
    above ``1e-12`` relative to the norm is positive)."""
    m = np.asarray(m, dtype=float).reshape(2, 2)
    det = m[0, 0] * m[1, 1] - m[0, 1] * m[1, 0]
    if not det > 0:
        raise ValueError(f"matrix is not orientation preserving (det = {det!r})")
    m = m / math.sqrt(det)
    return canonical_sign(m)


def canonical_sign(m) -> np.ndarray:
    m = np.array(m, dtype=float).reshape(2, 2)
    flat = m.ravel()
    scale = float(np.max(np.abs(flat)))
    for v in flat:
        if abs(v) > 1e-12 * scale:
            return -m if v < 0 else m
    return m


def psl_distance(m1, m2) -> float:
    """Frobenius distance between two elements of PSL2(R), minimized over sign."""
    m1 = np.asarray(m1, dtype=float)
    m2 = np.asarray(m2, dtype=float)
    return float(min(np.linalg.norm(m1 - m2), np.linalg.norm(m1 + m2)))


def from_homogeneous_triple(h0, h1, h2) -> np.ndarray:
    """The Moebius map sending ``oo, 0, 1`` to the points with homogeneous
    coordinates ``h0, h1, h2``.

    Writing the columns as ``alpha h0`` and ``beta h1``, the image of ``1`` is
    ``alpha h0 + beta h1`` which must be proportional to ``h2``.
    """
    v0 = np.asarray(h0, dtype=float)
    v1 = np.asarray(h1, dtype=float)
    v2 = np.asarray(h2, dtype=float)
    a = np.column_stack([v0, v1])
    alpha, beta = np.linalg.solve(a, v2)
    m = np.column_stack([alpha * v0, beta * v1])
    det = m[0, 0] * m[1, 1] - m[0, 1] * m[1, 0]
    if det < 0:
        raise ValueError("the three points are not in positive cyclic order")
    return normalize_sl2(m)


def from_light_cone_triple(u_inf, u_zero, u_one) -> np.ndarray:
    """The Moebius map sending ``oo, 0, 1`` to the centres of the horocycles
    dual to the three light-cone points."""
    return from_homogeneous_triple(boundary_homogeneous(u_inf),
                                   boundary_homogeneous(u_zero),
                                   boundary_homogeneous(u_one))


def from_point_triple(y_inf, y_zero, y_one) -> np.ndarray:
    """As :func:`from_homogeneous_triple` for points of ``R u {oo}``."""
    def hom(y):
        return (1.0, 0.0) if math.isinf(y) else (float(y), 1.0)
    return from_homogeneous_triple(hom(y_inf), hom(y_zero), hom(y_one))


def apply(m, x: float) -> float:
    """``(a x + b) / (c x + d)`` on ``R u {oo}``."""
    (a, b), (c, d) = np.asarray(m, dtype=float)
    if math.isinf(x):
        return math.inf if c == 0 else a / c
    den = c * x + d
    if den == 0:
        return math.inf
    return (a * x + b) / den


def inverse(m) -> np.ndarray:
    (a, b), (c, d) = np.asarray(m, dtype=float)
    return np.array([[d, -b], [-c, a]])


def trace(m) -> float:
    m = np.asarray(m, dtype=float)
    return float(m[0, 0] + m[1, 1])
