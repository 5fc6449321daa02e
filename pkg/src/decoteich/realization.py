"""Realizing prescribed lambda lengths by points of the light cone.

* :func:`realize_triangle` -- three points on three given rays with
  prescribed pairwise lambda lengths.
* :func:`extend_across` -- the fourth point of a decorated quadrilateral,
  on the far side of the plane through the shared pair.
* :func:`sector_length` -- horocyclic arc length cut out in a triangle corner.

All solutions are closed form.
"""

from __future__ import annotations

import math
from typing import Sequence

import numpy as np

from . import kernels
from .errors import CommonRayError, DegenerateRaysError, DegenerateWitnessError
from .minkowski import mink_inner, vec3

DEGENERACY_TOL = 1e-12


def _unit_ray(r: Sequence[float]) -> np.ndarray:
    r = np.asarray(r, dtype=float)
    if r[2] <= 0 or abs(mink_inner(r, r)) > 1e-9 * r[2] * r[2]:
        raise ValueError(f"{r!r} does not span a ray of the positive light cone")
    return r / r[2]


def realize_triangle(r0, r1, r2, l0: float, l1: float, l2: float):
    """Points ``u_i`` on the rays ``r_i`` with ``lambda(u_j, u_k) = l_i``.

    With ``u_i = t_i r_i`` the conditions read ``t_j t_k g_i = l_i^2`` where
    ``g_i = -<r_j, r_k>``, solved by ``t_i = sqrt(m_j m_k / m_i)`` for
    ``m_i = l_i^2 / g_i``.
    """
    if min(l0, l1, l2) <= 0:
        raise ValueError("lambda lengths must be positive")
    r = [_unit_ray(r0), _unit_ray(r1), _unit_ray(r2)]
    det = float(np.dot(np.cross(r[0], r[1]), r[2]))
    if abs(det) <= DEGENERACY_TOL:
        raise DegenerateRaysError("rays are not linearly independent")
    lam = (l0, l1, l2)
    m = []
    for i in range(3):
        j, k = (i + 1) % 3, (i + 2) % 3
        g = -mink_inner(r[j], r[k])
        if g <= DEGENERACY_TOL:
            raise DegenerateRaysError("two rays coincide")
        m.append(lam[i] * lam[i] / g)
    t = [math.sqrt(m[(i + 1) % 3] * m[(i + 2) % 3] / m[i]) for i in range(3)]
    return tuple(t[i] * r[i] for i in range(3))


def extend_across(u0, u1, w, l0: float, l1: float) -> np.ndarray:
    """The light-cone point ``v`` with ``lambda(v, u0) = l0``, ``lambda(v, u1) = l1``
    lying on the side of ``span(u0, u1)`` opposite to ``w``.

    Writing ``v = a u0 + b u1 + g n`` with ``n`` Minkowski-orthogonal to
    ``u0`` and ``u1`` gives ``a = l1^2/m``, ``b = l0^2/m`` (``m = -<u0,u1>``)
    and ``g^2 = 2 a b m / <n, n>``; the sign of ``g`` selects the side.
    The kernel evaluates the same point in spinor coordinates, which avoids
    the cancellation of the cross-product form at deep generations.
    """
    if l0 <= 0 or l1 <= 0:
        raise ValueError("lambda lengths must be positive")
    vx, vy, vz, status = kernels.extend_one(
        float(u0[0]), float(u0[1]), float(u0[2]),
        float(u1[0]), float(u1[1]), float(u1[2]),
        float(w[0]), float(w[1]), float(w[2]),
        float(l0), float(l1), DEGENERACY_TOL)
    if status == kernels.COMMON_RAY:
        raise CommonRayError("u0 and u1 lie on a common ray")
    if status == kernels.DEGENERATE_WITNESS:
        raise DegenerateWitnessError("witness lies in the plane spanned by u0 and u1")
    return vec3(vx, vy, vz)


def side_of(u0, u1, v) -> float:
    """Sign of ``det[u0, u1, v]``."""
    return float(np.sign(np.dot(np.cross(u0, u1), v)))


def sector_length(l0: float, l1: float, l2: float, i: int) -> float:
    """Horocyclic length ``2 l_i / (l_j l_k)`` at corner ``i``."""
    lam = (l0, l1, l2)
    if min(lam) <= 0:
        raise ValueError("lambda lengths must be positive")
    j, k = (i + 1) % 3, (i + 2) % 3
    return 2.0 * lam[i] / (lam[j] * lam[k])
