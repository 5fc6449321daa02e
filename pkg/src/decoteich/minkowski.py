"""Minkowski space R^{2,1}: light cone, horocycles and lambda lengths.

Vectors are plain ``numpy`` arrays of shape ``(3,)``.  Horocycles are
represented in either the upper half-plane or the Poincare disk, and are
converted to and from points of the positive light cone ``L+`` through the
affine duality ``u -> {w in H : <w, u> = -1}``.

The half-plane and the disk are identified by the Cayley map
``C(z) = (z - i) / (z + i)`` so that ``oo, 0, 1`` land on ``+1, -1, -i``.
Under this identification a half-plane horocycle centred at a finite ``x``
with Euclidean diameter ``c`` corresponds to the light-cone point

    ((x^2 - 1) / c, -2 x / c, (x^2 + 1) / c)

and the horizontal line at height ``H`` (centre ``oo``) to ``(H, 0, H)``.
Both come from the spinor ``(a, b) -> (a^2 - b^2, -2ab, a^2 + b^2)`` with
``(a, b) = (x, 1) / sqrt(c)`` or ``(sqrt(H), 0)``; in these terms the
lambda length is ``sqrt(2) |det(spinor0, spinor1)|``.
"""

from __future__ import annotations

import cmath
import math
from dataclasses import dataclass
from typing import Sequence, Union

import numpy as np

from .errors import CommonRayError, SameCenterError

VALIDATION_TOL = 1e-9
CONSISTENCY_TOL = 1e-12

HALF_PLANE = "half-plane"
DISK = "disk"

INF = math.inf

Real = Union[int, float]


def vec3(x: float, y: float, z: float) -> np.ndarray:
    return np.array([x, y, z], dtype=float)


def mink_inner(a: Sequence[float], b: Sequence[float]) -> float:
    """Minkowski pairing with quadratic form x^2 + y^2 - z^2."""
    return float(a[0] * b[0] + a[1] * b[1] - a[2] * b[2])


def is_light_cone(u: Sequence[float], tol: float = VALIDATION_TOL) -> bool:
    u = np.asarray(u, dtype=float)
    if not np.all(np.isfinite(u)) or u[2] <= 0:
        return False
    return abs(mink_inner(u, u)) <= tol * max(1.0, u[2] * u[2])


def check_light_cone(u: Sequence[float], tol: float = VALIDATION_TOL) -> np.ndarray:
    u = np.asarray(u, dtype=float)
    if not is_light_cone(u, tol):
        raise ValueError(f"not a point of the positive light cone: {u!r}")
    return u


def lambda_lightcone(u0: Sequence[float], u1: Sequence[float],
                     tol: float = VALIDATION_TOL) -> float:
    """Lambda length ``sqrt(-<u0, u1>)`` of two light-cone points.

    For points on the cone the value is computed as ``sqrt 2 |det(s0, s1)|``
    from their spinors, which avoids the cancellation in ``<u0, u1>``; the
    common-ray test is then ``|det| <= tol |s0| |s1|``.
    """
    if is_light_cone(u0) and is_light_cone(u1):
        (a0, b0), (a1, b1) = light_cone_to_spinor(u0), light_cone_to_spinor(u1)
        det = a0 * b1 - a1 * b0
        if abs(det) <= tol * math.sqrt(float(u0[2]) * float(u1[2])):
            raise CommonRayError(f"points lie on a common ray (det = {det!r})")
        return math.sqrt(2.0) * abs(det)
    p = mink_inner(u0, u1)
    scale = abs(u0[2] * u1[2]) if u0[2] and u1[2] else 1.0
    if p >= -tol * scale:
        raise CommonRayError(f"points lie on a common ray (<u0,u1> = {p!r})")
    return math.sqrt(-p)


def lambda_from_delta(delta: float) -> float:
    """Lambda length of two horocycles at signed distance ``delta``.

    ``delta`` is positive exactly when the horocycles are disjoint.
    """
    return math.sqrt(2.0 * math.exp(delta))


def delta_from_lambda(lam: float) -> float:
    return math.log(lam * lam / 2.0)


@dataclass(frozen=True)
class Horocycle:
    """A horocycle given by its centre on the boundary and its Euclidean size.

    ``size`` is the Euclidean diameter, except for the half-plane horocycle
    centred at infinity where it is the height of the horizontal line.
    """

    model: str
    center: Union[float, complex]
    size: float

    def __post_init__(self):
        if self.model not in (HALF_PLANE, DISK):
            raise ValueError(f"unknown model {self.model!r}")
        if not self.size > 0 or not math.isfinite(self.size):
            raise ValueError(f"horocycle size must be positive, got {self.size!r}")
        if self.model == DISK:
            if abs(abs(complex(self.center)) - 1.0) > VALIDATION_TOL:
                raise ValueError("disk horocycle centre must lie on the unit circle")
            if self.size >= 2.0:
                raise ValueError("disk horocycle diameter must be < 2")

    @property
    def at_infinity(self) -> bool:
        return self.model == HALF_PLANE and math.isinf(self.center)

    @classmethod
    def half_plane(cls, center, size) -> "Horocycle":
        c = INF if _is_infinite(center) else float(center)
        return cls(HALF_PLANE, c, float(size))

    @classmethod
    def disk(cls, center: complex, size: float) -> "Horocycle":
        return cls(DISK, complex(center), float(size))


def _is_infinite(x) -> bool:
    if isinstance(x, float) and math.isinf(x):
        return True
    q = getattr(x, "q", None)
    return q == 0 and getattr(x, "p", None) is not None


def spinor_to_light_cone(a: float, b: float) -> np.ndarray:
    return vec3(a * a - b * b, -2.0 * a * b, a * a + b * b)


def light_cone_to_spinor(u: Sequence[float]) -> tuple[float, float]:
    """A real spinor ``(a, b)`` with ``spinor_to_light_cone(a, b) == u``.

    Defined up to an overall sign; the sign is fixed by ``a >= 0`` (or
    ``b > 0`` when ``a == 0``).
    """
    x, y, z = float(u[0]), float(u[1]), float(u[2])
    a2 = max((z + x) / 2.0, 0.0)
    b2 = max((z - x) / 2.0, 0.0)
    if a2 >= b2:
        a = math.sqrt(a2)
        b = (-y / 2.0) / a
    else:
        b = math.sqrt(b2)
        a = (-y / 2.0) / b
        if a < 0:
            a, b = -a, -b
    return a, b


def boundary_projection(u: Sequence[float]) -> complex:
    """The centre ``Pi(u)`` of ``h(u)`` on the unit circle."""
    return complex(u[0], u[1]) / u[2]


def boundary_homogeneous(u: Sequence[float]) -> tuple[float, float]:
    """Homogeneous half-plane coordinates ``(p, q)`` of the centre of ``h(u)``.

    The centre is ``p / q``, with ``q == 0`` meaning infinity.  Chooses the
    better conditioned of the two equivalent formulas.
    """
    x, y, z = float(u[0]), float(u[1]), float(u[2])
    if z + x >= z - x:
        return z + x, -y
    return -y, z - x


def halfplane_center(u: Sequence[float], tol: float = CONSISTENCY_TOL) -> float:
    p, q = boundary_homogeneous(u)
    if abs(q) <= tol * abs(p):
        return INF
    return p / q


def duality_from_horocycle(h: Horocycle) -> np.ndarray:
    """The light-cone point ``u`` with ``h(u) == h``."""
    if h.model == DISK:
        z = 2.0 / h.size - 1.0
        zeta = complex(h.center) / abs(complex(h.center))
        return vec3(z * zeta.real, z * zeta.imag, z)
    if h.at_infinity:
        return vec3(h.size, 0.0, h.size)
    x = float(h.center)
    c = h.size
    return vec3((x * x - 1.0) / c, -2.0 * x / c, (x * x + 1.0) / c)


def duality_to_horocycle(u: Sequence[float], model: str = HALF_PLANE,
                         tol: float = CONSISTENCY_TOL) -> Horocycle:
    """The horocycle ``h(u)`` in the requested model."""
    u = np.asarray(u, dtype=float)
    x, y, z = u
    if model == DISK:
        return Horocycle.disk(complex(x, y) / z, 2.0 / (z + 1.0))
    if model != HALF_PLANE:
        raise ValueError(f"unknown model {model!r}")
    # centre a/b and diameter 1/b^2 from the spinor, which is better
    # conditioned than dividing by z - x
    a, b = light_cone_to_spinor(u)
    if abs(b) <= tol * abs(a):
        return Horocycle.half_plane(INF, a * a)
    return Horocycle.half_plane(a / b, 1.0 / (b * b))


def lambda_halfplane(h0: Horocycle, h1: Horocycle) -> float:
    """Lambda length of two half-plane horocycles.

    Finite centres ``u, v`` with diameters ``c, d`` give ``sqrt(2/(cd)) |u-v|``;
    a centre at infinity of height ``H`` paired with diameter ``d`` gives
    ``sqrt(2 H / d)``.
    """
    if h0.model != HALF_PLANE or h1.model != HALF_PLANE:
        raise ValueError("lambda_halfplane expects half-plane horocycles")
    if h0.at_infinity and h1.at_infinity:
        raise SameCenterError("both horocycles are centred at infinity")
    if h0.at_infinity or h1.at_infinity:
        inf_h, fin_h = (h0, h1) if h0.at_infinity else (h1, h0)
        return math.sqrt(2.0 * inf_h.size / fin_h.size)
    if h0.center == h1.center:
        raise SameCenterError(f"both horocycles are centred at {h0.center!r}")
    return math.sqrt(2.0 / (h0.size * h1.size)) * abs(h0.center - h1.center)


def boundary_transport(x) -> complex:
    """Cayley identification of ``R u {oo}`` with the unit circle.

    Accepts a ``farey.Rational``, any real number, or ``math.inf``.
    """
    if _is_infinite(x):
        return complex(1.0, 0.0)
    if hasattr(x, "p") and hasattr(x, "q"):
        p, q = x.p, x.q
        # (p - iq)/(p + iq) with exact integer numerators
        n2 = p * p + q * q
        return complex((p * p - q * q) / n2, (-2 * p * q) / n2)
    t = float(x)
    return (t - 1j) / (t + 1j)


def boundary_transport_inverse(w: complex) -> float:
    """Inverse Cayley map from the unit circle to ``R u {oo}``."""
    if abs(w - 1.0) < CONSISTENCY_TOL:
        return INF
    # w = (x - i)/(x + i)  =>  x = i (1 + w) / (1 - w)
    return (1j * (1 + w) / (1 - w)).real


def halfplane_to_disk(z: complex) -> complex:
    return (z - 1j) / (z + 1j)


def disk_to_halfplane(w: complex) -> complex:
    return 1j * (1 + w) / (1 - w)


def act_on_light_cone(m: Sequence[Sequence[float]], u: Sequence[float]) -> np.ndarray:
    """Action of ``[[a, b], [c, d]]`` in SL2(R) on ``L+`` (through spinors).

    Compatible with the Moebius action ``z -> (az + b)/(cz + d)`` on the
    half-plane and on horocycles.
    """
    (a, b), (c, d) = m
    s, t = light_cone_to_spinor(u)
    return spinor_to_light_cone(a * s + b * t, c * s + d * t)


def act_on_horocycle(m, h: Horocycle) -> Horocycle:
    return duality_to_horocycle(act_on_light_cone(m, duality_from_horocycle(h)), h.model)


def det3(a, b, c) -> float:
    return float(np.dot(np.cross(a, b), c))


def unit_circle_angle(w: complex) -> float:
    """Argument in ``[0, 2 pi)``."""
    t = cmath.phase(w)
    return t + 2 * math.pi if t < 0 else t
