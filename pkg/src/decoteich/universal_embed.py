"""Decorations of the Farey tessellation from lambda lengths.

A :class:`LambdaAssignment` gives a positive number on every Farey edge.
The decoration it determines is normalized so that the triangle
``(oo, 0, 1)`` to the right of the doe sits over the rays of ``oo, 0, 1``;
every other vertex is obtained by extending across an edge whose endpoints
are already decorated, the witness being the third vertex of the triangle
on the near side.  Projecting to the boundary gives the circle map
``phi: Q -> R u {oo}``, which fixes ``oo``, ``0`` and ``1``.

Two construction paths are provided:

* :class:`Decoration` computes vertices on demand from their Farey parents,
  which is what the derivative numerics need (long chains such as the
  integers ``1, 2, ..., N``);
* :func:`build_decoration` fills all vertices up to a generation bound,
  one generation at a time, through the batched kernel.
"""

from __future__ import annotations

import math
import threading
from dataclasses import dataclass, field
from typing import Callable, Iterable, Mapping, Optional

import numpy as np

from . import kernels
from .errors import (CommonRayError, DegenerateWitnessError, DepthLimitError,
                     NotPinchedError, NumericBlowupError, OneSidedMismatchError)
from .farey import (INFINITY, MINUS_ONE, ONE, ZERO, PSL2Mat, Rational, apply_mobius,
                    are_neighbors, edge_key, enumerate_edges, enumerate_vertices,
                    farey_generation, farey_parents, format_edge, mat_of_edge,
                    parse_edge, vertices_by_generation)
from .minkowski import (HALF_PLANE, Horocycle, boundary_homogeneous, boundary_transport,
                        duality_from_horocycle, halfplane_center, lambda_halfplane)
from .mobius import from_light_cone_triple
from .realization import DEGENERACY_TOL, extend_across, realize_triangle

SQRT2 = math.sqrt(2.0)
BLOWUP_LIMIT = 1e300
MAX_BUILD_GENERATION = 20

EdgeKey = tuple


def _key(x, y) -> EdgeKey:
    return edge_key(x, y)


@dataclass(frozen=True, eq=False)
class LambdaAssignment:
    """Positive values on Farey edges: ``overrides``, else ``rule``, else ``default``.

    ``value_set`` may declare the (finite) set of values a procedural
    ``rule`` can take; it makes :func:`is_pinched` exact for such rules.
    """

    default: float = SQRT2
    overrides: Mapping[EdgeKey, float] = field(default_factory=dict)
    rule: Optional[Callable[[EdgeKey], float]] = None
    value_set: Optional[frozenset] = None

    def __post_init__(self):
        if not self.default > 0:
            raise ValueError("default lambda length must be positive")
        clean = {}
        for k, v in self.overrides.items():
            x, y = k
            if not are_neighbors(x, y):
                raise ValueError(f"{x},{y} is not a Farey edge")
            if not v > 0:
                raise ValueError(f"lambda length on {x},{y} must be positive")
            clean[_key(x, y)] = float(v)
        object.__setattr__(self, "overrides", clean)

    def __call__(self, x: Rational, y: Rational) -> float:
        return self.value(_key(x, y))

    def value(self, key: EdgeKey) -> float:
        v = self.overrides.get(key)
        if v is not None:
            return v
        if self.rule is not None:
            return float(self.rule(key))
        return self.default

    @property
    def is_finite_form(self) -> bool:
        return self.rule is None

    def with_overrides(self, extra: Mapping[EdgeKey, float]) -> "LambdaAssignment":
        merged = dict(self.overrides)
        merged.update({_key(*k): v for k, v in extra.items()})
        return LambdaAssignment(self.default, merged, self.rule, self.value_set)

    def pulled_back(self, m: PSL2Mat) -> "LambdaAssignment":
        """The assignment ``e -> self(m e)``."""
        base = self

        def rule(key):
            return base.value(_key(apply_mobius(m, key[0]), apply_mobius(m, key[1])))

        values = None
        if self.value_set is not None or self.rule is None:
            values = frozenset(_value_set(self))
        return LambdaAssignment(self.default, {}, rule, values)

    def to_json(self) -> dict:
        if self.rule is not None:
            raise ValueError("procedural assignments have no JSON form")
        return {"default": self.default,
                "overrides": {format_edge(k): v for k, v in sorted(
                    self.overrides.items(), key=lambda kv: format_edge(kv[0]))}}

    @classmethod
    def from_json(cls, obj: Mapping) -> "LambdaAssignment":
        default = float(obj.get("default", SQRT2))
        overrides = {parse_edge(k): float(v) for k, v in obj.get("overrides", {}).items()}
        return cls(default, overrides)


def _value_set(l: LambdaAssignment) -> set:
    if l.value_set is not None:
        vals = set(l.value_set)
    else:
        vals = {l.default}
    vals.update(l.overrides.values())
    return vals


# ---------------------------------------------------------------- pinching

@dataclass(frozen=True)
class PinchReport:
    K: float
    exact: bool
    pinched: bool
    by_depth: tuple = ()


def pinch_report(l: LambdaAssignment, depth: int = 8) -> PinchReport:
    """Smallest ``K`` with ``1/K <= lambda <= K``.

    Exact when the set of values is known; otherwise estimated on the edges
    of generation ``<= depth`` (a lower bound), and declared not pinched
    when the estimate still grows over the last two generations.
    """
    if l.rule is None or l.value_set is not None:
        vals = _value_set(l)
        K = max(max(vals), 1.0 / min(vals))
        return PinchReport(K, True, True)
    ks = []
    lo, hi = math.inf, 0.0
    seen = set()
    for d in range(depth + 1):
        for key in enumerate_edges(d):
            if key in seen:
                continue
            seen.add(key)
            v = l.value(key)
            lo, hi = min(lo, v), max(hi, v)
        ks.append(max(hi, 1.0 / lo))
    grows = len(ks) >= 3 and ks[-1] > ks[-2] > ks[-3]
    return PinchReport(ks[-1], False, not grows, tuple(ks))


def is_pinched(l: LambdaAssignment, depth: int = 8) -> Optional[float]:
    """``K`` if the assignment is (judged) pinched, else ``None``."""
    rep = pinch_report(l, depth)
    return rep.K if rep.pinched else None


# ---------------------------------------------------------------- decoration

def _ray(x: Rational) -> np.ndarray:
    # light-cone point of the horocycle at x of diameter 1/q^2 (height 1 at oo)
    p, q = x.p, x.q
    return np.array([p * p - q * q, -2.0 * p * q, p * p + q * q], dtype=float)


def _check_finite(x, u) -> None:
    if not np.all(np.isfinite(u)) or float(np.max(np.abs(u))) > BLOWUP_LIMIT:
        raise NumericBlowupError(f"light-cone coordinates at {x} exceed {BLOWUP_LIMIT:g}")


class Decoration:
    """A map from rationals to light-cone points realizing ``assignment``.

    Vertices missing from the table are computed on first access from their
    Farey parents.  ``generation`` is the bound up to which the table was
    filled eagerly (``None`` for a purely lazy decoration).
    """

    def __init__(self, assignment: LambdaAssignment, generation: Optional[int] = None,
                 points: Optional[dict] = None):
        self.assignment = assignment
        self.generation = generation
        self._lock = threading.RLock()
        if points is None:
            points = _base_points(assignment)
        self._points = dict(points)

    def __contains__(self, x) -> bool:
        return x in self._points

    def __getitem__(self, x: Rational) -> np.ndarray:
        return self.point(x)

    def point(self, x: Rational) -> np.ndarray:
        u = self._points.get(x)
        if u is not None:
            return u
        with self._lock:
            self._fill(x)
            return self._points[x]

    def _fill(self, x: Rational) -> None:
        pts = self._points
        lam = self.assignment
        stack = [x]
        while stack:
            y = stack[-1]
            if y in pts:
                stack.pop()
                continue
            a, b, w = farey_parents(y)
            missing = [z for z in (a, b, w) if z not in pts]
            if missing:
                stack.extend(missing)
                continue
            v = extend_across(pts[a], pts[b], pts[w], lam(y, a), lam(y, b))
            _check_finite(y, v)
            pts[y] = v
            stack.pop()

    def vertices(self) -> list:
        return sorted(self._points)

    def items(self):
        return [(x, self._points[x]) for x in self.vertices()]

    def center(self, x: Rational) -> float:
        return halfplane_center(self.point(x))

    def angle(self, x: Rational) -> float:
        u = self.point(x)
        t = math.atan2(u[1], u[0])
        return t + 2 * math.pi if t < 0 else t

    def horocycle(self, x: Rational, model: str = HALF_PLANE) -> Horocycle:
        from .minkowski import duality_to_horocycle
        return duality_to_horocycle(self.point(x), model)

    def lambda_length(self, x: Rational, y: Rational) -> float:
        u, v = self.point(x), self.point(y)
        return math.sqrt(-(u[0] * v[0] + u[1] * v[1] - u[2] * v[2]))


def _base_points(l: LambdaAssignment) -> dict:
    u_inf, u0, u1 = realize_triangle(_ray(INFINITY), _ray(ZERO), _ray(ONE),
                                     l(ZERO, ONE), l(ONE, INFINITY), l(INFINITY, ZERO))
    pts = {INFINITY: u_inf, ZERO: u0, ONE: u1}
    for x, u in pts.items():
        _check_finite(x, u)
    v = extend_across(u0, u_inf, u1, l(MINUS_ONE, ZERO), l(MINUS_ONE, INFINITY))
    _check_finite(MINUS_ONE, v)
    pts[MINUS_ONE] = v
    return pts


def build_decoration(l: LambdaAssignment, n: int,
                     generation_heights: bool = False) -> Decoration:
    """All vertices of generation ``<= n``, one generation per batch.

    With ``generation_heights`` the points are afterwards rescaled to height
    ``generation + 1`` along their rays; this discards the prescribed lambda
    lengths and only serves as a discrete, radially dense fallback.
    """
    if n < 0:
        raise ValueError("generation must be >= 0")
    if n > MAX_BUILD_GENERATION:
        raise DepthLimitError(f"generation {n} exceeds the build guard {MAX_BUILD_GENERATION}")
    pts = _base_points(l)
    layers = vertices_by_generation(n)
    for layer in layers[1:]:
        k = len(layer)
        U0 = np.empty((k, 3))
        U1 = np.empty((k, 3))
        W = np.empty((k, 3))
        L0 = np.empty(k)
        L1 = np.empty(k)
        for i, x in enumerate(layer):
            a, b, w = farey_parents(x)
            U0[i], U1[i], W[i] = pts[a], pts[b], pts[w]
            L0[i], L1[i] = l(x, a), l(x, b)
        V, status = kernels.extend_batch(U0, U1, W, L0, L1, DEGENERACY_TOL)
        if np.any(status == kernels.COMMON_RAY):
            raise CommonRayError("parents of a new vertex lie on a common ray")
        if np.any(status == kernels.DEGENERATE_WITNESS):
            raise DegenerateWitnessError("degenerate witness during extension")
        if not np.all(np.isfinite(V)) or float(np.max(np.abs(V))) > BLOWUP_LIMIT:
            raise NumericBlowupError(f"light-cone coordinates exceed {BLOWUP_LIMIT:g}")
        for i, x in enumerate(layer):
            pts[x] = V[i]
    if generation_heights:
        for x in list(pts):
            u = pts[x]
            pts[x] = u * ((farey_generation(x) + 1) / u[2])
    return Decoration(l, n, pts)


def max_lambda_error(dec: Decoration, l: LambdaAssignment, n: int) -> float:
    """Largest ``|realized - prescribed|`` over Farey edges of generation ``<= n``."""
    keys = sorted(enumerate_edges(n), key=lambda e: (e[0].sort_key(), e[1].sort_key()))
    U0 = np.array([dec.point(x) for x, _ in keys])
    U1 = np.array([dec.point(y) for _, y in keys])
    got = kernels.lambda_batch(U0, U1)
    want = np.array([l.value(k) for k in keys])
    return float(np.max(np.abs(got - want)))


def quad_flip_check(dec: Decoration, x: Rational, y: Rational) -> tuple[float, float]:
    """``(ptolemy prediction, realized lambda)`` for the other diagonal of the
    quadrilateral around the edge ``{x, y}``."""
    from .ptolemy import QuadLambdas, flip
    m = mat_of_edge(x, y)
    w1 = apply_mobius(m, ONE)
    w2 = apply_mobius(m, MINUS_ONE)
    lam = dec.lambda_length
    q = QuadLambdas(lam(x, w1), lam(w1, y), lam(y, w2), lam(w2, x), lam(x, y))
    return flip(q), lam(w1, w2)


# ---------------------------------------------------------------- circle map

def circle_map_samples(l: LambdaAssignment, n: int) -> list:
    """``(x, phi(x))`` for every vertex of generation ``<= n``, in increasing ``x``
    (``oo`` last)."""
    dec = build_decoration(l, n)
    return [(x, dec.center(x)) for x in enumerate_vertices(n)]


def is_circularly_monotone(points: Iterable[complex]) -> bool:
    """Whether the unit-circle points are in strictly increasing
    counterclockwise order, read cyclically."""
    angles = []
    for w in points:
        t = math.atan2(w.imag, w.real)
        angles.append(t + 2 * math.pi if t < 0 else t)
    n = len(angles)
    if n < 3:
        return len(set(angles)) == n
    descents = sum(1 for i in range(n) if angles[(i + 1) % n] <= angles[i])
    return descents == 1


def samples_are_monotone(samples) -> bool:
    return is_circularly_monotone(boundary_transport(y) for _, y in samples)


def decoration_is_monotone(dec: Decoration, xs: Iterable[Rational]) -> bool:
    """Circular order check computed from the light-cone points directly
    (better conditioned near ``oo`` than transporting ``phi(x)``)."""
    return is_circularly_monotone(complex(u[0], u[1]) / u[2]
                                  for u in (dec.point(x) for x in xs))


# ---------------------------------------------------------------- derivatives

@dataclass(frozen=True)
class DerivativeEstimate:
    estimate: float
    cauchy_gap: float
    left_estimate: float
    left_cauchy_gap: float

    @property
    def one_sided_ratio(self) -> float:
        return self.estimate / self.left_estimate


def _phi_int(dec: Decoration, m: int) -> float:
    return dec.center(Rational.of(m, 1))


def derivative_at_infinity(l: LambdaAssignment, n: int, ks=(2, 3, 4),
                           decoration: Optional[Decoration] = None) -> DerivativeEstimate:
    """Cesaro estimates of the derivative at ``oo`` of the normalized circle map.

    With ``a_j = phi(j) - phi(j-1)`` and ``phi(0) = 0`` the mean of
    ``a_1..a_n`` is ``phi(n)/n``.  ``cauchy_gap`` is the largest difference
    between the means over ``n`` and ``n k`` terms for ``k`` in ``ks``.  The
    same quantities on the negative integers give the left-hand values.
    """
    if n < 1:
        raise ValueError("depth must be >= 1")
    dec = decoration if decoration is not None else Decoration(l)

    def side(sign):
        mean = _phi_int(dec, sign * n) / (sign * n)
        gap = max(abs(mean - _phi_int(dec, sign * n * k) / (sign * n * k)) for k in ks)
        return mean, gap

    right, right_gap = side(1)
    left, left_gap = side(-1)
    return DerivativeEstimate(right, right_gap, left, left_gap)


def _neighbor(x: Rational) -> Rational:
    # some Farey neighbour of a finite x
    p, q = x.p, x.q
    if q == 1:
        return INFINITY
    q1 = pow(p, -1, q)
    return Rational.of((p * q1 - 1) // q, q1)


def derivative_at(l: LambdaAssignment, x: Rational, n: int = 16,
                  decoration: Optional[Decoration] = None) -> tuple[float, float]:
    """``(right, left)`` derivative estimates of the circle map at ``x``.

    ``x`` is moved to ``oo`` by an integral ``A`` with ``A(oo) = x``; the
    pulled-back assignment is decorated and renormalized, and the derivative
    at ``oo`` of the result is transported back through the two Moebius
    maps involved.  At ``x = oo`` this is :func:`derivative_at_infinity`.
    """
    dec = decoration if decoration is not None else Decoration(l)
    if x.is_infinite:
        est = derivative_at_infinity(l, n, decoration=dec)
        return est.estimate, est.left_estimate
    m = mat_of_edge(_neighbor(x), x)  # m(0) = neighbour, m(oo) = x
    pulled = l.pulled_back(m)
    est = derivative_at_infinity(pulled, n)
    b_inv = from_light_cone_triple(dec.point(apply_mobius(m, INFINITY)),
                                   dec.point(apply_mobius(m, ZERO)),
                                   dec.point(apply_mobius(m, ONE)))
    c_b = b_inv[1, 0]
    c_a = float(m.c)
    # phi(x + h) ~ phi(x) + c_a^2 h / (c_b^2 L); h < 0 corresponds to the
    # positive end of the pulled-back map and h > 0 to the negative end
    right = c_a * c_a / (c_b * c_b * est.left_estimate)
    left = c_a * c_a / (c_b * c_b * est.estimate)
    return right, left


def h1_decoration(l: LambdaAssignment, n: int, depth: int = 16,
                  mismatch_tol: float = 1e-6, pinch_depth: int = 8) -> Decoration:
    """Standard horocycles pushed through the circle map to first order.

    The horocycle of diameter ``1/q^2`` at ``p/q`` (height 1 at ``oo``) is
    moved to ``phi(p/q)`` and its size multiplied by ``|phi'(p/q)|``.
    """
    if is_pinched(l, pinch_depth) is None:
        raise NotPinchedError("assignment is not pinched")
    dec = build_decoration(l, n)
    pts = {}
    for x in enumerate_vertices(n):
        right, left = derivative_at(l, x, depth, decoration=dec)
        if abs(right - left) > mismatch_tol * max(abs(right), abs(left)):
            raise OneSidedMismatchError(
                f"one-sided derivatives at {x} disagree: {right!r} vs {left!r}")
        scale = 0.5 * (right + left)
        if x.is_infinite:
            h = Horocycle.half_plane(math.inf, scale)
        else:
            y = dec.center(x)
            h = Horocycle.half_plane(y, scale / (x.q * x.q))
        pts[x] = duality_from_horocycle(h)
    return Decoration(l, n, pts)


def discreteness_report(dec: Decoration, xs: Optional[Iterable[Rational]] = None) -> dict:
    """Finite-depth proxies for a discrete, radially dense decoration.

    Reports the smallest Euclidean distance between decorated points, the
    largest horocycle (disk-model diameter) and the largest angular gap
    between consecutive centres on the circle.
    """
    xs = list(dec.vertices() if xs is None else xs)
    P = np.array([dec.point(x) for x in xs])
    diff = P[:, None, :] - P[None, :, :]
    dist = np.sqrt(np.sum(diff * diff, axis=-1))
    np.fill_diagonal(dist, np.inf)
    diam = 2.0 / (P[:, 2] + 1.0)
    ang = np.sort(np.mod(np.arctan2(P[:, 1], P[:, 0]), 2 * math.pi))
    gaps = np.diff(np.concatenate([ang, [ang[0] + 2 * math.pi]]))
    return {"min_distance": float(np.min(dist)),
            "max_diameter": float(np.max(diam)),
            "max_angular_gap": float(np.max(gaps))}


# ---------------------------------------------------------------- counterexample

class _PiecewiseAffine:
    """Circle map affine on each ``[m, m+1]`` with slopes ``sqrt r`` for
    ``m >= 1``, ``1`` on ``[0, 1]`` and ``1/sqrt r`` for ``m <= -1``."""

    def __init__(self, r: float):
        self.root = math.sqrt(r)

    def spacing(self, m: int) -> float:
        if m >= 1:
            return self.root
        if m <= -1:
            return 1.0 / self.root
        return 1.0

    def at_integer(self, m: int) -> float:
        if m >= 1:
            return 1.0 + (m - 1) * self.root
        return m / self.root

    def horocycle(self, x: Rational) -> Horocycle:
        if x.is_infinite:
            return Horocycle.half_plane(math.inf, 1.0)
        m = x.p // x.q
        if x.q == 1:
            diam = math.sqrt(self.spacing(m - 1) * self.spacing(m))
            return Horocycle.half_plane(self.at_integer(m), diam)
        s = self.spacing(m)
        frac = (x.p - m * x.q) / x.q
        return Horocycle.half_plane(self.at_integer(m) + s * frac, s / (x.q * x.q))

    def lam(self, key: EdgeKey) -> float:
        return lambda_halfplane(self.horocycle(key[0]), self.horocycle(key[1]))


def counterexample_assignment(r: float) -> LambdaAssignment:
    """Pinched lambda lengths whose circle map has one-sided derivatives
    ``sqrt r`` and ``1/sqrt r`` at ``oo``.

    The target map is affine on every integer interval, with slope ``sqrt r``
    to the right of ``1`` and ``1/sqrt r`` to the left of ``0``; each
    interval carries the affine image of the standard horocycles and integer
    points get the geometric mean of the two adjacent scales.  The lambda
    lengths are read off with :func:`lambda_halfplane`.
    """
    if not 1.0 <= r <= 10.0:
        raise ValueError("ratio must lie in [1, 10]")
    target = _PiecewiseAffine(r)
    values = {SQRT2}
    for m in range(-4, 4):
        a, b = Rational.of(m, 1), Rational.of(m + 1, 1)
        half = Rational.of(2 * m + 1, 2)
        values.add(target.lam(_key(INFINITY, a)))
        values.add(target.lam(_key(a, b)))
        values.add(target.lam(_key(a, half)))
        values.add(target.lam(_key(half, b)))
    return LambdaAssignment(SQRT2, {}, target.lam, frozenset(values))


def counterexample_circle_map(r: float):
    """The target map of :func:`counterexample_assignment` (for tests)."""
    target = _PiecewiseAffine(r)
    return lambda x: target.horocycle(x).center
