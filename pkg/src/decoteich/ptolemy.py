"""Ptolemy transformation and the flip-invariant 2-form on lambda lengths.

A quadrilateral is described by its four sides ``a, b, c, d`` in cyclic
(clockwise) order and the diagonal ``e`` separating ``{a, b}`` from ``{c, d}``.
Exchanging the diagonal gives ``f`` with ``e f = a c + b d``; afterwards the
roles are relabelled ``(a, b, c, d, e) <- (b, c, d, a, f)``.

Tangent vectors are dictionaries keyed by variable *name*.  A
:class:`QuadLambdas` carries the names of its five variables, so that a
pushed-forward vector stays attached to the right edges after a flip.

All arithmetic is plain operator arithmetic, so ``fractions.Fraction``
inputs give exact results.
"""

from __future__ import annotations

from dataclasses import dataclass, field
from typing import Mapping, Sequence

ROLES = ("a", "b", "c", "d", "e")


@dataclass(frozen=True)
class QuadLambdas:
    a: float
    b: float
    c: float
    d: float
    e: float
    labels: tuple = field(default=ROLES)

    def __post_init__(self):
        for name in ROLES:
            if not getattr(self, name) > 0:
                raise ValueError(f"lambda length {name} must be positive")
        if len(self.labels) != 5 or len(set(self.labels)) != 5:
            raise ValueError("a quadrilateral needs five distinct variable labels")

    def values(self) -> tuple:
        return (self.a, self.b, self.c, self.d, self.e)

    def as_dict(self) -> dict:
        return dict(zip(self.labels, self.values()))

    def scaled(self, s) -> "QuadLambdas":
        return QuadLambdas(*(s * v for v in self.values()), labels=self.labels)


def flip(q: QuadLambdas):
    """The other diagonal ``f = (a c + b d) / e``."""
    return (q.a * q.c + q.b * q.d) / q.e


def _default_new_label(q: QuadLambdas) -> str:
    old = q.labels[4]
    if old == "e" and "f" not in q.labels:
        return "f"
    if old == "f" and "e" not in q.labels:
        return "e"
    candidate = old + "'"
    while candidate in q.labels:
        candidate += "'"
    return candidate


def flipped(q: QuadLambdas, new_label: str | None = None) -> QuadLambdas:
    """The quadrilateral after the flip, relabelled as ``(b, c, d, a, f)``.

    With the default labels, flipping twice returns the original labels
    rotated by two (``c, d, a, b, e``) and the original diagonal value.
    """
    if new_label is None:
        new_label = _default_new_label(q)
    la, lb, lc, ld, _ = q.labels
    return QuadLambdas(q.b, q.c, q.d, q.a, flip(q), labels=(lb, lc, ld, la, new_label))


def flip_pushforward(q: QuadLambdas, v: Mapping[str, float],
                     new_label: str | None = None) -> dict:
    """Differential of the flip applied to a tangent vector ``v``.

    ``v`` is keyed by ``q.labels``; the result is keyed by the labels of
    :func:`flipped` ``(q)``.  Only the diagonal component changes:
    ``v_f = (c v_a + a v_c + d v_b + b v_d - f v_e) / e``.
    """
    q2 = flipped(q, new_label)
    la, lb, lc, ld, le = q.labels
    va, vb, vc, vd, ve = (v.get(k, 0.0) for k in q.labels)
    f = q2.e
    vf = (q.c * va + q.a * vc + q.d * vb + q.b * vd - f * ve) / q.e
    return {lb: vb, lc: vc, ld: vd, la: va, q2.labels[4]: vf}


def omega_eval(x, y, z, v1: Sequence[float], v2: Sequence[float]):
    """``(dlnx ^ dlny + dlny ^ dlnz + dlnz ^ dlnx)(v1, v2)``.

    ``v1`` and ``v2`` list the components along ``x, y, z``.
    """
    p1 = (v1[0] / x, v1[1] / y, v1[2] / z)
    p2 = (v2[0] / x, v2[1] / y, v2[2] / z)
    total = 0
    for i in range(3):
        j = (i + 1) % 3
        total += p1[i] * p2[j] - p1[j] * p2[i]
    return total


def omega_named(values: Mapping[str, float], triple: Sequence[str],
                v1: Mapping[str, float], v2: Mapping[str, float]):
    """:func:`omega_eval` on the variables named by ``triple``."""
    x, y, z = (values[k] for k in triple)
    return omega_eval(x, y, z,
                      [v1.get(k, 0.0) for k in triple],
                      [v2.get(k, 0.0) for k in triple])


def omega_quad(q: QuadLambdas, v1: Mapping[str, float], v2: Mapping[str, float]):
    """``omega(a, b, e) + omega(c, d, e)`` for the two triangles of the quad."""
    la, lb, lc, ld, le = q.labels
    vals = q.as_dict()
    return (omega_named(vals, (la, lb, le), v1, v2)
            + omega_named(vals, (lc, ld, le), v1, v2))


def check_omega_invariance(q: QuadLambdas, v1: Mapping[str, float],
                           v2: Mapping[str, float]) -> float:
    """``|omega(a,b,e) + omega(c,d,e) - omega(b,c,f) - omega(d,a,f)|``.

    The right-hand side is evaluated in the flipped chart on the pushed
    forward tangent vectors.
    """
    q2 = flipped(q)
    w1 = flip_pushforward(q, v1)
    w2 = flip_pushforward(q, v2)
    # in the flipped chart (b, c, f) is (a', b', e') and (d, a, f) is (c', d', e')
    return abs(omega_quad(q, v1, v2) - omega_quad(q2, w1, w2))
