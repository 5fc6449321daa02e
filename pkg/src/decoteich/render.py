"""SVG pictures in the Poincare disk.

Geodesics are arcs of circles orthogonal to the unit circle (or diameters),
horocycles are circles internally tangent to it.  Output is a pure function
of the input: fixed number formatting and fixed drawing order.
"""

from __future__ import annotations

import math
from typing import Iterable, Sequence

from .farey import enumerate_edges, iter_edges_sorted
from .minkowski import boundary_projection

SIZE = 800


def _f(v: float) -> str:
    s = f"{v:.6f}"
    return "0.000000" if s == "-0.000000" else s


def _xy(w: complex) -> tuple[str, str]:
    # math orientation on screen: y axis flipped
    return _f(w.real), _f(-w.imag)


def geodesic_path(p: complex, q: complex) -> str:
    """SVG path data for the geodesic between boundary points ``p`` and ``q``."""
    px, py = _xy(p)
    qx, qy = _xy(q)
    cos_t = (p * q.conjugate()).real
    if cos_t <= -1 + 1e-12 or abs(p - q) < 1e-12:
        return f"M {px} {py} L {qx} {qy}"
    c = (p + q) / (1 + cos_t)
    r = abs(c - p)
    a, b = p - c, q - c
    cross = a.real * b.imag - a.imag * b.real
    sweep = 1 if cross > 0 else 0
    return f"M {px} {py} A {_f(r)} {_f(r)} 0 0 {sweep} {qx} {qy}"


def horocycle_circle(u: Sequence[float]) -> tuple[complex, float]:
    """Euclidean centre and radius of the disk-model horocycle dual to ``u``."""
    zeta = boundary_projection(u)
    zeta = zeta / abs(zeta)
    d = 2.0 / (u[2] + 1.0)
    return (1.0 - d / 2.0) * zeta, d / 2.0


def svg_document(paths: Iterable[str], circles: Iterable[tuple[complex, float]] = (),
                 size: int = SIZE) -> str:
    lines = [
        '<?xml version="1.0" encoding="UTF-8"?>',
        f'<svg xmlns="http://www.w3.org/2000/svg" width="{size}" height="{size}" '
        'viewBox="-1.05 -1.05 2.1 2.1">',
        '<circle cx="0" cy="0" r="1" fill="none" stroke="black" stroke-width="0.004"/>',
        '<g fill="none" stroke="#1f4e8c" stroke-width="0.002">',
    ]
    lines += [f'<path d="{d}"/>' for d in paths]
    lines.append("</g>")
    circles = list(circles)
    if circles:
        lines.append('<g fill="none" stroke="#b5452a" stroke-width="0.0015">')
        for c, r in circles:
            cx, cy = _xy(c)
            lines.append(f'<circle cx="{cx}" cy="{cy}" r="{_f(r)}"/>')
        lines.append("</g>")
    lines.append("</svg>")
    return "\n".join(lines) + "\n"


def render_decoration(dec, depth: int, horocycles: bool = False, size: int = SIZE) -> str:
    """Tessellation edges of generation ``<= depth`` as decorated by ``dec``."""
    edges = iter_edges_sorted(enumerate_edges(depth))
    paths = [geodesic_path(boundary_projection(dec.point(x)), boundary_projection(dec.point(y)))
             for x, y in edges]
    circles = []
    if horocycles:
        verts = sorted({x for e in edges for x in e})
        circles = [horocycle_circle(dec.point(x)) for x in verts]
    return svg_document(paths, circles, size)


def render_lifts(lifts, horocycles: bool = False, size: int = SIZE) -> str:
    """The triangles of a developed surface."""
    paths, circles = [], []
    for lift in lifts:
        pts = [boundary_projection(u) for u in lift.corners]
        for i in range(3):
            paths.append(geodesic_path(pts[i], pts[(i + 1) % 3]))
        if horocycles:
            circles.extend(horocycle_circle(u) for u in lift.corners)
    return svg_document(paths, circles, size)


def arc_is_orthogonal(p: complex, q: complex) -> bool:
    """Check used by tests: the arc circle meets the unit circle at right angles."""
    cos_t = (p * q.conjugate()).real
    c = (p + q) / (1 + cos_t)
    r = abs(c - p)
    return math.isclose(abs(c) ** 2, 1 + r * r, rel_tol=1e-9)
