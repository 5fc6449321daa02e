"""Decorated punctured surfaces from ideal triangulations.

A triangulation is a list of triangles, each a counterclockwise triple of
half-edge labels.  An edge ``e`` appears exactly twice, once as ``"e"`` and
once as ``"~e"``; the two occurrences are glued with opposite orientations.
Side ``i`` of a triangle runs from corner ``i`` to corner ``i + 1``.

Developing: the first triangle of a path is lifted to the rays over
``oo, 0, 1`` with the prescribed lambda lengths, and each crossed side adds
the neighbouring triangle by extending across the shared edge, with the
corner opposite that edge as witness.  Holonomies are read off by matching
the corner triples of the first and last lifts.
"""

from __future__ import annotations

from collections import deque
from dataclasses import dataclass
from functools import cached_property
from typing import Mapping, Optional, Sequence

import numpy as np

from .errors import (BadEulerError, NotClosedError, NotHyperbolicError, NotOrientableError,
                     NumericBlowupError, OpenPathError, SelfFoldedError)
from .minkowski import boundary_homogeneous
from .mobius import from_light_cone_triple, trace
from .ptolemy import omega_eval
from .realization import extend_across, realize_triangle, sector_length

BLOWUP_LIMIT = 1e300

_RAYS = (np.array([1.0, 0.0, 1.0]),    # oo
         np.array([-1.0, 0.0, 1.0]),   # 0
         np.array([0.0, -2.0, 2.0]))   # 1


def edge_id(label: str) -> str:
    return label[1:] if label.startswith("~") else label


def mate(label: str) -> str:
    return label[1:] if label.startswith("~") else "~" + label


@dataclass(frozen=True)
class IdealTriangulation:
    triangles: tuple

    @classmethod
    def from_lists(cls, triangles: Sequence[Sequence]) -> "IdealTriangulation":
        tris = tuple(tuple(str(h) for h in t) for t in triangles)
        for t in tris:
            if len(t) != 3:
                raise NotClosedError(f"triangle {t!r} does not have three sides")
        return cls(tris)

    @classmethod
    def parse(cls, text: str) -> "IdealTriangulation":
        """Parse ``"(0,1,2)(~0,~1,~2)"``."""
        body = text.replace(" ", "")
        if not (body.startswith("(") and body.endswith(")")):
            raise ValueError(f"cannot parse triangulation {text!r}")
        parts = body[1:-1].split(")(")
        return cls.from_lists([p.split(",") for p in parts])

    def __str__(self) -> str:
        return "".join("(" + ",".join(t) + ")" for t in self.triangles)

    @property
    def edges(self) -> list:
        seen = []
        for t in self.triangles:
            for h in t:
                e = edge_id(h)
                if e not in seen:
                    seen.append(e)
        return seen

    def incidence(self) -> dict:
        """``half-edge label -> (triangle, side)``; validates the gluing."""
        return self._incidence

    @cached_property
    def _incidence(self) -> dict:
        inc = {}
        for ti, t in enumerate(self.triangles):
            for side, h in enumerate(t):
                if h in inc:
                    raise NotOrientableError(
                        f"half-edge {h!r} occurs twice; the gluing reverses orientation")
                inc[h] = (ti, side)
        for h in inc:
            if mate(h) not in inc:
                raise NotClosedError(f"edge {edge_id(h)!r} has only one side glued")
        return inc

    def neighbor(self, tri: int, side: int) -> tuple[int, int]:
        inc = self.incidence()
        return inc[mate(self.triangles[tri][side])]

    def corner_classes(self) -> list:
        """Vertex classes (punctures) as sorted lists of corners ``(t, i)``,
        ordered by their smallest corner."""
        inc = self.incidence()
        parent = {}

        def find(c):
            while parent.setdefault(c, c) != c:
                parent[c] = parent[parent[c]]
                c = parent[c]
            return c

        def union(a, b):
            ra, rb = find(a), find(b)
            if ra != rb:
                parent[max(ra, rb)] = min(ra, rb)

        for ti, t in enumerate(self.triangles):
            for i in range(3):
                find((ti, i))
                tj, j = inc[mate(t[i])]
                union((ti, i), (tj, (j + 1) % 3))
                union((ti, (i + 1) % 3), (tj, j))
        classes = {}
        for c in parent:
            classes.setdefault(find(c), []).append(c)
        return sorted((sorted(v) for v in classes.values()), key=lambda v: v[0])

    def is_connected(self) -> bool:
        if not self.triangles:
            return True
        inc = self.incidence()
        seen = {0}
        todo = [0]
        while todo:
            ti = todo.pop()
            for h in self.triangles[ti]:
                tj, _ = inc[mate(h)]
                if tj not in seen:
                    seen.add(tj)
                    todo.append(tj)
        return len(seen) == len(self.triangles)

    def to_json(self) -> list:
        return [list(t) for t in self.triangles]


def validate(t: IdealTriangulation) -> tuple[int, int]:
    """``(genus, punctures)`` of a closed, orientable, hyperbolic triangulation."""
    t.incidence()
    if not t.is_connected():
        raise BadEulerError("triangulation is not connected")
    F = len(t.triangles)
    E = len(t.edges)
    V = len(t.corner_classes())
    if 2 * E != 3 * F:
        raise BadEulerError(f"2E = {2 * E} differs from 3F = {3 * F}")
    chi = V - E + F
    if chi % 2 or chi > 2:
        raise BadEulerError(f"Euler characteristic {chi} is not 2 - 2g")
    g = (2 - chi) // 2
    s = V
    if 2 - 2 * g - s >= 0:
        raise NotHyperbolicError(f"2 - 2g - s = {2 - 2 * g - s} is not negative")
    return g, s


# ---------------------------------------------------------------- lambda lengths

def _lam(l: Mapping[str, float], label: str) -> float:
    v = l[edge_id(label)]
    if not v > 0:
        raise ValueError(f"lambda length of edge {edge_id(label)!r} must be positive")
    return float(v)


def check_lambdas(t: IdealTriangulation, l: Mapping[str, float]) -> None:
    missing = [e for e in t.edges if e not in l]
    if missing:
        raise ValueError(f"missing lambda lengths for edges {missing}")
    for e in t.edges:
        _lam(l, e)


# ---------------------------------------------------------------- developing

@dataclass
class Lift:
    """A decorated lift of triangle ``tri``; ``corners[i]`` lies over corner ``i``."""

    tri: int
    corners: tuple
    parent: Optional[int] = None
    entered_side: Optional[int] = None
    depth: int = 0

    def boundary_points(self) -> list:
        out = []
        for u in self.corners:
            p, q = boundary_homogeneous(u)
            out.append(np.inf if q == 0 else p / q)
        return out


@dataclass
class DevelopedComplex:
    lifts: list
    depth: int


def base_lift(t: IdealTriangulation, l: Mapping[str, float], tri: int = 0) -> Lift:
    sides = t.triangles[tri]
    # lambda opposite corner i is on side i + 1
    lam = [_lam(l, sides[(i + 1) % 3]) for i in range(3)]
    corners = realize_triangle(*_RAYS, *lam)
    return Lift(tri, tuple(corners))


def cross(t: IdealTriangulation, l: Mapping[str, float], lift: Lift, side: int) -> Lift:
    """The lift of the triangle glued to ``side`` of ``lift``."""
    tj, j = t.neighbor(lift.tri, side)
    other = t.triangles[tj]
    u_j = lift.corners[(side + 1) % 3]       # corner j of the new triangle
    u_j1 = lift.corners[side]                # corner j + 1
    witness = lift.corners[(side + 2) % 3]
    v = extend_across(u_j, u_j1, witness,
                      _lam(l, other[(j + 2) % 3]), _lam(l, other[(j + 1) % 3]))
    if not np.all(np.isfinite(v)) or float(np.max(np.abs(v))) > BLOWUP_LIMIT:
        raise NumericBlowupError("developed light-cone coordinates blew up")
    corners = [None, None, None]
    corners[j] = u_j
    corners[(j + 1) % 3] = u_j1
    corners[(j + 2) % 3] = v
    return Lift(tj, tuple(corners), entered_side=j, depth=lift.depth + 1)


def develop(t: IdealTriangulation, l: Mapping[str, float], depth: int,
            base: int = 0) -> DevelopedComplex:
    """Breadth-first development of the universal cover to ``depth`` crossings."""
    validate(t)
    check_lambdas(t, l)
    root = base_lift(t, l, base)
    lifts = [root]
    queue = deque([0])
    while queue:
        k = queue.popleft()
        cur = lifts[k]
        if cur.depth >= depth:
            continue
        for side in range(3):
            if side == cur.entered_side:
                continue
            nxt = cross(t, l, cur, side)
            nxt.parent = k
            lifts.append(nxt)
            queue.append(len(lifts) - 1)
    return DevelopedComplex(lifts, depth)


def develop_path(t: IdealTriangulation, l: Mapping[str, float],
                 steps: Sequence[tuple[int, int]]) -> list:
    """Lifts along a dual path of ``(triangle, side)`` steps."""
    if not steps:
        raise OpenPathError("empty path")
    cur = base_lift(t, l, steps[0][0])
    out = [cur]
    for tri, side in steps:
        if tri != cur.tri:
            raise OpenPathError(f"step ({tri}, {side}) does not start in triangle {cur.tri}")
        cur = cross(t, l, cur, side)
        out.append(cur)
    return out


def holonomy(t: IdealTriangulation, l: Mapping[str, float],
             loop: Sequence[tuple[int, int]], base: int = 0) -> np.ndarray:
    """Moebius map carrying the base lift to the lift reached along ``loop``.

    The loop must start and end in the same triangle; the trivial loop
    (empty) returns the identity.
    """
    validate(t)
    check_lambdas(t, l)
    loop = [(int(a), int(b)) for a, b in loop]
    if not loop:
        return np.eye(2)
    path = develop_path(t, l, loop)
    if path[-1].tri != loop[0][0]:
        raise OpenPathError(f"path ends in triangle {path[-1].tri}, not {loop[0][0]}")
    end = path[-1].corners
    return from_light_cone_triple(end[0], end[1], end[2])


def puncture_loop(t: IdealTriangulation, puncture: int) -> list:
    """Dual loop turning once around ``puncture`` through all its corners."""
    classes = t.corner_classes()
    if not 0 <= puncture < len(classes):
        raise ValueError(f"no puncture {puncture}; there are {len(classes)}")
    inc = t.incidence()
    start = classes[puncture][0]
    steps = []
    ti, i = start
    while True:
        steps.append((ti, i))
        tj, j = inc[mate(t.triangles[ti][i])]
        ti, i = tj, (j + 1) % 3
        if (ti, i) == start:
            return steps


def puncture_trace(t: IdealTriangulation, l: Mapping[str, float], puncture: int) -> float:
    """``|trace|`` of the holonomy around ``puncture``."""
    return abs(trace(holonomy(t, l, puncture_loop(t, puncture))))


def horocycle_length(t: IdealTriangulation, l: Mapping[str, float], puncture: int) -> float:
    """Total horocyclic length about ``puncture``: the sum of the corner
    sectors ``2 l_opp / (l_adj l_adj')``."""
    check_lambdas(t, l)
    total = 0.0
    for ti, i in t.corner_classes()[puncture]:
        sides = t.triangles[ti]
        lam = [_lam(l, sides[(k + 1) % 3]) for k in range(3)]
        total += sector_length(*lam, i)
    return total


def surface_wp(t: IdealTriangulation, l: Mapping[str, float],
               v1: Mapping[str, float], v2: Mapping[str, float]) -> float:
    """Sum over triangles of the 2-form on the triangle's three lambda lengths,
    taken in the cyclic order of its sides."""
    check_lambdas(t, l)
    total = 0.0
    for tri in t.triangles:
        es = [edge_id(h) for h in tri]
        total += omega_eval(*(float(l[e]) for e in es),
                            [v1.get(e, 0.0) for e in es], [v2.get(e, 0.0) for e in es])
    return total


def flip_edge(t: IdealTriangulation, l: Mapping[str, float], edge: str):
    """Exchange the diagonal ``edge`` of its quadrilateral.

    With ``A = (e, a1, a2)`` and ``B = (~e, b1, b2)`` (rotated so that the
    glued sides come first) the new triangles are ``(a1, e, b2)`` and
    ``(a2, b1, ~e)``, and ``e`` takes the value ``(a1 b1 + a2 b2) / e``.
    The edge keeps its name.
    """
    validate(t)
    check_lambdas(t, l)
    edge = str(edge)
    inc = t.incidence()
    if edge not in inc:
        raise ValueError(f"no edge {edge!r}")
    ta, ia = inc[edge]
    tb, ib = inc[mate(edge)]
    if ta == tb:
        raise SelfFoldedError(f"edge {edge!r} is glued to the same triangle on both sides")
    A, B = t.triangles[ta], t.triangles[tb]
    e, a1, a2 = A[ia], A[(ia + 1) % 3], A[(ia + 2) % 3]
    e_, b1, b2 = B[ib], B[(ib + 1) % 3], B[(ib + 2) % 3]
    new_a = (a1, e, b2)
    new_b = (a2, b1, e_)
    tris = list(t.triangles)
    tris[ta] = new_a
    tris[tb] = new_b
    l2 = dict(l)
    l2[edge_id(edge)] = (_lam(l, a1) * _lam(l, b1) + _lam(l, a2) * _lam(l, b2)) / _lam(l, e)
    return IdealTriangulation(tuple(tris)), l2


def canonical_form(t: IdealTriangulation) -> tuple:
    """Triangles up to rotation and reordering (for comparing triangulations)."""
    def rot(tri):
        return min(tri[i:] + tri[:i] for i in range(3))
    return tuple(sorted(rot(tuple(tri)) for tri in t.triangles))


# ---------------------------------------------------------------- fixtures

PUNCTURED_TORUS = IdealTriangulation.parse("(0,1,2)(~0,~1,~2)")
THRICE_PUNCTURED_SPHERE = IdealTriangulation.parse("(0,1,2)(~2,~1,~0)")
# fan triangulation of the octagon a b a^-1 b^-1 c d c^-1 d^-1
GENUS_TWO = IdealTriangulation.parse(
    "(a,b,~x2)(x2,~a,~x3)(x3,~b,~x4)(x4,c,~x5)(x5,d,~x6)(x6,~c,~d)")


def reverse_edge(t: IdealTriangulation, edge: str) -> IdealTriangulation:
    """Swap the names ``e`` and ``~e`` (the same triangulation, relabelled)."""
    swap = {edge: mate(edge), mate(edge): edge}
    return IdealTriangulation(tuple(tuple(swap.get(h, h) for h in tri)
                                    for tri in t.triangles))
