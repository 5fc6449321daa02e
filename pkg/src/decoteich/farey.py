"""The modular group and the Farey tessellation, in exact integer arithmetic.

Rationals include ``1/0`` (infinity).  Elements of ``PSL2(Z)`` are integer
matrices kept in a canonical sign, and words are strings over ``S, T, U``
with lowercase letters for inverses (``t = T^-1``, ``u = U^-1``).

Oriented Farey edges correspond to group elements through
``A -> e_A = (A(0/1), A(1/0))``, the image of the distinguished oriented
edge ``doe`` from ``0/1`` to ``1/0``.
"""

from __future__ import annotations

import math
from dataclasses import dataclass
from functools import total_ordering
from typing import Iterable, Iterator

from .errors import DepthLimitError, NotUnimodularError

MAX_ENUMERATION_GENERATION = 24


@total_ordering
@dataclass(frozen=True)
class Rational:
    """A point of ``Q u {oo}`` in lowest terms, ``q >= 0``; ``1/0`` is infinity."""

    p: int
    q: int

    def __post_init__(self):
        if self.q < 0 or (self.q == 0 and self.p != 1) or math.gcd(self.p, self.q) != 1:
            raise ValueError(f"non-canonical rational {self.p}/{self.q}")

    @classmethod
    def of(cls, p: int, q: int = 1) -> "Rational":
        p, q = int(p), int(q)
        if p == 0 and q == 0:
            raise ValueError("0/0 is not a rational point")
        g = math.gcd(p, q)
        p, q = p // g, q // g
        if q < 0 or (q == 0 and p < 0):
            p, q = -p, -q
        return cls(p, q)

    @classmethod
    def parse(cls, text: str) -> "Rational":
        text = text.strip()
        if text in ("oo", "inf", "infinity"):
            return INFINITY
        if "/" in text:
            p, q = text.split("/")
            return cls.of(int(p), int(q))
        return cls.of(int(text), 1)

    @property
    def is_infinite(self) -> bool:
        return self.q == 0

    def __float__(self) -> float:
        return math.inf if self.q == 0 else self.p / self.q

    def __str__(self) -> str:
        return f"{self.p}/{self.q}"

    def __repr__(self) -> str:
        return f"Rational({self.p}, {self.q})"

    def __neg__(self) -> "Rational":
        return self if self.q == 0 else Rational(-self.p, self.q)

    def __lt__(self, other: "Rational") -> bool:
        # order on R u {oo} with oo largest
        if self.q == 0:
            return False
        if other.q == 0:
            return True
        return self.p * other.q < other.p * self.q

    def sort_key(self):
        return (1, 0) if self.q == 0 else (0, self.p / self.q)


INFINITY = Rational(1, 0)
ZERO = Rational(0, 1)
ONE = Rational(1, 1)
MINUS_ONE = Rational(-1, 1)


def rational(x) -> Rational:
    if isinstance(x, Rational):
        return x
    if isinstance(x, str):
        return Rational.parse(x)
    if isinstance(x, tuple):
        return Rational.of(*x)
    if isinstance(x, int):
        return Rational.of(x, 1)
    if hasattr(x, "numerator"):
        return Rational.of(x.numerator, x.denominator)
    raise TypeError(f"cannot interpret {x!r} as a rational point")


def are_neighbors(x: Rational, y: Rational) -> bool:
    return abs(x.p * y.q - x.q * y.p) == 1


@dataclass(frozen=True)
class PSL2Mat:
    """An element of PSL2(Z); the sign is normalized so the first nonzero entry is positive."""

    a: int
    b: int
    c: int
    d: int

    def __post_init__(self):
        if self.a * self.d - self.b * self.c != 1:
            raise NotUnimodularError(f"determinant of {self.entries} is not 1")
        first = next(v for v in self.entries if v != 0)
        if first < 0:
            raise ValueError("use PSL2Mat.of for non-canonical sign")

    @classmethod
    def of(cls, a: int, b: int, c: int, d: int) -> "PSL2Mat":
        a, b, c, d = int(a), int(b), int(c), int(d)
        if a * d - b * c != 1:
            raise NotUnimodularError(f"determinant of {(a, b, c, d)} is not 1")
        first = next(v for v in (a, b, c, d) if v != 0)
        if first < 0:
            a, b, c, d = -a, -b, -c, -d
        return cls(a, b, c, d)

    @property
    def entries(self) -> tuple[int, int, int, int]:
        return (self.a, self.b, self.c, self.d)

    def rows(self) -> tuple[tuple[int, int], tuple[int, int]]:
        return ((self.a, self.b), (self.c, self.d))

    def __matmul__(self, other: "PSL2Mat") -> "PSL2Mat":
        a, b, c, d = self.entries
        e, f, g, h = other.entries
        return PSL2Mat.of(a * e + b * g, a * f + b * h, c * e + d * g, c * f + d * h)

    def inverse(self) -> "PSL2Mat":
        return PSL2Mat.of(self.d, -self.b, -self.c, self.a)

    def __call__(self, x: Rational) -> Rational:
        return apply_mobius(self, x)

    def trace(self) -> int:
        return self.a + self.d

    def __str__(self) -> str:
        return f"[[{self.a},{self.b}],[{self.c},{self.d}]]"


IDENTITY = PSL2Mat(1, 0, 0, 1)
S = PSL2Mat.of(0, -1, 1, 0)
T = PSL2Mat(1, 1, 0, 1)
U = PSL2Mat(1, 0, 1, 1)

GENERATORS = {
    "S": S,
    "T": T,
    "U": U,
    "t": T.inverse(),
    "u": U.inverse(),
}
INVERSE_LETTER = {"S": "S", "T": "t", "t": "T", "U": "u", "u": "U"}


def check_word(word: str) -> str:
    bad = set(word) - set(GENERATORS)
    if bad:
        raise ValueError(f"word {word!r} has letters outside S,T,U,t,u: {sorted(bad)}")
    return word


def mat_of_word(word: str) -> PSL2Mat:
    """Product of the letters of ``word`` from left to right."""
    m = IDENTITY
    for letter in check_word(word):
        m = m @ GENERATORS[letter]
    return m


def invert_word(word: str) -> str:
    return "".join(INVERSE_LETTER[c] for c in reversed(check_word(word)))


def _positive_word(a: int, b: int, c: int, d: int) -> str:
    # Euclidean descent in the free semigroup on U, T (nonnegative entries).
    letters = []
    while (a, b, c, d) != (1, 0, 0, 1):
        if a >= c and b >= d:
            letters.append("T")
            a, b = a - c, b - d
        elif c >= a and d >= b:
            letters.append("U")
            c, d = c - a, d - b
        else:
            raise AssertionError("matrix left the positive semigroup")
    return "".join(letters)


def _semigroup_word(a: int, b: int, c: int, d: int):
    """Word for ``+-[[a,b],[c,d]]`` in one of the two semigroups, or None."""
    for s in (1, -1):
        a2, b2, c2, d2 = s * a, s * b, s * c, s * d
        if min(a2, b2, c2, d2) >= 0:
            return _positive_word(a2, b2, c2, d2)
        if a2 >= 0 and d2 >= 0 and b2 <= 0 and c2 <= 0:
            # inverse has nonnegative entries
            return invert_word(_positive_word(d2, -b2, -c2, a2))
    return None


def word_of_mat(m: PSL2Mat) -> str:
    """The unique normal form: ``[S] w`` with ``w`` empty or in one of the
    free semigroups on ``{U, T}`` or ``{u, t}``."""
    w = _semigroup_word(*m.entries)
    if w is not None:
        return w
    # m = S m'  =>  m' = S^-1 m
    rest = S.inverse() @ m
    w = _semigroup_word(*rest.entries)
    if w is None:
        raise AssertionError(f"no normal form for {m}")
    return "S" + w


def is_normal_form(word: str) -> bool:
    check_word(word)
    body = word[1:] if word.startswith("S") else word
    if not body:
        return True
    return set(body) <= {"U", "T"} or set(body) <= {"u", "t"}


def normal_form(word: str) -> str:
    return word_of_mat(mat_of_word(word))


def iter_normal_forms(max_length: int) -> Iterator[str]:
    """All normal-form words of length at most ``max_length``, shortest first."""
    bodies = [""]
    for alphabet in ("UT", "ut"):
        layer = [""]
        for _ in range(max_length):
            layer = [w + c for w in layer for c in alphabet]
            bodies.extend(layer)
    bodies.sort(key=len)
    for w in bodies:
        yield w
        if len(w) < max_length:
            yield "S" + w


def apply_mobius(m: PSL2Mat, x: Rational) -> Rational:
    return Rational.of(m.a * x.p + m.b * x.q, m.c * x.p + m.d * x.q)


@dataclass(frozen=True)
class OrientedEdge:
    start: Rational
    end: Rational

    def __post_init__(self):
        if not are_neighbors(self.start, self.end):
            raise ValueError(f"{self.start} and {self.end} are not Farey neighbours")

    def reversed(self) -> "OrientedEdge":
        return OrientedEdge(self.end, self.start)

    def unoriented(self) -> tuple[Rational, Rational]:
        return edge_key(self.start, self.end)


DOE = OrientedEdge(ZERO, INFINITY)


def edge_of(m: PSL2Mat) -> OrientedEdge:
    return OrientedEdge(apply_mobius(m, ZERO), apply_mobius(m, INFINITY))


def mat_of_edge(start: Rational, end: Rational) -> PSL2Mat:
    """The unique ``A`` with ``e_A`` running from ``start`` to ``end``."""
    # columns: A(1/0) = end, A(0/1) = start
    m = (end.p, start.p, end.q, start.q)
    det = end.p * start.q - start.p * end.q
    if det == 1:
        return PSL2Mat.of(*m)
    if det == -1:
        return PSL2Mat.of(-end.p, start.p, -end.q, start.q)
    raise ValueError(f"{start} and {end} are not Farey neighbours")


def edge_key(x: Rational, y: Rational) -> tuple[Rational, Rational]:
    """Canonical key of the unoriented edge ``{x, y}`` (endpoints in increasing order)."""
    return (x, y) if x < y else (y, x)


def format_edge(key: tuple[Rational, Rational]) -> str:
    return f"{key[0]},{key[1]}"


def parse_edge(text: str) -> tuple[Rational, Rational]:
    a, b = text.split(",")
    x, y = Rational.parse(a), Rational.parse(b)
    if not are_neighbors(x, y):
        raise ValueError(f"{text!r} is not a Farey edge")
    return edge_key(x, y)


def continued_fraction(p: int, q: int) -> list[int]:
    digits = []
    while q:
        a, r = divmod(p, q)
        digits.append(a)
        p, q = q, r
    return digits


def farey_generation(x: Rational) -> int:
    """Depth at which ``x`` first appears in :func:`enumerate_edges`.

    ``oo, 0, 1, -1`` have generation 0; for ``x > 0`` it is the sum of the
    continued-fraction digits minus one, and ``-x`` has the generation of ``x``.
    """
    if x.q == 0 or x.p == 0:
        return 0
    return sum(continued_fraction(abs(x.p), x.q)) - 1


def edge_generation(key: tuple[Rational, Rational]) -> int:
    return max(farey_generation(key[0]), farey_generation(key[1]))


def mediant(x: Rational, y: Rational) -> Rational:
    return Rational.of(x.p + y.p, x.q + y.q)


def _subdivide(x: Rational, y: Rational, depth: int, out: set) -> None:
    # x, y nonnegative (including oo) Farey neighbours
    stack = [(x, y, depth)]
    while stack:
        x, y, k = stack.pop()
        if k == 0:
            continue
        m = mediant(x, y)
        out.add(edge_key(x, m))
        out.add(edge_key(m, y))
        stack.append((x, m, k - 1))
        stack.append((m, y, k - 1))


def _reflect_s(x: Rational) -> Rational:
    return apply_mobius(S, x)


def enumerate_edges(generation: int) -> set[tuple[Rational, Rational]]:
    """Unoriented Farey edges whose endpoints have generation ``<= generation``."""
    if generation < 0:
        raise ValueError("generation must be >= 0")
    if generation > MAX_ENUMERATION_GENERATION:
        raise DepthLimitError(
            f"generation {generation} exceeds the enumeration guard {MAX_ENUMERATION_GENERATION}")
    positive = {edge_key(ZERO, INFINITY), edge_key(ZERO, ONE), edge_key(ONE, INFINITY)}
    _subdivide(ZERO, ONE, generation, positive)
    _subdivide(ONE, INFINITY, generation, positive)
    edges = set(positive)
    for x, y in positive:
        edges.add(edge_key(_reflect_s(x), _reflect_s(y)))
    return edges


def enumerate_vertices(generation: int) -> list[Rational]:
    verts = set()
    for x, y in enumerate_edges(generation):
        verts.add(x)
        verts.add(y)
    return sorted(verts)


def vertices_by_generation(generation: int) -> list[list[Rational]]:
    """Vertices grouped by generation, each group sorted; generation 0 is ``[-1, 0, 1, oo]``."""
    if generation > MAX_ENUMERATION_GENERATION:
        raise DepthLimitError(
            f"generation {generation} exceeds the enumeration guard {MAX_ENUMERATION_GENERATION}")
    layers = [[MINUS_ONE, ZERO, ONE, INFINITY]]
    arcs = [(ZERO, ONE), (ONE, INFINITY)]
    for _ in range(generation):
        new, nxt = [], []
        for x, y in arcs:
            m = mediant(x, y)
            new.append(m)
            nxt += [(x, m), (m, y)]
        arcs = nxt
        layer = set(new) | {_reflect_s(m) for m in new}
        layers.append(sorted(layer))
    return layers


def farey_parents(x: Rational) -> tuple[Rational, Rational, Rational]:
    """``(a, b, w)`` for a vertex ``x`` of generation >= 1 (or ``x = -1``).

    ``a`` and ``b`` are the Farey neighbours with ``x`` their mediant, and
    ``w`` is the third vertex of the other triangle on the edge ``{a, b}``.
    """
    if x == MINUS_ONE:
        return ZERO, INFINITY, ONE
    if x.q == 0 or x.p == 0 or x == ONE:
        raise ValueError(f"{x} is a base vertex and has no parents")
    if x.p < 0:
        a, b, w = farey_parents(Rational(-x.p, x.q))
        return -a, -b, -w
    p, q = x.p, x.q
    if q == 1:
        q1, p1 = 1, p - 1
    else:
        q1 = pow(p, -1, q)
        p1 = (p * q1 - 1) // q
    p2, q2 = p - p1, q - q1
    a, b = Rational.of(p1, q1), Rational.of(p2, q2)
    w = Rational.of(p2 - p1, q2 - q1)
    return a, b, w


def triangle_vertices_right_of(m: PSL2Mat) -> tuple[Rational, Rational, Rational]:
    """Vertices ``A(oo), A(0), A(1)`` of the triangle to the right of ``e_A``."""
    return apply_mobius(m, INFINITY), apply_mobius(m, ZERO), apply_mobius(m, ONE)


def iter_edges_sorted(edges: Iterable[tuple[Rational, Rational]]):
    return sorted(edges, key=lambda e: (e[0].sort_key(), e[1].sort_key()))
