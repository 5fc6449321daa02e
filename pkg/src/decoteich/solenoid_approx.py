"""Finite-level models of transverse lambda-length data.

A :class:`FiniteLevel` is a finite-index subgroup ``Gamma`` of PSL2(Z),
given by the right action of the generators on its right cosets
``Gamma \\ PSL2(Z)``.  Principal congruence subgroups ``Gamma(k)`` are built
from PSL2(Z/k); arbitrary subgroups can be supplied as permutation tables.

Transverse data assigns to every coset ``t`` a lambda-length function
``lambda_t`` on Farey edges subject to ``lambda_t(e) = lambda_{t g^-1}(g e)``.
Such data is determined by ``F(t) = lambda_t(doe)`` through
``lambda_t(e_A) = F(t A)``, with ``F(s) = F(s S)`` because ``e_A`` and
``e_{AS}`` are the same unoriented edge.  :class:`TransverseLambda` stores
``F`` and optionally explicit per-leaf overrides, which break equivariance
and are reported by :func:`validate_equivariance`.

The cocycle ``rho(g, t)`` is the Moebius map with
``psi_{t g^-1}(g x) = rho(g, t) psi_t(x)`` for the normalized leaf
decorations ``psi``.  It is computed letter by letter: for a generator the
triangle ``g^-1 Delta`` is decorated next to ``Delta`` with the values of
leaf ``t g^-1``, rescaled to agree on the shared edge, and words are handled
by ``rho(g w, t) = rho(g, t w^-1) rho(w, t)``.
"""

from __future__ import annotations

import math
import threading
from dataclasses import dataclass
from typing import Mapping, Optional, Sequence

import numpy as np

from .errors import BadNormalFormError, LevelTooLargeError, OrbitConflictError
from .farey import (GENERATORS, INFINITY, INVERSE_LETTER, ONE, ZERO, PSL2Mat, Rational,
                    apply_mobius, edge_key, enumerate_edges, format_edge, invert_word,
                    is_normal_form, mat_of_edge, mat_of_word, normal_form, parse_edge,
                    word_of_mat)
from .mobius import from_light_cone_triple, inverse, normalize_sl2, psl_distance
from .realization import extend_across, realize_triangle
from .universal_embed import (SQRT2, Decoration, LambdaAssignment, circle_map_samples,
                              h1_decoration)

MAX_LEVEL = 13
DOE_KEY = edge_key(ZERO, INFINITY)


# ---------------------------------------------------------------- levels

def _canon_mod(a, b, c, d, k):
    m = (a % k, b % k, c % k, d % k)
    n = ((-a) % k, (-b) % k, (-c) % k, (-d) % k)
    return min(m, n)


def psl2_order(k: int) -> int:
    """Order of PSL2(Z/k), i.e. the index of the principal congruence subgroup."""
    n = k ** 3
    p, m = 2, k
    while m > 1:
        if m % p == 0:
            n = n * (p * p - 1) // (p * p)
            while m % p == 0:
                m //= p
        p += 1
    return n if k <= 2 else n // 2


class FiniteLevel:
    """Right cosets of a finite-index subgroup with the generator action.

    ``S[t]`` and ``T[t]`` are the cosets ``t S`` and ``t T``.  Coset 0 is the
    subgroup itself.
    """

    def __init__(self, S: Sequence[int], T: Sequence[int], modulus: Optional[int] = None,
                 reps: Optional[Sequence[tuple]] = None):
        self.S = tuple(int(x) for x in S)
        self.T = tuple(int(x) for x in T)
        n = len(self.S)
        if len(self.T) != n or n == 0:
            raise ValueError("action tables must be nonempty and of equal length")
        for name, perm in (("S", self.S), ("T", self.T)):
            if sorted(perm) != list(range(n)):
                raise ValueError(f"table {name} is not a permutation")
        self.modulus = modulus
        self.reps = tuple(reps) if reps is not None else None
        self._rep_index = {r: i for i, r in enumerate(self.reps)} if self.reps else None
        tinv = [0] * n
        for i, j in enumerate(self.T):
            tinv[j] = i
        self.Tinv = tuple(tinv)
        # U = S T^-1 S
        self.U = tuple(self.S[self.Tinv[self.S[i]]] for i in range(n))
        uinv = [0] * n
        for i, j in enumerate(self.U):
            uinv[j] = i
        self.Uinv = tuple(uinv)
        self._tables = {"S": self.S, "T": self.T, "t": self.Tinv, "U": self.U, "u": self.Uinv}
        self._check()

    def _check(self) -> None:
        n = self.index
        for i in range(n):
            if self.S[self.S[i]] != i:
                raise ValueError("S does not act as an involution")
            j = i
            for _ in range(3):
                j = self.T[self.S[j]]
            if j != i:
                raise ValueError("(S T)^3 does not act trivially")
        seen = {0}
        todo = [0]
        while todo:
            i = todo.pop()
            for tab in (self.S, self.T, self.Tinv):
                if tab[i] not in seen:
                    seen.add(tab[i])
                    todo.append(tab[i])
        if len(seen) != n:
            raise ValueError("the action is not transitive")

    @classmethod
    def from_tables(cls, S: Sequence[int], T: Sequence[int]) -> "FiniteLevel":
        return cls(S, T)

    @property
    def index(self) -> int:
        return len(self.S)

    def act(self, t: int, word: str) -> int:
        """The coset ``t w`` (letters applied left to right)."""
        for letter in word:
            t = self._tables[letter][t]
        return t

    def act_letter(self, t: int, letter: str) -> int:
        return self._tables[letter][t]

    def coset_times(self, t: int, m: PSL2Mat) -> int:
        """The coset ``t m``."""
        if self.modulus is not None:
            k = self.modulus
            a, b, c, d = self.reps[t]
            e, f, g, h = m.entries
            return self._rep_index[_canon_mod(a * e + b * g, a * f + b * h,
                                              c * e + d * g, c * f + d * h, k)]
        return self.act(t, word_of_mat(m))

    def to_json(self) -> dict:
        if self.modulus is not None:
            return {"congruence_k": self.modulus}
        return {"tables": {"S": list(self.S), "T": list(self.T)}}

    @classmethod
    def from_json(cls, obj: Mapping) -> "FiniteLevel":
        if "congruence_k" in obj:
            return build_level(int(obj["congruence_k"]))
        tabs = obj["tables"]
        return cls(tabs["S"], tabs["T"])


def build_level(k: int) -> FiniteLevel:
    """Cosets of ``Gamma(k)`` as elements of PSL2(Z/k), in breadth-first order
    from the identity under ``S`` and ``T``."""
    if not isinstance(k, int) or k < 2:
        raise ValueError("level must be an integer >= 2")
    if k > MAX_LEVEL:
        raise LevelTooLargeError(f"level {k} exceeds the guard {MAX_LEVEL}")
    s_m = (0, -1, 1, 0)
    t_m = (1, 1, 0, 1)

    def mul(x, y):
        a, b, c, d = x
        e, f, g, h = y
        return _canon_mod(a * e + b * g, a * f + b * h, c * e + d * g, c * f + d * h, k)

    ident = _canon_mod(1, 0, 0, 1, k)
    reps = [ident]
    index = {ident: 0}
    S, T = {}, {}
    i = 0
    while i < len(reps):
        r = reps[i]
        for table, g in ((S, s_m), (T, t_m)):
            nxt = mul(r, g)
            if nxt not in index:
                index[nxt] = len(reps)
                reps.append(nxt)
            table[i] = index[nxt]
        i += 1
    n = len(reps)
    if n != psl2_order(k):
        raise AssertionError(f"enumerated {n} cosets, expected {psl2_order(k)}")
    return FiniteLevel([S[i] for i in range(n)], [T[i] for i in range(n)], k, reps)


def commutator_level() -> FiniteLevel:
    """The commutator subgroup, kernel of PSL2(Z) -> Z/6 (S -> 3, T -> 1)."""
    return FiniteLevel([(i + 3) % 6 for i in range(6)], [(i + 1) % 6 for i in range(6)])


def trivial_level() -> FiniteLevel:
    """PSL2(Z) itself (a single coset)."""
    return FiniteLevel([0], [0])


# ---------------------------------------------------------------- data

class TransverseLambda:
    """Equivariant lambda lengths ``lambda_t(e_A) = F(t A)`` plus optional
    per-leaf overrides ``(t, edge) -> value``."""

    def __init__(self, level: FiniteLevel, doe_values: Sequence[float],
                 overrides: Optional[Mapping[tuple, float]] = None):
        if len(doe_values) != level.index:
            raise ValueError("need one doe value per coset")
        vals = tuple(float(v) for v in doe_values)
        if not all(v > 0 for v in vals):
            raise ValueError("lambda lengths must be positive")
        self.level = level
        self.F = vals
        self.overrides = {}
        for (t, key), v in (overrides or {}).items():
            if not v > 0:
                raise ValueError("lambda lengths must be positive")
            self.overrides[(int(t), edge_key(*key))] = float(v)
        self._leaves = {}
        self._decorations = {}
        self._lock = threading.Lock()
        self.rho_cache = RhoCocycle(self)

    def value(self, t: int, key: tuple) -> float:
        v = self.overrides.get((t, key))
        if v is not None:
            return v
        return self.F[self.level.coset_times(t, mat_of_edge(key[0], key[1]))]

    def leaf(self, t: int) -> LambdaAssignment:
        """``lambda_t`` as a procedural assignment with its finite value set."""
        l = self._leaves.get(t)
        if l is None:
            mine = {k: v for (s, k), v in self.overrides.items() if s == t}
            values = frozenset(self.F) | frozenset(mine.values())
            l = LambdaAssignment(SQRT2, mine, lambda key, t=t: self.value(t, key), values)
            with self._lock:
                self._leaves.setdefault(t, l)
        return self._leaves[t]

    def decoration(self, t: int) -> Decoration:
        dec = self._decorations.get(t)
        if dec is None:
            dec = Decoration(self.leaf(t))
            with self._lock:
                self._decorations.setdefault(t, dec)
        return self._decorations[t]

    def value_set(self) -> set:
        return set(self.F) | set(self.overrides.values())

    def with_values(self, F: Sequence[float]) -> "TransverseLambda":
        return TransverseLambda(self.level, F, self.overrides)

    def to_json(self) -> dict:
        out = self.level.to_json()
        lambdas = {}
        for t in range(self.level.index):
            entry = {format_edge(DOE_KEY): self.F[t]}
            for (s, key), v in sorted(self.overrides.items(),
                                      key=lambda kv: (kv[0][0], format_edge(kv[0][1]))):
                if s == t:
                    entry[format_edge(key)] = v
            lambdas[str(t)] = entry
        out["lambdas"] = lambdas
        return out

    @classmethod
    def from_json(cls, obj: Mapping) -> "TransverseLambda":
        level = FiniteLevel.from_json(obj)
        lam = obj["lambdas"]
        F = []
        overrides = {}
        doe = format_edge(DOE_KEY)
        for t in range(level.index):
            entry = lam[str(t)]
            if doe not in entry:
                raise ValueError(f"coset {t} lacks a value on the doe {doe}")
            F.append(float(entry[doe]))
            for k, v in entry.items():
                if k != doe:
                    overrides[(t, parse_edge(k))] = float(v)
        return cls(level, F, overrides)


def constant(level: FiniteLevel, value: float = SQRT2) -> TransverseLambda:
    return TransverseLambda(level, [value] * level.index)


def s_orbits(level: FiniteLevel) -> list:
    """Cosets grouped into ``{s, s S}`` (sorted by smallest member)."""
    seen, out = set(), []
    for s in range(level.index):
        if s not in seen:
            orb = sorted({s, level.S[s]})
            seen.update(orb)
            out.append(orb)
    return out


def random_equivariant(level: FiniteLevel, rng: np.random.Generator,
                       low: float = 0.5, high: float = 2.0) -> TransverseLambda:
    """Data constant on every ``{s, s S}`` with values uniform in ``[low, high]``."""
    F = [0.0] * level.index
    for orb in s_orbits(level):
        v = float(rng.uniform(low, high))
        for s in orb:
            F[s] = v
    return TransverseLambda(level, F)


def validate_equivariance(d: TransverseLambda, depth: int = 3) -> float:
    """Largest ``|lambda_t(e) - lambda_{t g^-1}(g e)|`` over ``g in {S, T}``,
    all cosets and the edges of generation ``<= depth`` (and every
    overridden edge), together with ``|F(s) - F(s S)|``."""
    level = d.level
    worst = max((abs(d.F[s] - d.F[level.S[s]]) for s in range(level.index)), default=0.0)
    edges = set(enumerate_edges(depth)) | {k for (_, k) in d.overrides}
    for letter in ("S", "T"):
        g = GENERATORS[letter]
        inv = INVERSE_LETTER[letter]
        for t in range(level.index):
            tg = level.act_letter(t, inv)
            for key in edges:
                moved = edge_key(apply_mobius(g, key[0]), apply_mobius(g, key[1]))
                worst = max(worst, abs(d.value(t, key) - d.value(tg, moved)))
    return worst


def pinch_bound(d: TransverseLambda) -> float:
    vals = d.value_set()
    return max(max(vals), 1.0 / min(vals))


# ---------------------------------------------------------------- rho

def _point(x: Rational):
    p, q = x.p, x.q
    return np.array([p * p - q * q, -2.0 * p * q, p * p + q * q], dtype=float)


class RhoCocycle:
    """Memoized ``(word, coset) -> rho``; safe for concurrent readers."""

    def __init__(self, data: TransverseLambda):
        self.data = data
        self._cache = {}
        self._lock = threading.Lock()

    def letter(self, g: str, t: int) -> np.ndarray:
        key = (g, t)
        m = self._cache.get(key)
        if m is None:
            m = _rho_letter(self.data, g, t)
            with self._lock:
                self._cache.setdefault(key, m)
        return self._cache[key]

    def word(self, w: str, t: int) -> np.ndarray:
        key = (w, t)
        m = self._cache.get(key)
        if m is not None:
            return m
        level = self.data.level
        m = np.eye(2)
        c = t
        for g in reversed(w):
            m = self.letter(g, c) @ m
            c = level.act_letter(c, INVERSE_LETTER[g])
        m = normalize_sl2(m)
        with self._lock:
            self._cache.setdefault(key, m)
        return self._cache[key]


def _rho_letter(d: TransverseLambda, g: str, t: int) -> np.ndarray:
    """``rho(g, t)`` for a single generator from one decorated quadrilateral."""
    base = (INFINITY, ZERO, ONE)
    lam_t = d.leaf(t)
    tg = d.level.act_letter(t, INVERSE_LETTER[g])
    lam_tg = d.leaf(tg)
    g_mat = GENERATORS[g]
    g_inv = g_mat.inverse()
    u = dict(zip(base, realize_triangle(_point(INFINITY), _point(ZERO), _point(ONE),
                                        lam_t(ZERO, ONE), lam_t(ONE, INFINITY),
                                        lam_t(INFINITY, ZERO))))
    image = [apply_mobius(g_inv, x) for x in base]     # g^-1 Delta
    new = [x for x in image if x not in u]
    if len(new) != 1:
        raise AssertionError(f"g^-1 Delta is not adjacent to Delta for {g}")
    x_new = new[0]
    p, q = [x for x in image if x in u]
    witness = next(x for x in base if x not in (p, q))

    def lam_moved(x, y):
        # lambda_{t g^-1} on the edge g {x, y}
        return lam_tg(apply_mobius(g_mat, x), apply_mobius(g_mat, y))

    rescale = lam_t(p, q) / lam_moved(p, q)
    v = extend_across(u[p], u[q], u[witness],
                      rescale * lam_moved(x_new, p), rescale * lam_moved(x_new, q))
    u[x_new] = v
    m_inv = from_light_cone_triple(*(u[x] for x in image))
    return normalize_sl2(inverse(m_inv))


def rho(d: TransverseLambda, w: str, t: int) -> np.ndarray:
    """``rho(w, t)`` for a word ``w`` in normal form."""
    if not is_normal_form(w):
        raise BadNormalFormError(f"{w!r} is not in normal form (expected {normal_form(w)!r})")
    if not 0 <= t < d.level.index:
        raise ValueError(f"no coset {t}")
    if w == "":
        return np.eye(2)
    return d.rho_cache.word(w, t)


def rho_direct(d: TransverseLambda, w: str, t: int) -> np.ndarray:
    """Independent evaluation from the whole leaf decoration of ``t w^-1``:
    the map sending ``oo, 0, 1`` to ``phi(w oo), phi(w 0), phi(w 1)``."""
    g = mat_of_word(w)
    c = d.level.act(t, invert_word(w))
    dec = d.decoration(c)
    return from_light_cone_triple(*(dec.point(apply_mobius(g, x))
                                    for x in (INFINITY, ZERO, ONE)))


def check_cocycle(d: TransverseLambda, w1: str, w2: str, t: int) -> float:
    """Distance between ``rho(w1 w2, t)`` and ``rho(w1, t w2^-1) rho(w2, t)``."""
    lhs = rho(d, normal_form(w1 + w2), t)
    t2 = d.level.act(t, invert_word(w2))
    rhs = rho(d, normal_form(w1), t2) @ rho(d, normal_form(w2), t)
    return psl_distance(normalize_sl2(lhs), normalize_sl2(rhs))


# ---------------------------------------------------------------- moves

def doe_orbit(d: TransverseLambda, t: int, x: Rational, y: Rational) -> int:
    """The coset class labelling the edge ``{x, y}`` of leaf ``t``."""
    return min(d.level.coset_times(t, mat_of_edge(x, y)),
               d.level.coset_times(t, mat_of_edge(y, x)))


def equivariant_flip(d: TransverseLambda, s: int) -> TransverseLambda:
    """Flip every edge labelled by the class ``{s, s S}``, in every leaf.

    The quadrilateral around ``e_A`` has sides ``e_{AU}, e_{AT}, e_{At},
    e_{Au}``, so the new value is
    ``(F(sU) F(s t) + F(sT) F(s u)) / F(s)``.  Labels are kept.
    """
    if d.overrides:
        raise ValueError("equivariant flips need override-free data")
    level = d.level
    cls = {s, level.S[s]}
    nbrs = [level.act_letter(s, c) for c in ("U", "t", "T", "u")]
    if any(n in cls for n in nbrs):
        raise OrbitConflictError(
            f"the quadrilateral around class {sorted(cls)} has a side in the same orbit")
    F = list(d.F)
    su, st_inv, st, su_inv = (F[n] for n in nbrs)
    new = (su * st_inv + st * su_inv) / F[s]
    for c in cls:
        F[c] = new
    return TransverseLambda(level, F)


def refine(d: TransverseLambda, m: int) -> TransverseLambda:
    """Pull back data on ``Gamma(k)`` to ``Gamma(k m)``."""
    k = d.level.modulus
    if k is None:
        raise ValueError("refinement needs a congruence level")
    if k * m > MAX_LEVEL:
        raise LevelTooLargeError(f"level {k * m} exceeds the guard {MAX_LEVEL}")
    fine = build_level(k * m)
    proj = [d.level._rep_index[_canon_mod(*r, k)] for r in fine.reps]
    F = [d.F[proj[i]] for i in range(fine.index)]
    overrides = {}
    for i in range(fine.index):
        for (t, key), v in d.overrides.items():
            if t == proj[i]:
                overrides[(i, key)] = v
    return TransverseLambda(fine, F, overrides)


def projection(coarse: FiniteLevel, fine: FiniteLevel) -> list:
    """``fine coset -> coarse coset`` for congruence levels ``k | k'``."""
    k = coarse.modulus
    return [coarse._rep_index[_canon_mod(*r, k)] for r in fine.reps]


def leaf_circle_map(d: TransverseLambda, t: int, n: int) -> list:
    return circle_map_samples(d.leaf(t), n)


def h1_transverse_variation(d: TransverseLambda, n: int, depth: int = 16) -> float:
    """Largest ratio between the h1 horocycle sizes at one vertex over
    different leaves (a measurement only)."""
    sizes = {}
    for t in range(d.level.index):
        dec = h1_decoration(d.leaf(t), n, depth)
        for x in dec.vertices():
            u = dec.point(x)
            sizes.setdefault(x, []).append(u[2])
    return max(max(v) / min(v) for v in sizes.values())
