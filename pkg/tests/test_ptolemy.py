import math
from fractions import Fraction

import pytest
from hypothesis import given, strategies as st

from decoteich.ptolemy import (
    QuadLambdas, check_omega_invariance, flip, flip_pushforward, flipped, omega_eval,
    omega_quad,
)

SQ2 = math.sqrt(2)
pos = st.floats(0.1, 10)
comp = st.floats(-5, 5)
fracs = st.fractions(min_value=Fraction(1, 50), max_value=50)
quads = st.builds(QuadLambdas, pos, pos, pos, pos, pos)
vec5 = st.fixed_dictionaries({k: comp for k in "abcde"})


def test_flip_examples():
    assert flip(QuadLambdas(SQ2, SQ2, SQ2, SQ2, SQ2)) == pytest.approx(2 * SQ2, rel=1e-15)
    assert flip(QuadLambdas(1, 1, 1, 1, 1)) == 2


@given(fracs, fracs, fracs, fracs, fracs)
def test_flip_involution_exact(a, b, c, d, e):
    q = QuadLambdas(a, b, c, d, e)
    back = flipped(flipped(q))
    assert back.e == e
    assert back.values() == (c, d, a, b, e)
    assert back.labels == ("c", "d", "a", "b", "e")


@given(quads)
def test_flip_involution_float(q):
    assert flipped(flipped(q)).e == pytest.approx(q.e, rel=1e-12)


@given(quads, st.floats(0.01, 100))
def test_flip_scale(q, s):
    assert flip(q.scaled(s)) == pytest.approx(s * flip(q), rel=1e-14)


@given(fracs, fracs, fracs, fracs, fracs, fracs)
def test_flip_scale_exact(a, b, c, d, e, s):
    q = QuadLambdas(a, b, c, d, e)
    assert flip(q.scaled(s)) == s * flip(q)


def test_omega_examples():
    assert omega_eval(1, 1, 1, (1, 0, 0), (0, 1, 0)) == 1
    assert omega_eval(2, 3, 5, (1, 2, 3), (1, 2, 3)) == 0


@given(pos, pos, pos, comp, comp, comp, comp, comp, comp, st.floats(0.1, 10))
def test_omega_scale_invariant(x, y, z, a1, b1, c1, a2, b2, c2, s):
    base = omega_eval(x, y, z, (a1, b1, c1), (a2, b2, c2))
    scaled = omega_eval(s * x, s * y, s * z, (s * a1, s * b1, s * c1), (s * a2, s * b2, s * c2))
    assert scaled == pytest.approx(base, rel=1e-9, abs=1e-9)


@given(pos, pos, pos, comp, comp, comp, comp, comp, comp, comp, comp, comp, comp)
def test_omega_bilinear_antisymmetric(x, y, z, a1, b1, c1, a2, b2, c2, a3, b3, c3, k):
    v1, v2, v3 = (a1, b1, c1), (a2, b2, c2), (a3, b3, c3)
    w = omega_eval(x, y, z, v1, v2)
    assert omega_eval(x, y, z, v2, v1) == pytest.approx(-w, abs=1e-9)
    mix = tuple(p + k * r for p, r in zip(v1, v3))
    lin = w + k * omega_eval(x, y, z, v3, v2)
    assert omega_eval(x, y, z, mix, v2) == pytest.approx(lin, rel=1e-9, abs=1e-7)


def test_pushforward_examples():
    q = QuadLambdas(1, 1, 1, 1, 1)
    zero = flip_pushforward(q, {})
    assert all(v == 0 for v in zero.values())
    assert flip_pushforward(q, {"a": 1.0})["f"] == 1


@given(quads, vec5)
def test_pushforward_finite_difference(q, v):
    # oracle: central difference of the flip along v
    h = 1e-6
    plus = QuadLambdas(*(x + h * v[k] for x, k in zip(q.values(), "abcde")))
    minus = QuadLambdas(*(x - h * v[k] for x, k in zip(q.values(), "abcde")))
    if min(minus.values()) <= 0:
        return
    fd = (flip(plus) - flip(minus)) / (2 * h)
    got = flip_pushforward(q, v)["f"]
    assert got == pytest.approx(fd, rel=1e-5, abs=1e-5 * (1 + flip(q)))


@given(quads, vec5)
def test_pushforward_involution(q, v):
    w = flip_pushforward(flipped(q), flip_pushforward(q, v))
    for k in "abcde":
        assert w[k] == pytest.approx(v[k], rel=1e-12, abs=1e-12 * (1 + max(map(abs, v.values()))))


@given(quads, vec5, vec5)
def test_omega_invariance(q, v1, v2):
    scale = (1 + max(map(abs, v1.values()))) * (1 + max(map(abs, v2.values())))
    assert check_omega_invariance(q, v1, v2) < 1e-10 * scale
    assert check_omega_invariance(q, v1, v1) < 1e-12 * scale


def test_omega_symmetric_point():
    q = QuadLambdas(SQ2, SQ2, SQ2, SQ2, SQ2)
    v1 = {"a": 1.0, "b": 1.0, "c": 1.0, "d": 1.0, "e": 0.5}
    v2 = {"a": 1.0, "b": -1.0, "c": 1.0, "d": -1.0, "e": 0.0}
    assert check_omega_invariance(q, v1, v2) < 1e-12


def test_omega_invariance_symbolic():
    # oracle: the pulled-back form agrees identically as rational functions
    sp = pytest.importorskip("sympy")
    a, b, c, d, e = sp.symbols("a b c d e", positive=True)
    va = sp.symbols("p0:5")
    vb = sp.symbols("q0:5")
    f = (a * c + b * d) / e
    names = (a, b, c, d, e)

    def dlog(expr, v):
        return sum(sp.diff(sp.log(expr), x) * vx for x, vx in zip(names, v))

    def om(x, y, z):
        return (dlog(x, va) * dlog(y, vb) - dlog(y, va) * dlog(x, vb)
                + dlog(y, va) * dlog(z, vb) - dlog(z, va) * dlog(y, vb)
                + dlog(z, va) * dlog(x, vb) - dlog(x, va) * dlog(z, vb))

    lhs = om(a, b, e) + om(c, d, e)
    rhs = om(b, c, f) + om(d, a, f)
    assert sp.simplify(lhs - rhs) == 0


def test_omega_quad_labels_follow_flip():
    q = QuadLambdas(1.0, 2.0, 3.0, 4.0, 5.0, labels=("x1", "x2", "x3", "x4", "x5"))
    q2 = flipped(q)
    assert q2.labels == ("x2", "x3", "x4", "x1", "x5'")
    v = {"x1": 1.0, "x5": 2.0}
    w = flip_pushforward(q, v)
    assert set(w) == set(q2.labels)
    assert omega_quad(q, v, {"x2": 1.0}) == pytest.approx(
        omega_quad(q2, w, flip_pushforward(q, {"x2": 1.0})))


def test_positive_required():
    with pytest.raises(ValueError):
        QuadLambdas(1, 1, 0, 1, 1)
