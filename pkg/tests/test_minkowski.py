import math

import numpy as np
import pytest
from hypothesis import given, strategies as st

from decoteich.errors import CommonRayError, SameCenterError
from decoteich.farey import Rational
from decoteich.minkowski import (
    Horocycle, act_on_light_cone, boundary_projection, boundary_transport,
    boundary_transport_inverse, delta_from_lambda, duality_from_horocycle,
    duality_to_horocycle, halfplane_to_disk, is_light_cone, lambda_from_delta,
    lambda_halfplane, lambda_lightcone, light_cone_to_spinor, mink_inner,
    spinor_to_light_cone,
)

SQ2 = math.sqrt(2)

centers = st.floats(-50, 50, allow_nan=False)
sizes = st.floats(1e-3, 1e3)
scales = st.floats(1e-3, 1e3)


def hp(c, d):
    return Horocycle.half_plane(c, d)


def finite_formula(c0, d0, c1, d1):
    # independent oracle: the classical half-plane expression
    return math.sqrt(2.0 / (d0 * d1)) * abs(c0 - c1)


def test_inner_product_examples():
    assert mink_inner((1, 0, 1), (1, 0, 1)) == 0
    assert mink_inner((0, 0, 1), (0, 0, 1)) == -1
    assert mink_inner((1, 0, 1), (-1, 0, 1)) == -2


def test_lambda_lightcone_examples():
    assert lambda_lightcone((1, 0, 1), (-1, 0, 1)) == pytest.approx(SQ2, abs=1e-15)
    s = 3.7
    assert lambda_lightcone((1, 0, 1), (-s, 0, s)) == pytest.approx(math.sqrt(2 * s), rel=1e-14)
    with pytest.raises(CommonRayError):
        lambda_lightcone((1, 0, 1), (2, 0, 2))


def test_lambda_halfplane_examples():
    assert lambda_halfplane(hp(0, 1), hp(1, 1)) == pytest.approx(SQ2, rel=1e-14)
    assert lambda_halfplane(hp(0, 0.25), hp(1, 1)) == pytest.approx(2 * SQ2, rel=1e-14)
    assert lambda_halfplane(hp(math.inf, 1), hp(0, 1)) == pytest.approx(SQ2, rel=1e-14)
    with pytest.raises(SameCenterError):
        lambda_halfplane(hp(2, 1), hp(2, 3))


def test_lambda_from_delta_examples():
    assert lambda_from_delta(0.0) == pytest.approx(SQ2)
    assert lambda_from_delta(2 * math.log(2)) == pytest.approx(2 * SQ2, rel=1e-14)
    assert lambda_from_delta(-2 * math.log(2)) == pytest.approx(SQ2 / 2, rel=1e-14)


@given(st.floats(-20, 20))
def test_delta_round_trip(d):
    assert delta_from_lambda(lambda_from_delta(d)) == pytest.approx(d, abs=1e-12)


def test_boundary_transport_anchors():
    assert boundary_transport(Rational(1, 0)) == pytest.approx(1)
    assert boundary_transport(Rational(0, 1)) == pytest.approx(-1)
    assert boundary_transport(Rational(1, 1)) == pytest.approx(-1j)
    assert boundary_transport(math.inf) == pytest.approx(1)


@given(st.floats(-1e3, 1e3))
def test_boundary_transport_inverse(x):
    w = boundary_transport(x)
    assert abs(w) == pytest.approx(1, abs=1e-12)
    assert boundary_transport_inverse(w) == pytest.approx(x, rel=1e-9, abs=1e-9)


@given(centers, sizes, centers, sizes)
def test_model_consistency_finite(c0, d0, c1, d1):
    if abs(c0 - c1) < 1e-3:
        return
    want = finite_formula(c0, d0, c1, d1)
    u0 = duality_from_horocycle(hp(c0, d0))
    u1 = duality_from_horocycle(hp(c1, d1))
    assert lambda_lightcone(u0, u1) == pytest.approx(want, rel=1e-12)
    assert lambda_halfplane(hp(c0, d0), hp(c1, d1)) == pytest.approx(want, rel=1e-12)


@given(sizes, centers, sizes)
def test_model_consistency_infinity(h, c, d):
    via_cone = lambda_lightcone(duality_from_horocycle(hp(math.inf, h)),
                                duality_from_horocycle(hp(c, d)))
    assert lambda_halfplane(hp(math.inf, h), hp(c, d)) == pytest.approx(via_cone, rel=1e-12)


@given(centers, sizes)
def test_duality_round_trip_halfplane(c, d):
    h = hp(c, d)
    u = duality_from_horocycle(h)
    assert is_light_cone(u)
    back = duality_to_horocycle(u)
    assert back.center == pytest.approx(c, rel=1e-12, abs=1e-12)
    assert back.size == pytest.approx(d, rel=1e-12)
    assert np.allclose(duality_from_horocycle(back), u, rtol=0, atol=1e-12 * np.linalg.norm(u))


@given(st.floats(0, 2 * math.pi), st.floats(1e-3, 1.99))
def test_duality_round_trip_disk(theta, d):
    h = Horocycle.disk(complex(math.cos(theta), math.sin(theta)), d)
    back = duality_to_horocycle(duality_from_horocycle(h), "disk")
    assert abs(complex(back.center) - complex(h.center)) < 1e-12
    assert back.size == pytest.approx(d, rel=1e-12)


def test_duality_infinity_round_trip():
    u = duality_from_horocycle(hp(math.inf, 2.5))
    back = duality_to_horocycle(u)
    assert math.isinf(back.center) and back.size == pytest.approx(2.5)


@given(centers, sizes, st.floats(1.5, 100))
def test_projective_center(c, d, s):
    u = duality_from_horocycle(hp(c, d))
    a, b = duality_to_horocycle(u), duality_to_horocycle(s * u)
    assert a.center == pytest.approx(b.center, rel=1e-12, abs=1e-12)
    assert a.size != pytest.approx(b.size)


def test_cross_model_example():
    u0 = duality_from_horocycle(hp(0, 1))
    u1 = duality_from_horocycle(hp(1, 1))
    assert lambda_lightcone(u0, u1) == pytest.approx(SQ2, rel=1e-14)


@given(st.floats(-5, 5), st.floats(-5, 5), st.floats(-5, 5), st.floats(-5, 5), scales, scales)
def test_scaling(a0, b0, a1, b1, s, t):
    u0, u1 = spinor_to_light_cone(a0, b0), spinor_to_light_cone(a1, b1)
    if abs(a0 * b1 - a1 * b0) < 1e-2:
        return
    base = lambda_lightcone(u0, u1)
    assert lambda_lightcone(s * u0, t * u1) == pytest.approx(math.sqrt(s * t) * base, rel=1e-12)


@given(st.integers(-5, 5), st.integers(-5, 5), st.integers(-5, 5), centers, sizes, centers, sizes)
def test_mobius_invariance(a, b, c, c0, d0, c1, d1):
    # integer matrix with det 1 built from a, b, c when possible
    if a == 0 or (1 + b * c) % a:
        return
    m = np.array([[a, b], [c, (1 + b * c) // a]], dtype=float)
    if abs(c0 - c1) < 1e-2:
        return
    u0 = duality_from_horocycle(hp(c0, d0))
    u1 = duality_from_horocycle(hp(c1, d1))
    before = lambda_lightcone(u0, u1)
    after = lambda_lightcone(act_on_light_cone(m, u0), act_on_light_cone(m, u1))
    assert after == pytest.approx(before, rel=1e-10)


@given(st.floats(-10, 10), st.floats(-10, 10))
def test_spinor_round_trip(a, b):
    if math.hypot(a, b) < 1e-3:
        return
    u = spinor_to_light_cone(a, b)
    a2, b2 = light_cone_to_spinor(u)
    # spinors are defined up to an overall sign
    sgn = 1 if a * a2 + b * b2 > 0 else -1
    assert (sgn * a2, sgn * b2) == pytest.approx((a, b), abs=1e-9 * (1 + abs(a) + abs(b)))


@given(centers, sizes)
def test_projection_matches_transport(c, d):
    w = boundary_projection(duality_from_horocycle(hp(c, d)))
    assert abs(w / abs(w) - boundary_transport(c)) < 1e-10
    assert abs(halfplane_to_disk(complex(c, 0)) - boundary_transport(c)) < 1e-10
