import math

import numpy as np
import pytest
from hypothesis import given, strategies as st

from decoteich import kernels
from decoteich.minkowski import spinor_to_light_cone

BACKENDS = kernels.backends()
spin = st.tuples(st.floats(-10, 10), st.floats(-10, 10)).filter(lambda s: math.hypot(*s) > 0.1)


def cone(s):
    return spinor_to_light_cone(*s)


def test_fallback_present():
    assert "python" in BACKENDS
    assert kernels.BACKEND in BACKENDS


@pytest.mark.parametrize("name", sorted(BACKENDS))
def test_standard_extension(name):
    k = BACKENDS[name]
    u_inf, u0, w = cone((1, 0)), cone((0, 1)), cone((1, 1))
    r = math.sqrt(2)
    vx, vy, vz, status = k.extend_one(*u_inf, *u0, *w, r, r, 1e-12)
    assert status == kernels.OK
    assert np.allclose((vx, vy, vz), cone((-1, 1)), atol=1e-15)


@pytest.mark.parametrize("name", sorted(BACKENDS))
def test_status_codes(name):
    k = BACKENDS[name]
    a, b = cone((1, 0)), cone((0, 1))
    assert k.extend_one(*a, *(2 * a), *b, 1.0, 1.0, 1e-12)[3] == kernels.COMMON_RAY
    assert k.extend_one(*a, *b, *(3 * a), 1.0, 1.0, 1e-12)[3] == kernels.DEGENERATE_WITNESS


@given(spin, spin, spin, st.floats(0.1, 10), st.floats(0.1, 10))
def test_backends_agree(s0, s1, sw, l0, l1):
    args = (*cone(s0), *cone(s1), *cone(sw), l0, l1, 1e-12)
    ref = BACKENDS["python"].extend_one(*args)
    for k in BACKENDS.values():
        got = k.extend_one(*args)
        assert got[3] == ref[3]
        assert np.allclose(got[:3], ref[:3], rtol=1e-13, atol=1e-13 * abs(ref[2]))


def test_batch_matches_single(rng):
    n = 200
    S = rng.normal(size=(3, n, 2))
    U0, U1, W = (np.array([cone(s) for s in block]) for block in S)
    L0, L1 = rng.uniform(0.2, 5, n), rng.uniform(0.2, 5, n)
    for k in BACKENDS.values():
        V, status = k.extend_batch(U0, U1, W, L0, L1, 1e-12)
        lam = k.lambda_batch(U0, U1)
        for i in range(n):
            vx, vy, vz, st_i = k.extend_one(*U0[i], *U1[i], *W[i], L0[i], L1[i], 1e-12)
            assert status[i] == st_i
            assert np.allclose(V[i], (vx, vy, vz), rtol=0, atol=1e-14 * abs(vz))
            want = math.sqrt(-(U0[i, 0] * U1[i, 0] + U0[i, 1] * U1[i, 1] - U0[i, 2] * U1[i, 2]))
            assert lam[i] == pytest.approx(want, rel=1e-9)
            assert k.lambda_one(*U0[i], *U1[i]) == pytest.approx(lam[i], rel=1e-15)


@given(spin)
def test_spinor_inverse(s):
    for k in BACKENDS.values():
        a, b = k.spinor(*cone(s))
        assert np.allclose(cone((a, b)), cone(s), rtol=1e-12, atol=1e-12 * (s[0] ** 2 + s[1] ** 2))
