import itertools
import math
import threading

import numpy as np
import pytest
from hypothesis import given, settings, strategies as st

from decoteich.errors import BadNormalFormError, LevelTooLargeError, OrbitConflictError
from decoteich.farey import (
    INFINITY, ONE, ZERO, apply_mobius, edge_key, enumerate_vertices, invert_word,
    iter_normal_forms, mat_of_word,
)
from decoteich.minkowski import act_on_light_cone
from decoteich.mobius import normalize_sl2, psl_distance
from decoteich.solenoid_approx import (
    DOE_KEY, FiniteLevel, TransverseLambda, build_level, check_cocycle, commutator_level,
    constant, equivariant_flip, h1_transverse_variation, leaf_circle_map, pinch_bound,
    projection, psl2_order, random_equivariant, refine, rho, rho_direct, s_orbits,
    trivial_level, validate_equivariance,
)

SQ2 = math.sqrt(2)
GAMMA2 = build_level(2)
WORDS4 = list(iter_normal_forms(4))


def brute_order(k):
    # oracle: count SL2(Z/k) directly, then identify +-
    n = sum(1 for a, b, c, d in itertools.product(range(k), repeat=4) if (a * d - b * c) % k == 1)
    return n if k <= 2 else n // 2


def mat(w):
    m = mat_of_word(w)
    return np.array([[m.a, m.b], [m.c, m.d]], dtype=float)


@pytest.mark.parametrize("k", [2, 3, 4, 5, 6])
def test_level_index(k):
    level = build_level(k)
    assert level.index == brute_order(k) == psl2_order(k)
    assert all(level.S[level.S[i]] == i for i in range(level.index))
    assert level.index == {2: 6, 3: 12, 4: 24, 5: 60, 6: 72}[k]


def test_level_guard():
    with pytest.raises(LevelTooLargeError):
        build_level(14)
    with pytest.raises(ValueError):
        build_level(1)


def test_level_actions_match_matrices():
    level = build_level(3)
    for w in WORDS4:
        for t in range(level.index):
            assert level.act(t, w) == level.coset_times(t, mat_of_word(w))


def test_bad_tables():
    with pytest.raises(ValueError):
        FiniteLevel([0, 0], [0, 1])
    with pytest.raises(ValueError):
        FiniteLevel([1, 0], [0, 1])  # (ST)^3 fails


def test_equivariance_examples():
    assert validate_equivariance(constant(GAMMA2)) == 0
    d = random_equivariant(GAMMA2, np.random.default_rng(1))
    assert validate_equivariance(d) == 0
    key = edge_key(ONE, INFINITY)
    bumped = TransverseLambda(GAMMA2, d.F, {(2, key): d.value(2, key) + 0.125})
    assert validate_equivariance(bumped) == pytest.approx(0.125, abs=1e-15)


def test_pinch_examples():
    assert pinch_bound(constant(GAMMA2)) == pytest.approx(SQ2)
    d = random_equivariant(GAMMA2, np.random.default_rng(2))
    assert pinch_bound(d) <= 2
    for orb in s_orbits(GAMMA2):
        assert math.isfinite(pinch_bound(equivariant_flip(d, orb[0])))


def test_rho_identity_and_involution():
    d = random_equivariant(GAMMA2, np.random.default_rng(3))
    for t in range(GAMMA2.index):
        assert np.array_equal(rho(d, "", t), np.eye(2))
        m = rho(d, "S", t)
        assert psl_distance(m @ m, np.eye(2)) < 1e-9


def test_rho_bad_word():
    with pytest.raises(BadNormalFormError):
        rho(constant(GAMMA2), "SS", 0)
    with pytest.raises(BadNormalFormError):
        rho(constant(GAMMA2), "Tt", 0)


@pytest.mark.parametrize("level", [GAMMA2, build_level(3), commutator_level()],
                         ids=["gamma2", "gamma3", "commutator"])
def test_constant_data_gives_modular_matrices(level):
    d = constant(level)
    for w in iter_normal_forms(6):
        for t in range(level.index):
            assert psl_distance(rho(d, w, t), normalize_sl2(mat(w))) < 1e-9


def test_rho_matches_direct():
    d = random_equivariant(build_level(3), np.random.default_rng(4))
    for w in WORDS4[::3]:
        for t in range(0, 12, 5):
            assert psl_distance(rho(d, w, t), normalize_sl2(rho_direct(d, w, t))) < 1e-9


@settings(max_examples=40)
@given(st.integers(0, 2 ** 32 - 1), st.sampled_from(WORDS4), st.sampled_from(WORDS4),
       st.integers(0, 5))
def test_cocycle(seed, w1, w2, t):
    d = random_equivariant(GAMMA2, np.random.default_rng(seed))
    assert check_cocycle(d, w1, w2, t) < 1e-8


def test_cocycle_identity_and_square():
    d = random_equivariant(GAMMA2, np.random.default_rng(5))
    for t in range(6):
        assert check_cocycle(d, "ST", "", t) == 0
        t2 = GAMMA2.act(t, "S")
        m = rho(d, "S", t2) @ rho(d, "S", t)
        assert psl_distance(normalize_sl2(m), np.eye(2)) < 1e-9


def test_leaf_equivariance():
    # decorations of leaves related by g are carried to each other by rho(g, t)
    d = random_equivariant(GAMMA2, np.random.default_rng(6))
    for w in ("S", "T", "UT", "Stu"):
        g = mat_of_word(w)
        for t in range(6):
            m = rho(d, w, t)
            src = d.decoration(t)
            dst = d.decoration(GAMMA2.act(t, invert_word(w)))
            for x in enumerate_vertices(2):
                got = act_on_light_cone(m, src.point(x))
                want = dst.point(apply_mobius(g, x))
                assert np.allclose(got, want, rtol=1e-9, atol=1e-9 * want[2])


def test_leaf_circle_map_constant():
    d = constant(GAMMA2)
    for t in range(6):
        for x, y in leaf_circle_map(d, t, 4):
            assert (math.isinf(y) and x.is_infinite) or y == pytest.approx(x.p / x.q, abs=1e-12)


def test_rho_threads():
    d = random_equivariant(build_level(3), np.random.default_rng(8))
    ref = random_equivariant(build_level(3), np.random.default_rng(8))
    jobs = [(w, t) for w in WORDS4 for t in range(12)]
    bad = []

    def work(part):
        for w, t in part:
            if psl_distance(rho(d, w, t), rho(ref, w, t)) > 1e-15:
                bad.append((w, t))

    threads = [threading.Thread(target=work, args=(jobs[i::4],)) for i in range(4)]
    for th in threads:
        th.start()
    for th in threads:
        th.join()
    assert not bad


def test_flip_examples():
    d = constant(GAMMA2)
    f = equivariant_flip(d, 0)
    assert f.F[0] == pytest.approx(2 * SQ2) and f.F[1] == pytest.approx(2 * SQ2)
    assert validate_equivariance(f) == 0
    with pytest.raises(OrbitConflictError):
        equivariant_flip(constant(trivial_level()), 0)


@given(st.integers(0, 2 ** 32 - 1), st.sampled_from([2, 3, 4]))
def test_flip_involution(seed, k):
    level = build_level(k)
    d = random_equivariant(level, np.random.default_rng(seed))
    for orb in s_orbits(level)[:3]:
        f = equivariant_flip(d, orb[0])
        assert validate_equivariance(f, 2) == 0
        back = equivariant_flip(f, orb[0])
        assert np.allclose(back.F, d.F, rtol=1e-12, atol=0)


def test_refine():
    d = random_equivariant(GAMMA2, np.random.default_rng(9))
    fine = refine(d, 2)
    proj = projection(GAMMA2, fine.level)
    assert fine.level.index == 24
    assert validate_equivariance(fine, 2) == 0
    assert fine.value_set() == d.value_set()
    assert pinch_bound(fine) == pinch_bound(d)
    for w in WORDS4[::4]:
        for i in range(0, 24, 5):
            assert psl_distance(rho(fine, w, i), rho(d, w, proj[i])) < 1e-12
    c = refine(constant(GAMMA2), 3)
    assert set(c.F) == {SQ2}
    with pytest.raises(LevelTooLargeError):
        refine(d, 7)


def test_refine_commutes_with_flip():
    d = random_equivariant(GAMMA2, np.random.default_rng(10))
    s = s_orbits(GAMMA2)[1][0]
    fine = refine(d, 2)
    proj = projection(GAMMA2, fine.level)
    flipped_fine = fine
    for orb in s_orbits(fine.level):
        if proj[orb[0]] in (s, GAMMA2.S[s]):
            flipped_fine = equivariant_flip(flipped_fine, orb[0])
    assert np.allclose(flipped_fine.F, refine(equivariant_flip(d, s), 2).F, rtol=1e-14, atol=0)


def test_json_round_trip():
    d = random_equivariant(commutator_level(), np.random.default_rng(11))
    back = TransverseLambda.from_json(d.to_json())
    assert back.F == d.F and back.level.S == d.level.S
    g = random_equivariant(GAMMA2, np.random.default_rng(12))
    key = edge_key(ZERO, ONE)
    g = TransverseLambda(GAMMA2, g.F, {(3, key): 1.25})
    back = TransverseLambda.from_json(g.to_json())
    assert back.overrides == g.overrides and back.level.modulus == 2


def test_doe_key_values():
    d = random_equivariant(GAMMA2, np.random.default_rng(13))
    for t in range(6):
        assert d.value(t, DOE_KEY) == d.F[t]


def test_h1_variation_is_measured():
    d = random_equivariant(GAMMA2, np.random.default_rng(14), 0.9, 1.1)
    v = h1_transverse_variation(d, 1, depth=8)
    assert math.isfinite(v) and v >= 1.0
    assert h1_transverse_variation(constant(GAMMA2), 1, depth=8) == pytest.approx(1.0)
