import itertools
import math

import numpy as np
import pytest

from rmtlab.concentration import (ESSEEN_CONSTANT, enumerate_signed_sums, esseen_bound,
                                  levy_exact_rademacher, levy_monte_carlo,
                                  paley_zygmund, rademacher_moments, sbp_bound,
                                  tensorization_audit)
from rmtlab.errors import ResourceError, ValidationError
from rmtlab.seeding import SeedPath


def _naive_sums(a):
    # sequential accumulation in index order, so equality can be exact
    out = []
    for signs in itertools.product((-1.0, 1.0), repeat=len(a)):
        acc = 0.0
        for s, w in zip(signs, a):
            acc += s * w
        out.append(acc)
    out.sort()
    return np.array(out)


def test_enumerate_matches_naive():
    rng = np.random.default_rng(0)
    for n in (1, 2, 5, 9):
        a = rng.standard_normal(n)
        assert np.array_equal(enumerate_signed_sums(a), _naive_sums(a))


def test_enumerate_gates():
    with pytest.raises(ValidationError):
        enumerate_signed_sums([])
    with pytest.raises(ResourceError):
        enumerate_signed_sums(np.ones(25))


def test_levy_exact_point_masses():
    # single weight: S = +-1, best point carries 1/2
    r = levy_exact_rademacher([1.0], 0.0)
    assert r.value == 0.5
    # two equal weights: P(S = 0) = 1/2
    r = levy_exact_rademacher([1.0, 1.0], 0.0)
    assert r.value == 0.5
    assert r.witness_v == pytest.approx(0.0, abs=1e-9)


def test_levy_exact_window_hand_case():
    # sums of (1, 1): -2, 0, 0, 2; the window [-2, 0] holds 3 of 4
    r = levy_exact_rademacher([1.0, 1.0], 1.0)
    assert r.value == 0.75
    assert r.witness_v == pytest.approx(-1.0)


def test_levy_exact_flat_vector_binomial():
    # flat weights reduce to binomial counts: window of width 2 eps
    n, eps = 10, 0.15
    a = np.full(n, 1.0 / math.sqrt(n))
    r = levy_exact_rademacher(a, eps)
    # S takes values (2k - n)/sqrt(n); eps window spans one lattice site
    best = max(math.comb(n, k) for k in range(n + 1))
    assert r.value == best / 2 ** n


def test_levy_exact_monotone_in_eps():
    a = np.random.default_rng(1).standard_normal(8)
    vals = [levy_exact_rademacher(a, e).value for e in (0.0, 0.1, 0.5, 1.0, 10.0)]
    assert all(x <= y + 1e-15 for x, y in zip(vals, vals[1:]))
    assert vals[-1] == 1.0


def test_levy_witness_consistent():
    rng = np.random.default_rng(2)
    for _ in range(20):
        a = rng.standard_normal(7)
        eps = abs(rng.normal()) * 0.5
        r = levy_exact_rademacher(a, eps)
        sums = _naive_sums(a)
        tol = 1e-12 * np.abs(a).sum()
        direct = np.count_nonzero(np.abs(sums - r.witness_v) <= eps + tol)
        assert direct / sums.size == r.value


def test_levy_monte_carlo_tracks_exact():
    a = np.random.default_rng(3).standard_normal(10)
    a /= np.linalg.norm(a)
    exact = levy_exact_rademacher(a, 0.3).value
    mc = levy_monte_carlo("rademacher", a, 0.3, 20_000, SeedPath(4, "mc"))
    assert abs(mc.value - exact) < 0.03
    assert mc.ci[0] <= mc.value <= mc.ci[1]


def test_levy_monte_carlo_other_kinds():
    a = np.ones(6) / math.sqrt(6.0)
    r = levy_monte_carlo("gaussian", a, 0.5, 5000, SeedPath(5, "mcg"))
    # gaussian S ~ N(0,1): L(S, 0.5) = P(|S| <= 0.5) ~ 0.383
    assert 0.3 < r.value < 0.5


def test_esseen_constant_value():
    assert ESSEEN_CONSTANT == pytest.approx(1.0 / (2.0 * math.sin(1.0) ** 2))


def test_esseen_dominates_exact_smoke():
    rng = np.random.default_rng(6)
    for _ in range(20):
        a = rng.standard_normal(10)
        a /= np.linalg.norm(a)
        for eps in (0.1, 0.5, 1.0):
            bound = esseen_bound(a, eps).value
            exact = levy_exact_rademacher(a, eps).value
            assert bound >= exact - 1e-12


def test_esseen_single_coordinate():
    # L(S, eps) = 1/2 for a single unit weight and eps < 1
    bound = esseen_bound([1.0], 0.5).value
    assert bound >= 0.5


def test_sbp_bound_value_and_precondition():
    n = 16
    a = np.full(n, 0.25)  # flat unit vector, essential lcd near 4
    # eps large enough: lcd search up to (4/pi)/eps stays below the first hit
    eps = (4.0 / math.pi) / 3.0
    r = sbp_bound(a, alpha=2.0, gamma=0.1, eps=eps)
    assert r.value == pytest.approx(10.0 * eps + 10.0 * math.exp(-0.01 * 4.0))
    # eps far too small: the search range covers the hit and the gate trips
    with pytest.raises(ValidationError):
        sbp_bound(a, alpha=2.0, gamma=0.1, eps=0.1)


def test_paley_zygmund_bounds_exact_probability():
    rng = np.random.default_rng(7)
    for _ in range(30):
        a = rng.standard_normal(12)
        a /= np.linalg.norm(a)
        s2, s4 = rademacher_moments(a)
        lam = 0.5
        lower = paley_zygmund(s2, s4, lam)
        sums = enumerate_signed_sums(a)
        exact = np.count_nonzero(np.abs(sums) > lam) / sums.size
        assert exact >= lower - 1e-12


def test_paley_zygmund_gates():
    with pytest.raises(ValidationError):
        paley_zygmund(1.0, 3.0, 1.0)
    with pytest.raises(ValidationError):
        paley_zygmund(0.0, 3.0, 0.5)


def test_rademacher_moments_match_enumeration():
    rng = np.random.default_rng(8)
    for _ in range(10):
        a = rng.standard_normal(9)
        s2, s4 = rademacher_moments(a)
        sums = enumerate_signed_sums(a)
        assert s2 == pytest.approx(np.mean(sums ** 2), rel=1e-12)
        assert s4 == pytest.approx(np.mean(sums ** 4), rel=1e-12)


def test_tensorization_audit_rademacher():
    a = np.full(8, 1.0 / math.sqrt(8.0))
    audit = tensorization_audit((2.0, 0.2), m=3, kind="rademacher", a=a,
                                trials=20_000, seed=SeedPath(9, "tens"))
    assert audit.hypothesis_ok
    assert audit.passed
    for eps, lhs, lo, hi, rhs, hp, hb in audit.rows:
        assert 0.0 <= lhs <= 1.0
        assert lo <= lhs <= hi
        assert hp <= hb + 1e-12


def test_tensorization_audit_hypothesis_violation():
    a = np.full(4, 0.5)
    audit = tensorization_audit((0.1, 0.5), m=2, kind="rademacher", a=a,
                                trials=1000, seed=SeedPath(10, "tens2"))
    assert not audit.hypothesis_ok
    assert not audit.passed
    assert "hypothesis fails" in audit.message


def test_tensorization_audit_gaussian_closed_form():
    a = np.ones(1)
    audit = tensorization_audit((1.0, 0.05), m=2, kind="gaussian", a=a,
                                trials=5000, seed=SeedPath(11, "tens3"))
    assert audit.hypothesis_ok  # density of N(0,1) is below 1/2 everywhere
    assert audit.passed
