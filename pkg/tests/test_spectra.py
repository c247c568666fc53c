import numpy as np
import pytest

from rmtlab.errors import DegenerateInputError, DimensionError
from rmtlab.seeding import SeedPath
from rmtlab.spectra import (condition_number, distance_to_span, operator_norm,
                            random_normal_vector, singular_values,
                            smallest_singular_value)


def test_singular_values_of_diagonal():
    m = np.diag([3.0, -1.0, 2.0])
    s = singular_values(m)
    assert np.allclose(s, [3.0, 2.0, 1.0])
    assert s[0] >= s[1] >= s[2]


def test_singular_values_verified_path():
    rng = np.random.default_rng(0)
    m = rng.standard_normal((8, 5))
    s = singular_values(m, verify=True)
    assert np.allclose(s, np.linalg.svd(m, compute_uv=False))


def test_operator_and_smallest():
    m = np.array([[2.0, 0.0], [0.0, 0.5], [0.0, 0.0]])
    assert operator_norm(m) == pytest.approx(2.0)
    assert smallest_singular_value(m) == pytest.approx(0.5)


def test_smallest_singular_value_is_min_over_sphere():
    rng = np.random.default_rng(1)
    m = rng.standard_normal((9, 4))
    sn = smallest_singular_value(m)
    x = rng.standard_normal((4, 2000))
    x /= np.linalg.norm(x, axis=0, keepdims=True)
    sampled = np.linalg.norm(m @ x, axis=0).min()
    assert sn <= sampled + 1e-12


def test_smallest_needs_tall_matrix():
    with pytest.raises(DimensionError):
        smallest_singular_value(np.ones((2, 3)))


def test_condition_number():
    assert condition_number(np.diag([4.0, 2.0])) == pytest.approx(2.0)
    assert condition_number(np.diag([1.0, 0.0])) == np.inf
    q = np.array([[0.0, 1.0], [-1.0, 0.0]])
    assert condition_number(q) == pytest.approx(1.0)


def test_distance_to_span_cases():
    e1 = np.array([1.0, 0.0, 0.0])
    e2 = np.array([0.0, 1.0, 0.0])
    x = np.array([0.0, 0.0, 2.0])
    assert distance_to_span(x, [e1, e2]) == pytest.approx(2.0)
    assert distance_to_span(e1 + e2, [e1, e2]) == pytest.approx(0.0, abs=1e-12)


def test_distance_to_span_matches_lstsq():
    rng = np.random.default_rng(2)
    for _ in range(20):
        b = rng.standard_normal((6, 3))
        x = rng.standard_normal(6)
        d = distance_to_span(x, [b[:, j] for j in range(3)])
        _, res, _, _ = np.linalg.lstsq(b, x, rcond=None)
        want = np.sqrt(res[0]) if res.size else 0.0
        assert d == pytest.approx(want, abs=1e-10)


def test_random_normal_vector_basic():
    rng = np.random.default_rng(3)
    cols = [rng.standard_normal(7) for _ in range(6)]
    z = random_normal_vector(cols)
    assert np.linalg.norm(z) == pytest.approx(1.0, abs=1e-12)
    for c in cols:
        assert abs(z @ c) < 1e-9


def test_random_normal_vector_two_dims():
    z = random_normal_vector([np.array([1.0, 1.0])])
    assert np.allclose(z, np.array([1.0, -1.0]) / np.sqrt(2.0))


def test_random_normal_vector_sign_convention():
    rng = np.random.default_rng(4)
    for _ in range(20):
        cols = [rng.standard_normal(5) for _ in range(4)]
        z = random_normal_vector(cols)
        lead = z[np.abs(z) > 1e-12][0]
        assert lead > 0


def test_random_normal_vector_errors():
    with pytest.raises(DimensionError):
        random_normal_vector([np.ones(4)])  # needs exactly n-1 vectors
    dep = [np.array([1.0, 0.0, 0.0]), np.array([2.0, 0.0, 0.0])]
    with pytest.raises(DegenerateInputError):
        random_normal_vector(dep)


def test_seeding_does_not_leak_into_spectra():
    # spectra are pure functions of the matrix
    m = SeedPath(0, "x").rng().standard_normal((5, 5))
    assert np.array_equal(singular_values(m), singular_values(m.copy()))
