import math

import numpy as np
import pytest

from rmtlab.errors import (DegenerateInputError, DimensionError, ResourceError,
                           ValidationError)
from rmtlab.geometry import (khinchin_constants, min_l1_on_sphere,
                             octahedron_section, projected_extremum,
                             random_l1_lower_envelope, sandwich_audit,
                             section_scan, vertices_to_csv)
from rmtlab.seeding import SeedPath


def test_section_scan_hand_case():
    a = np.array([[1.0, 0.0], [0.0, 1.0], [1.0, 1.0]])
    report = section_scan(a)
    assert report.m == 2
    assert report.degenerate_count == 0
    assert len(report.vertices) == 3
    # support {0,1} leaves row (1,1) as the kernel constraint, so
    # y = (1,-1)/sqrt(2) and |Ay|_1 = sqrt(2); the other two give 2
    assert report.min_l1 == pytest.approx(math.sqrt(2.0), abs=1e-12)
    assert report.argmin_support == (0, 1)
    for v in report.vertices:
        assert np.linalg.norm(v.v) == pytest.approx(math.sqrt(0.5), abs=1e-12)
        assert abs(np.abs(v.v).sum() - 1.0) < 1e-12
        assert abs(np.linalg.norm(v.y) - 1.0) < 1e-12
    assert report.diameter == pytest.approx(math.sqrt(2.0), abs=1e-12)
    assert report.kashin_ratio == pytest.approx(math.sqrt(1.5), abs=1e-12)


def test_section_scan_matches_grid_on_circle_rows():
    angles = np.pi * np.arange(5) / 5.0
    a = np.column_stack([np.cos(angles), np.sin(angles)])
    report = section_scan(a)
    phi = np.linspace(0.0, np.pi, 200_001)
    vals = np.abs(np.cos(angles[:, None] - phi[None, :])).sum(axis=0)
    grid_min = float(vals.min())
    assert grid_min >= report.min_l1 - 1e-9
    assert grid_min == pytest.approx(report.min_l1, abs=2e-4)


def test_section_scan_is_a_true_minimum():
    rng = np.random.default_rng(0)
    a = rng.standard_normal((8, 5))
    report = min_l1_on_sphere(a)
    x = rng.standard_normal((2000, 5))
    x /= np.linalg.norm(x, axis=1, keepdims=True)
    probed = np.abs(x @ a.T).sum(axis=1)
    assert float(probed.min()) >= report.min_l1 - 1e-12
    env = random_l1_lower_envelope(a, 500, SeedPath(0, "envelope"))
    assert env >= report.min_l1 - 1e-12
    assert report.kashin_ratio >= 1.0 - 1e-12


def test_section_scan_counts_degenerate_supports():
    a = np.array([[1.0, 0.0], [0.0, 1.0], [0.0, 0.0]])
    report = section_scan(a)
    assert report.degenerate_count == 1
    assert len(report.vertices) == 2
    assert report.min_l1 == 1.0


def test_section_scan_all_degenerate():
    a = np.array([[1.0, 0.0], [2.0, 0.0], [3.0, 0.0]])
    with pytest.raises(DegenerateInputError):
        section_scan(a)


def test_section_scan_gates():
    with pytest.raises(DimensionError):
        section_scan(np.eye(3))
    with pytest.raises(DimensionError):
        section_scan(np.ones(4))
    with pytest.raises(ResourceError):
        section_scan(np.random.default_rng(1).standard_normal((4, 2)), budget=2)


def test_octahedron_section_jitter_is_seeded():
    a = np.vstack([np.eye(3), np.eye(3)])  # repeated rows, fully degenerate
    r1 = octahedron_section(a, jitter=1e-3, jitter_seed=SeedPath(7, "jit"))
    r2 = octahedron_section(a, jitter=1e-3, jitter_seed=SeedPath(7, "jit"))
    assert r1.min_l1 == r2.min_l1


def test_projected_extremum_p2_matches_singular_values():
    rng = np.random.default_rng(2)
    a = rng.standard_normal((6, 4))
    s = np.linalg.svd(a, compute_uv=False)
    hi, yhi = projected_extremum(a, 2.0, True, starts=300, master_seed=0)
    lo, ylo = projected_extremum(a, 2.0, False, starts=300, master_seed=0)
    assert hi <= s[0] ** 2 + 1e-9
    assert lo >= s[-1] ** 2 - 1e-9
    assert hi == pytest.approx(s[0] ** 2, rel=2e-5)
    assert lo == pytest.approx(s[-1] ** 2, rel=2e-5)
    assert abs(np.linalg.norm(yhi) - 1.0) < 1e-9
    assert abs(np.linalg.norm(ylo) - 1.0) < 1e-9


def test_projected_extremum_p1_min_snaps_to_scan_value():
    rng = np.random.default_rng(3)
    for seed in range(3):
        a = rng.standard_normal((9, 6))
        report = min_l1_on_sphere(a)
        val, y = projected_extremum(a, 1.0, False, starts=400, master_seed=seed,
                                    label="p1_min_test")
        assert val >= report.min_l1 - 1e-12
        assert val == pytest.approx(report.min_l1, rel=1e-9)
        assert float(np.abs(a @ y).sum()) == pytest.approx(val, rel=1e-12)


def test_projected_extremum_gates():
    a = np.random.default_rng(4).standard_normal((5, 3))
    with pytest.raises(ValidationError):
        projected_extremum(a, 0.5, True)
    with pytest.raises(ValidationError):
        projected_extremum(a, 2.0, True, starts=0)
    with pytest.raises(DimensionError):
        projected_extremum(np.ones(3), 2.0, True)


def test_khinchin_p2_is_exact():
    rng = np.random.default_rng(5)
    a = rng.standard_normal((10, 4))
    s = np.linalg.svd(a, compute_uv=False)
    est = khinchin_constants(a, 2.0)
    assert est.alpha_hat == pytest.approx(s[-1] / math.sqrt(10), abs=0)
    assert est.beta_hat == pytest.approx(s[0] / math.sqrt(10), abs=0)
    assert est.alpha_exact and est.beta_exact


def test_khinchin_p1_lower_end_matches_scan():
    rng = np.random.default_rng(6)
    a = rng.standard_normal((9, 6))
    report = min_l1_on_sphere(a)
    est = khinchin_constants(a, 1.0, starts=200)
    assert est.alpha_hat == report.min_l1 / 9
    assert est.alpha_exact and not est.beta_exact
    assert est.beta_hat >= est.alpha_hat


def test_khinchin_p_above_two():
    rng = np.random.default_rng(7)
    a = rng.standard_normal((8, 3))
    est = khinchin_constants(a, 2.5, starts=200)
    assert 0.0 < est.alpha_hat <= est.beta_hat + 1e-12
    assert not est.alpha_exact and not est.beta_exact


def test_khinchin_rejects_p_between_one_and_two():
    a = np.random.default_rng(8).standard_normal((6, 3))
    with pytest.raises(ValidationError):
        khinchin_constants(a, 1.5)


def test_sandwich_audit_passes_on_generic_gaussian():
    rng = np.random.default_rng(9)
    a = rng.standard_normal((9, 6))
    report = sandwich_audit(a, eps=0.01, c_prime=10.0, trials=2000, master_seed=0)
    assert report.middle_ok
    assert report.left_ok and report.right_ok and report.passed
    assert report.left_threshold == pytest.approx(0.01 * 0.5 * 6)
    assert report.min_l1_exact >= report.left_threshold


def test_sandwich_audit_left_failure_is_reported():
    rng = np.random.default_rng(10)
    a = rng.standard_normal((9, 6))
    report = sandwich_audit(a, eps=10.0, c_prime=10.0, trials=500, master_seed=0)
    assert report.middle_ok
    assert not report.left_ok and not report.passed


def test_sandwich_audit_gates():
    with pytest.raises(DimensionError):
        sandwich_audit(np.eye(4), 0.1, 10.0)
    with pytest.raises(ValidationError):
        sandwich_audit(np.random.default_rng(11).standard_normal((5, 3)), -1.0, 10.0)


def test_vertices_to_csv_shape():
    a = np.array([[1.0, 0.0], [0.0, 1.0], [1.0, 1.0]])
    report = section_scan(a)
    text = vertices_to_csv(report)
    lines = text.strip().split("\n")
    assert lines[0] == "support,l1_value,vertex_norm"
    assert len(lines) == 1 + len(report.vertices)
    support, l1v, vnorm = lines[1].split(",")
    assert support == "0;1"
    assert float(l1v) == pytest.approx(math.sqrt(2.0), abs=1e-12)
    assert float(vnorm) == pytest.approx(math.sqrt(0.5), abs=1e-12)
