import itertools
import math

import numpy as np
import pytest

from rmtlab.errors import DimensionError, ResourceError, ValidationError
from rmtlab.nets import (LatticeNet, SphereNet, build_lattice_net, build_sphere_net,
                         certify_operator_norm, covering_audit, lattice_budget,
                         net_to_csv, volumetric_cap)
from rmtlab.seeding import SeedPath
from rmtlab.spectra import operator_norm


def test_sphere_net_separation_exact():
    net = build_sphere_net(3, 0.4, SeedPath(0, "net"))
    pts = net.points
    assert np.allclose(np.linalg.norm(pts, axis=1), 1.0, atol=1e-12)
    for i in range(len(net)):
        d = np.linalg.norm(pts - pts[i], axis=1)
        d[i] = np.inf
        assert d.min() >= net.mesh - 1e-12


def test_sphere_net_covers_and_respects_cap():
    net = build_sphere_net(3, 0.5, SeedPath(1, "net"))
    frac, gap = covering_audit(net, 4000, SeedPath(2, "probe"))
    assert frac >= 0.999
    assert gap <= 1.2 * net.mesh
    assert len(net) <= volumetric_cap(3, 0.5)


def test_sphere_net_determinism():
    a = build_sphere_net(4, 0.6, SeedPath(7, "net"))
    b = build_sphere_net(4, 0.6, SeedPath(7, "net"))
    assert np.array_equal(a.points, b.points)


def test_sphere_net_max_points():
    net = build_sphere_net(5, 0.3, SeedPath(3, "net"), max_points=10)
    assert len(net) == 10


def test_sphere_net_validation():
    with pytest.raises(DimensionError):
        build_sphere_net(0, 0.5, SeedPath(0, "x"))
    with pytest.raises(ValidationError):
        build_sphere_net(3, -0.1, SeedPath(0, "x"))


def test_volumetric_cap_exact_binary_eps():
    assert volumetric_cap(1, 0.5) == 6
    assert volumetric_cap(2, 0.5) == 36
    assert volumetric_cap(3, 0.75) == 64
    assert volumetric_cap(10, 0.5) == 6 ** 10
    # monotone: finer mesh, bigger cap; higher dimension, bigger cap
    assert volumetric_cap(3, 0.25) > volumetric_cap(3, 0.5)
    assert volumetric_cap(4, 0.5) > volumetric_cap(3, 0.5)
    with pytest.raises(ValidationError):
        volumetric_cap(3, 1.5)


def test_certify_operator_norm_brackets_truth():
    rng = np.random.default_rng(5)
    m = rng.standard_normal((3, 3))
    dom = build_sphere_net(3, 0.5, SeedPath(10, "dom"))
    cod = build_sphere_net(3, 0.5, SeedPath(11, "cod"))
    bound = certify_operator_norm(m, dom, cod)
    true = operator_norm(m)
    assert true <= bound <= 4.0 * true + 1e-9


def test_certify_operator_norm_gates():
    m = np.eye(3)
    coarse = build_sphere_net(3, 0.8, SeedPath(12, "c"))
    fine = build_sphere_net(3, 0.5, SeedPath(13, "f"))
    with pytest.raises(ValidationError):
        certify_operator_norm(m, coarse, fine)
    with pytest.raises(DimensionError):
        certify_operator_norm(np.ones((2, 3)), fine, fine)


def test_lattice_budget_formula():
    assert lattice_budget(2, 1.0) == 49           # box [-3, 3]^2
    assert lattice_budget(3, 2.0) == 13 ** 3


def test_lattice_net_small_case_exact():
    net = build_lattice_net(2, 1.0, 0.25)
    # all nonzero integer points with norm <= 3: box minus origin, minus corners
    pts = [p for p in itertools.product(range(-3, 4), repeat=2)
           if 0 < p[0] ** 2 + p[1] ** 2 <= 9]
    assert net.integer_points.shape == (len(pts), 2)
    assert [tuple(r) for r in net.integer_points] == pts  # lexicographic
    assert np.allclose(np.linalg.norm(net.points, axis=1), 1.0, atol=1e-12)
    assert net.alpha == 0.25


def test_lattice_net_alpha_does_not_change_points():
    a = build_lattice_net(2, 1.0, 0.25)
    b = build_lattice_net(2, 1.0, 0.1)
    assert np.array_equal(a.integer_points, b.integer_points)


def test_lattice_net_gates():
    with pytest.raises(ValidationError):
        build_lattice_net(5, 1.0, 0.1)            # dimension cap
    with pytest.raises(ValidationError):
        build_lattice_net(2, 1.0, 0.5)            # 4 alpha / level > 1
    with pytest.raises(ResourceError):
        build_lattice_net(4, 20.0, 1.0)           # box too large


def test_net_to_csv_roundtrip():
    net = SphereNet(2, 0.5, np.array([[1.0, 0.0], [0.0, 1.0]]))
    text = net_to_csv(net)
    rows = [line.split(",") for line in text.strip().splitlines()]
    back = np.array([[float(v) for v in r] for r in rows])
    assert np.array_equal(back, net.points)
    assert net_to_csv(build_lattice_net(2, 0.5, 0.125)).count("\n") >= 1


def test_covering_audit_detects_holes():
    # a single point is a terrible 0.3-net on the circle
    net = SphereNet(2, 0.3, np.array([[1.0, 0.0]]))
    frac, gap = covering_audit(net, 2000, SeedPath(20, "probe"))
    assert frac < 0.5
    assert gap > 1.0
