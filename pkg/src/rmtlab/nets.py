"""Epsilon nets on spheres and lattice nets for level sets.

A maximal eps-separated subset of the sphere is an eps-net, so the
builder keeps greedily inserting random sphere points that are at
least eps away from everything accepted so far, and stops after a long
stall (many consecutive rejections).  Separation is exact by
construction; covering is certified statistically by the audit.

The volumetric bound ceil((3/eps)^n) caps the cardinality of any
eps-separated set, and two mesh-1/2 nets turn a max of bilinear forms
into an operator norm certificate |A| <= 4 max |<Ax, y>|.

Lattice nets collect p/|p| over nonzero integer points p in the ball
of radius 3D; they cover the unit vectors with essential LCD near D to
accuracy 4 alpha / D, with cardinality independent of alpha.
"""

from __future__ import annotations

from dataclasses import dataclass
from fractions import Fraction
from itertools import product
import math

import numpy as np

from .errors import DimensionError, ResourceError, ValidationError
from .seeding import SeedPath

_LATTICE_BUDGET = 10 ** 7


@dataclass
class SphereNet:
    dimension: int          # ambient n; points live on S^(n-1)
    mesh: float             # separation / covering parameter eps
    points: np.ndarray      # k x n, unit rows, pairwise distances >= mesh

    def __len__(self) -> int:
        return int(self.points.shape[0])


@dataclass
class LatticeNet:
    dimension: int
    level: float            # the D in "integer ball of radius 3D"
    alpha: float            # recorded accuracy parameter; not used to build
    points: np.ndarray      # k x n unit rows p/|p|
    integer_points: np.ndarray  # k x n int64 rows p, lexicographic order


def build_sphere_net(n: int, eps: float, seed: SeedPath,
                     stall_base: int = 1000, stall_per_point: int = 10,
                     max_points: int | None = None) -> SphereNet:
    """Greedy maximal eps-separated set from a seeded uniform stream.

    Stops once stall_per_point * |net| + stall_base consecutive
    candidates were all rejected.
    """
    if not isinstance(n, int) or n < 1:
        raise DimensionError("n must be a positive integer")
    if not (eps > 0) or not math.isfinite(eps):
        raise ValidationError("eps must be a positive finite number")
    rng = seed.rng()
    pts: list[np.ndarray] = []
    arr = np.empty((0, n))
    streak = 0
    while True:
        c = rng.standard_normal(n)
        nc = np.linalg.norm(c)
        if nc < 1e-12:
            continue
        c = c / nc
        if arr.shape[0] == 0 or float(np.min(np.linalg.norm(arr - c, axis=1))) >= eps:
            pts.append(c)
            arr = np.vstack([arr, c[None, :]])
            streak = 0
            if max_points is not None and len(pts) >= max_points:
                break
        else:
            streak += 1
            if streak >= stall_per_point * len(pts) + stall_base:
                break
    return SphereNet(dimension=n, mesh=float(eps), points=arr)


def covering_audit(net: SphereNet, trials: int, seed: SeedPath,
                   slack: float = 1e-12) -> tuple[float, float]:
    """(fraction of random sphere points within mesh of the net,
    largest observed gap).  A perfect net reports fraction 1.0."""
    if trials < 1:
        raise ValidationError("trials must be positive")
    rng = seed.rng()
    x = rng.standard_normal((trials, net.dimension))
    x /= np.linalg.norm(x, axis=1, keepdims=True)
    # |x - p|^2 = 2 - 2 <x, p> on the sphere
    ip = x @ net.points.T
    d = np.sqrt(np.maximum(2.0 - 2.0 * ip.max(axis=1), 0.0))
    covered = d <= net.mesh + slack
    return float(np.mean(covered)), float(d.max())


def volumetric_cap(n: int, eps: float) -> int:
    """ceil((3/eps)^n), an upper bound for any eps-separated set on S^(n-1)."""
    if not isinstance(n, int) or n < 1:
        raise DimensionError("n must be a positive integer")
    if not (0 < eps < 1):
        raise ValidationError("eps must lie in (0, 1)")
    ratio = Fraction(3) / Fraction(eps)  # exact binary fraction, no overflow
    power = ratio ** n
    return -((-power.numerator) // power.denominator)


def certify_operator_norm(m, net_domain: SphereNet, net_codomain: SphereNet) -> float:
    """Upper bound 4 max |<Ax, y>| over the two nets; valid for mesh <= 1/2."""
    a = np.asarray(m, dtype=float)
    if a.ndim != 2:
        raise DimensionError("expected a matrix")
    rows, cols = a.shape
    if net_domain.dimension != cols:
        raise DimensionError("domain net lives in R^%d but the matrix has %d columns"
                             % (net_domain.dimension, cols))
    if net_codomain.dimension != rows:
        raise DimensionError("codomain net lives in R^%d but the matrix has %d rows"
                             % (net_codomain.dimension, rows))
    if net_domain.mesh > 0.5 + 1e-12 or net_codomain.mesh > 0.5 + 1e-12:
        raise ValidationError("norm certification needs nets of mesh at most 1/2")
    vals = net_codomain.points @ (a @ net_domain.points.T)
    return 4.0 * float(np.max(np.abs(vals)))


def lattice_budget(n: int, level: float) -> int:
    """Size of the integer box enumerated for a level-D lattice net."""
    r = int(math.floor(3.0 * level))
    return (2 * r + 1) ** n


def build_lattice_net(n: int, level: float, alpha: float) -> LatticeNet:
    """All p/|p| for nonzero integer p with |p| <= 3 * level.

    The construction ignores alpha entirely (it only calibrates the
    covering accuracy 4 alpha / level), so cardinality cannot depend
    on it.  Enumeration is lexicographic for reproducibility.
    """
    if not isinstance(n, int) or n < 1:
        raise DimensionError("n must be a positive integer")
    if n > 4:
        raise ValidationError("lattice nets are desk scale, n <= 4")
    if not (level > 0) or not (alpha > 0):
        raise ValidationError("level and alpha must be positive")
    if 4.0 * alpha / level > 1.0 + 1e-12:
        raise ValidationError("need 4 * alpha / level <= 1 for the covering guarantee")
    box = lattice_budget(n, level)
    if box > _LATTICE_BUDGET:
        raise ResourceError("integer box has %d points, budget is %d" % (box, _LATTICE_BUDGET))
    r = int(math.floor(3.0 * level))
    rad2 = (3.0 * level) ** 2
    keep = []
    for p in product(range(-r, r + 1), repeat=n):
        s = 0
        for v in p:
            s += v * v
        if 0 < s <= rad2:
            keep.append(p)
    ip = np.array(keep, dtype=np.int64).reshape(len(keep), n)
    norms = np.sqrt((ip.astype(float) ** 2).sum(axis=1))
    pts = ip.astype(float) / norms[:, None]
    return LatticeNet(dimension=n, level=float(level), alpha=float(alpha),
                      points=pts, integer_points=ip)


def net_to_csv(net: SphereNet | LatticeNet) -> str:
    """One unit vector per row, deterministic float formatting."""
    lines = []
    for row in net.points:
        lines.append(",".join(repr(float(v)) for v in row))
    return "\n".join(lines) + "\n"
