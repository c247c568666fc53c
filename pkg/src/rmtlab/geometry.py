"""Random sections of the l1 ball and Khinchin-type constants.

For a tall N x n matrix A the section {Ax : x in S^(n-1)} of the l1
sphere has its minimum of |Ax|_1 at an extreme point whose image
support has exactly m = N - n + 1 coordinates.  Enumerating the
binomial(N, m) supports J, solving A_{J'} y = 0 for the complementary
n - 1 rows, and evaluating |A y|_1 therefore computes the exact
minimum (for generic A).  The same vertices give the octahedron
section: vertices v_J = A y_J / |A y_J|_1, diameter 2 max |v_J|_2, and
the Kashin ratio sqrt(N) max |v_J|_2 against the inscribed ball of
radius 1/sqrt(N).

Khinchin constants: with rows X_j of A, the best constants in

    alpha_p <= ((1/N) sum |<y, X_j>|^p)^(1/p) <= beta_p   on S^(n-1)

are exact at p = 2 (singular values over sqrt(N)); at p = 1 the lower
end is exact via the section scan; everything else comes from a
batched multi-start projected gradient on the sphere and is flagged
approximate.
"""

from __future__ import annotations

import math
from dataclasses import dataclass
from itertools import combinations

import numpy as np

from .errors import DegenerateInputError, DimensionError, ResourceError, ValidationError
from .seeding import SeedPath
from .spectra import random_normal_vector, singular_values

_SUBSET_BUDGET = 10 ** 6


@dataclass
class SectionVertex:
    support: tuple[int, ...]     # the m rows where A y is allowed to be nonzero
    v: np.ndarray                # vertex of the section, |v|_1 = 1
    y: np.ndarray                # unit preimage on the sphere
    l1_value: float              # |A y|_1


@dataclass
class SectionReport:
    m: int
    min_l1: float
    argmin_support: tuple[int, ...]
    diameter: float
    kashin_ratio: float
    degenerate_count: int
    vertices: list[SectionVertex]


def _subset_count(n_items: int, k: int) -> int:
    return math.comb(n_items, k)


def section_scan(a, budget: int = _SUBSET_BUDGET, jitter: float = 0.0,
                 jitter_seed: SeedPath | None = None) -> SectionReport:
    """Enumerate all supports of size m = N - n + 1 and their vertices.

    jitter > 0 adds seeded Gaussian noise of that scale to break exact
    degeneracies in structured matrices before scanning.
    """
    mat = np.asarray(a, dtype=float)
    if mat.ndim != 2:
        raise DimensionError("expected a matrix")
    nrows, ncols = mat.shape
    if nrows <= ncols:
        raise DimensionError("need strictly more rows than columns (N > n)")
    if jitter > 0.0:
        rng = (jitter_seed or SeedPath(0, "section_jitter")).rng()
        mat = mat + jitter * rng.standard_normal(mat.shape)
    m = nrows - ncols + 1
    total = _subset_count(nrows, m)
    if total > budget:
        raise ResourceError("support enumeration needs %d subsets, budget is %d" % (total, budget))
    scale = float(np.abs(mat).sum())
    degenerate = 0
    vertices: list[SectionVertex] = []
    for support in combinations(range(nrows), m):
        inside = set(support)
        comp = [i for i in range(nrows) if i not in inside]
        rows = [mat[i] for i in comp]
        try:
            y = random_normal_vector(rows)
        except DegenerateInputError:
            degenerate += 1
            continue
        w = mat @ y
        l1 = float(np.abs(w).sum())
        if l1 <= 1e-12 * max(scale, 1.0):
            degenerate += 1
            continue
        vertices.append(SectionVertex(support, w / l1, y, l1))
    if not vertices:
        raise DegenerateInputError("every support was rank deficient; no vertices")
    values = np.array([v.l1_value for v in vertices])
    best = int(np.argmin(values))
    rmax = max(float(np.linalg.norm(v.v)) for v in vertices)
    return SectionReport(
        m=m,
        min_l1=float(values[best]),
        argmin_support=vertices[best].support,
        diameter=2.0 * rmax,
        kashin_ratio=math.sqrt(nrows) * rmax,
        degenerate_count=degenerate,
        vertices=vertices,
    )


def min_l1_on_sphere(a, budget: int = _SUBSET_BUDGET) -> SectionReport:
    """Exact min of |Ax|_1 over the unit sphere via the vertex scan."""
    return section_scan(a, budget=budget)


def octahedron_section(a, budget: int = _SUBSET_BUDGET, jitter: float = 0.0,
                       jitter_seed: SeedPath | None = None) -> SectionReport:
    """Vertex description of {x : |Ax|_1 = 1} intersected with range(A)."""
    return section_scan(a, budget=budget, jitter=jitter, jitter_seed=jitter_seed)


def _power_objective(r: np.ndarray, p: float) -> np.ndarray:
    return np.abs(r) ** p if p != 1 else np.abs(r)


def projected_extremum(a, p: float, maximize: bool, starts: int = 1000,
                       master_seed: int = 0, label: str = "projected_extremum",
                       iters: int = 150, snap: bool = True) -> tuple[float, np.ndarray]:
    """Multi-start projected (sub)gradient extremum of |Ay|_p^p on the sphere.

    All starts run in lockstep as columns; per-column step sizes grow
    on success and shrink on failure, which is an Armijo-style
    backtracking spread over iterations.  For the p = 1 minimum each
    finished start is snapped to the vertex induced by its n - 1
    smallest residuals, the natural active-set polish.  Returns
    (extreme value of sum |r|^p, argmin/argmax y).
    """
    mat = np.asarray(a, dtype=float)
    if mat.ndim != 2:
        raise DimensionError("expected a matrix")
    nrows, ncols = mat.shape
    if p < 1:
        raise ValidationError("p must be at least 1")
    if starts < 1 or iters < 1:
        raise ValidationError("starts and iters must be positive")
    rng = SeedPath(master_seed, label).rng()
    y = rng.standard_normal((ncols, starts))
    y /= np.linalg.norm(y, axis=0, keepdims=True)
    sgn = 1.0 if maximize else -1.0

    def fvals(cols: np.ndarray) -> np.ndarray:
        return _power_objective(mat @ cols, p).sum(axis=0)

    f = fvals(y)
    step = np.full(starts, 0.2)
    for _ in range(iters):
        r = mat @ y
        if p == 1:
            g = mat.T @ np.sign(r)
        else:
            g = mat.T @ (p * np.abs(r) ** (p - 1.0) * np.sign(r))
        tang = g - y * np.einsum("ij,ij->j", y, g)
        tn = np.linalg.norm(tang, axis=0)
        tn[tn < 1e-15] = 1.0
        cand = y + sgn * step * tang / tn
        cand /= np.linalg.norm(cand, axis=0, keepdims=True)
        fc = fvals(cand)
        better = sgn * (fc - f) > 0
        y[:, better] = cand[:, better]
        f[better] = fc[better]
        step[better] = np.minimum(step[better] * 1.3, 1.0)
        step[~better] = np.maximum(step[~better] * 0.5, 1e-9)
    if snap and p == 1 and not maximize and nrows > ncols:
        r = np.abs(mat @ y)
        for j in range(starts):
            order = np.argsort(r[:, j], kind="stable")
            rows = [mat[i] for i in order[: ncols - 1]]
            try:
                yv = random_normal_vector(rows)
            except DegenerateInputError:
                continue
            fv = float(np.abs(mat @ yv).sum())
            if fv < f[j]:
                f[j] = fv
                y[:, j] = yv
    best = int(np.argmax(f)) if maximize else int(np.argmin(f))
    return float(f[best]), y[:, best].copy()


@dataclass
class KhinchinEstimate:
    p: float
    alpha_hat: float
    beta_hat: float
    alpha_exact: bool
    beta_exact: bool


def khinchin_constants(a, p: float, starts: int = 1000, master_seed: int = 0,
                       iters: int = 150, budget: int = _SUBSET_BUDGET) -> KhinchinEstimate:
    """Empirical Khinchin constants of the row sample in A.

    p = 2 is exact through singular values, p = 1 has an exact lower
    end through the section scan, all other ends are flagged
    approximate.
    """
    mat = np.asarray(a, dtype=float)
    if mat.ndim != 2:
        raise DimensionError("expected a matrix")
    nrows = mat.shape[0]
    root = math.sqrt(nrows)
    if p == 2:
        s = singular_values(mat)
        return KhinchinEstimate(2.0, float(s[-1]) / root, float(s[0]) / root, True, True)
    if p == 1:
        report = min_l1_on_sphere(mat, budget=budget)
        hi, _ = projected_extremum(mat, 1.0, True, starts=starts,
                                   master_seed=master_seed, label="khinchin_p1_max",
                                   iters=iters)
        return KhinchinEstimate(1.0, report.min_l1 / nrows, hi / nrows, True, False)
    if p > 2:
        lo, _ = projected_extremum(mat, p, False, starts=starts,
                                   master_seed=master_seed, label="khinchin_min", iters=iters)
        hi, _ = projected_extremum(mat, p, True, starts=starts,
                                   master_seed=master_seed, label="khinchin_max", iters=iters)
        return KhinchinEstimate(float(p), (lo / nrows) ** (1.0 / p),
                                (hi / nrows) ** (1.0 / p), False, False)
    raise ValidationError("p must be 1, 2, or greater than 2")


@dataclass
class SandwichReport:
    passed: bool
    left_ok: bool
    middle_ok: bool
    right_ok: bool
    min_l1_exact: float
    left_threshold: float
    worst_middle_ratio: float
    right_value: float
    right_threshold: float


def sandwich_audit(a, eps: float, c_prime: float, trials: int = 10_000,
                   master_seed: int = 0, budget: int = _SUBSET_BUDGET) -> SandwichReport:
    """Check eps delta n |x|_2 <= |Ax|_1 <= sqrt(N) |Ax|_2 <= C' n |x|_2.

    The middle inequality is Cauchy-Schwarz and must hold exactly (up
    to 1e-9 relative); it is checked on random unit vectors and at the
    exact l1 minimizer.  The outer inequalities use the exact minimum
    (left) and sqrt(N) s_1 (right).  delta is read off the aspect
    ratio, N = (1 + delta) n.
    """
    mat = np.asarray(a, dtype=float)
    if mat.ndim != 2:
        raise DimensionError("expected a matrix")
    nrows, ncols = mat.shape
    if nrows <= ncols:
        raise DimensionError("need N > n")
    if not (eps > 0) or not (c_prime > 0):
        raise ValidationError("eps and c_prime must be positive")
    delta = nrows / ncols - 1.0
    root = math.sqrt(nrows)
    rng = SeedPath(master_seed, "sandwich_audit").rng()
    x = rng.standard_normal((trials, ncols))
    x /= np.linalg.norm(x, axis=1, keepdims=True)
    ax = x @ mat.T
    l1 = np.abs(ax).sum(axis=1)
    l2 = np.linalg.norm(ax, axis=1)
    worst = float(np.max(l1 - root * l2))
    try:
        report = min_l1_on_sphere(mat, budget=budget)
        min_l1 = report.min_l1
        ymin = None
        for vtx in report.vertices:
            if vtx.support == report.argmin_support:
                ymin = vtx.y
                break
        if ymin is not None:
            wy = mat @ ymin
            worst = max(worst, float(np.abs(wy).sum() - root * np.linalg.norm(wy)))
    except DegenerateInputError:
        min_l1 = 0.0
    scale = max(float(np.abs(mat).max()) * root, 1.0)
    middle_ok = worst <= 1e-9 * scale
    left_threshold = eps * delta * ncols
    left_ok = min_l1 >= left_threshold
    right_value = root * float(singular_values(mat)[0])
    right_threshold = c_prime * ncols
    right_ok = right_value <= right_threshold
    return SandwichReport(
        passed=left_ok and middle_ok and right_ok,
        left_ok=left_ok, middle_ok=middle_ok, right_ok=right_ok,
        min_l1_exact=min_l1, left_threshold=left_threshold,
        worst_middle_ratio=worst, right_value=right_value,
        right_threshold=right_threshold)


def random_l1_lower_envelope(a, trials: int, seed: SeedPath) -> float:
    """min |Ax|_1 over seeded random unit vectors; an upper bound
    certificate for the exact minimum."""
    mat = np.asarray(a, dtype=float)
    rng = seed.rng()
    x = rng.standard_normal((trials, mat.shape[1]))
    x /= np.linalg.norm(x, axis=1, keepdims=True)
    return float(np.abs(x @ mat.T).sum(axis=1).min())


def vertices_to_csv(report: SectionReport) -> str:
    """Rows (support, l1_value, vertex_norm)."""
    lines = ["support,l1_value,vertex_norm"]
    for v in report.vertices:
        lines.append("%s,%s,%s" % (
            ";".join(str(i) for i in v.support),
            repr(float(v.l1_value)),
            repr(float(np.linalg.norm(v.v)))))
    return "\n".join(lines) + "\n"
