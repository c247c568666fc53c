"""Arithmetic structure of weight vectors: LCD and compressibility.

The least common denominator of a vector a is the smallest theta > 0
with theta * a integral; for rational input it is computed exactly.
The essential LCD relaxes integrality to

    dist(theta a, Z^n) < min(gamma |theta a|, alpha),

and its infimum over theta in (0, theta_max] is located by a certified
branch and bound search.  The map theta -> dist(theta a, Z^n) is
1-Lipschitz in theta |a|, so on an interval [lo, hi] with midpoint t
the distance is at least d(t) - |a| (hi - lo)/2 everywhere; whenever
that floor clears the largest possible right hand side minus the slack
delta_s, the interval provably contains no theta satisfying even the
slack-relaxed condition and is pruned.  Surviving intervals are split
until either a true hit is sampled or the interval width falls below
delta_s / (2 |a|), at which point a non-hit midpoint certifies the
interval at slack delta_s.  A hit is refined by bisection to the left
boundary of its qualifying component.  The certificate matches a
uniform grid of step delta_s / (2 |a|) but finds hit windows far
narrower than any affordable grid step.

Compressibility: a unit vector is compressible when it sits within rho
of the floor(delta n)-sparse vectors, i.e. when the norm of its
n - floor(delta n) smallest coordinates is at most rho.  Incompressible
vectors carry a spread set of at least nu1 n coordinates with
magnitudes between nu2/sqrt(n) and nu3/sqrt(n), which in turn pins
their essential LCD above lambda sqrt(n).
"""

from __future__ import annotations

import math
from dataclasses import dataclass
from fractions import Fraction

import numpy as np

from .ensembles import EnsembleSpec, sample_matrix
from .errors import (CalibrationError, DegenerateInputError, ResourceError,
                     ValidationError)
from .seeding import SeedPath
from .spectra import random_normal_vector


@dataclass(frozen=True)
class LcdQuery:
    """Parameters of one essential LCD search."""

    gamma: float                 # cone aperture, 0 < gamma < 1
    alpha: float                 # absolute distance cap, > 0
    theta_max: float             # search range (0, theta_max]
    slack: float | None = None   # certification slack delta_s; default alpha/100

    def resolved_slack(self) -> float:
        return self.alpha / 100.0 if self.slack is None else self.slack

    def validate(self) -> None:
        if not (0.0 < self.gamma < 1.0):
            raise ValidationError("gamma must lie in (0, 1)")
        if not (self.alpha > 0.0):
            raise ValidationError("alpha must be positive")
        if not (self.theta_max > 0.0) or not math.isfinite(self.theta_max):
            raise ValidationError("theta_max must be positive and finite")
        if not (self.resolved_slack() > 0.0):
            raise ValidationError("slack must be positive")


@dataclass
class LcdResult:
    outcome: str                 # "found" or "exceeds"
    theta: float | None          # smallest certified hit when found
    distance: float | None       # dist(theta a, Z^n) at the hit
    certified: bool
    evals: int                   # distance evaluations spent
    theta_max: float


@dataclass
class CompressibilityReport:
    delta: float
    rho: float
    distance_to_sparse: float
    compressible: bool
    spread_indices: np.ndarray | None   # only for incompressible input
    nu: tuple[float, float, float] | None


def exact_lcd(entries) -> Fraction | None:
    """Smallest theta > 0 making theta * a integral, for rational a.

    Entries may be ints, Fractions, strings like "3/8", or floats
    (floats convert exactly as binary rationals).  Returns None for
    the zero vector.
    """
    fracs = []
    for e in entries:
        try:
            fracs.append(Fraction(e))
        except (TypeError, ValueError) as exc:
            raise ValidationError("entry %r is not rational" % (e,)) from exc
    if not fracs:
        raise ValidationError("empty vector")
    if all(f == 0 for f in fracs):
        return None
    lcm = 1
    for f in fracs:
        lcm = lcm * f.denominator // math.gcd(lcm, f.denominator)
    nums = [abs(int(f * lcm)) for f in fracs]
    g = 0
    for v in nums:
        g = math.gcd(g, v)
    return Fraction(lcm, g)


def lattice_distance(a: np.ndarray, thetas: np.ndarray) -> np.ndarray:
    """dist(theta a, Z^n) for a batch of theta values."""
    z = np.outer(np.atleast_1d(thetas), a)
    z -= np.rint(z)
    return np.sqrt(np.einsum("ij,ij->i", z, z))


def check_lcd_witness(a, theta: float, gamma: float, alpha: float):
    """Exact recheck of the hit condition at theta.

    Returns (ok, distance, nearest integer point).
    """
    av = np.asarray(a, dtype=float).ravel()
    z = theta * av
    p = np.rint(z)
    dist = float(np.linalg.norm(z - p))
    rhs = min(gamma * float(np.linalg.norm(z)), alpha)
    return dist < rhs, dist, p.astype(np.int64)


def essential_lcd(a, q: LcdQuery, eval_budget: int = 20_000_000) -> LcdResult:
    """Certified search for the smallest theta in (0, theta_max] with
    dist(theta a, Z^n) < min(gamma |theta a|, alpha).

    Outcome "found": theta is within 1e-10 of the left edge of the
    qualifying region it lies in, and the witness recheck passes
    exactly.  Outcome "exceeds": no theta in range satisfies even the
    condition relaxed by the slack delta_s (certified via the
    Lipschitz bound above).
    """
    av = np.asarray(a, dtype=float).ravel()
    if not np.all(np.isfinite(av)):
        raise ValidationError("non-finite entries")
    na = float(np.linalg.norm(av))
    if na <= 0.0:
        raise ValidationError("essential LCD needs a nonzero vector")
    q.validate()
    slack = q.resolved_slack()
    floor_w = slack / (2.0 * na)
    gamma_na = q.gamma * na

    def is_hit(t: float) -> bool:
        d = float(lattice_distance(av, np.array([t]))[0])
        return d < min(gamma_na * t, q.alpha)

    lo = np.array([0.0])
    hi = np.array([float(q.theta_max)])
    evals = 0
    best_hit: float | None = None
    best_lo = 0.0  # left endpoint of the interval the best hit was sampled in
    while lo.size:
        mid = 0.5 * (lo + hi)
        w = hi - lo
        evals += mid.size
        if evals > eval_budget:
            raise ResourceError(
                "essential LCD search exceeded %d distance evaluations "
                "(theta_max %.3g, slack %.3g)" % (eval_budget, q.theta_max, slack))
        d = lattice_distance(av, mid)
        rhs_mid = np.minimum(gamma_na * mid, q.alpha)
        rhs_hi = np.minimum(gamma_na * hi, q.alpha)
        hit = d < rhs_mid
        if hit.any():
            k = int(np.argmin(np.where(hit, mid, np.inf)))
            cand = float(mid[k])
            if best_hit is None or cand < best_hit:
                best_hit, best_lo = cand, float(lo[k])
        prune = (d - 0.5 * na * w) >= (rhs_hi - slack)
        tiny = w <= floor_w
        keep = ~(hit | prune | tiny)
        # a hit interval can still hide an earlier component in its left half
        children_lo = [lo[keep], mid[keep], lo[hit]]
        children_hi = [mid[keep], hi[keep], mid[hit]]
        lo = np.concatenate(children_lo)
        hi = np.concatenate(children_hi)
        if best_hit is not None:
            mask = lo < best_hit
            lo, hi = lo[mask], hi[mask]
        live = hi - lo > 1e-18
        lo, hi = lo[live], hi[live]
    if best_hit is None:
        return LcdResult("exceeds", None, None, True, evals, float(q.theta_max))
    # refine to the left boundary of the qualifying component
    t_hit = best_hit
    step = max(floor_w, 1e-12 * t_hit)
    t_lo = max(best_lo, t_hit - step)
    while t_lo > 0.0 and is_hit(t_lo):
        evals += 1
        step *= 2.0
        t_lo = t_hit - step
        if t_lo < 0.0:
            t_lo = 0.0
    while t_hit - t_lo > 1e-10:
        m = 0.5 * (t_lo + t_hit)
        evals += 1
        if is_hit(m):
            t_hit = m
        else:
            t_lo = m
    ok, dist, _ = check_lcd_witness(av, t_hit, q.gamma, q.alpha)
    return LcdResult("found", float(t_hit), dist, bool(ok), evals, float(q.theta_max))


def scan_certificate(a, q: LcdQuery, refine_factor: int = 10,
                     chunk: int = 1 << 18, step_budget: int = 10 ** 9) -> bool:
    """Uniform grid check of the exceeds certificate at step h/refine_factor.

    Returns True when no grid point violates the slack-relaxed
    condition dist < min(gamma |theta a|, alpha) - slack.  This is the
    plain grid scan the branch and bound replaces, kept as an
    independent soundness oracle.
    """
    av = np.asarray(a, dtype=float).ravel()
    na = float(np.linalg.norm(av))
    q.validate()
    slack = q.resolved_slack()
    h = slack / (2.0 * na) / float(refine_factor)
    steps = int(math.ceil(q.theta_max / h))
    if steps > step_budget:
        raise ResourceError("grid scan needs %d steps, budget is %d" % (steps, step_budget))
    gamma_na = q.gamma * na
    for start in range(1, steps + 1, chunk):
        idx = np.arange(start, min(start + chunk, steps + 1), dtype=float)
        ts = idx * h
        d = lattice_distance(av, ts)
        rhs = np.minimum(gamma_na * ts, q.alpha) - slack
        if np.any(d < rhs):
            return False
    return True


def spread_constants(delta: float, rho: float) -> tuple[float, float, float]:
    """(nu1, nu2, nu3) = (delta rho^2 / 4, rho / sqrt(2), sqrt(2 / delta))."""
    if not (0.0 < delta < 1.0) or not (0.0 < rho < 1.0):
        raise ValidationError("delta and rho must lie in (0, 1)")
    return delta * rho * rho / 4.0, rho / math.sqrt(2.0), math.sqrt(2.0 / delta)


def classify(x, delta: float, rho: float) -> CompressibilityReport:
    """Compressible or incompressible at parameters (delta, rho).

    The distance from a unit vector to the floor(delta n)-sparse
    vectors is the norm of its n - floor(delta n) smallest magnitude
    coordinates.  Incompressible reports carry the spread set.
    """
    xv = np.asarray(x, dtype=float).ravel()
    n = xv.size
    if not (0.0 < delta < 1.0) or not (0.0 < rho < 1.0):
        raise ValidationError("delta and rho must lie in (0, 1)")
    k = int(math.floor(delta * n))
    if k < 1:
        raise ValidationError("floor(delta n) must be at least 1 (n=%d, delta=%g)" % (n, delta))
    if abs(float(np.linalg.norm(xv)) - 1.0) > 1e-8:
        raise ValidationError("classification is defined for unit vectors")
    mags = np.sort(np.abs(xv))
    dist = float(np.linalg.norm(mags[: n - k]))
    compressible = dist <= rho
    if compressible:
        return CompressibilityReport(delta, rho, dist, True, None, None)
    idx, nu = spread_set(xv, delta, rho, _dist=dist)
    return CompressibilityReport(delta, rho, dist, False, idx, nu)


def spread_set(x, delta: float, rho: float, _dist: float | None = None):
    """Indices k with nu2/sqrt(n) <= |x_k| <= nu3/sqrt(n), for
    incompressible unit x.  Guarantees at least nu1 n of them."""
    xv = np.asarray(x, dtype=float).ravel()
    n = xv.size
    nu1, nu2, nu3 = spread_constants(delta, rho)
    if _dist is None:
        k = int(math.floor(delta * n))
        if k < 1:
            raise ValidationError("floor(delta n) must be at least 1")
        mags = np.sort(np.abs(xv))
        _dist = float(np.linalg.norm(mags[: n - k]))
    if _dist <= rho:
        raise ValidationError("spread sets are defined for incompressible vectors")
    root = math.sqrt(n)
    mags = np.abs(xv)
    idx = np.nonzero((mags >= nu2 / root) & (mags <= nu3 / root))[0]
    if idx.size < nu1 * n:
        raise CalibrationError(
            "spread set has %d elements, below nu1 n = %.3f" % (idx.size, nu1 * n))
    return idx, (nu1, nu2, nu3)


def incompressible_lcd_floor(delta: float, rho: float, gamma_check: float) -> float:
    """Largest lambda with lambda (nu3 + 2 gamma / nu1) < 1.

    Every incompressible unit vector then has essential LCD at least
    lambda sqrt(n) for any cone aperture gamma <= gamma_check.
    Requires gamma_check < nu2 sqrt(nu1 / 2).
    """
    nu1, nu2, nu3 = spread_constants(delta, rho)
    gate = nu2 * math.sqrt(nu1 / 2.0)
    if not (0.0 < gamma_check < gate):
        raise ValidationError(
            "gamma_check must lie in (0, %.6g) for delta=%g, rho=%g" % (gate, delta, rho))
    return 1.0 / (nu3 + 2.0 * gamma_check / nu1)


@dataclass
class KernelLcdSummary:
    n: int
    trials: int
    degenerate: int
    exceed_fraction: float
    found: list[float]
    quantiles: tuple[float, float, float] | None   # 10/50/90 percent of found values


def kernel_lcd_experiment(kind: str, n: int, trials: int, q: LcdQuery,
                          master_seed: int, label: str = "kernel_lcd") -> KernelLcdSummary:
    """Essential LCD of the random normal to n-1 iid sample vectors.

    Per trial: draw an n x (n-1) matrix with iid entries of the given
    kind, take the unit kernel vector of its columns, and run the LCD
    search.  Rank deficient draws are counted and skipped.
    """
    if n > 64:
        raise ResourceError("kernel LCD experiments are capped at n = 64")
    if n < 2:
        raise ValidationError("need n >= 2")
    spec = EnsembleSpec(kind, rows=n, cols=n - 1)
    degenerate = 0
    exceeds = 0
    found: list[float] = []
    effective = 0
    for t in range(trials):
        m = sample_matrix(spec, SeedPath(master_seed, label, t))
        try:
            z = random_normal_vector([m[:, j] for j in range(n - 1)])
        except DegenerateInputError:
            degenerate += 1
            continue
        effective += 1
        res = essential_lcd(z, q)
        if res.outcome == "exceeds":
            exceeds += 1
        else:
            found.append(res.theta)
    frac = exceeds / effective if effective else float("nan")
    quants = None
    if found:
        arr = np.sort(np.array(found))
        quants = tuple(float(np.quantile(arr, p)) for p in (0.1, 0.5, 0.9))
    return KernelLcdSummary(n=n, trials=trials, degenerate=degenerate,
                            exceed_fraction=frac, found=found, quantiles=quants)


def lcd_results_to_csv(results) -> str:
    """Rows (outcome, theta, distance, certified, theta_max)."""
    lines = ["outcome,theta,distance,certified,theta_max"]
    for r in results:
        lines.append("%s,%s,%s,%s,%s" % (
            r.outcome,
            "" if r.theta is None else repr(float(r.theta)),
            "" if r.distance is None else repr(float(r.distance)),
            int(r.certified),
            repr(float(r.theta_max))))
    return "\n".join(lines) + "\n"


def reports_to_csv(reports) -> str:
    """Rows (delta, rho, distance_to_sparse, compressible, spread_size)."""
    lines = ["delta,rho,distance_to_sparse,compressible,spread_size"]
    for r in reports:
        size = "" if r.spread_indices is None else str(int(r.spread_indices.size))
        lines.append("%s,%s,%s,%d,%s" % (
            repr(float(r.delta)), repr(float(r.rho)),
            repr(float(r.distance_to_sparse)), int(r.compressible), size))
    return "\n".join(lines) + "\n"
