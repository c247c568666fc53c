"""Levy concentration of weighted sums, exactly and by bound.

For a Rademacher sum S = sum a_k xi_k the concentration function
L(S, eps) = sup_v P(|S - v| <= eps) is computed exactly: enumerate all
2^n signed sums, sort, and slide a closed window of width 2 eps whose
left edge visits every data point (the sup is attained there).  Window
membership uses an absolute tolerance of 1e-12 |a|_1 so that float
noise in the enumeration cannot split an atom.

The Esseen bound integrates the characteristic function: for unit
weight vectors

    L(S, eps) <= C_E * integral_{-2}^{2} prod_k |cos(a_k t / eps)| dt.

C_E comes from smoothing the indicator of [-1, 1] by the triangle
kernel psi = chi * chi with Fourier transform (2 sin t / t)^2, which
is at least 4 sin^2(1) on [-1, 1]; carrying the 1/(2 pi) inversion
factor through gives C_E = 1 / (2 sin^2 1) ~ 0.7061.  (Dropping the
inversion factor would give 1/(4 pi sin^2 1), which already fails on
a single-coordinate vector, so the constant here is the honest one.)

The small ball bound C eps + C exp(-c alpha^2) applies whenever
eps >= (4/pi) / LCD_alpha(a); the precondition is checked by running
the essential LCD search up to exactly that threshold.
"""

from __future__ import annotations

import math
from dataclasses import dataclass

import numpy as np
from scipy import integrate

from .ensembles import EnsembleSpec, sample_matrix
from .errors import ResourceError, ValidationError
from .seeding import SeedPath
from .structure import LcdQuery, essential_lcd

ESSEEN_CONSTANT = 1.0 / (2.0 * math.sin(1.0) ** 2)
SBP_C = 10.0
SBP_SMALL_C = 0.01
TENSORIZATION_C = 30.0

_ENUM_LIMIT = 24


@dataclass
class ConcentrationResult:
    method: str
    epsilon: float
    value: float
    witness_v: float | None = None
    trials: int | None = None
    ci: tuple[float, float] | None = None


def enumerate_signed_sums(a) -> np.ndarray:
    """All 2^n values of sum +- a_k, sorted ascending."""
    av = np.asarray(a, dtype=float).ravel()
    n = av.size
    if n == 0:
        raise ValidationError("empty weight vector")
    if n > _ENUM_LIMIT:
        raise ResourceError("exact enumeration is capped at n = %d (2^n terms); got n = %d"
                            % (_ENUM_LIMIT, n))
    if not np.all(np.isfinite(av)):
        raise ValidationError("non-finite weights")
    sums = np.zeros(1)
    for w in av:
        sums = np.concatenate([sums - w, sums + w])
    sums.sort(kind="stable")
    return sums


def _window_sup(sums_sorted: np.ndarray, eps: float, tol: float) -> tuple[int, float]:
    """Best closed window of width 2 eps with left edge at a data point.

    Returns (count, center v).  Ties resolve to the leftmost window.
    """
    width = 2.0 * eps + tol
    hi = np.searchsorted(sums_sorted, sums_sorted + width, side="right")
    counts = hi - np.arange(sums_sorted.size)
    i = int(np.argmax(counts))
    return int(counts[i]), float(sums_sorted[i] + eps)


def levy_exact_rademacher(a, eps: float) -> ConcentrationResult:
    """Exact L(S, eps) for S = sum a_k xi_k with Rademacher signs."""
    if eps < 0:
        raise ValidationError("eps must be nonnegative")
    sums = enumerate_signed_sums(a)
    tol = 1e-12 * float(np.abs(np.asarray(a, dtype=float)).sum())
    count, v = _window_sup(sums, eps, tol)
    return ConcentrationResult("exact", float(eps), count / sums.size, witness_v=v)


def levy_monte_carlo(kind: str, a, eps: float, trials: int, seed: SeedPath,
                     confidence: float = 0.95) -> ConcentrationResult:
    """Empirical sup over windows anchored at sampled sums, with a
    Wilson interval on the best window's count.  Upward consistent for
    the true sup."""
    from .harness import wilson_interval  # local import to avoid a cycle
    av = np.asarray(a, dtype=float).ravel()
    if eps < 0:
        raise ValidationError("eps must be nonnegative")
    if trials < 1:
        raise ValidationError("trials must be positive")
    spec = EnsembleSpec(kind, rows=trials, cols=av.size)
    draws = sample_matrix(spec, seed)
    sums = np.sort(draws @ av, kind="stable")
    tol = 1e-12 * float(np.abs(av).sum())
    count, v = _window_sup(sums, eps, tol)
    lo, hi = wilson_interval(count, trials, confidence)
    return ConcentrationResult("monte_carlo", float(eps), count / trials,
                               witness_v=v, trials=trials, ci=(lo, hi))


def esseen_bound(a, eps: float, quad_tol: float = 1e-10) -> ConcentrationResult:
    """Characteristic function bound on L(S, eps) for Rademacher signs."""
    av = np.asarray(a, dtype=float).ravel()
    if not (eps > 0):
        raise ValidationError("eps must be positive")
    if not np.all(np.isfinite(av)):
        raise ValidationError("non-finite weights")
    scaled = av / eps

    def integrand(t: float) -> float:
        return float(np.prod(np.abs(np.cos(scaled * t))))

    integral, _ = integrate.quad(integrand, -2.0, 2.0, epsabs=quad_tol, limit=800)
    return ConcentrationResult("esseen_bound", float(eps), ESSEEN_CONSTANT * integral)


def sbp_bound(a, alpha: float, gamma: float, eps: float,
              c_big: float = SBP_C, c_small: float = SBP_SMALL_C,
              slack: float | None = None) -> ConcentrationResult:
    """Small ball bound C eps + C exp(-c alpha^2), valid for
    eps >= (4/pi) / LCD_alpha(a).  The precondition is enforced by an
    essential LCD search up to (4/pi)/eps; a hit strictly below that
    threshold is a violation and raises with the offending theta."""
    av = np.asarray(a, dtype=float).ravel()
    if not (eps > 0):
        raise ValidationError("eps must be positive")
    needed = (4.0 / math.pi) / eps
    res = essential_lcd(av, LcdQuery(gamma=gamma, alpha=alpha, theta_max=needed, slack=slack))
    if res.outcome == "found" and res.theta < needed * (1.0 - 1e-9):
        raise ValidationError(
            "precondition eps >= (4/pi)/LCD fails: essential LCD is %.6g but "
            "eps = %.6g needs at least %.6g" % (res.theta, eps, needed))
    value = c_big * eps + c_big * math.exp(-c_small * alpha * alpha)
    return ConcentrationResult("sbp_bound", float(eps), float(value))


def paley_zygmund(second_moment: float, fourth_moment: float, lam: float) -> float:
    """Lower bound (ES^2 - lam^2)^2 / ES^4 for P(|S| > lam)."""
    if not (second_moment > 0) or not (fourth_moment > 0):
        raise ValidationError("moments must be positive")
    if not (0 < lam < math.sqrt(second_moment)):
        raise ValidationError("need 0 < lam < sqrt(ES^2)")
    return (second_moment - lam * lam) ** 2 / fourth_moment


def rademacher_moments(a) -> tuple[float, float]:
    """Exact (ES^2, ES^4) for a Rademacher sum: ES^2 = |a|^2 and
    ES^4 = 3 |a|^4 - 2 sum a_k^4."""
    av = np.asarray(a, dtype=float).ravel()
    s2 = float(av @ av)
    s4 = 3.0 * s2 * s2 - 2.0 * float(np.sum(av ** 4))
    return s2, s4


@dataclass
class TensorizationAudit:
    passed: bool
    hypothesis_ok: bool
    rows: list[tuple]   # (eps, lhs, ci_lo, ci_hi, rhs, hyp_prob, hyp_bound)
    message: str = ""


def tensorization_audit(per_coordinate: tuple[float, float], m: int, kind: str, a,
                        trials: int, seed: SeedPath, c_factor: float = TENSORIZATION_C,
                        grid=None, confidence: float = 0.95,
                        hyp_trials: int = 100_000) -> TensorizationAudit:
    """Audit P(sum_{k<=m} zeta_k^2 < eps^2 m) <= (C K eps)^m.

    zeta is the weighted sum of iid entries of the given kind with
    weights a.  per_coordinate = (K, eps0) asserts the one-dimensional
    hypothesis P(|zeta| < eps) <= K eps for eps >= eps0, which is
    verified first (exactly for rademacher, in closed form for
    gaussian with unit weights, by Monte Carlo otherwise); a violation
    aborts the audit.
    """
    from .harness import wilson_interval
    from scipy.stats import norm as _norm
    K, eps0 = per_coordinate
    if K <= 0 or eps0 < 0:
        raise ValidationError("need K > 0 and eps0 >= 0")
    if m < 1:
        raise ValidationError("m must be a positive integer")
    av = np.asarray(a, dtype=float).ravel()
    na = float(np.linalg.norm(av))
    if grid is None:
        grid = np.linspace(max(eps0, 0.05), 1.0, 5)
    grid = [float(e) for e in grid if e >= eps0 and e > 0]
    if not grid:
        raise ValidationError("empty eps grid above eps0")

    def hyp_prob(eps: float) -> tuple[float, str]:
        if kind == "rademacher":
            sums = enumerate_signed_sums(av)
            lo = np.searchsorted(sums, -eps, side="right")
            hi = np.searchsorted(sums, eps, side="left")
            return (hi - lo) / sums.size, "exact"
        if kind == "gaussian":
            return 2.0 * float(_norm.cdf(eps / na)) - 1.0, "closed_form"
        draws = sample_matrix(EnsembleSpec(kind, rows=hyp_trials, cols=av.size),
                              seed.child("hyp")) @ av
        cnt = int(np.count_nonzero(np.abs(draws) < eps))
        lo_ci, _ = wilson_interval(cnt, hyp_trials, confidence)
        return lo_ci, "mc_lower"

    rows = []
    for eps in grid:
        p, how = hyp_prob(eps)
        if p > K * eps + (0.0 if how != "exact" else 1e-12):
            return TensorizationAudit(False, False, rows,
                                      "hypothesis fails at eps=%.4g: P=%.6g > K eps=%.6g (%s)"
                                      % (eps, p, K * eps, how))
        rows.append((eps, None, None, None, None, p, K * eps))

    # tensorized left side by Monte Carlo
    zsq = np.zeros(trials)
    for k in range(m):
        col = sample_matrix(EnsembleSpec(kind, rows=trials, cols=av.size),
                            seed.child("coord%d" % k)) @ av
        zsq += col * col
    out = []
    passed = True
    for i, eps in enumerate(grid):
        cnt = int(np.count_nonzero(zsq < eps * eps * m))
        lo_ci, hi_ci = wilson_interval(cnt, trials, confidence)
        lhs = cnt / trials
        rhs = (c_factor * K * eps) ** m
        ok = lhs <= rhs + (hi_ci - lhs)
        passed = passed and ok
        _, _, _, _, _, hp, hb = rows[i]
        out.append((eps, lhs, lo_ci, hi_ci, rhs, hp, hb))
    return TensorizationAudit(passed, True, out)


def results_to_csv(results) -> str:
    """Rows (method, epsilon, value, ci_low, ci_high, witness_v)."""
    lines = ["method,epsilon,value,ci_low,ci_high,witness_v"]
    for r in results:
        ci_lo = "" if r.ci is None else repr(float(r.ci[0]))
        ci_hi = "" if r.ci is None else repr(float(r.ci[1]))
        wit = "" if r.witness_v is None else repr(float(r.witness_v))
        lines.append("%s,%s,%s,%s,%s,%s" % (
            r.method, repr(float(r.epsilon)), repr(float(r.value)), ci_lo, ci_hi, wit))
    return "\n".join(lines) + "\n"
