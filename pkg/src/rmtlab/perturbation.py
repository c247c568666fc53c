"""Smallest singular value of a deterministic matrix plus a Haar rotation.

The operator norm distance from D to the orthogonal group is
max_i |s_i(D) - 1| (attained at the polar factor), computed here from
the spectrum.  Tail curves estimate P(s_n(D + U) <= t) over a
threshold grid with U Haar on the chosen group; counts are cumulative
in t by construction, and every trial draws its own seeded stream so
worker split cannot change the result.

Two structural facts the experiments exercise: over SO(3), choosing D
with -D special orthogonal forces s_n(D + U) = 0 exactly when
R^T U has eigenvalue one, which happens on the whole SO component
(odd dimension) and almost never off it, so the degeneracy frequency
is exactly 1/2 over O(3); and over U(n) the tail of s_n(D + U) decays
polynomially with no degenerate atom.
"""

from __future__ import annotations

from dataclasses import dataclass, field

import numpy as np

from .errors import ValidationError
from .seeding import SeedPath
from .spectra import singular_values, smallest_singular_value

GROUPS = ("orthogonal", "special_orthogonal", "unitary")


@dataclass
class TailCurve:
    thresholds: np.ndarray
    probs: np.ndarray
    ci: list[tuple[float, float]]
    trials: int
    meta: dict = field(default_factory=dict)


def dist_to_orthogonal(d) -> float:
    """Operator norm distance from D to the orthogonal group."""
    s = singular_values(d)
    return float(np.max(np.abs(s - 1.0)))


def _sample_group(group: str, n: int, seed: SeedPath) -> np.ndarray:
    from .ensembles import sample_haar_orthogonal, sample_haar_unitary
    if group == "orthogonal":
        return sample_haar_orthogonal(n, seed)
    if group == "special_orthogonal":
        return sample_haar_orthogonal(n, seed, special=True)
    if group == "unitary":
        return sample_haar_unitary(n, seed)
    raise ValidationError("unknown group %r (expected one of %s)" % (group, ", ".join(GROUPS)))


def tail_counts(d: np.ndarray, group: str, thresholds: np.ndarray,
                master_seed: int, label: str, lo: int, hi: int) -> np.ndarray:
    """Counts of s_n(D + U) <= t over trials lo..hi-1; the worker unit."""
    counts = np.zeros(len(thresholds), dtype=np.int64)
    for t in range(lo, hi):
        u = _sample_group(group, d.shape[0], SeedPath(master_seed, label, t))
        s = smallest_singular_value(d + u)
        counts += s <= thresholds
    return counts


def perturbation_tail(d, group: str, thresholds, trials: int,
                      master_seed: int, label: str = "perturbation_tail",
                      workers: int = 1, confidence: float = 0.95) -> TailCurve:
    """Monte Carlo tail curve of s_n(D + U) with Wilson intervals."""
    from .harness import parallel_counts, wilson_interval
    mat = np.asarray(d, dtype=float)
    if mat.ndim != 2 or mat.shape[0] != mat.shape[1]:
        raise ValidationError("D must be square")
    if group not in GROUPS:
        raise ValidationError("unknown group %r (expected one of %s)" % (group, ", ".join(GROUPS)))
    th = np.sort(np.asarray(thresholds, dtype=float))
    if th.size == 0 or np.any(th < 0):
        raise ValidationError("thresholds must be nonnegative and nonempty")
    if trials < 1:
        raise ValidationError("trials must be positive")
    counts = parallel_counts(tail_counts, (mat, group, th, master_seed, label),
                             trials, workers, len(th))
    probs = counts / trials
    ci = [wilson_interval(int(c), trials, confidence) for c in counts]
    meta = {
        "group": group,
        "n": mat.shape[0],
        "norm_D": float(singular_values(mat)[0]),
        "dist_to_orthogonal": dist_to_orthogonal(mat),
        "seed": master_seed,
    }
    return TailCurve(th, probs, ci, trials, meta)


def tail_envelope_check(curve: TailCurve, c_exp: float, c_dim: float) -> bool:
    """Is prob <= t^c n^C + ci half width at every threshold?"""
    n = curve.meta.get("n")
    if n is None:
        raise ValidationError("curve lacks dimension metadata")
    for t, p, (lo, hi) in zip(curve.thresholds, curve.probs, curve.ci):
        envelope = float(t) ** c_exp * float(n) ** c_dim
        if p > envelope + (hi - p):
            return False
    return True


def curve_to_csv(curve: TailCurve) -> str:
    """Rows (group, n, t, prob, ci_low, ci_high, trials, norm_D, dist_to_orthogonal, seed)."""
    lines = ["group,n,t,prob,ci_low,ci_high,trials,norm_D,dist_to_orthogonal,seed"]
    for t, p, (lo, hi) in zip(curve.thresholds, curve.probs, curve.ci):
        lines.append("%s,%d,%s,%s,%s,%s,%d,%s,%s,%d" % (
            curve.meta["group"], curve.meta["n"], repr(float(t)), repr(float(p)),
            repr(float(lo)), repr(float(hi)), curve.trials,
            repr(curve.meta["norm_D"]), repr(curve.meta["dist_to_orthogonal"]),
            curve.meta["seed"]))
    return "\n".join(lines) + "\n"
