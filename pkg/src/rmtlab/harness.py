"""Experiment harness: configs, Monte Carlo drivers, exact censuses, CSV.

Config files are flat "key = value" lines with # comments.  Every key
is validated against the schema of the chosen experiment and unknown
keys are errors, so a typo cannot silently fall back to a default.

Output is a fixed-schema CSV: experiment, n, N, param_name,
param_value, threshold, estimate, ci_low, ci_high, trials, seed, with
one leading metadata comment line carrying the package version, a
hash of the experiment-defining config keys, and the master seed.
Identical configs produce byte-identical files; trial-level work
splits across workers as pure count aggregation, so the worker count
cannot change a single byte.

The sign census enumerates sign matrices and counts the singular ones
with exact integer determinants.  Row and column sign flips preserve
singularity and act freely once the first row and column are pinned
to +1, so the census over 2^((n-1)^2) representatives equals the full
census over 2^(n^2) matrices; both paths are implemented and cross
checked in the tests.
"""

from __future__ import annotations

import hashlib
import math
import os
from concurrent.futures import ProcessPoolExecutor
from dataclasses import dataclass, field
from fractions import Fraction
from itertools import permutations

import numpy as np
from scipy.stats import norm as _norm

from . import __version__
from .concentration import esseen_bound, levy_exact_rademacher, levy_monte_carlo
from .ensembles import KINDS, EnsembleSpec, sample_matrix
from .errors import ResourceError, ValidationError
from .geometry import khinchin_constants, octahedron_section, sandwich_audit
from .perturbation import perturbation_tail
from .seeding import SeedPath
from .spectra import smallest_singular_value
from .structure import LcdQuery, kernel_lcd_experiment
from .nets import build_sphere_net, covering_audit, volumetric_cap

CSV_HEADER = ("experiment", "n", "N", "param_name", "param_value", "threshold",
              "estimate", "ci_low", "ci_high", "trials", "seed")


# ---------------------------------------------------------------------------
# shared statistics


def wilson_interval(successes: int, trials: int, confidence: float = 0.95) -> tuple[float, float]:
    """Wilson score interval for a binomial proportion."""
    if trials < 1:
        raise ValidationError("trials must be positive")
    if not (0 <= successes <= trials):
        raise ValidationError("successes must lie in [0, trials]")
    if not (0.0 < confidence < 1.0):
        raise ValidationError("confidence must lie in (0, 1)")
    z = float(_norm.ppf(0.5 * (1.0 + confidence)))
    phat = successes / trials
    z2 = z * z
    denom = 1.0 + z2 / trials
    center = (phat + z2 / (2.0 * trials)) / denom
    half = z * math.sqrt(phat * (1.0 - phat) / trials + z2 / (4.0 * trials * trials)) / denom
    # the boundary endpoints are exactly 0 and 1; rounding of
    # center - half can otherwise leave a stray 1e-18 above phat
    lo = 0.0 if successes == 0 else max(0.0, center - half)
    hi = 1.0 if successes == trials else min(1.0, center + half)
    return lo, hi


def parallel_counts(fn, fixed_args: tuple, trials: int, workers: int, width: int) -> np.ndarray:
    """Sum fn(*fixed_args, lo, hi) over an even split of range(trials).

    fn must be a module-level function returning an integer count
    vector of the given width; per-trial seeding makes the sum
    independent of the split.
    """
    if trials < 1:
        raise ValidationError("trials must be positive")
    if workers <= 1:
        return np.asarray(fn(*fixed_args, 0, trials), dtype=np.int64)
    workers = min(workers, trials)
    bounds = np.linspace(0, trials, workers + 1).astype(int)
    total = np.zeros(width, dtype=np.int64)
    with ProcessPoolExecutor(max_workers=workers) as pool:
        futures = [pool.submit(fn, *fixed_args, int(lo), int(hi))
                   for lo, hi in zip(bounds[:-1], bounds[1:]) if hi > lo]
        for fut in futures:
            total += np.asarray(fut.result(), dtype=np.int64)
    return total


# ---------------------------------------------------------------------------
# tail experiments


def square_tail_counts(kind: str, n: int, thresholds: np.ndarray,
                       master_seed: int, label: str, lo: int, hi: int) -> np.ndarray:
    spec = EnsembleSpec(kind, rows=n, cols=n)
    counts = np.zeros(len(thresholds), dtype=np.int64)
    for t in range(lo, hi):
        a = sample_matrix(spec, SeedPath(master_seed, label, t))
        counts += smallest_singular_value(a) <= thresholds
    return counts


def rect_tail_counts(kind: str, nrows: int, ncols: int, thresholds: np.ndarray,
                     master_seed: int, label: str, lo: int, hi: int) -> np.ndarray:
    spec = EnsembleSpec(kind, rows=nrows, cols=ncols)
    counts = np.zeros(len(thresholds), dtype=np.int64)
    for t in range(lo, hi):
        a = sample_matrix(spec, SeedPath(master_seed, label, t))
        counts += smallest_singular_value(a) <= thresholds
    return counts


@dataclass
class TailResult:
    thresholds: np.ndarray
    params: np.ndarray
    probs: np.ndarray
    ci: list[tuple[float, float]]
    trials: int


def tail_square(kind: str, n: int, eps_grid, trials: int, master_seed: int,
                workers: int = 1, label: str = "tail_square") -> TailResult:
    """P(s_n(A) <= eps n^(-1/2)) over the eps grid, square iid A."""
    eps = np.sort(np.asarray(eps_grid, dtype=float))
    if eps.size == 0 or np.any(eps < 0):
        raise ValidationError("eps grid must be nonnegative and nonempty")
    th = eps / math.sqrt(n)
    counts = parallel_counts(square_tail_counts, (kind, n, th, master_seed, label),
                             trials, workers, len(th))
    ci = [wilson_interval(int(c), trials) for c in counts]
    return TailResult(th, eps, counts / trials, ci, trials)


def tail_rectangular(kind: str, nrows: int, ncols: int, c1_grid, trials: int,
                     master_seed: int, workers: int = 1,
                     label: str = "tail_rectangular") -> tuple[TailResult, bool | None]:
    """P(s_n(A) <= c1 sqrt(N)) over the c1 grid for tall N x n iid A.

    When the aspect ratio n/N is at most 0.1 the result also carries a
    pass flag: the probability at c1 = 0.05 must not exceed 1 percent.
    """
    if nrows < ncols:
        raise ValidationError("need N >= n")
    c1 = np.sort(np.asarray(c1_grid, dtype=float))
    if c1.size == 0 or np.any(c1 < 0):
        raise ValidationError("c1 grid must be nonnegative and nonempty")
    aspect = ncols / nrows
    flag_applicable = aspect <= 0.1
    if flag_applicable and not np.any(np.isclose(c1, 0.05)):
        c1 = np.sort(np.append(c1, 0.05))
    th = c1 * math.sqrt(nrows)
    counts = parallel_counts(rect_tail_counts, (kind, nrows, ncols, th, master_seed, label),
                             trials, workers, len(th))
    ci = [wilson_interval(int(c), trials) for c in counts]
    result = TailResult(th, c1, counts / trials, ci, trials)
    flag = None
    if flag_applicable:
        j = int(np.argmin(np.abs(c1 - 0.05)))
        flag = bool(counts[j] / trials <= 0.01)
    return result, flag


def edelman_limit(eps: float) -> float:
    """Limiting P(s_n <= eps n^(-1/2)) for square Gaussian matrices."""
    return 1.0 - math.exp(-eps * eps / 2.0 - eps)


# ---------------------------------------------------------------------------
# exact sign census


def det_bareiss(rows: list[list[int]]) -> int:
    """Exact integer determinant by fraction-free Gaussian elimination."""
    m = [list(r) for r in rows]
    n = len(m)
    sign = 1
    prev = 1
    for k in range(n - 1):
        if m[k][k] == 0:
            for i in range(k + 1, n):
                if m[i][k] != 0:
                    m[k], m[i] = m[i], m[k]
                    sign = -sign
                    break
            else:
                return 0
        for i in range(k + 1, n):
            for j in range(k + 1, n):
                m[i][j] = (m[i][j] * m[k][k] - m[i][k] * m[k][j]) // prev
        prev = m[k][k]
    return sign * m[-1][-1]


def det_permutation(rows: list[list[int]]) -> int:
    """Exact determinant by signed permutation expansion (small n only)."""
    n = len(rows)
    if n > 7:
        raise ResourceError("permutation expansion is capped at n = 7")
    total = 0
    for perm in permutations(range(n)):
        inv = sum(1 for i in range(n) for j in range(i + 1, n) if perm[i] > perm[j])
        term = 1 if inv % 2 == 0 else -1
        for i in range(n):
            term *= rows[i][perm[i]]
        total += term
    return total


def _singular_count_full(n: int, det) -> int:
    cells = n * n
    count = 0
    for code in range(1 << cells):
        rows = [[1 if (code >> (i * n + j)) & 1 else -1 for j in range(n)]
                for i in range(n)]
        if det(rows) == 0:
            count += 1
    return count


def _singular_count_reduced(n: int, det) -> int:
    """Representatives with first row and column +1; sign flip orbits are
    uniform of size 2^(2n-1), so this count over 2^((n-1)^2) patterns
    reproduces the full census probability exactly."""
    cells = (n - 1) * (n - 1)
    count = 0
    for code in range(1 << cells):
        rows = [[1] * n]
        for i in range(n - 1):
            row = [1]
            for j in range(n - 1):
                row.append(1 if (code >> (i * (n - 1) + j)) & 1 else -1)
            rows.append(row)
        if det(rows) == 0:
            count += 1
    return count


def sign_census(n: int, method: str = "auto", det=det_bareiss) -> Fraction:
    """Exact P(det = 0) for a uniform n x n sign matrix, n <= 5."""
    if not isinstance(n, int) or n < 1:
        raise ValidationError("n must be a positive integer")
    if n > 5:
        raise ResourceError("exact sign census is capped at n = 5 "
                            "(2^((n-1)^2) = %d representatives)" % (1 << ((n - 1) ** 2)))
    if method not in ("auto", "full", "reduced"):
        raise ValidationError("method must be auto, full, or reduced")
    if method == "auto":
        method = "full" if n <= 3 else "reduced"
    if method == "full":
        return Fraction(_singular_count_full(n, det), 1 << (n * n))
    if n == 1:
        return Fraction(0)
    return Fraction(_singular_count_reduced(n, det), 1 << ((n - 1) ** 2))


def sign_census_monte_carlo(n: int, trials: int, master_seed: int,
                            label: str = "sign_census_mc") -> tuple[float, tuple[float, float]]:
    """Sampled singularity frequency with exact integer determinants."""
    spec = EnsembleSpec("rademacher", rows=n, cols=n)
    hits = 0
    for t in range(trials):
        a = sample_matrix(spec, SeedPath(master_seed, label, t)).astype(int)
        if det_bareiss(a.tolist()) == 0:
            hits += 1
    return hits / trials, wilson_interval(hits, trials)


# ---------------------------------------------------------------------------
# config handling


def _parse_int(text: str) -> int:
    try:
        return int(text)
    except ValueError as exc:
        raise ValidationError("expected an integer, got %r" % text) from exc


def _parse_float(text: str) -> float:
    try:
        return float(text)
    except ValueError as exc:
        raise ValidationError("expected a number, got %r" % text) from exc


def _parse_floats(text: str) -> tuple[float, ...]:
    parts = [p.strip() for p in text.split(",") if p.strip()]
    if not parts:
        raise ValidationError("expected a comma separated list of numbers")
    return tuple(_parse_float(p) for p in parts)


def _parse_str(text: str) -> str:
    return text


def _parse_bool(text: str) -> bool:
    low = text.strip().lower()
    if low in ("1", "true", "yes", "on"):
        return True
    if low in ("0", "false", "no", "off"):
        return False
    raise ValidationError("expected a boolean, got %r" % text)


_REQUIRED = object()

# key -> (parser, default); _REQUIRED means the key must be present
_SCHEMAS: dict[str, dict[str, tuple]] = {
    "tail_square": {
        "kind": (_parse_str, "gaussian"),
        "n": (_parse_int, _REQUIRED),
        "eps_grid": (_parse_floats, _REQUIRED),
        "trials": (_parse_int, 1000),
    },
    "tail_rectangular": {
        "kind": (_parse_str, "gaussian"),
        "n": (_parse_int, _REQUIRED),
        "rows": (_parse_int, _REQUIRED),
        "c1_grid": (_parse_floats, _REQUIRED),
        "trials": (_parse_int, 1000),
    },
    "sign_census": {
        "n": (_parse_int, _REQUIRED),
        "mc_trials": (_parse_int, 0),
    },
    "edelman": {
        "n": (_parse_int, 100),
        "eps_grid": (_parse_floats, (0.1,)),
        "trials": (_parse_int, 2000),
    },
    "levy": {
        "weights": (_parse_str, _REQUIRED),
        "eps_grid": (_parse_floats, _REQUIRED),
        "methods": (_parse_str, "exact"),
        "kind": (_parse_str, "rademacher"),
        "trials": (_parse_int, 100000),
    },
    "lcd": {
        "kind": (_parse_str, "gaussian"),
        "n": (_parse_int, _REQUIRED),
        "trials": (_parse_int, 100),
        "gamma": (_parse_float, 0.1),
        "alpha": (_parse_float, None),
        "theta_max": (_parse_float, None),
        "slack": (_parse_float, None),
    },
    "khinchin": {
        "kind": (_parse_str, "gaussian"),
        "n": (_parse_int, _REQUIRED),
        "rows": (_parse_int, _REQUIRED),
        "p": (_parse_float, _REQUIRED),
        "starts": (_parse_int, 1000),
    },
    "kashin": {
        "kind": (_parse_str, "gaussian"),
        "n": (_parse_int, _REQUIRED),
        "rows": (_parse_int, _REQUIRED),
        "seeds": (_parse_int, 50),
        "eps": (_parse_float, 0.1),
        "c_prime": (_parse_float, 10.0),
    },
    "perturb": {
        "group": (_parse_str, _REQUIRED),
        "n": (_parse_int, _REQUIRED),
        "d": (_parse_str, "zero"),
        "d_scale": (_parse_float, 1.0),
        "d_diag": (_parse_floats, None),
        "thresholds": (_parse_floats, _REQUIRED),
        "trials": (_parse_int, 1000),
    },
    "net_audit": {
        "n": (_parse_int, _REQUIRED),
        "eps": (_parse_float, _REQUIRED),
        "seeds": (_parse_int, 3),
        "audit_vectors": (_parse_int, 10000),
    },
}

_EXEC_KEYS = {"out", "workers", "quiet", "plot"}
_EXEC_PARSERS = {"out": _parse_str, "workers": _parse_int, "quiet": _parse_bool, "plot": _parse_bool}


@dataclass
class ExperimentConfig:
    experiment: str
    params: dict
    master_seed: int = 0
    out: str | None = None
    workers: int = 1
    quiet: bool = False
    plot: bool = True
    raw: dict = field(default_factory=dict)

    def config_hash(self) -> str:
        """Hash of the experiment-defining keys only; execution options
        (out, workers, quiet, plot) deliberately do not participate."""
        lines = ["experiment=%s" % self.experiment, "master_seed=%d" % self.master_seed]
        for key in sorted(self.params):
            lines.append("%s=%r" % (key, self.params[key]))
        return hashlib.sha256("\n".join(lines).encode("utf-8")).hexdigest()[:12]


def parse_config_text(text: str) -> dict[str, str]:
    """Flat key = value lines; # starts a comment; later keys override."""
    out: dict[str, str] = {}
    for lineno, raw in enumerate(text.splitlines(), start=1):
        line = raw.split("#", 1)[0].strip()
        if not line:
            continue
        if "=" not in line:
            raise ValidationError("line %d is not 'key = value': %r" % (lineno, raw.strip()))
        key, value = line.split("=", 1)
        key = key.strip()
        value = value.strip()
        if not key:
            raise ValidationError("line %d has an empty key" % lineno)
        out[key] = value
    return out


def build_config(mapping: dict[str, str]) -> ExperimentConfig:
    """Validate a flat string mapping into an ExperimentConfig."""
    if "experiment" not in mapping:
        raise ValidationError("missing required key 'experiment'")
    experiment = mapping["experiment"].strip()
    if experiment not in _SCHEMAS:
        raise ValidationError("unknown experiment %r (expected one of %s)"
                              % (experiment, ", ".join(sorted(_SCHEMAS))))
    schema = _SCHEMAS[experiment]
    known = set(schema) | _EXEC_KEYS | {"experiment", "master_seed"}
    unknown = sorted(set(mapping) - known)
    if unknown:
        raise ValidationError("unknown key(s) %s for experiment %s (valid: %s)"
                              % (", ".join(unknown), experiment, ", ".join(sorted(known))))
    params = {}
    for key, (parser, default) in schema.items():
        if key in mapping:
            params[key] = parser(mapping[key])
        elif default is _REQUIRED:
            raise ValidationError("missing required key %r for experiment %s" % (key, experiment))
        else:
            params[key] = default
    master_seed = _parse_int(mapping.get("master_seed", "0"))
    cfg = ExperimentConfig(experiment=experiment, params=params, master_seed=master_seed,
                           raw=dict(mapping))
    if "out" in mapping:
        cfg.out = mapping["out"]
    if "workers" in mapping:
        cfg.workers = _parse_int(mapping["workers"])
        if cfg.workers < 1:
            raise ValidationError("workers must be at least 1")
    if "quiet" in mapping:
        cfg.quiet = _parse_bool(mapping["quiet"])
    if "plot" in mapping:
        cfg.plot = _parse_bool(mapping["plot"])
    _validate_params(cfg)
    return cfg


def _validate_params(cfg: ExperimentConfig) -> None:
    p = cfg.params
    if "kind" in p and p["kind"] not in KINDS:
        raise ValidationError("unknown ensemble kind %r (expected one of %s)"
                              % (p["kind"], ", ".join(KINDS)))
    if "trials" in p and p["trials"] is not None and p["trials"] < 1:
        raise ValidationError("trials must be positive")
    if cfg.experiment == "levy":
        methods = [m.strip() for m in p["methods"].split(",") if m.strip()]
        bad = [m for m in methods if m not in ("exact", "monte_carlo", "esseen")]
        if bad:
            raise ValidationError("unknown levy method(s): %s" % ", ".join(bad))
    if cfg.experiment == "perturb":
        if p["d"] not in ("zero", "identity", "neg_identity", "scaled_identity", "diag"):
            raise ValidationError("unknown d descriptor %r" % p["d"])
        if p["d"] == "diag" and p["d_diag"] is None:
            raise ValidationError("d = diag requires d_diag")


def resolve_weights(spec_text: str, master_seed: int) -> np.ndarray:
    """Weight vector descriptors for the levy experiment.

    two:N    first two coordinates 1/sqrt(2), rest zero
    flat:N   all coordinates 1/sqrt(N)
    tilted:N coordinates (N + k)/N^(3/2), k = 1..N
    random:N seeded uniform direction
    or a raw comma separated float list.
    """
    text = spec_text.strip()
    if ":" in text:
        name, _, count = text.partition(":")
        n = _parse_int(count)
        if n < 2:
            raise ValidationError("weight vectors need n >= 2")
        if name == "two":
            a = np.zeros(n)
            a[0] = a[1] = 1.0 / math.sqrt(2.0)
            return a
        if name == "flat":
            return np.full(n, 1.0 / math.sqrt(n))
        if name == "tilted":
            return (n + np.arange(1, n + 1)) / n ** 1.5
        if name == "random":
            rng = SeedPath(master_seed, "levy_weights").rng()
            a = rng.standard_normal(n)
            return a / np.linalg.norm(a)
        raise ValidationError("unknown weight descriptor %r" % name)
    return np.asarray(_parse_floats(text), dtype=float)


def resolve_d_matrix(name: str, n: int, scale: float, diag) -> np.ndarray:
    if name == "zero":
        return np.zeros((n, n))
    if name == "identity":
        return np.eye(n)
    if name == "neg_identity":
        return -np.eye(n)
    if name == "scaled_identity":
        return scale * np.eye(n)
    if name == "diag":
        vals = np.asarray(diag, dtype=float)
        if vals.size != n:
            raise ValidationError("d_diag has %d entries, need n = %d" % (vals.size, n))
        return np.diag(vals)
    raise ValidationError("unknown d descriptor %r" % name)


# ---------------------------------------------------------------------------
# experiment dispatch: each runner returns fixed-schema rows


def _row(experiment, n, nrows, param_name, param_value, threshold, estimate,
         ci_low, ci_high, trials, seed) -> dict:
    return {"experiment": experiment, "n": n, "N": nrows, "param_name": param_name,
            "param_value": param_value, "threshold": threshold, "estimate": estimate,
            "ci_low": ci_low, "ci_high": ci_high, "trials": trials, "seed": seed}


def _run_tail_square(cfg: ExperimentConfig) -> list[dict]:
    p = cfg.params
    res = tail_square(p["kind"], p["n"], p["eps_grid"], p["trials"], cfg.master_seed,
                      workers=cfg.workers)
    rows = []
    for eps, th, prob, (lo, hi) in zip(res.params, res.thresholds, res.probs, res.ci):
        rows.append(_row("tail_square", p["n"], p["n"], "epsilon", float(eps), float(th),
                         float(prob), lo, hi, res.trials, cfg.master_seed))
    return rows


def _run_tail_rectangular(cfg: ExperimentConfig) -> list[dict]:
    p = cfg.params
    res, flag = tail_rectangular(p["kind"], p["rows"], p["n"], p["c1_grid"], p["trials"],
                                 cfg.master_seed, workers=cfg.workers)
    rows = []
    for c1, th, prob, (lo, hi) in zip(res.params, res.thresholds, res.probs, res.ci):
        rows.append(_row("tail_rectangular", p["n"], p["rows"], "c1", float(c1), float(th),
                         float(prob), lo, hi, res.trials, cfg.master_seed))
    if flag is not None:
        rows.append(_row("tail_rectangular", p["n"], p["rows"], "aspect_flag",
                         p["n"] / p["rows"], 0.01, 1.0 if flag else 0.0, None, None,
                         res.trials, cfg.master_seed))
    return rows


def _run_sign_census(cfg: ExperimentConfig) -> list[dict]:
    p = cfg.params
    exact = sign_census(p["n"])
    val = float(exact)
    rows = [_row("sign_census", p["n"], p["n"], "exact_probability", None, None,
                 val, val, val, 1 << (p["n"] * p["n"]), cfg.master_seed)]
    if p["mc_trials"] > 0:
        est, (lo, hi) = sign_census_monte_carlo(p["n"], p["mc_trials"], cfg.master_seed)
        rows.append(_row("sign_census", p["n"], p["n"], "mc_probability", None, None,
                         est, lo, hi, p["mc_trials"], cfg.master_seed))
    return rows


def _run_edelman(cfg: ExperimentConfig) -> list[dict]:
    p = cfg.params
    res = tail_square("gaussian", p["n"], p["eps_grid"], p["trials"], cfg.master_seed,
                      workers=cfg.workers, label="edelman")
    rows = []
    for eps, th, prob, (lo, hi) in zip(res.params, res.thresholds, res.probs, res.ci):
        rows.append(_row("edelman", p["n"], p["n"], "epsilon", float(eps), float(th),
                         float(prob), lo, hi, res.trials, cfg.master_seed))
        rows.append(_row("edelman", p["n"], p["n"], "limit_law", float(eps), float(th),
                         edelman_limit(float(eps)), None, None, res.trials, cfg.master_seed))
    return rows


def _run_levy(cfg: ExperimentConfig) -> list[dict]:
    p = cfg.params
    a = resolve_weights(p["weights"], cfg.master_seed)
    n = int(a.size)
    methods = [m.strip() for m in p["methods"].split(",") if m.strip()]
    rows = []
    for method in methods:
        for eps in p["eps_grid"]:
            if method == "exact":
                r = levy_exact_rademacher(a, eps)
            elif method == "esseen":
                r = esseen_bound(a, eps)
            else:
                r = levy_monte_carlo(p["kind"], a, eps, p["trials"],
                                     SeedPath(cfg.master_seed, "levy_mc"))
            lo, hi = r.ci if r.ci else (None, None)
            rows.append(_row("levy", n, n, method, float(eps), float(eps), r.value,
                             lo, hi, r.trials if r.trials else 0, cfg.master_seed))
    return rows


def _run_lcd(cfg: ExperimentConfig) -> list[dict]:
    p = cfg.params
    n = p["n"]
    alpha = p["alpha"] if p["alpha"] is not None else math.sqrt(n) / 2.0
    theta_max = p["theta_max"] if p["theta_max"] is not None else math.exp(n / 4.0)
    q = LcdQuery(gamma=p["gamma"], alpha=alpha, theta_max=theta_max, slack=p["slack"])
    summary = kernel_lcd_experiment(p["kind"], n, p["trials"], q, cfg.master_seed)
    rows = [
        _row("lcd", n, n, "exceed_fraction", p["gamma"], theta_max,
             summary.exceed_fraction, None, None, p["trials"], cfg.master_seed),
        _row("lcd", n, n, "degenerate", None, theta_max, float(summary.degenerate),
             None, None, p["trials"], cfg.master_seed),
    ]
    if summary.quantiles is not None:
        for name, value in zip(("found_q10", "found_q50", "found_q90"), summary.quantiles):
            rows.append(_row("lcd", n, n, name, p["gamma"], theta_max, value,
                             None, None, len(summary.found), cfg.master_seed))
    return rows


def _run_khinchin(cfg: ExperimentConfig) -> list[dict]:
    p = cfg.params
    spec = EnsembleSpec(p["kind"], rows=p["rows"], cols=p["n"])
    a = sample_matrix(spec, SeedPath(cfg.master_seed, "khinchin_sample"))
    est = khinchin_constants(a, p["p"], starts=p["starts"], master_seed=cfg.master_seed)
    rows = []
    for name, value, exact in (("alpha_hat", est.alpha_hat, est.alpha_exact),
                               ("beta_hat", est.beta_hat, est.beta_exact)):
        lo = hi = value if exact else None
        rows.append(_row("khinchin", p["n"], p["rows"], name, p["p"], None, value,
                         lo, hi, p["starts"], cfg.master_seed))
    return rows


def _run_kashin(cfg: ExperimentConfig) -> list[dict]:
    p = cfg.params
    rows = []
    for s in range(p["seeds"]):
        spec = EnsembleSpec(p["kind"], rows=p["rows"], cols=p["n"])
        a = sample_matrix(spec, SeedPath(cfg.master_seed, "kashin", s))
        report = octahedron_section(a)
        audit = sandwich_audit(a, p["eps"], p["c_prime"], trials=2000,
                               master_seed=cfg.master_seed)
        for name, value in (("kashin_ratio", report.kashin_ratio),
                            ("diameter", report.diameter),
                            ("min_l1", report.min_l1),
                            ("sandwich_pass", 1.0 if audit.passed else 0.0)):
            rows.append(_row("kashin", p["n"], p["rows"], name, float(s), None, value,
                             None, None, 1, cfg.master_seed))
    return rows


def _run_perturb(cfg: ExperimentConfig) -> list[dict]:
    p = cfg.params
    d = resolve_d_matrix(p["d"], p["n"], p["d_scale"], p["d_diag"])
    curve = perturbation_tail(d, p["group"], p["thresholds"], p["trials"],
                              cfg.master_seed, label="perturb", workers=cfg.workers)
    rows = []
    for t, prob, (lo, hi) in zip(curve.thresholds, curve.probs, curve.ci):
        rows.append(_row("perturb", p["n"], p["n"], "threshold", float(t), float(t),
                         float(prob), lo, hi, curve.trials, cfg.master_seed))
    for name in ("norm_D", "dist_to_orthogonal"):
        rows.append(_row("perturb", p["n"], p["n"], name, None, None,
                         curve.meta[name], None, None, curve.trials, cfg.master_seed))
    return rows


def _run_net_audit(cfg: ExperimentConfig) -> list[dict]:
    p = cfg.params
    cap = volumetric_cap(p["n"], p["eps"])
    rows = []
    for s in range(p["seeds"]):
        net = build_sphere_net(p["n"], p["eps"], SeedPath(cfg.master_seed, "net_audit", s))
        frac, gap = covering_audit(net, p["audit_vectors"], SeedPath(cfg.master_seed, "net_probe", s))
        covered = int(round(frac * p["audit_vectors"]))
        lo, hi = wilson_interval(covered, p["audit_vectors"])
        rows.append(_row("net_audit", p["n"], p["n"], "cardinality", float(s), float(cap),
                         float(len(net)), None, None, p["audit_vectors"], cfg.master_seed))
        rows.append(_row("net_audit", p["n"], p["n"], "covered_fraction", float(s), p["eps"],
                         frac, lo, hi, p["audit_vectors"], cfg.master_seed))
        rows.append(_row("net_audit", p["n"], p["n"], "max_gap", float(s), p["eps"],
                         gap, None, None, p["audit_vectors"], cfg.master_seed))
    return rows


_RUNNERS = {
    "tail_square": _run_tail_square,
    "tail_rectangular": _run_tail_rectangular,
    "sign_census": _run_sign_census,
    "edelman": _run_edelman,
    "levy": _run_levy,
    "lcd": _run_lcd,
    "khinchin": _run_khinchin,
    "kashin": _run_kashin,
    "perturb": _run_perturb,
    "net_audit": _run_net_audit,
}

EXPERIMENTS = tuple(sorted(_RUNNERS))


# ---------------------------------------------------------------------------
# CSV rendering and the run entry point


def _fmt(value) -> str:
    if value is None:
        return ""
    if isinstance(value, bool):
        return "1" if value else "0"
    if isinstance(value, (int, np.integer)):
        return str(int(value))
    if isinstance(value, (float, np.floating)):
        return repr(float(value))
    return str(value)


def rows_to_csv_text(cfg: ExperimentConfig, rows: list[dict]) -> str:
    lines = ["# rmtlab %s config=%s master_seed=%d"
             % (__version__, cfg.config_hash(), cfg.master_seed)]
    lines.append(",".join(CSV_HEADER))
    for row in rows:
        lines.append(",".join(_fmt(row[col]) for col in CSV_HEADER))
    return "\n".join(lines) + "\n"


def run(cfg: ExperimentConfig) -> list[str]:
    """Execute the experiment, write the CSV (and figure), return paths."""
    runner = _RUNNERS.get(cfg.experiment)
    if runner is None:
        raise ValidationError("unknown experiment %r" % cfg.experiment)
    rows = runner(cfg)
    out_path = cfg.out or (cfg.experiment + ".csv")
    directory = os.path.dirname(out_path)
    if directory:
        os.makedirs(directory, exist_ok=True)
    text = rows_to_csv_text(cfg, rows)
    with open(out_path, "wb") as fh:
        fh.write(text.encode("utf-8"))
    paths = [out_path]
    if cfg.plot:
        from . import figures
        png_path = os.path.splitext(out_path)[0] + ".png"
        figures.render(cfg.experiment, rows, png_path)
        paths.append(png_path)
    return paths
