"""Seedable samplers for the random inputs of every experiment.

Scalar entry distributions are mean zero and, when unit_variance is
set, variance one; the check is analytic (atom tables or closed form),
not empirical.  Matrix samplers fill row-major with iid entries.  Haar
orthogonal and unitary matrices come from QR of a Ginibre matrix with
the R diagonal normalized positive, which makes the factorization
unique and the Q factor exactly Haar distributed.

The psi2 estimate is the max over p of the normalized moment
(E|X|^p)^(1/p) / sqrt(p), a practical stand-in for the subgaussian
norm up to universal factors.
"""

from __future__ import annotations

from dataclasses import dataclass

import numpy as np

from .errors import DimensionError, ValidationError
from .seeding import SeedPath

KINDS = ("gaussian", "rademacher", "uniform_symmetric", "discrete", "heavy_tail_4th_moment")

# symmetric three-atom law with unit variance and fourth moment 9:
# +-3 with probability 1/18 each, 0 otherwise
HEAVY_TAIL_ATOMS = ((-3.0, 1.0 / 18.0), (0.0, 8.0 / 9.0), (3.0, 1.0 / 18.0))

_ATOL = 1e-12


@dataclass(frozen=True)
class EnsembleSpec:
    """Entry distribution plus matrix shape.

    kind: one of KINDS.  atoms: ((value, prob), ...) for kind
    "discrete"; optional override for "heavy_tail_4th_moment".
    """

    kind: str
    rows: int = 1
    cols: int = 1
    unit_variance: bool = True
    atoms: tuple[tuple[float, float], ...] | None = None

    def validate(self) -> None:
        if self.kind not in KINDS:
            raise ValidationError("unknown ensemble kind %r (expected one of %s)" % (self.kind, ", ".join(KINDS)))
        if not (isinstance(self.rows, int) and isinstance(self.cols, int)):
            raise ValidationError("rows and cols must be integers")
        if self.rows < 1 or self.cols < 1:
            raise DimensionError("matrix shape must be at least 1x1, got %dx%d" % (self.rows, self.cols))
        if self.kind == "discrete" and not self.atoms:
            raise ValidationError("kind 'discrete' requires an atom table")
        if self.atoms is not None:
            probs = np.array([p for _, p in self.atoms], dtype=float)
            if np.any(probs < 0) or abs(probs.sum() - 1.0) > _ATOL:
                raise ValidationError("atom probabilities must be nonnegative and sum to 1")
        if self.unit_variance:
            mean, var = self.mean_variance()
            if abs(mean) > _ATOL or abs(var - 1.0) > _ATOL:
                raise ValidationError(
                    "unit_variance spec has mean %.3g and variance %.3g; need (0, 1)" % (mean, var))

    def atom_table(self) -> tuple[tuple[float, float], ...] | None:
        """Atoms for the purely discrete kinds, None for continuous ones."""
        if self.kind == "rademacher":
            return ((-1.0, 0.5), (1.0, 0.5))
        if self.kind == "discrete":
            return self.atoms
        if self.kind == "heavy_tail_4th_moment":
            return self.atoms if self.atoms is not None else HEAVY_TAIL_ATOMS
        return None

    def mean_variance(self) -> tuple[float, float]:
        """Analytic mean and variance of one entry."""
        atoms = self.atom_table()
        if atoms is not None:
            vals = np.array([v for v, _ in atoms], dtype=float)
            probs = np.array([p for _, p in atoms], dtype=float)
            mean = float(vals @ probs)
            var = float((vals - mean) ** 2 @ probs)
            return mean, var
        if self.kind == "gaussian":
            return 0.0, 1.0
        # uniform_symmetric on [-a, a] has variance a^2/3
        a = np.sqrt(3.0) if self.unit_variance else 1.0
        return 0.0, a * a / 3.0

    def fourth_moment(self) -> float:
        atoms = self.atom_table()
        if atoms is not None:
            vals = np.array([v for v, _ in atoms], dtype=float)
            probs = np.array([p for _, p in atoms], dtype=float)
            return float(vals ** 4 @ probs)
        if self.kind == "gaussian":
            return 3.0
        a = np.sqrt(3.0) if self.unit_variance else 1.0
        return a ** 4 / 5.0


def sample_scalars(spec: EnsembleSpec, seed: SeedPath, count: int) -> np.ndarray:
    """count iid draws from the ensemble entry distribution."""
    spec.validate()
    if count < 0:
        raise ValidationError("count must be nonnegative")
    rng = seed.rng()
    if spec.kind == "gaussian":
        return rng.standard_normal(count)
    if spec.kind == "rademacher":
        return rng.integers(0, 2, size=count).astype(float) * 2.0 - 1.0
    if spec.kind == "uniform_symmetric":
        a = np.sqrt(3.0) if spec.unit_variance else 1.0
        return rng.uniform(-a, a, size=count)
    atoms = spec.atom_table()
    vals = np.array([v for v, _ in atoms], dtype=float)
    probs = np.array([p for _, p in atoms], dtype=float)
    idx = rng.choice(len(vals), size=count, p=probs)
    return vals[idx]


def sample_matrix(spec: EnsembleSpec, seed: SeedPath) -> np.ndarray:
    """rows x cols matrix of iid entries, filled row-major."""
    flat = sample_scalars(spec, seed, spec.rows * spec.cols)
    return flat.reshape(spec.rows, spec.cols)


def sample_haar_orthogonal(n: int, seed: SeedPath, special: bool = False) -> np.ndarray:
    """Haar draw from O(n), or from SO(n) when special is set."""
    if not isinstance(n, int) or n < 1:
        raise DimensionError("n must be a positive integer")
    rng = seed.rng()
    z = rng.standard_normal((n, n))
    q, r = np.linalg.qr(z)
    d = np.sign(np.diag(r))
    d[d == 0] = 1.0
    q = q * d
    if special and np.linalg.det(q) < 0:
        q[:, 0] = -q[:, 0]
    return q


def sample_haar_unitary(n: int, seed: SeedPath) -> np.ndarray:
    """Haar draw from U(n)."""
    if not isinstance(n, int) or n < 1:
        raise DimensionError("n must be a positive integer")
    rng = seed.rng()
    z = (rng.standard_normal((n, n)) + 1j * rng.standard_normal((n, n))) / np.sqrt(2.0)
    q, r = np.linalg.qr(z)
    d = np.diag(r)
    ph = np.where(np.abs(d) > 0, d / np.abs(np.where(np.abs(d) > 0, d, 1.0)), 1.0)
    return q * ph


def estimate_psi2(samples: np.ndarray, p_max: int = 8) -> float:
    """max_p (E|X|^p)^(1/p)/sqrt(p) over p = 1..p_max from an empirical sample."""
    s = np.asarray(samples, dtype=float).ravel()
    if s.size < 100:
        raise ValidationError("need at least 100 samples, got %d" % s.size)
    if not isinstance(p_max, int) or p_max < 1:
        raise ValidationError("p_max must be a positive integer")
    a = np.abs(s)
    best = 0.0
    for p in range(1, p_max + 1):
        m = float(np.mean(a ** p)) ** (1.0 / p)
        best = max(best, m / np.sqrt(p))
    return best
