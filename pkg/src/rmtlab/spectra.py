"""Singular value computations and span distances.

Singular values are the eigenvalues of (A* A)^(1/2), returned
nonincreasing.  The smallest one equals the minimum of |Ax| over the
unit sphere, which is the quantity all the tail experiments estimate.
The factorization itself is delegated to LAPACK; correctness is pinned
by cross checks against an independent Gram eigensolver, power
iteration, and exact determinants in the test suite, plus an optional
reconstruction check here.
"""

from __future__ import annotations

import numpy as np

from .errors import DegenerateInputError, DimensionError, RmtLabError, ValidationError


def _as_matrix(m) -> np.ndarray:
    a = np.asarray(m)
    if a.ndim != 2:
        raise DimensionError("expected a 2-d array, got ndim=%d" % a.ndim)
    if a.size == 0:
        raise DimensionError("empty matrix")
    if not np.all(np.isfinite(a)):
        raise ValidationError("matrix has non-finite entries")
    return a


def singular_values(m, verify: bool = False) -> np.ndarray:
    """All singular values, nonincreasing.  verify recomputes A*A against
    V diag(s^2) V* and insists on a 1e-8 relative reconstruction."""
    a = _as_matrix(m)
    if verify:
        _, s, vh = np.linalg.svd(a, full_matrices=False)
        gram = a.conj().T @ a
        recon = vh.conj().T @ (s[:, None] ** 2 * vh)
        top = max(float(s[0]) ** 2, 1e-300)
        resid = float(np.max(np.abs(gram - recon)))
        if resid > 1e-8 * top:
            raise RmtLabError("SVD reconstruction residual %.3g exceeds 1e-8 * s1^2" % resid)
        return s
    return np.linalg.svd(a, compute_uv=False)


def operator_norm(m) -> float:
    return float(singular_values(m)[0])


def smallest_singular_value(m) -> float:
    """s_n of a tall or square matrix, the min of |Ax| over unit x."""
    a = _as_matrix(m)
    if a.shape[0] < a.shape[1]:
        raise DimensionError("matrix must have at least as many rows as columns")
    return float(singular_values(a)[-1])


def condition_number(m) -> float:
    """s_1 / s_n; infinity for a rank deficient matrix."""
    s = singular_values(m)
    lo = float(s[-1])
    if lo == 0.0:
        return float("inf")
    return float(s[0]) / lo


def distance_to_span(x, basis) -> float:
    """Euclidean distance from x to the span of the basis vectors.

    basis: sequence of vectors (possibly rank deficient), or an empty
    sequence, in which case the span is {0}.
    """
    xv = np.asarray(x, dtype=float).ravel()
    vecs = [np.asarray(b, dtype=float).ravel() for b in basis]
    if not vecs:
        return float(np.linalg.norm(xv))
    if any(v.size != xv.size for v in vecs):
        raise DimensionError("basis vectors must match the dimension of x")
    b = np.stack(vecs, axis=1)  # n x k, columns span the subspace
    u, s, _ = np.linalg.svd(b, full_matrices=False)
    if s.size and s[0] > 0:
        u = u[:, s > 1e-12 * s[0]]
    else:
        return float(np.linalg.norm(xv))
    return float(np.linalg.norm(xv - u @ (u.T @ xv)))


def random_normal_vector(columns, rank_rtol: float = 1e-10) -> np.ndarray:
    """Unit vector orthogonal to n-1 given vectors in R^n.

    Raises DegenerateInputError when the vectors do not span an
    (n-1)-dimensional space (smallest singular value below rank_rtol
    times the largest).  Sign fixed so the first coordinate of
    magnitude above 1e-12 is positive.
    """
    vecs = [np.asarray(c, dtype=float).ravel() for c in columns]
    if not vecs:
        raise DimensionError("need n-1 vectors, got none")
    n = vecs[0].size
    if any(v.size != n for v in vecs):
        raise DimensionError("all vectors must live in the same R^n")
    if len(vecs) != n - 1:
        raise DimensionError("need exactly n-1 = %d vectors in R^%d, got %d" % (n - 1, n, len(vecs)))
    b = np.stack(vecs, axis=0)  # (n-1) x n
    if not np.all(np.isfinite(b)):
        raise ValidationError("non-finite entries")
    _, s, vh = np.linalg.svd(b, full_matrices=True)
    if s[0] == 0 or s[-1] < rank_rtol * s[0]:
        raise DegenerateInputError(
            "spanning vectors are rank deficient (s_min/s_max = %.3g)" % (float(s[-1] / s[0]) if s[0] else 0.0))
    z = vh[-1]
    z = z / np.linalg.norm(z)
    big = np.abs(z) > 1e-12
    lead = int(np.argmax(big)) if big.any() else 0
    if z[lead] < 0:
        z = -z
    return z
