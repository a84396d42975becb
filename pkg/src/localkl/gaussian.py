"""Gaussian parameters on a grid: ML estimation, shrinkage and SPD algebra.

The covariance estimator uses the maximum likelihood normalisation ``1/n``
(not ``1/(n-1)``). For small samples this makes every covariance, and so
every KL value computed from it, differ from the unbiased version by the
factor ``(n-1)/n``.
"""

from dataclasses import dataclass

import numpy as np
from scipy.linalg import lapack, solve_triangular

from .exceptions import (
    InvalidDataError,
    ParameterError,
    ShapeError,
    SingularMatrixError,
    WindowIndexError,
)
from .grid import Grid, Window

SYMMETRY_RTOL = 1e-10


def _frozen(a):
    a = np.array(a, dtype=float)
    a.setflags(write=False)
    return a


@dataclass(frozen=True, eq=False)
class SampleSet:
    """Curves observed on a common grid, one curve per row."""

    grid: Grid
    rows: np.ndarray

    def __post_init__(self):
        rows = np.array(self.rows, dtype=float)
        if rows.ndim == 1:
            rows = rows[None, :]
        if rows.ndim != 2 or rows.shape[0] < 1:
            raise InvalidDataError("a sample set needs at least one row")
        if rows.shape[1] != self.grid.p:
            raise ShapeError(f"rows have {rows.shape[1]} columns, grid has {self.grid.p} points")
        if not np.all(np.isfinite(rows)):
            bad = np.argwhere(~np.isfinite(rows))[0]
            raise InvalidDataError(f"non-finite entry at row {bad[0]}, column {bad[1]}")
        rows.setflags(write=False)
        object.__setattr__(self, "rows", rows)

    @property
    def n(self):
        return self.rows.shape[0]

    def take(self, idx):
        """Rows ``idx`` (with repetition allowed) as a new sample set."""
        return SampleSet(self.grid, self.rows[np.asarray(idx)])


@dataclass(frozen=True, eq=False)
class GaussianParams:
    """Mean vector and covariance matrix of a Gaussian law on a grid.

    The covariance is symmetrised as ``(C + C.T) / 2`` on construction;
    matrices whose asymmetry exceeds ``1e-10`` relative to their largest
    entry are rejected. Positive definiteness is not checked here: every
    operation that needs it factorises the matrix and raises
    :class:`SingularMatrixError` on failure.
    """

    grid: Grid
    mean: np.ndarray
    cov: np.ndarray

    def __post_init__(self):
        p = self.grid.p
        mean = np.array(self.mean, dtype=float).reshape(-1)
        cov = np.array(self.cov, dtype=float)
        if mean.shape != (p,):
            raise ShapeError(f"mean has length {mean.size}, grid has {p} points")
        if cov.shape != (p, p):
            raise ShapeError(f"covariance has shape {cov.shape}, expected {(p, p)}")
        if not (np.all(np.isfinite(mean)) and np.all(np.isfinite(cov))):
            raise InvalidDataError("mean and covariance must be finite")
        scale = np.max(np.abs(cov)) if cov.size else 0.0
        if np.max(np.abs(cov - cov.T)) > SYMMETRY_RTOL * max(scale, np.finfo(float).tiny):
            raise InvalidDataError("covariance is not symmetric")
        object.__setattr__(self, "mean", _frozen(mean))
        object.__setattr__(self, "cov", _frozen(0.5 * (cov + cov.T)))

    @property
    def p(self):
        return self.grid.p

    def same_grid(self, other):
        return self.grid == other.grid


def estimate_params(samples):
    """Maximum likelihood mean and covariance of a sample set.

    ``cov = (1/n) sum_i (x_i - mean)(x_i - mean)^T``; a single row gives
    the zero matrix.

    Both sums run row by row, so each entry depends only on its own
    columns in a fixed order. Estimating on a window therefore gives
    bit-for-bit the restriction of the full-grid estimate, which BLAS
    matrix products do not guarantee.
    """
    x = samples.rows
    n, p = x.shape
    total = np.zeros(p)
    for row in x:
        total += row
    mean = total / n
    cov = np.zeros((p, p))
    for row in x - mean:
        cov += np.multiply.outer(row, row)
    cov /= n
    return GaussianParams(samples.grid, mean, cov)


def _check_eta(eta):
    eta = float(eta)
    if not 0.0 <= eta <= 1.0:
        raise ParameterError(f"shrinkage eta must lie in [0, 1], got {eta}")
    return eta


def shrink_matrix(cov, eta):
    """``eta * cov + (1 - eta) * diag(cov)`` for a plain array."""
    eta = _check_eta(eta)
    if eta == 1.0:
        return np.array(cov, dtype=float)
    out = eta * np.asarray(cov, dtype=float)
    np.fill_diagonal(out, np.diag(cov))
    return out


def shrink_covariance(params, eta):
    """Shrink the off-diagonal covariance entries towards zero by ``eta``.

    ``eta = 1`` returns the input unchanged, ``eta = 0`` keeps only the
    diagonal.
    """
    eta = _check_eta(eta)
    if eta == 1.0:
        return params
    return GaussianParams(params.grid, params.mean, shrink_matrix(params.cov, eta))


def default_jitter(cov):
    """Ridge size ``1e-8 * trace(cov) / p``."""
    cov = np.asarray(cov)
    return 1e-8 * float(np.trace(cov)) / cov.shape[0]


def add_jitter(params, delta=None):
    """Add ``delta * I`` to the covariance (default :func:`default_jitter`)."""
    if delta is None:
        delta = default_jitter(params.cov)
    if delta < 0:
        raise ParameterError("jitter must be non-negative")
    cov = params.cov + delta * np.eye(params.p)
    return GaussianParams(params.grid, params.mean, cov)


def cholesky(cov, which=None):
    """Lower Cholesky factor, raising :class:`SingularMatrixError` on failure.

    The error carries the 1-based order of the first non-positive leading
    minor.
    """
    a = np.asarray(cov, dtype=float)
    if a.ndim != 2 or a.shape[0] != a.shape[1]:
        raise ShapeError(f"expected a square matrix, got shape {a.shape}")
    factor, info = lapack.dpotrf(a, lower=1, clean=1)
    if info > 0:
        name = f" of {which}" if which else ""
        raise SingularMatrixError(
            f"covariance{name} is not positive definite "
            f"(leading minor of order {info} fails)",
            minor=int(info),
            which=which,
        )
    if info < 0:
        raise ShapeError(f"invalid argument {-info} to potrf")
    return factor


def logdet_from_cholesky(factor):
    return 2.0 * float(np.sum(np.log(np.diag(factor))))


def chol_logdet_and_solve(cov, rhs):
    """Log-determinant of an SPD matrix and the solution of ``cov @ x = rhs``.

    Parameters
    ----------
    cov : (p, p) array_like
        Symmetric positive definite matrix.
    rhs : (p,) or (p, k) array_like

    Returns
    -------
    logdet : float
        ``2 * sum(log(diag(L)))`` with ``L`` the Cholesky factor.
    solution : ndarray
        Same shape as ``rhs``.
    """
    factor = cholesky(cov)
    rhs = np.asarray(rhs, dtype=float)
    if rhs.shape[0] != factor.shape[0]:
        raise ShapeError(f"rhs has {rhs.shape[0]} rows, matrix is {factor.shape[0]}x{factor.shape[0]}")
    z = solve_triangular(factor, rhs, lower=True, check_finite=False)
    x = solve_triangular(factor, z, lower=True, trans="T", check_finite=False)
    return logdet_from_cholesky(factor), x


def restrict(params, window):
    """Mean sub-vector and principal covariance sub-matrix on a window."""
    if isinstance(window, Window):
        start, size = window.start, window.size
    else:
        start, size = window
    p = params.p
    if size < 1 or start < 0 or start + size > p:
        raise WindowIndexError(f"window start={start}, size={size} outside a grid of {p} points")
    if start == 0 and size == p:
        return params
    sl = slice(start, start + size)
    return GaussianParams(params.grid.sub(start, size), params.mean[sl], params.cov[sl, sl])
