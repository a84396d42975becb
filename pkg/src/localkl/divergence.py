"""Kullback-Leibler divergences between Gaussian laws on a grid.

All multivariate values go through Cholesky factors: the trace term is the
squared Frobenius norm of ``L_Y^{-1} L_X``, the Mahalanobis term a
triangular solve, and the log-determinants the log-diagonals of the
factors. No explicit inverse or raw determinant is ever formed.
"""

from dataclasses import dataclass

import numpy as np
from scipy.linalg import eigh, solve_triangular

from .exceptions import NumericalConsistencyError, ParameterError, ShapeError
from .gaussian import cholesky, logdet_from_cholesky, restrict

NEGATIVE_TOL = 1e-10


@dataclass(frozen=True)
class KLValue:
    """A divergence value in nats, optionally tagged with its window."""

    value: float
    window: object = None

    def __float__(self):
        return float(self.value)


def _clamp(value):
    if value < 0.0:
        if value < -NEGATIVE_TOL:
            raise NumericalConsistencyError(
                f"KL divergence evaluated to {value:.3e} < 0; the covariance inputs are inconsistent"
            )
        return 0.0
    return float(value)


def kl_univariate(mu_x, var_x, mu_y, var_y):
    """KL(N(mu_x, var_x) || N(mu_y, var_y)) for scalar Gaussians."""
    if not (var_x > 0 and var_y > 0):
        raise ParameterError("variances must be positive")
    ratio = var_x / var_y
    value = 0.5 * (ratio - 1.0 + (mu_x - mu_y) ** 2 / var_y - np.log(ratio))
    return _clamp(value)


def kl_from_arrays(mu_x, cov_x, mu_y, cov_y):
    """Directed KL between ``N(mu_x, cov_x)`` and ``N(mu_y, cov_y)``.

    Works on plain arrays; raises :class:`SingularMatrixError` tagged
    ``which="y"`` or ``"x"`` when a covariance is not positive definite.
    """
    ly = cholesky(cov_y, which="y")
    lx = cholesky(cov_x, which="x")
    k = ly.shape[0]
    m = solve_triangular(ly, lx, lower=True, check_finite=False)
    trace = float(np.einsum("ij,ij->", m, m))
    z = solve_triangular(ly, mu_y - mu_x, lower=True, check_finite=False)
    maha = float(z @ z)
    value = 0.5 * (trace - k + maha + logdet_from_cholesky(ly) - logdet_from_cholesky(lx))
    return _clamp(value)


def _check_pair(x, y):
    if not x.same_grid(y):
        raise ShapeError("the two Gaussian laws live on different grids")


def kl_full(x, y):
    """Directed KL divergence ``KL(X || Y)`` over the whole grid."""
    _check_pair(x, y)
    return KLValue(kl_from_arrays(x.mean, x.cov, y.mean, y.cov))


def kl_local(x, y, window):
    """Directed KL divergence restricted to a window."""
    _check_pair(x, y)
    xa, ya = restrict(x, window), restrict(y, window)
    return KLValue(kl_from_arrays(xa.mean, xa.cov, ya.mean, ya.cov), window)


def kl_symmetrized(x, y, window=None):
    """``KL(X||Y)/2 + KL(Y||X)/2``, on a window or on the whole grid."""
    _check_pair(x, y)
    if window is not None:
        x, y = restrict(x, window), restrict(y, window)
    forward = kl_from_arrays(x.mean, x.cov, y.mean, y.cov)
    backward = kl_from_arrays(y.mean, y.cov, x.mean, x.cov)
    return KLValue(0.5 * (forward + backward), window)


def kl_eigen_oracle(x, y):
    """KL through the eigenvalues of ``Sigma_Y^{-1} Sigma_X``.

    ``2 KL = sum(g - log g) - p + Delta^T Sigma_Y^{-1} Delta`` with ``g``
    the generalised eigenvalues of the pencil ``(Sigma_X, Sigma_Y)``.
    Independent of :func:`kl_full`; meant as a test oracle.
    """
    _check_pair(x, y)
    gammas = eigh(x.cov, y.cov, eigvals_only=True)
    if np.any(gammas <= 0):
        raise ParameterError("Sigma_X must be positive definite")
    delta = y.mean - x.mean
    maha = float(delta @ np.linalg.solve(y.cov, delta))
    return 0.5 * (float(np.sum(gammas - np.log(gammas))) - x.p + maha)
