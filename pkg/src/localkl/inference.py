"""Nonparametric bootstrap for the center of the selected interval."""

import logging
from dataclasses import dataclass

import numpy as np

from .exceptions import ParameterError, SingularMatrixError, TooManyFailuresError
from .gaussian import add_jitter, estimate_params, shrink_covariance
from .selection import max_window_size, select_interval

log = logging.getLogger(__name__)

MAX_FAILURE_RATE = 0.10


def resample_with_replacement(rng, n):
    return rng.integers(0, n, size=n)


def identity_resampler(rng, n):
    """Return the sample unchanged (useful to check the bootstrap plumbing)."""
    return np.arange(n)


@dataclass(frozen=True)
class BootstrapResult:
    """Bootstrap distribution of the interval center.

    ``centers`` holds one entry per successful replicate; ``n_failed``
    counts replicates whose covariance could not be factorised.
    """

    centers: np.ndarray
    point_estimate: object
    c: float
    B: int
    seed: int
    n_failed: int = 0

    @property
    def radius(self):
        """Ball radius ``r_c``, fixed from the point estimate."""
        return self.point_estimate.radius

    @property
    def grid(self):
        return self.point_estimate.grid


def fit_params(dx, dy, eta=1.0, jitter=None):
    """ML estimates for both groups, shrunk by ``eta`` and optionally ridged."""
    x = shrink_covariance(estimate_params(dx), eta)
    y = shrink_covariance(estimate_params(dy), eta)
    if jitter is not None:
        x = add_jitter(x, None if jitter == "auto" else jitter)
        y = add_jitter(y, None if jitter == "auto" else jitter)
    return x, y


def replicate_rngs(seed, count):
    """Independent generators, one per replicate index, derived from ``seed``."""
    return [np.random.default_rng(s) for s in np.random.SeedSequence(seed).spawn(count)]


def bootstrap_centers(
    dx,
    dy,
    c,
    B=1000,
    seed=0,
    eta=1.0,
    jitter=None,
    maximal_only=True,
    symmetrized=False,
    resampler=resample_with_replacement,
):
    """Bootstrap distribution of the selected interval's center.

    Each replicate resamples the rows of ``dx`` and of ``dy`` independently
    with replacement (sizes preserved), re-estimates both laws and reruns
    the interval search. Replicate ``b`` draws from a generator derived from
    ``(seed, b)`` only, so results do not depend on evaluation order.

    Parameters
    ----------
    dx, dy : SampleSet
    c : float
        Length fraction in (0, 1].
    B : int
        Number of replicates.
    seed : int
    eta : float
        Covariance shrinkage applied to every replicate.
    jitter : float, "auto" or None
        Ridge added to replicate covariances; ``"auto"`` uses
        ``1e-8 * trace / p``.
    resampler : callable
        ``resampler(rng, n) -> indices``; the default draws with
        replacement.

    Raises
    ------
    TooManyFailuresError
        More than 10% of the replicates hit a singular covariance.
    """
    if int(B) < 1:
        raise ParameterError("B must be at least 1")
    if dx.n < 2 or dy.n < 2:
        raise ParameterError("each group needs at least two curves")
    x, y = fit_params(dx, dy, eta, jitter)
    point, _ = select_interval(x, y, c, maximal_only, symmetrized)

    centers = []
    failed = 0
    rngs = replicate_rngs(seed, 2 * int(B))
    for b in range(int(B)):
        bx = dx.take(resampler(rngs[2 * b], dx.n))
        by = dy.take(resampler(rngs[2 * b + 1], dy.n))
        try:
            xb, yb = fit_params(bx, by, eta, jitter)
            w, _ = select_interval(xb, yb, c, maximal_only, symmetrized)
        except SingularMatrixError as err:
            log.debug("bootstrap replicate %d failed: %s", b, err)
            failed += 1
            continue
        centers.append(w.center)
    if failed > MAX_FAILURE_RATE * B:
        raise TooManyFailuresError(
            f"{failed} of {B} bootstrap replicates had singular covariances; "
            "lower eta or add jitter"
        )
    if failed:
        log.warning("%d of %d bootstrap replicates failed and were dropped", failed, B)
    centers = np.array(centers, dtype=float)
    centers.setflags(write=False)
    return BootstrapResult(centers, point, float(c), int(B), seed, failed)


def _check_alpha(alpha):
    if not 0.0 < alpha < 1.0:
        raise ParameterError(f"alpha must lie in (0, 1), got {alpha}")


def ci_center(result, alpha=0.05):
    """Percentile interval ``[q(alpha/2), q(1 - alpha/2)]`` of the centers.

    Quantiles use linear interpolation between order statistics
    (``numpy.quantile`` default).
    """
    _check_alpha(alpha)
    if result.centers.size == 0:
        raise TooManyFailuresError("no successful bootstrap replicate")
    lo, hi = np.quantile(result.centers, [alpha / 2, 1 - alpha / 2])
    return float(lo), float(hi)


def union_of_balls(ci, radius, lower, upper):
    """``[ci_lo - r, ci_hi + r]`` clipped to ``[lower, upper]``."""
    lo, hi = ci
    return max(lo - radius, lower), min(hi + radius, upper)


def confidence_set(result, alpha=0.05):
    """Union of the balls ``B(t, r_c)`` over the center's confidence interval."""
    pts = result.grid.points
    return union_of_balls(ci_center(result, alpha), result.radius, float(pts[0]), float(pts[-1]))


def distinct_centers(c, grid):
    """Number of distinct maximal-window centers, ``p - k + 1``."""
    return grid.p - max_window_size(c, grid) + 1
