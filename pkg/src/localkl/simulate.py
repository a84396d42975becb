"""Synthetic Fourier-basis scenarios and the Monte Carlo / timing studies.

Curves are ``X(t) = (beta + eps + gamma * bump(t))^T Phi(t)`` with
``Phi`` the first nine Fourier functions on ``[0, pi]``, ``eps ~ N(0,
eps_var I)`` and, for the X group of scenarios B and C, ``gamma ~ N(0,
tau2 I)`` modulated by ``bump(t) = exp(-(t - bump_center)^2)``.

Scenario A differs in mean only, B in covariance only, C in both.

Every scenario covariance has rank at most 18 (9 in scenario A), so on a
grid of p points any window longer than that has a singular covariance,
both in the population and in samples of any size. The studies therefore
shrink every covariance, population and estimate alike, with ``eta < 1``
(:data:`DEFAULT_ETA`); the true interval is the argmax under the shrunk
population law, which is what the shrunk estimator converges to.
"""

import csv
import math
import time
from dataclasses import dataclass, field, replace

import numpy as np

from .exceptions import ParameterError, SingularMatrixError, TooManyFailuresError
from .gaussian import GaussianParams, SampleSet, estimate_params, shrink_covariance
from .grid import Grid
from .selection import select_interval

BETA_X = (1.0, -2.0, -1.0, 1.0, 2.0, -1.0, 2.0, 3.0, -0.5)
BETA_Y = (-1.0, -2.0, -1.0, 1.0, 2.0, -1.0, 2.0, 5.0, -0.5)
DOMAIN_LENGTH = math.pi
SCENARIOS = ("A", "B", "C")
DEFAULT_C_GRID = tuple(np.round(np.arange(1, 20) * 0.05, 2))
DEFAULT_ETA = 0.9

AIJD_HEADER = ("scenario", "n", "p", "replicate", "aijd")
TIMING_HEADER = ("scenario", "n", "p", "c", "seconds")


def simulation_grid(p):
    """``p`` points ``k * pi / p`` (k = 0..p-1) on a domain of length pi."""
    return Grid(np.arange(p) * (DOMAIN_LENGTH / p), DOMAIN_LENGTH)


def fourier_basis(t, count=9, domain_length=DOMAIN_LENGTH):
    """First ``count`` Fourier functions, orthonormal on ``[0, domain_length]``.

    Ordering is ``1, sin(w t), cos(w t), sin(2 w t), cos(2 w t), ...`` with
    ``w = 2 pi / domain_length``.

    Returns
    -------
    ndarray
        Shape ``(count,)`` for scalar ``t``, ``(len(t), count)`` otherwise.
    """
    t_arr = np.asarray(t, dtype=float)
    flat = t_arr.reshape(-1)
    lam = float(domain_length)
    out = np.empty((flat.size, count))
    out[:, 0] = 1.0 / math.sqrt(lam)
    amp = math.sqrt(2.0 / lam)
    for i in range(1, count):
        j = (i + 1) // 2
        arg = 2.0 * math.pi * j * flat / lam
        out[:, i] = amp * (np.sin(arg) if i % 2 else np.cos(arg))
    return out[0] if t_arr.ndim == 0 else out


@dataclass(frozen=True, eq=False)
class ScenarioSpec:
    """Generative description of one simulation scenario."""

    scenario: str
    beta_x: np.ndarray
    beta_y: np.ndarray
    grid: Grid = field(repr=False)
    eps_var: float = 0.25
    tau2: float = 1.0
    bump_center: float = 3 * math.pi / 4
    seed: int = 0

    def __post_init__(self):
        if self.scenario not in SCENARIOS:
            raise ParameterError(f"scenario must be one of {SCENARIOS}")
        bx = np.array(self.beta_x, dtype=float)
        by = np.array(self.beta_y, dtype=float)
        if bx.shape != (9,) or by.shape != (9,):
            raise ParameterError("beta vectors must have length 9")
        if not self.eps_var > 0 or self.tau2 < 0:
            raise ParameterError("need eps_var > 0 and tau2 >= 0")
        bx.setflags(write=False)
        by.setflags(write=False)
        object.__setattr__(self, "beta_x", bx)
        object.__setattr__(self, "beta_y", by)

    @property
    def has_bump(self):
        return self.scenario in ("B", "C")

    @property
    def p(self):
        return self.grid.p

    def with_p(self, p):
        return replace(self, grid=simulation_grid(p))


def make_scenario(name, p=100, seed=0, **overrides):
    """Scenario A, B or C with the standard coefficients on a ``p``-point grid."""
    name = name.upper()
    beta_y = BETA_X if name == "B" else BETA_Y
    kwargs = dict(scenario=name, beta_x=BETA_X, beta_y=beta_y, grid=simulation_grid(p), seed=seed)
    kwargs.update(overrides)
    return ScenarioSpec(**kwargs)


def _design(spec):
    t = spec.grid.points
    return fourier_basis(t), np.exp(-((t - spec.bump_center) ** 2))


def sample_scenario(spec, n, m, rng=None):
    """Draw ``n`` X-curves and ``m`` Y-curves on the scenario grid.

    Uses ``rng`` when given, otherwise a generator seeded by ``spec.seed``.
    """
    if n < 1 or m < 1:
        raise ParameterError("n and m must be at least 1")
    if rng is None:
        rng = np.random.default_rng(spec.seed)
    phi, bump = _design(spec)
    sd = math.sqrt(spec.eps_var)
    coef_x = spec.beta_x + sd * rng.standard_normal((n, 9))
    x = coef_x @ phi.T
    if spec.has_bump:
        gamma = math.sqrt(spec.tau2) * rng.standard_normal((n, 9))
        x += (gamma @ phi.T) * bump
    coef_y = spec.beta_y + sd * rng.standard_normal((m, 9))
    y = coef_y @ phi.T
    return SampleSet(spec.grid, x), SampleSet(spec.grid, y)


def true_params(spec):
    """Population mean and covariance of both groups on the grid."""
    phi, bump = _design(spec)
    gram = phi @ phi.T
    cov_y = spec.eps_var * gram
    cov_x = cov_y.copy()
    if spec.has_bump:
        cov_x = cov_x + spec.tau2 * np.outer(bump, bump) * gram
    return (
        GaussianParams(spec.grid, phi @ spec.beta_x, cov_x),
        GaussianParams(spec.grid, phi @ spec.beta_y, cov_y),
    )


def true_interval(spec, c, eta=DEFAULT_ETA, maximal_only=True):
    """Interval of maximal local KL under the (shrunk) population laws."""
    x, y = true_params(spec)
    w, _ = select_interval(shrink_covariance(x, eta), shrink_covariance(y, eta), c, maximal_only)
    return w


def jaccard_distance(a, b):
    """``1 - |a & b| / |a | b|`` for the index sets of two windows."""
    inter = max(0, min(a.stop, b.stop) - max(a.start, b.start))
    union = a.size + b.size - inter
    return 1.0 - inter / union


def _check_c_grid(c_grid):
    cs = np.asarray(c_grid, dtype=float)
    if cs.size < 2 or np.any(cs <= 0) or np.any(cs >= 1):
        raise ParameterError("c_grid needs at least two values inside (0, 1)")
    steps = np.diff(cs)
    if np.any(steps <= 0) or not np.allclose(steps, steps[0], rtol=1e-6):
        raise ParameterError("c_grid must be uniform and increasing")
    return cs


def integrated_jaccard(truth, estimate, c_grid):
    """Trapezoid average over ``c`` of the Jaccard distances."""
    cs = _check_c_grid(c_grid)
    d = np.array([jaccard_distance(a, b) for a, b in zip(truth, estimate)])
    return float(np.trapezoid(d, cs) / (cs[-1] - cs[0]))


def aijd(spec, n, m, c_grid=DEFAULT_C_GRID, seed=None, eta=DEFAULT_ETA, truth=None, estimator=None):
    """Integrated Jaccard distance of one simulated dataset.

    Parameters
    ----------
    spec : ScenarioSpec
    n, m : int
        Group sizes.
    c_grid : sequence of float
        Uniform grid of length fractions inside (0, 1).
    seed : int, SeedSequence or None
        Data seed; ``None`` uses ``spec.seed``.
    eta : float
        Shrinkage for estimates and population alike.
    truth : list of Window, optional
        Precomputed true intervals, one per ``c``.
    estimator : callable, optional
        ``estimator(x_hat, y_hat, c) -> Window`` replacing the default
        exhaustive search.
    """
    cs = _check_c_grid(c_grid)
    if truth is None:
        truth = [true_interval(spec, c, eta) for c in cs]
    rng = np.random.default_rng(spec.seed if seed is None else seed)
    dx, dy = sample_scenario(spec, n, m, rng)
    x = shrink_covariance(estimate_params(dx), eta)
    y = shrink_covariance(estimate_params(dy), eta)
    if estimator is None:
        estimates = [select_interval(x, y, c)[0] for c in cs]
    else:
        estimates = [estimator(x, y, c) for c in cs]
    return integrated_jaccard(truth, estimates, cs)


def replicate_seed(seed, scenario, n, p, replicate):
    """Seed stream for one Monte Carlo replicate, independent of run order."""
    return np.random.SeedSequence([int(seed), SCENARIOS.index(scenario), int(n), int(p), int(replicate)])


@dataclass
class MonteCarloReport:
    """Per-replicate AIJD values of a Monte Carlo run."""

    rows: list  # tuples matching AIJD_HEADER
    failures: dict

    def values(self, scenario, n, p):
        return np.array([r[4] for r in self.rows if r[:3] == (scenario, n, p)])

    def summary(self):
        """Quartiles and mean of the AIJD per (scenario, n, p)."""
        keys = sorted({r[:3] for r in self.rows}, key=lambda k: (k[0], k[2], k[1]))
        out = []
        for key in keys:
            v = self.values(*key)
            q1, med, q3 = np.quantile(v, [0.25, 0.5, 0.75])
            out.append(
                dict(scenario=key[0], n=key[1], p=key[2], replicates=v.size,
                     failed=self.failures.get(key, 0), mean=float(v.mean()),
                     q1=float(q1), median=float(med), q3=float(q3))
            )
        return out

    def median(self, scenario, n, p):
        return float(np.median(self.values(scenario, n, p)))

    def to_csv(self, path):
        with open(path, "w", newline="") as fh:
            w = csv.writer(fh, lineterminator="\n")
            w.writerow(AIJD_HEADER)
            for s, n, p, r, v in self.rows:
                w.writerow([s, n, p, r, repr(float(v))])


def monte_carlo_run(scenarios, n_list, p_list, M, c_grid=DEFAULT_C_GRID, seed=0, eta=DEFAULT_ETA,
                    max_failure_rate=0.1):
    """AIJD over ``M`` replicates for every scenario, sample size and grid size.

    ``m = n`` throughout. Replicates whose covariance cannot be factorised
    are counted per cell instead of aborting the run.
    """
    if int(M) < 1:
        raise ParameterError("M must be at least 1")
    cs = _check_c_grid(c_grid)
    rows, failures = [], {}
    for scenario in scenarios:
        for p in p_list:
            spec = make_scenario(scenario, p=p, seed=seed)
            truth = [true_interval(spec, c, eta) for c in cs]
            for n in n_list:
                key = (scenario, int(n), int(p))
                for r in range(int(M)):
                    try:
                        v = aijd(spec, n, n, cs, replicate_seed(seed, scenario, n, p, r), eta, truth)
                    except SingularMatrixError:
                        failures[key] = failures.get(key, 0) + 1
                        continue
                    rows.append(key + (r, v))
                if failures.get(key, 0) > max_failure_rate * M:
                    raise TooManyFailuresError(f"{failures[key]} of {M} replicates failed for {key}")
    return MonteCarloReport(rows, failures)


def timing_benchmark(spec, n, p, c_list, repeats=5, eta=DEFAULT_ETA):
    """Wall-clock seconds of the interval search for each ``c``.

    Estimation happens once, outside the timed region; each entry is the
    mean over ``repeats`` runs.
    """
    spec = spec.with_p(p) if spec.p != p else spec
    dx, dy = sample_scenario(spec, n, n)
    x = shrink_covariance(estimate_params(dx), eta)
    y = shrink_covariance(estimate_params(dy), eta)
    rows = []
    for c in c_list:
        elapsed = []
        for _ in range(int(repeats)):
            t0 = time.perf_counter()
            select_interval(x, y, c)
            elapsed.append(time.perf_counter() - t0)
        rows.append((spec.scenario, int(n), int(p), float(c), float(np.mean(elapsed))))
    return rows


def write_timing_csv(rows, path):
    with open(path, "w", newline="") as fh:
        w = csv.writer(fh, lineterminator="\n")
        w.writerow(TIMING_HEADER)
        for s, n, p, c, sec in rows:
            w.writerow([s, n, p, c, repr(sec)])
