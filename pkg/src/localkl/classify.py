"""Gaussian discriminant analysis restricted to a selected window."""

from dataclasses import dataclass
from functools import cached_property

import numpy as np
from scipy.linalg import solve_triangular

from .exceptions import InvalidDataError, ParameterError, ShapeError, SingularMatrixError
from .gaussian import SampleSet, cholesky, estimate_params, logdet_from_cholesky, restrict, shrink_covariance
from .grid import Grid, Window
from .inference import replicate_rngs
from .selection import select_interval

MAX_SPLIT_RETRIES = 100


@dataclass(frozen=True, eq=False)
class LabeledSamples:
    """Curves on a common grid with a group label per row.

    The group passed first to the divergence (``X``) is ``x_label``; by
    default the lexicographically smaller of the two labels.
    """

    grid: Grid
    rows: np.ndarray
    labels: np.ndarray
    x_label: str = None
    y_label: str = None

    def __post_init__(self):
        rows = np.array(self.rows, dtype=float)
        labels = np.array([str(v) for v in np.asarray(self.labels).reshape(-1)], dtype=object)
        if rows.ndim != 2 or rows.shape[1] != self.grid.p:
            raise ShapeError(f"rows must be N x {self.grid.p}")
        if labels.size != rows.shape[0]:
            raise ShapeError("one label per row is required")
        if not np.all(np.isfinite(rows)):
            raise InvalidDataError("rows must be finite")
        found = sorted(set(labels))
        if len(found) > 2:
            raise InvalidDataError(f"expected two groups, found labels {found}")
        x_label = None if self.x_label is None else str(self.x_label)
        y_label = None if self.y_label is None else str(self.y_label)
        if x_label is None:
            rest = [v for v in found if v != y_label]
            x_label = rest[0] if rest else None
        if y_label is None:
            rest = [v for v in found if v != x_label]
            y_label = rest[0] if rest else None
        unknown = set(found) - {x_label, y_label}
        if unknown:
            raise InvalidDataError(f"labels {sorted(unknown)} match neither group")
        rows.setflags(write=False)
        object.__setattr__(self, "rows", rows)
        object.__setattr__(self, "labels", labels)
        object.__setattr__(self, "x_label", x_label)
        object.__setattr__(self, "y_label", y_label)

    @classmethod
    def from_groups(cls, dx, dy, x_label="X", y_label="Y"):
        rows = np.vstack([dx.rows, dy.rows])
        labels = [x_label] * dx.n + [y_label] * dy.n
        return cls(dx.grid, rows, labels, x_label, y_label)

    @property
    def N(self):
        return self.rows.shape[0]

    @property
    def is_x(self):
        return self.labels == self.x_label

    def subset(self, idx):
        return LabeledSamples(self.grid, self.rows[idx], self.labels[idx], self.x_label, self.y_label)

    def groups(self):
        """The two groups as ``(dx, dy)`` sample sets."""
        mask = self.is_x
        if mask.all() or not mask.any():
            raise InvalidDataError("both groups must be non-empty")
        return SampleSet(self.grid, self.rows[mask]), SampleSet(self.grid, self.rows[~mask])


@dataclass(frozen=True, eq=False)
class DAModel:
    """Per-group Gaussian laws on a window plus the prior of group X."""

    window: Window
    params_x: object
    params_y: object
    prior_x: float
    x_label: str = "X"
    y_label: str = "Y"

    def __post_init__(self):
        if not 0.0 < self.prior_x < 1.0:
            raise ParameterError("prior_x must lie in (0, 1)")

    @property
    def prior_y(self):
        return 1.0 - self.prior_x

    @cached_property
    def _factors(self):
        return (
            cholesky(self.params_x.cov, which="x"),
            cholesky(self.params_y.cov, which="y"),
        )

    def swapped(self):
        """Same model with the roles of X and Y exchanged."""
        return DAModel(
            self.window, self.params_y, self.params_x, self.prior_y, self.y_label, self.x_label
        )


def train_da(train, window, eta=1.0, prior_x=None, params=None):
    """Fit group means and covariances on ``window``.

    Parameters are estimated on the full grid, shrunk by ``eta`` and then
    restricted, which is identical to fitting on the window columns.
    ``prior_x`` defaults to the training proportion of group X.
    ``params`` may pass precomputed full-grid ``(x, y)`` estimates.
    """
    dx, dy = train.groups()
    if dx.n < 2 or dy.n < 2:
        raise InvalidDataError("each group needs at least two training curves")
    if params is None:
        params = (
            shrink_covariance(estimate_params(dx), eta),
            shrink_covariance(estimate_params(dy), eta),
        )
    x, y = params
    if prior_x is None:
        prior_x = dx.n / train.N
    model = DAModel(
        window, restrict(x, window), restrict(y, window), float(prior_x), train.x_label, train.y_label
    )
    try:
        model._factors
    except SingularMatrixError as err:
        raise SingularMatrixError(
            f"cannot train on window [{window.start}, {window.end}]: {err}",
            minor=err.minor, which=err.which, window=window,
        ) from None
    return model


def _half_quad(factor, diff):
    z = solve_triangular(factor, diff.T, lower=True, check_finite=False)
    return np.einsum("ij,ij->j", z, z)


def discriminant_score(model, z):
    """Quadratic discriminant score; positive means group X.

    ``z`` is one curve on the window (length ``window.size``) or a 2-d
    array of such curves.
    """
    z = np.asarray(z, dtype=float)
    single = z.ndim == 1
    z2 = np.atleast_2d(z)
    if z2.ndim != 2 or z2.shape[1] != model.window.size:
        raise ShapeError(f"expected curves of length {model.window.size}, got shape {z.shape}")
    lx, ly = model._factors
    qy = _half_quad(ly, z2 - model.params_y.mean)
    qx = _half_quad(lx, z2 - model.params_x.mean)
    logdet_ratio = logdet_from_cholesky(lx) - logdet_from_cholesky(ly)
    score = 0.5 * (qy - qx - logdet_ratio) + np.log(model.prior_x / model.prior_y)
    return float(score[0]) if single else score


def predict_is_x(model, rows):
    """Classify full-grid rows; a score of exactly 0 goes to X."""
    rows = np.atleast_2d(rows)
    return discriminant_score(model, rows[:, model.window.slice]) >= 0.0


def estimate_error(model, test):
    """Misclassification rate on labelled full-grid curves."""
    if test.N == 0:
        raise InvalidDataError("test set is empty")
    predicted_x = predict_is_x(model, test.rows)
    truth_x = test.labels == model.x_label
    return float(np.mean(predicted_x != truth_x))


@dataclass(frozen=True)
class CVResult:
    """Errors of every candidate ``c`` on every random split."""

    c_candidates: np.ndarray
    errors: np.ndarray  # (len(c_candidates), B)
    windows: list  # per split, list of selected windows per c

    @property
    def mean_errors(self):
        return self.errors.mean(axis=1)

    @property
    def best_c(self):
        m = self.mean_errors
        return float(self.c_candidates[int(np.flatnonzero(m == m.min())[0])])


def _draw_split(rng, data, split_fraction):
    n_train = int(round(split_fraction * data.N))
    if not 0 < n_train < data.N:
        raise ParameterError("split leaves an empty training or test set")
    is_x = data.is_x
    for _ in range(MAX_SPLIT_RETRIES):
        perm = rng.permutation(data.N)
        train, test = perm[:n_train], perm[n_train:]
        n_x = int(is_x[train].sum())
        if n_x >= 2 and n_train - n_x >= 2:
            return train, test
    raise InvalidDataError(
        f"could not draw a split with two training curves per group in {MAX_SPLIT_RETRIES} tries"
    )


def select_c_cv(
    data,
    c_candidates,
    split_fraction=0.5,
    B=100,
    seed=0,
    eta=1.0,
    prior_x=None,
    maximal_only=True,
    symmetrized=False,
):
    """Choose ``c`` by repeated random train/test splits.

    For each split the interval is selected and the discriminant fitted on
    the training part, then scored on the test part. Every candidate sees
    the same splits. The best ``c`` has the lowest mean test error, ties
    going to the smallest ``c``.

    Returns
    -------
    CVResult
    """
    cs = np.sort(np.asarray(c_candidates, dtype=float).reshape(-1))
    if cs.size == 0:
        raise ParameterError("c_candidates is empty")
    if not 0.0 < split_fraction < 1.0:
        raise ParameterError("split_fraction must lie in (0, 1)")
    errors = np.empty((cs.size, int(B)))
    windows = []
    for b, rng in enumerate(replicate_rngs(seed, int(B))):
        tr, te = _draw_split(rng, data, split_fraction)
        train, test = data.subset(tr), data.subset(te)
        dx, dy = train.groups()
        x = shrink_covariance(estimate_params(dx), eta)
        y = shrink_covariance(estimate_params(dy), eta)
        chosen = []
        for i, c in enumerate(cs):
            w, _ = select_interval(x, y, c, maximal_only, symmetrized)
            model = train_da(train, w, eta, prior_x, params=(x, y))
            errors[i, b] = estimate_error(model, test)
            chosen.append(w)
        windows.append(chosen)
    return CVResult(cs, errors, windows)
