"""Search for the interval of maximal local KL divergence.

Candidate intervals are contiguous windows whose length does not exceed
``c * domain_length``. By default only windows of the largest admissible
size are searched (one per start index); ``maximal_only=False`` also
searches every shorter window.

Ties are resolved in favour of the first candidate in enumeration order
(the smallest start index for maximal windows). Values within a relative
``1e-12`` of the maximum count as ties, so that mathematically equal
values that differ only by rounding resolve the same way everywhere.
"""

import math
from dataclasses import dataclass

import numpy as np

from .divergence import KLValue, kl_from_arrays
from .exceptions import ParameterError, ShapeError, SingularMatrixError
from .grid import Window

TIE_RTOL = 1e-12


def _check_c(c):
    c = float(c)
    if not 0.0 < c <= 1.0:
        raise ParameterError(f"length fraction c must lie in (0, 1], got {c}")
    return c


def max_window_size(c, grid):
    """Largest ``k`` with ``(k - 1) * spacing <= c * domain_length``.

    With the default ``domain_length`` (the grid extent) this is
    ``floor(c * (p - 1)) + 1``; it never exceeds ``p``.
    """
    c = _check_c(c)
    if grid.p == 1:
        return 1
    steps = c * grid.domain_length / grid.spacing
    k = math.floor(steps * (1 + 1e-12) + 1e-9) + 1
    return min(k, grid.p)


def enumerate_windows(c, grid, maximal_only=True):
    """All candidate windows for the length fraction ``c``.

    Maximal windows come ordered by start index. With ``maximal_only=False``
    every size from the maximal one down to 1 is listed, largest size
    first, each size ordered by start.
    """
    k = max_window_size(c, grid)
    sizes = [k] if maximal_only else range(k, 0, -1)
    return [Window(grid, s, size) for size in sizes for s in range(grid.p - size + 1)]


def first_argmax(values):
    """Index of the first value within ``TIE_RTOL`` of the maximum."""
    values = np.asarray(values, dtype=float)
    top = float(np.max(values))
    tol = TIE_RTOL * max(abs(top), 1.0)
    return int(np.flatnonzero(values >= top - tol)[0])


def _window_value(x, y, window, symmetrized):
    sl = window.slice
    mx, my = x.mean[sl], y.mean[sl]
    cx, cy = x.cov[sl, sl], y.cov[sl, sl]
    try:
        value = kl_from_arrays(mx, cx, my, cy)
        if symmetrized:
            value = 0.5 * (value + kl_from_arrays(my, cy, mx, cx))
    except SingularMatrixError as err:
        raise SingularMatrixError(
            f"{err} on window [{window.start}, {window.end}]; "
            "increase shrinkage (eta < 1) or add jitter",
            minor=err.minor,
            which=err.which,
            window=window,
        ) from None
    return value


def evaluate_windows(x, y, windows, symmetrized=False):
    """Local KL value of every window, as a float array."""
    if not x.same_grid(y):
        raise ShapeError("the two Gaussian laws live on different grids")
    return np.array([_window_value(x, y, w, symmetrized) for w in windows])


@dataclass(frozen=True)
class KLProfile:
    """Local KL value of every candidate window."""

    windows: tuple
    values: np.ndarray
    argmax_index: int

    @property
    def centers(self):
        return np.array([w.center for w in self.windows])

    @property
    def center_indices(self):
        return np.array([w.center_index for w in self.windows])

    @property
    def best_window(self):
        return self.windows[self.argmax_index]

    @property
    def best_value(self):
        return KLValue(float(self.values[self.argmax_index]), self.best_window)

    def __len__(self):
        return len(self.windows)


def kl_profile(x, y, c, maximal_only=True, symmetrized=False):
    """Local KL over all candidate windows for ``c``.

    With maximal windows this is the KL curve indexed by window center.
    """
    windows = enumerate_windows(c, x.grid, maximal_only)
    values = evaluate_windows(x, y, windows, symmetrized)
    values.setflags(write=False)
    return KLProfile(tuple(windows), values, first_argmax(values))


def select_interval(x, y, c, maximal_only=True, symmetrized=False):
    """Exhaustive search for the window of maximal local KL divergence.

    Returns
    -------
    window : Window
    value : KLValue
        The attained maximum.
    """
    prof = kl_profile(x, y, c, maximal_only, symmetrized)
    return prof.best_window, prof.best_value


@dataclass(frozen=True)
class SequentialSelection:
    """Disjoint intervals in selection order.

    ``stopped_early`` is true when fewer than the requested number of
    intervals could be placed.
    """

    intervals: list
    requested: int

    @property
    def stopped_early(self):
        return len(self.intervals) < self.requested

    @property
    def windows(self):
        return [w for w, _ in self.intervals]

    def __iter__(self):
        return iter(self.intervals)

    def __len__(self):
        return len(self.intervals)

    def __getitem__(self, i):
        return self.intervals[i]


def sequential_select(x, y, c, num_intervals, maximal_only=True, symmetrized=False):
    """Select up to ``num_intervals`` disjoint windows, best first.

    Each step takes the best candidate that does not overlap any window
    already chosen.
    """
    if int(num_intervals) < 1:
        raise ParameterError("num_intervals must be at least 1")
    prof = kl_profile(x, y, c, maximal_only, symmetrized)
    values = np.array(prof.values)
    available = np.ones(len(values), dtype=bool)
    chosen = []
    while len(chosen) < num_intervals and available.any():
        masked = np.where(available, values, -np.inf)
        i = first_argmax(masked)
        w = prof.windows[i]
        chosen.append((w, KLValue(float(values[i]), w)))
        for j, other in enumerate(prof.windows):
            if available[j] and other.overlaps(w):
                available[j] = False
    return SequentialSelection(chosen, int(num_intervals))
