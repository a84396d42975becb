"""Time grids and contiguous windows on them."""

from dataclasses import dataclass, field

import numpy as np

from .exceptions import InvalidDataError, WindowIndexError

SPACING_RTOL = 1e-9


def _readonly(a):
    a = np.array(a, dtype=float)
    a.setflags(write=False)
    return a


@dataclass(frozen=True, eq=False)
class Grid:
    """Ordered, equally spaced time points ``t_1 < ... < t_p``.

    Parameters
    ----------
    points : array_like
        Strictly increasing, equally spaced time points.
    domain_length : float, optional
        Measure of the underlying domain. Defaults to the grid extent
        ``t_p - t_1``; may be set larger (never smaller).

    Notes
    -----
    A single-point grid is accepted only with an explicit ``domain_length``;
    such grids arise when parameters are restricted to a one-point window.
    """

    points: np.ndarray
    domain_length: float = None

    def __post_init__(self):
        pts = _readonly(self.points)
        if pts.ndim != 1 or pts.size == 0:
            raise InvalidDataError("grid points must be a non-empty 1-d array")
        if not np.all(np.isfinite(pts)):
            raise InvalidDataError("grid points must be finite")
        if pts.size >= 2:
            steps = np.diff(pts)
            if np.any(steps <= 0):
                raise InvalidDataError("grid points must be strictly increasing")
            h = (pts[-1] - pts[0]) / (pts.size - 1)
            if np.max(np.abs(steps - h)) > SPACING_RTOL * h:
                raise InvalidDataError(
                    "grid points must be equally spaced (relative tolerance 1e-9)"
                )
        extent = float(pts[-1] - pts[0])
        lam = self.domain_length
        if lam is None:
            if pts.size < 2:
                raise InvalidDataError("a single-point grid needs an explicit domain_length")
            lam = extent
        lam = float(lam)
        if not lam > 0 or lam < extent * (1 - SPACING_RTOL):
            raise InvalidDataError(
                f"domain_length {lam} must be positive and at least the grid extent {extent}"
            )
        object.__setattr__(self, "points", pts)
        object.__setattr__(self, "domain_length", lam)

    @classmethod
    def indices(cls, p):
        """Unit-spaced grid ``0, 1, ..., p-1`` with ``domain_length = p - 1``."""
        return cls(np.arange(p, dtype=float))

    @classmethod
    def uniform(cls, start, stop, p, endpoint=True, domain_length=None):
        """``p`` equally spaced points on ``[start, stop]`` (or ``[start, stop)``)."""
        return cls(np.linspace(start, stop, p, endpoint=endpoint), domain_length)

    @property
    def p(self):
        return self.points.size

    def __len__(self):
        return self.points.size

    @property
    def extent(self):
        return float(self.points[-1] - self.points[0])

    @property
    def spacing(self):
        if self.p < 2:
            return self.domain_length
        return self.extent / (self.p - 1)

    def sub(self, start, size):
        """Sub-grid of ``size`` points from index ``start``; keeps ``domain_length``."""
        return Grid(self.points[start:start + size], self.domain_length)

    def __eq__(self, other):
        if not isinstance(other, Grid):
            return NotImplemented
        return (
            self.p == other.p
            and self.domain_length == other.domain_length
            and np.array_equal(self.points, other.points)
        )

    def __hash__(self):
        return hash((self.p, self.domain_length, self.points.tobytes()))

    def __repr__(self):
        return (
            f"Grid(p={self.p}, t=[{self.points[0]:g}, {self.points[-1]:g}], "
            f"domain_length={self.domain_length:g})"
        )


@dataclass(frozen=True)
class Window:
    """Contiguous index range ``[start, start + size)`` on a grid.

    The window is the ball ``B(center, radius)`` in time, where ``center``
    is the midpoint of its first and last time points and ``radius`` half
    their distance.
    """

    grid: Grid = field(repr=False)
    start: int
    size: int

    def __post_init__(self):
        start, size = int(self.start), int(self.size)
        if size < 1 or start < 0 or start + size > self.grid.p:
            raise WindowIndexError(
                f"window start={start}, size={size} does not fit a grid of {self.grid.p} points"
            )
        object.__setattr__(self, "start", start)
        object.__setattr__(self, "size", size)

    @property
    def stop(self):
        """One past the last index."""
        return self.start + self.size

    @property
    def end(self):
        """Last index (inclusive)."""
        return self.start + self.size - 1

    @property
    def indices(self):
        return np.arange(self.start, self.stop)

    @property
    def slice(self):
        return slice(self.start, self.stop)

    @property
    def start_time(self):
        return float(self.grid.points[self.start])

    @property
    def end_time(self):
        return float(self.grid.points[self.end])

    @property
    def length(self):
        """``len(A) = max t - min t`` over the window."""
        return self.end_time - self.start_time

    @property
    def center(self):
        return 0.5 * (self.start_time + self.end_time)

    @property
    def radius(self):
        return 0.5 * self.length

    @property
    def center_index(self):
        """Center in (possibly fractional) grid-index units."""
        return self.start + 0.5 * (self.size - 1)

    def contains_index(self, i):
        return self.start <= i < self.stop

    def overlaps(self, other):
        return self.start < other.stop and other.start < self.stop

    def to_dict(self):
        return {
            "start_index": self.start,
            "size": self.size,
            "end_index": self.end,
            "start_time": self.start_time,
            "end_time": self.end_time,
            "center": self.center,
            "center_index": self.center_index,
            "radius": self.radius,
        }
