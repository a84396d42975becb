"""Exception hierarchy shared by all modules."""

import numpy as np


class LocalKLError(Exception):
    """Base class for every error raised by :mod:`localkl`."""


class InvalidDataError(LocalKLError, ValueError):
    """Input data is malformed: non-finite entries, bad CSV rows, empty groups."""


class ParameterError(LocalKLError, ValueError):
    """A numeric parameter lies outside its documented range."""


class ShapeError(LocalKLError, ValueError):
    """Array shapes or grids of two operands do not agree."""


class WindowIndexError(LocalKLError, IndexError):
    """A window does not fit inside the grid."""


class SingularMatrixError(LocalKLError, np.linalg.LinAlgError):
    """Cholesky factorization failed.

    Attributes
    ----------
    minor : int
        Order of the leading principal minor that is not positive
        (1-based, as reported by LAPACK ``potrf``).
    which : str or None
        Name of the offending matrix (``"x"``, ``"y"``...) when known.
    window : object or None
        Window on which the failure happened, when known.
    """

    def __init__(self, message, minor=None, which=None, window=None):
        super().__init__(message)
        self.minor = minor
        self.which = which
        self.window = window


class NumericalConsistencyError(LocalKLError, ArithmeticError):
    """A quantity that must be non-negative came out clearly negative."""


class TooManyFailuresError(LocalKLError, RuntimeError):
    """Too many bootstrap or Monte Carlo replicates failed."""
