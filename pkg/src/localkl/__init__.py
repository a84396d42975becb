"""Intervals of maximal local Kullback-Leibler divergence between Gaussian processes."""

from .classify import (
    CVResult,
    DAModel,
    LabeledSamples,
    discriminant_score,
    estimate_error,
    select_c_cv,
    train_da,
)
from .divergence import (
    KLValue,
    kl_eigen_oracle,
    kl_full,
    kl_local,
    kl_symmetrized,
    kl_univariate,
)
from .exceptions import (
    InvalidDataError,
    LocalKLError,
    NumericalConsistencyError,
    ParameterError,
    ShapeError,
    SingularMatrixError,
    TooManyFailuresError,
    WindowIndexError,
)
from .gaussian import (
    GaussianParams,
    SampleSet,
    add_jitter,
    chol_logdet_and_solve,
    estimate_params,
    restrict,
    shrink_covariance,
)
from .grid import Grid, Window
from .inference import BootstrapResult, bootstrap_centers, ci_center, confidence_set
from .selection import (
    KLProfile,
    enumerate_windows,
    kl_profile,
    max_window_size,
    select_interval,
    sequential_select,
)

__version__ = "0.1.0"
