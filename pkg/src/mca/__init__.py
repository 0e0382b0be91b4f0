"""Tau-series integration and piecewise-linear approximation of polynomial ODE systems."""
from .errors import (
    DimensionMismatch,
    DomainExceeded,
    InvalidSplit,
    InvalidSystem,
    MCAError,
    MissingSeriesStates,
    NonFinite,
    ShapeMismatch,
    SlopeTooLarge,
    UnknownSystem,
    UnsupportedSchemeOrder,
)
from .integrator import (
    SeriesState,
    SplitState,
    Trajectory,
    extract_random_part,
    integrate_full,
    integrate_split,
    step_full,
    step_split,
    uniformity_report,
)
from .linear_approx import (
    LinearSegment,
    LinState,
    PiecewiseLinearSolution,
    build,
    layer_advance,
    shift_horizon,
)
from .reference import ErrorReport, compare, euler, example1_closed_forms, example1_small_t
from .systems import (
    Monomial,
    PolySystem,
    builtin,
    degree,
    eval_rhs,
    example1,
    lorenz,
    retained_terms,
    van_der_pol,
)
from .tau_series import (
    DEFAULT_TAU,
    CarryRecord,
    ShiftFunction,
    ShiftKind,
    TauSeries,
    apply_shift,
    normalize,
    split,
    value,
)

__version__ = "0.1.0"
