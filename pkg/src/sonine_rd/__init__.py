"""Solver and verification suites for nonlocal-in-time reaction-diffusion
equations built on Sonine kernel pairs."""

from .errors import DomainError, NumericalError, RangeError
from .kernels import (
    BesselPair,
    Dirac,
    DistributedOrder,
    KernelPair,
    MittagLefflerPair,
    MultiTerm,
    RiemannLiouville,
    SonineReport,
    Tempered,
    cumulative_l,
    make_pair,
    numeric_associate,
    verify_sonine,
)
from .nonlin import NonlinearSource, make_source
from .pde import ProblemSpec, SolveReport, decay_check, majorant_check, solve
from .spatial import (
    DirichletLaplacian,
    Field,
    Involution,
    SpectralFractionalLaplacian,
    SpectralOperator,
    build_operator,
)
from .specfun import bessel_i, bessel_j, exp_integral_e1, gamma, mittag_leffler
from .tstep import (
    ScalarTrace,
    TimeGrid,
    bracket_blowup_closed_form_bounds,
    solve_linear_majorant,
    solve_power_decay,
    solve_scalar_nonlinear,
)

__version__ = "1.0.0"

__all__ = [
    "DomainError",
    "NumericalError",
    "RangeError",
    "BesselPair",
    "Dirac",
    "DistributedOrder",
    "KernelPair",
    "MittagLefflerPair",
    "MultiTerm",
    "RiemannLiouville",
    "SonineReport",
    "Tempered",
    "cumulative_l",
    "make_pair",
    "numeric_associate",
    "verify_sonine",
    "NonlinearSource",
    "make_source",
    "ProblemSpec",
    "SolveReport",
    "decay_check",
    "majorant_check",
    "solve",
    "DirichletLaplacian",
    "Field",
    "Involution",
    "SpectralFractionalLaplacian",
    "SpectralOperator",
    "build_operator",
    "bessel_i",
    "bessel_j",
    "exp_integral_e1",
    "gamma",
    "mittag_leffler",
    "ScalarTrace",
    "TimeGrid",
    "bracket_blowup_closed_form_bounds",
    "solve_linear_majorant",
    "solve_power_decay",
    "solve_scalar_nonlinear",
    "__version__",
]
