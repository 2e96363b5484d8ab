"""Conformable calculus on bounded time scales.

Represent a time scale as an ordered union of points and closed intervals,
take conformable derivatives and integrals for a chosen kernel pair, build
the conformable exponentials, solve second-order constant-coefficient
dynamic equations, and machine-check the calculus identities.
"""

from .conformable import (
    ConformabilityReport,
    ConformableContext,
    KernelPair,
    check_conformability,
    conformable_derivative,
    conformable_derivative2,
    conformable_e0,
    conformable_exponential,
    conformable_integral,
    e0_profile,
    ep_profile,
    kernel_from_spec,
    kernel_to_spec,
    make_kernel,
)
from .delta_calculus import (
    DEFAULT_CONFIG,
    ExponentialProfile,
    NumericConfig,
    RegressivityCheck,
    TimeScaleFunction,
    adaptive_simpson,
    constant,
    delta_derivative,
    delta_derivative2,
    delta_integral,
    is_regressive,
    ts_exponential,
)
from .errors import (
    BadCase,
    BadParam,
    BudgetTooSmall,
    ComplexResidue,
    ConformableError,
    DegenerateScale,
    EmptyScale,
    KernelSingular,
    NotInScale,
    NotInScaleKappa,
    NotRegressive,
    RepeatedRoot,
    ReversedBounds,
    SingularWronskian,
    SpecError,
    StencilFailure,
)
from .linear2 import (
    IVPProblem,
    IVPSolution,
    RootPair,
    characteristic_roots,
    cos_sin,
    cosh_sinh,
    general_solution_from_fundamental,
    is_regressive_eq,
    l2_apply,
    solve_hyperbolic,
    solve_ivp_constant,
    solve_trigonometric,
    wronskian,
)
from .timescale import (
    PointClass,
    Segment,
    TimeScale,
    build_timescale,
    interval,
    kappa_restrict,
    point,
    sample_grid,
    scale_from_spec,
    scale_to_spec,
)
from .verify import (
    IDENTITY_IDS,
    IdentityCase,
    VerificationReport,
    default_kernels,
    default_scales,
    noncommute_values,
    probe_battery,
    verify,
    verify_all,
)

__version__ = "0.1.0"
