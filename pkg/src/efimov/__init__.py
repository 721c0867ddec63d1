"""Born-Oppenheimer treatment of heavy atom - molecule scattering with Efimov resonances."""

from .errors import (
    DomainError,
    EfimovError,
    NoBoundStateError,
    NumericalError,
    PoleError,
    SingularityError,
    StiffnessError,
    SubThresholdError,
    TailNotConvergedError,
)
from .radial import RadialNumerics, SolutionState, UniversalParams, universal_params
from .scattering import (
    CrossSectionPoint,
    EfimovParams,
    ThreeBodyParam,
    a_plus_over_a0,
    peak_ratio,
    sigma_elastic,
    sigma_inelastic,
)
from .terms import Branch, MassRatio, TermPoint, g_minus, g_plus, omega_constant, s0, term_point

__version__ = "0.1.0"
