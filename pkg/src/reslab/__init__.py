"""Scattering resonances of convex obstacles and Airy-model operator bounds."""

from .airy_model import (
    DiscretizedOperator,
    InequalityReport,
    LowerOrder,
    ModelOperatorSpec,
    airy_realization_eigs,
    check_inequalities,
    frozen_operator,
    min_rayleigh,
    sigma_min,
)
from .conditions import BoundaryCondition
from .csfun import airy_ai, airy_ai_prime, sph_hankel1
from .errors import ConvergenceError, DomainError, ReslabError
from .geometry import (
    Ellipsoid,
    ParametricSurface,
    Sphere,
    barrier_constant,
    curvature_report,
    dirichlet_barrier_constant,
    min_curvature,
    principal_curvatures,
)
from .resonance import (
    BarrierReport,
    ResonanceQuery,
    ResonanceSet,
    ball_resonances,
    fit_cubic_slope,
    resonance_condition,
    verify_barrier,
)
from .roots import Rect, ZeroList, find_zeros, winding_count
from .scaling import ContourSpec, HessianField, arg_window_check, ball_hessian, contour_g, symbol_p

__version__ = "0.1.0"

__all__ = [name for name in dir() if not name.startswith("_")]
