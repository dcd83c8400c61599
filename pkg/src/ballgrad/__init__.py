"""Sharp gradient constants, Poisson-transform extremals, and inequality
verification sweeps for harmonic and hyperbolic-harmonic functions on the
unit ball of R^n."""

__version__ = "0.1.0"

from .cap import CapSpec, a0, cap_angle, cap_angle_derivative, cap_area
from .constants import (
    BoundKind,
    beta_bound,
    c_n,
    d_n,
    grad0_bound,
    khavinson_gradient_bound,
    khavinson_hyperbolic_bound,
    khavinson_phi,
    pointwise_bound,
    thyp3_envelope,
)
from .geometry import BallConstants, ball_constants, ratio_bounds, sigma_star_bounds_check
from .mobius import MobiusMap, apply, chain_rule_check, hyperbolic_distance, poincare_distance_1d
from .numerics import (
    QuadratureConfig,
    QuadratureError,
    RandomSeed,
    fd_gradient,
    fd_laplacian,
    find_root_bracketed,
    gauss_legendre,
    integrate_1d,
    sample_ball,
    sample_sphere,
)
from .poisson import (
    BoundaryFunction,
    PoissonParams,
    TransformField,
    VectorTransform,
    extremal_field,
    kernel,
    kernel_gradient,
    laplacian_h,
    mc_transform,
    mc_transform_gradient,
    radial_derivative,
    transform,
    transform_gradient,
    transform_with_gradient,
    vector_transform,
)
from .verify import (
    CounterexampleCertificate,
    VerificationReport,
    counterexample,
    explore_question,
    verify_contraction,
    verify_inq1,
    verify_pde_residuals,
    verify_pointwise,
    verify_section3_auxiliaries,
    verify_sharpness,
    verify_thyp3,
    verify_vector,
)

__all__ = [name for name in dir() if not name.startswith("_")]
