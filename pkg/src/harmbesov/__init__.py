"""Weighted harmonic Besov spaces on the unit ball of R^n.

Extended reproducing kernels, radial differential operators D^t_s on finite
harmonic expansions, product quadrature on the ball, quasinorm variants,
atomic decompositions and verification campaigns.
"""

__version__ = "0.1.0"

from .numeric import (  # noqa: E402
    CoeffSequence, DerivPair, DomainError, SpaceParams, bracket, gamma_coeff, gamma_coeffs,
    gamma_sequence, multiplier_sequence, pochhammer, stirling_ratio, volume_const,
)
from .zonal import zonal_coeffs, zonal_derivs, zonal_eval  # noqa: E402
from .expansion import (  # noqa: E402
    HarmonicExpansion, MultiIndex, dilate, dst_apply, evaluate, its_field, partial_deriv,
    radial_power, random_expansion,
)
from .kernels import (  # noqa: E402
    KernelConvergenceError, KernelSpec, KernelValue, SeriesKernel, kernel_deriv, kernel_eval,
    kernel_multiplied, kernel_truncate,
)
from .quadrature import BallRule, QuadratureWarning, build_ball_rule, build_focused_rule, refine  # noqa: E402
from .norms import (  # noqa: E402
    DstVariant, NormSpec, PartialVariant, RadialVariant, besov_quasinorm, bergman_project_eval,
    bloch_norm, dual_pair, duality_pairing, lp_quasinorm, probe_integral,
)
from .atomic import (  # noqa: E402
    AtomCoeffs, AtomLattice, AtomSum, ConditioningError, analyze, build_lattice, synthesize,
)
