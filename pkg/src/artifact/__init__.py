"""Ruijsenaars difference operators, the H_l family and their identities.

Submodules:

bracket      the bracket function [z] in elliptic, trigonometric and rational flavors
diffop       finite difference operators, composition and sampled equality tests
ruijsenaars  D_r, H_l, the recurrence, determinant and composition expansions
kernels      dual Cauchy, duality sums, trigonometric kernels, Kajihara's transformation
macdonald    exact Macdonald operators and polynomials over Q
symmetric    exact sparse polynomials, partitions and symmetric polynomials
suites       grids of checks behind the command line
"""

from .bracket import BracketFunction, delta_product, evaluate, hirota_residual, shifted_factorial
from .diffop import (
    DiffOperator,
    ModelParams,
    op_apply,
    op_compose,
    op_equal_at,
    op_identity,
    op_linear,
    op_scale,
    op_vanishes_at,
)
from .errors import (
    DegenerateSpectrum,
    DimensionMismatch,
    Divergence,
    ExactnessViolation,
    InvalidParameters,
    PoleProximity,
    PrecisionUnreachable,
)
from .kernels import (
    DualityParams,
    dual_cauchy_psi,
    duality_sum_residual,
    hd_identity_residual,
    kajihara_preset,
    kajihara_residual,
    trig_cauchy_pi,
    trig_kernel_residuals,
)
from .macdonald import (
    QTField,
    apply_calD,
    apply_calH,
    eigen_check_D,
    eigen_check_H,
    genfun_check,
    macdonald_poly,
    operator_wronski_trig_check,
    scalar_wronski_check,
)
from .report import CheckRecord, IdentityReport
from .ruijsenaars import (
    build_D,
    build_H,
    coefficient_identity_residual,
    commutator_residual,
    d_via_determinant,
    h_via_compositions,
    h_via_determinant,
    key_identity_residual,
    wronski_residual_op,
)
from .suites import SuiteConfig, run_suite
from .symmetric import Partition, Poly, SymPoly

__version__ = "0.1.0"
