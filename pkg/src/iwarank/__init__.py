"""Exact Kobayashi ranks over Z_p[[X]]: signed cyclotomic towers,
special 2x2 matrices, Coleman-pair closed forms and Sha growth tables.

All arithmetic is exact: polynomials carry integer coefficients,
finite-level module lengths come from Smith normal forms over Z/p^N
recomputed at a higher precision, and rational ranks come from
fraction-free elimination.  Nothing is ever rounded; when a length
cannot be certified at the working precision the engine raises
PrecisionUnstable instead of answering.
"""

from .cyclo_eval import (
    INFINITE,
    CyclotomicPoint,
    RationalPoly,
    crt_interpolate,
    det_ord_at_eps,
    matrices_proportional_at_eps,
    matrix_rank_at_eps,
    ord_eps,
)
from .errors import (
    DegenerateColeman,
    DuplicateLevel,
    InvalidContext,
    IwarankError,
    NotCoprime,
    NotNested,
    NotSpecial,
    NotTorsion,
    PhiDivides,
    PrecisionUnstable,
    SingularMatrix,
    ZeroElement,
)
from .growth_model import (
    GrowthRow,
    GrowthTable,
    InvariantSet,
    degree_identities,
    delta_e,
    nabla_x_formula,
    s_sequence,
    sha_growth,
)
from .kobayashi_rank import (
    CyclicTower,
    MatrixTower,
    NablaResult,
    TorsionTower,
    additivity_check,
    detect_stabilization,
    direct_sum,
    nabla_coleman_tower,
    nabla_cyclic,
    nabla_matrix_tower,
    nabla_torsion_tower,
    nabla_tower,
    tower_sweep,
)
from .lambda_ring import (
    ONE,
    X,
    ZERO,
    IwasawaInvariants,
    LambdaElement,
    LambdaMatrix,
    OmegaTower,
    PrimeContext,
    cyclotomic_phi,
    euler_phi_pk,
    iwasawa_invariants,
    omega_poly,
    omega_tower,
    reduce_mod_omega,
    signed_degree,
)
from .special_matrices import (
    BDFactorization,
    ColemanData,
    SpecialLevel,
    SpecialReport,
    assemble_fn,
    factor_bd,
    good_basis_transform,
    is_special,
    parity_congruence_check,
    parity_reference,
    rod_check,
)
from .verify import SUITE_NAMES, CheckOutcome, SuiteReport, run_suites
from .zp_modules import (
    LengthReport,
    SpanPresentation,
    lambda_column_span,
    nested_span_quotient_length,
    quotient_invariants,
    snf_local,
    span_length,
)

__version__ = "0.1.0"
