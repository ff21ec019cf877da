"""Exact Q polynomials and functional identities for the odd-L spin-L/2 XXZ chain."""

__version__ = "0.1.0"

from .errors import (
    Alarm,
    DuplicateNodes,
    FSolveSingular,
    IdentityViolation,
    InconsistentSystem,
    InvalidParameters,
    NonConvergence,
    NonZeroRemainder,
    NotCoprime,
    PoleProximity,
    QopError,
    UnderDetermined,
)
from .field import CycloField, CycloNum, ch_coeff, cyclo_field, cyclotomic_polynomial, q_power, sh_coeff
from .poly import FieldPoly, exact_div, extended_gcd
from .qsolver import (
    ChainParams,
    QPolynomial,
    build_linear_system,
    closed_form_q,
    solve_q_linear,
    transfer_eigenvalue,
    verify_tq,
)
from .bethe import InterpolationInstance, bae_residual, find_roots, interpolation_identity
from .functional import (
    check_decomposition,
    check_family,
    check_fundamental,
    plucker_check,
    pq_decompose,
    solve,
    wrong_side_p,
    wronskian_family,
)
