"""Generalized Meixner recurrence coefficients and their Painleve V structure.

Recurrence coefficients of the polynomials orthogonal with respect to the
weight ``(gamma)_k c^k / ((beta)_k k!)`` on the lattice ``N``, the shifted
lattice ``N + 1 - beta`` and their union, computed in configurable
precision, together with residual-identity checks of the discrete system,
the Toda flow in ``c``, Painleve V and its Backlund transformations.
"""

from .dynamics import (
    UVState,
    ab_to_uv,
    chain_from_table,
    discrete_residuals,
    forward_chain,
    initial_b0,
    integrate_uv,
    moment_state,
    riccati_v0_rhs,
    step_uv,
    toda_rhs,
    uv_ode_rhs,
    uv_to_ab,
)
from .errors import (
    DegenerateM,
    DenominatorZero,
    DomainError,
    IndeterminateStep,
    MeixnerPVError,
    PoleError,
    PrecisionExhausted,
    SignDomain,
    SingularityError,
    StepSizeUnderflow,
    ValidationError,
)
from .measure import Lattice, ModelParams, closed_form_moments, discrete_measure, moments, validate, weight_at
from .numeric import Jet2, PrecisionConfig, central_diff, double_precision, integrate_ode
from .orthopoly import RecurrenceTable, classical_meixner_coeffs, stieltjes_coeffs
from .painleve import (
    CaseId,
    NotApplicable,
    PVParams,
    SignTriple,
    backlund,
    case_params,
    compose,
    ladder,
    lincomb,
    pv_residual,
    pv_rhs,
    remark2_transforms,
    riccati_jet,
    v_from_y,
)
from .specialfn import KummerArgs, kummer_m, kummer_m_dz, log_gamma, pochhammer

__version__ = "0.1.0"
