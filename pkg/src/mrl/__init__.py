"""Mean residual life of lifetime distributions, computed from the hazard function."""

from .core import (
    MrlCurve,
    conditional_mean,
    hazard_from_mrl,
    mrl,
    mrl_closed_family,
    mrl_curve,
    mrl_quadrature,
    mrl_survival_form,
    richardson_derivative,
)
from .errors import (
    CapabilityError,
    ConvergenceError,
    DomainError,
    MRLError,
    SpecParseError,
    StabilityError,
    SurvivalUnderflowError,
)
from .expansion import (
    check_hypotheses,
    coeffs_multinomial,
    coeffs_recurrence,
    linear_exact_mrl,
    mrl_expansion,
    mrl_expansion_series,
    phi_lemma,
    phi_quadrature,
    phi_recurrence,
    phi_sequence,
)
from .models import HazardModel, ModelSpec, build_model, make_model, parse_model_spec
from .quadrature import QuadratureResult, integrate_adaptive

__version__ = "0.1.0"
