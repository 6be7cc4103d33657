"""Joint moduli of variation for sampled metric-space valued functions."""
from .errors import DomainError, RefusalError
from .functions import FunctionSequence, Grid, SampledFunction, family_from_dict, family_to_dict
from .kappa import KappaSpec, kappa_nu_bound_check, kappa_variation, kappa_variation_bruteforce
from .metric import (
    IncrementMode,
    MetricSpace,
    distance,
    is_valid,
    joint_increment,
    midpoint_witness,
    validate_space,
)
from .modulus import (
    ModulusProfile,
    increment_matrix,
    joint_oscillation,
    joint_variation,
    jordan_variation,
    nu,
    nu_bruteforce,
    nu_prefix,
    nu_prefix_table,
    nu_profile,
    oscillation,
    uniform_distance,
)
from .regularity import (
    EQUIVALENT,
    INCONCLUSIVE,
    NOT_EQUIVALENT,
    classify_growth,
    epsilon_variation,
    evar_profile,
    regularity_profile,
)
from .selection import (
    check_cauchy_condition,
    check_evar_condition,
    check_precompactness,
    estimate_mu,
    extract_subsequence,
    verify_postcondition,
)

__version__ = "0.1.0"
