"""Mealy automaton algebra, order certificates, and genericity experiments."""

from .automaton import MealyAutomaton, dump, from_json_dict, load, loads, same_tables
from .classify import (
    Activity,
    ClassReport,
    activity_class,
    activity_count,
    classify,
    cycle_structure,
    is_bireversible,
    is_reset,
    is_strongly_connected,
    is_unfolded_reset,
    normal_form,
    output_sets,
    unfold_reset,
)
from .elements import (
    Element,
    EqualityResult,
    IdentityResult,
    WreathRecursion,
    elements_equal,
    is_identity,
    wreath_recursion,
)
from .errors import (
    CapabilityError,
    InputDomainError,
    InvariantError,
    MealyError,
    ParseError,
    SamplingExhaustedError,
    SizeBudgetError,
)
from .order import (
    Budgets,
    OrbitSignalizer,
    OrderCertificate,
    analyze,
    cert_bounded,
    cert_reset,
    cert_reversible,
    orbit,
    orbit_signalizer,
    order_of,
)
from .sample import (
    RNG_IDENTITY,
    SamplerSpec,
    make_rng,
    sample_from_spec,
    sample_invertible_reversible,
    sample_pol,
    sample_pol_conditional,
    sample_reset,
    sample_reset_minimal,
)
from .experiments import (
    ExperimentReport,
    exp_bireversible,
    exp_bounded,
    exp_finitary_fraction,
    exp_reset,
    wilson_interval,
)

__all__ = [name for name in dir() if not name.startswith("_")]
__version__ = "0.1.0"
