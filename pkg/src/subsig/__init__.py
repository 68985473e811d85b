"""Exact subsignatures of semicoherent systems.

Structure functions are truth tables over component masks (bit ``i - 1`` is
component ``i``); failure orderings carry exact rational laws; every quantity
is a :class:`fractions.Fraction`.
"""

from ._kernels import NUMBA_ENABLED
from .errors import (
    AssumptionViolated,
    CapacityError,
    ComponentError,
    DecompositionError,
    DistributionError,
    EnumerationRequired,
    FormulaSyntaxError,
    NormalizationUndefined,
    NotBinaryError,
    RouteDisagreement,
    SubsigError,
)
from .families import random_semicoherent, semicoherent_functions
from .lifetime import (
    OrderingDistribution,
    exchangeable,
    exponential_race,
    from_exponential_rates,
    from_orderings,
    random_ordering_distribution,
)
from .modules import (
    FactorizationReport,
    ReducedQualityFunction,
    conditional_importance,
    exchangeable_module_attribution,
    exchangeable_module_subsignature,
    factorization_check,
    module_attribution,
    module_lifetime_position,
    module_signature,
    reduced_quality,
    subsignature_via_module,
)
from .montecarlo import (
    ExchangeableGammaMixture,
    IIDExponential,
    IndependentExponential,
    estimate_bp,
    estimate_module_attribution,
    estimate_subsignature,
    sample_ordering,
)
from .signature import (
    BarlowProschanVector,
    SubsignatureVector,
    barlow_proschan,
    failure_attribution,
    normalized_subsignature,
    probability_signature,
    subsignature,
    subsignature_direct,
    subsignature_domination,
    subsignature_oracle,
    subsignature_phi_weighted,
    subsignature_updown,
)
from .specfile import SpecError, load_spec
from .structural import (
    beta_integral,
    integrate_polynomial,
    structural_bp,
    structural_signature,
    structural_subsignature,
    structural_subsignature_domination,
)
from .structure import (
    DominationFunction,
    ModuleDecomposition,
    Polynomial,
    StructureFunction,
    check_module,
    compose_module,
    delta,
    from_domination,
    k_out_of_n,
    parallel,
    parse_structure,
    reliability_eval,
    reliability_partial_diagonal,
    series,
    signed_domination,
    validate_semicoherent,
)

__version__ = "0.1.0"
