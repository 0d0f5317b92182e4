"""Information-density leakage measures for privacy mechanisms.

Compute and cross-verify the pointwise leakage of finite mechanisms (PMC,
PML, LIP, ALIP, LDP levels), translate guarantees between frameworks, build
standard mechanisms exactly, and certify every closed form against
brute-force adversary searches.
"""

from . import bounds, errors, leakage, mechanisms, oracles, properties, sampling
from .bounds import (
    CurveTable,
    TranslationResult,
    derive_implications,
    high_privacy_bound,
    ldp_to_context,
    ldp_to_pmc,
    pmc_to_pml,
    pml_to_pmc,
    sweep_curves,
    verify_boundedness_equivalence,
)
from .errors import InfodensError
from .leakage import (
    Guarantee,
    GuaranteeKind,
    LeakageProfile,
    all_guarantee_levels,
    conditional_pmc,
    expected_pmc,
    guarantee_level,
    leakage_profile,
    max_cost_leakage,
    max_realizable_cost,
    pmc,
    pml,
)
from .mechanisms import (
    BoundedLaw,
    GaussianPerturbMechanism,
    LaplaceMeanMechanism,
    discrete_law,
    extremal_mechanism,
    extremal_mechanism_pmc,
    gaussian_tail_bound,
    parse_mechanism_doc,
    randomized_response,
    randomized_response_pmc,
    uniform_law,
)
from .oracles import (
    CostFunction,
    OracleCertificate,
    RandomizedFunction,
    SearchConfig,
    achieving_kernel,
    brute_force_guesswork_leakage,
    brute_force_pmc,
    certify_pmc,
    cost_from_kernel,
    cost_function_leakage,
    guesswork_leakage,
    kernel_from_cost,
    randomized_function_leakage,
)
from .probcore import (
    INF,
    ZERO,
    Channel,
    ExtReal,
    Joint,
    Pmf,
    as_level,
    density_ratio,
    info_density,
    joint_from,
    joint_from_doc,
    max_divergence,
)

__version__ = "0.1.0"

__all__ = [
    "BoundedLaw",
    "Channel",
    "CostFunction",
    "CurveTable",
    "ExtReal",
    "GaussianPerturbMechanism",
    "Guarantee",
    "GuaranteeKind",
    "INF",
    "InfodensError",
    "Joint",
    "LaplaceMeanMechanism",
    "LeakageProfile",
    "OracleCertificate",
    "Pmf",
    "RandomizedFunction",
    "SearchConfig",
    "TranslationResult",
    "ZERO",
    "achieving_kernel",
    "all_guarantee_levels",
    "as_level",
    "bounds",
    "brute_force_guesswork_leakage",
    "brute_force_pmc",
    "certify_pmc",
    "conditional_pmc",
    "cost_from_kernel",
    "cost_function_leakage",
    "density_ratio",
    "derive_implications",
    "discrete_law",
    "errors",
    "expected_pmc",
    "extremal_mechanism",
    "extremal_mechanism_pmc",
    "gaussian_tail_bound",
    "guarantee_level",
    "guesswork_leakage",
    "high_privacy_bound",
    "info_density",
    "joint_from",
    "joint_from_doc",
    "kernel_from_cost",
    "ldp_to_context",
    "ldp_to_pmc",
    "leakage",
    "leakage_profile",
    "max_cost_leakage",
    "max_divergence",
    "max_realizable_cost",
    "mechanisms",
    "oracles",
    "parse_mechanism_doc",
    "pmc",
    "pmc_to_pml",
    "pml",
    "pml_to_pmc",
    "properties",
    "randomized_function_leakage",
    "randomized_response",
    "randomized_response_pmc",
    "sampling",
    "sweep_curves",
    "uniform_law",
    "verify_boundedness_equivalence",
]
