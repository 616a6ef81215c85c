"""Randomized proportional and candidate-fair approval committee rules."""

from ._kernels import BACKEND
from .analysis import (
    MonteCarloEstimate,
    StabilityReport,
    TransitionCache,
    compare_distributions,
    exact_committee_distribution,
    exact_sequence_distribution,
    monte_carlo_distribution,
    stability_report,
)
from .distributions import (
    DEFAULT_EPS_GRID,
    CommitteeDistribution,
    Coupling,
    conditional_coupling_sample,
    max_kl_audit,
    optimal_coupling,
    selection_probabilities,
    tv_distance,
)
from .dynamic import (
    DynamicTrace,
    ElectionSequence,
    adversary_sequence,
    dynamic_gjcr,
    dynamic_gjcr_transition,
    dynamic_reduce,
    recourse,
    transition_caches,
)
from .election import (
    AxiomVerdict,
    Election,
    PerturbationSpec,
    Witness,
    check_proportionality,
    enumerate_proportional_committees,
    pav_score,
    pav_score_exact,
    satisfies_ejr_plus,
    satisfies_jr,
    underrepresented_counts,
)
from .errors import InputError, InternalConsistencyError, ParseError, RandCommitteeError, ResourceCapError
from .global_rules import (
    default_pav_a,
    pav_stability_guarantee,
    private_pav_a,
    softmax_pav,
    softmax_pav_distribution,
    uniform_ejr_plus,
    uniform_ejr_plus_distribution,
)
from .greedy import (
    BOTTOM,
    GREEDY_JR,
    SOFTMAX_GJCR,
    GreedyParams,
    NextCandidateDistribution,
    committee_tv_ceiling,
    default_a_ell,
    gjcr,
    next_candidate_distribution,
    pad_committee,
    per_step_tv_ceiling,
    softmax_gjcr,
)
from .instances import generate_instance
from .rng import make_rng
from .rules import RULE_NAMES, Rule, make_rule

__version__ = "0.1.0"
