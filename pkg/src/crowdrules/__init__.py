"""Bayes and minimax aggregation of binary expert opinions."""

from .model import (
    Action,
    AccuracyModel,
    BetaPrior,
    DecisionRule,
    EvenPanel,
    Interval,
    InvalidModel,
    Known,
    OpinionVector,
    PanelConfig,
    PanelTooLarge,
    RiskReport,
    ThetaPrior,
    ZeroProbabilityObservation,
    pattern_from_index,
    pattern_index,
)
from .bayes import (
    WeightedVoteRule,
    bayes_rule_beta,
    bayes_rule_known,
    posterior_beta,
    posterior_known,
    weights_beta,
    weights_known,
)
from .risk import (
    ParameterBox,
    bayes_risk,
    constant_risk_gap,
    monte_carlo_risk,
    risk_exact,
    sup_risk_box,
)
from .minimax import (
    SearchResult,
    brute_force_bayes,
    brute_force_minimax,
    coin_flip_rule,
    interval_minimax_rule,
    least_favorable_scan,
    majority_rule,
    minimax_sandwich,
    verify_constant_risk_bayes,
)

__version__ = "0.1.0"
