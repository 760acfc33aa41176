"""Posteriors and Bayes rules under 0-1 loss.

Two accuracy models are supported. With known accuracies the posterior
log-odds of ``theta = 1`` is ``sum_i w_i y_i - C`` with
``w_i = 2 log(gamma_i / (1 - gamma_i))`` and
``C = log((1 - c) / c) + sum_i w_i / 2``. With independent Beta priors the
same form holds with ``w_i = 2 log(alpha_i / beta_i)``, which equals the
known-accuracy rule evaluated at the prior mean accuracies.

Rules decide 1 when the weighted vote clears the cutoff by more than the
tie tolerance, 0 when it falls short by more than the tolerance, and use the
fair coin otherwise.
"""

from __future__ import annotations

import math
from dataclasses import dataclass
from typing import Iterable, Sequence, Union

import numpy as np
from scipy.special import expit, xlogy

from .model import (
    Action,
    BetaPrior,
    DecisionRule,
    Known,
    OpinionVector,
    ThetaPrior,
    ZeroProbabilityObservation,
    InvalidModel,
    as_opinions,
    as_prior,
    pattern_matrix,
)

PriorLike = Union[ThetaPrior, float]


def _gammas(gammas: Union[Known, Sequence[float]]) -> np.ndarray:
    if not isinstance(gammas, Known):
        gammas = Known(tuple(gammas))
    return np.asarray(gammas.gamma, dtype=float)


def _beta_params(alphas, betas) -> tuple[np.ndarray, np.ndarray]:
    model = BetaPrior(tuple(alphas), tuple(betas))
    return np.asarray(model.alpha), np.asarray(model.beta)


def _bits(y, n: int) -> np.ndarray:
    y = as_opinions(y)
    if y.n != n:
        raise InvalidModel(f"expected {n} votes, got {y.n}")
    return np.asarray(y.bits, dtype=float)


def _prior_log_odds(c: float) -> float:
    """``log(c / (1 - c))`` with the endpoints mapped to -inf / +inf."""
    if c == 0.0:
        return -math.inf
    if c == 1.0:
        return math.inf
    return math.log(c) - math.log1p(-c)


def _log_joint_known(c: float, gamma: np.ndarray, y: np.ndarray):
    """Log of ``P(theta=0, y)`` and ``P(theta=1, y)`` up to a common factor.

    ``y`` may be a single pattern or a stack of patterns in its last axis.
    ``xlogy`` keeps ``0 * log 0 = 0`` so certain experts stay exact.
    """
    with np.errstate(divide="ignore"):
        log_c = math.log(c) if c > 0 else -math.inf
        log_1mc = math.log1p(-c) if c < 1 else -math.inf
        ll1 = (xlogy(y, gamma) + xlogy(1 - y, 1 - gamma)).sum(axis=-1)
        ll0 = (xlogy(y, 1 - gamma) + xlogy(1 - y, gamma)).sum(axis=-1)
    return log_1mc + ll0, log_c + ll1


def posterior_known(
    prior: PriorLike,
    gammas: Union[Known, Sequence[float]],
    y: Union[OpinionVector, Iterable[int]],
    theta: int = 1,
) -> float:
    """Posterior ``P(theta | y)`` for known accuracies.

    Raises
    ------
    ZeroProbabilityObservation
        If ``y`` has probability zero under both states.
    """
    if theta not in (0, 1):
        raise InvalidModel(f"theta must be 0 or 1, got {theta!r}")
    c = as_prior(prior).c
    gamma = _gammas(gammas)
    log0, log1 = _log_joint_known(c, gamma, _bits(y, len(gamma)))
    if log0 == -math.inf and log1 == -math.inf:
        raise ZeroProbabilityObservation(
            f"opinions {tuple(as_opinions(y))} are impossible under both states"
        )
    num, other = (log1, log0) if theta == 1 else (log0, log1)
    # num / (num + other) == 1 / (1 + exp(other - num))
    if other == -math.inf:
        return 1.0
    if num == -math.inf:
        return 0.0
    return float(expit(num - other))


def weights_known(gammas: Union[Known, Sequence[float]]) -> np.ndarray:
    """Vote weights ``2 log(gamma / (1 - gamma))``; certain experts get +-inf."""
    gamma = _gammas(gammas)
    with np.errstate(divide="ignore"):
        return 2.0 * (np.log(gamma) - np.log1p(-gamma))


def cutoff_known(prior: PriorLike, gammas: Union[Known, Sequence[float]]) -> float:
    c = as_prior(prior).c
    return -_prior_log_odds(c) + float(weights_known(gammas).sum()) / 2.0


def weights_beta(alphas: Sequence[float], betas: Sequence[float]) -> np.ndarray:
    a, b = _beta_params(alphas, betas)
    return 2.0 * (np.log(a) - np.log(b))


def cutoff_beta(prior: PriorLike, alphas, betas) -> float:
    c = as_prior(prior).c
    return -_prior_log_odds(c) + float(weights_beta(alphas, betas).sum()) / 2.0


@dataclass(frozen=True)
class WeightedVoteRule:
    """Threshold rule on a weighted vote: 1 above the cutoff, 0 below, coin at it."""

    weights: tuple[float, ...]
    cutoff: float
    tie_tolerance: float = 1e-9

    @property
    def n(self) -> int:
        return len(self.weights)

    def scores(self, patterns: np.ndarray) -> np.ndarray:
        patterns = np.atleast_2d(np.asarray(patterns, dtype=float))
        return patterns @ np.asarray(self.weights)

    def actions(self, patterns: np.ndarray) -> np.ndarray:
        """Action codes for each row of ``patterns``."""
        margin = self.scores(patterns) - self.cutoff
        return _threshold(margin, self.tie_tolerance)

    def action(self, y) -> Action:
        return Action(int(self.actions(_bits(y, self.n)[None, :])[0]))

    def tabulate(self) -> DecisionRule:
        return DecisionRule.from_codes(self.actions(pattern_matrix(self.n)))


def _threshold(margin: np.ndarray, tol: float) -> np.ndarray:
    codes = np.full(margin.shape, int(Action.COIN), dtype=np.int8)
    codes[margin > tol] = int(Action.ONE)
    codes[margin < -tol] = int(Action.ZERO)
    return codes


def bayes_actions_known(
    prior: PriorLike,
    gammas: Union[Known, Sequence[float]],
    patterns: np.ndarray,
    tie_tolerance: float = 1e-9,
) -> tuple[np.ndarray, np.ndarray]:
    """Bayes action codes for each row of ``patterns``.

    Returns the codes and a boolean mask of rows that are impossible under
    both states (those rows get the coin). Works for any panel size since
    only the given rows are evaluated.
    """
    c = as_prior(prior).c
    gamma = _gammas(gammas)
    patterns = np.atleast_2d(np.asarray(patterns, dtype=float))
    unreachable = np.zeros(len(patterns), dtype=bool)
    if c in (0.0, 1.0):
        action = Action.ONE if c == 1.0 else Action.ZERO
        return np.full(len(patterns), int(action), dtype=np.int8), unreachable
    if np.all((gamma > 0) & (gamma < 1)):
        rule = WeightedVoteRule(
            tuple(weights_known(gamma)), cutoff_known(c, gamma), tie_tolerance
        )
        return rule.actions(patterns), unreachable
    # certain experts: weights would give inf - inf, so use the joint directly
    log0, log1 = _log_joint_known(c, gamma, patterns)
    unreachable = (log0 == -np.inf) & (log1 == -np.inf)
    with np.errstate(invalid="ignore"):
        margin = np.where(unreachable, 0.0, log1 - log0)
    return _threshold(margin, tie_tolerance), unreachable


def bayes_rule_known(
    prior: PriorLike,
    gammas: Union[Known, Sequence[float]],
    tie_tolerance: float = 1e-9,
) -> DecisionRule:
    """Bayes rule table for known accuracies.

    >>> bayes_rule_known(0.5, [0.8, 0.8, 0.8]).actions[3]
    <Action.ONE: 1>
    """
    gamma = _gammas(gammas)
    codes, unreachable = bayes_actions_known(
        prior, gamma, pattern_matrix(len(gamma)), tie_tolerance
    )
    return DecisionRule.from_codes(codes, np.flatnonzero(unreachable).tolist())


def posterior_beta(
    prior: PriorLike,
    alphas: Sequence[float],
    betas: Sequence[float],
    y: Union[OpinionVector, Iterable[int]],
) -> float:
    """``P(theta = 1 | y)`` when each accuracy has a Beta prior.

    Expert ``i`` contributes ``log(alpha_i / beta_i)`` to the log-odds when it
    votes 1 and ``log(beta_i / alpha_i)`` when it votes 0.
    """
    c = as_prior(prior).c
    a, b = _beta_params(alphas, betas)
    bits = _bits(y, len(a))
    if c in (0.0, 1.0):
        return c
    contrib = np.where(bits == 1, np.log(a) - np.log(b), np.log(b) - np.log(a))
    return float(expit(contrib.sum() + _prior_log_odds(c)))


def bayes_actions_beta(
    prior: PriorLike, alphas, betas, patterns: np.ndarray, tie_tolerance: float = 1e-9
) -> np.ndarray:
    c = as_prior(prior).c
    patterns = np.atleast_2d(np.asarray(patterns, dtype=float))
    if c in (0.0, 1.0):
        action = Action.ONE if c == 1.0 else Action.ZERO
        return np.full(len(patterns), int(action), dtype=np.int8)
    rule = WeightedVoteRule(
        tuple(weights_beta(alphas, betas)), cutoff_beta(c, alphas, betas), tie_tolerance
    )
    return rule.actions(patterns)


def bayes_rule_beta(
    prior: PriorLike,
    alphas: Sequence[float],
    betas: Sequence[float],
    tie_tolerance: float = 1e-9,
) -> DecisionRule:
    n = len(_beta_params(alphas, betas)[0])
    return DecisionRule.from_codes(
        bayes_actions_beta(prior, alphas, betas, pattern_matrix(n), tie_tolerance)
    )
