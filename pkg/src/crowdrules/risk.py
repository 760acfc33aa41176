"""Frequentist and Bayes risk of decision rules under 0-1 loss.

The coin action costs exactly 1/2 in expectation, so every risk here is a
finite sum over the ``2**n`` opinion patterns. For a fixed rule and state the
risk is affine in each accuracy separately, which makes the supremum over a
box of accuracies attained at one of its vertices.
"""

from __future__ import annotations

import itertools
from dataclasses import dataclass
from typing import Sequence, Union

import numpy as np

from .model import (
    Action,
    BetaPrior,
    DecisionRule,
    Interval,
    InvalidModel,
    Known,
    RiskReport,
    ThetaPrior,
    as_prior,
    pattern_matrix,
)

# loss of each action code (ZERO, ONE, COIN) given theta
LOSS = np.array([[0.0, 1.0, 0.5], [1.0, 0.0, 0.5]])


def _check_theta(theta: int) -> int:
    if theta not in (0, 1):
        raise InvalidModel(f"theta must be 0 or 1, got {theta!r}")
    return int(theta)


def _gamma_array(gammas, n: int) -> np.ndarray:
    if isinstance(gammas, Known):
        gammas = gammas.gamma
    gamma = np.asarray(gammas, dtype=float)
    if gamma.shape[-1] != n:
        raise InvalidModel(f"expected {n} accuracies, got {gamma.shape[-1]}")
    if np.any((gamma < 0) | (gamma > 1)) or np.any(np.isnan(gamma)):
        raise InvalidModel("accuracies must lie in [0, 1]")
    return gamma


def pattern_probabilities(theta: int, gammas) -> np.ndarray:
    """``P(y | theta, gamma)`` for every pattern, indexed by pattern code.

    ``gammas`` may be a single accuracy vector or a stack ``(..., n)``; the
    result then has shape ``(..., 2**n)``. Products of exact 0/1 factors stay
    exact, which matters at the vertices of the full parameter box.
    """
    theta = _check_theta(theta)
    gamma = np.asarray(gammas.gamma if isinstance(gammas, Known) else gammas, float)
    n = gamma.shape[-1]
    p_one = gamma if theta == 1 else 1.0 - gamma  # P(Y_i = 1 | theta)
    y = pattern_matrix(n).astype(bool)
    factors = np.where(y, p_one[..., None, :], 1.0 - p_one[..., None, :])
    return factors.prod(axis=-1)


def loss_vector(rule: DecisionRule, theta: int) -> np.ndarray:
    """Expected loss of the rule's action on each pattern."""
    return LOSS[_check_theta(theta)][rule.codes]


def risk_exact(rule: DecisionRule, theta: int, gammas) -> float:
    """``R(rule, theta)`` at accuracies ``gammas``.

    >>> from crowdrules.model import DecisionRule, Action
    >>> risk_exact(DecisionRule.constant(2, Action.COIN), 0, [0.9, 0.1])
    0.5
    """
    gamma = _gamma_array(gammas, rule.n)
    probs = pattern_probabilities(theta, gamma)
    return float(probs @ loss_vector(rule, theta))


def risk_report(rule: DecisionRule, gammas, prior=None) -> RiskReport:
    r0, r1 = risk_exact(rule, 0, gammas), risk_exact(rule, 1, gammas)
    bayes = None
    if prior is not None:
        c = as_prior(prior).c
        bayes = c * r1 + (1 - c) * r0
    return RiskReport(r0, r1, bayes)


def bayes_risk(
    rule: DecisionRule,
    prior: Union[ThetaPrior, float],
    model: Union[Known, BetaPrior],
) -> float:
    """Prior-averaged risk ``c R(rule, 1) + (1 - c) R(rule, 0)``.

    Under independent Beta priors the pattern probabilities marginalize to
    the known-accuracy ones at the prior means, so the same formula applies.
    """
    c = as_prior(prior).c
    if isinstance(model, Interval):
        raise InvalidModel("Bayes risk needs a prior over accuracies, not an interval")
    gamma = model.mean_accuracy if isinstance(model, BetaPrior) else model.gamma
    return c * risk_exact(rule, 1, gamma) + (1 - c) * risk_exact(rule, 0, gamma)


def constant_risk_gap(rule: DecisionRule, gammas) -> float:
    return abs(risk_exact(rule, 0, gammas) - risk_exact(rule, 1, gammas))


@dataclass(frozen=True)
class ParameterBox:
    """States in ``theta_values`` with each accuracy in ``[lo_i, hi_i]``."""

    gamma_lo: tuple[float, ...]
    gamma_hi: tuple[float, ...]
    theta_values: tuple[int, ...] = (0, 1)

    def __post_init__(self):
        lo = tuple(float(v) for v in self.gamma_lo)
        hi = tuple(float(v) for v in self.gamma_hi)
        if len(lo) != len(hi) or not lo:
            raise InvalidModel("box bounds must be nonempty and of equal length")
        if any(not 0.0 <= a <= b <= 1.0 for a, b in zip(lo, hi)):
            raise InvalidModel("box bounds need 0 <= lo_i <= hi_i <= 1")
        thetas = tuple(sorted(set(int(t) for t in self.theta_values)))
        if not thetas or any(t not in (0, 1) for t in thetas):
            raise InvalidModel("theta_values must be a nonempty subset of {0, 1}")
        object.__setattr__(self, "gamma_lo", lo)
        object.__setattr__(self, "gamma_hi", hi)
        object.__setattr__(self, "theta_values", thetas)

    @property
    def n(self) -> int:
        return len(self.gamma_lo)

    @classmethod
    def full(cls, n: int) -> "ParameterBox":
        return cls((0.0,) * n, (1.0,) * n)

    @classmethod
    def point(cls, gammas: Sequence[float]) -> "ParameterBox":
        return cls(tuple(gammas), tuple(gammas))

    @classmethod
    def from_interval(cls, model: Interval) -> "ParameterBox":
        return cls(model.lower_accuracy, (1.0,) * model.n)

    def vertices(self) -> np.ndarray:
        """Distinct corners of the accuracy box as rows, expert 1 varying fastest."""
        corners = [sorted({a, b}) for a, b in zip(self.gamma_lo, self.gamma_hi)]
        rows = [tuple(reversed(v)) for v in itertools.product(*reversed(corners))]
        return np.array(rows, dtype=float)


def sup_risk_box(rule: DecisionRule, box: ParameterBox):
    """Exact ``sup R(rule, (theta, gamma))`` over the box.

    Returns ``(value, (theta, gamma))`` with a maximizing vertex. Ties go to
    the smaller theta, then the first vertex in enumeration order.
    """
    if box.n != rule.n:
        raise InvalidModel(f"box is for n={box.n}, rule for n={rule.n}")
    verts = box.vertices()
    best, arg = -1.0, None
    for theta in box.theta_values:
        risks = pattern_probabilities(theta, verts) @ loss_vector(rule, theta)
        k = int(np.argmax(risks))
        if risks[k] > best:
            best, arg = float(risks[k]), (theta, tuple(verts[k].tolist()))
    return best, arg


def monte_carlo_risk(
    rule: DecisionRule,
    theta: int,
    gammas,
    trials: int,
    seed,
) -> tuple[float, float]:
    """Simulated risk and its binomial standard error.

    Votes are drawn independently per expert, coin actions are resolved by a
    physical fair coin, and the loss is 0/1. The same ``seed`` always yields
    the same result.
    """
    theta = _check_theta(theta)
    if int(trials) != trials or trials < 1:
        raise InvalidModel(f"trials must be a positive integer, got {trials!r}")
    gamma = _gamma_array(gammas, rule.n)
    rng = np.random.default_rng(seed)
    p_one = gamma if theta == 1 else 1.0 - gamma
    votes = rng.random((trials, rule.n)) < p_one
    idx = votes.astype(np.int64) @ (1 << np.arange(rule.n, dtype=np.int64))
    coins = rng.integers(0, 2, size=trials)
    codes = rule.codes[idx]
    decisions = np.where(codes == Action.COIN, coins, codes)
    losses = decisions != theta
    mean = float(losses.mean())
    se = float(np.sqrt(mean * (1.0 - mean) / trials))
    return mean, se
