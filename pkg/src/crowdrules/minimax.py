"""Named rules, exhaustive Bayes and minimax searches, least favorable priors.

The exhaustive searches enumerate every table in ``{ZERO, ONE, COIN}**(2**n)``,
that is ``3**(2**n)`` rules (6561 for three experts). Rule ``k`` assigns to
pattern ``j`` the ``j``-th base-3 digit of ``k``. Work is done in chunks of
rule indices so memory stays bounded; results do not depend on chunking.
"""

from __future__ import annotations

import math
from dataclasses import dataclass
from typing import Iterator, Optional, Sequence, Union

import numpy as np

from .bayes import bayes_rule_known
from .model import (
    Action,
    BetaPrior,
    DecisionRule,
    EvenPanel,
    Interval,
    InvalidModel,
    Known,
    PanelTooLarge,
    ThetaPrior,
    as_prior,
    pattern_matrix,
)
from .risk import (
    LOSS,
    ParameterBox,
    bayes_risk,
    constant_risk_gap,
    pattern_probabilities,
    risk_exact,
    sup_risk_box,
)

WITNESS_TOL = 1e-12
DEFAULT_MAX_N = 3
CHUNK = 1 << 15


def majority_rule(n: int) -> DecisionRule:
    """Decide 1 iff more than half of an odd panel votes 1."""
    if int(n) != n or n < 1:
        raise InvalidModel(f"panel size must be a positive integer, got {n!r}")
    if n % 2 == 0:
        raise EvenPanel(f"the majority rule needs an odd panel, got n={n}")
    ones = pattern_matrix(n).sum(axis=1)
    return DecisionRule.from_codes(np.where(2 * ones > n, 1, 0))


def coin_flip_rule(n: int) -> DecisionRule:
    return DecisionRule.constant(n, Action.COIN)


def interval_minimax_rule(
    epsilons: Union[Interval, Sequence[float]], tie_tolerance: float = 1e-9
) -> DecisionRule:
    """Weighted vote at accuracies ``1/2 + eps_i`` with an even prior.

    This is minimax when each accuracy is only known to be at least
    ``1/2 + eps_i``; with equal margins it reduces to the majority rule.
    """
    model = epsilons if isinstance(epsilons, Interval) else Interval(tuple(epsilons))
    return bayes_rule_known(0.5, model.lower_accuracy, tie_tolerance)


def rule_count(n: int) -> int:
    return 3 ** (2**n)


def _check_size(n: int, max_n: int) -> None:
    if n > max_n:
        raise PanelTooLarge(
            f"exhaustive search for n={n} must examine 3**(2**{n}) = "
            f"{rule_count(n):.3e} rules (limit max_n={max_n})"
        )


def rule_codes(start: int, stop: int, n: int) -> np.ndarray:
    """Action codes of rules ``start..stop-1`` as a ``(stop-start, 2**n)`` array."""
    idx = np.arange(start, stop, dtype=np.int64)
    size = 2**n
    out = np.empty((len(idx), size), dtype=np.int8)
    for j in range(size):
        idx, out[:, j] = np.divmod(idx, 3)
    return out


def _chunks(n: int) -> Iterator[tuple[int, np.ndarray]]:
    total = rule_count(n)
    for start in range(0, total, CHUNK):
        yield start, rule_codes(start, min(start + CHUNK, total), n)


@dataclass(frozen=True)
class SearchResult:
    """Optimum of an exhaustive search and the rules attaining it."""

    optimum: float
    witnesses: tuple[int, ...]
    enumerated: int
    n: int

    def witness_rules(self) -> list[DecisionRule]:
        return [DecisionRule.from_index(k, self.n) for k in self.witnesses]

    def __contains__(self, rule: DecisionRule) -> bool:
        return rule.n == self.n and rule.index in self.witnesses


def _search(n: int, objective) -> SearchResult:
    best = math.inf
    found: list[tuple[int, float]] = []
    count = 0
    for start, codes in _chunks(n):
        values = objective(codes)
        count += len(values)
        m = float(values.min())
        if m > best + WITNESS_TOL:
            continue
        best = min(best, m)
        hits = np.flatnonzero(values <= m + WITNESS_TOL)
        found.extend((start + int(k), float(values[k])) for k in hits)
    witnesses = tuple(k for k, v in found if v <= best + WITNESS_TOL)
    return SearchResult(best, witnesses, count, n)


def brute_force_bayes(
    prior: Union[ThetaPrior, float],
    model: Union[Known, BetaPrior],
    max_n: int = DEFAULT_MAX_N,
) -> SearchResult:
    """Minimum Bayes risk over all rules, by enumeration."""
    if isinstance(model, Interval):
        raise InvalidModel("Bayes search needs a Known or BetaPrior model")
    c = as_prior(prior).c
    n = model.n
    _check_size(n, max_n)
    gamma = model.mean_accuracy if isinstance(model, BetaPrior) else model.gamma
    # weight of each (pattern, theta) cell in the Bayes risk
    w0 = (1 - c) * pattern_probabilities(0, gamma)
    w1 = c * pattern_probabilities(1, gamma)

    def objective(codes):
        return LOSS[0][codes] @ w0 + LOSS[1][codes] @ w1

    return _search(n, objective)


def brute_force_minimax(
    box: ParameterBox, max_n: int = DEFAULT_MAX_N
) -> SearchResult:
    """Minimum over all rules of the supremum risk over ``box``."""
    n = box.n
    _check_size(n, max_n)
    verts = box.vertices()
    probs = {t: pattern_probabilities(t, verts).T for t in box.theta_values}

    def objective(codes):
        sups = [(LOSS[t][codes] @ probs[t]).max(axis=1) for t in box.theta_values]
        return np.max(sups, axis=0)

    return _search(n, objective)


def prior_grid(step: float = 0.01) -> np.ndarray:
    """Interior grid ``step, 2 step, ...`` strictly inside (0, 1)."""
    k = int(round(1.0 / step))
    points = np.round(np.arange(1, k) * step, 12)
    return points[(points > 0) & (points < 1)]


@dataclass(frozen=True)
class LeastFavorableScan:
    """Bayes risk of the Bayes rule across a grid of priors ``c``.

    The Bayes-risk curve can be flat on an interval around its maximum, so
    ``c_star`` is the grid point nearest the middle of the maximizing set
    (``plateau``) rather than whichever point round-off happens to favor.
    """

    grid: tuple[float, ...]
    curve: tuple[float, ...]
    c_star: float
    peak: float
    plateau: tuple[float, float]

    @property
    def flat(self) -> bool:
        return self.plateau[0] < self.plateau[1]


def least_favorable_scan(
    model: Union[Known, Sequence[float]],
    grid: Optional[Sequence[float]] = None,
    tie_tolerance: float = 1e-9,
    plateau_tol: float = WITNESS_TOL,
) -> LeastFavorableScan:
    if not isinstance(model, Known):
        if isinstance(model, (BetaPrior, Interval)):
            raise InvalidModel("least favorable scan needs known accuracies")
        model = Known(tuple(model))
    grid = prior_grid() if grid is None else np.asarray(grid, dtype=float)
    if len(grid) == 0 or np.any((grid < 0) | (grid > 1)):
        raise InvalidModel("grid must be a nonempty subset of [0, 1]")
    curve = np.array(
        [
            bayes_risk(bayes_rule_known(c, model, tie_tolerance), c, model)
            for c in grid
        ]
    )
    peak = float(curve.max())
    top = grid[curve >= peak - plateau_tol]
    lo, hi = float(top.min()), float(top.max())
    centre = (lo + hi) / 2
    c_star = float(top[np.argmin(np.abs(top - centre))])
    return LeastFavorableScan(
        tuple(grid.tolist()), tuple(curve.tolist()), c_star, peak, (lo, hi)
    )


@dataclass(frozen=True)
class ConstantRiskCertificate:
    """A rule that is Bayes for some prior and has constant risk is minimax."""

    bayes_risk: float
    optimum: float
    risk_gap: float
    tol: float = WITNESS_TOL

    @property
    def is_bayes(self) -> bool:
        return self.bayes_risk <= self.optimum + self.tol

    @property
    def holds(self) -> bool:
        return self.is_bayes and self.risk_gap <= self.tol

    def __bool__(self) -> bool:
        return self.holds


def verify_constant_risk_bayes(
    rule: DecisionRule,
    prior: Union[ThetaPrior, float],
    model: Known,
    max_n: int = DEFAULT_MAX_N,
) -> ConstantRiskCertificate:
    if not isinstance(model, Known):
        raise InvalidModel("constant-risk certificate needs known accuracies")
    if rule.n != model.n:
        raise InvalidModel(f"rule is for n={rule.n}, model for n={model.n}")
    search = brute_force_bayes(prior, model, max_n)
    return ConstantRiskCertificate(
        bayes_risk(rule, prior, model),
        search.optimum,
        constant_risk_gap(rule, model.gamma),
    )


@dataclass(frozen=True)
class Sandwich:
    """Upper and lower bounds on the minimax risk over a box.

    ``upper`` is the worst-case risk of ``candidate`` over the whole box.
    ``lower`` is the minimax risk over the two-point subset
    ``{(0, g), (1, g)}`` where ``g`` is the least informative accuracy
    vector in the box; the candidate is Bayes with constant risk there, so
    its risk at ``g`` is that minimax value. Equal bounds certify the
    candidate as minimax over the box.
    """

    candidate: DecisionRule
    reduction_point: tuple[float, ...]
    upper: float
    lower: float
    tol: float = WITNESS_TOL

    @property
    def closed(self) -> bool:
        return self.upper <= self.lower + self.tol


def reduction_point(box: ParameterBox) -> tuple[float, ...]:
    """Accuracies in the box closest to 1/2, coordinate by coordinate."""
    return tuple(
        min(max(0.5, lo), hi) for lo, hi in zip(box.gamma_lo, box.gamma_hi)
    )


def minimax_sandwich(box: ParameterBox, tie_tolerance: float = 1e-9) -> Sandwich:
    if box.theta_values != (0, 1):
        raise InvalidModel("the two-point reduction needs both states in the box")
    g = reduction_point(box)
    candidate = bayes_rule_known(0.5, g, tie_tolerance)
    upper, _ = sup_risk_box(candidate, box)
    lower = max(risk_exact(candidate, 0, g), risk_exact(candidate, 1, g))
    return Sandwich(candidate, g, upper, lower)
