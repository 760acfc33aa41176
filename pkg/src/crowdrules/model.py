"""Domain types for binary expert aggregation.

Opinion patterns are encoded as integers with expert 1 in the least
significant bit, so ``(1, 0, 0) -> 1`` and ``(0, 0, 1) -> 4``. A decision
rule is a total table over those ``2**n`` patterns whose entries are one of
three actions: always 0, always 1, or "output the fair coin".
"""

from __future__ import annotations

import enum
import math
from dataclasses import dataclass, field
from functools import cached_property
from typing import Iterable, Optional, Sequence, Union

import numpy as np


class InvalidModel(ValueError):
    """An accuracy model, prior or rule violates its invariants."""


class ZeroProbabilityObservation(ValueError):
    """The observed opinions are impossible under both values of the state."""


class EvenPanel(ValueError):
    """The majority rule needs an odd number of experts."""


class PanelTooLarge(ValueError):
    """Exhaustive enumeration over ``3**(2**n)`` rules is infeasible."""


class Action(enum.IntEnum):
    ZERO = 0
    ONE = 1
    COIN = 2

    @property
    def token(self) -> str:
        return "coin" if self is Action.COIN else str(int(self))


def _check_n(n: int) -> int:
    if int(n) != n or n < 1:
        raise InvalidModel(f"panel size must be a positive integer, got {n!r}")
    return int(n)


@dataclass(frozen=True)
class OpinionVector:
    """Votes ``y_1..y_n`` of the panel for a single item."""

    bits: tuple[int, ...]

    def __post_init__(self):
        bits = tuple(int(b) for b in self.bits)
        if len(bits) < 1:
            raise InvalidModel("an opinion vector needs at least one vote")
        if any(b not in (0, 1) for b in bits):
            raise InvalidModel(f"votes must be 0 or 1, got {self.bits!r}")
        if any(b != orig for b, orig in zip(bits, self.bits)):
            raise InvalidModel(f"votes must be 0 or 1, got {self.bits!r}")
        object.__setattr__(self, "bits", bits)

    @property
    def n(self) -> int:
        return len(self.bits)

    @property
    def mean(self) -> float:
        return sum(self.bits) / self.n

    def flipped(self) -> "OpinionVector":
        return OpinionVector(tuple(1 - b for b in self.bits))

    def __len__(self) -> int:
        return self.n

    def __iter__(self):
        return iter(self.bits)


def as_opinions(y: Union[OpinionVector, Iterable[int]]) -> OpinionVector:
    return y if isinstance(y, OpinionVector) else OpinionVector(tuple(y))


def pattern_index(y: Union[OpinionVector, Iterable[int]]) -> int:
    """Integer code of an opinion pattern; bit ``i`` holds expert ``i + 1``."""
    y = as_opinions(y)
    return sum(b << i for i, b in enumerate(y.bits))


def pattern_from_index(index: int, n: int) -> OpinionVector:
    n = _check_n(n)
    if not 0 <= index < 2**n:
        raise InvalidModel(f"pattern index {index} outside [0, {2**n})")
    return OpinionVector(tuple((index >> i) & 1 for i in range(n)))


def pattern_matrix(n: int, max_n: int = 24) -> np.ndarray:
    """All ``2**n`` patterns as rows of a ``(2**n, n)`` int8 array, by index."""
    n = _check_n(n)
    if n > max_n:
        raise PanelTooLarge(
            f"n={n} needs 2**{n} = {2**n} opinion patterns; limit is n={max_n}"
        )
    idx = np.arange(2**n, dtype=np.int64)[:, None]
    return ((idx >> np.arange(n)) & 1).astype(np.int8)


def _vector(values: Sequence[float], name: str) -> tuple[float, ...]:
    try:
        out = tuple(float(v) for v in values)
    except TypeError:
        raise InvalidModel(f"{name} must be a sequence of numbers") from None
    if not out:
        raise InvalidModel(f"{name} must not be empty")
    if any(math.isnan(v) for v in out):
        raise InvalidModel(f"{name} contains NaN")
    return out


@dataclass(frozen=True)
class Known:
    """Expert accuracies known exactly: ``gamma_i = P(Y_i = theta)``."""

    gamma: tuple[float, ...]

    def __post_init__(self):
        gamma = _vector(self.gamma, "gamma")
        if any(not 0.0 <= g <= 1.0 for g in gamma):
            raise InvalidModel(f"accuracies must lie in [0, 1], got {gamma}")
        object.__setattr__(self, "gamma", gamma)

    @property
    def n(self) -> int:
        return len(self.gamma)


@dataclass(frozen=True)
class BetaPrior:
    """Independent ``Beta(alpha_i, beta_i)`` priors on the accuracies."""

    alpha: tuple[float, ...]
    beta: tuple[float, ...]

    def __post_init__(self):
        alpha = _vector(self.alpha, "alpha")
        beta = _vector(self.beta, "beta")
        if len(alpha) != len(beta):
            raise InvalidModel(
                f"alpha and beta lengths differ ({len(alpha)} != {len(beta)})"
            )
        if any(not (a > 0 and math.isfinite(a)) for a in alpha + beta):
            raise InvalidModel("Beta hyperparameters must be positive and finite")
        object.__setattr__(self, "alpha", alpha)
        object.__setattr__(self, "beta", beta)

    @property
    def n(self) -> int:
        return len(self.alpha)

    @property
    def mean_accuracy(self) -> tuple[float, ...]:
        return tuple(a / (a + b) for a, b in zip(self.alpha, self.beta))


@dataclass(frozen=True)
class Interval:
    """Accuracies only known to satisfy ``gamma_i >= 1/2 + epsilon_i``."""

    epsilon: tuple[float, ...]

    def __post_init__(self):
        eps = _vector(self.epsilon, "epsilon")
        if any(not 0.0 < e < 0.5 for e in eps):
            raise InvalidModel(f"margins must satisfy 0 < epsilon < 1/2, got {eps}")
        object.__setattr__(self, "epsilon", eps)

    @property
    def n(self) -> int:
        return len(self.epsilon)

    @property
    def lower_accuracy(self) -> tuple[float, ...]:
        return tuple(0.5 + e for e in self.epsilon)


AccuracyModel = Union[Known, BetaPrior, Interval]


@dataclass(frozen=True)
class ThetaPrior:
    """Prior probability ``c = P(theta = 1)``."""

    c: float

    def __post_init__(self):
        c = float(self.c)
        if not 0.0 <= c <= 1.0:
            raise InvalidModel(f"prior probability must lie in [0, 1], got {self.c!r}")
        object.__setattr__(self, "c", c)


def as_prior(prior: Union[ThetaPrior, float]) -> ThetaPrior:
    return prior if isinstance(prior, ThetaPrior) else ThetaPrior(prior)


@dataclass(frozen=True)
class DecisionRule:
    """Total map from the ``2**n`` opinion patterns to actions.

    ``actions[k]`` is the action taken on the pattern with index ``k``.
    ``unreachable`` marks patterns that have probability zero under both
    states; it is informational and ignored by equality.
    """

    actions: tuple[Action, ...]
    unreachable: frozenset[int] = field(default=frozenset(), compare=False)

    def __post_init__(self):
        actions = tuple(Action(a) for a in self.actions)
        size = len(actions)
        if size < 2 or size & (size - 1):
            raise InvalidModel(
                f"a rule table needs 2**n entries with n >= 1, got {size}"
            )
        object.__setattr__(self, "actions", actions)
        object.__setattr__(self, "unreachable", frozenset(self.unreachable))

    @property
    def n(self) -> int:
        return len(self.actions).bit_length() - 1

    @cached_property
    def codes(self) -> np.ndarray:
        codes = np.array([int(a) for a in self.actions], dtype=np.int8)
        codes.flags.writeable = False
        return codes

    @property
    def index(self) -> int:
        """Position of this table in the base-3 enumeration of all rules."""
        return sum(int(a) * 3**k for k, a in enumerate(self.actions))

    def action(self, y: Union[OpinionVector, Iterable[int]]) -> Action:
        y = as_opinions(y)
        if y.n != self.n:
            raise InvalidModel(f"rule is for n={self.n}, got {y.n} votes")
        return self.actions[pattern_index(y)]

    @classmethod
    def from_codes(
        cls, codes: Iterable[int], unreachable: Iterable[int] = ()
    ) -> "DecisionRule":
        return cls(tuple(Action(int(c)) for c in codes), frozenset(unreachable))

    @classmethod
    def from_index(cls, index: int, n: int) -> "DecisionRule":
        n = _check_n(n)
        size = 2**n
        if not 0 <= index < 3**size:
            raise InvalidModel(f"rule index {index} outside [0, 3**{size})")
        digits = []
        for _ in range(size):
            index, d = divmod(index, 3)
            digits.append(d)
        return cls.from_codes(digits)

    @classmethod
    def constant(cls, n: int, action: Action) -> "DecisionRule":
        return cls((Action(action),) * 2 ** _check_n(n))


@dataclass(frozen=True)
class RiskReport:
    """Conditional risks of a rule under 0-1 loss."""

    risk0: float
    risk1: float
    bayes_risk: Optional[float] = None

    def __post_init__(self):
        for name in ("risk0", "risk1", "bayes_risk"):
            v = getattr(self, name)
            if v is None:
                continue
            # round-off in sums of probabilities may leave tiny excursions
            if not -1e-12 <= v <= 1.0 + 1e-12:
                raise InvalidModel(f"{name}={v} is not a probability")
            object.__setattr__(self, name, min(max(float(v), 0.0), 1.0))

    @property
    def sup_risk(self) -> float:
        return max(self.risk0, self.risk1)


@dataclass(frozen=True)
class PanelConfig:
    """Everything needed to build and evaluate rules for one panel."""

    n: int
    model: AccuracyModel
    prior: ThetaPrior = ThetaPrior(0.5)
    tie_tolerance: float = 1e-9
    seed: int = 0
    lfp_grid_step: float = 0.01
    lfp_grid: Optional[tuple[float, ...]] = None
    max_n: int = 3
    box_lo: Optional[tuple[float, ...]] = None
    box_hi: Optional[tuple[float, ...]] = None

    def __post_init__(self):
        n = _check_n(self.n)
        if self.model.n != n:
            raise InvalidModel(f"model has {self.model.n} experts but n={n}")
        if not (self.tie_tolerance >= 0 and math.isfinite(self.tie_tolerance)):
            raise InvalidModel("tie_tolerance must be a finite nonnegative number")
        if not 0 <= int(self.seed) < 2**64 or int(self.seed) != self.seed:
            raise InvalidModel("seed must be an unsigned 64-bit integer")
        if not 0 < self.lfp_grid_step <= 1:
            raise InvalidModel("lfp_grid_step must lie in (0, 1]")
        if self.lfp_grid is not None:
            grid = _vector(self.lfp_grid, "lfp_grid")
            if any(not 0 <= g <= 1 for g in grid):
                raise InvalidModel("lfp_grid values must lie in [0, 1]")
            object.__setattr__(self, "lfp_grid", grid)
        if self.max_n < 1:
            raise InvalidModel("max_n must be at least 1")
        if (self.box_lo is None) != (self.box_hi is None):
            raise InvalidModel("box needs both lo and hi")
        if self.box_lo is not None:
            lo = _vector(self.box_lo, "box lo")
            hi = _vector(self.box_hi, "box hi")
            if len(lo) != n or len(hi) != n:
                raise InvalidModel(f"box bounds must have length n={n}")
            if any(not 0 <= a <= b <= 1 for a, b in zip(lo, hi)):
                raise InvalidModel("box bounds need 0 <= lo_i <= hi_i <= 1")
            object.__setattr__(self, "box_lo", lo)
            object.__setattr__(self, "box_hi", hi)
        object.__setattr__(self, "n", n)
        object.__setattr__(self, "seed", int(self.seed))
