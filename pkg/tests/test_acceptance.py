"""Exit criteria for the package, one test per criterion.

Run with ``pytest tests/test_acceptance.py``; a PASS/FAIL line per criterion
is printed in the terminal summary.
"""

import time

import numpy as np
import pytest

import oracles
from crowdrules.bayes import bayes_rule_beta, bayes_rule_known
from crowdrules.minimax import (
    brute_force_bayes,
    brute_force_minimax,
    coin_flip_rule,
    least_favorable_scan,
    majority_rule,
    prior_grid,
)
from crowdrules.model import Action, BetaPrior, DecisionRule, Known
from crowdrules.risk import (
    ParameterBox,
    bayes_risk,
    constant_risk_gap,
    monte_carlo_risk,
    risk_exact,
    sup_risk_box,
)

# Expected rule tables for the three Beta priors, row by row; "0/1" marks patterns where both actions are Bayes.
GOLDEN_ROWS = [(0, 0, 0), (1, 0, 0), (0, 1, 0), (0, 0, 1), (1, 1, 0), (1, 0, 1), (0, 1, 1), (1, 1, 1)]
GOLDEN = {
    "prior1": ((5, 1, 1), (2, 1, 1), ["0", "1", "0", "0", "1", "1", "0", "1"]),
    "prior2": ((5, 5, 1), (2, 2, 1), ["0", "0/1", "0/1", "0", "1", "0/1", "0/1", "1"]),
    "prior3": ((5, 5, 2), (2, 2, 5), ["0", "1", "1", "0", "1", "0", "0", "1"]),
}
TOKEN = {Action.ZERO: "0", Action.ONE: "1", Action.COIN: "0/1"}

MC_SEED = 20240101


def test_criterion_1_beta_prior_tables_golden():
    start = time.perf_counter()
    cells = 0
    for name, (alpha, beta, column) in GOLDEN.items():
        rule = bayes_rule_beta(0.5, alpha, beta)
        for y, expected in zip(GOLDEN_ROWS, column):
            assert TOKEN[rule.action(y)] == expected, (name, y)
            cells += 1
    assert cells == 24
    assert time.perf_counter() - start < 1.0


def test_criterion_2_extensive_equals_normal_form():
    rng = np.random.default_rng(2)
    start = time.perf_counter()
    for trial in range(100):
        n = int(rng.choice([1, 3]))
        c = float(rng.uniform())
        if trial % 2 == 0:
            model = Known(tuple(rng.uniform(size=n)))
            rule = bayes_rule_known(c, model)
        else:
            model = BetaPrior(tuple(rng.uniform(0.5, 6, n)), tuple(rng.uniform(0.5, 6, n)))
            rule = bayes_rule_beta(c, model.alpha, model.beta)
        optimum = brute_force_bayes(c, model).optimum
        assert bayes_risk(rule, c, model) <= optimum + 1e-12
    assert time.perf_counter() - start < 10.0


def test_criterion_3_constant_risk_even_prior():
    rng = np.random.default_rng(3)
    for _ in range(100):
        g = rng.uniform(size=3)
        assert constant_risk_gap(bayes_rule_known(0.5, g), g) <= 1e-12


def test_criterion_4_full_space_minimax_is_coin():
    box = ParameterBox.full(3)
    res = brute_force_minimax(box)
    assert abs(res.optimum - 0.5) <= 1e-12
    assert res.witness_rules() == [coin_flip_rule(3)]
    deterministic = 0
    for k in range(3**8):
        rule = DecisionRule.from_index(k, 3)
        if all(a is Action.COIN for a in rule.actions):
            continue
        assert sup_risk_box(rule, box)[0] == 1.0
        deterministic += 1
    assert deterministic == 3**8 - 1


def test_criterion_5_restricted_minimax_is_majority():
    expected = 3 * 0.4**2 * 0.6 + 0.4**3
    maj_table = [int(a) for a in majority_rule(3).actions]
    assert oracles.risk(maj_table, 0, [0.6] * 3) == pytest.approx(expected, abs=1e-15)
    assert abs(expected - 0.352) <= 1e-12

    box = ParameterBox((0.6,) * 3, (1.0,) * 3)
    res = brute_force_minimax(box)
    assert abs(res.optimum - 0.352) <= 1e-12
    assert majority_rule(3) in res
    upper = sup_risk_box(majority_rule(3), box)[0]
    lower = brute_force_minimax(ParameterBox.point([0.6] * 3)).optimum
    assert abs(upper - res.optimum) <= 1e-12
    assert abs(upper - lower) <= 1e-12


def test_criterion_6_least_favorable_prior():
    scan = least_favorable_scan(Known((0.8, 0.8, 0.8)), prior_grid(0.01))
    assert scan.c_star == pytest.approx(0.50, abs=1e-12)


def test_criterion_7_beta_reduces_to_known():
    rng = np.random.default_rng(7)
    for _ in range(100):
        n = int(rng.integers(1, 5))
        a, b = rng.uniform(0.5, 6, n), rng.uniform(0.5, 6, n)
        c = float(rng.uniform())
        assert bayes_rule_beta(c, a, b).actions == bayes_rule_known(c, a / (a + b)).actions


def test_criterion_8_monte_carlo_consistency():
    est, se = monte_carlo_risk(majority_rule(3), 0, [0.8] * 3, 100_000, seed=MC_SEED)
    assert se > 0
    assert abs(est - 0.104) <= 4 * se


def test_criterion_9_risk_is_affine_per_accuracy():
    rng = np.random.default_rng(9)
    for _ in range(50):
        rule = DecisionRule.from_index(int(rng.integers(3**8)), 3)
        theta = int(rng.integers(2))
        g = rng.uniform(size=3)
        i = int(rng.integers(3))
        t = np.sort(rng.uniform(size=3))
        vals = []
        for ti in t:
            gg = g.copy()
            gg[i] = ti
            vals.append(risk_exact(rule, theta, gg))
        # collinearity of (t_k, R_k)
        slope = (vals[2] - vals[0]) / (t[2] - t[0])
        assert abs(vals[0] + slope * (t[1] - t[0]) - vals[1]) <= 1e-12
