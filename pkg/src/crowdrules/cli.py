"""Command line front end.

Subcommands: ``aggregate``, ``risk``, ``minimax``, ``lfp`` and ``simulate``.
Exit codes: 0 success, 2 config error, 3 data error, 4 infeasible search.
"""

from __future__ import annotations

import argparse
import json
import logging
import sys
from pathlib import Path
from typing import Optional, Sequence

import numpy as np

from . import bayes, minimax, risk
from .fileformats import (
    ConfigError,
    DataError,
    format_display_table,
    format_rule_table,
    load_config,
    load_rule_table,
    load_votes,
)
from .model import (
    Action,
    BetaPrior,
    DecisionRule,
    EvenPanel,
    Interval,
    InvalidModel,
    Known,
    PanelConfig,
    PanelTooLarge,
    ZeroProbabilityObservation,
    pattern_matrix,
)

logger = logging.getLogger("crowdrules")

EXIT_OK, EXIT_CONFIG, EXIT_DATA, EXIT_INFEASIBLE = 0, 2, 3, 4
NAMED_RULES = ("bayes", "majority", "coinflip", "interval-minimax")
# companion display tables are only written for panels this small
DISPLAY_MAX_N = 12


def default_rule(config: PanelConfig) -> str:
    return "interval-minimax" if isinstance(config.model, Interval) else "bayes"


def rule_actions(spec: str, config: PanelConfig, patterns: np.ndarray) -> np.ndarray:
    """Action codes of the named rule (or rule-table file) on each row."""
    model, tol = config.model, config.tie_tolerance
    patterns = np.atleast_2d(patterns)
    if spec == "bayes":
        if isinstance(model, Known):
            return bayes.bayes_actions_known(config.prior, model, patterns, tol)[0]
        if isinstance(model, BetaPrior):
            return bayes.bayes_actions_beta(
                config.prior, model.alpha, model.beta, patterns, tol
            )
        raise ConfigError("rule 'bayes' needs a known or beta model")
    if spec == "majority":
        if config.n % 2 == 0:
            raise EvenPanel(f"the majority rule needs an odd panel, got n={config.n}")
        return np.where(2 * patterns.sum(axis=1) > config.n, 1, 0).astype(np.int8)
    if spec == "coinflip":
        return np.full(len(patterns), int(Action.COIN), dtype=np.int8)
    if spec == "interval-minimax":
        if not isinstance(model, Interval):
            raise ConfigError("rule 'interval-minimax' needs an interval model")
        return bayes.bayes_actions_known(0.5, model.lower_accuracy, patterns, tol)[0]
    table = load_rule_table(spec)
    if table.n != config.n:
        raise ConfigError(f"rule table {spec} is for n={table.n}, config has n={config.n}")
    idx = patterns.astype(np.int64) @ (1 << np.arange(config.n, dtype=np.int64))
    return table.codes[idx]


def build_rule(spec: str, config: PanelConfig) -> DecisionRule:
    if spec not in NAMED_RULES:
        table = load_rule_table(spec)
        if table.n != config.n:
            raise ConfigError(
                f"rule table {spec} is for n={table.n}, config has n={config.n}"
            )
        return table
    return DecisionRule.from_codes(rule_actions(spec, config, pattern_matrix(config.n)))


def evaluation_gammas(config: PanelConfig) -> tuple[float, ...]:
    """Accuracies at which point risks are evaluated for this config."""
    model = config.model
    if isinstance(model, Known):
        return model.gamma
    if isinstance(model, BetaPrior):
        return model.mean_accuracy
    return model.lower_accuracy


def config_box(config: PanelConfig) -> risk.ParameterBox:
    if config.box_lo is not None:
        return risk.ParameterBox(config.box_lo, config.box_hi)
    model = config.model
    if isinstance(model, Interval):
        return risk.ParameterBox.from_interval(model)
    if isinstance(model, Known):
        return risk.ParameterBox.point(model.gamma)
    return risk.ParameterBox.full(config.n)


def _posterior(config: PanelConfig, bits) -> float:
    model = config.model
    if isinstance(model, Known):
        return bayes.posterior_known(config.prior, model, bits)
    if isinstance(model, BetaPrior):
        return bayes.posterior_beta(config.prior, model.alpha, model.beta, bits)
    # the interval rule is Bayes against an even prior at the lower accuracies
    return bayes.posterior_known(0.5, model.lower_accuracy, bits)


def _coin(seed: int, row: int) -> int:
    return int(np.random.default_rng([seed, row]).integers(0, 2))


def _write(path, text: str) -> None:
    Path(path).write_text(text)


def _dump(obj) -> str:
    return json.dumps(obj, indent=2) + "\n"


def _companion(out, suffix: str) -> Path:
    out = Path(out)
    return out.with_name(out.stem + suffix)


def aggregate(config_path, votes_path, output_path, rule: Optional[str] = None,
              seed: Optional[int] = None) -> int:
    """Decide every item of a vote matrix and write one record per row."""
    config = load_config(config_path)
    seed = config.seed if seed is None else seed
    spec = rule or default_rule(config)
    matrix = load_votes(votes_path, config.n)
    patterns = np.array(matrix.votes, dtype=np.int8).reshape(-1, config.n)
    codes = rule_actions(spec, config, patterns) if len(patterns) else []
    lines = ["item_id,decision,posterior,tied,coin_outcome"]
    for row, (item, bits, code) in enumerate(zip(matrix.item_ids, matrix.votes, codes)):
        try:
            post = _posterior(config, bits)
        except ZeroProbabilityObservation as exc:
            raise DataError(f"line {row + 2} ({item}): {exc}") from None
        if code == Action.COIN:
            outcome = _coin(seed, row)
            lines.append(f"{item},{outcome},{post!r},true,{outcome}")
        else:
            lines.append(f"{item},{int(code)},{post!r},false,")
    _write(output_path, "\n".join(lines) + "\n")
    if config.n <= DISPLAY_MAX_N:
        table = DecisionRule.from_codes(
            rule_actions(spec, config, pattern_matrix(config.n))
        )
        _write(_companion(output_path, ".table.csv"), format_display_table(table))
    logger.info("wrote %d decisions to %s", len(matrix.item_ids), output_path)
    return EXIT_OK


def report_risk(config_path, rule_spec, output_path) -> int:
    config = load_config(config_path)
    rule = build_rule(rule_spec or default_rule(config), config)
    model = config.model
    if isinstance(model, Interval):
        box = risk.ParameterBox.from_interval(model)
        r0 = risk.sup_risk_box(rule, risk.ParameterBox(box.gamma_lo, box.gamma_hi, (0,)))[0]
        r1 = risk.sup_risk_box(rule, risk.ParameterBox(box.gamma_lo, box.gamma_hi, (1,)))[0]
        report = {"risk0": r0, "risk1": r1, "sup_risk": max(r0, r1), "bayes_risk": None}
    else:
        rep = risk.risk_report(rule, evaluation_gammas(config), config.prior)
        report = {
            "risk0": rep.risk0,
            "risk1": rep.risk1,
            "sup_risk": rep.sup_risk,
            "bayes_risk": rep.bayes_risk,
        }
    report["table"] = format_rule_table(rule).splitlines()
    _write(output_path, _dump(report))
    _write(_companion(output_path, ".rule.csv"), format_rule_table(rule))
    return EXIT_OK


def report_minimax(config_path, output_path) -> int:
    config = load_config(config_path)
    box = config_box(config)
    result = minimax.brute_force_minimax(box, config.max_n)
    sandwich = minimax.minimax_sandwich(box, config.tie_tolerance)
    doc = {
        "n": config.n,
        "box": {"lo": list(box.gamma_lo), "hi": list(box.gamma_hi)},
        "value": result.optimum,
        "enumerated": result.enumerated,
        "witnesses": [
            {"index": r.index, "table": format_rule_table(r).splitlines()}
            for r in result.witness_rules()
        ],
        "candidate": format_rule_table(sandwich.candidate).splitlines(),
        "reduction_point": list(sandwich.reduction_point),
        "upper": sandwich.upper,
        "lower": sandwich.lower,
        "closed": sandwich.closed,
    }
    _write(output_path, _dump(doc))
    return EXIT_OK


def report_lfp(config_path, output_path) -> int:
    config = load_config(config_path)
    if not isinstance(config.model, Known):
        raise ConfigError("lfp needs a known model")
    grid = config.lfp_grid if config.lfp_grid is not None else minimax.prior_grid(
        config.lfp_grid_step
    )
    scan = minimax.least_favorable_scan(config.model, grid, config.tie_tolerance)
    rows = ["c,bayes_risk"] + [f"{c!r},{r!r}" for c, r in zip(scan.grid, scan.curve)]
    _write(output_path, "\n".join(rows) + "\n")
    summary = {
        "c_star": scan.c_star,
        "peak": scan.peak,
        "plateau": list(scan.plateau),
        "flat": scan.flat,
    }
    _write(_companion(output_path, ".argmax.json"), _dump(summary))
    return EXIT_OK


def simulate(config_path, trials: int, output_path, rule: Optional[str] = None,
             seed: Optional[int] = None) -> int:
    config = load_config(config_path)
    if trials < 1:
        raise ConfigError("trials must be at least 1")
    seed = config.seed if seed is None else seed
    decision_rule = build_rule(rule or default_rule(config), config)
    gamma = evaluation_gammas(config)
    doc = {"trials": trials, "seed": seed, "gamma": list(gamma),
           "table": format_rule_table(decision_rule).splitlines()}
    for theta in (0, 1):
        est, se = risk.monte_carlo_risk(decision_rule, theta, gamma, trials, [seed, theta])
        exact = risk.risk_exact(decision_rule, theta, gamma)
        if se > 0:
            z = (est - exact) / se
        else:
            z = 0.0 if est == exact else None
        doc[f"theta{theta}"] = {"estimate": est, "se": se, "exact": exact, "z": z}
    _write(output_path, _dump(doc))
    return EXIT_OK


def build_parser() -> argparse.ArgumentParser:
    parser = argparse.ArgumentParser(
        prog="crowdrules", description="Bayes and minimax aggregation of binary expert votes"
    )
    sub = parser.add_subparsers(dest="command", required=True)

    p = sub.add_parser("aggregate", help="decide every item in a vote CSV")
    p.add_argument("--config", required=True)
    p.add_argument("--votes", required=True)
    p.add_argument("--out", required=True)
    p.add_argument("--rule", help="bayes, majority, coinflip, interval-minimax or a rule table")
    p.add_argument("--seed", type=int, help="overrides the config seed")

    p = sub.add_parser("risk", help="risk report and action table of a rule")
    p.add_argument("--config", required=True)
    p.add_argument("--rule")
    p.add_argument("--out", required=True)

    p = sub.add_parser("minimax", help="exhaustive minimax search with bound sandwich")
    p.add_argument("--config", required=True)
    p.add_argument("--out", required=True)

    p = sub.add_parser("lfp", help="Bayes-risk curve over priors and its argmax")
    p.add_argument("--config", required=True)
    p.add_argument("--out", required=True)

    p = sub.add_parser("simulate", help="Monte Carlo risk against the exact value")
    p.add_argument("--config", required=True)
    p.add_argument("--trials", type=int, required=True)
    p.add_argument("--out", required=True)
    p.add_argument("--rule")
    p.add_argument("--seed", type=int, help="overrides the config seed")
    return parser


def main(argv: Optional[Sequence[str]] = None) -> int:
    logging.basicConfig(level=logging.WARNING, format="%(name)s: %(message)s")
    args = build_parser().parse_args(argv)
    try:
        if args.command == "aggregate":
            return aggregate(args.config, args.votes, args.out, args.rule, args.seed)
        if args.command == "risk":
            return report_risk(args.config, args.rule, args.out)
        if args.command == "minimax":
            return report_minimax(args.config, args.out)
        if args.command == "lfp":
            return report_lfp(args.config, args.out)
        return simulate(args.config, args.trials, args.out, args.rule, args.seed)
    except PanelTooLarge as exc:
        print(f"error: {exc}", file=sys.stderr)
        return EXIT_INFEASIBLE
    except DataError as exc:
        print(f"data error: {exc}", file=sys.stderr)
        return EXIT_DATA
    except (ConfigError, EvenPanel, InvalidModel) as exc:
        print(f"config error: {exc}", file=sys.stderr)
        return EXIT_CONFIG
    except OSError as exc:
        print(f"error: {exc}", file=sys.stderr)
        return EXIT_DATA


if __name__ == "__main__":
    sys.exit(main())
