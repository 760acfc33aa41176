"""Readers and writers for panel configs, vote matrices and rule tables.

Config (JSON)::

    {
      "n": 3,
      "model": {"type": "known", "gamma": [0.8, 0.8, 0.8]},
      "c": 0.5,
      "tie_tolerance": 1e-9,
      "seed": 0,
      "lfp_grid_step": 0.01,
      "max_n": 3
    }

``model`` is one of ``{"type": "known", "gamma": [...]}``,
``{"type": "beta", "alpha": [...], "beta": [...]}`` or
``{"type": "interval", "epsilon": [...]}``; a scalar is broadcast to all
``n`` experts. Optional keys: ``lfp_grid`` (explicit list of priors) and
``box`` (``{"lo": [...], "hi": [...]}``) for minimax searches.

Votes (CSV): header ``item_id,<expert labels>``, then one row per item with
cells strictly ``0`` or ``1``.

Rule table: ``2**n`` lines ``<bits>,<action>`` in pattern-index order, where
``<bits>`` lists the votes of experts 1..n and ``<action>`` is ``0``, ``1`` or
``coin``.
"""

from __future__ import annotations

import csv
import io
import json
from dataclasses import dataclass
from pathlib import Path
from typing import Union

from .model import (
    Action,
    BetaPrior,
    DecisionRule,
    Interval,
    Known,
    PanelConfig,
    ThetaPrior,
    pattern_from_index,
    pattern_index,
)

PathLike = Union[str, Path]

CONFIG_KEYS = {
    "n",
    "model",
    "c",
    "tie_tolerance",
    "seed",
    "lfp_grid_step",
    "lfp_grid",
    "max_n",
    "box",
}


class ConfigError(ValueError):
    pass


class DataError(ValueError):
    pass


def _vec(value, n: int, name: str) -> tuple:
    if isinstance(value, (int, float)) and not isinstance(value, bool):
        return (value,) * n
    if not isinstance(value, list):
        raise ConfigError(f"{name} must be a number or a list of {n} numbers")
    if len(value) != n:
        raise ConfigError(f"{name} has {len(value)} entries, expected n={n}")
    return tuple(value)


def _model(spec, n: int):
    if not isinstance(spec, dict) or "type" not in spec:
        raise ConfigError("model must be an object with a 'type' field")
    kind = spec["type"]
    fields = {
        "known": {"gamma"},
        "beta": {"alpha", "beta"},
        "interval": {"epsilon"},
    }
    if kind not in fields:
        raise ConfigError(f"unknown model type {kind!r}; use known, beta or interval")
    extra = set(spec) - fields[kind] - {"type"}
    missing = fields[kind] - set(spec)
    if extra or missing:
        raise ConfigError(
            f"{kind} model needs fields {sorted(fields[kind])}"
            + (f"; unexpected {sorted(extra)}" if extra else "")
        )
    if kind == "known":
        return Known(_vec(spec["gamma"], n, "gamma"))
    if kind == "beta":
        return BetaPrior(_vec(spec["alpha"], n, "alpha"), _vec(spec["beta"], n, "beta"))
    return Interval(_vec(spec["epsilon"], n, "epsilon"))


def parse_config(text: str) -> PanelConfig:
    try:
        raw = json.loads(text)
    except json.JSONDecodeError as exc:
        raise ConfigError(f"config is not valid JSON: {exc}") from None
    if not isinstance(raw, dict):
        raise ConfigError("config must be a JSON object")
    unknown = set(raw) - CONFIG_KEYS
    if unknown:
        raise ConfigError(f"unknown config fields: {sorted(unknown)}")
    for key in ("n", "model"):
        if key not in raw:
            raise ConfigError(f"config is missing required field {key!r}")
    n = raw["n"]
    if not isinstance(n, int) or isinstance(n, bool) or n < 1:
        raise ConfigError(f"n must be a positive integer, got {n!r}")
    kwargs = {}
    for key in ("tie_tolerance", "seed", "lfp_grid_step", "max_n"):
        if key in raw:
            kwargs[key] = raw[key]
    if "lfp_grid" in raw:
        if not isinstance(raw["lfp_grid"], list):
            raise ConfigError("lfp_grid must be a list of priors")
        kwargs["lfp_grid"] = tuple(raw["lfp_grid"])
    if "box" in raw:
        box = raw["box"]
        if not isinstance(box, dict) or set(box) != {"lo", "hi"}:
            raise ConfigError("box must be an object with fields lo and hi")
        kwargs["box_lo"] = _vec(box["lo"], n, "box.lo")
        kwargs["box_hi"] = _vec(box["hi"], n, "box.hi")
    try:
        model = _model(raw["model"], n)
        return PanelConfig(
            n=n, model=model, prior=ThetaPrior(raw.get("c", 0.5)), **kwargs
        )
    except (ValueError, TypeError) as exc:
        raise ConfigError(str(exc)) from None


def load_config(path: PathLike) -> PanelConfig:
    try:
        text = Path(path).read_text()
    except OSError as exc:
        raise ConfigError(f"cannot read config {path}: {exc.strerror}") from None
    return parse_config(text)


@dataclass(frozen=True)
class VoteMatrix:
    item_ids: tuple[str, ...]
    experts: tuple[str, ...]
    votes: tuple[tuple[int, ...], ...]

    @property
    def n(self) -> int:
        return len(self.experts)


def parse_votes(text: str, n: int) -> VoteMatrix:
    rows = list(csv.reader(io.StringIO(text)))
    if not rows:
        raise DataError("votes file is empty")
    header = [h.strip() for h in rows[0]]
    if not header or header[0] != "item_id":
        raise DataError("line 1: header must start with 'item_id'")
    experts = tuple(header[1:])
    if len(experts) != n:
        raise DataError(
            f"line 1: header names {len(experts)} experts but config has n={n}"
        )
    ids, votes = [], []
    for lineno, row in enumerate(rows[1:], start=2):
        if not row:
            continue
        if len(row) != n + 1:
            raise DataError(f"line {lineno}: expected {n + 1} cells, got {len(row)}")
        bits = []
        for col, cell in enumerate(row[1:], start=1):
            if cell not in ("0", "1"):
                raise DataError(
                    f"line {lineno}, column {col + 1} ({experts[col - 1]}): "
                    f"vote must be 0 or 1, got {cell!r}"
                )
            bits.append(int(cell))
        ids.append(row[0])
        votes.append(tuple(bits))
    return VoteMatrix(tuple(ids), experts, tuple(votes))


def load_votes(path: PathLike, n: int) -> VoteMatrix:
    try:
        text = Path(path).read_text()
    except OSError as exc:
        raise DataError(f"cannot read votes {path}: {exc.strerror}") from None
    return parse_votes(text, n)


def bits_string(index: int, n: int) -> str:
    return "".join(str(b) for b in pattern_from_index(index, n).bits)


def format_rule_table(rule: DecisionRule) -> str:
    return "".join(
        f"{bits_string(k, rule.n)},{a.token}\n" for k, a in enumerate(rule.actions)
    )


_TOKENS = {"0": Action.ZERO, "1": Action.ONE, "coin": Action.COIN, "0/1": Action.COIN}


def parse_rule_table(text: str) -> DecisionRule:
    lines = [ln.strip() for ln in text.splitlines() if ln.strip()]
    if not lines:
        raise ConfigError("rule table is empty")
    n = len(lines[0].split(",")[0])
    if n < 1:
        raise ConfigError("rule table line 1: missing pattern bits")
    if len(lines) != 2**n:
        raise ConfigError(f"rule table for n={n} needs {2**n} lines, got {len(lines)}")
    actions: dict[int, Action] = {}
    for lineno, line in enumerate(lines, start=1):
        parts = line.split(",")
        if len(parts) != 2 or len(parts[0]) != n or set(parts[0]) - {"0", "1"}:
            raise ConfigError(f"rule table line {lineno}: expected '<{n} bits>,<action>'")
        if parts[1] not in _TOKENS:
            raise ConfigError(
                f"rule table line {lineno}: action must be 0, 1 or coin, got {parts[1]!r}"
            )
        k = pattern_index(int(b) for b in parts[0])
        if k in actions:
            raise ConfigError(f"rule table line {lineno}: pattern {parts[0]} repeated")
        actions[k] = _TOKENS[parts[1]]
    return DecisionRule(tuple(actions[k] for k in range(2**n)))


def load_rule_table(path: PathLike) -> DecisionRule:
    try:
        text = Path(path).read_text()
    except OSError as exc:
        raise ConfigError(f"cannot read rule table {path}: {exc.strerror}") from None
    return parse_rule_table(text)


def format_display_table(rule: DecisionRule) -> str:
    """Human-facing table with ties shown as ``0/1``, one row per pattern."""
    out = ["opinions,decision"]
    for k, a in enumerate(rule.actions):
        bits = ",".join(str(b) for b in pattern_from_index(k, rule.n).bits)
        token = "0/1" if a is Action.COIN else str(int(a))
        out.append(f'"({bits})",{token}')
    return "\n".join(out) + "\n"
