import csv
import json
import shutil
import subprocess
import sys

import pytest

from crowdrules.cli import main
from crowdrules.fileformats import (
    ConfigError,
    DataError,
    format_rule_table,
    parse_config,
    parse_rule_table,
    parse_votes,
)
from crowdrules.minimax import majority_rule
from crowdrules.model import Action, DecisionRule, Interval, Known


def run(*args):
    return main([str(a) for a in args])


def read_records(path):
    with open(path) as fh:
        return {r["item_id"]: r for r in csv.DictReader(fh)}


class TestFormats:
    def test_config_broadcast(self):
        cfg = parse_config('{"n": 3, "model": {"type": "interval", "epsilon": 0.1}}')
        assert cfg.model == Interval((0.1, 0.1, 0.1))
        assert cfg.prior.c == 0.5 and cfg.seed == 0

    @pytest.mark.parametrize(
        "text",
        [
            "not json",
            "[]",
            '{"model": {"type": "known", "gamma": 0.5}}',
            '{"n": 2, "model": {"type": "known", "gamma": [0.5]}}',
            '{"n": 1, "model": {"type": "weird"}}',
            '{"n": 1, "model": {"type": "known", "gamma": 2}}',
            '{"n": 1, "model": {"type": "known", "gamma": 0.5}, "colour": 1}',
            '{"n": 1, "model": {"type": "known", "gamma": 0.5}, "c": 3}',
            '{"n": 1, "model": {"type": "beta", "alpha": 1}}',
            '{"n": 1, "model": {"type": "known", "gamma": 0.5}, "box": {"lo": 0.7, "hi": 0.6}}',
        ],
    )
    def test_bad_configs(self, text):
        with pytest.raises(ConfigError):
            parse_config(text)

    def test_votes(self):
        m = parse_votes("item_id,a,b\nx,1,0\ny,0,0\n", 2)
        assert m.votes == ((1, 0), (0, 0)) and m.item_ids == ("x", "y")

    @pytest.mark.parametrize(
        "text, where",
        [
            ("id,a,b\nx,1,0\n", "line 1"),
            ("item_id,a\nx,1\n", "line 1"),
            ("item_id,a,b\nx,1\n", "line 2"),
            ("item_id,a,b\nx,1,0\ny,1,2\n", "line 3, column 3 (b)"),
            ("item_id,a,b\nx, 1,0\n", "line 2, column 2 (a)"),
        ],
    )
    def test_bad_votes(self, text, where):
        with pytest.raises(DataError, match=r"^" + where.replace("(", r"\(").replace(")", r"\)")):
            parse_votes(text, 2)

    def test_rule_table_roundtrip(self):
        for k in (0, 777, 3**8 - 1):
            rule = DecisionRule.from_index(k, 3)
            assert parse_rule_table(format_rule_table(rule)) == rule

    def test_rule_table_format(self):
        text = format_rule_table(DecisionRule.from_codes([0, 2, 1, 1]))
        assert text == "00,0\n10,coin\n01,1\n11,1\n"

    @pytest.mark.parametrize("text", ["", "0,0\n", "0,0\n1,x\n", "0,0\n0,1\n", "00,0\n1,1\n"])
    def test_bad_rule_tables(self, text):
        with pytest.raises(ConfigError):
            parse_rule_table(text)


class TestAggregate:
    def test_beta_prior_tables_golden(self, tmp_path, data_dir):
        for k in (1, 2, 3):
            out = tmp_path / f"prior{k}.csv"
            assert run("aggregate", "--config", data_dir / f"prior{k}.json",
                       "--votes", data_dir / "all_patterns.csv", "--out", out) == 0
            produced = (tmp_path / f"prior{k}.table.csv").read_bytes()
            assert produced == (data_dir / f"golden_prior{k}.csv").read_bytes()

    def test_prior3_row(self, tmp_path, data_dir):
        out = tmp_path / "o.csv"
        run("aggregate", "--config", data_dir / "prior3.json",
            "--votes", data_dir / "all_patterns.csv", "--out", out)
        rec = read_records(out)["g101"]
        assert rec["decision"] == "0" and rec["tied"] == "false" and rec["coin_outcome"] == ""

    def test_prior2_tie_is_seeded(self, tmp_path, data_dir):
        out = tmp_path / "o.csv"
        run("aggregate", "--config", data_dir / "prior2.json",
            "--votes", data_dir / "all_patterns.csv", "--out", out)
        recs = read_records(out)
        rec = recs["g100"]
        assert rec["tied"] == "true" and rec["decision"] == rec["coin_outcome"]
        assert float(rec["posterior"]) == pytest.approx(0.5)
        assert recs["g110"]["tied"] == "false"

    def test_seed_override_changes_only_ties(self, tmp_path, data_dir):
        outcomes = set()
        for seed in range(8):
            out = tmp_path / f"o{seed}.csv"
            run("aggregate", "--config", data_dir / "prior2.json",
                "--votes", data_dir / "all_patterns.csv", "--out", out, "--seed", seed)
            recs = read_records(out)
            outcomes.add(tuple(recs[i]["decision"] for i in ("g100", "g010", "g101", "g011")))
            assert recs["g111"]["decision"] == "1" and recs["g000"]["decision"] == "0"
        assert len(outcomes) > 1

    def test_certain_experts(self, tmp_path, data_dir):
        out = tmp_path / "o.csv"
        # (1,0,0) is impossible under both states
        assert run("aggregate", "--config", data_dir / "certain.json",
                   "--votes", data_dir / "all_patterns.csv", "--out", out) == 3
        votes = tmp_path / "v.csv"
        votes.write_text("item_id,a,b,c\nz,1,1,1\n")
        assert run("aggregate", "--config", data_dir / "certain.json",
                   "--votes", votes, "--out", out) == 0
        rec = read_records(out)["z"]
        assert rec["decision"] == "1" and float(rec["posterior"]) == 1.0

    def test_byte_identical(self, tmp_path, data_dir):
        outs = []
        for name in ("a.csv", "b.csv"):
            run("aggregate", "--config", data_dir / "prior2.json",
                "--votes", data_dir / "all_patterns.csv", "--out", tmp_path / name)
            outs.append((tmp_path / name).read_bytes())
        assert outs[0] == outs[1]

    def test_exit_codes(self, tmp_path, data_dir):
        bad_votes = tmp_path / "bad.csv"
        bad_votes.write_text("item_id,a,b,c\nx,1,0,?\n")
        assert run("aggregate", "--config", data_dir / "prior1.json",
                   "--votes", bad_votes, "--out", tmp_path / "o.csv") == 3
        bad_cfg = tmp_path / "bad.json"
        bad_cfg.write_text('{"n": 3}')
        assert run("aggregate", "--config", bad_cfg,
                   "--votes", data_dir / "all_patterns.csv", "--out", tmp_path / "o.csv") == 2
        assert run("aggregate", "--config", tmp_path / "missing.json",
                   "--votes", data_dir / "all_patterns.csv", "--out", tmp_path / "o.csv") == 2

    def test_large_panel(self, tmp_path):
        cfg = tmp_path / "big.json"
        cfg.write_text(json.dumps({"n": 41, "model": {"type": "known", "gamma": 0.7}}))
        votes = tmp_path / "v.csv"
        header = ",".join(["item_id"] + [f"e{i}" for i in range(41)])
        votes.write_text(header + "\nq," + ",".join(["1"] * 21 + ["0"] * 20) + "\n")
        assert run("aggregate", "--config", cfg, "--votes", votes, "--out", tmp_path / "o.csv") == 0
        assert read_records(tmp_path / "o.csv")["q"]["decision"] == "1"
        assert not (tmp_path / "o.table.csv").exists()


class TestRisk:
    def test_majority(self, tmp_path, data_dir):
        out = tmp_path / "maj.json"
        assert run("risk", "--config", data_dir / "known08.json", "--rule", "majority", "--out", out) == 0
        doc = json.loads(out.read_text())
        assert doc["risk0"] == pytest.approx(0.104, abs=1e-12)
        assert doc["risk1"] == pytest.approx(0.104, abs=1e-12)

    def test_bayes_file_identical_to_majority(self, tmp_path, data_dir):
        run("risk", "--config", data_dir / "known08.json", "--rule", "majority", "--out", tmp_path / "m.json")
        run("risk", "--config", data_dir / "known08.json", "--rule", "bayes", "--out", tmp_path / "b.json")
        assert (tmp_path / "m.json").read_bytes() == (tmp_path / "b.json").read_bytes()

    def test_coinflip(self, tmp_path, data_dir):
        out = tmp_path / "c.json"
        run("risk", "--config", data_dir / "prior1.json", "--rule", "coinflip", "--out", out)
        doc = json.loads(out.read_text())
        assert doc["risk0"] == doc["risk1"] == 0.5

    def test_table_roundtrip(self, tmp_path, data_dir):
        run("risk", "--config", data_dir / "prior2.json", "--rule", "bayes", "--out", tmp_path / "r.json")
        table = tmp_path / "r.rule.csv"
        from crowdrules.fileformats import load_rule_table
        from crowdrules.bayes import bayes_rule_beta

        assert load_rule_table(table) == bayes_rule_beta(0.5, [5, 5, 1], [2, 2, 1])
        assert run("risk", "--config", data_dir / "prior2.json", "--rule", table,
                   "--out", tmp_path / "again.json") == 0
        assert (tmp_path / "again.json").read_bytes() == (tmp_path / "r.json").read_bytes()

    def test_even_majority_is_config_error(self, tmp_path):
        cfg = tmp_path / "even.json"
        cfg.write_text('{"n": 2, "model": {"type": "known", "gamma": 0.7}}')
        assert run("risk", "--config", cfg, "--rule", "majority", "--out", tmp_path / "o.json") == 2

    def test_interval_reports_worst_case(self, tmp_path, data_dir):
        out = tmp_path / "i.json"
        run("risk", "--config", data_dir / "interval01.json", "--out", out)
        doc = json.loads(out.read_text())
        assert doc["sup_risk"] == pytest.approx(0.352, abs=1e-12)
        assert doc["bayes_risk"] is None


class TestMinimaxCommand:
    def test_interval(self, tmp_path, data_dir):
        out = tmp_path / "mm.json"
        assert run("minimax", "--config", data_dir / "interval01.json", "--out", out) == 0
        doc = json.loads(out.read_text())
        assert doc["value"] == pytest.approx(0.352, abs=1e-12)
        assert majority_rule(3).index in [w["index"] for w in doc["witnesses"]]
        assert doc["closed"] and doc["upper"] == pytest.approx(doc["lower"], abs=1e-12)

    def test_full_box(self, tmp_path, data_dir):
        out = tmp_path / "mm.json"
        run("minimax", "--config", data_dir / "fullbox3.json", "--out", out)
        doc = json.loads(out.read_text())
        assert doc["value"] == pytest.approx(0.5, abs=1e-12)
        assert len(doc["witnesses"]) == 1
        assert all(line.endswith(",coin") for line in doc["witnesses"][0]["table"])

    def test_too_large(self, tmp_path, data_dir, capsys):
        assert run("minimax", "--config", data_dir / "fullbox5.json", "--out", tmp_path / "x.json") == 4
        assert "3**(2**5)" in capsys.readouterr().err


class TestLfp:
    def test_peak(self, tmp_path, data_dir):
        out = tmp_path / "lfp.csv"
        assert run("lfp", "--config", data_dir / "known08.json", "--out", out) == 0
        summary = json.loads((tmp_path / "lfp.argmax.json").read_text())
        assert summary["c_star"] == pytest.approx(0.5)
        rows = list(csv.DictReader(out.open()))
        assert len(rows) == 99

    def test_uninformative(self, tmp_path, data_dir):
        run("lfp", "--config", data_dir / "known05.json", "--out", tmp_path / "l.csv")
        summary = json.loads((tmp_path / "l.argmax.json").read_text())
        assert summary["c_star"] == pytest.approx(0.5) and summary["peak"] == pytest.approx(0.5)

    def test_single_point_grid(self, tmp_path):
        cfg = tmp_path / "c.json"
        cfg.write_text('{"n": 1, "model": {"type": "known", "gamma": 0.9}, "lfp_grid": [0.3]}')
        run("lfp", "--config", cfg, "--out", tmp_path / "l.csv")
        assert json.loads((tmp_path / "l.argmax.json").read_text())["c_star"] == 0.3

    def test_non_known_is_config_error(self, tmp_path, data_dir):
        assert run("lfp", "--config", data_dir / "prior1.json", "--out", tmp_path / "l.csv") == 2


class TestSimulate:
    def test_majority(self, tmp_path, data_dir):
        out = tmp_path / "s.json"
        assert run("simulate", "--config", data_dir / "known08.json", "--rule", "majority",
                   "--trials", 100000, "--out", out) == 0
        doc = json.loads(out.read_text())
        for key in ("theta0", "theta1"):
            assert doc[key]["exact"] == pytest.approx(0.104, abs=1e-12)
            assert abs(doc[key]["z"]) <= 4

    def test_constant_one(self, tmp_path, data_dir):
        table = tmp_path / "one.csv"
        table.write_text(format_rule_table(DecisionRule.constant(3, Action.ONE)))
        out = tmp_path / "s.json"
        run("simulate", "--config", data_dir / "known08.json", "--rule", table, "--trials", 1000, "--out", out)
        doc = json.loads(out.read_text())
        assert doc["theta1"]["estimate"] == 0.0 and doc["theta1"]["exact"] == 0.0

    def test_coinflip_deterministic(self, tmp_path, data_dir):
        outs = []
        for name in ("a.json", "b.json"):
            run("simulate", "--config", data_dir / "known08.json", "--rule", "coinflip",
                "--trials", 100000, "--out", tmp_path / name)
            outs.append((tmp_path / name).read_text())
        assert outs[0] == outs[1]
        doc = json.loads(outs[0])
        assert abs(doc["theta0"]["estimate"] - 0.5) <= 4 * doc["theta0"]["se"]


@pytest.mark.skipif(shutil.which("crowdrules") is None, reason="console script not installed")
def test_console_script(tmp_path, data_dir):
    proc = subprocess.run(
        ["crowdrules", "lfp", "--config", str(data_dir / "known08.json"), "--out", str(tmp_path / "l.csv")],
        capture_output=True,
    )
    assert proc.returncode == 0


def test_module_entry(tmp_path, data_dir):
    proc = subprocess.run(
        [sys.executable, "-m", "crowdrules.cli", "minimax", "--config",
         str(data_dir / "fullbox5.json"), "--out", str(tmp_path / "x.json")],
        capture_output=True, text=True,
    )
    assert proc.returncode == 4
