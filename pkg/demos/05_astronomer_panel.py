"""
A large synthetic panel through the command line
================================================

``data/astronomers42.json`` describes 42 synthetic experts: 36 barely
better than a coin (accuracy 0.5 to 0.6) and six strong ones (0.8 to 0.9).
``data/astronomers42_votes.csv`` holds their votes on 200 simulated
galaxies, with true labels in ``data/astronomers42_truth.json``. With
``2**42`` possible patterns no rule table is built; decisions are computed row by row.

Run from the repository root::

    python demos/05_astronomer_panel.py
"""

import csv
import json
import tempfile
from pathlib import Path

from crowdrules.cli import main

here = Path(__file__).parent / "data"
truth = json.loads((here / "astronomers42_truth.json").read_text())

with tempfile.TemporaryDirectory() as tmp:
    out = Path(tmp) / "decisions.csv"
    status = main(["aggregate", "--config", str(here / "astronomers42.json"),
                   "--votes", str(here / "astronomers42_votes.csv"), "--out", str(out)])
    assert status == 0
    with out.open() as fh:
        decisions = {r["item_id"]: int(r["decision"]) for r in csv.DictReader(fh)}

# an unweighted head count for comparison (an even panel can tie)
with (here / "astronomers42_votes.csv").open() as fh:
    counts = {r.pop("item_id"): sum(map(int, r.values())) for r in csv.DictReader(fh)}
unweighted = {k: 1 if 2 * s > 42 else 0 if 2 * s < 42 else None for k, s in counts.items()}

print("weighted Bayes vote:", sum(decisions[k] == truth[k] for k in truth), "/", len(truth))
print("plain head count:  ", sum(unweighted[k] == truth[k] for k in truth), "/", len(truth),
      f"({sum(v is None for v in unweighted.values())} ties)")
