import json
from pathlib import Path

import pytest

import bmlab

SCENES = Path(__file__).resolve().parents[2] / "scenes"


def test_version_and_rationals():
    assert bmlab.__version__ == "0.1.0"
    assert bmlab.normalize_rational("12/16") == "3/4"
    with pytest.raises(bmlab.BmlabError):
        bmlab.normalize_rational("0.5")


def test_report_on_shipped_scene():
    scene = json.loads((SCENES / "constant_n2.json").read_text())
    out = bmlab.report_scene(scene)
    assert out["expected"]["pass"]
    assert out["report"]["t"] == "1/2"


def test_scene_errors_carry_position():
    with pytest.raises(ValueError, match="line 1, column"):
        bmlab.report_scene('{"name": "x",,}')


def test_constant_example():
    v = bmlab.example("constant", 2, "2", h="1/64")
    assert v["strict"]
    assert {c["quantity"] for c in v["checks"]} == {"delta_At", "hull_deficit"}


def test_explorer_beats_inverse_at_half():
    s = bmlab.explore(2, "1/2", lns_iterations=40)
    assert s["verified"] and s["verification"] == "exact"
    assert s["ratio"] == "3/2"
    assert bmlab.explore(1, "2/5")["ratio"] == "6/5"


def test_constant_audit_and_budget_error():
    assert bmlab.constant_audit(3, "1/2", "1/2")["holds"]
    with pytest.raises(bmlab.BmlabError):
        bmlab.explore(2, "1/2", budget=5)
