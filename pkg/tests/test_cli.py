import io
import json
import math
from pathlib import Path

import pytest

from surplusinv.cli import main

DEMO = str(Path(__file__).resolve().parents[1] / "data" / "demo_workspace.json")


@pytest.fixture
def uniform2(tmp_path):
    ws = {
        "scenarios": ["w1", "w2"],
        "priors": [{"name": "P", "weights": [0.5, 0.5]}],
        "positions": [{"name": "X", "payoffs": [-1, 2]}, {"name": "C", "payoffs": [1.5, 1.5]}],
        "acceptance_sets": [{"name": "es75", "kind": "es", "alpha": 0.75}],
        "seed": 3,
    }
    path = tmp_path / "ws.json"
    path.write_text(json.dumps(ws))
    return str(path)


def run(*argv):
    out = io.StringIO()
    code = main(list(argv), out)
    text = out.getvalue()
    return code, text


def run_json(*argv):
    code, text = run(*argv)
    return code, json.loads(text)


class TestEval:
    def test_es_on_two_points(self, uniform2):
        code, out = run_json("eval", "es@0.5", "X", "-w", uniform2)
        assert code == 0 and out["value"] == pytest.approx(1.0, abs=1e-12)

    def test_var_on_constant(self, uniform2):
        assert run_json("eval", "var@0.25", "C", "-w", uniform2) == (0, {"value": -1.5})

    def test_inline_position(self, uniform2):
        code, out = run_json("eval", "max_loss", "[-3, 2]", "-w", uniform2)
        assert code == 0 and out["value"] == 3.0

    def test_workspace_functional(self):
        code, out = run_json("eval", "es50", "X", "-w", DEMO)
        assert code == 0 and out["value"] == pytest.approx(1.0, abs=1e-12)

    def test_csv_position(self):
        code, out = run_json("eval", "max_loss", "Z", "-w", DEMO)
        assert code == 0 and out["value"] == 2.0


class TestErrors:
    def test_unknown_name(self, uniform2):
        code, out = run_json("eval", "es50", "X", "-w", uniform2)
        assert code == 2 and "error" in out
        assert run("accept", "es75", "nowhere", "-w", uniform2)[0] == 2

    def test_bad_trials(self, uniform2):
        assert run("check", "si", "es75", "-w", uniform2, "--trials", "0")[0] == 3

    def test_bad_tolerance(self):
        assert run("extend", "linear_loss", "-w", DEMO, "--tol", "-1")[0] == 3

    def test_missing_workspace(self):
        assert run("eval", "es@0.5", "[1, 2]")[0] == 3

    def test_malformed_workspace(self, tmp_path):
        bad = tmp_path / "bad.json"
        bad.write_text("{not json")
        assert run("eval", "es@0.5", "[1, 2]", "-w", str(bad))[0] == 3
        wrong = tmp_path / "wrong.json"
        wrong.write_text(json.dumps({"scenarios": ["a", "b"], "priors": [{"name": "P", "weights": [0.7, 0.7]}]}))
        assert run("eval", "es@0.5", "[1, 2]", "-w", str(wrong))[0] == 3

    def test_bad_arguments(self):
        assert run("nonsense")[0] == 3


class TestCheck:
    def test_var_is_surplus_invariant(self):
        code, out = run_json("check", "si", "var40", "-w", DEMO)
        assert code == 0 and out["verdict"] == "pass"

    def test_es_counterexample(self, uniform2):
        code, out = run_json("check", "si", "es75", "-w", uniform2)
        assert code == 1 and out["verdict"] == "counterexample"
        assert out["witness"] is not None

    def test_grid_equivalences(self):
        assert run("check", "equivalences", "box", "-w", DEMO, "--grid")[0] == 0


class TestOtherCommands:
    def test_accept(self):
        assert run_json("accept", "box", "Y", "-w", DEMO) == (0, {"accepted": True})
        assert run_json("accept", "box", "X", "-w", DEMO) == (0, {"accepted": False})

    def test_decompose_box(self):
        code, out = run_json("decompose", "box", "-w", DEMO, "--verify", "--trials", "300")
        assert code == 0
        assert (out["E1"], out["E2"], out["E3"]) == (["w1"], ["w2"], ["w3"])
        assert out["reconstruction"]["verdict"] == "pass"

    def test_polar(self):
        code, out = run_json("polar", "orthant", "-w", DEMO)
        assert code == 1 and out["error"] == "not radially bounded"
        code, out = run_json("polar", "budget", "-w", DEMO, "--prior", "Q")
        assert code == 0 and all(z > 0 for z in out["polar_witness"])
        code, out = run_json("polar", "budget", "-w", DEMO, "--prior", "Q", "--x", "[1, 1, 1]")
        assert code == 0 and out["verdict"] == "pass"

    def test_dual(self, uniform2):
        code, out = run_json("dual", "es@0.5", "X", "-w", uniform2)
        assert code == 0 and out["dual"] == pytest.approx(1.0, abs=1e-6)
        code, out = run_json("dual", "es@0.5", "-w", uniform2, "--conjugate", "[-0.5, -0.5]")
        assert code == 0 and out["conjugate"] == pytest.approx(0.0, abs=1e-9)

    def test_extend(self):
        code, out = run_json("extend", "linear_loss", "-w", DEMO)
        assert code == 0 and abs(out["value"] - 2.0) <= 1e-9
        assert len(out["trace"]) > 5
        code, out = run_json("extend", "linear_loss", "-w", DEMO, "--functional", "sup_shortfall")
        assert code == 0 and math.isinf(float(out["value"]))
        code, out = run_json("extend", '{"head": [], "tail": {"kind": "constant", "c": 0}}', "--alpha", "1")
        assert code == 0 and out["value"] == pytest.approx(-1.0, abs=1e-8)

    def test_norm(self, uniform2):
        code, text = run("norm", "[1, 3]", "--orlicz", "power:2", "-w", uniform2, "--table")
        key, value = text.strip().split("\t")
        assert code == 0 and key == "value"
        assert f"{float(value):.7f}" == "2.2360680"

    def test_table_output(self):
        code, text = run("decompose", "box", "-w", DEMO, "--table")
        assert code == 0
        keys = [line.split("\t")[0] for line in text.splitlines()]
        assert keys == sorted(keys) and {"E1", "E2", "E3"} <= set(keys)

    def test_repeatable(self):
        argv = ("check", "si", "es75", "-w", DEMO, "--trials", "300")
        assert run(*argv) == run(*argv)
