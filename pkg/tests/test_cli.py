import csv
import io
import json

import pytest

from ratclass.cli import RunReport, main
from ratclass.ratfun import RatCombo
from ratclass.quadforms import SymRationalMatrix


def run(capsys, *argv):
    code = main(list(argv))
    out = capsys.readouterr()
    return code, out.out, out.err


def run_json(capsys, *argv):
    code, out, _ = run(capsys, *argv, "--format", "json")
    return code, json.loads(out)


class TestCoeffs:
    def test_csv(self, capsys):
        code, out, _ = run(capsys, "coeffs", "--n-max", "1", "--format", "csv")
        assert code == 0
        rows = list(csv.DictReader(io.StringIO(out)))
        values = [r["closed"] for r in rows if r["n"] == "1"]
        assert values[:3] == ["1/2", "3/4", "1/8"]

    def test_zero(self, capsys):
        code, data = run_json(capsys, "coeffs", "--n-max", "0")
        assert code == 0
        assert data["result"] == [{"n": 0, "i": 0, "closed": "1", "oracle": "1", "match": True}]

    def test_agreement(self, capsys):
        code, data = run_json(capsys, "coeffs", "--n-max", "50")
        assert code == 0 and data["report"]["checks_failed"] == 0

    def test_bad_format(self, capsys):
        code, _, err = run(capsys, "coeffs", "--format", "xml")
        assert code == 2 and "invalid choice" in err

    def test_negative(self, capsys):
        assert run(capsys, "coeffs", "--n-max", "-1")[0] == 2


class TestIdentities:
    def test_default(self, capsys):
        code, data = run_json(capsys, "identities")
        assert code == 0 and data["report"]["checks_passed"] > 0

    def test_fthton_only(self, capsys):
        code, data = run_json(capsys, "identities", "--only", "fthton", "--fthton-n", "200")
        assert code == 0 and data["report"]["checks_passed"] == 200

    def test_corrupt(self, capsys):
        code, data = run_json(capsys, "identities", "--only", "fthton", "--fthton-n", "2", "--corrupt")
        assert code == 1
        assert data["report"]["checks_failed"] == 1
        assert "corrupted" in data["report"]["failures"][0]["case"]

    def test_unknown_sweep(self, capsys):
        assert run(capsys, "identities", "--only", "nope")[0] == 2


class TestPfrac:
    def test_pm(self, capsys):
        code, data = run_json(capsys, "pfrac", "pm", "--m", "2", "--n", "1")
        assert code == 0
        assert data["result"]["a"] == ["1/4", "1/2"] and data["result"]["b"] == ["1/4"]

    def test_alphas(self, capsys):
        code, data = run_json(capsys, "pfrac", "alphas", "--k", "1")
        assert code == 0 and data["result"]["alphas"] == ["1/2"]

    def test_quadpole(self, capsys):
        code, data = run_json(capsys, "pfrac", "quadpole", "--k", "1", "--C", "1", "--delta", "1/2")
        assert code == 0
        assert data["result"]["A_complex"][0] == pytest.approx([0, 0.5])
        assert data["result"]["coefficient_mass"] == pytest.approx(2)
        assert data["result"]["bound"] == pytest.approx(2 * 2**1.5)

    def test_quadpole_outside_window(self, capsys):
        code, _, err = run(capsys, "pfrac", "quadpole", "--k", "1", "--C", "3", "--delta", "1/2")
        assert code == 2 and "outside" in err

    def test_missing_parameters(self, capsys):
        assert run(capsys, "pfrac", "pm", "--m", "2")[0] == 2
        assert run(capsys, "pfrac", "quadpole", "--k", "1", "--C", "0.5", "--delta", "1/2")[0] == 2


class TestDecomposeDiff:
    def test_one_dimensional(self, capsys):
        code, data = run_json(capsys, "decompose-diff", "--P", "2", "--C", "1", "--D", "2", "--r", "1", "--delta", "1/3")
        assert code == 0
        combo = RatCombo.from_json(data["result"]["combo"])
        assert len(combo) == 1 and combo.terms[0][0] == -1
        assert data["result"]["certificate"] == "1"

    def test_equal_matrices(self, capsys):
        code, data = run_json(capsys, "decompose-diff", "--P", "2", "--C", "1", "--D", "1", "--r", "1", "--delta", "1/3")
        assert code == 0
        assert all(item["lambda"] == "0" for item in data["result"]["combo"])

    def test_two_dimensional_count(self, capsys):
        code, data = run_json(
            capsys, "decompose-diff", "--P", "1,1", "--C", "[[1,0],[0,1]]", "--D", '[["3/2","1/4"],["1/4",1]]', "--r", "1", "--delta", "1/3"
        )
        assert code == 0 and len(data["result"]["combo"]) == 3

    def test_window_violation(self, capsys):
        code, _, err = run(capsys, "decompose-diff", "--P", "2", "--C", "5", "--D", "1", "--r", "1", "--delta", "1/3")
        assert code == 2 and "W_delta" in err

    def test_matrix_from_file(self, capsys, tmp_path):
        path = tmp_path / "C.json"
        path.write_text(json.dumps(SymRationalMatrix.identity(2).to_json()))
        code, _ = run_json(capsys, "decompose-diff", "--P", "2,0", "--C", f"@{path}", "--D", "[[2,0],[0,1]]", "--r", "1", "--delta", "1/3")
        assert code == 0


class TestRecover:
    def test_witness(self, capsys):
        code, out, _ = run(capsys, "recover", "witness", "--P", "2", "--C", "1", "--D", "2", "--r", "1", "--delta", "1/3")
        assert code == 0
        assert "(+)" in out and "(-)" in out

    def test_witness_equal_matrices(self, capsys):
        assert run(capsys, "recover", "witness", "--P", "2", "--C", "1", "--D", "1", "--r", "1", "--delta", "1/3")[0] == 2

    def test_counterexample(self, capsys):
        code, data = run_json(capsys, "recover", "counterexample")
        assert code == 0 and data["result"]["verified"]

    def test_raw_and_no_pole_probe(self, capsys, tmp_path):
        _, data = run_json(capsys, "decompose-diff", "--P", "2", "--C", "1", "--D", "2", "--r", "1", "--delta", "1/3")
        path = tmp_path / "combo.json"
        path.write_text(json.dumps(data["result"]["combo"]))
        code, data = run_json(capsys, "recover", "raw", "--combo", str(path))
        assert code == 0 and len(data["result"]["poles"]) == 2
        code, data = run_json(capsys, "recover", "raw", "--combo", str(path), "--y", "0.123")
        assert code == 0
        for c in data["result"]["poles"][0]["coefficients"]:
            assert abs(complex(*c["value"])) < 1e-10

    def test_raw_nongeneric_direction(self, capsys):
        combo = json.dumps([
            {"P": [1, 1], "denoms": [[["1", "0"], ["0", "2"]]], "delta": "1/3", "lambda": "1"},
            {"P": [1, 1], "denoms": [[["2", "0"], ["0", "1"]]], "delta": "1/3", "lambda": "1"},
        ])
        assert run(capsys, "recover", "raw", "--combo", combo, "--alpha", "1,1")[0] == 1
        assert run(capsys, "recover", "raw", "--combo", combo, "--alpha", "1,2")[0] == 0

    def test_raw_needs_combo(self, capsys):
        assert run(capsys, "recover", "raw")[0] == 2


class TestBounds:
    def test_two_term(self, capsys):
        combo = json.dumps([
            {"P": [2], "denoms": [[["1/2"]]], "delta": "1/4", "lambda": "2/3"},
            {"P": [2], "denoms": [[["2"]]], "delta": "1/4", "lambda": "-2/3"},
        ])
        code, data = run_json(capsys, "bounds", "--combo", combo, "--r", "2", "--j", "2")
        assert code == 0 and data["result"]["certificate"] == "4/3"

    def test_not_in_class(self, capsys):
        combo = json.dumps([{"P": [2], "denoms": [[["5"]]], "delta": "1/4", "lambda": "1"}])
        assert run(capsys, "bounds", "--combo", combo)[0] == 2


class TestReports:
    def test_round_trip(self, capsys):
        _, data = run_json(capsys, "pfrac", "alphas", "--k", "3")
        rep = RunReport.from_json(data["report"])
        assert rep.to_json() == data["report"]
        assert rep.checks_failed == len(rep.failures) == 0

    def test_invariant_enforced(self):
        with pytest.raises(ValueError):
            RunReport.from_json({"command": "x", "parameters": {}, "checks_passed": 0, "checks_failed": 2, "failures": [], "wall_time_ms": 0})

    def test_out_file(self, capsys, tmp_path):
        path = tmp_path / "report.json"
        code, out, _ = run(capsys, "pfrac", "pm", "--m", "1", "--n", "1", "--format", "json", "--out", str(path))
        assert code == 0 and out == ""
        assert json.loads(path.read_text())["result"]["a"] == ["1/2"]

    def test_deterministic(self, capsys):
        args = ("recover", "witness", "--P", "1,1", "--C", "[[1,0],[0,1]]", "--D", "[[2,0],[0,3]]", "--r", "1", "--delta", "1/4", "--seed", "7")
        _, a = run_json(capsys, *args)
        _, b = run_json(capsys, *args)
        assert a["result"] == b["result"]

    def test_asymptotics(self, capsys):
        code, data = run_json(capsys, "asymptotics", "--n", "100")
        assert code == 0 and data["result"]["R_within_bound"]

    def test_no_command(self, capsys):
        assert run(capsys)[0] == 2

    def test_help(self, capsys):
        assert run(capsys, "--help")[0] == 0


class TestVerifyAll:
    def test_corrupted(self, capsys):
        code, data = run_json(capsys, "verify-all", "--corrupt")
        assert code == 1
        assert data["report"]["checks_failed"] == 1

    def test_full_profile(self, capsys):
        code, data = run_json(capsys, "verify-all", "--profile", "full")
        assert code == 0 and data["report"]["checks_failed"] == 0
        assert len(data["result"]) == 10
