import json

import pytest

from qloopk.cli import main


def run(capsys, *argv):
    code = main(list(argv))
    out = capsys.readouterr()
    return code, out.out


class TestDiagramValidation:
    def test_valid(self, capsys):
        code, out = run(capsys, "gsat", "validate",
                        "--type", "A", "--n", "1",
                        "--X", "", "--tau", "1,0")
        assert code == 0
        assert json.loads(out)["validate"]["valid"] is True

    def test_invalid_exits_one(self, capsys):
        # nodes 0 and 1 are fixed, outside X, and adjacent to X
        code, out = run(capsys, "gsat", "validate",
                        "--type", "A", "--n", "2",
                        "--X", "2", "--tau", "id")
        assert code == 1
        assert json.loads(out)["validate"]["valid"] is False

    def test_bad_usage_exits_two(self, capsys):
        assert main(["gsat", "validate", "--type", "A", "--n", "x"]) == 2


class TestRep:
    def test_build(self, capsys):
        code, out = run(capsys, "rep", "build", "--rep", "eval-sl2:1:a")
        assert code == 0
        assert json.loads(out)["dim"] == 2

    def test_check_tensor(self, capsys):
        code, out = run(capsys, "rep", "check",
                        "--rep", "eval-sl2:1:a", "--rep", "eval-sl2:1:b")
        assert code == 0
        assert json.loads(out)["relations"]["ok"] is True

    def test_unknown_builder(self, capsys):
        assert main(["rep", "build", "--rep", "mystery:1:a"]) == 2


class TestRmatrix:
    def test_compute_golden(self, capsys):
        code, out = run(capsys, "rmatrix", "compute",
                        "--rep", "eval-sl2:1:a", "--rep", "eval-sl2:1:b")
        assert code == 0
        data = json.loads(out)["rmatrix"]
        assert data["kernel_dim"] == 1
        assert data["matrix"][0][0] == "1"

    def test_verify_ybe_needs_three_reps(self, capsys):
        assert main(["rmatrix", "verify-ybe",
                     "--rep", "eval-sl2:1:a", "--rep", "eval-sl2:1:b"]) == 2

    def test_verify_unitarity(self, capsys):
        code, out = run(capsys, "rmatrix", "verify-unitarity",
                        "--rep", "eval-sl2:1:a", "--rep", "eval-sl2:1:b")
        assert code == 0

    def test_degeneration_pole(self, capsys):
        code, out = run(capsys, "rmatrix", "degeneration",
                        "--rep", "eval-sl2:1:a", "--rep", "eval-sl2:1:b",
                        "--at", "b=q^2*a,z=1")
        assert code == 0
        assert json.loads(out)["degeneration"]["kind"] == "pole"


class TestKmatrix:
    def test_compute_scenario(self, capsys):
        code, out = run(capsys, "kmatrix", "compute",
                        "--scenario", "qonsager-sl2-fundamental")
        assert code == 0
        data = json.loads(out)["kmatrix"]
        assert data["kernel_dim"] == 1
        assert data["matrix"][0][0] == "1"

    def test_unknown_scenario(self, capsys):
        assert main(["kmatrix", "compute", "--scenario", "nope"]) == 2

    def test_convert_grading(self, capsys):
        code, out = run(capsys, "kmatrix", "convert-grading",
                        "--scenario", "qonsager-sl2-fundamental")
        assert code == 0
        data = json.loads(out)["convert-grading"]
        assert data["ok"] is True
        assert data["scalar"] is not None

    def test_vars_override(self, capsys):
        code, out = run(capsys, "kmatrix", "compute",
                        "--scenario", "qonsager-sl2-fundamental",
                        "--vars", "s0=0,s1=0")
        assert code == 0
        assert json.loads(out)["kmatrix"]["matrix"][0][1] == "0"


class TestOutputs:
    def test_deterministic_bytes(self, capsys):
        argv = ["rmatrix", "compute",
                "--rep", "eval-sl2:1:a", "--rep", "eval-sl2:1:b"]
        _, first = run(capsys, *argv)
        _, second = run(capsys, *argv)
        assert first == second

    def test_latex(self, capsys):
        code, out = run(capsys, "rmatrix", "compute",
                        "--rep", "eval-sl2:1:a", "--rep", "eval-sl2:1:b",
                        "--output", "latex")
        assert code == 0
        assert "\\begin{pmatrix}" in out

    def test_text(self, capsys):
        code, out = run(capsys, "gsat", "validate",
                        "--type", "A", "--n", "1",
                        "--X", "", "--tau", "1,0", "--output", "text")
        assert code == 0
        assert "valid" in out


class TestIrred:
    def test_lowering_mode(self, capsys):
        code, out = run(capsys, "irred", "check",
                        "--rep", "eval-sl2:1:a", "--mode", "lowering")
        assert code == 0
        assert json.loads(out)["irred"]["irreducible"] is True

    def test_tensor_mode(self, capsys):
        code, out = run(capsys, "irred", "check",
                        "--rep", "eval-sl2:1:a", "--rep", "eval-sl2:1:b",
                        "--mode", "tensor")
        assert code == 0


class TestPipeline:
    def test_full_scenario(self, capsys):
        code, out = run(capsys, "pipeline", "run",
                        "qonsager-sl2-fundamental")
        assert code == 0
        data = json.loads(out)["pipeline"]
        assert data["ok"] is True
        assert all(s.get("ok", True) for s in data["stages"].values())
