"""End-to-end tests of the command-line interface."""

import json
import os

import numpy as np
import pytest
from click.testing import CliRunner

from sfdesign import evaluate, CriterionSpec, read_design_csv
from sfdesign.cli import main


@pytest.fixture()
def runner():
    return CliRunner()


def write_design(runner, path: str, n: int = 12, d: int = 3, seed: int = 0) -> str:
    result = runner.invoke(
        main,
        ["generate", "--method", "lhs", "--n", str(n), "--d", str(d),
         "--seed", str(seed), "--out", path],
    )
    assert result.exit_code == 0, result.output
    return path


class TestGenerate:
    def test_round_trip_and_evaluate(self, runner, tmp_path):
        path = str(tmp_path / "design.csv")
        write_design(runner, path, n=15, d=4, seed=3)
        design = read_design_csv(path)
        assert design.matrix.shape == (15, 4)

        result = runner.invoke(
            main, ["evaluate", path, "-c", "c2", "--format", "json"]
        )
        assert result.exit_code == 0
        payload = json.loads(result.output)
        assert payload[0]["criterion"] == "c2"
        assert payload[0]["value"] == pytest.approx(
            evaluate(design, CriterionSpec("c2")).value, rel=1e-15
        )

    def test_same_seed_same_file(self, runner, tmp_path):
        a = str(tmp_path / "a.csv")
        b = str(tmp_path / "b.csv")
        for path in (a, b):
            write_design(runner, path, seed=42)
        assert open(a).read() == open(b).read()

    def test_seed_drawn_when_absent(self, runner, tmp_path):
        result = runner.invoke(
            main,
            ["generate", "--method", "lhs", "--n", "5", "--d", "2",
             "--out", str(tmp_path / "x.csv")],
        )
        assert result.exit_code == 0
        assert "seed drawn:" in result.stderr

    def test_centered_variant(self, runner, tmp_path):
        path = str(tmp_path / "c.csv")
        result = runner.invoke(
            main,
            ["generate", "--method", "lhs-centered", "--n", "5", "--d", "2",
             "--seed", "1", "--out", path],
        )
        assert result.exit_code == 0
        m = read_design_csv(path).matrix
        np.testing.assert_array_equal(np.sort(m * 5 - 0.5, axis=0) % 1, 0.0)

    def test_sobol_scrambled(self, runner, tmp_path):
        path = str(tmp_path / "s.csv")
        result = runner.invoke(
            main,
            ["generate", "--method", "sobol", "--n", "16", "--d", "3",
             "--seed", "7", "--scramble", "--out", path],
        )
        assert result.exit_code == 0
        assert read_design_csv(path).matrix.shape == (16, 3)

    def test_scramble_rejected_for_lhs(self, runner, tmp_path):
        result = runner.invoke(
            main,
            ["generate", "--method", "lhs", "--n", "5", "--d", "2",
             "--seed", "1", "--scramble", "--out", str(tmp_path / "x.csv")],
        )
        assert result.exit_code == 2

    def test_out_dir_env_var(self, runner, tmp_path):
        env = {"SFDESIGN_OUT_DIR": str(tmp_path)}
        result = runner.invoke(
            main,
            ["generate", "--method", "lhs", "--n", "4", "--d", "2", "--seed", "0"],
            env=env,
        )
        assert result.exit_code == 0
        assert (tmp_path / "lhs-n4-d2.csv").exists()


class TestEvaluate:
    def test_all_criteria_by_default(self, runner, tmp_path):
        path = write_design(runner, str(tmp_path / "d.csv"))
        result = runner.invoke(main, ["evaluate", path])
        assert result.exit_code == 0
        names = [row["criterion"] for row in json.loads(result.output)]
        assert names == ["c2", "w2", "l2star", "mindist", "phip"]

    def test_csv_format(self, runner, tmp_path):
        path = write_design(runner, str(tmp_path / "d.csv"))
        result = runner.invoke(
            main, ["evaluate", path, "-c", "phip", "--p", "30", "--format", "csv"]
        )
        assert result.exit_code == 0
        lines = result.output.strip().splitlines()
        assert lines[0] == "criterion,p,value"
        name, p, value = lines[1].split(",")
        assert name == "phip"
        assert float(p) == 30.0
        assert float(value) > 0

    def test_fixture_designs_match_goldens(self, runner):
        fixtures = os.path.join(os.path.dirname(__file__), "fixtures")
        goldens = json.load(open(os.path.join(fixtures, "goldens.json")))
        for name, expected in goldens.items():
            result = runner.invoke(
                main, ["evaluate", os.path.join(fixtures, name)]
            )
            assert result.exit_code == 0, result.output
            got = {row["criterion"]: row["value"] for row in json.loads(result.output)}
            for kind, value in expected.items():
                assert got[kind] == pytest.approx(value, rel=1e-12), (name, kind)

    def test_missing_file_is_usage_error(self, runner):
        result = runner.invoke(main, ["evaluate", "/nonexistent/d.csv"])
        assert result.exit_code == 2

    def test_unparseable_file_exits_3(self, runner, tmp_path):
        bad = tmp_path / "bad.csv"
        bad.write_text("# sfd-design n=2 d=2\n0.1,0.2\n5.0,0.3\n")
        result = runner.invoke(main, ["evaluate", str(bad)])
        assert result.exit_code == 3

    def test_degenerate_design_exits_4(self, runner, tmp_path):
        bad = tmp_path / "coincident.csv"
        bad.write_text("# sfd-design n=2 d=2\n0.5,0.5\n0.5,0.5\n")
        result = runner.invoke(main, ["evaluate", str(bad), "-c", "mindist"])
        assert result.exit_code == 4


class TestOptimize:
    def test_outputs_and_manifest(self, runner, tmp_path):
        out_dir = str(tmp_path / "run")
        result = runner.invoke(
            main,
            ["optimize", "--n", "10", "--d", "2", "--criterion", "phip",
             "--algo", "ese", "--budget", "500", "--seed", "5",
             "--replicates", "2", out_dir],
        )
        assert result.exit_code == 0, result.output
        payload = json.loads(result.output)
        assert len(payload["replicates"]) == 2
        for i in (0, 1):
            assert os.path.exists(os.path.join(out_dir, f"design-r{i}.csv"))
            assert os.path.exists(os.path.join(out_dir, f"trace-r{i}.csv"))
            assert os.path.exists(os.path.join(out_dir, f"trace-r{i}.json"))
        manifest = json.load(open(os.path.join(out_dir, "manifest.json")))
        assert manifest["command"].startswith("optimize")
        assert "finished" in manifest

    def test_resume_from_file(self, runner, tmp_path):
        path = write_design(runner, str(tmp_path / "start.csv"), n=10, d=2, seed=1)
        out_dir = str(tmp_path / "run")
        result = runner.invoke(
            main,
            ["optimize", "--in", path, "--criterion", "c2", "--algo",
             "geometric-sa", "--t0", "0.01", "--budget", "400",
             "--seed", "2", out_dir],
        )
        assert result.exit_code == 0, result.output
        start_value = evaluate(read_design_csv(path), CriterionSpec("c2")).value
        best = json.loads(result.output)["replicates"][0]["best"]["value"]
        assert best <= start_value

    def test_in_and_shape_are_exclusive(self, runner, tmp_path):
        path = write_design(runner, str(tmp_path / "d.csv"))
        result = runner.invoke(
            main,
            ["optimize", "--in", path, "--n", "10", "--d", "2",
             "--budget", "100", str(tmp_path / "o")],
        )
        assert result.exit_code == 2

    def test_sa_without_t0_is_usage_error(self, runner, tmp_path):
        result = runner.invoke(
            main,
            ["optimize", "--n", "8", "--d", "2", "--algo", "mm-sa",
             "--budget", "100", "--seed", "0", str(tmp_path / "o")],
        )
        assert result.exit_code == 2


class TestSubproj:
    def test_report_files(self, runner, tmp_path):
        a = write_design(runner, str(tmp_path / "a.csv"), n=10, d=4, seed=0)
        b = write_design(runner, str(tmp_path / "b.csv"), n=10, d=4, seed=1)
        out_dir = str(tmp_path / "rep")
        result = runner.invoke(
            main, ["subproj", a, b, "--k", "2", "--metric", "c2", out_dir]
        )
        assert result.exit_code == 0, result.output
        payload = json.loads(result.output)
        assert "median" in payload["pooled_summary"]
        report = json.load(open(os.path.join(out_dir, "report.json")))
        assert report["k"] == 2
        rows = open(os.path.join(out_dir, "report.csv")).read().strip().splitlines()
        assert rows[0] == "design_id,cols,value"
        assert len(rows) == 1 + 2 * 6  # two designs, C(4,2) tuples each

    def test_mst_metric_csv(self, runner, tmp_path):
        a = write_design(runner, str(tmp_path / "a.csv"), n=10, d=3, seed=0)
        out_dir = str(tmp_path / "rep")
        result = runner.invoke(
            main, ["subproj", a, "--k", "2", "--metric", "mst", out_dir]
        )
        assert result.exit_code == 0, result.output
        rows = open(os.path.join(out_dir, "report.csv")).read().strip().splitlines()
        assert rows[0] == "design_id,cols,m,sigma"


class TestMstAndBench:
    def test_mst_json(self, runner, tmp_path):
        path = write_design(runner, str(tmp_path / "d.csv"), n=10, d=3)
        result = runner.invoke(main, ["mst", path])
        assert result.exit_code == 0
        payload = json.loads(result.output)
        assert set(payload) == {"m", "sigma", "edges", "total_weight"}
        assert payload["edges"] == 9

    def test_bench_rejects_unknown_figure(self, runner):
        result = runner.invoke(main, ["bench", "fig99"])
        assert result.exit_code == 2

    def test_version_flag(self, runner):
        result = runner.invoke(main, ["--version"])
        assert result.exit_code == 0
        assert "sfdesign" in result.output
