"""Unit tests for the command-line surface and its exit codes."""

from __future__ import annotations

import json
from pathlib import Path

import pytest
import typer
from typer.testing import CliRunner

from padicwave.cli import RunReport, app
from padicwave.core.enums import ExitCode
from padicwave.fields.descriptor import FieldDescriptor


@pytest.fixture
def runner() -> CliRunner:
    """A Typer CLI runner."""
    return CliRunner()


class TestRunReport:
    """Tests for the report model."""

    @pytest.mark.parametrize(
        ("verdicts", "code"),
        [
            ({}, ExitCode.OK),
            ({"a": True, "b": True}, ExitCode.OK),
            ({"a": True, "b": None}, ExitCode.INCONCLUSIVE),
            ({"a": None, "b": False}, ExitCode.VIOLATION),
        ],
    )
    def test_exit_code(self, verdicts: dict[str, bool | None], code: ExitCode) -> None:
        """Test a failed verdict wins over an inconclusive one."""
        assert RunReport(command="x", verdicts=verdicts).exit_code == code

    def test_wall_time_not_serialized(self, q3: FieldDescriptor) -> None:
        """Test wall_time stays out of the JSON form."""
        dumped = json.loads(RunReport(command="x", field=q3, wall_time=1.5).model_dump_json())
        assert "wall_time" not in dumped
        assert dumped["field"]["p"] == 3


class TestCommands:
    """Tests for each command's exit status."""

    def test_basis_q2(self, runner: CliRunner, tmp_path: Path) -> None:
        """Test the basis norms over Q_2 with r = 1 meet their bounds."""
        out = tmp_path / "basis.json"
        result = runner.invoke(app, ["basis", "--field", '{"p": 2}', "--r", "1", "--h-max", "1", "--json", str(out)])
        assert result.exit_code == ExitCode.OK
        report = json.loads(out.read_text())
        assert report["command"] == "basis"
        assert report["verdicts"] == {"bounds": True, "unit_norms": True}
        assert "wall_time" not in report

    def test_avv_dirac(self, runner: CliRunner, tmp_path: Path) -> None:
        """Test a Dirac mass passes the growth criterion."""
        out = tmp_path / "avv.json"
        result = runner.invoke(app, ["avv", "--oracle", "dirac", "--depth", "3", "--json", str(out)])
        assert result.exit_code == ExitCode.OK
        assert json.loads(out.read_text())["verdicts"] == {"additivity": True, "avv": True}

    def test_avv_haar_rough(self, runner: CliRunner) -> None:
        """Test the Haar functional fails the order-1/2 criterion with exit 2."""
        result = runner.invoke(app, ["avv", "--oracle", "haar", "--r", "1/2", "--degree", "0", "--depth", "2"])
        assert result.exit_code == ExitCode.VIOLATION

    def test_analyze_random(self, runner: CliRunner, tmp_path: Path) -> None:
        """Test a random function round-trips through its coefficients."""
        out = tmp_path / "analyze.json"
        result = runner.invoke(
            app, ["analyze", "--field", '{"p": 2}', "--r", "1", "--level", "1", "--depth", "2", "--json", str(out)]
        )
        assert result.exit_code == ExitCode.OK
        assert json.loads(out.read_text())["verdicts"] == {"round_trip": True}

    def test_counterexample_too_shallow(self, runner: CliRunner) -> None:
        """Test depth 0 gives no verdict and exit 4."""
        result = runner.invoke(app, ["counterexample", "--depth", "0"])
        assert result.exit_code == ExitCode.INCONCLUSIVE

    @pytest.mark.slow
    def test_counterexample_depth_six(self, runner: CliRunner, tmp_path: Path) -> None:
        """Test additivity, the uniform bound and the separation all hold through level 6."""
        out = tmp_path / "counterexample.json"
        result = runner.invoke(app, ["counterexample", "--depth", "6", "--json", str(out)])
        assert result.exit_code == ExitCode.OK
        report = json.loads(out.read_text())
        assert report["verdicts"] == {"additivity": True, "uniform": True, "separation": True}
        assert [row["n"] for row in report["results"]["growth"]] == [1, 2, 3, 4, 5, 6]

    def test_counterexample_help(self) -> None:
        """Test the help states the order condition on the growth coordinate and the p=5 substitute."""
        command = typer.main.get_command(app).commands["counterexample"]  # type: ignore[attr-defined]
        assert "0 < r_k < r" in command.help
        assert "r_vec 1,0 is rejected" in command.help
        assert "r_vec 1,1 and k=0" in command.help
        k_option = next(param for param in command.params if param.name == "k")
        assert "0 < r_k < r" in k_option.help

    def test_selftest_record_then_lock(self, runner: CliRunner, tmp_path: Path) -> None:
        """Test constants recorded by one run lock the next and a moved constant fails it."""
        lock = tmp_path / "constants.json"
        args = ["selftest", "--check", "approximants", "--seed", "5"]
        assert runner.invoke(app, [*args, "--record", str(lock)]).exit_code == ExitCode.OK
        assert runner.invoke(app, [*args, "--lock", str(lock)]).exit_code == ExitCode.OK
        data = json.loads(lock.read_text())
        key = next(iter(data["constants"]["approximants"]))
        data["constants"]["approximants"][key] = "-99"
        lock.write_text(json.dumps(data))
        assert runner.invoke(app, [*args, "--lock", str(lock)]).exit_code == ExitCode.VIOLATION


class TestInputErrors:
    """Tests for malformed input, all mapped to exit 3."""

    @pytest.mark.parametrize(
        "args",
        [
            ["analyze", "--function", "does-not-exist.json"],
            ["analyze", "--r", "one"],
            ["avv", "--field", '{"p": 4}'],
            ["avv", "--field", '{"p": 3, "q": 1}'],
            ["avv", "--r", "2", "--degree", "1"],
            ["counterexample", "--r-vec", "a,b"],
            ["counterexample", "--r-vec", "1,0", "--k", "0"],
            ["counterexample", "--d", "3"],
        ],
    )
    def test_input_error(self, runner: CliRunner, args: list[str]) -> None:
        """Test the command exits with the input-error code."""
        result = runner.invoke(app, args)
        assert result.exit_code == ExitCode.INPUT_ERROR


class TestReportFile:
    """Tests for the written report."""

    def test_identical_runs(self, runner: CliRunner, tmp_path: Path) -> None:
        """Test two runs with the same seed write byte-identical reports."""
        paths = [tmp_path / "first.json", tmp_path / "second.json"]
        for path in paths:
            runner.invoke(app, ["avv", "--depth", "2", "--seed", "7", "--json", str(path)])
        assert paths[0].read_bytes() == paths[1].read_bytes()
        assert json.loads(paths[0].read_text())["seed"] == 7
