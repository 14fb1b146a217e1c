"""Tests for the qboson command line."""

import json
from pathlib import Path

import pytest
from typer.testing import CliRunner

from qboson.cli import app

runner = CliRunner()


@pytest.fixture(autouse=True)
def isolated_settings(monkeypatch: pytest.MonkeyPatch, tmp_path: Path) -> None:
    """Keep reports and .env lookups inside tmp_path."""
    monkeypatch.chdir(tmp_path)
    monkeypatch.setenv("QBOSON_REPORT_PATH", str(tmp_path / "reports"))
    monkeypatch.delenv("QBOSON_MAX_DEGREE", raising=False)
    monkeypatch.delenv("QBOSON_OUTPUT_FORMAT", raising=False)


class TestAlgebraCommands:
    """Tests for normalize, pair, delta and antipode."""

    def test_normalize_boson_relation(self) -> None:
        """Test that e'f - q^-2 fe' normalizes to 1 in B_q."""
        result = runner.invoke(app, ["normalize", "e1*f1 - q^-2*f1*e1", "--algebra", "bq"])
        assert result.exit_code == 0
        assert result.stdout.strip() == "1"

    def test_normalize_weyl(self) -> None:
        result = runner.invoke(app, ["normalize", "e1*f1*e1", "--algebra", "wq"])
        assert result.exit_code == 0
        assert result.stdout.strip() == "q^-2 * f1*e1^2 + e1"

    def test_pair(self) -> None:
        """Test phi(e^2, f^2) = 1 + q^-2."""
        result = runner.invoke(app, ["pair", "e1^2", "f1^2"])
        assert result.exit_code == 0
        assert result.stdout.strip() == "1 + q^-2"

    def test_braided_delta(self) -> None:
        result = runner.invoke(app, ["delta", "f1^2", "--braided"])
        assert result.exit_code == 0
        assert result.stdout.strip() == "(f1^2) ⊗ (1) + (1 + q^-2) * (f1) ⊗ (f1) + (1) ⊗ (f1^2)"

    def test_braided_antipode(self) -> None:
        result = runner.invoke(app, ["antipode", "f1^2", "--braided"])
        assert result.exit_code == 0
        assert result.stdout.strip() == "q^-2 * f1^2"

    def test_json_output(self) -> None:
        """Test the JSON document of a pairing."""
        result = runner.invoke(app, ["--format", "json", "pair", "e1", "f1"])
        assert result.exit_code == 0
        document = json.loads(result.stdout)
        assert document == {"command": "pair", "left": "e1", "right": "f1", "result": "1"}

    @pytest.mark.parametrize(
        "args",
        [
            ["--format", "json", "delta", "f1^2", "--braided"],
            ["--type", "A2", "normalize", "e2*f1*e1*f2", "--algebra", "bq"],
            ["pair", "e1^3", "f1^3"],
        ],
    )
    def test_output_is_byte_deterministic(self, args: list[str]) -> None:
        """Test that repeating a command prints the same bytes."""
        first = runner.invoke(app, args)
        second = runner.invoke(app, args)
        assert first.exit_code == 0
        assert first.stdout_bytes == second.stdout_bytes

    def test_global_type(self) -> None:
        """Test that --type before the command selects the Cartan preset."""
        result = runner.invoke(app, ["--type", "A2", "normalize", "E2"])
        assert result.exit_code == 0
        assert result.stdout.strip() == "E2"
        assert runner.invoke(app, ["normalize", "E2"]).exit_code == 2


class TestModuleCommands:
    """Tests for project, rho and decompose."""

    def test_project_highest_weight_vector(self) -> None:
        result = runner.invoke(app, ["project", "--weight", "2", "--depth", "2"])
        assert result.exit_code == 0

    def test_rho(self) -> None:
        result = runner.invoke(app, ["rho", "f1*v", "--weight", "2", "--depth", "2"])
        assert result.exit_code == 0

    def test_project_needs_a_module(self) -> None:
        """Test that project without --weight or --module is an input error."""
        result = runner.invoke(app, ["project"])
        assert result.exit_code == 2

    def test_decompose(self, scrambled_module_path: Path, tmp_path: Path) -> None:
        """Test the multiplicities line and the written report."""
        report = tmp_path / "out" / "report.json"
        result = runner.invoke(app, ["decompose", str(scrambled_module_path), "--report", str(report)])
        assert result.exit_code == 0
        lines = result.stdout.strip().splitlines()
        assert json.loads(lines[0]) == {"2": 1, "0": 1}
        assert lines[1] == "verified: yes"
        assert report.is_file()

    def test_decompose_missing_file(self, tmp_path: Path) -> None:
        result = runner.invoke(app, ["decompose", str(tmp_path / "absent.json")])
        assert result.exit_code == 2

    def test_decompose_unwritable_report(self, scrambled_module_path: Path, tmp_path: Path) -> None:
        """Test that a report path below a regular file is an input error, not a traceback."""
        blocker = tmp_path / "blocker"
        blocker.write_text("", encoding="utf-8")
        result = runner.invoke(
            app, ["decompose", str(scrambled_module_path), "--report", str(blocker / "report.json")]
        )
        assert result.exit_code == 2
        assert "cannot write report" in result.output


class TestVerifyCommand:
    """Tests for the verify command and its exit codes."""

    def test_pairing_suite(self) -> None:
        """Test that the pairing suite passes at degree 3."""
        result = runner.invoke(app, ["verify", "--suite", "pairing", "--max-degree", "3"])
        assert result.exit_code == 0
        assert "Overall: PASSED" in result.stdout

    def test_degree_above_cap(self) -> None:
        """Test that --max-degree beyond the configured cap is an input error."""
        result = runner.invoke(app, ["verify", "--suite", "pairing", "--max-degree", "99"])
        assert result.exit_code == 2


class TestInputErrors:
    """Tests for exit code 2 on malformed input."""

    @pytest.mark.parametrize(
        "args",
        [
            ["normalize", "E1 + $"],
            ["normalize", "E1", "--type", "Z9"],
            ["normalize", "E5"],
            ["pair", "f1", "e1"],
        ],
    )
    def test_exit_code(self, args: list[str]) -> None:
        result = runner.invoke(app, args)
        assert result.exit_code == 2

    def test_invalid_configuration(self, monkeypatch: pytest.MonkeyPatch) -> None:
        """Test that an out-of-range environment setting is reported, not raised."""
        monkeypatch.setenv("QBOSON_MAX_DEGREE", "99")
        result = runner.invoke(app, ["pair", "e1", "f1"])
        assert result.exit_code == 2
