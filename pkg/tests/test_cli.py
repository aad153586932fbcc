import json
import logging
import re
from fractions import Fraction
from unittest.mock import patch

import pytest

from src.chisel.cli import CommandResult, exact_payload, run
from src.chisel.reproduce import CheckResult, ReproductionReport

FLOAT_TOKEN = re.compile(r"\d\.\d|\d[eE][+-]?\d")


@pytest.fixture(autouse=True)
def restore_logging():
    """run() reconfigures the root logger; put it back after each test."""
    root = logging.getLogger()
    handlers, level = root.handlers[:], root.level
    yield
    root.handlers[:] = handlers
    root.setLevel(level)


def _json(capsys, argv):
    code = run([*argv, "--json"])
    out = capsys.readouterr().out
    return code, out, json.loads(out)


def _leaves(value):
    if isinstance(value, dict):
        for v in value.values():
            yield from _leaves(v)
    elif isinstance(value, list):
        for v in value:
            yield from _leaves(v)
    else:
        yield value


class TestExactPayload:
    """Conversion of results to exact JSON values."""

    def test_numbers_become_strings(self):
        """Integers and fractions are written as decimal or p/q strings."""
        payload = exact_payload({"a": 10**40, "b": Fraction(-11, 7), "ok": True, "xs": (1, 2)})
        assert payload == {"a": str(10**40), "b": "-11/7", "ok": True, "xs": ["1", "2"]}

    def test_floats_are_refused(self):
        """Floating point values cannot be written exactly."""
        with pytest.raises(TypeError):
            exact_payload({"x": 0.5})


class TestJsonOutput:
    """Shape and exactness of --json output."""

    def test_ehrhart(self, capsys):
        """Q_7(5,2) with its -11/7 coefficient."""
        code, _, data = _json(capsys, ["ehrhart", "Q", "--n", "7", "--a", "5", "--b", "2"])
        assert code == 0
        assert data["command"] == "ehrhart"
        assert data["exact"] is True
        assert data["status"] == "ok"
        assert data["elapsed_ms"].isdigit()
        assert data["result"]["polynomial"][1] == "-11/7"

    def test_mu(self, capsys):
        """Coefficients and negative indices of P^1(6, 730)."""
        _, _, data = _json(capsys, ["mu", "--n", "1", "--k", "6", "--a", "730"])
        assert data["result"]["mu"] == ["1", "-971", "-1215", "1271473119", "267104933370"]
        assert data["result"]["negative_indices"] == ["1", "2"]

    def test_hstar(self, capsys):
        """h*-vector and totals from ascending coefficients."""
        _, _, data = _json(
            capsys, ["hstar", "--coeffs", "1,-971,-1215,1271473119,267104933370"]
        )
        result = data["result"]
        assert result["hstar"][1] == "268376404299"
        assert result["integral"] is True
        assert result["normalized_volume"] == "6410518400880"

    def test_count(self, capsys):
        """2 C_3 has 27 lattice points."""
        _, _, data = _json(capsys, ["count", "--cube", "3", "--t", "2", "--threads", "1"])
        assert data["result"] == {"t": "2", "count": "27", "strict": False}

    def test_interp_from_samples(self, capsys):
        """Samples 1, 12, 37 give 7t^2 + 4t + 1."""
        _, _, data = _json(capsys, ["interp", "--samples", "0:1,1:12,2:37"])
        assert data["result"]["polynomial"] == ["1", "4", "7"]
        assert data["result"]["text"] == "7t^2 + 4t + 1"

    def test_interp_from_counts(self, capsys):
        """The chiseled square by counting."""
        _, _, data = _json(
            capsys,
            ["interp", "--cube", "2", "--scale", "3", "--depths", "1", "--threads", "1"],
        )
        assert data["result"]["polynomial"] == ["1", "4", "7"]

    def test_chisel_and_validate(self, capsys, tmp_path):
        """A chiseled cube is written, read back and validated."""
        out = tmp_path / "b1.poly"
        _, _, data = _json(
            capsys, ["chisel", "--cube", "3", "--scale", "3", "--depths", "1", "--out", str(out)]
        )
        assert data["result"]["validation"]["is_smooth"] is True
        assert data["result"]["validation"]["vertex_count"] == "24"
        assert out.exists()

        _, _, data = _json(capsys, ["validate", "--file", str(out)])
        assert data["result"]["validation"]["facet_count"] == "14"

    def test_search(self, capsys):
        """The first four-dimensional witness."""
        _, _, data = _json(capsys, ["search", "--n", "1", "--k-max", "6"])
        (witness,) = data["result"]["witnesses"]
        assert (witness["k"], witness["a"]) == ("6", "730")

    def test_alpha_scan(self, capsys):
        """Negative entries of row 7."""
        _, _, data = _json(capsys, ["alpha-scan", "--n", "7"])
        assert data["result"]["scan"]["negative_entries"] == [["1", "-5/3136"], ["2", "-1/800"]]

    @pytest.mark.parametrize(
        "argv",
        [
            ["ehrhart", "B", "--k", "4"],
            ["ehrhart", "Q_prod", "--n", "3", "--k", "9", "--a", "46099"],
            ["ehrhart", "boxCorner", "--sides", "2,3", "--b", "1"],
            ["alpha-table", "--n", "7"],
            ["reconstruct", "--n", "3", "--a", "5", "--b", "2"],
            ["box-corner", "--sides", "2,2,2,2,2,2,2", "--b", "1"],
            ["choose-a", "--n", "1", "--k", "28"],
            ["hstar", "--coeffs", "1,1/2"],
        ],
    )
    def test_no_float_tokens(self, capsys, argv):
        """Every number is a string and no output contains a decimal point."""
        code, out, data = _json(capsys, argv)
        assert code == 0
        assert not FLOAT_TOKEN.search(out)
        assert all(isinstance(v, (str, bool)) or v is None for v in _leaves(data["result"]))

    def test_round_trip(self, capsys):
        """Output parses back into CommandResult."""
        _, out, data = _json(capsys, ["reconstruct", "--n", "2", "--a", "3", "--b", "1"])
        parsed = CommandResult.model_validate_json(out)
        assert parsed.result == data["result"]
        assert parsed.result["matches_closed_form"] is True
        assert parsed.result["polynomial"] == ["1", "11/2", "17/2"]


class TestExitCodes:
    """0 on success, 1 on computation failures, 2 on usage errors."""

    def test_help(self, capsys):
        """--help exits cleanly."""
        assert run(["--help"]) == 0
        assert "reproduce" in capsys.readouterr().out

    @pytest.mark.parametrize(
        "argv",
        [
            [],
            ["mu", "--n", "1"],
            ["ehrhart", "octahedron", "--n", "3"],
            ["reproduce", "--only", "NOPE"],
            ["count", "--cube", "3", "--hexprism"],
            ["interp", "--samples", "0-1"],
        ],
    )
    def test_usage_errors(self, argv):
        """Bad arguments exit with 2."""
        assert run(argv) == 2

    def test_invalid_environment(self, monkeypatch):
        """A malformed CHISEL_BUDGET is a usage error."""
        monkeypatch.setenv("CHISEL_BUDGET", "lots")
        assert run(["choose-a", "--n", "1", "--k", "2"]) == 2

    def test_invalid_log_level_environment(self, monkeypatch, capsys):
        """An unknown CHISEL_LOG_LEVEL is a usage error, not a traceback."""
        monkeypatch.setenv("CHISEL_LOG_LEVEL", "BOGUS")
        assert run(["choose-a", "--n", "1", "--k", "2"]) == 2
        assert "invalid environment" in capsys.readouterr().err

    @pytest.mark.parametrize(
        "argv",
        [
            ["ehrhart", "Q", "--n", "3", "--a", "2", "--b", "1"],
            ["ehrhart", "Q", "--n", "3"],
            ["chisel", "--cube", "3", "--scale", "3", "--depths", "2"],
            ["interp", "--samples", "0:1,0:2"],
            ["count", "--cube", "3", "--scale", "10", "--threads", "1", "--budget", "5"],
        ],
    )
    def test_computation_errors(self, argv):
        """Domain errors exit with 1."""
        assert run(argv) == 1

    def test_failed_reproduction(self, capsys):
        """A failing check makes reproduce exit with 1."""
        report = ReproductionReport(
            passed=False,
            checks=[
                CheckResult(
                    group="B3",
                    item="ehrhart",
                    passed=False,
                    expected="[1]",
                    actual="[2]",
                    detail="first difference at index 0: expected 1, got 2",
                )
            ],
        )
        with patch("src.chisel.cli.reproduce", return_value=report) as mock_reproduce:
            code = run(["reproduce", "--only", "B3", "--json"])
        assert code == 1
        mock_reproduce.assert_called_once()
        data = json.loads(capsys.readouterr().out)
        assert data["result"]["report"]["passed"] is False
        assert data["status"] == "failed"


class TestReproduceCommand:
    """The reproduce subcommand end to end."""

    def test_single_group(self, capsys):
        """B3 passes."""
        code, _, data = _json(capsys, ["reproduce", "--only", "b3"])
        assert code == 0
        report = data["result"]["report"]
        assert report["passed"] is True
        assert {c["group"] for c in report["checks"]} == {"B3"}

    def test_text_table(self, capsys, monkeypatch):
        """Text mode prints one row per check."""
        monkeypatch.setenv("COLUMNS", "200")
        assert run(["reproduce", "--only", "B3,Q7"]) == 0
        out = capsys.readouterr().out
        assert "linear-law" in out
        assert "q-coefficients" in out


class TestTextOutput:
    """rich rendering."""

    def test_alpha_table(self, capsys, monkeypatch):
        """The n = 7 row shows -5/3136."""
        monkeypatch.setenv("COLUMNS", "200")
        assert run(["alpha-table"]) == 0
        out = capsys.readouterr().out
        assert "-5/3136" in out
        assert "127/14400" in out

    def test_polynomial(self, capsys, monkeypatch):
        """Polynomials print in descending order."""
        monkeypatch.setenv("COLUMNS", "200")
        assert run(["ehrhart", "B", "--k", "4"]) == 0
        assert "501921t^3 + 15363t^2 - 45t + 1" in capsys.readouterr().out
