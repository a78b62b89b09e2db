import io
import json
import math
from pathlib import Path

import jsonschema
import pandas as pd
import pytest
from typer.testing import CliRunner

from app.main import EXIT_OK, EXIT_USAGE, EXIT_VERIFICATION_FAILED, cli
from conftest import C6

SCHEMAS = Path(__file__).resolve().parents[1] / "docs" / "schemas"

pytestmark = pytest.mark.integration

runner = CliRunner()


def _schema(name: str) -> dict:
    return json.loads((SCHEMAS / name).read_text())


def _invoke(*args: str):
    return runner.invoke(cli, list(args))


def test_constant_json():
    result = _invoke("constant", "--p", "6")
    assert result.exit_code == EXIT_OK, result.output
    payload = json.loads(result.stdout)
    jsonschema.validate(payload, _schema("constants.schema.json"))
    assert payload["c_p"] == pytest.approx(C6, rel=1e-12)
    assert payload["a_p"] > 1.0


def test_constant_at_two_has_no_touching_data():
    payload = json.loads(_invoke("constant", "--p", "2").stdout)
    assert payload["c_p"] == pytest.approx(1.0, abs=1e-12)
    assert payload["a_p"] is None and payload["i_p"] is None


def test_constant_csv():
    result = _invoke("constant", "--p", "12", "--format", "csv")
    frame = pd.read_csv(io.StringIO(result.stdout))
    assert frame.loc[0, "c_p"] == pytest.approx(4.0 + math.sqrt(15.0), rel=1e-12)


@pytest.mark.parametrize(
    "args",
    [
        ("constant", "--p", "1.5"),
        ("constant", "--p", "6", "--zero-tol", "-1"),
        ("constant", "--p", "6", "--format", "xml"),
        ("simulate", "--p", "6", "--strategy", "bogus"),
        ("simulate", "--p", "6", "--paths", "10"),
        ("simulate", "--p", "2", "--strategy", "greedy", "--paths", "1000"),
        ("table", "--p-list", "30,10"),
        ("table", "--p-list", "ten"),
        ("verify", "--p", "6", "--grid", "50"),
    ],
)
def test_usage_errors(args):
    assert _invoke(*args).exit_code == EXIT_USAGE


def test_missing_config_file(tmp_path):
    assert _invoke("--config", str(tmp_path / "absent.yaml"), "constant", "--p", "6").exit_code == EXIT_USAGE


def test_table():
    result = _invoke("table", "--p-list", "6,12")
    assert result.exit_code == EXIT_OK, result.output
    header = result.stdout.splitlines()[0]
    assert header.startswith("# j0 = ")
    assert float(header.split("=")[1]) == pytest.approx(2.404825557695773, abs=1e-12)
    frame = pd.read_csv(io.StringIO(result.stdout), comment="#")
    assert list(frame["p"]) == [6.0, 12.0]
    assert frame.loc[1, "p_one_minus_z"] == pytest.approx(2.7048, abs=1e-4)
    assert frame.loc[0, "general_bound"] == pytest.approx(5.0)


def test_verify_passes(tmp_path):
    dump = tmp_path / "candidate.csv"
    result = _invoke("verify", "--p", "6", "--grid", "200", "--directions", "16", "--dump", str(dump))
    assert result.exit_code == EXIT_OK, result.output
    report = json.loads(result.stdout)
    jsonschema.validate(report, _schema("verification_report.schema.json"))
    assert all(check["pass"] for check in report["checks"])
    names = {check["name"] for check in report["checks"]}
    assert {"supersolution_minus", "quadratic_form", "beta_increasing"} <= names
    table = pd.read_csv(dump)
    assert list(table.columns) == ["s", "g", "g_prime", "g_second", "Dg", "Dtilde_g"]
    assert len(table) == 200


def test_verify_fails_below_the_sharp_constant():
    result = _invoke("verify", "--p", "6", "--grid", "200", "--directions", "16", "--override-c", str(0.99 * C6))
    assert result.exit_code == EXIT_VERIFICATION_FAILED
    report = json.loads(result.stdout)
    jsonschema.validate(report, _schema("verification_report.schema.json"))
    assert report["override_c"] == pytest.approx(0.99 * C6)
    failed = {check["name"] for check in report["checks"] if not check["pass"]}
    assert "finite_majorant_at_zp" in failed


SIM_ARGS = ("simulate", "--p", "6", "--strategy", "identity", "--strategy", "damped", "--paths", "2000", "--steps", "16")


def test_simulate_json():
    result = _invoke(*SIM_ARGS, "--format", "json")
    assert result.exit_code == EXIT_OK, result.output
    rows = json.loads(result.stdout)
    jsonschema.validate(rows, _schema("simulation.schema.json"))
    assert [row["strategy"] for row in rows] == ["identity", "damped"]
    assert rows[0]["ratio"] == pytest.approx(1.0)
    assert rows[1]["c_p"] == pytest.approx(C6, rel=1e-12)


def test_simulate_is_reproducible():
    assert _invoke(*SIM_ARGS).stdout == _invoke(*SIM_ARGS).stdout


def test_simulate_to_file(tmp_path):
    out = tmp_path / "nested" / "sim.csv"
    result = _invoke(*SIM_ARGS, "--out", str(out))
    assert result.exit_code == EXIT_OK
    assert result.stdout == ""
    frame = pd.read_csv(out)
    assert list(frame["strategy"]) == ["identity", "damped"]
    assert {"se", "c_p", "ratio", "max_qv_ratio"} <= set(frame.columns)


def test_config_file_sets_defaults(tmp_path):
    config = tmp_path / "run.yaml"
    config.write_text("simulation:\n  n_paths: 1000\n  n_steps: 8\n  n_batches: 10\n  strategies: [antiphase]\n")
    result = _invoke("--config", str(config), "simulate", "--p", "3", "--format", "json")
    assert result.exit_code == EXIT_OK, result.output
    rows = json.loads(result.stdout)
    assert [(row["strategy"], row["n_paths"], row["n_steps"]) for row in rows] == [("antiphase", 1000, 8)]


def _grid_sizes(*args: str) -> dict:
    result = _invoke("verify", "--p", "6", "--directions", "16", *args)
    assert result.exit_code == EXIT_OK, result.output
    return {check["name"]: check["grid_size"] for check in json.loads(result.stdout)["checks"]}


def test_verify_quad_grid_option():
    sizes = _grid_sizes("--grid", "200", "--quad-grid", "300")
    assert sizes["supersolution_minus"] == 202
    assert sizes["quadratic_form"] == 302


def test_verify_grid_alone_sets_both_grids():
    sizes = _grid_sizes("--grid", "200")
    assert sizes["quadratic_form"] == sizes["supersolution_minus"] == 202
