import csv
import io
import json
import math
from types import SimpleNamespace

import numpy as np
import pytest

from core.formatting import CsvTable, format_field
from core.inference import contour_marginal_t1, contour_marginal_t2, contour_standard, regularized_center
from core.intervals import critical_value, lambda1_star, lambda2_star
from core.models import BracketConfig, CoverageReport, Observation
from holderim import HolderIM

Z = 1.959963984540054


def run(capsys, *argv):
    status = HolderIM().run(list(argv))
    captured = capsys.readouterr()
    return status, captured.out, captured.err


def read_csv(text):
    return list(csv.DictReader(io.StringIO(text)))


def test_format_field():
    assert format_field(0.1) == "0.1"
    assert format_field(1 / 3) == "0.333333333333"
    assert format_field(-0.0) == "0"
    assert format_field(math.inf) == "inf"
    assert format_field(12345678.9) == "12345678.9"
    assert format_field(7) == "7"
    assert format_field(True) == "true"
    assert format_field("partial") == "partial"


def test_csv_table_checks_row_width():
    table = CsvTable("a", "b")
    with pytest.raises(ValueError):
        table.add_row(1.0)
    table.add_row(1.0, "x")
    out = io.StringIO()
    table.write(out)
    assert out.getvalue() == "a,b\n1,x\n"


def test_contour_standard(capsys):
    status, out, _ = run(capsys, "contour", "--method", "standard", "--sweep", "theta2:-3.5:4.5:161")
    assert status == 0
    assert out.splitlines()[0] == "theta2,method,lambda,B,possibility"
    rows = read_csv(out)
    assert len(rows) == 161
    mode = next(row for row in rows if float(row["theta2"]) == 0.5)
    assert float(mode["possibility"]) == 1.0
    assert {row["method"] for row in rows} == {"standard"}


@pytest.mark.parametrize("method", ["partial", "t1", "regularized", "t2"])
def test_contour_matches_library(capsys, method):
    status, out, _ = run(capsys, "contour", "--method", method, "--lambda", "0.8", "--B", "1.2", "--y1", "0.3")
    assert status == 0
    y = Observation(0.3, 0.5)
    contour = contour_marginal_t1 if method in ("partial", "t1") else contour_marginal_t2
    rows = read_csv(out)
    grid = np.linspace(0.5 - 4, 0.5 + 4, 161)
    assert len(rows) == len(grid)
    for row, theta2 in zip(rows, grid):
        assert row["theta2"] == format_field(theta2)
        assert row["possibility"] == format_field(contour(y, float(theta2), 0.8, 1.2))
        assert row["lambda"] == "0.8" and row["B"] == "1.2"


def test_contour_plateau_rows_are_one(capsys):
    _, out, _ = run(capsys, "contour", "--method", "t1", "--lambda", "2", "--B", "1")
    center = regularized_center(Observation(1.0, 0.5), 2.0)
    edge = 2.0 / 5
    plateau = [row for row in read_csv(out) if abs(float(row["theta2"]) - center) < edge * 0.99]
    assert plateau
    assert all(row["possibility"] == "1" for row in plateau)


def test_contour_default_grid_is_centred_on_y2(capsys):
    _, out, _ = run(capsys, "contour", "--y2", "2")
    rows = read_csv(out)
    assert float(rows[0]["theta2"]) == -2.0 and float(rows[-1]["theta2"]) == 6.0
    assert float(rows[80]["possibility"]) == contour_standard(2.0, 2.0)


def test_ci_standard(capsys):
    status, out, _ = run(capsys, "ci", "--y1", "1", "--y2", "0.5", "--alpha", "0.05", "--B", "1")
    assert status == 0
    payload = json.loads(out)
    assert list(payload) == ["method", "lambda", "lower", "upper", "length", "alpha", "B"]
    assert payload["method"] == "standard" and payload["lambda"] == 0.0
    assert payload["length"] == pytest.approx(3.919928, abs=1e-5)


def test_ci_tuned(capsys):
    _, out, _ = run(capsys, "ci", "--method", "partial", "--tune", "--B", "1")
    partial = json.loads(out)
    assert partial["length"] == pytest.approx(3.585134, abs=1e-4)
    assert partial["lambda"] == pytest.approx(lambda1_star(0.05, 1.0))
    _, out, _ = run(capsys, "ci", "--method", "regularized", "--tune", "--B", "1")
    regularized = json.loads(out)
    assert regularized["length"] < 3.585134
    assert regularized["lower"] < regularized["upper"]


def test_ci_tune_zero_bound(capsys):
    status, out, err = run(capsys, "ci", "--method", "partial", "--tune", "--B", "0")
    assert status == 2
    assert out == ""
    assert err.startswith("holderim: error:")
    assert "sqrt(2) z" in err and format_field(math.sqrt(2) * critical_value(0.05)) in err


@pytest.mark.parametrize(
    "argv",
    [
        ("ci", "--alpha", "1.5"),
        ("ci", "--method", "partial", "--B", "-1"),
        ("contour", "--sweep", "lambda:0:1:5"),
        ("quantiles", "--sweep", "sqrt_gamma:-1:1:5"),
    ],
)
def test_domain_errors_exit_2(capsys, argv):
    status, _, err = run(capsys, *argv)
    assert status == 2
    assert err.startswith("holderim: error:")


@pytest.mark.parametrize(
    "argv",
    [
        ("ci", "--method", "bogus"),
        ("contour", "--sweep", "theta2:1:0:5"),
        ("contour", "--sweep", "theta2:0:1"),
        ("ci", "--alpha", "nan"),
        ("validate", "--theta1", "nan"),
        ("validate", "--theta2", "inf"),
        ("nope",),
        (),
    ],
)
def test_usage_errors_exit_2(capsys, argv):
    with pytest.raises(SystemExit) as excinfo:
        HolderIM().run(list(argv))
    assert excinfo.value.code == 2
    assert "error" in capsys.readouterr().err


def test_bracket_failure_exits_1(capsys, monkeypatch):
    app = HolderIM()
    monkeypatch.setattr(app, "setting", lambda name, default: {"bracket_max_doublings": 1}.get(name, default))
    status = app.run(["ci", "--method", "regularized", "--tune", "--B", "0.001"])
    captured = capsys.readouterr()
    assert status == 1
    assert captured.out == ""
    assert "tuning failed" in captured.err


def test_lengths(capsys):
    status, out, _ = run(capsys, "lengths", "--alpha", "0.05", "--B", "1")
    assert status == 0
    rows = list(csv.reader(io.StringIO(out)))
    assert rows[0] == ["lambda", "L1", "L2"]
    grid, markers = rows[1:202], {row[0]: row[1:] for row in rows[202:]}
    assert len(grid) == 201
    assert list(markers) == ["grid_argmin:L1", "grid_argmin:L2", "optimum:L1", "optimum:L2"]
    assert float(grid[0][1]) == pytest.approx(2 * Z, rel=1e-11) and grid[0][1] == grid[0][2]
    for _, length_L1, length_L2 in grid:
        assert float(length_L2) <= float(length_L1)
    assert float(markers["grid_argmin:L1"][0]) == pytest.approx(lambda1_star(0.05, 1.0), abs=0.05)
    assert float(markers["optimum:L1"][1]) == pytest.approx(3.585134, abs=1e-5)
    assert float(markers["optimum:L2"][1]) <= float(markers["grid_argmin:L2"][1])


@pytest.mark.parametrize("alpha", ["0.05", "0.1", "0.2"])
def test_lengths_L2_has_interior_minimum(capsys, alpha):
    _, out, _ = run(capsys, "lengths", "--alpha", alpha, "--B", "1", "--y1", "7")
    rows = read_csv(out)
    grid = [(float(row["lambda"]), float(row["L2"])) for row in rows if not row["lambda"].startswith(("grid", "opt"))]
    argmin, minimum = min(grid, key=lambda point: point[1])
    assert 0 < argmin < 10
    assert minimum < grid[0][1] and minimum < grid[-1][1]


def test_lengths_zero_bound_has_no_optimum_rows(capsys):
    _, out, _ = run(capsys, "lengths", "--B", "0", "--sweep", "lambda:0:5:11")
    labels = [row[0] for row in csv.reader(io.StringIO(out))]
    assert labels[-2:] == ["grid_argmin:L1", "grid_argmin:L2"]


def test_compare(capsys):
    status, out, _ = run(capsys, "compare", "--alpha", "0.05", "--sweep", "B:0.01:2.2:100")
    assert status == 0
    assert out.splitlines()[0] == "B,len_standard,len_partial_opt,lambda1_star,len_regularized_opt,lambda2_star"
    rows = read_csv(out)
    assert len(rows) == 100
    for row in rows:
        B = float(row["B"])
        standard, partial = float(row["len_standard"]), float(row["len_partial_opt"])
        regularized = float(row["len_regularized_opt"])
        assert regularized < partial <= standard + 1e-12
        if B >= 1.959964:
            assert partial == pytest.approx(standard, abs=1e-9)
            assert float(row["lambda1_star"]) == 0.0
        else:
            assert partial < standard
    at_one = min(rows, key=lambda row: abs(float(row["B"]) - 1.0))
    assert float(at_one["len_standard"]) == pytest.approx(3.919928, abs=1e-4)


def test_compare_zero_bound_row(capsys):
    _, out, _ = run(capsys, "compare", "--sweep", "B:0:0.1:3")
    first = read_csv(out)[0]
    assert first["lambda1_star"] == "inf" and first["lambda2_star"] == "inf"
    assert float(first["len_partial_opt"]) == pytest.approx(math.sqrt(2) * Z, rel=1e-11)
    assert first["len_partial_opt"] == first["len_regularized_opt"]


def test_compare_spot_value(capsys):
    _, out, _ = run(capsys, "compare", "--sweep", "B:0.5:1.5:3")
    row = read_csv(out)[1]
    assert float(row["B"]) == 1.0
    assert float(row["len_partial_opt"]) == pytest.approx(3.585134, abs=1e-4)
    assert float(row["len_standard"]) == pytest.approx(3.919928, abs=1e-4)


def test_quantiles(capsys):
    status, out, _ = run(capsys, "quantiles", "--alpha", "0.05")
    assert status == 0
    rows = read_csv(out)
    assert len(rows) == 101
    assert float(rows[0]["excess"]) == 0.0
    for row in rows:
        assert row["level"] == "0.95"
        if float(row["bound"]) > 0:
            assert float(row["excess"]) < float(row["bound"])


def test_validate_standard(capsys):
    status, out, _ = run(capsys, "validate", "--method", "standard", "--seed", "42", "--reps", "100000")
    assert status == 0
    report = json.loads(out)
    assert report["n_reps"] == 100_000 and report["seed"] == 42 and report["valid"] is True
    assert abs(report["empirical_coverage"] - 0.95) <= 3 * report["std_error"]


def test_validate_is_deterministic(capsys):
    argv = ("validate", "--method", "regularized", "--tune", "--theta1", "1", "--theta2", "0.5", "--reps", "20000")
    _, first, _ = run(capsys, *argv)
    _, second, _ = run(capsys, "--workers", "1", *argv)
    assert first == second


def test_validate_contour_audit(capsys):
    status, out, _ = run(capsys, "validate", "--method", "t2", "--lambda", "1", "--audit", "marginal", "--reps", "20000")
    assert status == 0
    reports = json.loads(out)
    assert [report["alpha"] for report in reports] == [0.01, 0.05, 0.1, 0.2, 0.5]
    assert all(report["mean_length"] is None for report in reports)


def test_validate_tune_uses_configured_bracket(capsys, monkeypatch):
    settings = SimpleNamespace(bracket_tolerance=1e-2)
    monkeypatch.setattr(HolderIM, "config", property(lambda self: settings))
    _, out, _ = run(capsys, "ci", "--method", "regularized", "--tune", "--B", "1")
    tuned = json.loads(out)["lambda"]
    assert tuned == lambda2_star(0.05, 1.0, BracketConfig(tolerance=1e-2)).lambda_star
    assert tuned != lambda2_star(0.05, 1.0).lambda_star
    _, out, _ = run(capsys, "validate", "--method", "regularized", "--tune", "--B", "1", "--reps", "1000")
    assert json.loads(out)["lambda"] == tuned


def test_validate_constraint_violation(capsys):
    status, out, err = run(capsys, "validate", "--theta1", "0", "--theta2", "2", "--B", "1")
    assert status == 2
    assert out == "" and "exceeds B" in err


def test_out_file(capsys, tmp_path):
    target = tmp_path / "ci.json"
    status, out, _ = run(capsys, "ci", "--out", str(target))
    assert status == 0 and out == ""
    assert json.loads(target.read_text(encoding="utf-8"))["method"] == "standard"


@pytest.mark.parametrize("argv", [("ci", "--alpha", "1.5"), ("ci", "--method", "partial", "--tune", "--B", "0")])
def test_out_file_kept_on_error(capsys, tmp_path, argv):
    target = tmp_path / "ci.json"
    target.write_text("PREVIOUS RESULTS\n", encoding="utf-8")
    status, out, _ = run(capsys, *argv, "--out", str(target))
    assert status == 2 and out == ""
    assert target.read_text(encoding="utf-8") == "PREVIOUS RESULTS\n"


def test_out_file_written_when_audit_fails(capsys, tmp_path, monkeypatch):
    target = tmp_path / "validate.json"
    monkeypatch.setattr(CoverageReport, "is_valid", lambda self: False)
    status, _, _ = run(capsys, "validate", "--reps", "1000", "--out", str(target))
    assert status == 1
    assert json.loads(target.read_text(encoding="utf-8"))["n_reps"] == 1000


def test_repeated_runs_are_byte_identical(capsys):
    _, first, _ = run(capsys, "lengths", "--sweep", "lambda:0:3:31")
    _, second, _ = run(capsys, "lengths", "--sweep", "lambda:0:3:31")
    assert first == second


def test_failed_extension_is_reported(capsys):
    app = HolderIM()
    app.load_extensions("contour", "missing")
    assert app.missing_extensions == {"missing"}
    assert set(app.commands) == {"contour"}
    assert "missing" in app.build_parser().description
