import csv
import io
import json
import shutil
import subprocess
import sys

import pytest

from lambertlog.cli import (EXIT_CONFIG, EXIT_FAIL, EXIT_OK, ConfigError, main, parse_complex,
                            parse_k_range, read_config, render)

REPORT_KEYS = {"identity", "paper_ref", "params", "lhs", "rhs", "abs_err", "rel_err", "pass",
               "terms", "evals", "wall_ms"}


def run(capsys, *argv):
    code = main(list(argv))
    out, err = capsys.readouterr()
    return code, out, err


def csv_rows(text):
    return list(csv.DictReader(io.StringIO(text)))


# ---------------------------------------------------------------- parsing

def test_parse_complex_forms():
    assert parse_complex("1,0") == 1 + 0j
    assert parse_complex("-0.5,2") == -0.5 + 2j
    assert parse_complex("3") == 3 + 0j
    with pytest.raises(ConfigError):
        parse_complex("1,2,3")


def test_parse_k_range_forms():
    assert parse_k_range("1..4") == [1, 2, 3, 4]
    assert parse_k_range("2,5") == [2, 5]
    with pytest.raises(ConfigError):
        parse_k_range("4..1")


def test_render_serializes_complex_as_pairs():
    text = render([{"z": 1 + 2j, "x": float("inf")}], "json")
    assert json.loads(text) == [{"z": {"re": 1.0, "im": 2.0}, "x": None}]
    rows = csv_rows(render([{"z": 1 + 2j}], "csv"))
    assert rows == [{"z_re": "1.0", "z_im": "2.0"}]


# ---------------------------------------------------------------- verify

def test_verify_single_point(capsys):
    code, out, _ = run(capsys, "verify", "--identity", "thm1.1", "--y", "1,0")
    assert code == EXIT_OK
    rows = json.loads(out)
    assert len(rows) == 1
    row = rows[0]
    assert REPORT_KEYS <= set(row)
    assert row["pass"] and row["rel_err"] < 1e-9
    assert row["params"]["y"] == {"re": 1.0, "im": 0.0}
    assert row["paper_ref"] and row["wall_ms"] is None


def test_verify_rejects_left_half_plane(capsys):
    code, out, err = run(capsys, "verify", "--identity", "thm1.1", "--y", "-1,0")
    assert code == EXIT_CONFIG
    assert "Re(y) must be positive" in err
    assert out == ""


def test_verify_unknown_identity(capsys):
    code, _, err = run(capsys, "verify", "--identity", "nope")
    assert code == EXIT_CONFIG and "unknown identity" in err


def test_verify_needs_a_selection(capsys):
    code, _, _ = run(capsys, "verify")
    assert code == EXIT_CONFIG


def test_verify_rejects_unused_axis(capsys):
    code, _, err = run(capsys, "verify", "--identity", "dgkm", "--y", "1,0")
    assert code == EXIT_CONFIG and "not used" in err


def test_verify_grid_is_cartesian(capsys):
    code, out, _ = run(capsys, "verify", "--identity", "kloosterman_line", "--z", "2,0",
                       "--z", "1,1", "--c", "0.3,0.7")
    rows = json.loads(out)
    assert code == EXIT_OK and len(rows) == 4
    assert [(r["params"]["z"]["re"], r["params"]["c"]) for r in rows] == \
        [(2.0, 0.3), (2.0, 0.7), (1.0, 0.3), (1.0, 0.7)]


def test_verify_tolerance_override_fails_rows(capsys):
    code, out, _ = run(capsys, "verify", "--identity", "wigert", "--y", "1,0",
                       "--abs-tol", "0", "--rel-tol", "1e-30")
    assert code == EXIT_FAIL
    assert json.loads(out)[0]["pass"] is False


def test_verify_csv_output(capsys):
    code, out, _ = run(capsys, "verify", "--identity", "dgkm", "--w", "1,0", "--format", "csv")
    rows = csv_rows(out)
    assert code == EXIT_OK and len(rows) == 1
    for col in ("identity", "paper_ref", "params_w_re", "params_w_im", "lhs_re", "lhs_im",
                "rhs_re", "abs_err", "rel_err", "pass", "wall_ms"):
        assert col in rows[0]


def test_verify_timing_fills_wall_ms(capsys):
    _, out, _ = run(capsys, "verify", "--identity", "dgkm", "--w", "1,0", "--timing")
    assert json.loads(out)[0]["wall_ms"] >= 0


def test_verify_random_is_seeded(capsys):
    args = ("verify", "--identity", "kernel_cosine", "--random", "3")
    _, a, _ = run(capsys, *args, "--seed", "5")
    _, b, _ = run(capsys, *args, "--seed", "5")
    _, c, _ = run(capsys, *args, "--seed", "6")
    assert a == b and a != c
    assert len(json.loads(a)) == 3


def test_verify_threads_do_not_change_output(capsys):
    args = ("verify", "--identity", "dgkm,digamma_power_series,lambert_log")
    _, one, _ = run(capsys, *args, "--threads", "1")
    _, many, _ = run(capsys, *args, "--threads", "4")
    assert one == many


def test_verify_output_file(tmp_path, capsys):
    path = tmp_path / "r.json"
    code, out, _ = run(capsys, "verify", "--identity", "dgkm", "-o", str(path))
    assert code == EXIT_OK and out == ""
    assert len(json.loads(path.read_text())) == 3


def test_verify_all_runs_every_identity(capsys):
    code, out, err = run(capsys, "verify", "--all")
    rows = json.loads(out)
    names = {r["identity"] for r in rows}
    assert {"lambert_log", "wigert", "ramanujan", "maineqn", "dgkm", "kloosterman_line",
            "analogue_dgkm", "mittag_d2b", "kernel_cosine", "digamma_power_series",
            "psi1_asymptotic", "logy0"} <= names
    # the psi_1 asymptotic bound sits below binary64 rounding at two of its points
    failing = {r["identity"] for r in rows if not r["pass"]}
    assert failing == {"psi1_asymptotic"}
    assert code == EXIT_FAIL
    assert "rows passed" in err


# ---------------------------------------------------------------- configuration

def test_config_file_and_flag_precedence(tmp_path, capsys):
    cfg = tmp_path / "run.cfg"
    cfg.write_text("# sweep defaults\nformat = csv\nthreads = 2\n")
    _, out, _ = run(capsys, "verify", "--identity", "dgkm", "--w", "1,0", "--config", str(cfg))
    assert out.startswith("identity,")
    _, out, _ = run(capsys, "verify", "--identity", "dgkm", "--w", "1,0", "--config", str(cfg),
                    "--format", "json")
    assert json.loads(out)[0]["identity"] == "dgkm"


def test_config_unknown_key(tmp_path, capsys):
    cfg = tmp_path / "bad.cfg"
    cfg.write_text("colour = blue\n")
    code, _, err = run(capsys, "verify", "--identity", "dgkm", "--config", str(cfg))
    assert code == EXIT_CONFIG and "unknown key" in err


def test_read_config_ignores_comments(tmp_path):
    cfg = tmp_path / "c.cfg"
    cfg.write_text("seed = 9  # trailing\n\n# full line\nrel-tol = 1e-3\n")
    assert read_config(str(cfg)) == {"seed": 9, "rel_tol": 1e-3}


def test_thread_count_from_environment(monkeypatch, capsys):
    monkeypatch.setenv("LAMBERTLOG_THREADS", "0")
    code, _, err = run(capsys, "verify", "--identity", "dgkm")
    assert code == EXIT_CONFIG and "thread" in err
    monkeypatch.setenv("LAMBERTLOG_THREADS", "3")
    code, _, _ = run(capsys, "verify", "--identity", "dgkm")
    assert code == EXIT_OK


# ---------------------------------------------------------------- asympt

def test_asympt_small_y_rows(capsys):
    code, out, _ = run(capsys, "asympt", "--target", "thm1.2", "--y", "0.05,0", "--K", "1..4")
    rows = csv_rows(out)
    assert code == EXIT_OK and len(rows) == 4
    diffs = [float(r["abs_diff"]) for r in rows]
    nxt = [float(r["next_term"]) for r in rows]
    assert all(b < a for a, b in zip(diffs, diffs[1:]))
    assert all(d <= 10 * t for d, t in zip(diffs, nxt))


def test_asympt_psi1_rows_fall_to_the_rounding_floor(capsys):
    code, out, _ = run(capsys, "asympt", "--target", "thm3.1", "--z", "0,25", "--K", "1..6")
    rows = csv_rows(out)
    assert code == EXIT_OK and len(rows) == 6
    diffs = [float(r["abs_diff"]) for r in rows]
    assert diffs[0] > diffs[1] > diffs[2] > diffs[3]
    assert diffs[5] < 1e-14


def test_asympt_psi1_optimal_truncation_dip(capsys):
    _, out, _ = run(capsys, "asympt", "--target", "thm3.1", "--z", "0,3", "--K", "1..14")
    rows = csv_rows(out)
    diffs = [float(r["abs_diff"]) for r in rows]
    best = diffs.index(min(diffs)) + 1
    assert 2 < best < 14
    assert abs(best - int(rows[0]["optimal_K"])) <= 2
    assert rows[-1]["past_optimal"] == "True"


def test_asympt_empty_grid(capsys):
    code, _, err = run(capsys, "asympt", "--target", "thm1.2", "--K", "1..4")
    assert code == EXIT_CONFIG and "empty grid" in err


def test_asympt_unknown_target(capsys):
    code, _, _ = run(capsys, "asympt", "--target", "thm9", "--y", "1,0", "--K", "1")
    assert code == EXIT_CONFIG


def test_asympt_sector_violation(capsys):
    code, _, _ = run(capsys, "asympt", "--target", "thm1.2", "--y", "-1,1", "--K", "1")
    assert code == EXIT_CONFIG


# ---------------------------------------------------------------- moment

def test_moment_three_rows_and_summary(capsys):
    code, out, err = run(capsys, "moment", "--delta", "0.4,0.2,0.1")
    rows = csv_rows(out)
    assert code == EXIT_OK and len(rows) == 3
    assert [float(r["delta"]) for r in rows] == [0.4, 0.2, 0.1]
    assert "cauchy_converging=True" in err and "d0=" in err


def test_moment_calibrate_runs_sw2nd_first(capsys):
    code, out, err = run(capsys, "moment", "--calibrate", "--format", "json")
    body = json.loads(out)
    kinds = [r["kind"] for r in body["rows"]]
    assert code == EXIT_OK
    assert kinds == ["sw2nd"] * 3 + ["zeta_zeta_prime"] * 3
    assert [s["kind"] for s in body["summary"]] == ["sw2nd", "zeta_zeta_prime"]
    assert err.index("sw2nd") < err.index("zeta_zeta_prime")


def test_moment_rotated_rows(capsys):
    code, out, _ = run(capsys, "moment", "--delta", "0.3", "--rotated", "--format", "json")
    rows = json.loads(out)["rows"]
    assert code == EXIT_OK
    direct = next(r for r in rows if r["kind"] == "zeta_zeta_prime")
    rotated = next(r for r in rows if r["kind"] == "rotated")
    gap = abs(complex(direct["value"]["re"], direct["value"]["im"])
              - complex(rotated["value"]["re"], rotated["value"]["im"]))
    assert gap <= 1e-8 * abs(complex(direct["value"]["re"], direct["value"]["im"]))
    assert rotated["series_rel_err"] <= 1e-8


def test_moment_delta_out_of_range(capsys):
    code, _, err = run(capsys, "moment", "--delta", "4.0")
    assert code == EXIT_CONFIG and "delta" in err


# ---------------------------------------------------------------- eval and report

def test_eval_psi1_at_one(capsys):
    code, out, _ = run(capsys, "eval", "psi1", "--z", "1,0")
    row = json.loads(out)[0]
    assert code == EXIT_OK
    assert abs(row["value"]["re"] - 0.072815845483676724861) <= 1e-15


def test_eval_rejects_pole(capsys):
    code, _, _ = run(capsys, "eval", "digamma", "--z", "-2,0")
    assert code == EXIT_CONFIG


def test_eval_unknown_function(capsys):
    code, _, _ = run(capsys, "eval", "bessel", "--z", "1,0")
    assert code == EXIT_CONFIG


def test_report_summarizes_a_verify_run(tmp_path, capsys):
    path = tmp_path / "r.json"
    run(capsys, "verify", "--identity", "dgkm,wigert", "-o", str(path))
    code, out, _ = run(capsys, "report", str(path))
    rows = csv_rows(out)
    assert code == EXIT_OK
    assert [(r["identity"], r["rows"], r["passed"]) for r in rows] == [("dgkm", "3", "3"), ("wigert", "3", "3")]


def test_report_flags_failures(tmp_path, capsys):
    path = tmp_path / "r.json"
    run(capsys, "verify", "--identity", "psi1_asymptotic", "-o", str(path))
    code, _, _ = run(capsys, "report", str(path))
    assert code == EXIT_FAIL


def test_report_missing_file(tmp_path, capsys):
    code, _, _ = run(capsys, "report", str(tmp_path / "absent.json"))
    assert code == EXIT_CONFIG


# ---------------------------------------------------------------- the installed script

def test_console_script_round_trip():
    exe = shutil.which("lambertlog")
    cmd = [exe] if exe else [sys.executable, "-m", "lambertlog.cli"]
    proc = subprocess.run(cmd + ["verify", "--identity", "ramanujan"], capture_output=True,
                          text=True, timeout=120)
    assert proc.returncode == 0
    assert len(json.loads(proc.stdout)) == 3
    proc = subprocess.run(cmd + ["verify", "--identity", "thm1.1", "--y", "-1,0"],
                          capture_output=True, text=True, timeout=120)
    assert proc.returncode == 2 and "Re(y) must be positive" in proc.stderr
