import numpy as np
import pytest

from teleportsim.cli import CSV_FIELDS, SweepConfig, UsageError, load_config, main

SQRT_HALF = np.sqrt(0.5)


def run_cli(capsys, *argv):
    code = main(list(argv))
    captured = capsys.readouterr()
    return code, captured.out, captured.err


def parse_report(text):
    values = {}
    for line in text.splitlines():
        parts = line.split()
        if len(parts) == 2:
            try:
                values[parts[0]] = float(parts[1])
            except ValueError:
                pass
    return values


# ---------------------------------------------------------------- teleport

def test_teleport_basis_state_perfect_fidelity(capsys):
    code, out, _ = run_cli(
        capsys, "teleport", "--a-re", "1", "--b-re", "0", "--shots", "100", "--seed", "7"
    )
    assert code == 0
    assert "mean fidelity 1.000000" in out


def test_teleport_counts_sum_to_shots(capsys):
    code, out, _ = run_cli(capsys, "teleport", "--shots", "500", "--seed", "3")
    assert code == 0
    counts = [int(line.rsplit(":", 1)[1]) for line in out.splitlines() if line.startswith("outcome")]
    assert len(counts) == 4
    assert sum(counts) == 500


def test_teleport_outcome_counts_within_three_sigma(capsys):
    code, out, _ = run_cli(
        capsys,
        "teleport", "--a-re", "0.6", "--b-re", "0.8", "--shots", "40000", "--seed", "1",
    )
    assert code == 0
    counts = [int(line.rsplit(":", 1)[1]) for line in out.splitlines() if line.startswith("outcome")]
    sigma = np.sqrt(40000 * 0.25 * 0.75)
    for count in counts:
        assert abs(count - 10000) <= 3 * sigma


def test_teleport_deterministic(capsys):
    _, first, _ = run_cli(capsys, "teleport", "--shots", "1000", "--seed", "11")
    _, second, _ = run_cli(capsys, "teleport", "--shots", "1000", "--seed", "11")
    assert first == second


def test_teleport_rejects_zero_state(capsys):
    code, _, err = run_cli(capsys, "teleport", "--a-re", "0", "--b-re", "0")
    assert code == 2
    assert "do not define" in err


def test_teleport_rejects_nonpositive_shots(capsys):
    code, _, err = run_cli(capsys, "teleport", "--shots", "0")
    assert code == 2
    assert "shots" in err


def test_teleport_rejects_negative_seed(capsys):
    code, _, err = run_cli(capsys, "teleport", "--seed", "-1")
    assert code == 2
    assert "seed" in err


# ---------------------------------------------------------------- deviation

def test_deviation_vanishing_case(capsys):
    code, out, _ = run_cli(capsys, "deviation", "--gamma", "1")
    assert code == 0
    report = parse_report(out)
    assert report["delta_canonical"] == pytest.approx(0, abs=1e-12)
    assert report["delta_paper"] == pytest.approx(0, abs=1e-12)
    assert report["fidelity"] == pytest.approx(1, abs=1e-12)


def test_deviation_fully_dephased_defaults(capsys):
    code, out, _ = run_cli(capsys, "deviation", "--gamma", "0")
    assert code == 0
    report = parse_report(out)
    assert report["delta_canonical"] == pytest.approx(SQRT_HALF, abs=1e-12)
    assert "rho3 (canonical partial trace):" in out
    assert "rho3 (printed closed form):" in out


def test_deviation_rejects_overlap_above_one(capsys):
    code, _, err = run_cli(capsys, "deviation", "--gamma", "1.5")
    assert code == 2
    assert "exceeds 1" in err


def test_deviation_prints_twelve_significant_digits(capsys):
    _, out, _ = run_cli(capsys, "deviation", "--gamma", "0.5", "--a-re", "0.6", "--b-re", "0.8")
    report = parse_report(out)
    expected = np.sqrt(2) * 0.48 * 0.5
    assert report["delta_canonical"] == pytest.approx(expected, abs=1e-11)
    assert len(f"{report['delta_canonical']}") >= 12


def test_deviation_coefficient_flags_reach_the_model(capsys):
    # unit coefficients at gamma=0: rho3 = diag(|a|^2, |b|^2), delta = sqrt(2)|ab|
    code, out, _ = run_cli(
        capsys,
        "deviation", "--gamma", "0",
        "--a-re", "0.6", "--b-re", "0.8",
        "--c0-re", "1", "--c1-re", "1",
    )
    assert code == 0
    report = parse_report(out)
    assert report["delta_canonical"] == pytest.approx(np.sqrt(2) * 0.48, abs=1e-12)
    assert report["fidelity"] == pytest.approx(1 - 2 * 0.36 * 0.64, abs=1e-12)


def test_deviation_gamma_phase_rotates_overlap(capsys):
    # gamma = 0.5 e^{i pi} = -0.5; for c0=c1 the off-diagonal mismatch is
    # a b* (gamma - 1), so delta = sqrt(2)|ab||gamma - 1|
    code, out, _ = run_cli(
        capsys, "deviation", "--gamma", "0.5", "--gamma-phase", str(np.pi)
    )
    assert code == 0
    report = parse_report(out)
    expected = np.sqrt(2) * 0.5 * abs(-0.5 - 1)
    assert report["delta_canonical"] == pytest.approx(expected, abs=1e-11)


# ---------------------------------------------------------------- paper-check

def test_paper_check_reports_trace_discrepancy(capsys):
    code, out, _ = run_cli(capsys, "paper-check", "--gamma", "0")
    assert code == 0
    report = parse_report(out)
    assert report["trace_canonical"] == pytest.approx(1, abs=1e-12)
    assert report["trace_paper"] == pytest.approx(0.5, abs=1e-12)


def test_paper_check_agrees_in_special_case(capsys):
    code, out, _ = run_cli(capsys, "paper-check", "--gamma", "1")
    assert code == 0
    report = parse_report(out)
    assert report["trace_canonical"] == pytest.approx(1, abs=1e-12)
    assert report["trace_paper"] == pytest.approx(1, abs=1e-12)
    assert report["max_abs_difference"] == pytest.approx(0, abs=1e-12)


# ---------------------------------------------------------------- sweep

def read_rows(path):
    lines = path.read_text().splitlines()
    header = lines[0].split(",")
    rows = [dict(zip(header, (float(v) for v in line.split(",")))) for line in lines[1:]]
    return header, rows


def test_sweep_row_count_and_header(tmp_path, capsys):
    out_path = tmp_path / "sweep.csv"
    code, _, _ = run_cli(capsys, "sweep", "--steps", "11", "--out", str(out_path))
    assert code == 0
    header, rows = read_rows(out_path)
    assert header == list(CSV_FIELDS)
    assert len(rows) == 11


def test_sweep_endpoint_values(tmp_path, capsys):
    out_path = tmp_path / "sweep.csv"
    run_cli(capsys, "sweep", "--steps", "2", "--out", str(out_path))
    _, rows = read_rows(out_path)
    assert rows[0]["delta_canonical"] == pytest.approx(np.sqrt(2) * 0.5, abs=1e-12)
    assert rows[-1]["delta_canonical"] == pytest.approx(0, abs=1e-12)
    assert rows[0]["gamma_re"] == 0
    assert rows[-1]["gamma_re"] == 1


def test_sweep_reruns_byte_identical(tmp_path, capsys):
    first = tmp_path / "a.csv"
    second = tmp_path / "b.csv"
    run_cli(capsys, "sweep", "--out", str(first))
    run_cli(capsys, "sweep", "--out", str(second))
    assert first.read_bytes() == second.read_bytes()


def test_sweep_values_round_trip_seventeen_digits(tmp_path, capsys):
    from teleportsim.envmodel import EnvironmentModel, deviation, reduced_state
    from teleportsim.qcore import Ket, to_density

    out_path = tmp_path / "sweep.csv"
    run_cli(capsys, "sweep", "--steps", "5", "--out", str(out_path))
    _, rows = read_rows(out_path)
    a = b = complex(SQRT_HALF)
    rho1 = to_density(Ket(np.array([a, b]), ("3",)))
    for row in rows:
        env = EnvironmentModel(complex(row["gamma_re"], row["gamma_im"]), a, b)
        expected = deviation(reduced_state(a, b, env), rho1)
        assert row["delta_canonical"] == expected  # exact round-trip


def test_sweep_delta_non_increasing_with_defaults(tmp_path, capsys):
    out_path = tmp_path / "sweep.csv"
    run_cli(capsys, "sweep", "--out", str(out_path))
    _, rows = read_rows(out_path)
    assert len(rows) == 101
    deltas = [row["delta_canonical"] for row in rows]
    assert all(later <= earlier + 1e-12 for earlier, later in zip(deltas, deltas[1:]))


def test_sweep_unwritable_path_is_io_error(tmp_path, capsys):
    code, _, err = run_cli(capsys, "sweep", "--out", str(tmp_path / "missing" / "x.csv"))
    assert code == 3
    assert err.startswith("error:")


def test_sweep_rejects_bad_steps(capsys):
    code, _, err = run_cli(capsys, "sweep", "--steps", "1", "--out", "ignored.csv")
    assert code == 2
    assert "steps" in err


def test_sweep_rejects_overlap_range_outside_unit_interval(capsys):
    code, _, err = run_cli(capsys, "sweep", "--gamma-end", "1.2", "--out", "ignored.csv")
    assert code == 2
    assert "gamma_end" in err


# ---------------------------------------------------------------- config file

def test_load_config_defaults_and_single_key(tmp_path):
    path = tmp_path / "run.cfg"
    path.write_text("gamma_end = 1.0\n")
    cfg = load_config(str(path))
    assert cfg == SweepConfig()


def test_load_config_parses_values_and_comments(tmp_path):
    path = tmp_path / "run.cfg"
    path.write_text(
        "# full run\n"
        "\n"
        "steps = 11\n"
        "gamma_start = 0.25  # skip the flat region\n"
        "output_path = out.csv\n"
        "seed = 9\n"
    )
    cfg = load_config(str(path))
    assert cfg.steps == 11
    assert cfg.gamma_start == 0.25
    assert cfg.output_path == "out.csv"
    assert cfg.seed == 9


def test_load_config_unknown_key_names_line():
    import tempfile, os

    with tempfile.NamedTemporaryFile("w", suffix=".cfg", delete=False) as handle:
        handle.write("steps = 3\nstps = 3\n")
        path = handle.name
    try:
        with pytest.raises(UsageError, match=r"unknown key 'stps' \(line 2\)"):
            load_config(path)
    finally:
        os.unlink(path)


def test_load_config_malformed_number_names_line(tmp_path):
    path = tmp_path / "run.cfg"
    path.write_text("gamma_end = 1.0\nsteps = eleven\n")
    with pytest.raises(UsageError, match=r"malformed number for 'steps' \(line 2\)"):
        load_config(str(path))


def test_sweep_flag_overrides_config(tmp_path, capsys):
    cfg_path = tmp_path / "run.cfg"
    out_path = tmp_path / "out.csv"
    cfg_path.write_text(f"steps = 11\noutput_path = {out_path}\n")
    code, _, _ = run_cli(capsys, "sweep", "--config", str(cfg_path), "--steps", "21")
    assert code == 0
    _, rows = read_rows(out_path)
    assert len(rows) == 21


def test_sweep_out_flag_overrides_config_path(tmp_path, capsys):
    cfg_path = tmp_path / "run.cfg"
    cfg_path.write_text("output_path = should_not_exist.csv\nsteps = 3\n")
    out_path = tmp_path / "actual.csv"
    code, _, _ = run_cli(capsys, "sweep", "--config", str(cfg_path), "--out", str(out_path))
    assert code == 0
    assert out_path.exists()
    assert not (tmp_path / "should_not_exist.csv").exists()


def test_sweep_config_error_maps_to_exit_two(tmp_path, capsys):
    cfg_path = tmp_path / "run.cfg"
    cfg_path.write_text("stps = 3\n")
    code, _, err = run_cli(capsys, "sweep", "--config", str(cfg_path))
    assert code == 2
    assert "unknown key 'stps' (line 1)" in err


def test_sweep_missing_config_is_io_error(tmp_path, capsys):
    code, _, err = run_cli(capsys, "sweep", "--config", str(tmp_path / "none.cfg"))
    assert code == 3
    assert "error:" in err


def test_sweep_config_normalizes_amplitudes(tmp_path, capsys):
    cfg_path = tmp_path / "run.cfg"
    out_path = tmp_path / "out.csv"
    cfg_path.write_text("a_re = 3\nb_re = 4\nsteps = 2\n")
    run_cli(capsys, "sweep", "--config", str(cfg_path), "--out", str(out_path))
    _, rows = read_rows(out_path)
    assert rows[0]["a_re"] == pytest.approx(0.6, abs=1e-15)
    assert rows[0]["b_re"] == pytest.approx(0.8, abs=1e-15)


# ---------------------------------------------------------------- argparse plumbing

def test_unknown_subcommand_is_usage_error(capsys):
    assert main(["warp"]) == 2


def test_help_exits_cleanly(capsys):
    assert main(["--help"]) == 0
