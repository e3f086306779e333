import math

import numpy as np
import pytest

from squeezebath.cli import (
    DEFAULTS,
    TRAJECTORY_HEADER,
    figure_initial,
    figure_schedule,
    main,
    resolve_config,
)
from squeezebath.errors import InvalidInputError


def _read(path):
    return path.read_text(encoding="utf-8")


def _column(text, name):
    lines = text.strip().splitlines()
    idx = lines[0].split(",").index(name)
    return np.array([float(line.split(",")[idx]) for line in lines[1:]])


def test_defaults_resolve():
    rc = resolve_config({}, ".")
    assert rc.t_max == 30.0
    assert rc.dt_out == 0.05
    assert rc.dt_int == 0.001
    assert rc.figure_ids == (1, 2, 3, 4, 5, 6)
    assert not rc.schedule.thermal
    assert rc.init.mu == pytest.approx(
        math.sqrt(0.2) * complex(math.cos(math.pi / 3), math.sin(math.pi / 3)), rel=1e-12
    )


def test_overrides_change_schedule_kind():
    rc = resolve_config(
        {"schedule.r.kind": "const", "schedule.r.value": "0.6"}, "."
    )
    point = rc.schedule.at(0.0)
    assert point.n_param == pytest.approx(math.sinh(0.6) ** 2, rel=1e-14)


def test_unknown_key_is_rejected():
    with pytest.raises(InvalidInputError):
        resolve_config({"grid.bogus": "1"}, ".")
    with pytest.raises(InvalidInputError):
        resolve_config({"schedule.r.omega": "1"}, ".")  # exp kind has no omega


def test_missing_kind_parameter_is_rejected():
    with pytest.raises(InvalidInputError):
        resolve_config({"schedule.r.kind": "sin", "schedule.r.a": "0.1"}, ".")


def test_config_file_and_override_precedence(tmp_path):
    cfg = tmp_path / "run.cfg"
    cfg.write_text("# comment\ngrid.t_max = 2\ngrid.dt_out=0.1\n", encoding="utf-8")
    out = tmp_path / "out"
    rc = main(
        ["trajectory", "--config", str(cfg), "--out", str(out), "--grid.t_max=1"]
    )
    assert rc == 0
    text = _read(out / "trajectory.csv")
    lines = text.strip().splitlines()
    assert lines[0] == TRAJECTORY_HEADER
    assert len(lines) == 1 + 11  # t_max 1 (override wins), dt_out 0.1
    assert lines[1].startswith("0,1,0.1,0,")


def test_trajectory_output_is_deterministic(tmp_path):
    out_a = tmp_path / "a"
    out_b = tmp_path / "b"
    args = ["trajectory", "--grid.t_max=1", "--grid.dt_out=0.25"]
    assert main(args + ["--out", str(out_a)]) == 0
    assert main(args + ["--out", str(out_b)]) == 0
    assert _read(out_a / "trajectory.csv") == _read(out_b / "trajectory.csv")


def test_vacuum_trajectory_matches_decay_law(tmp_path):
    out = tmp_path / "vac"
    rc = main(
        [
            "trajectory",
            "--out", str(out),
            "--schedule.r.kind=const", "--schedule.r.value=0",
            "--initial.mu_abs2=1", "--initial.mu_phase=0",
            "--initial.nu_abs2=0", "--initial.nu_phase=0",
            "--grid.t_max=5", "--grid.dt_out=0.25",
        ]
    )
    assert rc == 0
    text = _read(out / "trajectory.csv")
    ts = _column(text, "t")
    sz = _column(text, "sz")
    assert np.max(np.abs(sz - (2.0 * np.exp(-ts) - 1.0))) <= 1e-8


def test_trajectory_rows_within_tolerances(tmp_path):
    out = tmp_path / "tol"
    assert main(["trajectory", "--out", str(out), "--grid.t_max=10"]) == 0
    text = _read(out / "trajectory.csv")
    assert np.max(np.abs(_column(text, "trace_err"))) <= 1e-9
    assert np.min(_column(text, "min_eig")) >= -1e-8
    assert np.max(_column(text, "trace_dist_ref")) <= 1e-7


def test_figures_subset_with_charts(tmp_path):
    out = tmp_path / "figs"
    rc = main(
        [
            "figures",
            "--out", str(out),
            "--figures.ids=2,5",
            "--figures.plot=true",
            "--grid.t_max=4", "--grid.dt_out=0.1",
        ]
    )
    assert rc == 0
    names = sorted(p.name for p in out.iterdir())
    assert names == ["fig2.csv", "fig2.svg", "fig5.csv", "fig5.svg"]
    svg = _read(out / "fig5.svg")
    assert svg.startswith("<svg") and svg.rstrip().endswith("</svg>")


def test_even_figure_sy_is_flat_zero(tmp_path):
    out = tmp_path / "even"
    rc = main(
        ["figures", "--out", str(out), "--figures.ids=2",
         "--grid.t_max=6", "--grid.dt_out=0.05"]
    )
    assert rc == 0
    text = _read(out / "fig2.csv")
    assert np.max(np.abs(_column(text, "sy"))) <= 1e-9
    assert np.max(np.abs(_column(text, "sy_ref"))) <= 1e-9


def test_figure_definitions():
    assert figure_schedule(3).r(0.0) == pytest.approx(0.3)
    assert figure_schedule(5).r(10.0) == pytest.approx(0.6 * math.exp(-1.0), rel=1e-14)
    odd = figure_initial(1)
    even = figure_initial(2)
    assert odd.mu.imag > 0.0
    assert even.mu.imag == 0.0
    assert abs(odd.mu) == pytest.approx(abs(even.mu), rel=1e-15)
    with pytest.raises(InvalidInputError):
        figure_schedule(7)


def test_invalid_inputs_exit_one(tmp_path, capsys):
    assert main(["trajectory", "--out", str(tmp_path), "--grid.t_max=-3"]) == 1
    assert main(["trajectory", "--out", str(tmp_path), "--nonsense"]) == 1
    assert main(["waltz"]) == 1
    assert main(["trajectory", "--config", str(tmp_path / "missing.cfg")]) == 1
    err = capsys.readouterr().err
    assert "error:" in err


def test_bad_config_line_exits_one(tmp_path, capsys):
    cfg = tmp_path / "broken.cfg"
    cfg.write_text("this line has no equals sign\n", encoding="utf-8")
    assert main(["trajectory", "--config", str(cfg), "--out", str(tmp_path)]) == 1
    assert "broken.cfg:1" in capsys.readouterr().err


def test_spectrum_command(tmp_path):
    out = tmp_path / "spec"
    rc = main(
        ["spectrum", "--out", str(out),
         "--schedule.r.kind=const", "--schedule.r.value=0.1"]
    )
    assert rc == 0
    text = _read(out / "spectrum.csv")
    assert np.max(_column(text, "abs_diff")) <= 1e-12
    eigs = _column(text, "eig_re")
    want = [0.0, -0.40936537653899097, -0.6107013790800849, -1.020066755619076]
    assert np.allclose(eigs, want, atol=1e-12)


def test_steady_command_asymptotic(tmp_path):
    out = tmp_path / "steady"
    rc = main(
        ["steady", "--out", str(out),
         "--schedule.r.kind=const", "--schedule.r.value=0.6"]
    )
    assert rc == 0
    text = _read(out / "steady.csv")
    n = math.sinh(0.6) ** 2
    assert _column(text, "rho_ee")[0] == pytest.approx(n / (2 * n + 1), rel=1e-12)
    assert _column(text, "sz")[0] == pytest.approx(-1.0 / (2 * n + 1), rel=1e-12)


def test_steady_command_rejects_diverging_schedule(tmp_path):
    rc = main(
        ["steady", "--out", str(tmp_path),
         "--schedule.r.kind=sin", "--schedule.r.a=0.3", "--schedule.r.b=0.2",
         "--schedule.r.omega=1", "--schedule.r.phase=0"]
    )
    assert rc == 1  # no asymptotic limit to report


def test_verify_default_passes(tmp_path, capsys):
    out = tmp_path / "ver"
    rc = main(["verify", "--out", str(out)])
    captured = capsys.readouterr()
    assert rc == 0
    report = _read(out / "verify_report.txt")
    assert "[FAIL]" not in report
    assert "alpha-root-adjudication" in report
    assert "residual[N/(N+1)]" in report and "residual[N/(2N+1)]" in report
    assert "summary:" in captured.out


def test_verify_coarse_step_fails_oracle(tmp_path, capsys):
    out = tmp_path / "coarse"
    rc = main(["verify", "--out", str(out), "--grid.dt_int=0.5", "--grid.dt_out=0.5"])
    captured = capsys.readouterr()
    assert rc == 2
    report = _read(out / "verify_report.txt")
    assert "[FAIL] oracle-agreement" in report
    assert "oracle-agreement" in captured.err


def test_verify_thermal_skips_squeezing_checks(tmp_path):
    out = tmp_path / "thermal"
    rc = main(
        ["verify", "--out", str(out),
         "--schedule.mode=thermal", "--schedule.nbar=0.7"]
    )
    assert rc == 0
    report = _read(out / "verify_report.txt")
    assert "[SKIP] spectrum-formulas" in report
    assert "[SKIP] decay-asymmetry" in report
    assert "skipped: thermal override" in report


def test_defaults_cover_every_documented_key():
    # kind-specific control parameters resolve against their default kinds
    for key in DEFAULTS:
        rc = resolve_config({key: DEFAULTS[key]}, ".")
        assert rc is not None
