"""Command-line front end.

Subcommands: trajectory, figures, spectrum, steady, verify.  Configuration
is a flat dotted-key file (``key=value`` lines, ``#`` comments) merged with
``--key=value`` overrides; unknown or malformed keys abort with exit code 1,
numerical failures with exit code 2.
"""

from __future__ import annotations

import argparse
import math
import os
import sys
from dataclasses import dataclass

import numpy as np

from . import verify as verify_mod
from .algebra import unvectorize
from .bath import BathSchedule, Constant, ExpDecay, Ramp, Sinusoid
from .errors import InvalidInputError, NumericalFailureError
from .gaugeflow import (
    InitialDecomposition,
    assemble_density,
    evolve_gauge,
    pauli_expectations,
)
from .integrate import uniform_grid
from .liouvillian import build_rate_operator, integrate_reference, spectrum, steady_state
from .spectral import asymptotic_gauge_limits
from .states import (
    amplitudes_from_polar,
    min_eigenvalue,
    trace_distance,
    trace_error,
)

__all__ = ["main", "entrypoint", "RunConfig", "DEFAULTS", "TRAJECTORY_HEADER",
           "figure_schedule", "figure_initial", "compute_frame"]

TRAJECTORY_HEADER = (
    "t,gamma,r,theta,N,M_re,M_im,sx,sy,sz,"
    "sx_ref,sy_ref,sz_ref,trace_dist_ref,trace_err,min_eig"
)

DEFAULTS = {
    "schedule.mode": "ideal",
    "schedule.nbar": "0",
    "schedule.gamma.kind": "const",
    "schedule.gamma.value": "1",
    "schedule.r.kind": "exp",
    "schedule.r.c1": "0.1",
    "schedule.r.c2": "0.1",
    "schedule.theta.kind": "const",
    "schedule.theta.value": "0",
    "initial.mu_abs2": "0.2",
    "initial.mu_phase": "1.0471975511965976",
    "initial.nu_abs2": "0.8",
    "initial.nu_phase": "0",
    "grid.t_max": "30",
    "grid.dt_out": "0.05",
    "grid.dt_int": "0.001",
    "figures.ids": "1,2,3,4,5,6",
    "figures.plot": "false",
    "spectrum.at": "0",
    "steady.at": "",
    "tol.oracle": "1e-7",
    "tol.trace": "1e-9",
    "tol.herm": "1e-9",
    "tol.min_eig": "1e-8",
    "tol.identity": "1e-9",
}

_CONTROL_PREFIXES = ("schedule.gamma", "schedule.r", "schedule.theta")
_KIND_PARAMS = {
    "const": ("value",),
    "exp": ("c1", "c2"),
    "ramp": ("a", "b"),
    "sin": ("a", "b", "omega", "phase"),
}
_BASE_KEYS = frozenset(
    k for k in DEFAULTS
    if not any(k.startswith(p + ".") for p in _CONTROL_PREFIXES)
)

# Figure id -> (squeeze amplitude c1, complex initial phase on mu).
_FIGURES = {
    1: (0.1, True), 2: (0.1, False),
    3: (0.3, True), 4: (0.3, False),
    5: (0.6, True), 6: (0.6, False),
}


def figure_schedule(fig_id: int) -> BathSchedule:
    if fig_id not in _FIGURES:
        raise InvalidInputError("figure id must be in 1..6, got %r" % (fig_id,))
    c1, _ = _FIGURES[fig_id]
    return BathSchedule(gamma=Constant(1.0), r=ExpDecay(c1, 0.1), theta=Constant(0.0))


def figure_initial(fig_id: int) -> InitialDecomposition:
    if fig_id not in _FIGURES:
        raise InvalidInputError("figure id must be in 1..6, got %r" % (fig_id,))
    _, complex_phase = _FIGURES[fig_id]
    phase = math.pi / 3.0 if complex_phase else 0.0
    mu = math.sqrt(0.2) * complex(math.cos(phase), math.sin(phase))
    return InitialDecomposition.from_amplitudes(mu, math.sqrt(0.8))


@dataclass
class RunConfig:
    schedule: BathSchedule
    init: InitialDecomposition
    t_max: float
    dt_out: float
    dt_int: float
    out_dir: str
    figure_ids: tuple[int, ...]
    plot: bool
    spectrum_at: float
    steady_at: float | None
    tol: dict[str, float]


# ---------------------------------------------------------------------------
# config parsing


def _read_config_file(path: str) -> dict[str, str]:
    try:
        with open(path, encoding="utf-8") as fh:
            text = fh.read()
    except OSError as exc:
        raise InvalidInputError("cannot read config file %r: %s" % (path, exc)) from exc
    entries: dict[str, str] = {}
    for lineno, raw in enumerate(text.splitlines(), start=1):
        line = raw.split("#", 1)[0].strip()
        if not line:
            continue
        if "=" not in line:
            raise InvalidInputError(
                "%s:%d: expected key=value, got %r" % (path, lineno, raw.strip())
            )
        key, value = line.split("=", 1)
        entries[key.strip()] = value.strip()
    return entries


def _parse_overrides(tokens: list[str]) -> dict[str, str]:
    entries: dict[str, str] = {}
    for token in tokens:
        body = token[2:] if token.startswith("--") else token
        if "=" not in body:
            raise InvalidInputError("override %r is not of the form key=value" % token)
        key, value = body.split("=", 1)
        entries[key.strip()] = value.strip()
    return entries


def _known_key(key: str, merged: dict[str, str]) -> bool:
    if key in _BASE_KEYS:
        return True
    for prefix in _CONTROL_PREFIXES:
        if key == prefix + ".kind":
            return True
        if key.startswith(prefix + "."):
            kind = merged.get(prefix + ".kind", "")
            return key[len(prefix) + 1:] in _KIND_PARAMS.get(kind, ())
    return False


def _as_float(merged: dict[str, str], key: str) -> float:
    raw = merged[key]
    try:
        value = float(raw)
    except ValueError as exc:
        raise InvalidInputError("config value %s=%r is not a number" % (key, raw)) from exc
    if not math.isfinite(value):
        raise InvalidInputError("config value %s=%r is not finite" % (key, raw))
    return value


def _as_bool(merged: dict[str, str], key: str) -> bool:
    raw = merged[key].lower()
    if raw in ("true", "1", "yes"):
        return True
    if raw in ("false", "0", "no"):
        return False
    raise InvalidInputError("config value %s=%r is not a boolean" % (key, merged[key]))


def _control_from(merged: dict[str, str], user: dict[str, str], prefix: str):
    kind = merged[prefix + ".kind"]
    if kind not in _KIND_PARAMS:
        raise InvalidInputError(
            "%s.kind=%r is not one of const, exp, ramp, sin" % (prefix, kind)
        )
    values = {}
    for param in _KIND_PARAMS[kind]:
        key = prefix + "." + param
        if key in user:
            values[param] = _as_float(user, key)
        elif key in DEFAULTS and DEFAULTS[prefix + ".kind"] == kind:
            values[param] = _as_float(DEFAULTS, key)
        else:
            raise InvalidInputError("%s is required for kind=%s" % (key, kind))
    if kind == "const":
        return Constant(values["value"])
    if kind == "exp":
        return ExpDecay(values["c1"], values["c2"])
    if kind == "ramp":
        return Ramp(values["a"], values["b"])
    return Sinusoid(values["a"], values["b"], values["omega"], values["phase"])


def _parse_figure_ids(raw: str) -> tuple[int, ...]:
    ids = []
    for piece in raw.split(","):
        piece = piece.strip()
        if not piece:
            continue
        try:
            fid = int(piece)
        except ValueError as exc:
            raise InvalidInputError("figures.ids entry %r is not an integer" % piece) from exc
        if fid not in _FIGURES:
            raise InvalidInputError("figures.ids entry %d is outside 1..6" % fid)
        if fid in ids:
            raise InvalidInputError("figures.ids lists %d twice" % fid)
        ids.append(fid)
    if not ids:
        raise InvalidInputError("figures.ids is empty")
    return tuple(ids)


def resolve_config(user: dict[str, str], out_dir: str) -> RunConfig:
    merged = dict(DEFAULTS)
    merged.update(user)
    for key in user:
        if not _known_key(key, merged):
            raise InvalidInputError("unknown config key %r" % key)

    mode = merged["schedule.mode"]
    if mode not in ("ideal", "thermal"):
        raise InvalidInputError("schedule.mode=%r is not ideal or thermal" % mode)
    gamma = _control_from(merged, user, "schedule.gamma")
    if mode == "thermal":
        nbar = _as_float(merged, "schedule.nbar")
        if nbar < 0:
            raise InvalidInputError("schedule.nbar must be >= 0, got %g" % nbar)
        schedule = BathSchedule(gamma=gamma, r=Constant(0.0), theta=Constant(0.0), nbar=nbar)
    else:
        schedule = BathSchedule(
            gamma=gamma,
            r=_control_from(merged, user, "schedule.r"),
            theta=_control_from(merged, user, "schedule.theta"),
        )

    mu = amplitudes_from_polar(
        _as_float(merged, "initial.mu_abs2"), _as_float(merged, "initial.mu_phase")
    )
    nu = amplitudes_from_polar(
        _as_float(merged, "initial.nu_abs2"), _as_float(merged, "initial.nu_phase")
    )
    init = InitialDecomposition.from_amplitudes(mu, nu)

    steady_raw = merged["steady.at"]
    steady_at = None if steady_raw == "" else float(_as_float(merged, "steady.at"))
    tol = {
        name: _as_float(merged, "tol." + name)
        for name in ("oracle", "trace", "herm", "min_eig", "identity")
    }
    return RunConfig(
        schedule=schedule,
        init=init,
        t_max=_as_float(merged, "grid.t_max"),
        dt_out=_as_float(merged, "grid.dt_out"),
        dt_int=_as_float(merged, "grid.dt_int"),
        out_dir=out_dir,
        figure_ids=_parse_figure_ids(merged["figures.ids"]),
        plot=_as_bool(merged, "figures.plot"),
        spectrum_at=_as_float(merged, "spectrum.at"),
        steady_at=steady_at,
        tol=tol,
    )


# ---------------------------------------------------------------------------
# trajectory frame


@dataclass
class TrajectoryFrame:
    times: np.ndarray
    gamma: np.ndarray
    r: np.ndarray
    theta: np.ndarray
    n: np.ndarray
    m: np.ndarray
    expectations: np.ndarray
    ref_expectations: np.ndarray
    dist: np.ndarray
    trace_err: np.ndarray
    min_eig: np.ndarray


def compute_frame(
    schedule: BathSchedule,
    init: InitialDecomposition,
    t_max: float,
    dt_out: float,
    dt_int: float,
    tol: dict[str, float],
) -> TrajectoryFrame:
    """Run both pipelines on a uniform grid and enforce the row tolerances."""
    grid = uniform_grid(t_max, dt_out)
    gauges = evolve_gauge(schedule, grid, dt_int)
    states = [assemble_density(init, g) for g in gauges]
    rho0 = unvectorize(np.array(init.lambdas, dtype=complex))
    ref = integrate_reference(schedule, rho0, grid, dt_int)

    gamma_col, n_col, m_col = schedule.params_on(grid)
    if schedule.thermal:
        # squeeze controls are inert under the thermal override
        r_col = np.zeros_like(grid)
        theta_col = np.zeros_like(grid)
    else:
        r_col = np.broadcast_to(np.asarray(schedule.r(grid), dtype=float), grid.shape).copy()
        theta_col = np.broadcast_to(np.asarray(schedule.theta(grid), dtype=float), grid.shape).copy()

    frame = TrajectoryFrame(
        times=grid,
        gamma=gamma_col,
        r=r_col,
        theta=theta_col,
        n=n_col,
        m=m_col,
        expectations=np.array([pauli_expectations(s) for s in states]),
        ref_expectations=ref.expectations,
        dist=np.array([trace_distance(a, b) for a, b in zip(states, ref.states)]),
        trace_err=np.array([trace_error(s) for s in states]),
        min_eig=np.array([min_eigenvalue(s) for s in states]),
    )
    _enforce_row_tolerances(frame, tol)
    return frame


def _enforce_row_tolerances(frame: TrajectoryFrame, tol: dict[str, float]) -> None:
    bad = np.abs(frame.trace_err) > tol["trace"]
    if bad.any():
        i = int(np.argmax(bad))
        raise NumericalFailureError(
            "trace error %.3e exceeds tol.trace=%g at t = %g"
            % (frame.trace_err[i], tol["trace"], frame.times[i])
        )
    bad = frame.min_eig < -tol["min_eig"]
    if bad.any():
        i = int(np.argmax(bad))
        raise NumericalFailureError(
            "smallest eigenvalue %.3e violates tol.min_eig=%g at t = %g"
            % (frame.min_eig[i], tol["min_eig"], frame.times[i])
        )
    i = int(np.argmax(frame.dist))
    if frame.dist[i] > tol["oracle"]:
        raise NumericalFailureError(
            "trace distance to reference %.3e exceeds tol.oracle=%g at t = %g"
            % (frame.dist[i], tol["oracle"], frame.times[i])
        )


def _fmt(value: float) -> str:
    return format(float(value), ".15g")


def write_trajectory_csv(path: str, frame: TrajectoryFrame) -> None:
    with open(path, "w", encoding="utf-8", newline="") as fh:
        fh.write(TRAJECTORY_HEADER + "\n")
        for i in range(frame.times.size):
            row = (
                frame.times[i], frame.gamma[i], frame.r[i], frame.theta[i],
                frame.n[i], frame.m[i].real, frame.m[i].imag,
                frame.expectations[i, 0], frame.expectations[i, 1], frame.expectations[i, 2],
                frame.ref_expectations[i, 0], frame.ref_expectations[i, 1],
                frame.ref_expectations[i, 2],
                frame.dist[i], frame.trace_err[i], frame.min_eig[i],
            )
            fh.write(",".join(_fmt(v) for v in row) + "\n")


# ---------------------------------------------------------------------------
# chart output (pure formatting, no numeric logic)

_PALETTE = ("#1f77b4", "#d62728", "#2ca02c")


def write_line_chart(path: str, times: np.ndarray, series, title: str) -> None:
    width, height = 720.0, 440.0
    left, right, top, bottom = 64.0, 18.0, 34.0, 46.0
    x0, x1 = float(times[0]), float(times[-1])
    if x1 <= x0:
        x1 = x0 + 1.0
    stacked = np.concatenate([np.asarray(v, dtype=float) for _, v in series])
    y0, y1 = float(np.min(stacked)), float(np.max(stacked))
    if y1 - y0 < 1e-12:
        y0, y1 = y0 - 0.5, y1 + 0.5
    else:
        pad = 0.05 * (y1 - y0)
        y0, y1 = y0 - pad, y1 + pad

    def px(t):
        return left + (t - x0) / (x1 - x0) * (width - left - right)

    def py(v):
        return top + (y1 - v) / (y1 - y0) * (height - top - bottom)

    parts = [
        '<svg xmlns="http://www.w3.org/2000/svg" width="%d" height="%d" '
        'viewBox="0 0 %d %d">' % (width, height, width, height),
        '<rect width="%d" height="%d" fill="white"/>' % (width, height),
        '<text x="%.2f" y="20" font-family="sans-serif" font-size="14">%s</text>'
        % (left, title),
    ]
    for tick in np.linspace(x0, x1, 7):
        x = px(tick)
        parts.append(
            '<line x1="%.2f" y1="%.2f" x2="%.2f" y2="%.2f" stroke="#ddd"/>'
            % (x, top, x, height - bottom)
        )
        parts.append(
            '<text x="%.2f" y="%.2f" font-family="sans-serif" font-size="11" '
            'text-anchor="middle">%g</text>' % (x, height - bottom + 16, round(tick, 6))
        )
    for tick in np.linspace(y0, y1, 6):
        y = py(tick)
        parts.append(
            '<line x1="%.2f" y1="%.2f" x2="%.2f" y2="%.2f" stroke="#ddd"/>'
            % (left, y, width - right, y)
        )
        parts.append(
            '<text x="%.2f" y="%.2f" font-family="sans-serif" font-size="11" '
            'text-anchor="end">%.3g</text>' % (left - 6, y + 4, tick)
        )
    parts.append(
        '<rect x="%.2f" y="%.2f" width="%.2f" height="%.2f" fill="none" stroke="#333"/>'
        % (left, top, width - left - right, height - top - bottom)
    )
    for k, (label, values) in enumerate(series):
        color = _PALETTE[k % len(_PALETTE)]
        points = " ".join(
            "%.2f,%.2f" % (px(t), py(v)) for t, v in zip(times, values)
        )
        parts.append(
            '<polyline fill="none" stroke="%s" stroke-width="1.5" points="%s"/>'
            % (color, points)
        )
        lx = width - right - 90.0
        ly = top + 16.0 + 16.0 * k
        parts.append(
            '<line x1="%.2f" y1="%.2f" x2="%.2f" y2="%.2f" stroke="%s" stroke-width="2"/>'
            % (lx, ly - 4, lx + 22, ly - 4, color)
        )
        parts.append(
            '<text x="%.2f" y="%.2f" font-family="sans-serif" font-size="12">%s</text>'
            % (lx + 28, ly, label)
        )
    parts.append("</svg>")
    with open(path, "w", encoding="utf-8", newline="") as fh:
        fh.write("\n".join(parts) + "\n")


# ---------------------------------------------------------------------------
# subcommands


def run_trajectory(rc: RunConfig) -> int:
    frame = compute_frame(rc.schedule, rc.init, rc.t_max, rc.dt_out, rc.dt_int, rc.tol)
    path = os.path.join(rc.out_dir, "trajectory.csv")
    write_trajectory_csv(path, frame)
    print(
        "wrote %s (%d rows, max oracle distance %.3e)"
        % (path, frame.times.size, float(np.max(frame.dist)))
    )
    return 0


def run_figures(rc: RunConfig) -> int:
    for fid in rc.figure_ids:
        frame = compute_frame(
            figure_schedule(fid), figure_initial(fid),
            rc.t_max, rc.dt_out, rc.dt_int, rc.tol,
        )
        path = os.path.join(rc.out_dir, "fig%d.csv" % fid)
        write_trajectory_csv(path, frame)
        message = "wrote %s (max oracle distance %.3e)" % (path, float(np.max(frame.dist)))
        if rc.plot:
            chart = os.path.join(rc.out_dir, "fig%d.svg" % fid)
            c1, complex_phase = _FIGURES[fid]
            title = "fig %d: r = %g exp(-0.1 t), %s initial coherence" % (
                fid, c1, "complex" if complex_phase else "real",
            )
            write_line_chart(
                chart,
                frame.times,
                [
                    ("sx", frame.expectations[:, 0]),
                    ("sy", frame.expectations[:, 1]),
                    ("sz", frame.expectations[:, 2]),
                ],
                title,
            )
            message += ", chart %s" % chart
        print(message)
    return 0


def run_spectrum(rc: RunConfig) -> int:
    point = rc.schedule.at(rc.spectrum_at)
    eigs = spectrum(build_rate_operator(point))
    g, n, m = point.gamma, point.n_param, point.m_param
    formulas = sorted(
        (0.0, -g * (2 * n + 1), -g * (n + 0.5 - abs(m)), -g * (n + 0.5 + abs(m))),
        reverse=True,
    )
    path = os.path.join(rc.out_dir, "spectrum.csv")
    with open(path, "w", encoding="utf-8", newline="") as fh:
        fh.write("k,eig_re,eig_im,rate_formula,abs_diff\n")
        for k, (eig, want) in enumerate(zip(eigs, formulas)):
            fh.write(
                ",".join(_fmt(v) for v in (k, eig.real, eig.imag, want, abs(eig - want)))
                + "\n"
            )
    print("rate operator at t = %g (gamma=%g, N=%g, |M|=%g):" % (rc.spectrum_at, g, n, abs(m)))
    for eig, want in zip(eigs, formulas):
        print("  %s   (formula %s)" % (_fmt(eig.real), _fmt(want)))
    print("wrote %s" % path)
    return 0


def run_steady(rc: RunConfig) -> int:
    if rc.steady_at is None:
        limits = asymptotic_gauge_limits(rc.schedule)
        rho = limits.steady
        label = "asymptotic limit (N=%g)" % limits.n_param
    else:
        rho = steady_state(build_rate_operator(rc.schedule.at(rc.steady_at)))
        label = "nullspace at t = %g" % rc.steady_at
    sz = float((rho[0, 0] - rho[1, 1]).real)
    path = os.path.join(rc.out_dir, "steady.csv")
    with open(path, "w", encoding="utf-8", newline="") as fh:
        fh.write("rho_ee,rho_gg,rho_eg_re,rho_eg_im,sz\n")
        fh.write(
            ",".join(
                _fmt(v)
                for v in (rho[0, 0].real, rho[1, 1].real, rho[0, 1].real, rho[0, 1].imag, sz)
            )
            + "\n"
        )
    print("steady state, %s:" % label)
    print("  rho_ee = %s, rho_gg = %s, sz = %s" % (_fmt(rho[0, 0].real), _fmt(rho[1, 1].real), _fmt(sz)))
    print("wrote %s" % path)
    return 0


def run_verify(rc: RunConfig) -> int:
    results = verify_mod.run_checks(
        rc.schedule, rc.init, rc.t_max, rc.dt_out, rc.dt_int, rc.tol
    )
    header = "verification report (t_max=%g, dt_out=%g, dt_int=%g, %s)" % (
        rc.t_max, rc.dt_out, rc.dt_int,
        "thermal override" if rc.schedule.thermal else "ideal squeezed reservoir",
    )
    text = verify_mod.format_report(results, header)
    path = os.path.join(rc.out_dir, "verify_report.txt")
    with open(path, "w", encoding="utf-8", newline="") as fh:
        fh.write(text)
    print(text, end="")
    failing = [r for r in results if r.status == "FAIL"]
    if failing:
        first = failing[0]
        print("verify: FAILED at check %r" % first.name, file=sys.stderr)
        return 2
    return 0


_COMMANDS = {
    "trajectory": run_trajectory,
    "figures": run_figures,
    "spectrum": run_spectrum,
    "steady": run_steady,
    "verify": run_verify,
}


class _Parser(argparse.ArgumentParser):
    # argparse exits with status 2 on bad flags; route through InvalidInputError
    # so that all input problems share exit code 1.
    def error(self, message):
        raise InvalidInputError(message)


def main(argv=None) -> int:
    parser = _Parser(
        prog="squeezebath",
        description="two-level atom in a time-dependent squeezed reservoir",
        allow_abbrev=False,
    )
    parser.add_argument("command", choices=sorted(_COMMANDS))
    parser.add_argument("--config", default=None, help="path to a key=value config file")
    parser.add_argument("--out", default=".", help="output directory (created if missing)")
    try:
        args, extra = parser.parse_known_args(argv)
        user: dict[str, str] = {}
        if args.config is not None:
            user.update(_read_config_file(args.config))
        user.update(_parse_overrides(extra))
        rc = resolve_config(user, args.out)
        os.makedirs(rc.out_dir, exist_ok=True)
        return _COMMANDS[args.command](rc)
    except InvalidInputError as exc:
        print("error: %s" % exc, file=sys.stderr)
        return 1
    except NumericalFailureError as exc:
        print("numerical failure: %s" % exc, file=sys.stderr)
        return 2


def entrypoint() -> None:
    sys.exit(main(sys.argv[1:]))
