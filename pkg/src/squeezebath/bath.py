"""Time-dependent reservoir parameters for a two-level atom.

A reservoir is described by three control functions of time: a coupling rate
gamma(t), a squeeze amplitude r(t) and a squeeze phase theta(t).  At each
instant they determine the effective photon number N = sinh(r)^2 and the
squeeze correlation M = sinh(r) cosh(r) exp(-i theta), which satisfy
|M|^2 = N (N + 1).

A schedule can instead override the squeezing with a plain thermal occupation
nbar, in which case N = nbar and M = 0 at all times.

All evaluation is pure floating-point arithmetic with no hidden state, so
repeated calls with the same arguments give bit-identical results.
"""

from __future__ import annotations

import math
from dataclasses import dataclass, field
from typing import Union

import numpy as np

from .errors import HorizonError, InvalidInputError

__all__ = [
    "Constant",
    "ExpDecay",
    "Ramp",
    "Sinusoid",
    "ControlFunction",
    "BathPoint",
    "BathSchedule",
    "bath_params",
    "schedule_eval",
]

_TAU = 2.0 * np.pi


def _wrap_phase(theta):
    """Reduce a phase to (-pi, pi] so that theta and theta + 2 pi coincide.

    Exact when the caller's phase is an exact multiple of 2 pi away; otherwise
    the residual is set by the rounding of the caller's own addition (about
    one ulp of 2 pi).
    """
    return theta - np.round(theta / _TAU) * _TAU


def _require_finite(name: str, *values: float) -> None:
    for v in values:
        if not math.isfinite(v):
            raise InvalidInputError("%s must be finite, got %r" % (name, v))


@dataclass(frozen=True)
class Constant:
    """Control function with a fixed value."""

    value: float

    def __post_init__(self):
        _require_finite("Constant.value", self.value)

    def __call__(self, t):
        return self.value + np.zeros_like(np.asarray(t, dtype=float))

    @property
    def limit(self) -> float:
        return self.value


@dataclass(frozen=True)
class ExpDecay:
    """Control function amplitude * exp(-rate * t)."""

    amplitude: float
    rate: float

    def __post_init__(self):
        _require_finite("ExpDecay parameters", self.amplitude, self.rate)

    def __call__(self, t):
        return self.amplitude * np.exp(-self.rate * np.asarray(t, dtype=float))

    @property
    def limit(self) -> float | None:
        if self.amplitude == 0.0 or self.rate > 0.0:
            return 0.0
        if self.rate == 0.0:
            return self.amplitude
        return None


@dataclass(frozen=True)
class Ramp:
    """Control function max(offset + slope * t, 0)."""

    offset: float
    slope: float

    def __post_init__(self):
        _require_finite("Ramp parameters", self.offset, self.slope)

    def __call__(self, t):
        return np.maximum(self.offset + self.slope * np.asarray(t, dtype=float), 0.0)

    @property
    def limit(self) -> float | None:
        if self.slope < 0.0:
            return 0.0
        if self.slope == 0.0:
            return max(self.offset, 0.0)
        return None


@dataclass(frozen=True)
class Sinusoid:
    """Control function offset + amplitude * sin(omega * t + phase)."""

    offset: float
    amplitude: float
    omega: float
    phase: float = 0.0

    def __post_init__(self):
        _require_finite(
            "Sinusoid parameters", self.offset, self.amplitude, self.omega, self.phase
        )

    def __call__(self, t):
        t = np.asarray(t, dtype=float)
        return self.offset + self.amplitude * np.sin(self.omega * t + self.phase)

    @property
    def limit(self) -> float | None:
        if self.amplitude == 0.0:
            return self.offset
        if self.omega == 0.0:
            return self.offset + self.amplitude * math.sin(self.phase)
        return None


ControlFunction = Union[Constant, ExpDecay, Ramp, Sinusoid]


@dataclass(frozen=True)
class BathPoint:
    """Reservoir parameters frozen at one instant.

    n_param is the effective photon number N >= 0 and m_param the squeeze
    correlation M, constrained by |M|^2 <= N (N + 1) (equality for pure
    squeezing, M = 0 for a thermal reservoir).
    """

    gamma: float
    n_param: float
    m_param: complex

    def __post_init__(self):
        _validate_bath_point(self.gamma, self.n_param, self.m_param)


def _validate_bath_point(gamma: float, n: float, m: complex) -> None:
    if not (math.isfinite(gamma) and gamma >= 0.0):
        raise InvalidInputError("coupling gamma must be finite and >= 0, got %r" % (gamma,))
    if not (math.isfinite(n) and n >= 0.0):
        raise InvalidInputError("photon number N must be finite and >= 0, got %r" % (n,))
    if not (math.isfinite(m.real) and math.isfinite(m.imag)):
        raise InvalidInputError("squeeze correlation M must be finite, got %r" % (m,))
    bound = n * (n + 1.0)
    if abs(m) ** 2 > bound * (1.0 + 1e-9) + 1e-12:
        raise InvalidInputError(
            "|M|^2 = %.6g exceeds N(N+1) = %.6g; not a physical reservoir point"
            % (abs(m) ** 2, bound)
        )


def bath_params(r: float, theta: float) -> tuple[float, complex]:
    """Effective photon number and squeeze correlation of a squeezed reservoir.

    Parameters
    ----------
    r : float
        Squeeze amplitude, >= 0.
    theta : float
        Squeeze phase in radians.  Wrapped to (-pi, pi] before use, so shifts
        by 2 pi do not change the result.

    Returns
    -------
    n : float
        N = sinh(r)^2.
    m : complex
        M = sinh(r) cosh(r) exp(-i theta), which satisfies |M|^2 = N (N + 1).
    """
    _require_finite("squeeze amplitude r", r)
    _require_finite("squeeze phase theta", theta)
    if r < 0.0:
        raise InvalidInputError("squeeze amplitude r must be >= 0, got %r" % (r,))
    sh = math.sinh(r)
    n = sh * sh
    m = sh * math.cosh(r) * np.exp(-1j * _wrap_phase(theta))
    return n, complex(m)


@dataclass(frozen=True)
class BathSchedule:
    """Reservoir controls over a time window [0, horizon].

    Parameters
    ----------
    gamma : ControlFunction
        Coupling rate, must evaluate >= 0 on the window.
    r, theta : ControlFunction
        Squeeze amplitude (>= 0 on the window) and phase.  Ignored when nbar
        is set.
    nbar : float or None
        If not None, override the squeezing: N = nbar and M = 0 at all times.
    horizon : float
        Upper end of the validity window; evaluation beyond it raises
        HorizonError.  Defaults to infinity.
    """

    gamma: ControlFunction
    r: ControlFunction = field(default_factory=lambda: Constant(0.0))
    theta: ControlFunction = field(default_factory=lambda: Constant(0.0))
    nbar: float | None = None
    horizon: float = math.inf

    def __post_init__(self):
        if self.nbar is not None and not (math.isfinite(self.nbar) and self.nbar >= 0.0):
            raise InvalidInputError("nbar must be finite and >= 0, got %r" % (self.nbar,))
        if math.isnan(self.horizon) or self.horizon < 0.0:
            raise InvalidInputError("horizon must be >= 0, got %r" % (self.horizon,))

    @property
    def thermal(self) -> bool:
        return self.nbar is not None

    def _check_times(self, t: np.ndarray) -> None:
        slack = 1e-9 * max(1.0, self.horizon if math.isfinite(self.horizon) else 1.0)
        tmin = float(np.min(t))
        tmax = float(np.max(t))
        if tmin < -slack or tmax > self.horizon + slack:
            bad = tmin if tmin < -slack else tmax
            raise HorizonError(
                "time %r outside schedule window [0, %r]" % (bad, self.horizon)
            )

    def at(self, t: float) -> BathPoint:
        """Evaluate the schedule at one time; see schedule_eval."""
        return schedule_eval(self, t)

    def params_on(self, times: np.ndarray) -> tuple[np.ndarray, np.ndarray, np.ndarray]:
        """Vectorized (gamma, N, M) arrays over an array of times.

        Performs the same range and sign validation as schedule_eval, then
        evaluates all three controls in one pass.  M has complex dtype.
        """
        times = np.asarray(times, dtype=float)
        self._check_times(times)
        gamma = np.broadcast_to(np.asarray(self.gamma(times), dtype=float), times.shape)
        if np.any(gamma < 0.0):
            t_bad = float(times[np.argmax(gamma < 0.0)])
            raise InvalidInputError("gamma(t) < 0 at t = %r" % (t_bad,))
        if self.thermal:
            n = np.full(times.shape, float(self.nbar))
            m = np.zeros(times.shape, dtype=complex)
            return np.ascontiguousarray(gamma), n, m
        r = np.broadcast_to(np.asarray(self.r(times), dtype=float), times.shape)
        if np.any(r < 0.0):
            t_bad = float(times[np.argmax(r < 0.0)])
            raise InvalidInputError("r(t) < 0 at t = %r" % (t_bad,))
        theta = np.broadcast_to(np.asarray(self.theta(times), dtype=float), times.shape)
        sh = np.sinh(r)
        n = sh * sh
        m = sh * np.cosh(r) * np.exp(-1j * _wrap_phase(theta))
        return np.ascontiguousarray(gamma), n, m


def schedule_eval(schedule: BathSchedule, t: float) -> BathPoint:
    """Evaluate a schedule at time t and return the reservoir point.

    Parameters
    ----------
    schedule : BathSchedule
    t : float
        Must lie in [0, horizon] up to a relative slack of 1e-9.

    Returns
    -------
    BathPoint
        (gamma(t), N(t), M(t)).  In thermal-override mode N = nbar and M = 0.

    Raises
    ------
    HorizonError
        If t is outside the schedule window.
    InvalidInputError
        If gamma(t) or r(t) evaluates negative.
    """
    if not math.isfinite(t):
        raise InvalidInputError("time must be finite, got %r" % (t,))
    gamma, n, m = schedule.params_on(np.array([float(t)]))
    return BathPoint(float(gamma[0]), float(n[0]), complex(m[0]))
