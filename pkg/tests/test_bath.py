import math

import numpy as np
import pytest

from squeezebath.bath import (
    BathPoint,
    BathSchedule,
    Constant,
    ExpDecay,
    Ramp,
    Sinusoid,
    bath_params,
    schedule_eval,
)
from squeezebath.errors import HorizonError, InvalidInputError


def test_vacuum_params():
    n, m = bath_params(0.0, 0.0)
    assert n == 0.0
    assert m == 0.0


def test_params_at_r_point_one():
    n, m = bath_params(0.1, 0.0)
    assert n == pytest.approx(0.010033377809537924, rel=1e-15)
    assert m.real == pytest.approx(0.10066800127054698, rel=1e-15)
    assert m.imag == 0.0


def test_params_at_r_point_six():
    n, m = bath_params(0.6, 0.0)
    assert n == pytest.approx(0.4053277836621873, rel=1e-15)
    assert m.real == pytest.approx(0.7547306777060862, rel=1e-15)


def test_quarter_turn_phase_rotates_m():
    n, m = bath_params(0.6, math.pi / 2)
    assert abs(m.real) < 1e-15
    assert m.imag == pytest.approx(-0.7547306777060862, rel=1e-14)
    assert n == pytest.approx(0.4053277836621873, rel=1e-15)


def test_ideal_relation_holds_everywhere():
    rng = np.random.default_rng(5)
    for _ in range(100):
        r = float(rng.uniform(0.0, 3.0))
        theta = float(rng.uniform(-10.0, 10.0))
        n, m = bath_params(r, theta)
        assert abs(abs(m) ** 2 - n * (n + 1.0)) <= 1e-12 * max(1.0, n * (n + 1.0))


def test_full_turn_phase_is_exact():
    assert bath_params(0.3, 2.0 * math.pi) == bath_params(0.3, 0.0)
    assert bath_params(0.3, -2.0 * math.pi) == bath_params(0.3, 0.0)


def test_phase_wrap_property():
    rng = np.random.default_rng(8)
    for _ in range(50):
        r = float(rng.uniform(0.1, 1.5))
        theta = float(rng.uniform(-3.0, 3.0))
        _, m0 = bath_params(r, theta)
        _, m1 = bath_params(r, theta + 2.0 * math.pi)
        assert abs(m1 - m0) <= 5e-15 * abs(m0)


def test_negative_amplitude_rejected():
    with pytest.raises(InvalidInputError):
        bath_params(-0.1, 0.0)


def test_nonfinite_inputs_rejected():
    with pytest.raises(InvalidInputError):
        bath_params(math.inf, 0.0)
    with pytest.raises(InvalidInputError):
        bath_params(0.1, math.nan)


def test_bath_point_validation():
    BathPoint(1.0, 0.5, 0.0)  # thermal-style point, below the ideal bound
    with pytest.raises(InvalidInputError):
        BathPoint(1.0, 1.0, 2.0)  # |M|^2 > N(N+1)
    with pytest.raises(InvalidInputError):
        BathPoint(-1.0, 0.0, 0.0)
    with pytest.raises(InvalidInputError):
        BathPoint(1.0, -0.3, 0.0)


def test_controls_evaluate():
    assert Constant(0.7)(3.0) == 0.7
    decay = ExpDecay(0.1, 0.1)
    assert decay(0.0) == 0.1
    assert decay(10.0) == pytest.approx(0.1 * math.exp(-1.0), rel=1e-15)
    ramp = Ramp(1.0, -0.5)
    assert ramp(0.0) == 1.0
    assert ramp(4.0) == 0.0
    assert ramp(10.0) == 0.0
    wave = Sinusoid(0.5, 0.2, 2.0, 0.3)
    assert wave(1.3) == pytest.approx(0.5 + 0.2 * math.sin(2.0 * 1.3 + 0.3), rel=1e-15)


def test_controls_accept_arrays():
    ts = np.linspace(0.0, 5.0, 11)
    out = ExpDecay(0.3, 0.1)(ts)
    assert out.shape == ts.shape
    assert np.allclose(out, 0.3 * np.exp(-0.1 * ts), rtol=1e-15, atol=0)


def test_schedule_eval_matches_vectorized_params():
    sched = BathSchedule(gamma=Constant(1.0), r=ExpDecay(0.1, 0.1))
    ts = np.linspace(0.0, 10.0, 7)
    gs, ns, ms = sched.params_on(ts)
    for i, t in enumerate(ts):
        point = sched.at(float(t))
        assert point.gamma == gs[i]
        assert point.n_param == ns[i]
        assert point.m_param == ms[i]


def test_schedule_tracks_decaying_amplitude():
    sched = BathSchedule(gamma=Constant(1.0), r=ExpDecay(0.1, 0.1))
    point = sched.at(0.0)
    n0, m0 = bath_params(0.1, 0.0)
    assert point.n_param == n0
    assert point.m_param == m0
    late = sched.at(200.0)
    assert late.n_param < 1e-18


def test_thermal_override():
    sched = BathSchedule(gamma=Constant(2.0), r=ExpDecay(0.5, 0.1), nbar=0.7)
    assert sched.thermal
    point = sched.at(3.0)
    assert point.gamma == 2.0
    assert point.n_param == 0.7
    assert point.m_param == 0.0


def test_horizon_guard():
    sched = BathSchedule(gamma=Constant(1.0), horizon=10.0)
    sched.at(10.0)  # boundary itself is allowed
    with pytest.raises(HorizonError):
        sched.at(10.1)
    with pytest.raises(HorizonError):
        sched.at(-0.5)


def test_negative_controls_rejected_at_evaluation():
    sched = BathSchedule(gamma=Constant(-1.0))
    with pytest.raises(InvalidInputError):
        sched.at(0.0)
    sched = BathSchedule(gamma=Constant(1.0), r=Constant(-0.2))
    with pytest.raises(InvalidInputError):
        sched.at(1.0)


def test_schedule_eval_helper_and_determinism():
    sched = BathSchedule(gamma=ExpDecay(2.0, 0.3), r=Sinusoid(0.4, 0.2, 1.0, 0.0))
    a = schedule_eval(sched, 1.7)
    b = schedule_eval(sched, 1.7)
    assert a == b
    assert a == sched.at(1.7)
