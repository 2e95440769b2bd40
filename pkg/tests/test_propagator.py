import math

import numpy as np
import pytest
from hypothesis import given, settings
from hypothesis import strategies as st

from pulsefisher import (
    Angles,
    BlochVector,
    InvalidStep,
    InvalidTime,
    PropagatorMode,
    PulseConfig,
    appendix_intermediates,
    evolve,
    initial_bloch,
    integrate_bloch_ode,
    propagator,
    propagator_exact,
    propagator_paper_literal,
)
from pulsefisher.propagator import rk4_bloch


def ode_columns(cfg, t, step=1e-4):
    """Propagator assembled column by column from the RK4 oracle."""
    return rk4_bloch(cfg.omega0, cfg.delta_detuning, np.eye(3), t, step).T


def test_exact_identity_at_zero_time():
    np.testing.assert_array_equal(propagator_exact(PulseConfig(1.0, 0.0, 1.0), 0.0).a, np.eye(3))


def test_exact_quarter_turn_about_x():
    cfg = PulseConfig(1.0, 0.0, 2.0)
    a = propagator_exact(cfg, math.pi / 2).a
    expected = [[1, 0, 0], [0, 0, -1], [0, 1, 0]]
    np.testing.assert_allclose(ode_columns(cfg, math.pi / 2), expected, atol=1e-9)
    np.testing.assert_allclose(a, expected, atol=1e-15)


def test_exact_full_turn_is_identity():
    t = 2 * math.pi / math.sqrt(2)
    cfg = PulseConfig(1.0, 1.0, t)
    np.testing.assert_allclose(ode_columns(cfg, t), np.eye(3), atol=1e-9)
    np.testing.assert_allclose(propagator_exact(cfg, t).a, np.eye(3), atol=1e-9)


@pytest.mark.parametrize("omega0,delta,t", [(1.0, 0.2, 1.0), (0.3, 0.9, 2.5), (0.05, 1.0, 1.0), (2.0, 0.0, 0.7)])
def test_exact_matches_ode_columns(omega0, delta, t):
    cfg = PulseConfig(omega0, delta, t)
    np.testing.assert_allclose(propagator_exact(cfg, t).a, ode_columns(cfg, t), atol=1e-9)


@settings(max_examples=300)
@given(st.floats(0, 10), st.floats(0, 20))
def test_exact_is_rotation(delta_ratio, tau):
    p = propagator_exact(PulseConfig(1.0, delta_ratio, tau), tau)
    assert p.orthogonality_defect() < 1e-10
    assert abs(np.linalg.det(p.a) - 1.0) < 1e-10


@given(st.floats(0.05, 2), st.floats(0, 2), st.floats(0, 2), st.floats(0, 2))
def test_exact_composition(omega0, delta, t1, t2):
    cfg = PulseConfig(omega0, delta, t1 + t2)
    lhs = propagator_exact(cfg, t1 + t2).a
    rhs = propagator_exact(cfg, t2).a @ propagator_exact(cfg, t1).a
    np.testing.assert_allclose(lhs, rhs, atol=1e-10)


@given(st.floats(0.05, 2), st.floats(0, 2))
def test_exact_zero_detuning_leaves_sx_alone(omega0, t):
    a = propagator_exact(PulseConfig(omega0, 0.0, t), t).a
    assert abs(a[0, 0] - 1.0) < 1e-12 and abs(a[0, 1]) < 1e-12 and abs(a[0, 2]) < 1e-12


def test_ode_zero_time_returns_input():
    s0 = BlochVector(0.3, -0.4, 0.5)
    assert integrate_bloch_ode(PulseConfig(1.0, 0.3, 1.0), s0, 0.0, 1e-3) == s0


def test_ode_pi_pulse_inverts():
    s = integrate_bloch_ode(PulseConfig(1.0, 0.0, math.pi), BlochVector(0, 0, -1), math.pi, 1e-4)
    np.testing.assert_allclose(s.as_tuple(), (0, 0, 1), atol=1e-8)


def test_ode_matches_exact_with_detuning():
    cfg = PulseConfig(1.0, 0.2, 1.0)
    s0 = BlochVector(1, 0, 0)
    ode = integrate_bloch_ode(cfg, s0, 1.0, 1e-4)
    exact = evolve(propagator_exact(cfg, 1.0), s0)
    np.testing.assert_allclose(ode.as_tuple(), exact.as_tuple(), atol=1e-8)


def test_ode_partial_last_step_lands_on_t():
    cfg = PulseConfig(1.0, 0.5, 1.0)
    s0 = BlochVector(0, 0, -1)
    ode = integrate_bloch_ode(cfg, s0, 0.99995, 1e-4)  # 9999 steps plus a half step
    exact = evolve(propagator_exact(cfg, 0.99995), s0)
    np.testing.assert_allclose(ode.as_tuple(), exact.as_tuple(), atol=1e-10)


def test_ode_default_step():
    cfg = PulseConfig(0.5, 0.3, 1.0)
    ode = integrate_bloch_ode(cfg, BlochVector(0, 0, -1), 1.0)
    exact = evolve(propagator_exact(cfg, 1.0), BlochVector(0, 0, -1))
    np.testing.assert_allclose(ode.as_tuple(), exact.as_tuple(), atol=1e-10)


def test_ode_rejects_bad_step():
    with pytest.raises(InvalidStep):
        integrate_bloch_ode(PulseConfig(1.0, 0.0, 1.0), BlochVector(0, 0, -1), 1.0, 0.0)


@pytest.mark.parametrize("t", [-0.1, 1.5, math.inf])
def test_time_outside_pulse_rejected(t):
    cfg = PulseConfig(1.0, 0.2, 1.0)
    for build in (propagator_exact, propagator_paper_literal):
        with pytest.raises(InvalidTime):
            build(cfg, t)


def test_evolve_identity():
    s = BlochVector(0.1, 0.2, 0.3)
    assert evolve(propagator_exact(PulseConfig(1.0, 0.5, 1.0), 0.0), s) == s


def test_evolve_quarter_turn():
    # RK4 oracle: starting at the south pole, a pi/2 x-rotation lands on +y
    cfg = PulseConfig(1.0, 0.0, 2.0)
    oracle = integrate_bloch_ode(cfg, BlochVector(0, 0, -1), math.pi / 2, 1e-4)
    got = evolve(propagator_exact(cfg, math.pi / 2), BlochVector(0, 0, -1))
    np.testing.assert_allclose(oracle.as_tuple(), (0, 1, 0), atol=1e-9)
    np.testing.assert_allclose(got.as_tuple(), (0, 1, 0), atol=1e-12)


@given(st.floats(0.05, 2), st.floats(0, 2), st.floats(0, 3))
def test_rotation_axis_is_fixed(omega0, delta, t):
    cfg = PulseConfig(omega0, delta, t)
    d = cfg.delta_ratio
    axis = BlochVector(1 / math.sqrt(cfg.eta), 0.0, d / math.sqrt(cfg.eta))
    np.testing.assert_allclose(evolve(propagator_exact(cfg, t), axis).as_tuple(), axis.as_tuple(), atol=1e-10)


@given(st.floats(0.05, 2), st.floats(0, 2), st.floats(0, 3), st.floats(0, math.pi), st.floats(0, 2 * math.pi))
def test_exact_evolution_preserves_norm(omega0, delta, t, theta, phi):
    s = evolve(propagator_exact(PulseConfig(omega0, delta, t), t), initial_bloch(Angles(theta, phi)))
    assert abs(s.norm() - 1.0) < 1e-10


def test_paper_literal_at_zero_time():
    a = propagator_paper_literal(PulseConfig(0.7, 0.4, 1.0), 0.0).a
    assert a[1, 1] == 1.0 and a[2, 2] == pytest.approx(1.0, abs=1e-15) and a[2, 1] == 0.0


def test_paper_literal_a32_and_non_orthogonality():
    p = propagator_paper_literal(PulseConfig(1.0, 0.2, 1.0), 1.0)
    assert p.mode is PropagatorMode.PAPER_LITERAL
    assert p.a[2, 1] == pytest.approx(0.8354600062374664605509156318338486333075, abs=1e-12)
    assert p.orthogonality_defect() > 1e-3


def test_paper_literal_printed_entries():
    # independent scalar evaluation of the printed coefficients at delta=0.4, tau=0.7
    d, tau = 0.4, 0.7
    eta = 1 + d * d
    c = math.cos(tau * math.sqrt(eta))
    l1 = math.sin(tau * math.sqrt(eta)) / math.sqrt(eta)
    l2 = d * d + c
    l3 = 0.5 * eta * l1 * l1
    l4 = 1 + (eta + d * d) * c
    expected = [
        [1 / eta + d * d * c - d * l1, 0.5 * (1 + l2 / eta + d * l1), d / eta * l3 + l1],
        [l4 / (2 * eta) + l1, c - d * l1, d / eta * l3 - d * l1],
        [d / eta * l3, l1, l2 / eta],
    ]
    a = propagator_paper_literal(PulseConfig(1.0, 0.4, 0.7), 0.7).a
    np.testing.assert_allclose(a, expected, rtol=0, atol=1e-15)


@given(st.floats(0.05, 2), st.floats(0, 2), st.floats(0, 3))
def test_appendix_intermediate_identities(omega0, delta, t):
    cfg = PulseConfig(omega0, delta, t)
    iv = appendix_intermediates(cfg, t)
    d, eta, tau = cfg.delta_ratio, cfg.eta, cfg.tau(t)
    assert abs(iv.c - math.cos(tau * math.sqrt(eta))) < 1e-12
    assert abs(iv.lambda1 - math.sin(tau * math.sqrt(eta)) / math.sqrt(eta)) < 1e-12
    assert abs(iv.lambda2 - (d * d + iv.c)) < 1e-12
    assert abs(iv.lambda3 - 0.5 * eta * iv.lambda1 ** 2) < 1e-12
    assert abs(iv.lambda4 - (1 + (eta + d * d) * iv.c)) < 1e-12


def test_paper_literal_zero_detuning_recorded():
    # recorded, not asserted as physics: the printed a12 and a21 do not vanish at delta = 0
    a = propagator_paper_literal(PulseConfig(1.0, 0.0, 1.0), 1.0).a
    assert a[0, 0] == 1.0
    assert a[0, 1] != 0.0


def test_propagator_matrix_is_read_only():
    p = propagator(PulseConfig(1.0, 0.2, 1.0), 0.5, "exact")
    with pytest.raises(ValueError):
        p.a[0, 0] = 2.0
