import math

import numpy as np
import pytest
from pydantic import ValidationError

from tpeqw.entanglement import (
    OPTIMAL_SETTINGS,
    AnalyzerSetting,
    Arm,
    TwoPhotonState,
    accidental_degraded_state,
    check_density_operator,
    chsh_value,
    coincidence_probability,
    correlation,
    frequency_probability,
    ideal_state,
    joint_probabilities,
    marginal_probability,
    mc_chsh,
    same_frequency_probability,
)
from tpeqw.errors import DomainError, InsufficientStatisticsError
from tpeqw.events import simulate_events

OMEGA_I = 1.1473956e15
OMEGA_S = 1.2074690e15
TSIRELSON = 2 * math.sqrt(2)
IDEAL = ideal_state(OMEGA_I, OMEGA_S)
MIXED = TwoPhotonState(omega_i=OMEGA_I, omega_s=OMEGA_S, purity=0.0)


def r(angle: float) -> AnalyzerSetting:
    return AnalyzerSetting(arm=Arm.R, angle=angle)


def l(angle: float) -> AnalyzerSetting:
    return AnalyzerSetting(arm=Arm.L, angle=angle)


def test_ideal_state_is_pure():
    rho = IDEAL.density_matrix
    assert np.trace(rho).real == pytest.approx(1, abs=1e-12)
    assert IDEAL.trace_purity == pytest.approx(1, abs=1e-12)
    assert IDEAL.is_pure
    assert IDEAL.phase == 0


def test_ideal_state_amplitudes():
    amplitudes = IDEAL.amplitudes
    # |ω_i⟩_R|ω_s⟩_L and |ω_s⟩_R|ω_i⟩_L
    assert amplitudes[1] == pytest.approx(1 / math.sqrt(2))
    assert amplitudes[2] == pytest.approx(1 / math.sqrt(2))
    assert amplitudes[0] == amplitudes[3] == 0


def test_frequency_statistics():
    assert frequency_probability(IDEAL, Arm.R, OMEGA_I) == pytest.approx(0.5, abs=1e-12)
    assert frequency_probability(IDEAL, Arm.L, OMEGA_S) == pytest.approx(0.5, abs=1e-12)
    assert same_frequency_probability(IDEAL) == pytest.approx(0, abs=1e-12)
    with pytest.raises(DomainError):
        frequency_probability(IDEAL, Arm.R, 1e15)


def test_degenerate_frequencies():
    try:
        ideal_state(OMEGA_S, OMEGA_S)
    except Exception as e:
        assert isinstance(e, DomainError)
    else:
        raise AssertionError('degenerate pair was accepted')
    with pytest.raises(ValidationError):
        TwoPhotonState(omega_i=OMEGA_S, omega_s=OMEGA_S)


def test_purity_bounds():
    with pytest.raises(ValidationError):
        TwoPhotonState(omega_i=OMEGA_I, omega_s=OMEGA_S, purity=1.2)


def test_angles_are_reduced():
    assert l(-math.pi / 4).angle == pytest.approx(7 * math.pi / 4)
    assert r(5 * math.pi).angle == pytest.approx(math.pi)


def test_coincidence_at_equal_angles():
    for angle in (0.0, 0.3, 2.0):
        assert coincidence_probability(IDEAL, r(angle), l(angle)) == pytest.approx(0.5, abs=1e-12)


def test_mixed_state_is_uniform():
    for a, b in ((0.0, 0.0), (0.4, 1.7), (3.0, -2.2)):
        assert coincidence_probability(MIXED, r(a), l(b)) == pytest.approx(0.25, abs=1e-12)


def test_outcomes_are_complete():
    rng = np.random.default_rng(3)
    for _ in range(20):
        state = TwoPhotonState(omega_i=OMEGA_I, omega_s=OMEGA_S, purity=rng.random(), phase=rng.uniform(0, 6))
        probs = joint_probabilities(state, r(rng.uniform(0, 6)), l(rng.uniform(0, 6)))
        assert sum(probs.values()) == pytest.approx(1, abs=1e-12)
        assert min(probs.values()) >= -1e-12


def test_correlation_follows_relative_angle():
    for p in (1.0, 0.6):
        state = TwoPhotonState(omega_i=OMEGA_I, omega_s=OMEGA_S, purity=p)
        assert correlation(state, r(0.9), l(0.2)) == pytest.approx(p * math.cos(0.7), abs=1e-12)


def test_settings_on_wrong_arms():
    with pytest.raises(DomainError):
        coincidence_probability(IDEAL, r(0.0), r(0.0))
    with pytest.raises(DomainError):
        chsh_value(IDEAL, l(0.0), r(0.1), l(0.2), l(0.3))


def test_tsirelson_value():
    assert chsh_value(IDEAL, *OPTIMAL_SETTINGS) == pytest.approx(TSIRELSON, abs=1e-9)
    assert chsh_value(IDEAL) == pytest.approx(2.828427, abs=1e-6)


def test_werner_scaling():
    for p in (0.0, 0.25, 1 / math.sqrt(2), 0.9):
        state = TwoPhotonState(omega_i=OMEGA_I, omega_s=OMEGA_S, purity=p)
        assert chsh_value(state) == pytest.approx(p * TSIRELSON, abs=1e-9)
    crossing = TwoPhotonState(omega_i=OMEGA_I, omega_s=OMEGA_S, purity=1 / math.sqrt(2))
    assert chsh_value(crossing) == pytest.approx(2, abs=1e-9)


def test_no_value_at_zero_purity():
    rng = np.random.default_rng(11)
    for _ in range(10):
        a1, a2, b1, b2 = rng.uniform(0, 2 * math.pi, 4)
        assert chsh_value(MIXED, r(a1), r(a2), l(b1), l(b2)) == pytest.approx(0, abs=1e-12)


def test_tsirelson_bound_holds():
    rng = np.random.default_rng(5)
    for _ in range(200):
        state = TwoPhotonState(omega_i=OMEGA_I, omega_s=OMEGA_S, purity=rng.random(), phase=rng.uniform(0, 6.3))
        a1, a2, b1, b2 = rng.uniform(-10, 10, 4)
        assert chsh_value(state, r(a1), r(a2), l(b1), l(b2)) <= TSIRELSON + 1e-9


def test_no_signaling():
    rng = np.random.default_rng(9)
    for _ in range(50):
        state = TwoPhotonState(omega_i=OMEGA_I, omega_s=OMEGA_S, purity=rng.random(), phase=rng.uniform(0, 6.3))
        a, b1, b2 = rng.uniform(0, 6.3, 3)
        for outcome in (1, -1):
            left = marginal_probability(state, r(a), l(b1), outcome)
            assert left == pytest.approx(marginal_probability(state, r(a), l(b2), outcome), abs=1e-12)
            right = marginal_probability(state, l(b1), r(a), outcome)
            assert right == pytest.approx(marginal_probability(state, l(b1), r(b2), outcome), abs=1e-12)


def test_density_operators_are_physical():
    rng = np.random.default_rng(2)
    for _ in range(50):
        state = TwoPhotonState(omega_i=OMEGA_I, omega_s=OMEGA_S, purity=rng.random(), phase=rng.uniform(0, 6.3))
        check_density_operator(state.density_matrix)
    with pytest.raises(DomainError):
        check_density_operator(np.diag([1.0, 0.5, -0.5, 0.0]))


def test_accidental_degraded_state():
    assert accidental_degraded_state(OMEGA_I, OMEGA_S, 0.0) == IDEAL
    assert chsh_value(accidental_degraded_state(OMEGA_I, OMEGA_S, 0.1647)) == pytest.approx(2.3625, abs=1e-3)
    assert chsh_value(accidental_degraded_state(OMEGA_I, OMEGA_S, 1.0)) == pytest.approx(0, abs=1e-12)
    with pytest.raises(DomainError):
        accidental_degraded_state(OMEGA_I, OMEGA_S, 1.5)


def test_mixing_keeps_arms_anticorrelated():
    # the arm of the idler is always opposite to the arm of the signal
    trace = simulate_events(1e4, 1e-2, seed=8)
    state = accidental_degraded_state(OMEGA_I, OMEGA_S, 0.5)
    assert state.purity == 0.5
    assert np.all(trace.arm_tags * trace.idler_arms == -1)


TRACE = simulate_events(1e6, 1.0, seed=42)


def test_mc_pure_state():
    estimate = mc_chsh(TRACE, IDEAL, OPTIMAL_SETTINGS, seed=7)
    assert estimate.events == TRACE.count
    assert sum(estimate.counts) == TRACE.count
    assert abs(estimate.value - TSIRELSON) < 4 * estimate.standard_error


def test_mc_mixed_state():
    estimate = mc_chsh(TRACE, MIXED, OPTIMAL_SETTINGS, seed=7)
    assert abs(estimate.value) < 4 * estimate.standard_error


def test_mc_is_deterministic():
    first = mc_chsh(TRACE, IDEAL, seed=99)
    second = mc_chsh(TRACE, IDEAL, seed=99)
    assert first == second


def test_mc_needs_statistics():
    few = simulate_events(10.0, 1.0, seed=1)
    with pytest.raises(InsufficientStatisticsError):
        mc_chsh(few, IDEAL)
