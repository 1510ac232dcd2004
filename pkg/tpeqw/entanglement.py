"""
The energy-entangled, polarization-tagged pair state and its Bell statistics.

Each arm (R for σ⁺, L for σ⁻) carries a frequency qubit with |0⟩ = |ω_i⟩ and
|1⟩ = |ω_s⟩. The joint state is ordered R ⊗ L:

    |Ψ⟩ = (|ω_i⟩_R|ω_s⟩_L + e^{iφ}|ω_s⟩_R|ω_i⟩_L)/√2

and noisy states are Werner mixtures ρ = p|Ψ⟩⟨Ψ| + (1-p)·I/4.

The energy qubit is read out by projective analyzers on the Bloch equator,
|±θ⟩ = (|0⟩ ± e^{iθ}|1⟩)/√2. This measurement model is a stand-in, no specific
frequency-qubit analyzer is assumed.
"""

import math
from enum import Enum
from typing import Dict, Tuple

import numpy as np
from pydantic import root_validator, validator

from .errors import DomainError, InsufficientStatisticsError, degenerate_pair_error
from .events import EventTrace, make_generator
from .fields import Quantity
from .logging import log_event
from .models import Model

MIN_MC_EVENTS = 100
DENSITY_TOLERANCE = 1e-12
TWO_PI = 2 * math.pi

Outcome = Tuple[int, int]
OUTCOMES: Tuple[Outcome, ...] = ((1, 1), (1, -1), (-1, 1), (-1, -1))


class Arm(str, Enum):
    R = 'R'
    L = 'L'


class AnalyzerSetting(Model):
    """
    A projective measurement on one arm's frequency qubit.

    Attributes:
        arm (Arm): the arm the analyzer sits on
        angle (float): equatorial angle, rad, stored reduced to [0, 2π)
    """
    arm: Arm
    angle: float = Quantity(0.0, unit='rad')

    @validator('angle')
    def _reduce(cls, angle):
        if not math.isfinite(angle):
            raise ValueError(f'Analyzer angle must be finite, got {angle!r}')
        return angle % TWO_PI

    def projector(self, outcome: int) -> np.ndarray:
        """2×2 projector onto the ±1 outcome"""
        vec = np.array([1.0, outcome * np.exp(1j * self.angle)]) / math.sqrt(2)
        return np.outer(vec, vec.conj())


class TwoPhotonState(Model):
    """
    Werner mixture of the frequency-entangled pair state.

    Attributes:
        omega_i (float): idler frequency, rad/s
        omega_s (float): signal frequency, rad/s
        purity (float): weight p of the entangled component
        phase (float): relative phase φ between the two terms, reduced to [0, 2π)
    """
    omega_i: float = Quantity(unit='rad/s', gt=0)
    omega_s: float = Quantity(unit='rad/s', gt=0)
    purity: float = Quantity(1.0, ge=0, le=1, description='Werner weight of the entangled state')
    phase: float = Quantity(0.0, unit='rad')

    @validator('phase')
    def _reduce_phase(cls, phase):
        return phase % TWO_PI

    @root_validator(skip_on_failure=True)
    def _distinct_frequencies(cls, values):
        if values['omega_i'] == values['omega_s']:
            raise ValueError(str(degenerate_pair_error))
        return values

    @property
    def amplitudes(self) -> np.ndarray:
        """State vector of the entangled component over |00⟩, |01⟩, |10⟩, |11⟩"""
        return np.array([0.0, 1.0, np.exp(1j * self.phase), 0.0]) / math.sqrt(2)

    @property
    def density_matrix(self) -> np.ndarray:
        psi = self.amplitudes
        rho = self.purity * np.outer(psi, psi.conj()) + (1 - self.purity) * np.eye(4) / 4
        check_density_operator(rho)
        return rho

    @property
    def trace_purity(self) -> float:
        """Tr(ρ²), one for a pure state"""
        rho = self.density_matrix
        return float(np.real(np.trace(rho @ rho)))

    @property
    def is_pure(self) -> bool:
        return self.purity == 1


def check_density_operator(rho: np.ndarray, tol: float = DENSITY_TOLERANCE) -> np.ndarray:
    """Checks a density operator is Hermitian, trace one and positive semidefinite

    Raises:
        DomainError: naming the first property that fails
    """
    if not np.allclose(rho, rho.conj().T, atol=tol, rtol=0):
        raise DomainError('Density operator is not Hermitian')
    if abs(np.trace(rho) - 1) > tol:
        raise DomainError(f'Density operator trace is {np.real(np.trace(rho))!r}, not one')
    lowest = float(np.min(np.linalg.eigvalsh(rho)))
    if lowest < -tol:
        raise DomainError(f'Density operator has a negative eigenvalue {lowest!r}')
    return rho


def ideal_state(omega_i: float, omega_s: float) -> TwoPhotonState:
    """The pure pair state with equal amplitudes and no relative phase

    Raises:
        DomainError: if the two frequencies coincide
    """
    if omega_i == omega_s:
        raise degenerate_pair_error
    return TwoPhotonState(omega_i=omega_i, omega_s=omega_s)


def accidental_degraded_state(omega_i: float, omega_s: float, overlap_prob: float) -> TwoPhotonState:
    """Werner state with p = 1 - overlap_prob, accidental pairs counted as white noise"""
    if not 0 <= overlap_prob <= 1:
        raise DomainError(f'Overlap probability must be within [0, 1], got {overlap_prob!r}')
    if omega_i == omega_s:
        raise degenerate_pair_error
    return TwoPhotonState(omega_i=omega_i, omega_s=omega_s, purity=1 - overlap_prob)


def frequency_probability(state: TwoPhotonState, arm: Arm, omega: float) -> float:
    """Probability of finding the photon of an arm at the given frequency

    Raises:
        DomainError: if the frequency is neither the signal nor the idler one
    """
    if omega == state.omega_i:
        level = 0
    elif omega == state.omega_s:
        level = 1
    else:
        raise DomainError(f'{omega!r} rad/s is neither the signal nor the idler frequency')
    diag = np.real(np.diag(state.density_matrix)).reshape(2, 2)
    marginal = diag.sum(axis=1) if Arm(arm) is Arm.R else diag.sum(axis=0)
    return float(marginal[level])


def same_frequency_probability(state: TwoPhotonState) -> float:
    """Probability that both arms carry the same frequency"""
    diag = np.real(np.diag(state.density_matrix))
    return float(diag[0] + diag[3])


def _check_arms(a: AnalyzerSetting, b: AnalyzerSetting):
    if a.arm is not Arm.R or b.arm is not Arm.L:
        raise DomainError(f'Expected one R and one L setting, got {a.arm.value} and {b.arm.value}')


def joint_probabilities(state: TwoPhotonState, a: AnalyzerSetting, b: AnalyzerSetting) -> Dict[Outcome, float]:
    """Born-rule probabilities of the four joint outcomes

    Args:
        state (TwoPhotonState): the pair state
        a (AnalyzerSetting): setting on the R arm
        b (AnalyzerSetting): setting on the L arm

    Returns:
        Dict[Outcome, float]: probability per (outcome_R, outcome_L), outcomes ±1

    Raises:
        DomainError: if the settings are not one per arm
    """
    _check_arms(a, b)
    rho = state.density_matrix
    return {
        (oa, ob): float(np.real(np.trace(rho @ np.kron(a.projector(oa), b.projector(ob)))))
        for oa, ob in OUTCOMES
    }


def coincidence_probability(state: TwoPhotonState, a: AnalyzerSetting, b: AnalyzerSetting) -> float:
    """Probability that both analyzers give '+'"""
    return joint_probabilities(state, a, b)[(1, 1)]


def correlation(state: TwoPhotonState, a: AnalyzerSetting, b: AnalyzerSetting) -> float:
    """The ±1 correlation E(a, b) = Σ o_a·o_b·P(o_a, o_b)"""
    probs = joint_probabilities(state, a, b)
    return sum(oa * ob * p for (oa, ob), p in probs.items())


def marginal_probability(
    state: TwoPhotonState, setting: AnalyzerSetting, other: AnalyzerSetting, outcome: int = 1
) -> float:
    """Probability of an outcome on one arm, summed over the other arm's outcomes.

    No signaling means the result doesn't depend on `other`.
    """
    a, b = (setting, other) if setting.arm is Arm.R else (other, setting)
    probs = joint_probabilities(state, a, b)
    index = 0 if setting.arm is Arm.R else 1
    return sum(p for outcomes, p in probs.items() if outcomes[index] == outcome)


OPTIMAL_SETTINGS: Tuple[AnalyzerSetting, ...] = (
    AnalyzerSetting(arm=Arm.R, angle=0.0),
    AnalyzerSetting(arm=Arm.R, angle=math.pi / 2),
    AnalyzerSetting(arm=Arm.L, angle=math.pi / 4),
    AnalyzerSetting(arm=Arm.L, angle=-math.pi / 4),
)


def _chsh_pairs(a1, a2, b1, b2):
    return ((a1, b1), (a1, b2), (a2, b1), (a2, b2))


_CHSH_SIGNS = np.array([1, 1, 1, -1])


def chsh_value(
    state: TwoPhotonState,
    a1: AnalyzerSetting = OPTIMAL_SETTINGS[0],
    a2: AnalyzerSetting = OPTIMAL_SETTINGS[1],
    b1: AnalyzerSetting = OPTIMAL_SETTINGS[2],
    b2: AnalyzerSetting = OPTIMAL_SETTINGS[3],
) -> float:
    """S = |E(a1,b1) + E(a1,b2) + E(a2,b1) - E(a2,b2)|

    Raises:
        DomainError: if an a-setting is not on R or a b-setting is not on L
    """
    stats = [correlation(state, a, b) for a, b in _chsh_pairs(a1, a2, b1, b2)]
    return abs(float(np.dot(_CHSH_SIGNS, stats)))


class ChshEstimate(Model):
    """
    Monte Carlo CHSH estimate.

    Attributes:
        value (float): estimated S
        standard_error (float): one-sigma error of S
        events (int): number of pairs used
        correlations (Tuple[float, ...]): per-setting correlation estimates
        counts (Tuple[int, ...]): pairs measured per setting pair
    """
    value: float
    standard_error: float = Quantity(ge=0)
    events: int
    correlations: Tuple[float, ...]
    counts: Tuple[int, ...]


def mc_chsh(
    trace: EventTrace,
    state: TwoPhotonState,
    settings: Tuple[AnalyzerSetting, ...] = OPTIMAL_SETTINGS,
    seed: int = 0,
) -> ChshEstimate:
    """Samples analyzer outcomes for every pair of a trace and estimates S.

    Each pair is measured with one of the four setting pairs picked uniformly at
    random, the outcomes are drawn from the Born probabilities. The standard error
    combines the per-setting errors √((1-E²)/N) in quadrature.

    Args:
        trace (EventTrace): the simulated pairs
        state (TwoPhotonState): the state every pair is emitted in
        settings (Tuple[AnalyzerSetting, ...]): a1, a2, b1, b2
        seed (int): 64-bit seed of the outcome sampler

    Returns:
        ChshEstimate: the estimate, identical for identical inputs

    Raises:
        InsufficientStatisticsError: with fewer than 100 events or an unused setting pair
    """
    if trace.count < MIN_MC_EVENTS:
        raise InsufficientStatisticsError(f'{trace.count} events is below the minimum of {MIN_MC_EVENTS}')
    pairs = _chsh_pairs(*settings)
    table = np.array([[joint_probabilities(state, a, b)[o] for o in OUTCOMES] for a, b in pairs])
    products = np.array([oa * ob for oa, ob in OUTCOMES])

    rng = make_generator(seed)
    chosen = rng.integers(0, len(pairs), size=trace.count)
    draws = rng.random(trace.count)
    cumulative = np.cumsum(table, axis=1)[chosen]
    picked = np.minimum((draws[:, None] >= cumulative).sum(axis=1), len(OUTCOMES) - 1)
    observed = products[picked]

    correlations, counts, variances = [], [], []
    for index in range(len(pairs)):
        mask = chosen == index
        n = int(mask.sum())
        if n == 0:
            raise InsufficientStatisticsError(f'No events measured with setting pair {index}')
        e = float(observed[mask].mean())
        correlations.append(e)
        counts.append(n)
        variances.append((1 - e**2) / n)

    value = abs(float(np.dot(_CHSH_SIGNS, correlations)))
    error = math.sqrt(sum(variances))
    log_event('mc_chsh', events=trace.count, seed=seed, value=value, standard_error=error)
    return ChshEstimate(
        value=value,
        standard_error=error,
        events=trace.count,
        correlations=tuple(correlations),
        counts=tuple(counts),
    )
