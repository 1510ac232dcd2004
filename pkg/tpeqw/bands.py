"""
Band-edge states of the quantum well, the angular-momentum selection rules and
the second-order two-photon matrix element.

The initial state is the conduction-band subband edge, the final state the
light-hole subband edge, both at zero in-plane momentum. Only the higher
conduction bands p̃(Γ7), p̃(Γ8) act as intermediate states; envelope overlaps are
taken as unity (infinite-barrier well).
"""

import math
from enum import Enum
from functools import lru_cache
from typing import Iterable, Tuple

from pydantic import root_validator, validator

from .errors import DomainError, ResonanceError
from .fields import Quantity
from .logging import log
from .models import Model
from .units import kane_to_energy

# |E_c + ħω - shift| below this (eV) means the perturbative expansion broke down
RESONANCE_TOLERANCE = 1e-6

ALLOWED_JZ = (-1.5, -0.5, 0.5, 1.5)


class Band(str, Enum):
    CB = 'CB'
    LH = 'LH'
    HIGHER_CB_GAMMA7 = 'HigherCB_Gamma7'
    HIGHER_CB_GAMMA8 = 'HigherCB_Gamma8'


class PolarizationGeometry(str, Enum):
    """Photon polarization/propagation configurations of the emitted pair

    Attributes:
        VERTICAL_CIRCULAR_PAIR: σ⁺σ⁻ pair propagating along the growth axis z
        IN_PLANE_ZZ: both photons z-polarized, propagating in the well plane
        MIXED_IN_PLANE_VERTICAL: one in-plane and one vertical polarization
    """
    VERTICAL_CIRCULAR_PAIR = 'VerticalCircularPair'
    IN_PLANE_ZZ = 'InPlaneZZ'
    MIXED_IN_PLANE_VERTICAL = 'MixedInPlaneVertical'

    @property
    def amplitude_factor(self) -> int:
        """Multiplier applied to the matrix element amplitude"""
        return _AMPLITUDE_FACTORS[self]


_AMPLITUDE_FACTORS = {
    PolarizationGeometry.VERTICAL_CIRCULAR_PAIR: 1,
    PolarizationGeometry.IN_PLANE_ZZ: 4,
    PolarizationGeometry.MIXED_IN_PLANE_VERTICAL: 0,
}


class CircularPolarization(int, Enum):
    SIGMA_PLUS = 1
    SIGMA_MINUS = -1


def _check_jz(jz: float) -> float:
    if jz not in ALLOWED_JZ:
        raise DomainError(f'j_z must be one of {ALLOWED_JZ}, got {jz!r}')
    return jz


class MaterialParams(Model):
    """
    Band energies and interband parameters of the 14-band description.

    Attributes:
        e_gap (float): QW transition energy ħω₀, eV
        e_c (float): s-p conduction band energy difference, eV
        delta_c (float): splitting of the higher conduction bands, eV
        p1 (float): interband parameter (ħ·p/m0 form), eV·nm
        q (float): interband parameter (ħ·p/m0 form), eV·nm
        label (str): preset name
    """
    e_gap: float = Quantity(unit='eV', gt=0, description='QW transition energy')
    e_c: float = Quantity(unit='eV', gt=0, description='s-p conduction band energy difference')
    delta_c: float = Quantity(unit='eV', ge=0, description='higher conduction band splitting')
    p1: float = Quantity(unit='eV nm', ge=0, description='interband parameter P1')
    q: float = Quantity(unit='eV nm', ge=0, description='interband parameter Q')
    label: str = 'custom'

    @root_validator(skip_on_failure=True)
    def _splitting_below_gap(cls, values):
        if not values['e_c'] > values['delta_c']:
            raise ValueError(
                f"e_c ({values['e_c']}) must exceed delta_c ({values['delta_c']}) "
                "or the shifted energy denominators can vanish"
            )
        return values

    @property
    def coupling_energy(self) -> float:
        """P1·Q/m0 in eV"""
        return kane_to_energy(self.p1, self.q)


# E_gap, E_c, Δ_c and Q sit on the 14-band literature scale for GaAs. P1 is not a
# literature value: it is tuned so that the half-wave cavity operating point reaches
# ~7.5e10 pairs/s. With literature P1 the rate is roughly 25 times lower.
PRESETS = {
    'GaAs-14band-calibrated': MaterialParams(
        e_gap=1.55, e_c=3.0, delta_c=0.17, p1=1.24, q=0.82, label='GaAs-14band-calibrated'
    ),
}


def get_preset(name: str) -> MaterialParams:
    """Returns a named material preset

    Raises:
        KeyError: if there's no preset with that name
    """
    try:
        return PRESETS[name]
    except KeyError:
        raise KeyError(f'"{name}" is not a material preset, choose one of {sorted(PRESETS)}') from None


class BandEdgeState(Model):
    """
    A zero-k band-edge state as a superposition of periodic Bloch parts.

    Attributes:
        band (Band): the band the state belongs to
        j (float): total angular momentum
        jz (float): projection on the growth axis
        components (tuple[tuple[float, str], ...]): (coefficient, Bloch label) pairs
            over normalized Bloch functions
    """
    band: Band
    j: float
    jz: float
    components: Tuple[Tuple[float, str], ...]

    _jz_allowed = validator('jz', allow_reuse=True)(_check_jz)

    @validator('components')
    def _normalized(cls, v):
        norm = sum(abs(coef) ** 2 for coef, _ in v)
        if abs(norm - 1) > 1e-12:
            raise ValueError(f'Spinor components are not normalized (norm² = {norm!r})')
        return v

    @root_validator(skip_on_failure=True)
    def _band_quantum_numbers(cls, values):
        band, j, jz = values['band'], values['j'], values['jz']
        if abs(jz) > j:
            raise ValueError(f'|j_z| = {abs(jz)} exceeds j = {j}')
        if band is Band.CB and (j, abs(jz)) != (0.5, 0.5):
            raise ValueError('Conduction band edge states carry j = 1/2, j_z = ±1/2')
        if band is Band.LH and (j, abs(jz)) != (1.5, 0.5):
            raise ValueError('Light-hole states carry j = 3/2, j_z = ±1/2')
        if band is Band.HIGHER_CB_GAMMA7 and j != 0.5:
            raise ValueError('Γ7 states carry j = 1/2')
        if band is Band.HIGHER_CB_GAMMA8 and j != 1.5:
            raise ValueError('Γ8 states carry j = 3/2')
        return values

    @property
    def norm(self) -> float:
        return sum(abs(coef) ** 2 for coef, _ in self.components)


_R13 = math.sqrt(1 / 3)
_R23 = math.sqrt(2 / 3)

CB_UP = BandEdgeState(band=Band.CB, j=0.5, jz=0.5, components=((1.0, 'S,up'),))
CB_DOWN = BandEdgeState(band=Band.CB, j=0.5, jz=-0.5, components=((1.0, 'S,down'),))
LH_UP = BandEdgeState(
    band=Band.LH, j=1.5, jz=0.5,
    components=((_R23, 'Zv,up'), (-_R13, '(Xv+iYv)/sqrt2,down')),
)
LH_DOWN = BandEdgeState(
    band=Band.LH, j=1.5, jz=-0.5,
    components=((_R23, 'Zv,down'), (_R13, '(Xv-iYv)/sqrt2,up')),
)

# intermediates reached from the j_z = +1/2 (key 0.5) or -1/2 (key -0.5) conduction state
_INTERMEDIATES = {
    0.5: (
        BandEdgeState(
            band=Band.HIGHER_CB_GAMMA8, j=1.5, jz=1.5,
            components=((1.0, '(Xc+iYc)/sqrt2,up'),),
        ),
        BandEdgeState(
            band=Band.HIGHER_CB_GAMMA7, j=0.5, jz=-0.5,
            components=((_R13, 'Zc,down'), (-_R23, '(Xc-iYc)/sqrt2,up')),
        ),
    ),
    -0.5: (
        BandEdgeState(
            band=Band.HIGHER_CB_GAMMA8, j=1.5, jz=-1.5,
            components=((1.0, '(Xc-iYc)/sqrt2,down'),),
        ),
        BandEdgeState(
            band=Band.HIGHER_CB_GAMMA7, j=0.5, jz=0.5,
            components=((_R13, 'Zc,up'), (_R23, '(Xc+iYc)/sqrt2,down')),
        ),
    ),
}


def spin_channels() -> Tuple[Tuple[BandEdgeState, BandEdgeState], ...]:
    """The two (initial, final) pairs of the CB -> LH transition, j_z = +1/2 and j_z = -1/2"""
    return ((CB_UP, LH_UP), (CB_DOWN, LH_DOWN))


class TransitionPath(Model):
    """
    One surviving second-order path through an intermediate state.

    Attributes:
        intermediate (BandEdgeState): the intermediate state
        offset (float): E_n - E_i, energy of the intermediate above the initial state, eV
        weight (int): sign the path enters the matrix element bracket with
    """
    intermediate: BandEdgeState
    offset: float = Quantity(unit='eV', gt=0)
    weight: int

    @validator('weight')
    def _unit_weight(cls, v):
        if v not in (1, -1):
            raise ValueError('Path weight must be +1 or -1')
        return v

    def denominators(self, hw1: float, hw2: float) -> Tuple[float, float]:
        """E_i - E_n - ħω for both photon orderings, eV"""
        return (-self.offset - hw1, -self.offset - hw2)

    def term(self, hw_s: float, hw_i: float) -> float:
        """This path's contribution to the bracket, 1/eV

        Raises:
            ResonanceError: if either denominator is within tolerance of zero
        """
        for d in self.denominators(hw_s, hw_i):
            if abs(d) < RESONANCE_TOLERANCE:
                raise ResonanceError(
                    f'Energy denominator {d:.3e} eV through {self.intermediate.band.value} '
                    'is resonant, second order perturbation theory does not apply'
                )
        return self.weight * (1 / (self.offset + hw_s) + 1 / (self.offset + hw_i))


@lru_cache(maxsize=64)
def surviving_paths(params: MaterialParams, initial_jz: float = 0.5) -> Tuple[TransitionPath, ...]:
    """Returns the two intermediate-state paths of the matrix element.

    Lower-band intermediates (p(Γ7), p(Γ8), s̃(Γ6)) have k-dependent dipoles
    that vanish at the zero-k point the cavity selects, so only the higher
    conduction bands remain.

    Args:
        params (MaterialParams): the material
        initial_jz (float): which spin channel, +1/2 or -1/2. Defaults to +1/2

    Returns:
        tuple[TransitionPath, TransitionPath]: the Γ8 path then the Γ7 path
    """
    if initial_jz not in _INTERMEDIATES:
        raise DomainError(f'Initial conduction state must have j_z = ±1/2, got {initial_jz!r}')
    gamma8, gamma7 = _INTERMEDIATES[initial_jz]
    return (
        TransitionPath(intermediate=gamma8, offset=params.e_c, weight=1),
        TransitionPath(intermediate=gamma7, offset=params.e_c - params.delta_c, weight=-1),
    )


def _check_photon_energies(hw_s: float, hw_i: float):
    if not (hw_s > 0 and hw_i > 0):
        raise DomainError(f'Photon energies must be positive, got {hw_s!r} and {hw_i!r} eV')


def mprime_bracket(hw_s: float, hw_i: float, params: MaterialParams, initial_jz: float = 0.5) -> float:
    """The energy bracket of the matrix element:

        1/(E_c+ħω_s) + 1/(E_c+ħω_i) - 1/(E_c+ħω_s-Δ_c) - 1/(E_c+ħω_i-Δ_c)

    Args:
        hw_s (float): signal photon energy, eV
        hw_i (float): idler photon energy, eV
        params (MaterialParams): the material
        initial_jz (float): spin channel. Defaults to +1/2

    Returns:
        float: the bracket in 1/eV

    Raises:
        DomainError: if a photon energy is not positive
        ResonanceError: if a denominator vanishes
    """
    _check_photon_energies(hw_s, hw_i)
    total = 0.0
    for path in surviving_paths(params, initial_jz):
        total += path.term(hw_s, hw_i)
    return total


def mprime(
    hw_s: float,
    hw_i: float,
    params: MaterialParams,
    geom: PolarizationGeometry = PolarizationGeometry.VERTICAL_CIRCULAR_PAIR,
    initial_jz: float = 0.5,
) -> complex:
    """The dimensionless two-photon matrix element

        M' = i·sqrt(3/2)·(P1·Q/m0)·bracket·g

    with g = 1, 4, 0 for the vertical circular pair, the in-plane z-z pair and
    mixed polarizations. The factor g multiplies the amplitude, so rates scale as g².

    Returns:
        complex: a purely imaginary number
    """
    _check_photon_energies(hw_s, hw_i)
    factor = PolarizationGeometry(geom).amplitude_factor
    if factor == 0:
        return complex(0.0, 0.0)
    bracket = mprime_bracket(hw_s, hw_i, params, initial_jz)
    value = math.sqrt(1.5) * params.coupling_energy * bracket * factor
    return complex(0.0, value)


def allowed_two_photon(
    initial_jz: float,
    final_jz: float,
    pol_pair: Iterable[CircularPolarization],
) -> bool:
    """Checks the Δj_z selection rule for a collinear pair emitted along z.

    The angular momentum carried away by the photons must equal
    j_z(initial) - j_z(final).

    Args:
        initial_jz (float): j_z of the initial electron state
        final_jz (float): j_z of the final state
        pol_pair (Iterable[CircularPolarization]): the two photon polarizations

    Raises:
        DomainError: if a j_z is not ±1/2 or ±3/2, or the pair doesn't hold two photons
    """
    _check_jz(initial_jz)
    _check_jz(final_jz)
    pols = [CircularPolarization(p) for p in pol_pair]
    if len(pols) != 2:
        raise DomainError(f'A photon pair holds exactly two polarizations, got {len(pols)}')
    carried = sum(p.value for p in pols)
    allowed = carried == initial_jz - final_jz
    log.debug(f'Selection rule: {initial_jz} -> {final_jz} with {[p.name for p in pols]}: {allowed}')
    return allowed
