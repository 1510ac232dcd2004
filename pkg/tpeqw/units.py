"""
Physical constants and the unit conversions used across the library.

Internal unit system: SI. Energies are accepted in eV at the API boundary and
converted once on entry; lengths coming from configuration in nm, areas in mm²
and carrier densities in cm⁻³ are converted by the records that hold them.

Gaussian to SI translation: the rate expressions are commonly written in
Gaussian units, where the squared charge e² appears bare. In SI it becomes
e²/(4πε₀) and `gaussian_charge_squared` is the only place doing that swap.
"""

import math

from scipy import constants as codata

from .errors import DomainError
from .fields import Quantity
from .models import Model


class Constants(Model):
    """
    CODATA values used by every calculation, immutable after construction.

    Attributes:
        hbar (float): reduced Planck constant, J·s
        e (float): elementary charge, C
        m0 (float): free-electron mass, kg
        c (float): vacuum speed of light, m/s
        epsilon0 (float): vacuum permittivity, F/m
    """
    hbar: float = Quantity(codata.hbar, unit='J s')
    e: float = Quantity(codata.e, unit='C')
    m0: float = Quantity(codata.m_e, unit='kg')
    c: float = Quantity(codata.c, unit='m/s')
    epsilon0: float = Quantity(codata.epsilon_0, unit='F/m')

    @property
    def joule_per_ev(self) -> float:
        return self.e


CONSTANTS = Constants()


def wavelength_to_angular_frequency(wavelength: float) -> float:
    """Vacuum wavelength (m) to angular frequency (rad/s), ω = 2πc/λ

    Raises:
        DomainError: if the wavelength is not positive
    """
    if not wavelength > 0:
        raise DomainError(f'Wavelength must be positive, got {wavelength!r}')
    return 2 * math.pi * CONSTANTS.c / wavelength


def angular_frequency_to_wavelength(omega: float) -> float:
    """Angular frequency (rad/s) to vacuum wavelength (m)"""
    if not omega > 0:
        raise DomainError(f'Angular frequency must be positive, got {omega!r}')
    return 2 * math.pi * CONSTANTS.c / omega


def energy_to_angular_frequency(energy: float) -> float:
    """Photon energy in eV to angular frequency in rad/s. Negative energies (detunings) are allowed"""
    return energy * CONSTANTS.joule_per_ev / CONSTANTS.hbar


def angular_frequency_to_energy(omega: float) -> float:
    """Angular frequency in rad/s to energy in eV"""
    return omega * CONSTANTS.hbar / CONSTANTS.joule_per_ev


def gaussian_charge_squared() -> float:
    """e² of Gaussian-unit formulas expressed in SI: e²/(4πε₀), in J·m"""
    return CONSTANTS.e**2 / (4 * math.pi * CONSTANTS.epsilon0)


def hbar2_over_m0() -> float:
    """ħ²/m0 in eV·nm², the scale linking Kane-type parameters to momentum matrix elements"""
    return CONSTANTS.hbar**2 / CONSTANTS.m0 / CONSTANTS.joule_per_ev * 1e18


def kane_to_energy(p1: float, q: float) -> float:
    """Returns the energy p1·q/m0 (eV) for two interband parameters given in eV·nm.

    The parameters follow the k·p convention P = ħ·p/m0, where p is the momentum
    matrix element, so p1·q/m0 = m0·P1·Q/ħ².
    """
    return p1 * q / hbar2_over_m0()


def nm(value: float) -> float:
    return value * 1e-9


def mm2(value: float) -> float:
    return value * 1e-6


def per_cm3(value: float) -> float:
    return value * 1e6
