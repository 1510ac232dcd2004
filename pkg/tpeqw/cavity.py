"""
The doubly resonant vertical microcavity: density of radiation modes, mode
volume, photonic-crystal cell count, lifetimes and extraction.
"""

import math

from pydantic import root_validator

from .errors import DomainError
from .fields import Quantity
from .logging import log
from .models import Model
from .units import mm2, nm

# the two resonances count as well separated beyond this many summed half-widths
SEPARATION_FACTOR = 10


class CavitySpec(Model):
    """
    Signal and idler resonances of the cavity.

    Attributes:
        omega_s (float): signal resonance, rad/s
        omega_i (float): idler resonance, rad/s
        q_s (float): signal quality factor
        q_i (float): idler quality factor
    """
    omega_s: float = Quantity(unit='rad/s', gt=0)
    omega_i: float = Quantity(unit='rad/s', gt=0)
    q_s: float = Quantity(1000.0, ge=1, description='signal quality factor')
    q_i: float = Quantity(1000.0, ge=1, description='idler quality factor')

    @classmethod
    def for_pair(cls, omega0: float, omega_s: float, q_s: float = 1000.0, q_i: float = 1000.0) -> 'CavitySpec':
        """Builds the cavity for a signal resonance, the idler takes the rest of ω0

        Raises:
            DomainError: if the signal frequency leaves no room for the idler
        """
        omega_i = omega0 - omega_s
        if not omega_i > 0:
            raise DomainError(
                f'Signal frequency {omega_s:.6e} rad/s leaves no positive idler frequency below {omega0:.6e} rad/s'
            )
        return cls(omega_s=omega_s, omega_i=omega_i, q_s=q_s, q_i=q_i)

    def retune(self, omega_s: float, omega_i: float) -> 'CavitySpec':
        """A copy resonant at other frequencies with the same quality factors"""
        return CavitySpec(omega_s=omega_s, omega_i=omega_i, q_s=self.q_s, q_i=self.q_i)

    @property
    def half_width_s(self) -> float:
        return self.omega_s / (2 * self.q_s)

    @property
    def half_width_i(self) -> float:
        return self.omega_i / (2 * self.q_i)

    @property
    def linewidth_s(self) -> float:
        """Full width at half maximum ω_s/Q_s"""
        return self.omega_s / self.q_s

    @property
    def linewidth_i(self) -> float:
        return self.omega_i / self.q_i

    @property
    def well_separated(self) -> bool:
        """Whether the two Lorentzians are far apart compared to their widths"""
        return abs(self.omega_s - self.omega_i) > SEPARATION_FACTOR * (self.half_width_s + self.half_width_i)

    def separation_warning(self) -> str:
        """A human readable warning, empty if the resonances are well separated"""
        if self.well_separated:
            return ''
        return (
            f'Cavity resonances {self.omega_s:.6e} and {self.omega_i:.6e} rad/s are not well separated, '
            'the two-Lorentzian density of states is only approximate'
        )


class DeviceGeometry(Model):
    """
    Geometry of the emitting device.

    Attributes:
        cavity_height (float): vertical cavity height, nm
        grating_period (float): photonic crystal lattice period, nm
        fill_factor (float): grating filling factor, recorded but not used in any calculation
        device_area (float): emitting surface, mm²
        refractive_index (float): cavity refractive index
        extraction_efficiency (float): fraction of vertically emitted pairs collected
    """
    cavity_height: float = Quantity(unit='nm', gt=0, description='vertical cavity height')
    grating_period: float = Quantity(490.0, unit='nm', gt=0, description='photonic crystal period')
    fill_factor: float = Quantity(0.5, ge=0, le=1, description='grating filling factor')
    device_area: float = Quantity(1.0, unit='mm2', gt=0, description='device surface area')
    refractive_index: float = Quantity(3.4, ge=1, description='cavity refractive index')
    extraction_efficiency: float = Quantity(0.4, ge=0, le=1, description='extraction efficiency')

    @root_validator(skip_on_failure=True)
    def _at_least_one_cell(cls, values):
        cells = mm2(values['device_area']) / nm(values['grating_period']) ** 2
        if cells < 1:
            raise ValueError(f'The device area holds {cells:.3g} photonic crystal cells, at least one is required')
        return values

    @property
    def quantization_volume(self) -> float:
        return quantization_volume(self)

    @property
    def cell_count(self) -> float:
        return cell_count(self)


def density_of_states(omega: float, spec: CavitySpec) -> float:
    """Density of radiation modes as two Lorentzians, one per resonance

        F(ω) = (1/2π)·Σ (ω_r/2Q_r) / ((ω-ω_r)² + (ω_r/2Q_r)²)

    Args:
        omega (float): angular frequency, rad/s
        spec (CavitySpec): the cavity

    Returns:
        float: F(ω) in s, normalized to one over the real line

    Raises:
        DomainError: for negative frequencies
    """
    if omega < 0:
        raise DomainError(f'Angular frequency must be non negative, got {omega!r}')
    total = 0.0
    for center, gamma in ((spec.omega_s, spec.half_width_s), (spec.omega_i, spec.half_width_i)):
        total += gamma / ((omega - center) ** 2 + gamma**2)
    return total / (2 * math.pi)


def integrated_density_of_states(spec: CavitySpec, lower: float = -math.inf, upper: float = math.inf) -> float:
    """Integral of the density of states between two frequencies using the arctan antiderivative"""
    total = 0.0
    for center, gamma in ((spec.omega_s, spec.half_width_s), (spec.omega_i, spec.half_width_i)):
        total += math.atan((upper - center) / gamma) - math.atan((lower - center) / gamma)
    return total / (2 * math.pi)


def quantization_volume(geom: DeviceGeometry) -> float:
    """Field quantization volume: cavity height times one photonic crystal cell, m³"""
    return nm(geom.cavity_height) * nm(geom.grating_period) ** 2


def cell_count(geom: DeviceGeometry) -> float:
    """Number of photonic crystal unit cells covering the device"""
    return mm2(geom.device_area) / nm(geom.grating_period) ** 2


def half_wave_height(wavelength: float, refractive_index: float) -> float:
    """Half of the in-material wavelength, λ/(2n), same unit as the wavelength

    Raises:
        DomainError: if the wavelength is not positive or the index is below one
    """
    if not wavelength > 0:
        raise DomainError(f'Wavelength must be positive, got {wavelength!r}')
    if refractive_index < 1:
        raise DomainError(f'Refractive index must be at least 1, got {refractive_index!r}')
    return wavelength / (2 * refractive_index)


def cavity_lifetime(omega: float, q: float) -> float:
    """Photon energy decay time τ = Q/ω, s"""
    if not omega > 0:
        raise DomainError(f'Angular frequency must be positive, got {omega!r}')
    if q < 1:
        raise DomainError(f'Quality factor must be at least 1, got {q!r}')
    return q / omega


def detected_rate(rate: float, geom: DeviceGeometry) -> float:
    """Pair rate leaving the device after extraction"""
    if rate < 0:
        raise DomainError(f'Rate must be non negative, got {rate!r}')
    detected = rate * geom.extraction_efficiency
    log.debug(f'Detected rate: {detected:.6e} 1/s (extraction {geom.extraction_efficiency})')
    return detected
