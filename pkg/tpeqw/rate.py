"""
Absolute two-photon pair-generation rate.

Two routes are provided and never reconciled with each other:

- `closed_form_rate`, the headline vertical emission rate

      R = π³ e⁴ N_c n_e |M'|² / (m0² V ω0 ω_i ω_s)

  which carries no quality factor: the cavity only reshapes the broadband
  two-photon spectrum, it does not change the total decay rate.

- `quadrature_rate`, the general second order rate with the energy delta
  collapsed, integrated against the two-Lorentzian density of states. It grows
  with Q and is reported as a structural diagnostic next to the closed form.

e⁴ is translated to SI through `units.gaussian_charge_squared`.
"""

import math
from concurrent.futures import ThreadPoolExecutor
from typing import List, Optional, Tuple

import numpy as np
from pydantic import root_validator
from scipy import special

from .bands import MaterialParams, PolarizationGeometry, mprime
from .cavity import CavitySpec, DeviceGeometry, density_of_states, detected_rate
from .errors import ConvergenceError, DomainError
from .fields import Quantity
from .logging import log, log_rate
from .models import Model
from .units import (
    CONSTANTS,
    angular_frequency_to_energy,
    angular_frequency_to_wavelength,
    energy_to_angular_frequency,
    gaussian_charge_squared,
    nm,
    per_cm3,
    wavelength_to_angular_frequency,
)

CONSERVATION_TOLERANCE = 1e-9
# integration window half-width, in linewidths ω/Q around each resonance
QUADRATURE_WINDOW = 50
QUADRATURE_AGREEMENT = 1e-3
# Gauss-Legendre nodes per subinterval
QUADRATURE_ORDER = 8
MIN_QUADRATURE_GRID = 64


class RateInputs(Model):
    """
    Everything the rate depends on.

    Attributes:
        material (MaterialParams): the band parameters, E_gap sets ω0
        geometry (DeviceGeometry): the device geometry
        cavity (CavitySpec): signal and idler resonances, ω_s + ω_i = ω0
        n_e (float): injected carrier density, cm⁻³
    """
    material: MaterialParams
    geometry: DeviceGeometry
    cavity: CavitySpec
    n_e: float = Quantity(unit='cm-3', gt=0, description='injected carrier density')

    @root_validator(skip_on_failure=True)
    def _energy_conservation(cls, values):
        omega0 = energy_to_angular_frequency(values['material'].e_gap)
        cavity = values['cavity']
        mismatch = abs(cavity.omega_s + cavity.omega_i - omega0)
        if mismatch > CONSERVATION_TOLERANCE * omega0:
            raise ValueError(
                f'Signal and idler ({cavity.omega_s:.9e} + {cavity.omega_i:.9e} rad/s) '
                f'do not add up to the transition frequency {omega0:.9e} rad/s'
            )
        carriers = per_cm3(values['n_e']) * values['geometry'].quantization_volume
        if not math.isfinite(carriers):
            raise ValueError('The carrier number per quantization volume is not finite')
        return values

    @property
    def omega0(self) -> float:
        return energy_to_angular_frequency(self.material.e_gap)

    @property
    def carrier_number(self) -> float:
        """N_e = n_e·V"""
        return per_cm3(self.n_e) * self.geometry.quantization_volume

    def retune(self, omega_s: float, omega_i: float) -> 'RateInputs':
        return self.copy(update={'cavity': self.cavity.retune(omega_s, omega_i)})

    def with_carrier_density(self, n_e: float) -> 'RateInputs':
        return RateInputs(material=self.material, geometry=self.geometry, cavity=self.cavity, n_e=n_e)


class PairRateResult(Model):
    """
    Attributes:
        rate (float): generated pairs per second
        tau_2ph (float): mean interval between pairs, s (infinite for a vanishing rate)
        rate_detected (float): pairs per second after extraction
        geometry_pol (PolarizationGeometry): the emission geometry
    """
    rate: float = Quantity(unit='1/s', ge=0)
    tau_2ph: float = Quantity(unit='s', gt=0)
    rate_detected: float = Quantity(unit='1/s', ge=0)
    geometry_pol: PolarizationGeometry


class SpectralCurve(Model):
    """
    Pair rate against the signal wavelength, idler set by energy conservation.

    Attributes:
        lambda_s (tuple[float, ...]): signal wavelengths, nm, monotone
        lambda_i (tuple[float, ...]): matching idler wavelengths, nm
        rates (tuple[float, ...]): pair rates, 1/s
        omega0 (float): transition frequency, rad/s
        unresolved (int): grid points where the two resonances overlap
    """
    lambda_s: Tuple[float, ...]
    lambda_i: Tuple[float, ...]
    rates: Tuple[float, ...]
    omega0: float = Quantity(unit='rad/s', gt=0)
    unresolved: int = 0

    @root_validator(skip_on_failure=True)
    def _consistent_samples(cls, values):
        ls, li, rates = values['lambda_s'], values['lambda_i'], values['rates']
        if not len(ls) == len(li) == len(rates):
            raise ValueError('Sample columns have different lengths')
        if any(r < 0 for r in rates):
            raise ValueError('Pair rates cannot be negative')
        omega0 = values['omega0']
        for s, i in zip(ls, li):
            total = wavelength_to_angular_frequency(nm(s)) + wavelength_to_angular_frequency(nm(i))
            if abs(total - omega0) > CONSERVATION_TOLERANCE * omega0:
                raise ValueError(f'Sample at {s} nm does not conserve energy')
        return values

    @property
    def samples(self) -> List[Tuple[float, float]]:
        return list(zip(self.lambda_s, self.rates))

    def peak(self) -> Tuple[float, float]:
        """(λ_s, rate) of the largest sample"""
        index = int(np.argmax(self.rates))
        return self.lambda_s[index], self.rates[index]


def _pair_rate(inputs: RateInputs, omega_s: float, omega_i: float, geom_pol: PolarizationGeometry) -> float:
    material = inputs.material
    amplitude = mprime(
        angular_frequency_to_energy(omega_s),
        angular_frequency_to_energy(omega_i),
        material,
        geom_pol,
    )
    geometry = inputs.geometry
    e2 = gaussian_charge_squared()
    numerator = math.pi**3 * e2**2 * geometry.cell_count * per_cm3(inputs.n_e) * abs(amplitude) ** 2
    denominator = CONSTANTS.m0**2 * geometry.quantization_volume * inputs.omega0 * omega_i * omega_s
    return numerator / denominator


def closed_form_rate(
    inputs: RateInputs,
    geom_pol: PolarizationGeometry = PolarizationGeometry.VERTICAL_CIRCULAR_PAIR,
) -> PairRateResult:
    """Vertical emission rate of entangled pairs.

    Args:
        inputs (RateInputs): material, geometry, cavity and carrier density
        geom_pol (PolarizationGeometry): emission geometry. Defaults to the vertical σ⁺σ⁻ pair

    Returns:
        PairRateResult: rate, mean interval and detected rate. Independent of the quality factors

    Raises:
        ResonanceError: propagated from the matrix element
    """
    cavity = inputs.cavity
    rate = _pair_rate(inputs, cavity.omega_s, cavity.omega_i, PolarizationGeometry(geom_pol))
    log_rate('closed-form', rate, geometry=PolarizationGeometry(geom_pol).value, n_e=inputs.n_e)
    return PairRateResult(
        rate=rate,
        tau_2ph=1 / rate if rate > 0 else math.inf,
        rate_detected=detected_rate(rate, inputs.geometry),
        geometry_pol=geom_pol,
    )


def dimensional_prefactor(omega1: float, omega2: float, inputs: RateInputs) -> float:
    """Everything multiplying M' in the full matrix element, in J:

        (N_c e²/2m0c²)·(2πħc²/V)·1/sqrt(ω1ω2)

    Raises:
        DomainError: if a frequency is not positive
    """
    if not (omega1 > 0 and omega2 > 0):
        raise DomainError(f'Photon frequencies must be positive, got {omega1!r} and {omega2!r}')
    geometry = inputs.geometry
    c = CONSTANTS.c
    coupling = geometry.cell_count * gaussian_charge_squared() / (2 * CONSTANTS.m0 * c**2)
    field = 2 * math.pi * CONSTANTS.hbar * c**2 / geometry.quantization_volume
    return coupling * field / math.sqrt(omega1 * omega2)


def two_photon_integrand(
    inputs: RateInputs,
    omega1: float,
    geom_pol: PolarizationGeometry = PolarizationGeometry.VERTICAL_CIRCULAR_PAIR,
) -> float:
    """F(ω1)·F(ω0-ω1)·|M(ω1, ω0-ω1)|², zero where either photon would have no energy"""
    omega2 = inputs.omega0 - omega1
    if omega1 <= 0 or omega2 <= 0:
        return 0.0
    amplitude = mprime(
        angular_frequency_to_energy(omega1),
        angular_frequency_to_energy(omega2),
        inputs.material,
        geom_pol,
    )
    m = dimensional_prefactor(omega1, omega2, inputs) * abs(amplitude)
    cavity = inputs.cavity
    return density_of_states(omega1, cavity) * density_of_states(omega2, cavity) * m**2


def quadrature_breakpoints(cavity: CavitySpec, omega0: float) -> List[float]:
    """Panel edges of the quadrature: windows of ±50 linewidths around each resonance and the degenerate point"""
    width = QUADRATURE_WINDOW * max(cavity.linewidth_s, cavity.linewidth_i)
    low, high = sorted((cavity.omega_s, cavity.omega_i))
    start = max(low - width, 0.0)
    stop = min(high + width, omega0)
    inner = {cavity.omega_s, cavity.omega_i, omega0 / 2, low + width, high - width}
    points = sorted(p for p in inner if start < p < stop)
    return [start, *points, stop]


def _integrate(inputs: RateInputs, edges: List[float], pieces: int, geom_pol: PolarizationGeometry) -> float:
    """Composite Gauss-Legendre rule, `pieces` equal subintervals per panel"""
    scale = max(two_photon_integrand(inputs, inputs.cavity.omega_s, geom_pol), 0.0)
    if scale == 0:
        return 0.0

    f = np.vectorize(lambda omega1: two_photon_integrand(inputs, float(omega1), geom_pol) / scale, otypes=[float])
    nodes, weights = special.roots_legendre(QUADRATURE_ORDER)
    total = 0.0
    for a, b in zip(edges[:-1], edges[1:]):
        cuts = np.linspace(a, b, pieces + 1)
        half = (np.diff(cuts) / 2)[:, None]
        middle = ((cuts[:-1] + cuts[1:]) / 2)[:, None]
        total += float(np.sum(half * weights * f(middle + half * nodes)))
    return total * scale


def quadrature_rate(
    inputs: RateInputs,
    grid: int = MIN_QUADRATURE_GRID,
    geom_pol: PolarizationGeometry = PolarizationGeometry.VERTICAL_CIRCULAR_PAIR,
) -> float:
    """Rate from the general second order expression with the energy delta collapsed:

        R = (2π/ħ²)·N_e·∫ F(ω1)F(ω0-ω1)|M(ω1, ω0-ω1)|² dω1

    A fixed Gauss-Legendre rule on `grid` equal subintervals per panel, repeated
    on twice as many. Unlike the closed form this result depends on Q. With
    Q low enough for the windows to reach zero frequency the integrand grows as
    1/ω1 at the ends and the two passes disagree.

    Args:
        inputs (RateInputs): the rate inputs
        grid (int): subintervals per panel, at least 64
        geom_pol (PolarizationGeometry): emission geometry

    Raises:
        DomainError: if the grid is below 64
        ConvergenceError: if the two refinements differ by more than 1e-3 relative
    """
    if grid < MIN_QUADRATURE_GRID:
        raise DomainError(f'Quadrature grid must be at least {MIN_QUADRATURE_GRID}, got {grid}')
    geom_pol = PolarizationGeometry(geom_pol)
    edges = quadrature_breakpoints(inputs.cavity, inputs.omega0)
    coarse = _integrate(inputs, edges, grid, geom_pol)
    fine = _integrate(inputs, edges, 2 * grid, geom_pol)
    if abs(fine - coarse) > QUADRATURE_AGREEMENT * abs(fine):
        raise ConvergenceError(
            f'Quadrature did not converge: {coarse:.9e} vs {fine:.9e} with {grid} and {2 * grid} subintervals'
        )
    rate = 2 * math.pi / CONSTANTS.hbar**2 * inputs.carrier_number * fine
    log_rate('quadrature', rate, grid=grid, q_s=inputs.cavity.q_s, q_i=inputs.cavity.q_i)
    return rate


def mirror_wavelength(omega0: float, wavelength: float) -> float:
    """Wavelength, nm, of the partner photon when the other has `wavelength` nm

    Raises:
        DomainError: if the photon at `wavelength` leaves no energy for its partner
    """
    omega = wavelength_to_angular_frequency(nm(wavelength))
    if not omega0 - omega > 0:
        raise DomainError(
            f'A photon at {wavelength:.3f} nm exceeds the transition energy, '
            f'stay above {angular_frequency_to_wavelength(omega0) * 1e9:.3f} nm'
        )
    return angular_frequency_to_wavelength(omega0 - omega) * 1e9


def sweep_grid(inputs: RateInputs, lambda_min: float, lambda_max: float, steps: int) -> List[Tuple[float, float, float]]:
    """(λ_s in nm, ω_s, ω_i) for every sweep point, λ_s increasing

    Points are evenly spaced in ω_s, so a range symmetric about the degenerate
    point ω0/2 holds the mirror (ω0 - ω_s) of every point it holds.

    Raises:
        DomainError: for fewer than two steps, an empty range, or a signal leaving no idler energy
    """
    if steps < 2:
        raise DomainError(f'A sweep needs at least 2 steps, got {steps}')
    if not 0 < lambda_min < lambda_max:
        raise DomainError(f'Invalid sweep range [{lambda_min}, {lambda_max}] nm')
    omega0 = inputs.omega0
    mirror_wavelength(omega0, lambda_min)
    omegas = np.linspace(
        wavelength_to_angular_frequency(nm(lambda_min)),
        wavelength_to_angular_frequency(nm(lambda_max)),
        steps,
    )
    wavelengths = [angular_frequency_to_wavelength(float(omega)) * 1e9 for omega in omegas]
    wavelengths[0], wavelengths[-1] = float(lambda_min), float(lambda_max)
    return [(wavelength, float(omega), omega0 - float(omega)) for wavelength, omega in zip(wavelengths, omegas)]


def sweep_point(
    inputs: RateInputs,
    omega_s: float,
    omega_i: float,
    geom_pol: PolarizationGeometry = PolarizationGeometry.VERTICAL_CIRCULAR_PAIR,
) -> Tuple[float, bool]:
    """Rate with the cavity retuned to (ω_s, ω_i), and whether the retuned resonances are resolved"""
    retuned = inputs.retune(omega_s, omega_i)
    return closed_form_rate(retuned, geom_pol).rate, retuned.cavity.well_separated


def assemble_curve(inputs: RateInputs, grid: List[Tuple[float, float, float]], results: List[Tuple[float, bool]]) -> SpectralCurve:
    unresolved = sum(1 for _, resolved in results if not resolved)
    if unresolved:
        log.warning(f'{unresolved} sweep points have overlapping signal and idler resonances')
    return SpectralCurve(
        lambda_s=tuple(w for w, _, _ in grid),
        lambda_i=tuple(angular_frequency_to_wavelength(oi) * 1e9 for _, _, oi in grid),
        rates=tuple(rate for rate, _ in results),
        omega0=inputs.omega0,
        unresolved=unresolved,
    )


def spectral_sweep(
    inputs: RateInputs,
    lambda_min: float,
    lambda_max: float,
    steps: int,
    workers: Optional[int] = None,
    geom_pol: PolarizationGeometry = PolarizationGeometry.VERTICAL_CIRCULAR_PAIR,
) -> SpectralCurve:
    """Pair rate against the signal wavelength.

    Args:
        inputs (RateInputs): the rate inputs, the cavity is retuned at every point
        lambda_min (float): shortest signal wavelength, nm
        lambda_max (float): longest signal wavelength, nm
        steps (int): number of grid points, at least 2
        workers (int, optional): evaluate points on a thread pool of this size.
            Defaults to None (sequential). The curve is in grid order either way
        geom_pol (PolarizationGeometry): emission geometry

    Returns:
        SpectralCurve: the sampled curve

    Raises:
        DomainError: if the range leaves the idler without energy
    """
    grid = sweep_grid(inputs, lambda_min, lambda_max, steps)

    def evaluate(point: Tuple[float, float, float]) -> Tuple[float, bool]:
        _, omega_s, omega_i = point
        return sweep_point(inputs, omega_s, omega_i, geom_pol)

    if workers and workers > 1:
        with ThreadPoolExecutor(max_workers=workers) as pool:
            results = list(pool.map(evaluate, grid))
    else:
        results = [evaluate(point) for point in grid]
    return assemble_curve(inputs, grid, results)


def pdc_comparison(rate: float, pdc_baseline: float) -> float:
    """Orders of magnitude between the pair rate and a down-conversion baseline, log10(R/R_pdc)"""
    if not (rate > 0 and pdc_baseline > 0):
        raise DomainError(f'Both rates must be positive, got {rate!r} and {pdc_baseline!r}')
    return math.log10(rate / pdc_baseline)


def pair_overlap_probability(rate: float, tau_cav: float) -> float:
    """Poisson probability that another pair is emitted within one cavity lifetime, 1 - exp(-R·τ)"""
    if rate < 0 or tau_cav < 0:
        raise DomainError(f'Rate and lifetime must be non negative, got {rate!r} and {tau_cav!r}')
    return -math.expm1(-rate * tau_cav)
