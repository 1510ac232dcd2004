"""
Loading of INI run configurations.

A configuration has the sections [material], [geometry], [cavity] and [run].
[material] may name a preset whose values the remaining keys override. The
idler resonance is never configured, it follows from energy conservation.
"""

import configparser
import os
from importlib import resources
from pathlib import Path
from typing import Dict, Optional, Tuple, Type, Union

from pydantic import ValidationError, root_validator

from .bands import MaterialParams, get_preset
from .cavity import CavitySpec, DeviceGeometry, cavity_lifetime
from .errors import ConfigError, DomainError
from .events import MAX_SEED
from .fields import Quantity
from .logging import log
from .models import Model
from .rate import MIN_QUADRATURE_GRID, RateInputs, mirror_wavelength
from .units import energy_to_angular_frequency, nm, wavelength_to_angular_frequency

CONFIG_ENV_VAR = 'TPEQW_CONFIG'
DEFAULT_CONFIG = 'default.ini'


class CavityBlock(Model):
    """
    The configured cavity: the signal resonance and both quality factors.

    Attributes:
        signal_wavelength (float): signal resonance, nm
        q_s (float): signal quality factor
        q_i (float): idler quality factor
    """
    signal_wavelength: float = Quantity(unit='nm', gt=0, description='signal resonance wavelength')
    q_s: float = Quantity(1000.0, ge=1, description='signal quality factor')
    q_i: float = Quantity(1000.0, ge=1, description='idler quality factor')


class RunBlock(Model):
    """
    Run parameters shared by every command.

    Attributes:
        n_e (float): injected carrier density, cm⁻³
        pdc_baseline (float): down-conversion pair rate to compare with, 1/s
        seed (int): 64-bit seed for every stochastic step
        duration (float): simulated emission time, s
        sweep_min (float): shortest swept signal wavelength, nm
        sweep_max (float, optional): longest swept signal wavelength, nm. Defaults to
            the mirror of sweep_min about the degenerate point
        sweep_steps (int): sweep grid points
        cavity_lifetime (float, optional): overrides the Q/ω cavity lifetime, s
        overlap_probability (float, optional): overrides the Poisson overlap probability
        quadrature_grid (int): subintervals per panel of the quadrature diagnostic
        workers (int, optional): thread pool size for sweeps
    """
    n_e: float = Quantity(1e19, unit='cm-3', gt=0, description='injected carrier density')
    pdc_baseline: float = Quantity(7.5e7, unit='1/s', gt=0, description='down-conversion pair rate')
    seed: int = Quantity(0, ge=0, lt=MAX_SEED, description='64-bit random seed')
    duration: float = Quantity(1e-5, unit='s', gt=0, description='simulated emission time')
    sweep_min: float = Quantity(1400.0, unit='nm', gt=0, description='shortest swept signal wavelength')
    sweep_max: Optional[float] = Quantity(None, unit='nm', gt=0, description='longest swept signal wavelength')
    sweep_steps: int = Quantity(101, ge=2, description='sweep grid points')
    cavity_lifetime: Optional[float] = Quantity(None, unit='s', gt=0, description='cavity lifetime override')
    overlap_probability: Optional[float] = Quantity(None, ge=0, le=1, description='overlap probability override')
    quadrature_grid: int = Quantity(MIN_QUADRATURE_GRID, ge=MIN_QUADRATURE_GRID, description='quadrature subintervals')
    workers: Optional[int] = Quantity(None, ge=1, description='sweep thread pool size')

    @root_validator(skip_on_failure=True)
    def _ordered_sweep(cls, values):
        if values['sweep_max'] is not None and values['sweep_min'] >= values['sweep_max']:
            raise ValueError('sweep_min must be below sweep_max')
        return values


SECTIONS: Dict[str, Type[Model]] = {
    'material': MaterialParams,
    'geometry': DeviceGeometry,
    'cavity': CavityBlock,
    'run': RunBlock,
}


class RunConfig(Model):
    """
    A complete, validated run configuration.

    Attributes:
        material (MaterialParams): band parameters
        geometry (DeviceGeometry): device geometry
        cavity (CavityBlock): cavity resonance and quality factors
        run (RunBlock): run parameters
        source (str): where the configuration was read from
    """
    material: MaterialParams
    geometry: DeviceGeometry
    cavity: CavityBlock
    run: RunBlock = RunBlock()
    source: str = '<memory>'

    @property
    def omega0(self) -> float:
        return energy_to_angular_frequency(self.material.e_gap)

    def cavity_spec(self) -> CavitySpec:
        omega_s = wavelength_to_angular_frequency(nm(self.cavity.signal_wavelength))
        return CavitySpec.for_pair(self.omega0, omega_s, self.cavity.q_s, self.cavity.q_i)

    def rate_inputs(self) -> RateInputs:
        return RateInputs(material=self.material, geometry=self.geometry, cavity=self.cavity_spec(), n_e=self.run.n_e)

    def sweep_range(self) -> Tuple[float, float]:
        """(λ_min, λ_max) of the sweep in nm, λ_max mirrored from λ_min when not configured

        Raises:
            DomainError: if sweep_min leaves the idler without energy
        """
        mirror = mirror_wavelength(self.omega0, self.run.sweep_min)
        if self.run.sweep_max is not None:
            return self.run.sweep_min, self.run.sweep_max
        if mirror <= self.run.sweep_min:
            raise DomainError(
                f'sweep_min {self.run.sweep_min} nm is past the degenerate point, '
                'set sweep_max or pick a shorter sweep_min'
            )
        return self.run.sweep_min, mirror

    @property
    def tau_cav(self) -> float:
        """The configured cavity lifetime, Q_s/ω_s unless overridden"""
        if self.run.cavity_lifetime is not None:
            return self.run.cavity_lifetime
        spec = self.cavity_spec()
        return cavity_lifetime(spec.omega_s, spec.q_s)

    def with_run(self, **changes) -> 'RunConfig':
        """A copy with run parameters changed and re-validated"""
        run = RunBlock(**{**self.run.dict(), **changes})
        return self.copy(update={'run': run})

    def with_section(self, section: str, **changes) -> 'RunConfig':
        """A copy with keys of a section changed and re-validated"""
        model = SECTIONS[section]
        block = model(**{**getattr(self, section).dict(), **changes})
        return self.copy(update={section: block})

    def echo(self) -> Dict[str, Dict[str, object]]:
        """The configuration as plain sections, for result documents"""
        return {name: getattr(self, name).dict() for name in SECTIONS}


def default_config_path() -> Path:
    return Path(str(resources.files('tpeqw') / 'presets' / DEFAULT_CONFIG))


def resolve_config_path(flag: Optional[Union[str, Path]] = None) -> Path:
    """The config to load: the flag, then the TPEQW_CONFIG variable, then the shipped default"""
    if flag:
        return Path(flag)
    env = os.environ.get(CONFIG_ENV_VAR)
    if env:
        return Path(env)
    return default_config_path()


def _line_of(lines, section: str, key: Optional[str] = None) -> int:
    """1-based line of a section header or of a key inside it, 0 if not found"""
    current = None
    for number, raw in enumerate(lines, start=1):
        line = raw.strip()
        if line.startswith('[') and line.endswith(']'):
            current = line[1:-1].strip()
            if key is None and current == section:
                return number
            continue
        if key is not None and current == section and line and line[0] not in '#;':
            name = line.split('=', 1)[0].split(':', 1)[0].strip()
            if name == key:
                return number
    return 0


def _section_values(parser: configparser.ConfigParser, section: str) -> Dict[str, str]:
    return {k: v for k, v in parser.items(section) if v.strip() != ''}


def parse_config(text: str, source: str = '<memory>') -> RunConfig:
    """Parses and validates INI text

    Raises:
        ConfigError: for malformed INI, unknown sections or keys, missing
            sections and any invariant violation, with `source:line [section] key`
    """
    lines = text.splitlines()

    def fail(section: str, key: Optional[str], message: str) -> ConfigError:
        line = _line_of(lines, section, key)
        where = f'[{section}]' + (f' {key}' if key else '')
        return ConfigError(f'{source}:{line} {where}: {message}')

    parser = configparser.ConfigParser(interpolation=None, inline_comment_prefixes=('#', ';'))
    parser.optionxform = str
    try:
        parser.read_string(text, source=source)
    except configparser.Error as e:
        raise ConfigError(f'{source}: {e}') from e

    for section in parser.sections():
        if section not in SECTIONS:
            raise fail(section, None, f'unknown section, expected one of {", ".join(SECTIONS)}')

    blocks = {}
    for section, model in SECTIONS.items():
        if not parser.has_section(section):
            if section == 'run':
                blocks[section] = RunBlock()
                continue
            raise ConfigError(f'{source}:0 [{section}]: missing section')
        values = _section_values(parser, section)
        if section == 'material' and 'preset' in values:
            name = values.pop('preset')
            try:
                base = get_preset(name).dict()
            except KeyError as e:
                raise fail(section, 'preset', str(e)) from e
            values = {**base, **values}
        for key in values:
            if key not in model.__fields__:
                raise fail(section, key, 'unknown key')
        try:
            blocks[section] = model(**values)
        except ValidationError as e:
            first = e.errors()[0]
            key = first['loc'][0] if first['loc'] and first['loc'][0] != '__root__' else None
            raise fail(section, key, first['msg']) from e

    config = RunConfig(**blocks, source=source)
    try:
        config.cavity_spec()
    except DomainError as e:
        raise fail('cavity', 'signal_wavelength', str(e)) from e
    try:
        config.rate_inputs()
    except (ValidationError, ValueError) as e:
        raise ConfigError(f'{source}: {str(e).splitlines()[-1].strip()}') from e
    try:
        config.sweep_range()
    except DomainError as e:
        raise fail('run', 'sweep_min', str(e)) from e
    log.debug(f'Loaded configuration from {source}')
    return config


def load_config(path: Optional[Union[str, Path]] = None) -> RunConfig:
    """Reads a configuration following the usual resolution order

    Raises:
        ConfigError: if the file can't be read or fails validation
    """
    path = resolve_config_path(path)
    try:
        text = path.read_text(encoding='utf-8')
    except OSError as e:
        raise ConfigError(f'{path}: cannot read configuration ({e.strerror})') from e
    return parse_config(text, source=str(path))


