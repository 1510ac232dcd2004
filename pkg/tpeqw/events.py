"""
Poisson emission of photon pairs in time, used to check how often a second pair
shows up while the first one is still in the cavity.
"""

import math

import numpy as np
from pydantic import root_validator

from .errors import DomainError, InsufficientStatisticsError, ResourceError
from .fields import Quantity
from .logging import log_event
from .models import Model

MAX_EXPECTED_EVENTS = 1e9
MAX_SEED = 2**64

# arm of the signal photon, the idler always leaves through the other arm
ARM_R = 1
ARM_L = -1


class EventTrace(Model):
    """
    Emission times of a simulated pair stream.

    Attributes:
        timestamps (np.ndarray): strictly increasing emission times in [0, duration], s
        arm_tags (np.ndarray): per event, +1 if the signal photon leaves through the
            R (σ⁺) arm and -1 for the L (σ⁻) arm
        duration (float): simulated time, s
        rate (float): pair rate used, 1/s
        seed (int): generator seed
    """
    timestamps: np.ndarray
    arm_tags: np.ndarray
    duration: float = Quantity(unit='s', gt=0)
    rate: float = Quantity(unit='1/s', gt=0)
    seed: int

    @root_validator(skip_on_failure=True)
    def _ordered_in_window(cls, values):
        stamps, tags = values['timestamps'], values['arm_tags']
        if stamps.shape != tags.shape:
            raise ValueError('Every event needs exactly one arm tag')
        if stamps.size:
            if stamps[0] < 0 or stamps[-1] > values['duration']:
                raise ValueError('Event times fall outside the simulated window')
            if np.any(np.diff(stamps) <= 0):
                raise ValueError('Event times must be strictly increasing')
        if np.any((tags != ARM_R) & (tags != ARM_L)):
            raise ValueError('Arm tags must be +1 (R) or -1 (L)')
        return values

    def __len__(self) -> int:
        return int(self.timestamps.size)

    @property
    def count(self) -> int:
        return len(self)

    @property
    def idler_arms(self) -> np.ndarray:
        return -self.arm_tags

    @property
    def arm_labels(self) -> np.ndarray:
        return np.where(self.arm_tags == ARM_R, 'R', 'L')


def make_generator(seed: int) -> np.random.Generator:
    """A counter-based (Philox) generator for a 64-bit seed

    Raises:
        DomainError: if the seed doesn't fit in 64 unsigned bits
    """
    if not 0 <= seed < MAX_SEED:
        raise DomainError(f'Seed must be an unsigned 64-bit integer, got {seed!r}')
    return np.random.Generator(np.random.Philox(seed))


def simulate_events(rate: float, duration: float, seed: int) -> EventTrace:
    """Homogeneous Poisson stream of pair emissions.

    Inter-arrival times are exponential with mean 1/R. Each pair gets an arm tag
    for its signal photon, R or L with equal probability.

    Args:
        rate (float): pair rate, 1/s
        duration (float): simulated time, s
        seed (int): 64-bit seed, the same seed always gives the same trace

    Returns:
        EventTrace: the simulated stream

    Raises:
        DomainError: if rate or duration are not positive
        ResourceError: if more than 1e9 events are expected
    """
    if not (rate > 0 and duration > 0):
        raise DomainError(f'Rate and duration must be positive, got {rate!r} and {duration!r}')
    expected = rate * duration
    if expected > MAX_EXPECTED_EVENTS:
        raise ResourceError(f'{expected:.3e} expected events exceed the limit of {MAX_EXPECTED_EVENTS:.0e}')

    rng = make_generator(seed)
    chunk = int(expected + 6 * math.sqrt(expected) + 16)
    blocks = []
    now = 0.0
    while now <= duration:
        block = now + np.cumsum(rng.exponential(1 / rate, size=chunk))
        blocks.append(block)
        now = float(block[-1])
    stamps = np.concatenate(blocks)
    stamps = stamps[stamps <= duration]
    # equal stamps can only come from rounding, keep one
    stamps = np.unique(stamps)
    tags = np.where(rng.random(stamps.size) < 0.5, ARM_R, ARM_L).astype(np.int8)
    log_event('simulate', rate=rate, duration=duration, seed=seed, count=stamps.size)
    return EventTrace(timestamps=stamps, arm_tags=tags, duration=duration, rate=rate, seed=seed)


def overlap_fraction(trace: EventTrace, tau_cav: float) -> float:
    """Fraction of pairs followed by another one within a cavity lifetime

    Raises:
        InsufficientStatisticsError: with fewer than two events
    """
    if trace.count < 2:
        raise InsufficientStatisticsError('At least two events are needed to look at successors')
    gaps = np.diff(trace.timestamps)
    return float(np.mean(gaps < tau_cav))
