from __future__ import annotations

import asyncio
from concurrent.futures import Executor
from typing import Optional

from ..bands import PolarizationGeometry
from ..rate import RateInputs, SpectralCurve, assemble_curve, sweep_grid, sweep_point


async def spectral_sweep(
    inputs: RateInputs,
    lambda_min: float,
    lambda_max: float,
    steps: int,
    executor: Optional[Executor] = None,
    geom_pol: PolarizationGeometry = PolarizationGeometry.VERTICAL_CIRCULAR_PAIR,
) -> SpectralCurve:
    """Async flavor of `tpeqw.rate.spectral_sweep`

    Every grid point runs in the executor (the loop's default one when None),
    the curve keeps grid order whatever order the points finish in.

    Raises:
        DomainError: if the range leaves the idler without energy
    """
    grid = sweep_grid(inputs, lambda_min, lambda_max, steps)
    loop = asyncio.get_running_loop()
    results = await asyncio.gather(
        *(loop.run_in_executor(executor, sweep_point, inputs, omega_s, omega_i, geom_pol) for _, omega_s, omega_i in grid)
    )
    return assemble_curve(inputs, grid, list(results))
