"""
CSV and JSON artifacts written by the command line.

Every file is written to a temporary sibling first and moved into place, so a
reader never sees a half written artifact. CSV files use ',' separators, '.'
decimals, LF line endings and full precision scientific notation.
"""

import os
import tempfile
from pathlib import Path
from typing import Callable, IO, Optional, Union

import numpy as np

from .events import EventTrace
from .logging import log
from .rate import SpectralCurve
from .schemas import ResultDocument

CURVE_HEADER = 'lambda_s_nm,lambda_i_nm,rate_per_s'
EVENTS_HEADER = 't_s,arm_tag'
FLOAT_FORMAT = '%.17e'

PathLike = Union[str, Path]


def write_atomic(path: PathLike, write: Callable[[IO[str]], None]) -> Path:
    """Writes through `write` into a temp file next to `path`, then renames it over `path`"""
    path = Path(path)
    path.parent.mkdir(parents=True, exist_ok=True)
    fd, tmp = tempfile.mkstemp(prefix=f'.{path.name}.', dir=path.parent)
    try:
        with os.fdopen(fd, 'w', encoding='utf-8', newline='') as fh:
            write(fh)
        os.replace(tmp, path)
    except BaseException:
        Path(tmp).unlink(missing_ok=True)
        raise
    log.debug(f'Wrote {path}')
    return path


def write_curve_csv(curve: SpectralCurve, path: PathLike) -> Path:
    data = np.column_stack([curve.lambda_s, curve.lambda_i, curve.rates])
    return write_atomic(
        path,
        lambda fh: np.savetxt(fh, data, fmt=FLOAT_FORMAT, delimiter=',', header=CURVE_HEADER, comments='', newline='\n'),
    )


def read_curve_csv(path: PathLike) -> np.ndarray:
    """Rows of (λ_s, λ_i, rate) as written by `write_curve_csv`"""
    return np.loadtxt(path, delimiter=',', skiprows=1, ndmin=2)


def write_events_csv(trace: Optional[EventTrace], path: PathLike) -> Path:
    """Event rows as (t, arm tag), header only when there is no trace"""
    if trace is None:
        data = np.empty((0, 2))
    else:
        data = np.column_stack([trace.timestamps, trace.arm_tags.astype(np.float64)])
    return write_atomic(
        path,
        lambda fh: np.savetxt(
            fh, data, fmt=[FLOAT_FORMAT, '%d'], delimiter=',', header=EVENTS_HEADER, comments='', newline='\n'
        ),
    )


def read_events_csv(path: PathLike) -> np.ndarray:
    return np.loadtxt(path, delimiter=',', skiprows=1, ndmin=2)


def write_document(document: ResultDocument, path: PathLike) -> Path:
    return write_atomic(path, lambda fh: fh.write(document.to_json() + '\n'))
