from logging import getLogger
from typing import Any

log = getLogger('tpeqw')


def log_rate(kind: str, rate: float, **context: Any):
    log.debug(f'Rate [{kind}]: {rate:.6e} 1/s - context: {context}')


def log_event(kind: str, **context: Any):
    log.debug(f'Event [{kind}] - context: {context}')
