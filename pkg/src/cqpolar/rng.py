"""Reproducible per-trial random streams and deterministic trial fan-out.

Trial ``t`` of a run seeded with ``seed`` draws from a Philox generator keyed
by (seed, t).  Philox is counter based, so the stream of a trial does not
depend on which worker runs it or in what order.
"""

from __future__ import annotations

from concurrent.futures import ThreadPoolExecutor

import numpy as np

from .exceptions import ParameterError

_MASK64 = (1 << 64) - 1


def trial_rng(seed: int, trial: int) -> np.random.Generator:
    if seed < 0 or seed > _MASK64 or trial < 0 or trial > _MASK64:
        raise ParameterError("seed and trial index must be unsigned 64-bit integers")
    return np.random.Generator(np.random.Philox(key=(trial << 64) | seed))


def run_trials(fn, n_trials: int, *, threads: int = 1, chunk: int = 256) -> list:
    """[fn(0), fn(1), ...] computed on ``threads`` workers, returned in trial order."""
    if n_trials < 0:
        raise ParameterError("number of trials must be >= 0")
    if threads <= 1 or n_trials <= chunk:
        return [fn(t) for t in range(n_trials)]
    bounds = [(lo, min(lo + chunk, n_trials)) for lo in range(0, n_trials, chunk)]
    with ThreadPoolExecutor(max_workers=threads) as pool:
        parts = pool.map(lambda b: [fn(t) for t in range(*b)], bounds)
        return [r for part in parts for r in part]
