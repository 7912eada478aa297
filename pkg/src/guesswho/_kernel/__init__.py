"""Kernel backend selection.

The compiled extension (guesswho._speedups) is preferred when importable and
both strategies of a discrete run have compiled twins; everything else runs
on the pure-Python reference kernels.  Setting GUESSWHO_PURE=1 in the
environment forces the pure path, which is how the benchmark and the parity
tests pin each side.
"""

from __future__ import annotations

import os

from . import pure
from ..strategies import Strategy

try:
    from .. import _speedups
except ImportError:  # extension not built; pure fallback
    _speedups = None

__all__ = [
    "available_backends",
    "active_backend",
    "discrete_backend",
    "discrete_batch",
    "continuous_batch",
    "escape_batch",
]


def _forced_pure() -> bool:
    return os.environ.get("GUESSWHO_PURE", "") not in ("", "0")


def available_backends() -> tuple[str, ...]:
    return ("pure",) if _speedups is None else ("pure", "compiled")


def active_backend() -> str:
    """Backend that strategy-independent kernels will use right now."""
    return "pure" if (_speedups is None or _forced_pure()) else "compiled"


def discrete_backend(strat_a: Strategy, strat_b: Strategy) -> str:
    """Backend a discrete run with these strategies will use."""
    if active_backend() == "compiled" and strat_a.kernel_id is not None \
            and strat_b.kernel_id is not None:
        return "compiled"
    return "pure"


def discrete_batch(seed: int, trial_lo: int, trial_hi: int, n: int, m: int,
                   strat_a: Strategy, strat_b: Strategy) -> tuple[int, int]:
    if discrete_backend(strat_a, strat_b) == "compiled":
        return _speedups.discrete_batch(seed, trial_lo, trial_hi, n, m,
                                        strat_a.kernel_id, strat_b.kernel_id)
    return pure.discrete_batch(seed, trial_lo, trial_hi, n, m, strat_a, strat_b)


def continuous_batch(seed: int, trial_lo: int, trial_hi: int, in_weeds: bool,
                     alpha: float, beta: float, epsilon: float,
                     horizon: int) -> tuple[int, int, int]:
    if active_backend() == "compiled":
        return _speedups.continuous_batch(seed, trial_lo, trial_hi, in_weeds,
                                          alpha, beta, epsilon, horizon)
    return pure.continuous_batch(seed, trial_lo, trial_hi, in_weeds,
                                 alpha, beta, epsilon, horizon)


def escape_batch(seed: int, trial_lo: int, trial_hi: int, alpha: float,
                 epsilon: float, max_attempts: int) -> tuple[int, int]:
    if active_backend() == "compiled":
        return _speedups.escape_batch(seed, trial_lo, trial_hi, alpha,
                                      epsilon, max_attempts)
    return pure.escape_batch(seed, trial_lo, trial_hi, alpha, epsilon, max_attempts)
