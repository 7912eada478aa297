"""Bidding strategies for the discrete simulator and the policy evaluator.

A strategy maps the mover's view (n, m) to a bid in [1, n-1].  Randomized
strategies draw only through the engine-supplied `draw` callable so that
every trial stays a pure function of (seed, trial index).  Strategies also
expose their exact bid distribution, which is what the policy evaluator
integrates over; for deterministic strategies that is a point mass.

The `kernel_id` ties a built-in to its compiled-kernel twin.  Custom
strategies (kernel_id None) run on the pure-Python path only.
"""

from __future__ import annotations

from dataclasses import dataclass
from fractions import Fraction
from typing import Callable

from .game import optimal_bid

__all__ = ["Strategy", "STRATEGIES", "get_strategy"]

DrawFn = Callable[[], float]

# compiled-kernel dispatch ids; must match _speedups.pyx
KERNEL_OPTIMAL = 0
KERNEL_HALVING = 1
KERNEL_BOLD = 2
KERNEL_ALWAYS_ONE = 3
KERNEL_UNIFORM = 4


@dataclass(frozen=True)
class Strategy:
    """A bidding rule plus its exact bid distribution.

    Attributes:
        name: registry key, also used in CLI flags and reports.
        rule: (n, m, draw) -> bid with 1 <= bid <= n - 1; must consume draws
            only via `draw` and only when the strategy is randomized.
        kernel_id: compiled dispatch id, or None for pure-Python only.
    """

    name: str
    rule: Callable[[int, int, DrawFn], int]
    kernel_id: int | None = None

    def bid_distribution(self, n: int, m: int) -> tuple[tuple[int, Fraction], ...]:
        """Exact bid weights at (n, m); point mass unless overridden."""
        return ((self.rule(n, m, _refuse_draw), Fraction(1)),)


class _UniformRandomStrategy(Strategy):
    def bid_distribution(self, n: int, m: int) -> tuple[tuple[int, Fraction], ...]:
        w = Fraction(1, n - 1)
        return tuple((bid, w) for bid in range(1, n))


def _refuse_draw() -> float:
    raise RuntimeError("deterministic strategy attempted a random draw")


def _bold_bid(n: int, m: int) -> int:
    # the weeds bid 2^floor(log2(m-1)) played unconditionally, clamped legal
    return min(2 ** ((m - 1).bit_length() - 1), n - 1)


STRATEGIES: dict[str, Strategy] = {
    "optimal": Strategy("optimal", lambda n, m, draw: optimal_bid(n, m), KERNEL_OPTIMAL),
    "halving": Strategy("halving", lambda n, m, draw: n // 2, KERNEL_HALVING),
    "bold": Strategy("bold", lambda n, m, draw: _bold_bid(n, m), KERNEL_BOLD),
    "always-one": Strategy("always-one", lambda n, m, draw: 1, KERNEL_ALWAYS_ONE),
    "uniform-random": _UniformRandomStrategy(
        "uniform-random", lambda n, m, draw: 1 + int(draw() * (n - 1)), KERNEL_UNIFORM
    ),
}


def get_strategy(spec: str | Strategy) -> Strategy:
    """Resolve a strategy name or pass an instance through."""
    if isinstance(spec, Strategy):
        return spec
    try:
        return STRATEGIES[spec]
    except KeyError:
        known = ", ".join(sorted(STRATEGIES))
        raise ValueError(f"unknown strategy {spec!r} (known: {known})") from None
