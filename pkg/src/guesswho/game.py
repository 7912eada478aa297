"""Exact solver for the two-player Guess Who? bidding game.

A position is written from the mover's side: the mover holds a candidate pool
of size n, the opponent of size m.  The mover partitions the pool with a bid
b (1 <= b <= n-1); a fair draw keeps the bid side with probability b/n and the
remainder otherwise; reaching a pool of exactly 1 wins on the spot, otherwise
the turn passes.  p*(n, m) denotes the mover's win probability under optimal
play by both sides.

Everything in this module is exact rational arithmetic.  The solver works on
the integer-normalized table P(n, m) = 3nm * p*(n, m): the terminal rows are
integral and the recurrence

    P(n, m) = 3nm - min_b [ P(m, b) + P(m, n - b) ]

keeps them integral, so dynamic programming never touches a Fraction until a
value is read out.
"""

from __future__ import annotations

import csv
import json
from dataclasses import dataclass, field
from enum import Enum
from fractions import Fraction
from typing import Callable, Iterator

__all__ = [
    "Player",
    "GameState",
    "RegionKind",
    "Region",
    "SolveTable",
    "VerifyReport",
    "classify",
    "closed_form_value",
    "optimal_bid",
    "bid_value",
    "solve_dp",
    "verify_closed_form",
]


class Player(Enum):
    """Identity of the player to move."""

    P1 = "P1"
    P2 = "P2"

    @property
    def other(self) -> "Player":
        return Player.P2 if self is Player.P1 else Player.P1


def _check_pools(n: int, m: int) -> None:
    if not (isinstance(n, int) and isinstance(m, int)):
        raise TypeError(f"pool sizes must be integers, got ({n!r}, {m!r})")
    if n < 1 or m < 1:
        raise ValueError(f"pool sizes must be >= 1, got ({n}, {m})")
    if n == 1 and m == 1:
        raise ValueError("state (1, 1) is unreachable: the game ends when either pool hits 1")


@dataclass(frozen=True)
class GameState:
    """A game position normalized to the mover's perspective.

    Attributes:
        my_pool: candidate pool size of the player to move.
        opp_pool: candidate pool size of the waiting player.
        to_move: which player the mover is.
    """

    my_pool: int
    opp_pool: int
    to_move: Player = Player.P1

    def __post_init__(self) -> None:
        _check_pools(self.my_pool, self.opp_pool)

    @property
    def is_terminal(self) -> bool:
        return self.my_pool == 1 or self.opp_pool == 1

    def after_bid(self, bid: int, hit: bool) -> "GameState":
        """State after the mover bids and the draw resolves.

        Args:
            bid: the mover's bid, in [1, my_pool - 1].
            hit: True if the drawn face lies in the bid side.

        Returns:
            The next state.  If the mover's pool reached 1 the state stays on
            the winner (terminal); otherwise the perspective flips to the
            other player.
        """
        if self.is_terminal:
            raise ValueError("cannot move in a terminal state")
        if not 1 <= bid <= self.my_pool - 1:
            raise ValueError(f"bid {bid} out of range [1, {self.my_pool - 1}]")
        new_pool = bid if hit else self.my_pool - bid
        if new_pool == 1:
            return GameState(1, self.opp_pool, self.to_move)
        return GameState(self.opp_pool, new_pool, self.to_move.other)


class RegionKind(Enum):
    WEEDS = "weeds"
    UPPER_HAND = "upper-hand"
    TERMINAL_WIN = "terminal-win"
    TERMINAL_LOSS = "terminal-loss"


@dataclass(frozen=True)
class Region:
    """Classification of a position, with its dyadic level when non-terminal."""

    kind: RegionKind
    level: int | None = None


def classify(n: int, m: int) -> Region:
    """Classify the mover's position.

    The mover is "in the weeds" at level k when 2^(k+1) < n and
    2^k < m <= 2^(k+1); the mover "has the upper hand" at level k when
    2^k < n <= 2^(k+1) and 2^k < m.  Exactly one of the two holds for every
    n, m >= 2.  Levels come from integer bit lengths; floating-point log2 is
    never consulted, so power-of-two boundaries cannot misclassify.
    """
    _check_pools(n, m)
    if n == 1:
        return Region(RegionKind.TERMINAL_WIN)
    if m == 1:
        return Region(RegionKind.TERMINAL_LOSS)
    k = (m - 1).bit_length() - 1  # unique k with 2^k < m <= 2^(k+1)
    if n > 2 ** (k + 1):
        return Region(RegionKind.WEEDS, k)
    return Region(RegionKind.UPPER_HAND, (n - 1).bit_length() - 1)


def closed_form_value(n: int, m: int) -> Fraction:
    """Exact optimal win probability p*(n, m) for the mover, in closed form.

    Terminals return 0 or 1.  Otherwise the value depends on the region:
    in the weeds at level k,

        p* = 2^(k+1)/n - (2/3) (2^(2k+1) + 1) / (nm)

    and with the upper hand at level k,

        p* = 1 - 2^k/m + (2/3) (2^(2k) + 2) / (nm).
    """
    region = classify(n, m)
    if region.kind is RegionKind.TERMINAL_WIN:
        return Fraction(1)
    if region.kind is RegionKind.TERMINAL_LOSS:
        return Fraction(0)
    k = region.level
    assert k is not None
    if region.kind is RegionKind.WEEDS:
        return Fraction(2 ** (k + 1), n) - Fraction(2 * (2 ** (2 * k + 1) + 1), 3 * n * m)
    return 1 - Fraction(2 ** k, m) + Fraction(2 * (2 ** (2 * k) + 2), 3 * n * m)


def optimal_bid(n: int, m: int) -> int:
    """An optimal bid for the mover: 2^k in the weeds, floor(n/2) otherwise.

    Requires a non-terminal position (n, m >= 2).  The returned bid is a
    member of the recurrence's maximizer set; ties with other maximizers are
    possible and the full set is available from a solved table.
    """
    region = classify(n, m)
    if region.kind is RegionKind.WEEDS:
        return 2 ** region.level
    if region.kind is RegionKind.UPPER_HAND:
        return n // 2
    raise ValueError(f"no bid from terminal state ({n}, {m})")


def bid_value(
    n: int,
    m: int,
    bid: int,
    value_fn: Callable[[int, int], Fraction] = closed_form_value,
) -> Fraction:
    """Win probability for the mover after committing to `bid` at (n, m).

    Args:
        n: mover's pool (>= 2).
        m: opponent's pool (>= 2).
        bid: partition size, 1 <= bid <= n - 1.
        value_fn: continuation oracle giving the next mover's optimal value;
            defaults to the closed form.  Pass a SolveTable's `.value` to
            price continuations out of a solved table instead.

    Returns:
        1 - (b/n) p*(m, b) - ((n-b)/n) p*(m, n-b), exactly.
    """
    _check_pools(n, m)
    if n == 1 or m == 1:
        raise ValueError(f"bid_value needs a non-terminal state, got ({n}, {m})")
    if not 1 <= bid <= n - 1:
        raise ValueError(f"bid {bid} out of range [1, {n - 1}]")
    keep = Fraction(bid, n)
    return 1 - keep * value_fn(m, bid) - (1 - keep) * value_fn(m, n - bid)


@dataclass(frozen=True)
class SolveTable:
    """Solved values and maximizer sets for every state with n + m <= max_sum.

    The table stores the integer normalization P(n, m) = 3nm * p*(n, m);
    `value` reduces on read.  Maximizer sets are stored in full, sorted
    ascending, so ties stay visible ((7, 4) -> (2, 5), for instance).
    """

    max_sum: int
    _p3nm: dict[tuple[int, int], int] = field(repr=False)
    _bids: dict[tuple[int, int], tuple[int, ...]] = field(repr=False)

    def __contains__(self, state: tuple[int, int]) -> bool:
        return state in self._p3nm

    def states(self) -> Iterator[tuple[int, int]]:
        """All stored states, ordered by (n, m)."""
        return iter(sorted(self._p3nm))

    def value(self, n: int, m: int) -> Fraction:
        """Exact p*(n, m) out of the table."""
        return Fraction(self._p3nm[(n, m)], 3 * n * m)

    def best_bids(self, n: int, m: int) -> tuple[int, ...]:
        """The full maximizer set at (n, m), ascending; empty for terminals."""
        return self._bids[(n, m)]

    def best_bid(self, n: int, m: int) -> int:
        """Smallest maximizer at (n, m)."""
        bids = self._bids[(n, m)]
        if not bids:
            raise ValueError(f"no bid from terminal state ({n}, {m})")
        return bids[0]

    def rows(self) -> Iterator[tuple[int, int, Fraction, tuple[int, ...]]]:
        for n, m in self.states():
            yield n, m, self.value(n, m), self._bids[(n, m)]

    def to_csv(self, path: str) -> None:
        """Write `n,m,p_num,p_den,bids` rows, bids |-separated, ordered by (n, m)."""
        with open(path, "w", newline="") as fh:
            writer = csv.writer(fh, lineterminator="\n")
            writer.writerow(["n", "m", "p_num", "p_den", "bids"])
            for n, m, p, bids in self.rows():
                writer.writerow([n, m, p.numerator, p.denominator, "|".join(map(str, bids))])

    def to_json(self, path: str) -> None:
        doc = {
            "max_sum": self.max_sum,
            "states": [
                {
                    "n": n,
                    "m": m,
                    "p": {"num": p.numerator, "den": p.denominator},
                    "bids": list(bids),
                }
                for n, m, p, bids in self.rows()
            ],
        }
        with open(path, "w") as fh:
            json.dump(doc, fh, indent=2)
            fh.write("\n")


def solve_dp(max_sum: int) -> SolveTable:
    """Solve every state with n + m <= max_sum by stage-ordered dynamic programming.

    States are filled in increasing order of n + m; each state consults only
    opponent states with a strictly smaller sum, so a single pass suffices.

    Args:
        max_sum: inclusive bound on n + m, at least 3.

    Returns:
        A SolveTable with exact values and full maximizer sets.
    """
    if max_sum < 3:
        raise ValueError(f"max_sum must be >= 3, got {max_sum}")
    p3nm: dict[tuple[int, int], int] = {}
    bids: dict[tuple[int, int], tuple[int, ...]] = {}
    for m in range(2, max_sum):
        p3nm[(1, m)] = 3 * m  # p* = 1: the mover already won
        bids[(1, m)] = ()
    for n in range(2, max_sum):
        p3nm[(n, 1)] = 0  # p* = 0: the opponent already won
        bids[(n, 1)] = ()
    for s in range(4, max_sum + 1):
        for n in range(2, s - 1):
            m = s - n
            best = None
            arg: list[int] = []
            for b in range(1, n):
                cost = p3nm[(m, b)] + p3nm[(m, n - b)]
                if best is None or cost < best:
                    best, arg = cost, [b]
                elif cost == best:
                    arg.append(b)
            assert best is not None
            p3nm[(n, m)] = 3 * n * m - best
            bids[(n, m)] = tuple(arg)
    return SolveTable(max_sum=max_sum, _p3nm=p3nm, _bids=bids)


@dataclass
class VerifyReport:
    """Outcome of checking the closed form against the DP ground truth."""

    max_sum: int
    states_checked: int
    value_mismatches: list[tuple[int, int, Fraction, Fraction]] = field(default_factory=list)
    bid_misses: list[tuple[int, int, int, tuple[int, ...]]] = field(default_factory=list)
    deficit_violations: list[tuple[int, int, int, Fraction]] = field(default_factory=list)

    @property
    def ok(self) -> bool:
        return not (self.value_mismatches or self.bid_misses or self.deficit_violations)

    def summary(self) -> str:
        lines = [
            f"states checked (n + m <= {self.max_sum}): {self.states_checked}",
            f"closed form vs DP mismatches: {len(self.value_mismatches)}",
            f"closed-form bid outside maximizer set: {len(self.bid_misses)}",
            f"deep-split deficit violations: {len(self.deficit_violations)}",
        ]
        return "\n".join(lines)


def verify_closed_form(max_sum: int, table: SolveTable | None = None) -> VerifyReport:
    """Check the closed form, the closed-form bid, and the deep-split deficit.

    Three exact checks over every non-terminal state with n + m <= max_sum:

    1. closed_form_value(n, m) equals the DP value;
    2. optimal_bid(n, m) lies in the DP maximizer set;
    3. in the weeds at level k, every bid that leaves both sides of the split
       above 2^k is worth exactly p*(n, m) - 2/(nm).

    Args:
        max_sum: inclusive bound on n + m.
        table: optionally a pre-solved table (must cover max_sum).

    Returns:
        A VerifyReport; `report.ok` is True iff everything agrees.
    """
    if table is None:
        table = solve_dp(max_sum)
    elif table.max_sum < max_sum:
        raise ValueError(f"table covers n + m <= {table.max_sum} < {max_sum}")
    report = VerifyReport(max_sum=max_sum, states_checked=0)
    for s in range(4, max_sum + 1):
        for n in range(2, s - 1):
            m = s - n
            report.states_checked += 1
            dp = table.value(n, m)
            cf = closed_form_value(n, m)
            if cf != dp:
                report.value_mismatches.append((n, m, cf, dp))
            b = optimal_bid(n, m)
            maximizers = table.best_bids(n, m)
            if b not in maximizers:
                report.bid_misses.append((n, m, b, maximizers))
            region = classify(n, m)
            if region.kind is RegionKind.WEEDS:
                k = region.level
                assert k is not None
                expected = dp - Fraction(2, n * m)
                for bad in range(2 ** k + 1, n - 2 ** k):
                    # both b and n - b exceed 2^k: worth exactly 2/(nm) less
                    if bid_value(n, m, bad, table.value) != expected:
                        report.deficit_violations.append(
                            (n, m, bad, bid_value(n, m, bad, table.value))
                        )
    return report
