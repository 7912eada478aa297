"""Monte Carlo engine and exact policy evaluation.

Estimates are reproducible by construction: every trial draws from its own
counter-based substream keyed by (seed, trial index), so results depend only
on (configuration, seed) and never on the worker count or chunking.  Reports
carry the plug-in standard error sqrt(p(1-p)/trials).

evaluate_policy is the exact counterpart: it prices a fixed bidding policy
for the first player against the closed-form optimal opponent by the same
stage-ordered recursion the solver uses, with the maximization replaced by
the policy's bid distribution.  Optimality of the opponent caps the result
at p*(n, m) for every policy.
"""

from __future__ import annotations

import math
from concurrent.futures import ThreadPoolExecutor
from dataclasses import dataclass
from fractions import Fraction

from . import _kernel
from .continuous import ContinuousRegionKind, decompose
from .game import GameState, Player, optimal_bid
from .rng import TrialStream
from .strategies import Strategy, get_strategy

__all__ = [
    "TrialResult",
    "EstimateReport",
    "ContinuousReport",
    "EscapeReport",
    "play_discrete",
    "estimate_win_prob",
    "simulate_continuous",
    "estimate_escape",
    "evaluate_policy",
    "evaluate_policy_table",
]

DEFAULT_EPSILON = 1e-9
DEFAULT_HORIZON = 10_000


@dataclass(frozen=True)
class TrialResult:
    """Outcome of one simulated discrete game."""

    winner: Player
    rounds: int
    trajectory: tuple[GameState, ...] | None = None


@dataclass(frozen=True)
class EstimateReport:
    """Monte Carlo estimate of the first mover's win probability."""

    n: int
    m: int
    p1: str
    p2: str
    trials: int
    wins: int
    p_hat: float
    std_err: float
    seed: int
    backend: str

    def to_dict(self) -> dict:
        return {
            "config": {"n": self.n, "m": self.m, "p1": self.p1, "p2": self.p2},
            "seed": self.seed,
            "trials": self.trials,
            "wins": self.wins,
            "p_hat": self.p_hat,
            "std_err": self.std_err,
            "backend": self.backend,
        }


@dataclass(frozen=True)
class ContinuousReport:
    """Monte Carlo classification of continuous games from (x, y)."""

    x: float
    y: float
    epsilon: float
    horizon: int
    trials: int
    wins: int
    losses: int
    undecided: int
    p_hat: float
    std_err: float
    seed: int
    backend: str

    def to_dict(self) -> dict:
        return {
            "config": {"x": self.x, "y": self.y, "epsilon": self.epsilon,
                       "horizon": self.horizon},
            "seed": self.seed,
            "trials": self.trials,
            "wins": self.wins,
            "losses": self.losses,
            "undecided": self.undecided,
            "p_hat": self.p_hat,
            "std_err": self.std_err,
            "backend": self.backend,
        }


@dataclass(frozen=True)
class EscapeReport:
    """Monte Carlo estimate of the weeds escape probability."""

    alpha: float
    epsilon: float
    trials: int
    escapes: int
    undecided: int
    p_hat: float
    std_err: float
    seed: int
    backend: str

    def to_dict(self) -> dict:
        return {
            "config": {"alpha": self.alpha, "epsilon": self.epsilon},
            "seed": self.seed,
            "trials": self.trials,
            "escapes": self.escapes,
            "undecided": self.undecided,
            "p_hat": self.p_hat,
            "std_err": self.std_err,
            "backend": self.backend,
        }


def _std_err(p_hat: float, trials: int) -> float:
    return math.sqrt(p_hat * (1.0 - p_hat) / trials)


def _check_start(n: int, m: int) -> None:
    if not (isinstance(n, int) and isinstance(m, int)):
        raise TypeError(f"pool sizes must be integers, got ({n!r}, {m!r})")
    if n < 2 or m < 2:
        raise ValueError(f"simulation needs a playable start with n, m >= 2, got ({n}, {m})")


def _check_trials(trials: int) -> None:
    if not isinstance(trials, int) or trials < 1:
        raise ValueError(f"trials must be a positive integer, got {trials!r}")


def _chunks(trials: int, workers: int) -> list[tuple[int, int]]:
    size = -(-trials // max(1, workers))  # ceil; per-trial streams make any split equivalent
    return [(lo, min(lo + size, trials)) for lo in range(0, trials, size)]


def _run_chunked(fn, trials: int, workers: int) -> list:
    spans = _chunks(trials, workers)
    if workers <= 1 or len(spans) == 1:
        return [fn(lo, hi) for lo, hi in spans]
    with ThreadPoolExecutor(max_workers=workers) as pool:
        return list(pool.map(lambda span: fn(*span), spans))


def play_discrete(
    n: int,
    m: int,
    p1: str | Strategy = "optimal",
    p2: str | Strategy = "optimal",
    rng: TrialStream | None = None,
    record_trajectory: bool = False,
) -> TrialResult:
    """Play one game from (n, m) with player 1 moving first.

    Args:
        n: first mover's pool, >= 2.
        m: opponent's pool, >= 2.
        p1: strategy (name or instance) for the first mover.
        p2: strategy for the opponent.
        rng: trial substream; defaults to TrialStream(seed=0, trial=0).
        record_trajectory: keep the visited states (start included).

    Returns:
        TrialResult.  Rounds never exceed n + m: each move shrinks the
        mover's pool by at least one.
    """
    _check_start(n, m)
    strats = {Player.P1: get_strategy(p1), Player.P2: get_strategy(p2)}
    stream = rng if rng is not None else TrialStream(0, 0)
    state = GameState(n, m, Player.P1)
    trajectory = [state] if record_trajectory else None
    rounds = 0
    while not state.is_terminal:
        mover = strats[state.to_move]
        bid = mover.rule(state.my_pool, state.opp_pool, stream.uniform)
        hit = stream.uniform() * state.my_pool < bid
        state = state.after_bid(bid, hit)
        rounds += 1
        if trajectory is not None:
            trajectory.append(state)
    assert rounds <= n + m, "round bound violated"
    return TrialResult(
        winner=state.to_move,
        rounds=rounds,
        trajectory=tuple(trajectory) if trajectory is not None else None,
    )


def estimate_win_prob(
    n: int,
    m: int,
    p1: str | Strategy = "optimal",
    p2: str | Strategy = "optimal",
    trials: int = 100_000,
    seed: int = 0,
    workers: int = 1,
) -> EstimateReport:
    """Estimate P(first mover wins) from (n, m) over independent trials.

    Identical (arguments, seed) give identical reports for any worker count.
    """
    _check_start(n, m)
    _check_trials(trials)
    strat_a, strat_b = get_strategy(p1), get_strategy(p2)
    results = _run_chunked(
        lambda lo, hi: _kernel.discrete_batch(seed, lo, hi, n, m, strat_a, strat_b),
        trials, workers,
    )
    wins = sum(r[0] for r in results)
    max_rounds = max(r[1] for r in results)
    if max_rounds > n + m:
        raise AssertionError(f"round bound violated: {max_rounds} > {n + m}")
    p_hat = wins / trials
    return EstimateReport(
        n=n, m=m, p1=strat_a.name, p2=strat_b.name,
        trials=trials, wins=wins, p_hat=p_hat, std_err=_std_err(p_hat, trials),
        seed=seed, backend=_kernel.discrete_backend(strat_a, strat_b),
    )


def _scale_into_domain(x: float, y: float) -> tuple[float, float]:
    """Double both pools until each exceeds 1; exact and value-preserving."""
    x, y = float(x), float(y)
    if not (math.isfinite(x) and math.isfinite(y)) or x <= 0.0 or y <= 0.0:
        raise ValueError(f"pools must be positive finite reals, got ({x}, {y})")
    while x <= 1.0 or y <= 1.0:
        x *= 2.0
        y *= 2.0
        if math.isinf(x) or math.isinf(y):
            raise ValueError(f"pool ratio too extreme to renormalize: ({x}, {y})")
    return x, y


def simulate_continuous(
    x: float,
    y: float,
    trials: int = 100_000,
    seed: int = 0,
    epsilon: float = DEFAULT_EPSILON,
    horizon: int = DEFAULT_HORIZON,
    workers: int = 1,
) -> ContinuousReport:
    """Monte Carlo the continuous game from (x, y), player 1 moving first.

    Trials run in scale-free coordinates, so inputs differing by a common
    power of two generate identical trajectories under one seed.  A trial is
    classified once the trapped mover's remaining escape mass 2/alpha falls
    below `epsilon` (that mover loses; per-trial misclassification odds are
    below epsilon).  Trials unclassified within `horizon` turns are reported
    undecided, never guessed.

    Args:
        x: first mover's pool, any positive real (rescaled into (1, inf)).
        y: opponent's pool, likewise.
        trials: number of independent games.
        seed: 64-bit stream seed.
        epsilon: classification threshold on remaining escape mass.
        horizon: max turns per trial before declaring it undecided.
        workers: thread count; never affects the counts.

    Returns:
        ContinuousReport with wins/losses/undecided for player 1.
    """
    _check_trials(trials)
    if not (0.0 < epsilon < 1.0):
        raise ValueError(f"epsilon must lie in (0, 1), got {epsilon}")
    if horizon < 1:
        raise ValueError(f"horizon must be >= 1, got {horizon}")
    sx, sy = _scale_into_domain(x, y)
    region = decompose(sx, sy)
    in_weeds = region.kind is ContinuousRegionKind.WEEDS
    results = _run_chunked(
        lambda lo, hi: _kernel.continuous_batch(
            seed, lo, hi, in_weeds, region.alpha, region.beta, epsilon, horizon),
        trials, workers,
    )
    wins = sum(r[0] for r in results)
    losses = sum(r[1] for r in results)
    undecided = sum(r[2] for r in results)
    p_hat = wins / trials
    return ContinuousReport(
        x=float(x), y=float(y), epsilon=epsilon, horizon=horizon,
        trials=trials, wins=wins, losses=losses, undecided=undecided,
        p_hat=p_hat, std_err=_std_err(p_hat, trials),
        seed=seed, backend=_kernel.active_backend(),
    )


def estimate_escape(
    alpha: float,
    beta: float | None = None,
    trials: int = 100_000,
    seed: int = 0,
    epsilon: float = DEFAULT_EPSILON,
    workers: int = 1,
) -> EscapeReport:
    """Estimate the probability that a weeds player at alpha ever escapes.

    The failure chain is alpha <- 2(alpha - 1); a trial counts as trapped
    once the remaining escape mass 2/alpha drops below epsilon.  The
    opponent's coordinate never enters the escape event; `beta` is accepted
    (and validated) purely so call sites can pass a full weeds state.
    """
    _check_trials(trials)
    alpha = float(alpha)
    if not math.isfinite(alpha) or alpha <= 2.0:
        raise ValueError(f"escape needs a weeds coordinate alpha > 2, got {alpha}")
    if beta is not None and not 1.0 < float(beta) <= 2.0:
        raise ValueError(f"beta must lie in (1, 2], got {beta}")
    if not (0.0 < epsilon < 1.0):
        raise ValueError(f"epsilon must lie in (0, 1), got {epsilon}")
    results = _run_chunked(
        lambda lo, hi: _kernel.escape_batch(seed, lo, hi, alpha, epsilon, DEFAULT_HORIZON),
        trials, workers,
    )
    escapes = sum(r[0] for r in results)
    undecided = sum(r[1] for r in results)
    p_hat = escapes / trials
    return EscapeReport(
        alpha=alpha, epsilon=epsilon, trials=trials, escapes=escapes,
        undecided=undecided, p_hat=p_hat, std_err=_std_err(p_hat, trials),
        seed=seed, backend=_kernel.active_backend(),
    )


def evaluate_policy_table(policy: str | Strategy, max_sum: int) -> dict[tuple[int, int], Fraction]:
    """Exact value of `policy` against optimal play, for every start.

    Stage-ordered like the solver: two interleaved tables (policy player to
    move / optimal opponent to move) are filled in increasing pool-sum order,
    the policy side taking the exact expectation over its bid distribution
    and the opponent side playing the closed-form optimal bid.

    Args:
        policy: strategy name or instance; must expose exact bid weights.
        max_sum: inclusive bound on n + m, at least 4.

    Returns:
        {(n, m): P(policy player wins | policy player moves first)} for all
        n, m >= 2 with n + m <= max_sum.
    """
    if max_sum < 4:
        raise ValueError(f"max_sum must be >= 4, got {max_sum}")
    strat = get_strategy(policy)
    one, zero = Fraction(1), Fraction(0)
    # mine[(a, b)]: policy player to move holding a; theirs[(a, b)]: opponent
    # to move holding a.  Both store P(that mover's side wins).
    mine: dict[tuple[int, int], Fraction] = {}
    theirs: dict[tuple[int, int], Fraction] = {}
    for side in (mine, theirs):
        for v in range(2, max_sum):
            side[(1, v)] = one
            side[(v, 1)] = zero
    for s in range(4, max_sum + 1):
        for a in range(2, s - 1):
            b = s - a
            total = zero
            for bid, weight in strat.bid_distribution(a, b):
                keep = Fraction(bid, a)
                total += weight * (
                    keep * (1 - theirs[(b, bid)])
                    + (1 - keep) * (1 - theirs[(b, a - bid)])
                )
            mine[(a, b)] = total
            bid = optimal_bid(a, b)
            keep = Fraction(bid, a)
            theirs[(a, b)] = keep * (1 - mine[(b, bid)]) \
                + (1 - keep) * (1 - mine[(b, a - bid)])
    return {
        (a, b): v for (a, b), v in mine.items() if a >= 2 and b >= 2
    }


def evaluate_policy(n: int, m: int, policy: str | Strategy) -> Fraction:
    """Exact win probability of `policy` for the first mover against optimal play.

    The opponent plays the closed-form optimal bid everywhere, which secures
    the game value against every policy, so the result is at most p*(n, m),
    with equality for the optimal policy.  Randomized policies are priced by
    exact expectation over their bid distribution.
    """
    _check_start(n, m)
    return evaluate_policy_table(policy, n + m)[(n, m)]
