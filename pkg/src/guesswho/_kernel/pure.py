"""Pure-Python simulation kernels.

These are the reference implementations: the compiled kernels in
guesswho._speedups reproduce the exact same draw discipline (one Philox
substream per trial, bid draw before transition draw, one draw per weeds
turn, none on an upper-hand turn), so both backends return identical counts
for identical (seed, trial range) inputs.  Comparisons are written with the
same floating-point expressions in both backends on purpose.
"""

from __future__ import annotations

from ..rng import DOMAIN_CONTINUOUS, DOMAIN_DISCRETE, DOMAIN_ESCAPE, TrialStream
from ..strategies import Strategy

BACKEND = "pure"


def play_trial(n: int, m: int, strat_a: Strategy, strat_b: Strategy,
               stream: TrialStream) -> tuple[int, int]:
    """One discrete game; returns (winner index, rounds). Player 0 moves first."""
    pools = [n, m]
    strats = (strat_a, strat_b)
    mover = 0
    rounds = 0
    while True:
        p = pools[mover]
        bid = strats[mover].rule(p, pools[1 - mover], stream.uniform)
        if not 1 <= bid <= p - 1:
            raise ValueError(
                f"strategy {strats[mover].name!r} bid {bid} out of [1, {p - 1}] at {tuple(pools)}"
            )
        u = stream.uniform()
        new_pool = bid if u * p < bid else p - bid
        pools[mover] = new_pool
        rounds += 1
        if new_pool == 1:
            return mover, rounds
        mover = 1 - mover


def discrete_batch(seed: int, trial_lo: int, trial_hi: int, n: int, m: int,
                   strat_a: Strategy, strat_b: Strategy) -> tuple[int, int]:
    """Trials [trial_lo, trial_hi); returns (player-0 wins, max rounds seen)."""
    wins = 0
    max_rounds = 0
    for trial in range(trial_lo, trial_hi):
        winner, rounds = play_trial(n, m, strat_a, strat_b,
                                    TrialStream(seed, trial, DOMAIN_DISCRETE))
        if winner == 0:
            wins += 1
        if rounds > max_rounds:
            max_rounds = rounds
    return wins, max_rounds


def continuous_batch(seed: int, trial_lo: int, trial_hi: int, in_weeds: bool,
                     alpha: float, beta: float, epsilon: float,
                     horizon: int) -> tuple[int, int, int]:
    """Continuous trials in scale-free coordinates.

    The state is the mover's (alpha, beta) pair with the dyadic level dropped
    (the dynamics never need it): a weeds mover escapes with probability
    1/alpha to leave the opponent in the weeds at (2 beta, 2), or fails and
    leaves the opponent holding the upper hand at (beta, alpha - 1); an
    upper-hand mover halves, leaving the opponent in the weeds at
    (2 beta, alpha).  A trial is classified the moment the weeds mover's
    remaining escape mass 2/alpha drops below epsilon: that mover is the
    loser.  Trials still unclassified after `horizon` turns count undecided.

    Returns (player-0 wins, player-0 losses, undecided).
    """
    wins = 0
    losses = 0
    undecided = 0
    for trial in range(trial_lo, trial_hi):
        stream = TrialStream(seed, trial, DOMAIN_CONTINUOUS)
        weeds, a, b = in_weeds, alpha, beta
        mover = 0
        decided = False
        for _ in range(horizon):
            if weeds:
                if 2.0 / a < epsilon:
                    if mover == 0:
                        losses += 1
                    else:
                        wins += 1
                    decided = True
                    break
                if stream.uniform() * a < 1.0:
                    weeds, a, b = True, 2.0 * b, 2.0
                else:
                    weeds, a, b = False, b, a - 1.0
            else:
                weeds, a, b = True, 2.0 * b, a
            mover = 1 - mover
        if not decided:
            undecided += 1
    return wins, losses, undecided


def escape_batch(seed: int, trial_lo: int, trial_hi: int, alpha: float,
                 epsilon: float, max_attempts: int) -> tuple[int, int]:
    """Count trials in which the trapped player ever escapes the weeds.

    A trial ends in failure when the remaining escape mass 2/alpha falls
    below epsilon; attempts follow alpha <- 2(alpha - 1).

    Returns (escapes, undecided), undecided being attempt-cap exhaustion.
    """
    escapes = 0
    undecided = 0
    for trial in range(trial_lo, trial_hi):
        stream = TrialStream(seed, trial, DOMAIN_ESCAPE)
        a = alpha
        for _ in range(max_attempts):
            if 2.0 / a < epsilon:
                break
            if stream.uniform() * a < 1.0:
                escapes += 1
                break
            a = 2.0 * (a - 1.0)
        else:
            undecided += 1
    return escapes, undecided
