"""Exact solver, simulator, and live advisor for the Guess Who? bidding game.

Layout:
    game         exact discrete solver (closed form + DP + verification)
    continuous   continuous relaxation, escape/fairness analysis
    strategies   built-in bidding strategies
    simulate     Monte Carlo engine and exact policy evaluation
    rng          counter-based Philox4x32-10 substreams
    cli          `guesswho` command-line entry point
    service      REST advisor (FastAPI)

The simulation kernels exist twice: a compiled Cython extension and a pure
Python reference with identical draw-for-draw behavior.  The compiled one is
used when importable; `guesswho.backend()` reports which is active.
"""

from ._kernel import active_backend as backend, available_backends
from .continuous import (
    ContinuousRegion,
    ContinuousState,
    FairnessResult,
    correction_identity,
    decompose,
    equal_pool_advantage,
    escape_probability,
    fair_factor,
    p_infinity,
    p_infinity_exact,
)
from .game import (
    GameState,
    Player,
    Region,
    RegionKind,
    SolveTable,
    bid_value,
    classify,
    closed_form_value,
    optimal_bid,
    solve_dp,
    verify_closed_form,
)
from .simulate import (
    ContinuousReport,
    EscapeReport,
    EstimateReport,
    TrialResult,
    estimate_escape,
    estimate_win_prob,
    evaluate_policy,
    evaluate_policy_table,
    play_discrete,
    simulate_continuous,
)
from .strategies import STRATEGIES, Strategy, get_strategy

__version__ = "0.1.0"

__all__ = [
    "__version__",
    "backend",
    "available_backends",
    "GameState",
    "Player",
    "Region",
    "RegionKind",
    "SolveTable",
    "classify",
    "closed_form_value",
    "optimal_bid",
    "bid_value",
    "solve_dp",
    "verify_closed_form",
    "ContinuousState",
    "ContinuousRegion",
    "FairnessResult",
    "decompose",
    "p_infinity",
    "p_infinity_exact",
    "escape_probability",
    "correction_identity",
    "equal_pool_advantage",
    "fair_factor",
    "Strategy",
    "STRATEGIES",
    "get_strategy",
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
