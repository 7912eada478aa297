"""Continuous relaxation of the bidding game and fairness analysis.

Pools become positive reals and the draw keeps x*t of a pool x split at
t in (0, 1) with probability t.  Every position (x, y) with x, y > 1 lands in
exactly one dyadic box: writing beta = y / 2^k with beta in (1, 2],

    weeds(k):       x / 2^k > 2          (alpha = x / 2^k)
    upper-hand(k'): x / 2^k <= 2, where 2^k' < x <= 2^(k'+1)

and the limiting value p_inf is scale invariant: doubling both pools changes
nothing.  Values here are floats except where exactness matters
(correction_identity compares against the discrete solver with Fractions).
"""

from __future__ import annotations

import math
from dataclasses import dataclass
from enum import Enum
from fractions import Fraction

from .game import RegionKind, classify, closed_form_value

__all__ = [
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
]

# fair_factor bisection tolerance on the factor c
FAIR_TOL = 1e-12


class ContinuousRegionKind(Enum):
    WEEDS = "weeds"
    UPPER_HAND = "upper-hand"


def _check_real_pool(name: str, v: float) -> float:
    v = float(v)
    if not math.isfinite(v):
        raise ValueError(f"{name} must be finite, got {v}")
    if v <= 1.0:
        raise ValueError(f"{name} must exceed 1, got {v}")
    return v


@dataclass(frozen=True)
class ContinuousState:
    """Mover-perspective continuous position with both pools above 1."""

    x: float
    y: float

    def __post_init__(self) -> None:
        _check_real_pool("x", self.x)
        _check_real_pool("y", self.y)


@dataclass(frozen=True)
class ContinuousRegion:
    """Dyadic decomposition of a continuous position.

    alpha = x / 2^level and beta = y / 2^level are the scale-free
    coordinates: in the weeds alpha in (2, inf) and beta in (1, 2]; with the
    upper hand alpha in (1, 2] and beta in (1, inf).
    """

    kind: ContinuousRegionKind
    level: int
    alpha: float
    beta: float


def _level_of(v: float) -> int:
    """The unique k with v / 2^k in (1, 2], for v > 0."""
    frac, exp = math.frexp(v)  # v = frac * 2^exp, frac in [0.5, 1)
    return exp - 1 if frac > 0.5 else exp - 2


def decompose(x: float, y: float) -> ContinuousRegion:
    """Locate (x, y) in the dyadic region structure.

    Args:
        x: mover's pool, > 1.
        y: opponent's pool, > 1.

    Returns:
        The unique region: weeds at the level set by y, or upper hand at the
        level set by x.  Divisions by 2^k are exact in binary floating point,
        so boundary inputs that are representable stay exact.
    """
    x = _check_real_pool("x", x)
    y = _check_real_pool("y", y)
    ky = _level_of(y)
    if x > math.ldexp(2.0, ky):  # x / 2^ky > 2
        return ContinuousRegion(
            ContinuousRegionKind.WEEDS, ky, math.ldexp(x, -ky), math.ldexp(y, -ky)
        )
    kx = _level_of(x)
    return ContinuousRegion(
        ContinuousRegionKind.UPPER_HAND, kx, math.ldexp(x, -kx), math.ldexp(y, -kx)
    )


def p_infinity(x: float, y: float) -> float:
    """Limiting optimal win probability for the mover at (x, y), x, y > 1.

    In the weeds at level k:    2^(k+1)/x - (2/3) 2^(2k+1)/(xy)
    With the upper hand:        1 - 2^k/y + (2/3) 2^(2k)/(xy)

    Scale invariant: p_infinity(2^j x, 2^j y) == p_infinity(x, y) exactly,
    because the decomposition shifts levels without touching alpha or beta.
    """
    region = decompose(x, y)
    a, b = region.alpha, region.beta
    if region.kind is ContinuousRegionKind.WEEDS:
        # 2/alpha - (2/3) * 2 / (alpha * beta), written scale-free
        return 2.0 / a - (4.0 / 3.0) / (a * b)
    return 1.0 - 1.0 / b + (2.0 / 3.0) / (a * b)


def p_infinity_exact(n: int, m: int) -> Fraction:
    """p_infinity at an integer lattice point, as an exact rational.

    The discrete and continuous region structures coincide on the lattice
    (classify and decompose pick the same branch and level for n, m >= 2), so
    this evaluates the same branch formulas with Fractions.
    """
    region = classify(n, m)
    if region.kind not in (RegionKind.WEEDS, RegionKind.UPPER_HAND):
        raise ValueError(f"p_infinity_exact needs n, m >= 2, got ({n}, {m})")
    k = region.level
    assert k is not None
    if region.kind is RegionKind.WEEDS:
        return Fraction(2 ** (k + 1), n) - Fraction(2 * 2 ** (2 * k + 1), 3 * n * m)
    return 1 - Fraction(2 ** k, m) + Fraction(2 * 2 ** (2 * k), 3 * n * m)


def escape_probability(alpha: float) -> float:
    """Probability that a player trapped in the weeds at alpha ever escapes.

    The trapped player's successive positions have alpha_{j+1} = 2(alpha_j - 1);
    summing the per-attempt success masses telescopes to exactly 2/alpha.

    Args:
        alpha: scale-free weeds coordinate, > 2.
    """
    alpha = float(alpha)
    if not math.isfinite(alpha) or alpha <= 2.0:
        raise ValueError(f"escape_probability needs alpha > 2, got {alpha}")
    return 2.0 / alpha

def correction_identity(n: int, m: int) -> Fraction:
    """Exact discrete-minus-continuous gap at a lattice point.

    Returns p*(n, m) - p_infinity(n, m) and asserts it equals -2/(3nm) in the
    weeds and +4/(3nm) with the upper hand.  Raises AssertionError if the
    identity ever fails (it is checked, not assumed).
    """
    region = classify(n, m)
    if region.kind not in (RegionKind.WEEDS, RegionKind.UPPER_HAND):
        raise ValueError(f"correction_identity needs n, m >= 2, got ({n}, {m})")
    gap = closed_form_value(n, m) - p_infinity_exact(n, m)
    if region.kind is RegionKind.WEEDS:
        expected = Fraction(-2, 3 * n * m)
    else:
        expected = Fraction(4, 3 * n * m)
    assert gap == expected, f"correction identity failed at ({n}, {m}): {gap} != {expected}"
    return gap


def equal_pool_advantage(alpha: float) -> float:
    """First-mover win probability at equal pools x = y, scale-free in alpha.

    For x = y = 2^k alpha with alpha in (1, 2] the mover has the upper hand
    and p_inf = 1 - 1/alpha + (2/3)/alpha^2.  Ranges over [5/8, 2/3] with the
    minimum at alpha = 4/3; both endpoints evaluate to 2/3.
    """
    alpha = float(alpha)
    if not 1.0 < alpha <= 2.0:
        raise ValueError(f"equal_pool_advantage needs alpha in (1, 2], got {alpha}")
    return 1.0 - 1.0 / alpha + (2.0 / 3.0) / (alpha * alpha)


@dataclass(frozen=True)
class FairnessResult:
    """Handicap factor making a game fair against a pool of size y = 2^k beta."""

    beta: float
    factor: float
    p_at_factor: float
    iterations: int


def fair_factor(beta: float, tol: float = FAIR_TOL) -> FairnessResult:
    """Pool ratio c with p_infinity(c * beta, beta) = 1/2, by bisection.

    The mover's value falls strictly as their own pool grows, so the root in
    c is unique; c always lands in [4/3, 3/2].

    Args:
        beta: opponent's scale-free pool coordinate, in (1, 2].
        tol: absolute tolerance on c (default 1e-12).

    Returns:
        FairnessResult with the bracket collapsed to width <= tol.
    """
    beta = float(beta)
    if not 1.0 < beta <= 2.0:
        raise ValueError(f"fair_factor needs beta in (1, 2], got {beta}")
    y = 2.0 * beta  # keep x = c*y > 1 even as c -> 1 with beta near 1

    def gap(c: float) -> float:
        return p_infinity(c * y, y) - 0.5

    lo, hi = 1.0, 3.0
    glo, ghi = gap(lo), gap(hi)
    if not (glo > 0.0 > ghi):
        raise ArithmeticError(f"fair_factor bracket failed at beta={beta}")
    iterations = 0
    while hi - lo > tol:
        mid = 0.5 * (lo + hi)
        iterations += 1
        if gap(mid) > 0.0:
            lo = mid
        else:
            hi = mid
    c = 0.5 * (lo + hi)
    return FairnessResult(beta=beta, factor=c, p_at_factor=p_infinity(c * y, y),
                          iterations=iterations)
