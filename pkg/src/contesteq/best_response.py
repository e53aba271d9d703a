"""Best-response oracles: closed form, FOC bisection, and brute force.

Against fixed opponents a miner maximizes prize * x(q) - c * q where
x(q) = q**alpha / (q**alpha + A) and A is the opponents' aggregate power
sum_{j != i} q_j**alpha (plain opposition sum R when alpha = 1).

For alpha = 1 the maximizer is max(0, sqrt(prize * R / c) - R). For
alpha > 1 utility is convex then concave in q, with the crossover exactly
at share (alpha - 1) / (2 * alpha); the only interior candidate is the
stationary point on the concave side, which is compared against
abstaining. The grid oracle is an exhaustive scan kept deliberately
independent of both analytic paths.
"""

from __future__ import annotations

import math
from dataclasses import dataclass
from typing import Optional

import numpy as np

from .roots import bisect_monotone

#: both-maximizers reporting threshold on the utility gap
TIE_TOL = 1e-12


class NoBestResponse(ValueError):
    """Raised when aggregate opposition is zero: the utility supremum is
    not attained (any tiny positive investment wins the whole prize)."""


@dataclass(frozen=True)
class BestResponseResult:
    """Maximizer set (singleton, or {0, interior} on a tie), its utility,
    and the interior stationary candidate if one exists."""

    optimal_investments: tuple[float, ...]
    optimal_utility: float
    interior_candidate: Optional[float] = None


def _utility_against(q: float, cost: float, alpha: float,
                     opposition_power: float, prize: float) -> float:
    if q == 0.0:
        return 0.0
    x = q**alpha / (q**alpha + opposition_power)
    return prize * x - cost * q


def best_response_proportional(
    cost: float, opposition: float, prize: float = 1.0
) -> BestResponseResult:
    """Closed-form best response in the proportional model.

    opposition is R = sum of the other miners' investments; it must be
    positive. The maximizer max(0, sqrt(prize*R/c) - R) hits 0 exactly when
    R >= prize / c.
    """
    if cost <= 0 or prize <= 0:
        raise ValueError("cost and prize must be positive")
    if opposition < 0:
        raise ValueError("opposition must be >= 0")
    if opposition == 0.0:
        raise NoBestResponse("zero opposition: no best response exists")
    candidate = math.sqrt(prize * opposition / cost) - opposition
    if candidate <= 0.0:
        return BestResponseResult((0.0,), 0.0, None)
    u = _utility_against(candidate, cost, 1.0, opposition, prize)
    if u <= TIE_TOL:
        # the interior optimum only touches 0 utility when it is itself 0
        return BestResponseResult((0.0, candidate), max(u, 0.0), candidate)
    return BestResponseResult((candidate,), u, candidate)


def best_response_eos(
    cost: float, alpha: float, opposition_power: float, prize: float = 1.0
) -> BestResponseResult:
    """Best response under economies of scale (alpha > 1).

    Finds the stationary point with share >= (alpha-1)/(2*alpha), where
    utility is strictly concave so marginal utility decreases and bisection
    applies; returns it, abstention, or both when their utilities tie
    within 1e-12. No stationary point on that branch means abstain.
    """
    if alpha <= 1:
        raise ValueError("use best_response_proportional for alpha = 1")
    if cost <= 0 or prize <= 0:
        raise ValueError("cost and prize must be positive")
    if opposition_power < 0:
        raise ValueError("opposition power must be >= 0")
    if opposition_power == 0.0:
        raise NoBestResponse("zero opposition: no best response exists")
    a = opposition_power

    def marg(q: float) -> float:
        x = q**alpha / (q**alpha + a)
        return prize * alpha * x * (1.0 - x) / q - cost

    r = (alpha - 1.0) / (2.0 * alpha)
    q_lo = (a * r / (1.0 - r)) ** (1.0 / alpha)  # share exactly r
    if marg(q_lo) <= 0.0:
        return BestResponseResult((0.0,), 0.0, None)
    q_hi = max(prize / cost, 2.0 * q_lo)
    while marg(q_hi) > 0.0:  # alpha > 2 can push the root past prize/cost
        q_hi *= 2.0
    res = bisect_monotone(marg, q_lo, q_hi, f_tol=1e-13,
                          x_tol=1e-15 * q_hi, max_iter=200)
    q_star = res.root
    u_star = _utility_against(q_star, cost, alpha, a, prize)
    if u_star > TIE_TOL:
        return BestResponseResult((q_star,), u_star, q_star)
    if u_star >= -TIE_TOL:
        return BestResponseResult((0.0, q_star), max(u_star, 0.0), q_star)
    return BestResponseResult((0.0,), 0.0, q_star)


def grid_oracle(
    cost: float,
    alpha: float,
    opposition_power: float,
    grid_step: Optional[float] = None,
    prize: float = 1.0,
) -> BestResponseResult:
    """Exhaustive utility scan over q in [0, prize/cost].

    Verification-only brute force: never consults the analytic formulas.
    Default step is 1e-6 scaled by the domain width prize/cost. Resolution
    of the returned argmax is one grid step. Unlike the analytic oracles,
    zero opposition is not an error here: the scan simply reports the
    smallest grid point (the supremum is approached, never attained).
    """
    if cost <= 0 or prize <= 0:
        raise ValueError("cost and prize must be positive")
    if opposition_power < 0:
        raise ValueError("opposition power must be >= 0")
    hi = prize / cost
    step = grid_step if grid_step is not None else 1e-6 * hi
    if step <= 0:
        raise ValueError("grid_step must be positive")
    q = np.arange(0.0, hi + step, step)
    power = q**alpha
    if opposition_power == 0.0:
        u = np.full_like(q, prize) - cost * q
        u[0] = 0.0  # all-zero profile pays nothing by convention
    else:
        u = prize * power / (power + opposition_power) - cost * q
    k = int(np.argmax(u))
    return BestResponseResult((float(q[k]),), float(u[k]), None)


def convexity_profile(
    cost: float, alpha: float, opposition_power: float, prize: float = 1.0
) -> float:
    """Locate the convex-to-concave crossover of utility along q.

    Scans the sign of the second difference of utility and bisects on it;
    returns the market share at the sign change, which equals
    (alpha - 1) / (2 * alpha) up to the difference stencil's resolution.
    """
    if alpha <= 1:
        raise ValueError("utility is globally concave at alpha = 1")
    if opposition_power <= 0:
        raise ValueError("opposition power must be positive")
    a = opposition_power

    def share(q: float) -> float:
        return q**alpha / (q**alpha + a)

    def second_difference(q: float) -> float:
        h = 1e-4 * max(q, 1e-6)
        u = _utility_against
        return (
            u(q + h, cost, alpha, a, prize)
            - 2.0 * u(q, cost, alpha, a, prize)
            + u(q - h, cost, alpha, a, prize)
        )

    # bracket the crossover between a clearly convex and a clearly concave q
    lo = (a * 1e-6) ** (1.0 / alpha)  # share ~ 1e-6, convex side
    hi = a ** (1.0 / alpha)  # share 1/2 > (alpha-1)/(2 alpha), concave side
    if second_difference(lo) <= 0 or second_difference(hi) >= 0:
        raise ArithmeticError("convexity crossover not bracketed")
    for _ in range(200):
        mid = 0.5 * (lo + hi)
        if second_difference(mid) > 0.0:
            lo = mid
        else:
            hi = mid
        if hi - lo <= 1e-12 * hi:
            break
    return share(0.5 * (lo + hi))
