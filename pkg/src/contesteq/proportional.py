"""Closed-form equilibrium solver for the proportional (alpha = 1) model.

The participation threshold c* is the unique root of

    X(c) = sum_i max(1 - c_i / c, 0) = 1,

and the unique equilibrium is q_i = (1/c*) * max(1 - c_i/c*, 0) with market
share x_i = max(1 - c_i/c*, 0): miners invest iff their cost is below c*,
and total investment is 1/c*.

A prize V != 1 is handled by solving the rescaled game with effective costs
c_i / V (utilities scale by V, shares are unchanged, investments scale by
V); c_star and total_investment are reported in rescaled units so that
total_investment == 1 / c_star always holds.

The participant-count prefix scan is the primary solver; bisection on X is
the shipped cross-check oracle.
"""

from __future__ import annotations

from dataclasses import dataclass

import numpy as np

from .core import ContestSpec, ProfileLike, as_investments, shares
from .roots import bisect_monotone


@dataclass(frozen=True)
class ProportionalEquilibrium:
    """Unique equilibrium of the proportional model, in caller cost order.

    c_star and total_investment refer to the prize-rescaled game (effective
    costs c_i / prize); shares are scale-free and utilities follow from
    prize * x_i - c_i * q_i.
    """

    c_star: float
    investments: tuple[float, ...]
    shares: tuple[float, ...]
    participants: tuple[int, ...]
    total_investment: float
    method: str
    iterations: int
    residual: float


def threshold_function(costs, c: float) -> float:
    """X(c) = sum_i max(1 - c_i/c, 0).

    Continuous and non-decreasing in c, strictly increasing on [min cost,
    inf), so X(c) = 1 pins a unique threshold.
    """
    if c <= 0:
        raise ValueError("threshold argument must be positive")
    cost = np.asarray(costs, dtype=float)
    return float(np.maximum(1.0 - cost / c, 0.0).sum())


def solve_threshold_bisection(costs) -> tuple[float, int]:
    """Cross-check oracle: bisect X on [c_2, n * c_max].

    X(c_2) = 1 - c_1/c_2 < 1 and X(n * c_max) >= n - 1 >= 1 bracket the
    root. Runs to bracket width 1e-14 * c_max (200 iteration cap). Returns
    (c_star, iterations).
    """
    cost = np.sort(np.asarray(costs, dtype=float))
    if cost.size < 2:
        raise ValueError("need at least 2 miners")
    c_max = float(cost[-1])
    lo, hi = float(cost[1]), cost.size * c_max
    res = bisect_monotone(
        lambda c: threshold_function(cost, c), lo, hi,
        target=1.0, f_tol=0.0, x_tol=1e-14 * c_max, max_iter=200,
    )
    return res.root, res.iterations


def _prefix_scan(sorted_costs: np.ndarray) -> float | None:
    """Closed-form c*: for the k cheapest participating, X(c) = 1 gives
    c = (sum of their costs) / (k - 1), valid iff c_k < c <= c_{k+1}.
    Tied costs never split a valid prefix, so ties need no special casing.
    Returns None if rounding leaves no candidate valid.
    """
    prefix = np.cumsum(sorted_costs)
    n = sorted_costs.size
    for k in range(2, n + 1):
        candidate = prefix[k - 1] / (k - 1)
        upper = sorted_costs[k] if k < n else np.inf
        if sorted_costs[k - 1] < candidate <= upper:
            return float(candidate)
    return None


def solve_threshold(costs) -> float:
    """Unique c* with X(c*) = 1; always exceeds the second-lowest cost."""
    c_star, _, _ = _solve_threshold_detailed(np.asarray(costs, dtype=float))
    return c_star


def _solve_threshold_detailed(cost: np.ndarray) -> tuple[float, str, int]:
    if cost.size < 2:
        raise ValueError("need at least 2 miners")
    if not np.all(np.isfinite(cost)) or np.any(cost <= 0):
        raise ValueError("all costs must be finite and > 0")
    c_star = _prefix_scan(np.sort(cost))
    if c_star is not None:
        return c_star, "prefix-scan", 0
    c_star, iters = solve_threshold_bisection(cost)  # numerically ambiguous tie
    return c_star, "bisection", iters


def solve_equilibrium(spec: ContestSpec) -> ProportionalEquilibrium:
    """The unique equilibrium of a proportional-model spec (alpha = 1)."""
    if spec.alpha != 1.0:
        raise ValueError(
            "proportional solver requires alpha = 1; use the eos module"
        )
    effective = np.asarray(spec.costs) / spec.prize
    c_star, method, iters = _solve_threshold_detailed(effective)
    x = np.maximum(1.0 - effective / c_star, 0.0)
    q = x / c_star
    participants = tuple(int(i) for i in np.flatnonzero(x > 0.0))
    return ProportionalEquilibrium(
        c_star=c_star,
        investments=tuple(q.tolist()),
        shares=tuple(x.tolist()),
        participants=participants,
        total_investment=1.0 / c_star,
        method=method,
        iterations=iters,
        residual=abs(threshold_function(effective, c_star) - 1.0),
    )


def foc_residual(spec: ContestSpec, profile: ProfileLike) -> tuple[float, ...]:
    """Per-miner first-order-condition residuals in the proportional model.

    residual_i = x_i(q) - max(1 - (c_i/prize) * sum_j q_j, 0); the profile
    is an equilibrium iff every residual is 0. Requires every miner to face
    positive aggregate opposition (at least two positive investments).
    """
    if spec.alpha != 1.0:
        raise ValueError("FOC residuals are for the proportional model")
    q = as_investments(spec, profile)
    if np.count_nonzero(q > 0) < 2:
        raise ValueError(
            "some miner faces zero aggregate opposition; residuals undefined"
        )
    total = float(q.sum())
    x = np.asarray(shares(spec, q).shares)
    target = np.maximum(1.0 - np.asarray(spec.costs) / spec.prize * total, 0.0)
    return tuple((x - target).tolist())
