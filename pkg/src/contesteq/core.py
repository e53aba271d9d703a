"""Domain types and payoff primitives for fixed-prize investment contests.

A contest has n >= 2 miners. Miner i buys q_i units of capacity at per-unit
cost c_i and earns the share x_i = q_i**alpha / sum_j q_j**alpha of a fixed
prize. alpha = 1 is the proportional model; alpha > 1 rewards scale.
Everything here is a pure function of immutable values.
"""

from __future__ import annotations

import math
from dataclasses import dataclass
from typing import Sequence, Union

import numpy as np

ProfileLike = Union["InvestmentProfile", Sequence[float], np.ndarray]


@dataclass(frozen=True)
class ContestSpec:
    """A game instance: per-unit costs, scale exponent, prize value.

    Costs stay in caller order; solvers sort internally and report back in
    the original order.
    """

    costs: tuple[float, ...]
    alpha: float = 1.0
    prize: float = 1.0

    def __post_init__(self):
        costs = tuple(float(c) for c in self.costs)
        object.__setattr__(self, "costs", costs)
        object.__setattr__(self, "alpha", float(self.alpha))
        object.__setattr__(self, "prize", float(self.prize))
        if len(costs) < 2:
            raise ValueError("a contest needs at least 2 miners")
        if not all(math.isfinite(c) and c > 0 for c in costs):
            raise ValueError("all costs must be finite and > 0")
        if not (math.isfinite(self.alpha) and self.alpha >= 1):
            raise ValueError("alpha must be finite and >= 1")
        if not (math.isfinite(self.prize) and self.prize > 0):
            raise ValueError("prize must be finite and > 0")

    @property
    def n(self) -> int:
        return len(self.costs)

    def ascending_order(self) -> np.ndarray:
        """Indices that sort costs ascending (stable for ties)."""
        return np.argsort(np.asarray(self.costs), kind="stable")


@dataclass(frozen=True)
class InvestmentProfile:
    """Per-miner investments, aligned with ContestSpec.costs."""

    investments: tuple[float, ...]

    def __post_init__(self):
        object.__setattr__(
            self, "investments", tuple(float(q) for q in self.investments)
        )


@dataclass(frozen=True)
class MarketShares:
    shares: tuple[float, ...]
    total_investment: float
    total_power: float


@dataclass(frozen=True)
class ConcentrationReport:
    participant_count: int
    hhi: float
    top_k_shares: tuple[float, ...]
    rent_dissipation: float


def as_investments(spec: ContestSpec, profile: ProfileLike) -> np.ndarray:
    """Validate a profile against a spec and return it as a float array."""
    if isinstance(profile, InvestmentProfile):
        q = np.asarray(profile.investments, dtype=float)
    else:
        q = np.asarray(profile, dtype=float)
    if q.ndim != 1 or q.shape[0] != spec.n:
        raise ValueError(
            f"profile has {q.shape} investments, spec has {spec.n} miners"
        )
    if not np.all(np.isfinite(q)):
        raise ValueError("investments must be finite")
    if np.any(q < 0):
        raise ValueError("investments must be >= 0")
    return q


def shares(spec: ContestSpec, profile: ProfileLike) -> MarketShares:
    """Market shares x_i = q_i**alpha / sum_j q_j**alpha.

    The all-zero profile yields all-zero shares by convention. Powers are
    evaluated on q scaled by its maximum so extreme magnitudes cannot
    overflow or underflow the ratio.
    """
    q = as_investments(spec, profile)
    top = float(q.max())
    if top == 0.0:
        return MarketShares(shares=(0.0,) * spec.n, total_investment=0.0,
                            total_power=0.0)
    t = (q / top) ** spec.alpha
    denom = float(t.sum())
    x = t / denom
    total_power = float(top**spec.alpha * denom)
    return MarketShares(
        shares=tuple(x.tolist()),
        total_investment=float(q.sum()),
        total_power=total_power,
    )


def utility(spec: ContestSpec, profile: ProfileLike, i: int) -> float:
    """prize * x_i - c_i * q_i for miner i."""
    q = as_investments(spec, profile)
    if not 0 <= i < spec.n:
        raise IndexError(f"miner index {i} out of range for n={spec.n}")
    x = shares(spec, q).shares[i]
    return spec.prize * x - spec.costs[i] * float(q[i])


def marginal_share(spec: ContestSpec, profile: ProfileLike, i: int) -> float:
    """d x_i / d q_i at the given profile.

    Closed form alpha * x_i * (1 - x_i) / q_i; for alpha = 1 this reduces to
    (1 - x_i) / sum_j q_j, which stays finite at q_i = 0. For alpha > 1 the
    formula is degenerate at q_i = 0 and the call is an error rather than a
    silent 0 (equilibrium code must never evaluate it there).
    """
    q = as_investments(spec, profile)
    if not 0 <= i < spec.n:
        raise IndexError(f"miner index {i} out of range for n={spec.n}")
    qi = float(q[i])
    x = shares(spec, q).shares[i]
    if spec.alpha == 1.0:
        total = float(q.sum())
        if total <= 0.0:
            raise ValueError("marginal share undefined at the all-zero profile")
        return (1.0 - x) / total
    if qi <= 0.0:
        raise ValueError(
            "marginal share is degenerate at q_i = 0 for alpha > 1"
        )
    return spec.alpha * x * (1.0 - x) / qi


def concentration(spec: ContestSpec, profile: ProfileLike) -> ConcentrationReport:
    """Participation count, HHI, cumulative top-k shares, rent dissipation."""
    q = as_investments(spec, profile)
    x = np.asarray(shares(spec, q).shares)
    top_k = np.cumsum(np.sort(x)[::-1])
    spent = float(np.dot(np.asarray(spec.costs), q))
    return ConcentrationReport(
        participant_count=int(np.count_nonzero(q > 0)),
        hhi=float(np.dot(x, x)),
        top_k_shares=tuple(top_k.tolist()),
        rent_dissipation=spent / spec.prize,
    )


def reduce_exponents(alpha_reward: float, beta_cost: float) -> float:
    """Fold a concave cost exponent into the reward exponent.

    A game with reward exponent alpha' >= 1 and cost c_i * q_i**beta,
    0 < beta <= 1, is strategically equivalent to the linear-cost game with
    exponent alpha'/beta.
    """
    if not (math.isfinite(alpha_reward) and alpha_reward >= 1):
        raise ValueError("reward exponent must be >= 1")
    if not (math.isfinite(beta_cost) and 0 < beta_cost <= 1):
        raise ValueError("cost exponent must be in (0, 1]")
    return alpha_reward / beta_cost
