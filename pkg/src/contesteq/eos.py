"""Equilibrium search and certification for economies of scale (alpha > 1).

Any equilibrium participant must hold share >= 1 - 1/alpha, so at most
floor(1 + 1/(alpha - 1)) miners can participate (none for alpha > 2). For
a candidate participant set S the stationarity conditions collapse, via
the power scale s = (sum_j q_j**alpha)**(1/alpha), to

    c_i * s = prize * alpha * f(x_i),   f(x) = x**(1 - 1/alpha) * (1 - x),

with f strictly decreasing on [1 - 1/alpha, 1). Each share is therefore a
decreasing function of s, the share sum crosses 1 at most once, and an
outer bisection on s plus an inner inversion of f nails the unique
candidate for S. Candidates are then certified miner-by-miner against the
exact best-response oracle; only certified profiles are equilibria.
"""

from __future__ import annotations

import math
from dataclasses import dataclass
from itertools import combinations
from typing import Iterable, NamedTuple, Optional

import numpy as np

from . import best_response as br
from .core import ContestSpec, ProfileLike, as_investments, shares
from .roots import bisect_monotone

#: default certification tolerance on per-miner utility slack
CERT_TOL = 1e-9
#: |share sum - 1| tolerance for the outer bisection on the power scale
SUM_TOL = 1e-13
#: |f(x) - target| tolerance for the share-weight inversion
INVERT_TOL = 1e-13


@dataclass(frozen=True)
class MinerVerdict:
    """One miner's best-response check against the rest of a profile."""

    miner: int
    investment: float
    utility: float
    best_utility: float
    slack: float
    best_responses: tuple[float, ...]
    marginal: bool
    note: str = ""


@dataclass(frozen=True)
class EquilibriumCertificate:
    certified: bool
    tolerance: float
    verdicts: tuple[MinerVerdict, ...]

    @property
    def worst_slack(self) -> float:
        return min(v.slack for v in self.verdicts)

    @property
    def marginal_miners(self) -> tuple[int, ...]:
        return tuple(v.miner for v in self.verdicts if v.marginal)


@dataclass(frozen=True)
class EosEquilibrium:
    """A certified (or candidate) profile for one participant set."""

    participants: tuple[int, ...]
    investments: tuple[float, ...]
    shares: tuple[float, ...]
    power_scale: float
    certificate: EquilibriumCertificate
    iterations: int
    residual: float


class PairwiseBound(NamedTuple):
    i: int
    j: int
    bound: float
    actual: float
    ok: bool


def participation_cap(alpha: float) -> int:
    """Most participants any equilibrium can have: floor(1 + 1/(alpha-1)),
    boundary-inclusive (integer values of 1 + 1/(alpha-1) are admitted)."""
    if alpha <= 1:
        raise ValueError("the cap applies to alpha > 1")
    return int(math.floor(1.0 + 1.0 / (alpha - 1.0) + 1e-9))


def share_weight(x: float, alpha: float) -> float:
    """f(x) = x**(1 - 1/alpha) * (1 - x) on (0, 1).

    Strictly decreasing for x > (alpha-1)/(2*alpha - 1), hence on the whole
    participation branch [1 - 1/alpha, 1).
    """
    if alpha <= 1:
        raise ValueError("share weight is defined for alpha > 1")
    if not 0.0 < x < 1.0:
        raise ValueError("share must lie strictly inside (0, 1)")
    return x ** (1.0 - 1.0 / alpha) * (1.0 - x)


def invert_share_weight(target: float, alpha: float) -> float:
    """Unique x in [1 - 1/alpha, 1) with f(x) = target (within 1e-13).

    Bisection on the decreasing branch. A target above the branch maximum
    f(1 - 1/alpha) is infeasible: no share on the participation branch can
    carry that weight, so the caller's miner cannot participate at the
    probed scale.
    """
    if alpha <= 1:
        raise ValueError("share weight is defined for alpha > 1")
    if target <= 0.0:
        raise ValueError("target must be positive")
    lo = 1.0 - 1.0 / alpha
    f_max = share_weight(lo, alpha) if lo > 0.0 else 1.0  # f(0+) -> 1
    if target >= f_max:
        if target <= f_max * (1.0 + 1e-9):
            return lo  # branch endpoint, up to rounding of the target
        raise ValueError(
            f"target {target} above branch maximum {f_max}: infeasible"
        )
    if lo <= 0.0:
        # alpha -> 1+ degeneracy guard; lo = 1 - 1/alpha > 0 for alpha > 1
        lo = np.finfo(float).tiny
    res = bisect_monotone(
        lambda x: share_weight(x, alpha),
        lo, 1.0 - 1e-16,
        target=target, f_tol=INVERT_TOL, max_iter=200,
    )
    return res.root


def _opposition_power(q: np.ndarray, alpha: float, i: int) -> float:
    mask = np.arange(q.size) != i
    if alpha == 1.0:
        return float(q[mask].sum())
    return float((q[mask] ** alpha).sum())


def verify_equilibrium(
    spec: ContestSpec, profile: ProfileLike, tol: float = CERT_TOL
) -> EquilibriumCertificate:
    """Check every miner (participants and abstainers) against the exact
    best-response oracle.

    A profile is certified iff each miner's utility is within tol of its
    best attainable utility. Miners facing zero aggregate opposition have
    no best response (the supremum is not attained), which always blocks
    certification. A miner is flagged marginal when an interior stationary
    response exists whose utility ties abstention within 1e-9: its
    participation is a knife-edge and the equilibrium hinges on
    tie-breaking.
    """
    q = as_investments(spec, profile)
    x = np.asarray(shares(spec, q).shares)
    verdicts = []
    for i in range(spec.n):
        u_i = spec.prize * float(x[i]) - spec.costs[i] * float(q[i])
        opposition = _opposition_power(q, spec.alpha, i)
        try:
            if spec.alpha == 1.0:
                result = br.best_response_proportional(
                    spec.costs[i], opposition, spec.prize
                )
            else:
                result = br.best_response_eos(
                    spec.costs[i], spec.alpha, opposition, spec.prize
                )
        except br.NoBestResponse:
            verdicts.append(MinerVerdict(
                miner=i, investment=float(q[i]), utility=u_i,
                best_utility=math.inf, slack=-math.inf,
                best_responses=(), marginal=False,
                note="zero opposition: no best response exists",
            ))
            continue
        slack = u_i - result.optimal_utility
        marginal = (
            result.interior_candidate is not None
            and abs(result.optimal_utility) <= 1e-9
        )
        verdicts.append(MinerVerdict(
            miner=i, investment=float(q[i]), utility=u_i,
            best_utility=result.optimal_utility, slack=slack,
            best_responses=result.optimal_investments, marginal=marginal,
        ))
    certified = all(v.slack >= -tol for v in verdicts)
    return EquilibriumCertificate(
        certified=certified, tolerance=tol, verdicts=tuple(verdicts)
    )


def _validate_set(spec: ContestSpec, participant_set: Iterable[int]) -> tuple[int, ...]:
    s = tuple(sorted(int(i) for i in participant_set))
    if len(set(s)) != len(s):
        raise ValueError("participant set has duplicate indices")
    if any(i < 0 or i >= spec.n for i in s):
        raise ValueError("participant index out of range")
    if len(s) < 2:
        raise ValueError("a participant set needs at least 2 miners")
    cap = participation_cap(spec.alpha)
    if len(s) > cap:
        raise ValueError(
            f"set of size {len(s)} exceeds the participation cap {cap} "
            f"at alpha={spec.alpha}"
        )
    return s


def solve_for_set(
    spec: ContestSpec,
    participant_set: Iterable[int],
    tol: float = CERT_TOL,
) -> Optional[EosEquilibrium]:
    """Solve the stationarity system for one candidate participant set.

    Bisects the power scale s on its feasible range (0, s_max], where
    s_max = prize * alpha * f(1 - 1/alpha) / max cost in the set, for the
    unique s with share sum 1; reconstructs q_i = x_i**(1/alpha) * s.
    Returns None when no such s exists or some member's utility is below
    -1e-12 (the set cannot be a participant set of any equilibrium). The
    returned candidate carries a full best-response certificate; callers
    decide what to do with uncertified candidates.
    """
    if spec.alpha <= 1.0:
        raise ValueError("use the proportional solver for alpha = 1")
    s_idx = _validate_set(spec, participant_set)
    alpha, v = spec.alpha, spec.prize
    costs = np.asarray([spec.costs[i] for i in s_idx])
    lo_share = 1.0 - 1.0 / alpha
    f_max = share_weight(lo_share, alpha)
    s_max = v * alpha * f_max / float(costs.max())

    def share_sum(s: float) -> float:
        return sum(
            invert_share_weight(float(c) * s / (v * alpha), alpha)
            for c in costs
        )

    # the outer objective must decrease in s; spot-check before bisecting
    probes = [share_sum(s_max * t) for t in (1e-3, 0.03, 0.2, 0.6, 1.0)]
    assert all(a >= b - 1e-12 for a, b in zip(probes, probes[1:])), \
        "share sum is not decreasing in the power scale"

    end = probes[-1] - 1.0
    iterations = 0
    if end > SUM_TOL:
        return None  # shares cannot sum down to 1 on the branch
    if end >= -SUM_TOL:
        s_star, residual = s_max, abs(end)
    else:
        res = bisect_monotone(
            share_sum, s_max * 1e-12, s_max,
            target=1.0, f_tol=SUM_TOL, max_iter=200,
        )
        s_star, residual, iterations = res.root, abs(res.residual), res.iterations
    x_members = np.asarray([
        invert_share_weight(float(c) * s_star / (v * alpha), alpha)
        for c in costs
    ])
    q_members = x_members ** (1.0 / alpha) * s_star
    utilities = v * x_members - costs * q_members
    if utilities.min() < -1e-12:
        return None  # a member would rather abstain than play its FOC point

    q = np.zeros(spec.n)
    q[list(s_idx)] = q_members
    certificate = verify_equilibrium(spec, q, tol)
    return EosEquilibrium(
        participants=s_idx,
        investments=tuple(q.tolist()),
        shares=shares(spec, q).shares,
        power_scale=float(s_star),
        certificate=certificate,
        iterations=iterations,
        residual=float(residual),
    )


def _ratio_prune(costs: np.ndarray, alpha: float) -> bool:
    """Necessary condition from the pairwise share bound plus the share
    budget: all pairwise cost ratios in the set must satisfy
    c_min/c_max >= (|S|-1)(alpha-1). False means the set can be skipped."""
    k = costs.size
    return float(costs.min()) / float(costs.max()) >= (
        (k - 1) * (alpha - 1.0) * (1.0 - 1e-12)
    )


def _relabel(spec: ContestSpec, rep: EosEquilibrium,
             s_idx: tuple[int, ...]) -> np.ndarray:
    """Map a representative solution onto another index set with the same
    cost multiset (equal costs are interchangeable)."""
    q = np.zeros(spec.n)
    rep_sorted = sorted(rep.participants, key=lambda i: (spec.costs[i], i))
    new_sorted = sorted(s_idx, key=lambda i: (spec.costs[i], i))
    for old, new in zip(rep_sorted, new_sorted):
        q[new] = rep.investments[old]
    return q


def enumerate_equilibria(
    spec: ContestSpec,
    tol: float = CERT_TOL,
    max_miners: int = 30,
) -> list[EosEquilibrium]:
    """All certified equilibria with participant sets up to the cap.

    Iterates subsets in size order, lexicographic within a size. Since the
    whole game is invariant under relabelling equal-cost miners, only one
    representative per cost multiset is solved; certified representatives
    are expanded to every index subset with that multiset and each copy is
    re-verified. alpha > 2 yields an empty list (the cap drops below 2);
    absence is reported, not proven.
    """
    if spec.alpha <= 1.0:
        raise ValueError("use the proportional solver for alpha = 1")
    if spec.n > max_miners:
        raise ValueError(
            f"n={spec.n} exceeds the enumeration cap {max_miners}"
        )
    cap = participation_cap(spec.alpha)
    out: list[EosEquilibrium] = []
    solved: dict[tuple[float, ...], Optional[EosEquilibrium]] = {}
    for k in range(2, min(cap, spec.n) + 1):
        for subset in combinations(range(spec.n), k):
            costs = np.asarray([spec.costs[i] for i in subset])
            if not _ratio_prune(costs, spec.alpha):
                continue
            key = tuple(sorted(costs.tolist()))
            if key not in solved:
                solved[key] = solve_for_set(spec, subset, tol)
            rep = solved[key]
            if rep is None:
                continue
            if rep.participants == subset:
                if rep.certificate.certified:
                    out.append(rep)
                continue
            q = _relabel(spec, rep, subset)
            certificate = verify_equilibrium(spec, q, tol)
            if certificate.certified:
                out.append(EosEquilibrium(
                    participants=subset,
                    investments=tuple(q.tolist()),
                    shares=shares(spec, q).shares,
                    power_scale=rep.power_scale,
                    certificate=certificate,
                    iterations=rep.iterations,
                    residual=rep.residual,
                ))
    return out


def pairwise_bound_check(
    spec: ContestSpec, equilibrium: EosEquilibrium, tol: float = CERT_TOL
) -> list[PairwiseBound]:
    """Evaluate x_i >= 1 - (1/alpha) * c_i/c_j for every ordered pair of
    participants (i = j included, where the bound is 1 - 1/alpha). Returns
    one row per pair with its verdict for diagnosis."""
    rows = []
    for i in equilibrium.participants:
        for j in equilibrium.participants:
            bound = 1.0 - (spec.costs[i] / spec.costs[j]) / spec.alpha
            actual = equilibrium.shares[i]
            rows.append(PairwiseBound(
                i=i, j=j, bound=bound, actual=actual,
                ok=actual >= bound - tol,
            ))
    return rows
