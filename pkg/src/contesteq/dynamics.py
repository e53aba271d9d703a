"""Round-robin best-response dynamics.

Within a round, miners update sequentially in index order, each to an
exact best response against the current state of everyone else
(Gauss-Seidel; simultaneous updates oscillate trivially in contests).
Ties between abstaining and the interior optimum break toward the
incumbent action. A miner facing zero aggregate opposition has no best
response and keeps its incumbent investment.

Termination: a round with max investment change <= convergence_tol ends
the run; the terminal profile is then verified, and the trajectory is
"converged" only if it certifies — otherwise the no-change round is a
length-1 revisit and is reported "cycle_detected". Longer cycles are
caught by hashing profiles quantized at 1e-9. Nothing here claims
convergence in general; statuses report what happened.
"""

from __future__ import annotations

from dataclasses import dataclass, field
from typing import Iterator, Optional

import numpy as np

from . import best_response as br
from .core import ContestSpec, as_investments
from .eos import EquilibriumCertificate, verify_equilibrium

#: quantum for cycle-detection profile hashing
CYCLE_QUANTUM = 1e-9


@dataclass(frozen=True)
class DynamicsConfig:
    initial_profile: tuple[float, ...]
    max_rounds: int = 10_000
    convergence_tol: float = 1e-10
    #: fraction of the step toward the best response taken each update;
    #: values below 1 are exploratory smoothing, not part of the model
    damping: float = 1.0

    def __post_init__(self):
        object.__setattr__(
            self, "initial_profile",
            tuple(float(q) for q in self.initial_profile),
        )
        if self.max_rounds < 1:
            raise ValueError("max_rounds must be >= 1")
        if not self.convergence_tol > 0:
            raise ValueError("convergence_tol must be positive")
        if not 0.0 < self.damping <= 1.0:
            raise ValueError("damping must be in (0, 1]")


@dataclass(frozen=True)
class Trajectory:
    """Profiles after each round (index 0 is the initial profile)."""

    profiles: tuple[tuple[float, ...], ...]
    status: str  # converged | max_rounds_exhausted | cycle_detected
    rounds_used: int
    certificate: Optional[EquilibriumCertificate] = field(default=None)

    @property
    def terminal(self) -> tuple[float, ...]:
        return self.profiles[-1]

    def rows(self) -> Iterator[tuple[int, int, float]]:
        """(round, miner, investment) rows for CSV export; round 1 is the
        state after the first full update sweep."""
        for rnd, profile in enumerate(self.profiles[1:], start=1):
            for miner, q in enumerate(profile):
                yield rnd, miner, q


def _best_response_for(spec: ContestSpec, q: np.ndarray, i: int):
    mask = np.arange(q.size) != i
    if spec.alpha == 1.0:
        opposition = float(q[mask].sum())
        if opposition == 0.0:
            return None
        return br.best_response_proportional(
            spec.costs[i], opposition, spec.prize
        )
    opposition = float((q[mask] ** spec.alpha).sum())
    if opposition == 0.0:
        return None
    return br.best_response_eos(spec.costs[i], spec.alpha, opposition,
                                spec.prize)


def _utility_at(spec: ContestSpec, q: np.ndarray, i: int, qi: float) -> float:
    mask = np.arange(q.size) != i
    if spec.alpha == 1.0:
        opp = float(q[mask].sum())
        power = qi
    else:
        opp = float((q[mask] ** spec.alpha).sum())
        power = qi**spec.alpha
    total = power + opp
    x = power / total if total > 0 else 0.0
    return spec.prize * x - spec.costs[i] * qi


def _quantized(q: np.ndarray) -> tuple[int, ...]:
    return tuple(int(round(v / CYCLE_QUANTUM)) for v in q)


def run_dynamics(
    spec: ContestSpec,
    config: DynamicsConfig,
    verify_tol: float = 1e-8,
) -> Trajectory:
    """Iterate best responses from config.initial_profile.

    The initial profile must have at least one positive investment (from
    all zeros, no miner has a best response). Identical spec and config
    reproduce the trajectory bit for bit.
    """
    q = as_investments(spec, config.initial_profile)
    if not np.any(q > 0):
        raise ValueError("initial profile must have a positive investment")
    q = q.copy()
    snapshots = [tuple(q.tolist())]
    seen = {_quantized(q): 0}
    status = "max_rounds_exhausted"
    certificate = None
    rounds_used = 0
    for rnd in range(1, config.max_rounds + 1):
        rounds_used = rnd
        previous = q.copy()
        for i in range(spec.n):
            result = _best_response_for(spec, q, i)
            if result is None:
                continue  # zero opposition: no best response, keep incumbent
            target = min(
                result.optimal_investments,
                key=lambda m: (abs(m - q[i]), m),
            )
            new_qi = q[i] + config.damping * (target - q[i])
            if config.damping == 1.0:
                gain = (_utility_at(spec, q, i, new_qi)
                        - _utility_at(spec, q, i, float(q[i])))
                assert gain >= -1e-12, (
                    f"best response lowered miner {i}'s utility by {-gain}"
                )
            q[i] = new_qi
        snapshots.append(tuple(q.tolist()))
        change = float(np.abs(q - previous).max())
        if change <= config.convergence_tol:
            certificate = verify_equilibrium(spec, q, verify_tol)
            status = "converged" if certificate.certified else "cycle_detected"
            break
        key = _quantized(q)
        if key in seen and seen[key] <= rnd - 2:
            status = "cycle_detected"
            break
        seen[key] = rnd
    return Trajectory(
        profiles=tuple(snapshots),
        status=status,
        rounds_used=rounds_used,
        certificate=certificate,
    )
