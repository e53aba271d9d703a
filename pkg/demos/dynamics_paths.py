# Best-response dynamics: convergence and its failure modes.
#
# Sequential (round-robin) exact best responses usually settle fast in the
# proportional model. The solver's closed form gives the target, so every
# trajectory can be graded. Economies of scale can instead collapse into a
# visit-repeating stall, which the runner reports as a cycle rather than
# pretending it converged.

import numpy as np

from contesteq import (
    ContestSpec,
    DynamicsConfig,
    run_dynamics,
    solve_equilibrium,
)

costs = tuple(i / (i + 1) for i in range(1, 11))
spec = ContestSpec(costs=costs)
target = solve_equilibrium(spec).investments

rng = np.random.default_rng(4)
print("proportional model, 6 random starts:")
for trial in range(6):
    start = tuple(rng.uniform(0.001, 1.0, spec.n))
    t = run_dynamics(spec, DynamicsConfig(initial_profile=start))
    drift = max(abs(a - b) for a, b in zip(t.terminal, target))
    print(f"  start #{trial}: {t.status} in {t.rounds_used} rounds,"
          f" distance to closed form {drift:.2e}")

# one trajectory in detail: total investment homes in on 1/c*
t = run_dynamics(spec, DynamicsConfig(initial_profile=(0.5,) * 10))
print("\nround-by-round total investment (start: everyone at 0.5):")
for rnd, profile in enumerate(t.profiles[:8]):
    print(f"  round {rnd}: total {sum(profile):.6f}")
print(f"  ... -> {sum(t.terminal):.6f}"
      f" (closed form {sum(target):.6f})")

# scale economies: three equal miners at alpha = 2 can talk each other out
# of the market entirely; the stalled state is not an equilibrium
spec3 = ContestSpec(costs=(1.0, 1.0, 1.0), alpha=2.0)
t3 = run_dynamics(spec3, DynamicsConfig(initial_profile=(1.0, 1.0, 1.0)))
print(f"\nalpha=2 from (1,1,1): {t3.status} at {t3.terminal}")

# from an asymmetric start the same game lands on a genuine two-miner
# equilibrium
t4 = run_dynamics(spec3, DynamicsConfig(initial_profile=(0.6, 0.5, 0.01)))
print(f"alpha=2 from (0.6,0.5,0.01): {t4.status} at"
      f" {tuple(round(v, 6) for v in t4.terminal)}"
      f" (certified: {t4.certificate.certified if t4.certificate else '-'})")
