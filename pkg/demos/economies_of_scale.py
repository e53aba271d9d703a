# Economies of scale: entry deterrence and tiny participant counts.
#
# With reward exponent alpha > 1 every participant needs market share at
# least 1 - 1/alpha, so at most floor(1 + 1/(alpha - 1)) miners can be
# active. Stranger still, a miner with the *lowest* cost can be deterred
# from entering: here c_1 = (1 - 1/m)^(1 - 1/m) sits exactly at the
# indifference point.

import math

from contesteq import (
    ContestSpec,
    enumerate_equilibria,
    pairwise_bound_check,
    participation_cap,
    solve_for_set,
)

for alpha in (1.05, 1.1, 1.5, 2.0):
    print(f"alpha = {alpha:<5} -> at most {participation_cap(alpha)}"
          " participants in any equilibrium")

m = 2
alpha = m / (m - 1)
c1 = (1 - 1 / m) ** (1 - 1 / m)
spec = ContestSpec(costs=(c1, 1.0, 1.0, 1.0), alpha=alpha)
print(f"\ndeterrence instance: alpha = {alpha}, costs ="
      f" ({c1:.7f}, 1, 1, 1)")

equilibria = enumerate_equilibria(spec)
print(f"{len(equilibria)} certified equilibria:")
for eq in equilibria:
    members = ", ".join(f"miner {i + 1}" for i in eq.participants)
    q = ", ".join(f"{v:.4f}" for v in eq.investments)
    flags = ", ".join(f"miner {i + 1}" for i in eq.certificate.marginal_miners)
    print(f"  {{{members}}}  q = ({q})  marginal: {flags}")

# miner 1 never participates although it is the cheapest: facing two
# rivals at 1/2 it is exactly indifferent between entering and abstaining
cheapo = equilibria[0].certificate.verdicts[0]
print(f"\nminer 1 verdict: utility {cheapo.utility:.4f}, best"
      f" {cheapo.best_utility:.4f}, responses {cheapo.best_responses}")

# the pairwise bound x_i >= 1 - (1/alpha) c_i/c_j is tight here
rows = pairwise_bound_check(spec, equilibria[0])
print("\npairwise share bounds (participants):")
for r in rows:
    print(f"  x_{r.i + 1} = {r.actual:.4f} >= {r.bound:.4f}"
          f"  (vs miner {r.j + 1}) {'ok' if r.ok else 'VIOLATED'}")

# a set that cannot support an equilibrium simply has no solution
print("\nsolve for {miner 1, miner 2}:",
      solve_for_set(spec, (0, 1)))

# asymmetric equilibria do exist at gentler exponents
m3 = ContestSpec(costs=((2 / 3) ** (2 / 3), 1.0, 1.0), alpha=1.5)
for eq in enumerate_equilibria(m3):
    members = tuple(i + 1 for i in eq.participants)
    print(f"alpha=1.5 equilibrium on miners {members}:"
          f" q = {tuple(round(v, 4) for v in eq.investments)}")
