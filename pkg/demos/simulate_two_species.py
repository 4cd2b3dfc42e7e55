"""
Simulating the two-species process
==================================

Gillespie trajectories of the exclusion process, an empirical transition
kernel compared with exp(tL), and a Monte Carlo view of duality.
"""

from fractions import Fraction

from typed_asep.asep_generator import AsepParams
from typed_asep.simulator import (
    TrajectoryConfig,
    duality_expectation_check,
    estimate_transition_matrix,
    gillespie_run,
    semigroup_duality_residual,
)

params = AsepParams(Fraction(3, 2), n=3)

# one trajectory on four sites; particle counts never change
traj = gillespie_run(TrajectoryConfig(params, 4, t_max=0.5, seed=1, initial=(3, 0, 1, 2)))
for t, s in list(zip(traj.times, traj.states))[:8]:
    print(f"{t:8.4f}  {s}")
print("jumps:", traj.jumps, " conserved:", traj.conserves_counts())

est = estimate_transition_matrix(TrajectoryConfig(params, 2, 0.1, seed=2), t=0.1, trials=50_000)
print("\nmax |empirical - exp(tL)|:", round(est.max_error, 4))

# E[D(eta_t, xi)] against E[D(eta, xi_t)]
rep = duality_expectation_check(params, 3, 5, (3, 0), (1, 2), t=0.5, trials=50_000, seed=3)
print(f"lhs {rep['lhs']:.4f} +- {rep['lhs_se']:.4f}, rhs {rep['rhs']:.4f} +- {rep['rhs_se']:.4f}, "
      f"exact {rep['exact']:.4f}")
print("semigroup residual:", semigroup_duality_residual(params, 3, 5, t=0.5))
