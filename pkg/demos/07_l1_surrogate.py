"""The random-projection surrogate for the unit-norm constraint.

||A x||_1 with Gaussian A concentrates around sqrt(2/pi) * m * ||x||_2, so
the linear-looking constraint ||A x_i||_1 = sqrt(2/pi) * m stands in for
||x_i||_2 = 1.  Run:  python demos/07_l1_surrogate.py
"""

import numpy as np

from sphereopt import l1_penalty_solve, l1_residual, make_ensemble, random_configuration
from sphereopt.l1reform import C_HALF_NORMAL

# --- the expectation law ------------------------------------------------------

x = np.array([0.6, 0.8, 0.0])
for m in (10, 100, 1000, 10_000):
    vals = [(l1_residual(make_ensemble(m, 3, seed), x) + C_HALF_NORMAL * m) / m
            for seed in range(100)]
    print(f"m={m:>6}: mean ||Ax||_1/m = {np.mean(vals):.5f} "
          f"+- {np.std(vals):.5f}   (target {C_HALF_NORMAL:.5f})")

# --- solving with the surrogate constraint ------------------------------------

print("\ntwo points, surrogate-constrained energy minimization (m=2000):")
ens = make_ensemble(2000, 3, seed=0)
rep = l1_penalty_solve(random_configuration(2, 3, seed=1), ens)
norms = np.linalg.norm(rep.final_point.coords, axis=0)
print("final point norms:", np.round(norms, 4), "(exact constraint would give 1)")
print("surrogate residuals:", np.round(rep.info["l1_residuals"], 2),
      f"of target {ens.target:.1f}")
print(f"on-sphere energy after projection: {rep.info['projected_energy']:.4f} "
      "(antipodal optimum: 0.25)")
