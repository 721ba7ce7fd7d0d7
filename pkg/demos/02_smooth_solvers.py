"""Unconstrained-angle L-BFGS and projected gradient descent head to head.

Both minimize the same landscape for n points on the ordinary sphere; the
angle form is unconstrained from the start, the projected form re-normalizes
after every step.  Run:  python demos/02_smooth_solvers.py
"""

import numpy as np

from sphereopt import SolverOptions, lbfgs, projected_gd, random_configuration, to_spherical
from sphereopt.geometry import spherical_energy_arrays, spherical_gradient_arrays

n = 10
print(f"minimizing the {n}-point inverse-square energy, 5 starts each\n")

# --- L-BFGS on the angle parameterization ------------------------------------

best_angle = np.inf
for seed in range(5):
    a = to_spherical(random_configuration(n, 3, seed))
    v0 = np.concatenate([a.phi, a.theta])

    def f(v):
        return spherical_energy_arrays(v[:n], v[n:])

    def g(v):
        dphi, dtheta = spherical_gradient_arrays(v[:n], v[n:])
        return np.concatenate([dphi, dtheta])

    rep = lbfgs(f, g, v0)
    best_angle = min(best_angle, rep.final_value)
    print(f"  angle-form L-BFGS  seed {seed}: E={rep.final_value:.6f} "
          f"in {rep.iterations} iterations ({rep.reason})")

# --- projected gradient descent ----------------------------------------------

best_proj = np.inf
for seed in range(5):
    rep = projected_gd(random_configuration(n, 3, seed),
                       opts=SolverOptions(max_iters=50_000, grad_tol=1e-6))
    best_proj = min(best_proj, rep.final_value)

print(f"\nbest angle-form energy:     {best_angle:.6f}")
print(f"best projected-descent energy: {best_proj:.6f}")
print(f"agreement: {abs(best_angle - best_proj) / best_proj:.2e} relative")
