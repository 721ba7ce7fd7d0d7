"""The two derivative-free routes: force relaxation and the simplex method.

Force relaxation moves each point along its net inverse-square repulsion and
re-projects; the simplex method crawls the penalized objective with no
gradients at all.  Both land on the icosahedron for 12 points.
Run:  python demos/05_force_and_simplex.py
"""

import numpy as np

from sphereopt import ForceOptions, force_relax, net_force, random_configuration
from sphereopt.harness import solve_single

# --- forces are physical: antipodal pair pushes straight apart ---------------

cfg2 = random_configuration(2, 3, seed=0)
print("net force on point 0 of a random pair:", np.round(net_force(cfg2, 0), 4))

# --- relax 12 points: the icosahedron (energy exactly 39) --------------------

print("\nforce relaxation, 12 points, 6 starts:")
best = np.inf
for seed in range(6):
    rep = force_relax(random_configuration(12, 3, seed))
    best = min(best, rep.final_value)
    print(f"  seed {seed}: E={rep.final_value:.8f} "
          f"({rep.iterations} passes, {rep.reason})")
print(f"best = {best:.8f}  (icosahedron closed form: 39)")

# --- simplex on the penalized objective --------------------------------------

print("\nsimplex method on the penalized objective, 12 points, 3 starts:")
for seed in range(3):
    rep = solve_single("nelder-mead", 12, 3, seed, {})
    print(f"  seed {seed}: on-sphere E={rep.info['projected_energy']:.6f}")
