"""Tour of the core quantities: configurations, energy, analytic gradients.

Run:  python demos/01_energy_and_gradients.py
"""

import numpy as np

from sphereopt import (
    Configuration,
    check_gradient,
    constraint_residual,
    energy,
    energy_gradient,
    random_configuration,
    spherical_energy,
    to_cartesian,
    to_spherical,
)

# --- closed-form sanity anchors ---------------------------------------------

antipodal = Configuration(np.array([[0.0, 0.0], [0.0, 0.0], [1.0, -1.0]]))
print("antipodal pair          energy =", energy(antipodal), "(exact 1/4)")

tetra = Configuration(np.array([
    [1.0, 1.0, -1.0, -1.0],
    [1.0, -1.0, 1.0, -1.0],
    [1.0, -1.0, -1.0, 1.0],
]) / np.sqrt(3.0))
print("regular tetrahedron     energy =", energy(tetra), "(exact 9/4)")

# --- random starts and feasibility -------------------------------------------

cfg = random_configuration(n=30, k=3, seed=0)
print("\nrandom 30-point start   energy =", f"{energy(cfg):.4f}",
      " residual =", constraint_residual(cfg))

# --- the two parameterizations agree -----------------------------------------

angles = to_spherical(cfg)
print("angle-form energy matches Cartesian:",
      np.isclose(spherical_energy(angles), energy(cfg), rtol=1e-12))
print("round trip max coordinate error:",
      np.abs(to_cartesian(angles).coords - cfg.coords).max())

# --- gradients validated against forward differences -------------------------

k, n = cfg.k, cfg.n
rep = check_gradient(
    lambda v: energy(v.reshape(k, n)),
    lambda v: energy_gradient(v.reshape(k, n)).ravel(),
    cfg.coords.ravel(),
)
print("\ngradient check: max diff", f"{rep.max_diff:.3e}",
      " diff norm", f"{rep.diff_norm:.3e}", " passed:", rep.passed)

G = energy_gradient(cfg)
print("gradient columns sum to zero:", np.abs(G.sum(axis=1)).max() < 1e-12)
