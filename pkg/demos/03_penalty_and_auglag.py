"""Constraint relaxation: penalty continuation vs augmented Lagrangian.

Shows the defining contrast: at a loose penalty weight the points sit well
off the sphere, continuation tightens them, and the multiplier updates reach
feasibility orders of magnitude tighter than the pure penalty at the same
final weight.  Run:  python demos/03_penalty_and_auglag.py
"""

from sphereopt import (
    ContinuationSchedule,
    auglag_solve,
    penalty_solve,
    random_configuration,
)

cfg0 = random_configuration(n=20, k=3, seed=1)

print("stagewise feasibility violation, 20 points:\n")
rep_pen = penalty_solve(cfg0)
rep_aug = auglag_solve(cfg0)

lams = rep_pen.info["stage_lambdas"]
print(f"{'weight':>10} {'penalty residual':>18} {'auglag residual':>18}")
for lam, rp, ra in zip(lams, rep_pen.info["stage_residuals"],
                       rep_aug.info["stage_residuals"]):
    print(f"{lam:>10.0f} {rp:>18.3e} {ra:>18.3e}")

print("\nfinal on-sphere energies:",
      f"penalty {rep_pen.info['projected_energy']:.4f},",
      f"auglag {rep_aug.info['projected_energy']:.4f}")
print("multipliers (first five):",
      [round(float(m), 3) for m in rep_aug.info["multipliers"].mu[:5]])

# A custom schedule: stop early and watch the constraint stay loose.
loose = ContinuationSchedule(stages=((1.0, 1e-4),))
rep_loose = penalty_solve(cfg0, loose)
print("\nsingle loose stage (weight 1): residual",
      f"{rep_loose.info['final_residual']:.3f}",
      "- the points float well off the sphere, energy biased low:",
      f"{rep_loose.final_value:.4f} (objective) vs",
      f"{rep_loose.info['projected_energy']:.4f} (projected back on-sphere)")
