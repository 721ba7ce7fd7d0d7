"""Random-projection surrogate for the unit-norm constraint.

For a Gaussian matrix A of shape (m, k) with i.i.d. standard-normal entries,
E ||A x||_1 = c * m * ||x||_2 with c = sqrt(2/pi) (the first absolute moment
of the standard normal).  The linear constraint ||A x_i||_1 = c*m therefore
matches ||x_i||_2 = 1 in expectation, and concentrates around it at rate
1/sqrt(m).

The solver below enforces the surrogate with a quadratic penalty
(lam / (2 m^2)) * (||A x_i||_1 - c*m)^2 per point, using a smoothed absolute
value |t| ~ sqrt(t^2 + eps^2) so the inner L-BFGS sees a differentiable
objective.
"""

from __future__ import annotations

import math
import time
from dataclasses import dataclass
from typing import Optional

import numpy as np

from .geometry import (
    Configuration,
    constraint_residual,
    energy,
    energy_gradient,
    project_matrix,
)
from .relaxation import ContinuationSchedule
from .solvers import SolveReport, SolverOptions, lbfgs

#: First absolute moment of the standard normal distribution.
C_HALF_NORMAL = math.sqrt(2.0 / math.pi)

#: Smoothing width for the absolute value inside the penalty.
SMOOTH_EPS = 1e-6


@dataclass(frozen=True)
class ProjectionEnsemble:
    """A Gaussian projection matrix, regenerable bitwise from (m, k, seed)."""

    m: int
    k: int
    A: np.ndarray
    seed: int

    def __post_init__(self):
        A = np.array(self.A, dtype=float, copy=True)
        if A.shape != (self.m, self.k):
            raise ValueError(f"A has shape {A.shape}, expected ({self.m}, {self.k})")
        if not np.isfinite(A).all():
            raise ValueError("ensemble contains NaN/Inf")
        A.flags.writeable = False
        object.__setattr__(self, "A", A)

    @property
    def target(self) -> float:
        """Right-hand side of the surrogate constraint: c * m."""
        return C_HALF_NORMAL * self.m


def make_ensemble(m: int, k: int, seed: int) -> ProjectionEnsemble:
    """Draw an (m, k) standard-normal matrix; deterministic per seed."""
    if m < 1 or k < 2:
        raise ValueError(f"need m >= 1 and k >= 2, got m={m}, k={k}")
    rng = np.random.default_rng(seed)
    return ProjectionEnsemble(m=m, k=k, A=rng.standard_normal((m, k)), seed=seed)


def l1_residual(ens: ProjectionEnsemble, x: np.ndarray) -> float:
    """||A x||_1 - c*m: zero in expectation exactly when ||x||_2 = 1."""
    x = np.asarray(x, dtype=float).ravel()
    return float(np.abs(ens.A @ x).sum()) - ens.target


def _smooth_l1_and_grad(ens: ProjectionEnsemble, X: np.ndarray):
    """Smoothed per-point values S_i ~ ||A x_i||_1 and their gradients.

    Returns (S, D) where S has one entry per column of X and D[:, i] is
    dS_i / dx_i.
    """
    # einsum with optimize=False keeps these contractions off BLAS, so the
    # rounding is independent of thread configuration
    P = np.einsum("mk,kn->mn", ens.A, X, optimize=False)
    R = np.sqrt(P * P + SMOOTH_EPS * SMOOTH_EPS)
    S = R.sum(axis=0)
    D = np.einsum("mk,mn->kn", ens.A, P / R, optimize=False)
    return S, D


def l1_penalty_solve(
    cfg0: Configuration,
    ens: ProjectionEnsemble,
    lambda_schedule: Optional[ContinuationSchedule] = None,
    opts: SolverOptions = SolverOptions(max_iters=2000),
) -> SolveReport:
    """Energy minimization with the surrogate constraints enforced by a
    quadratic penalty and lam-continuation.

    The report's info carries both residual families: the surrogate
    residuals ||A x_i||_1 - c*m and the true norm residuals | ||x_i||_2 - 1 |.
    """
    schedule = lambda_schedule or ContinuationSchedule.default()
    X0 = cfg0.coords
    k, n = X0.shape
    if ens.k != k:
        raise ValueError(f"ensemble is for k={ens.k}, configuration has k={k}")
    target = ens.target
    m2 = float(ens.m) ** 2

    def f(v, lam):
        X = v.reshape(k, n)
        S, _ = _smooth_l1_and_grad(ens, X)
        r = S - target
        return energy(X) + (lam / (2.0 * m2)) * float(r @ r)

    def g(v, lam):
        X = v.reshape(k, n)
        S, D = _smooth_l1_and_grad(ens, X)
        r = S - target
        return (energy_gradient(X) + (lam / m2) * r * D).ravel()

    t0 = time.perf_counter()
    rows = []
    x = X0.ravel().copy()
    report = None
    for lam, tol in schedule.stages:
        def cb(xv, it, fval, gnorm):
            rows.append((0.0, float(fval), float(gnorm),
                         constraint_residual(xv.reshape(k, n)),
                         time.perf_counter() - t0))

        inner = SolverOptions(
            max_iters=opts.max_iters, grad_tol=tol, f_rel_tol=opts.f_rel_tol,
            memory=opts.memory, step_init=opts.step_init, seed=opts.seed,
        )
        report = lbfgs(lambda v: f(v, lam), lambda v: g(v, lam), x, inner, callback=cb)
        x = np.asarray(report.final_point)

    trace = np.array(rows, dtype=float)
    trace[:, 0] = np.arange(len(rows))
    X = x.reshape(k, n)
    final_cfg = Configuration(X)
    projected = Configuration(project_matrix(X))
    l1_res = np.array([l1_residual(ens, X[:, i]) for i in range(n)])
    norm_res = np.abs(np.linalg.norm(X, axis=0) - 1.0)
    return SolveReport(
        final_point=final_cfg,
        final_value=report.final_value,
        iterations=len(rows) - 1,
        converged=report.converged,
        reason=report.reason,
        trace=trace,
        wall_time=time.perf_counter() - t0,
        info={
            "method": "l1",
            "l1_residuals": l1_res,
            "norm_residuals": norm_res,
            "final_residual": constraint_residual(X),
            "projected_configuration": projected,
            "projected_energy": energy(projected),
        },
    )
