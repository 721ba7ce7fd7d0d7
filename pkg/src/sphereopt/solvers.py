"""Unconstrained and projection-based minimizers shared by all methods.

Three workhorses:

* :func:`lbfgs` -- limited-memory quasi-Newton with a strong-Wolfe line
  search, used wherever an analytic gradient exists.
* :func:`nelder_mead` -- the classic derivative-free downhill simplex with
  MATLAB-style coefficients and initial simplex.
* :func:`projected_gd` -- gradient descent on the pair energy with column
  re-normalization after every step.

All solvers are deterministic given their inputs and record a per-iteration
trace of (iteration, objective, gradient norm, residual, elapsed seconds).
"""

from __future__ import annotations

import time
from dataclasses import dataclass, field
from typing import Callable, Optional

import numpy as np

from .geometry import (
    Configuration,
    constraint_residual,
    energy,
    energy_gradient,
    project_matrix,
)
from .gradcheck import NonFiniteObjectiveError


class LineSearchFailureError(RuntimeError):
    """No step with simple decrease found within the trial budget."""


@dataclass(frozen=True)
class SolverOptions:
    """Shared solver knobs.

    grad_tol stops on the gradient norm; f_rel_tol (when positive) stops on
    the relative objective decrease over one iteration; memory is the L-BFGS
    history length; step_init seeds backtracking line searches.
    """

    max_iters: int = 10000
    grad_tol: float = 1e-8
    f_rel_tol: float = 0.0
    memory: int = 10
    step_init: float = 1e-2
    seed: int = 0

    def __post_init__(self):
        if self.max_iters < 1:
            raise ValueError("max_iters must be >= 1")
        if self.grad_tol < 0 or self.f_rel_tol < 0:
            raise ValueError("tolerances must be >= 0")
        if self.memory < 1:
            raise ValueError("memory must be >= 1")
        if self.step_init <= 0:
            raise ValueError("step_init must be > 0")


#: Trace columns, also the fixed CSV header order.
TRACE_COLUMNS = ("iter", "f", "grad_norm", "residual", "elapsed_s")


@dataclass
class SolveReport:
    """Outcome of one solver run.

    trace is a (T, 5) array with columns ``TRACE_COLUMNS``; iterations equals
    the trace length minus one (row 0 records the start point).  info carries
    method-specific extras such as the projected configuration and on-sphere
    energy.
    """

    final_point: object
    final_value: float
    iterations: int
    converged: bool
    reason: str
    trace: np.ndarray
    wall_time: float
    info: dict = field(default_factory=dict)

    def trace_csv(self) -> str:
        lines = [",".join(TRACE_COLUMNS)]
        for row in self.trace:
            lines.append(
                f"{int(row[0])},{row[1]!r},{row[2]!r},{row[3]!r},{row[4]!r}"
            )
        return "\n".join(lines) + "\n"


class _Trace:
    def __init__(self):
        self.rows = []
        self.t0 = time.perf_counter()

    def add(self, it, fval, gnorm, residual=np.nan):
        self.rows.append(
            (float(it), float(fval), float(gnorm), float(residual),
             time.perf_counter() - self.t0)
        )

    def array(self) -> np.ndarray:
        return np.array(self.rows, dtype=float)

    @property
    def elapsed(self) -> float:
        return time.perf_counter() - self.t0


def two_loop_direction(grad, s_list, y_list, gamma) -> np.ndarray:
    """L-BFGS two-loop recursion: returns -H grad for the implicit inverse
    Hessian built from the (s, y) history, scaled initially by gamma."""
    q = grad.copy()
    m = len(s_list)
    alphas = np.empty(m)
    rhos = np.empty(m)
    for j in range(m - 1, -1, -1):
        rhos[j] = 1.0 / float(y_list[j] @ s_list[j])
        alphas[j] = rhos[j] * float(s_list[j] @ q)
        q -= alphas[j] * y_list[j]
    r = gamma * q
    for j in range(m):
        beta = rhos[j] * float(y_list[j] @ r)
        r += (alphas[j] - beta) * s_list[j]
    return -r


def _finite_or_inf(v: float) -> float:
    return v if np.isfinite(v) else np.inf


def _wolfe_search(f, g, x, d, f0, df0, c1=1e-4, c2=0.9, alpha0=1.0, max_trials=40):
    """Strong-Wolfe line search (bracket + zoom with bisection).

    Returns (alpha, f_new, g_new, status) with status one of "wolfe",
    "decrease" (best simple-decrease point, Wolfe not certified) or "stall"
    (the objective cannot be decreased at this precision: some trial matched
    f0 exactly but none went below).  Raises LineSearchFailureError when
    every trial strictly increased the objective.
    """

    def phi(alpha):
        xn = x + alpha * d
        fn = _finite_or_inf(float(f(xn)))
        gn = g(xn)
        return fn, gn, float(gn @ d)

    best = None  # (alpha, f, g) with f < f0
    f_min_seen = np.inf

    def zoom(a_lo, f_lo, a_hi, trials_left):
        nonlocal best, f_min_seen
        for _ in range(trials_left):
            a = 0.5 * (a_lo + a_hi)
            fa, ga, dfa = phi(a)
            f_min_seen = min(f_min_seen, fa)
            if fa < f0 and (best is None or fa < best[1]):
                best = (a, fa, ga)
            if fa > f0 + c1 * a * df0 or fa >= f_lo:
                a_hi = a
            else:
                if abs(dfa) <= -c2 * df0:
                    return a, fa, ga, "wolfe"
                if dfa * (a_hi - a_lo) >= 0:
                    a_hi = a_lo
                a_lo, f_lo = a, fa
        return None

    a_prev, f_prev = 0.0, f0
    a = alpha0
    trials = 0
    while trials < max_trials:
        fa, ga, dfa = phi(a)
        trials += 1
        f_min_seen = min(f_min_seen, fa)
        if fa < f0 and (best is None or fa < best[1]):
            best = (a, fa, ga)
        if fa > f0 + c1 * a * df0 or (trials > 1 and fa >= f_prev):
            out = zoom(a_prev, f_prev, a, max_trials - trials)
            break
        if abs(dfa) <= -c2 * df0:
            return a, fa, ga, "wolfe"
        if dfa >= 0:
            out = zoom(a, fa, a_prev, max_trials - trials)
            break
        a_prev, f_prev = a, fa
        a *= 2.0
    else:
        out = None

    if out is not None:
        return out
    if best is not None:
        return best[0], best[1], best[2], "decrease"
    if f_min_seen <= f0:
        # Flat at machine precision: no representable decrease along d.
        return 0.0, f0, None, "stall"
    raise LineSearchFailureError(
        f"no decreasing step found in {max_trials} trials"
    )


def lbfgs(
    f: Callable[[np.ndarray], float],
    g: Callable[[np.ndarray], np.ndarray],
    x0: np.ndarray,
    opts: SolverOptions = SolverOptions(),
    callback: Optional[Callable] = None,
    residual_fn: Optional[Callable[[np.ndarray], float]] = None,
) -> SolveReport:
    """Limited-memory BFGS with a strong-Wolfe line search.

    Stops on ||grad|| <= grad_tol, on relative objective stall, or at
    max_iters.  The objective sequence is non-increasing across accepted
    iterations.  ``callback(x, it, fval, gnorm)`` fires after every accepted
    iterate (including the start point); ``residual_fn`` fills the residual
    trace column.
    """
    x = np.asarray(x0, dtype=float).ravel().copy()
    fval = float(f(x))
    grad = np.asarray(g(x), dtype=float).ravel().copy()
    if not (np.isfinite(fval) and np.isfinite(grad).all()):
        raise NonFiniteObjectiveError("objective or gradient not finite at x0")

    trace = _Trace()
    res = residual_fn(x) if residual_fn else np.nan
    gnorm = float(np.linalg.norm(grad))
    trace.add(0, fval, gnorm, res)
    if callback:
        callback(x, 0, fval, gnorm)

    s_hist: list[np.ndarray] = []
    y_hist: list[np.ndarray] = []
    gamma = 1.0
    converged = False
    reason = "max-iters"
    it = 0

    while it < opts.max_iters:
        if gnorm <= opts.grad_tol:
            converged, reason = True, "gradient-tol"
            break
        d = two_loop_direction(grad, s_hist, y_hist, gamma) if s_hist else -grad
        df0 = float(grad @ d)
        if df0 >= 0:
            # Defensive reset: history produced a non-descent direction.
            s_hist.clear()
            y_hist.clear()
            d = -grad
            df0 = -gnorm * gnorm
        alpha0 = 1.0 if s_hist else min(1.0, 1.0 / max(gnorm, 1e-30))
        alpha, f_new, g_new, status = _wolfe_search(f, g, x, d, fval, df0, alpha0=alpha0)
        if status == "stall":
            converged, reason = True, "f-tol"
            break

        s = alpha * d
        y = g_new - grad
        sy = float(s @ y)
        if sy > 1e-10 * float(np.linalg.norm(s)) * float(np.linalg.norm(y)):
            s_hist.append(s)
            y_hist.append(y)
            if len(s_hist) > opts.memory:
                s_hist.pop(0)
                y_hist.pop(0)
            gamma = sy / float(y @ y)

        x = x + s
        decrease = fval - f_new
        rel_decrease = decrease / max(1.0, abs(fval))
        fval, grad = f_new, g_new
        gnorm = float(np.linalg.norm(grad))
        it += 1
        res = residual_fn(x) if residual_fn else np.nan
        trace.add(it, fval, gnorm, res)
        if callback:
            callback(x, it, fval, gnorm)
        if rel_decrease == 0.0 or (opts.f_rel_tol > 0 and rel_decrease < opts.f_rel_tol):
            converged, reason = True, "f-tol"
            break
    else:
        # Loop exhausted; one last gradient check so a solve that lands
        # exactly on tolerance at max_iters still counts as converged.
        if gnorm <= opts.grad_tol:
            converged, reason = True, "gradient-tol"

    return SolveReport(
        final_point=x,
        final_value=fval,
        iterations=it,
        converged=converged,
        reason=reason,
        trace=trace.array(),
        wall_time=trace.elapsed,
    )


# MATLAB fminsearch-style simplex coefficients.
_NM_REFLECT = 1.0
_NM_EXPAND = 2.0
_NM_CONTRACT = 0.5
_NM_SHRINK = 0.5
_NM_DIAM_TOL = 1e-8


def nelder_mead(
    f: Callable[[np.ndarray], float],
    x0: np.ndarray,
    opts: SolverOptions = SolverOptions(),
    callback: Optional[Callable] = None,
    residual_fn: Optional[Callable[[np.ndarray], float]] = None,
) -> SolveReport:
    """Downhill simplex minimization (no derivatives).

    Initial simplex: x0 plus a 5% perturbation per coordinate (0.00025 where
    the coordinate is zero).  Stops when the simplex diameter falls below
    1e-8, at max_iters iterations, or at max_iters objective evaluations
    (shrink steps cost a whole simplex of evaluations, so the two budgets
    differ).  The best-vertex objective never increases.
    """
    x0 = np.asarray(x0, dtype=float).ravel()
    m = x0.size
    evals = 0

    def feval(v):
        nonlocal evals
        evals += 1
        return _finite_or_inf(float(f(v)))

    f0 = feval(x0)
    if not np.isfinite(f0):
        raise NonFiniteObjectiveError("objective not finite at x0")

    verts = np.tile(x0, (m + 1, 1))
    for j in range(m):
        verts[j + 1, j] += 0.05 * x0[j] if x0[j] != 0.0 else 0.00025
    fvals = np.array([f0] + [feval(v) for v in verts[1:]])

    trace = _Trace()

    def record(it):
        best = int(np.argmin(fvals))
        res = residual_fn(verts[best]) if residual_fn else np.nan
        trace.add(it, fvals[best], np.nan, res)
        if callback:
            callback(verts[best], it, fvals[best], np.nan)

    record(0)
    converged = False
    reason = "max-iters"
    it = 0
    while it < opts.max_iters and evals < opts.max_iters:
        order = np.argsort(fvals, kind="stable")
        verts, fvals = verts[order], fvals[order]
        diam = float(np.max(np.linalg.norm(verts[1:] - verts[0], axis=1)))
        if diam < _NM_DIAM_TOL:
            converged, reason = True, "f-tol"
            break

        centroid = verts[:-1].mean(axis=0)
        xr = centroid + _NM_REFLECT * (centroid - verts[-1])
        fr = feval(xr)
        if fr < fvals[0]:
            xe = centroid + _NM_EXPAND * (xr - centroid)
            fe = feval(xe)
            if fe < fr:
                verts[-1], fvals[-1] = xe, fe
            else:
                verts[-1], fvals[-1] = xr, fr
        elif fr < fvals[-2]:
            verts[-1], fvals[-1] = xr, fr
        else:
            if fr < fvals[-1]:
                xc = centroid + _NM_CONTRACT * (xr - centroid)
                fc = feval(xc)
                accept = fc <= fr
            else:
                xc = centroid - _NM_CONTRACT * (centroid - verts[-1])
                fc = feval(xc)
                accept = fc < fvals[-1]
            if accept:
                verts[-1], fvals[-1] = xc, fc
            else:
                for j in range(1, m + 1):
                    verts[j] = verts[0] + _NM_SHRINK * (verts[j] - verts[0])
                    fvals[j] = feval(verts[j])
        it += 1
        record(it)

    best = int(np.argmin(fvals))
    return SolveReport(
        final_point=verts[best].copy(),
        final_value=float(fvals[best]),
        iterations=it,
        converged=converged,
        reason=reason,
        trace=trace.array(),
        wall_time=trace.elapsed,
    )


def projected_gd(
    cfg0: Configuration,
    step: float = 1e-2,
    opts: SolverOptions = SolverOptions(),
    callback: Optional[Callable] = None,
) -> SolveReport:
    """Gradient descent on the pair energy with re-projection onto the sphere.

    Every iterate is feasible; the trace records the on-sphere energy.  The
    step is found by halving from ``step`` under an Armijo test against the
    tangential gradient norm (the radial component is annihilated by the
    projection, so it cannot measure progress).
    """
    cfg0.require_feasible()
    X = project_matrix(cfg0.coords.copy())
    fval = energy(X)

    def tangential(G, X):
        radial = np.einsum("ai,ai->i", G, X, optimize=False)
        return G - X * radial

    G = energy_gradient(X)
    T = tangential(G, X)
    gnorm = float(np.linalg.norm(T))

    trace = _Trace()
    trace.add(0, fval, gnorm, constraint_residual(X))
    if callback:
        callback(X, 0, fval, gnorm)

    c1 = 1e-4
    converged = False
    reason = "max-iters"
    it = 0
    while it < opts.max_iters:
        if gnorm <= opts.grad_tol:
            converged, reason = True, "gradient-tol"
            break
        alpha = step
        accepted = None
        for _ in range(60):
            Xt = project_matrix(X - alpha * G)
            ft = energy(Xt)
            if ft <= fval - c1 * alpha * gnorm * gnorm:
                accepted = (Xt, ft)
                break
            alpha *= 0.5
        if accepted is None:
            converged, reason = True, "f-tol"
            break
        Xn, f_new = accepted
        decrease = fval - f_new
        rel_decrease = decrease / max(1.0, abs(fval))
        X, fval = Xn, f_new
        G = energy_gradient(X)
        T = tangential(G, X)
        gnorm = float(np.linalg.norm(T))
        it += 1
        trace.add(it, fval, gnorm, constraint_residual(X))
        if callback:
            callback(X, it, fval, gnorm)
        if opts.f_rel_tol > 0 and rel_decrease < opts.f_rel_tol:
            converged, reason = True, "f-tol"
            break
    else:
        if gnorm <= opts.grad_tol:
            converged, reason = True, "gradient-tol"

    final = Configuration(X)
    return SolveReport(
        final_point=final,
        final_value=fval,
        iterations=it,
        converged=converged,
        reason=reason,
        trace=trace.array(),
        wall_time=trace.elapsed,
        info={"projected_energy": fval, "final_residual": constraint_residual(X)},
    )
