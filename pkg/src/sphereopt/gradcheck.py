"""Forward finite-difference verification of analytic gradients.

Every differentiable objective in the package is validated against one-sided
difference quotients (f(x + h e_j) - f(x)) / h.  Forward differences are
first-order accurate, so the pass threshold is the relative norm test
||G - GFD|| / max(1, ||G||) < 1e-4 rather than anything tighter.
"""

from __future__ import annotations

from dataclasses import dataclass

import numpy as np


class NonFiniteObjectiveError(ValueError):
    """The objective returned NaN/Inf at the base point or a probe point."""


#: Default forward-difference step: balances truncation against round-off
#: for O(1) coordinates.
DEFAULT_STEP = 1e-6

#: check_gradient passes when diff_norm / max(1, ||analytic||) is below this.
PASS_THRESHOLD = 1e-4


@dataclass(frozen=True)
class GradCheckReport:
    """Comparison of an analytic gradient against finite differences.

    max_diff is the signed entry of analytic - numeric with the largest
    magnitude, found at max_diff_index; diff_norm is the Euclidean norm of
    the difference vector.
    """

    analytic: np.ndarray
    numeric: np.ndarray
    max_diff: float
    max_diff_index: int
    diff_norm: float
    step: float
    passed: bool

    @property
    def rel_diff(self) -> float:
        return self.diff_norm / max(1.0, float(np.linalg.norm(self.analytic)))

    def format_text(self) -> str:
        lines = [
            f"{'index':>6}  {'analytic':>18}  {'numeric':>18}  {'diff':>12}",
        ]
        diffs = self.analytic - self.numeric
        for j in range(self.analytic.size):
            lines.append(
                f"{j:>6}  {self.analytic[j]:>18.10g}  {self.numeric[j]:>18.10g}"
                f"  {diffs[j]:>12.4e}"
            )
        lines.append(f"max diff:       {self.max_diff:.6e} (index {self.max_diff_index})")
        lines.append(f"diff norm:      {self.diff_norm:.6e}")
        lines.append(f"relative diff:  {self.rel_diff:.6e}")
        lines.append(f"step:           {self.step:g}")
        lines.append(f"result:         {'pass' if self.passed else 'FAIL'}")
        return "\n".join(lines)

    def to_dict(self) -> dict:
        return {
            "analytic": [float(v) for v in self.analytic],
            "numeric": [float(v) for v in self.numeric],
            "max_diff": self.max_diff,
            "max_diff_index": self.max_diff_index,
            "diff_norm": self.diff_norm,
            "relative_diff": self.rel_diff,
            "step": self.step,
            "passed": self.passed,
        }


def fd_gradient(f, x: np.ndarray, h: float = DEFAULT_STEP) -> np.ndarray:
    """One-sided forward-difference gradient of a scalar function.

    Evaluates f once at x and once per coordinate at x + h e_j; raises
    NonFiniteObjectiveError if any evaluation is NaN/Inf.
    """
    x = np.asarray(x, dtype=float).ravel()
    f0 = float(f(x))
    if not np.isfinite(f0):
        raise NonFiniteObjectiveError("objective is not finite at the base point")
    g = np.empty_like(x)
    for j in range(x.size):
        xp = x.copy()
        xp[j] += h
        fj = float(f(xp))
        if not np.isfinite(fj):
            raise NonFiniteObjectiveError(
                f"objective is not finite at probe of coordinate {j}"
            )
        g[j] = (fj - f0) / h
    return g


def check_gradient(f, g, x: np.ndarray, h: float = DEFAULT_STEP) -> GradCheckReport:
    """Compare the analytic gradient g(x) against forward differences of f."""
    x = np.asarray(x, dtype=float).ravel()
    analytic = np.asarray(g(x), dtype=float).ravel()
    numeric = fd_gradient(f, x, h)
    diffs = analytic - numeric
    idx = int(np.argmax(np.abs(diffs)))
    diff_norm = float(np.linalg.norm(diffs))
    rel = diff_norm / max(1.0, float(np.linalg.norm(analytic)))
    return GradCheckReport(
        analytic=analytic,
        numeric=numeric,
        max_diff=float(diffs[idx]),
        max_diff_index=idx,
        diff_norm=diff_norm,
        step=h,
        passed=rel < PASS_THRESHOLD,
    )
