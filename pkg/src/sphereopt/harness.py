"""Run orchestration: method dispatch, multi-start, benchmarking, file I/O.

A RunSpec names one of the nine methods plus its sizes and parameters; the
harness expands it into `starts` independent runs with derived seeds
(base seed + start index), executes them (optionally on a thread pool), and
keeps the best by on-sphere energy (min distance for packing).  Everything
downstream -- report JSON, trace CSV, benchmark tables -- is built from the
same SolveReport objects the library functions return.
"""

from __future__ import annotations

import json
import math
import os
import time
from concurrent.futures import ThreadPoolExecutor
from dataclasses import dataclass, field
from typing import Optional

import numpy as np

from . import forces, l1reform, packing, relaxation, sgd
from .geometry import (
    Configuration,
    constraint_residual,
    energy,
    project_matrix,
    random_configuration,
    spherical_energy_arrays,
    spherical_gradient_arrays,
    to_cartesian,
    to_spherical,
    AngularConfiguration,
)
from .gradcheck import check_gradient
from .solvers import (
    SolveReport,
    SolverOptions,
    TRACE_COLUMNS,
    lbfgs,
    nelder_mead,
    projected_gd,
)


class InvalidSpecError(ValueError):
    """A RunSpec that fails validation before any compute."""


METHODS = (
    "spherical-lbfgs",
    "projected-gd",
    "penalty",
    "auglag",
    "sgd",
    "nelder-mead",
    "force",
    "l1",
    "pack",
)

#: Methods whose narration is specific to the ordinary sphere.
_K3_ONLY = ("spherical-lbfgs", "force", "pack")

_KNOWN_PARAMS = {
    "spherical-lbfgs": {"grad_tol", "max_iters", "memory"},
    "projected-gd": {"step", "grad_tol", "max_iters"},
    "penalty": {"lambda_schedule", "max_iters", "grad_tol"},
    "auglag": {"lambda_schedule", "max_iters", "grad_tol"},
    "sgd": {"lam", "gamma", "iters", "schedule", "trace_every", "burn_in_frac",
            "t0", "max_step", "max_step_frac"},
    "nelder-mead": {"lambdas", "max_iters", "restarts"},
    "force": {"eta", "passes", "eta_decay", "stop_tol"},
    "l1": {"m", "lambda_schedule", "max_iters", "ensemble_seed"},
    "pack": {"restarts", "perturb_scale", "center_sweeps", "equalize_rounds",
             "pull"},
}


@dataclass(frozen=True)
class RunSpec:
    """One solve request: method, problem size, multi-start budget, seeds."""

    method: str
    n: int
    k: int = 3
    starts: int = 1
    seed: int = 0
    method_params: dict = field(default_factory=dict)
    output_dir: Optional[str] = None

    def __post_init__(self):
        if self.method not in METHODS:
            raise InvalidSpecError(
                f"unknown method {self.method!r}; choose from {METHODS}"
            )
        if self.n < 2:
            raise InvalidSpecError(f"need n >= 2, got n={self.n}")
        if self.k < 2:
            raise InvalidSpecError(f"need k >= 2, got k={self.k}")
        if self.method in _K3_ONLY and self.k != 3:
            raise InvalidSpecError(f"method {self.method!r} requires k=3, got k={self.k}")
        if self.starts < 1:
            raise InvalidSpecError("starts must be >= 1")
        unknown = set(self.method_params) - _KNOWN_PARAMS[self.method]
        if unknown:
            raise InvalidSpecError(
                f"unknown parameters for {self.method!r}: {sorted(unknown)}"
            )

    @classmethod
    def from_dict(cls, obj: dict) -> "RunSpec":
        allowed = {"method", "n", "k", "starts", "seed", "method_params", "output_dir"}
        unknown = set(obj) - allowed
        if unknown:
            raise InvalidSpecError(f"unknown RunSpec fields: {sorted(unknown)}")
        if "method" not in obj or "n" not in obj:
            raise InvalidSpecError("RunSpec needs at least 'method' and 'n'")
        return cls(
            method=obj["method"],
            n=int(obj["n"]),
            k=int(obj.get("k", 3)),
            starts=int(obj.get("starts", 1)),
            seed=int(obj.get("seed", 0)),
            method_params=dict(obj.get("method_params", {})),
            output_dir=obj.get("output_dir"),
        )

    def to_dict(self) -> dict:
        return {
            "method": self.method,
            "n": self.n,
            "k": self.k,
            "starts": self.starts,
            "seed": self.seed,
            "method_params": dict(self.method_params),
            "output_dir": self.output_dir,
        }


# ---------------------------------------------------------------------------
# Per-method defaults and dispatch


def sgd_defaults(n: int) -> dict:
    """Stability-driven SGD defaults.

    The penalty weight grows ~n^2 so the stationary feasibility bias
    (~ per-point repulsion / lam) stays small at large n.  The step keeps
    both gamma*lam bounded (stable radial dynamics) and the repulsion kick
    at the equilibrium nearest-neighbor distance (~n^-1/2) well under that
    distance, which forces gamma ~ n^-2.5.
    """
    lam = float(min(max(100.0, 2.0 * n * n), 2.5e4))
    gamma = float(min(0.25 / lam, 0.25 / n ** 2.5))
    iters = int(max(150_000, 25 * int(n ** 2.5)))
    # ~1000 trace rows regardless of budget: tracing costs O(n^2) per row and
    # would otherwise dominate the wall time of long runs
    trace_every = int(max(100, iters // 1000))
    return {"lam": lam, "gamma": gamma, "iters": iters, "trace_every": trace_every}


def _schedule_from_param(value) -> relaxation.ContinuationSchedule:
    if isinstance(value, relaxation.ContinuationSchedule):
        return value
    return relaxation.ContinuationSchedule(stages=tuple(value))


def _solve_spherical_lbfgs(n, k, seed, params) -> SolveReport:
    cfg0 = random_configuration(n, 3, seed)
    a0 = to_spherical(cfg0)
    v0 = np.concatenate([a0.phi, a0.theta])

    def f(v):
        return spherical_energy_arrays(v[:n], v[n:])

    def g(v):
        dphi, dtheta = spherical_gradient_arrays(v[:n], v[n:])
        return np.concatenate([dphi, dtheta])

    opts = SolverOptions(
        max_iters=int(params.get("max_iters", 10000)),
        grad_tol=float(params.get("grad_tol", 1e-8)),
        memory=int(params.get("memory", 10)),
        seed=seed,
    )
    report = lbfgs(f, g, v0, opts)
    v = np.asarray(report.final_point)
    cfg = to_cartesian(AngularConfiguration(v[:n], v[n:]))
    report.final_point = cfg
    report.info.update(
        method="spherical-lbfgs",
        projected_configuration=cfg,
        projected_energy=energy(cfg),
        final_residual=constraint_residual(cfg),
    )
    return report


def _solve_projected_gd(n, k, seed, params) -> SolveReport:
    cfg0 = random_configuration(n, k, seed)
    opts = SolverOptions(
        max_iters=int(params.get("max_iters", 200_000)),
        grad_tol=float(params.get("grad_tol", 1e-6)),
        seed=seed,
    )
    report = projected_gd(cfg0, step=float(params.get("step", 1e-2)), opts=opts)
    report.info.update(
        method="projected-gd",
        projected_configuration=report.final_point,
    )
    return report


def _relaxation_opts(params, seed) -> SolverOptions:
    return SolverOptions(
        max_iters=int(params.get("max_iters", 2000)),
        grad_tol=float(params.get("grad_tol", 1e-8)),
        seed=seed,
    )


def _solve_penalty(n, k, seed, params) -> SolveReport:
    cfg0 = random_configuration(n, k, seed)
    schedule = (_schedule_from_param(params["lambda_schedule"])
                if "lambda_schedule" in params else None)
    return relaxation.penalty_solve(cfg0, schedule, _relaxation_opts(params, seed))


def _solve_auglag(n, k, seed, params) -> SolveReport:
    cfg0 = random_configuration(n, k, seed)
    schedule = (_schedule_from_param(params["lambda_schedule"])
                if "lambda_schedule" in params else None)
    return relaxation.auglag_solve(cfg0, schedule, _relaxation_opts(params, seed))


def _solve_sgd(n, k, seed, params) -> SolveReport:
    cfg0 = random_configuration(n, k, seed)
    defaults = sgd_defaults(n)
    opts = sgd.SgdOptions(
        lam=float(params.get("lam", defaults["lam"])),
        gamma=float(params.get("gamma", defaults["gamma"])),
        iters=int(params.get("iters", defaults["iters"])),
        seed=seed,
        schedule=params.get("schedule", "inv_t"),
        trace_every=int(params.get("trace_every", defaults["trace_every"])),
        burn_in_frac=float(params.get("burn_in_frac", 0.2)),
        t0=params.get("t0"),
        max_step=float(params.get("max_step", 0.5)),
        max_step_frac=float(params.get("max_step_frac", 0.25)),
    )
    return sgd.sgd_solve(cfg0, opts)


def _solve_nelder_mead(n, k, seed, params) -> SolveReport:
    """Simplex minimization of the penalized objective with lam-continuation.

    Each stage restarts the simplex from the incumbent a few times; a fresh
    simplex escapes the collapsed shapes the method is prone to in higher
    dimensions.  The objective goes through the compiled penalized-value
    kernel: a simplex run is all function evaluations, so their cost is the
    whole wall time.
    """
    cfg0 = random_configuration(n, k, seed)
    lambdas = [float(v) for v in params.get("lambdas", (10.0, 1000.0))]
    max_iters = int(params.get("max_iters", 500 * n * k))
    restarts = int(params.get("restarts", 5))
    sgd.warm_up_jit()

    t0 = time.perf_counter()
    x = cfg0.coords.ravel().copy()
    rows = []
    last = None
    for lam in lambdas:
        def f(v, lam=lam):
            return float(sgd._penalized_value(v.reshape(k, n), lam))

        fbest = f(x)
        for _ in range(restarts + 1):
            def cb(xv, it, fval, gnorm):
                rows.append((0.0, float(fval), float(gnorm),
                             constraint_residual(xv.reshape(k, n)),
                             time.perf_counter() - t0))

            last = nelder_mead(f, x, SolverOptions(max_iters=max_iters, seed=seed),
                               callback=cb)
            x = np.asarray(last.final_point)
            if fbest - last.final_value < 1e-10 * max(1.0, abs(fbest)):
                break
            fbest = last.final_value

    trace = np.array(rows, dtype=float)
    trace[:, 0] = np.arange(len(rows))
    X = x.reshape(k, n)
    final = Configuration(X)
    projected = Configuration(project_matrix(X))
    report = SolveReport(
        final_point=final,
        final_value=last.final_value,
        iterations=len(rows) - 1,
        converged=last.converged,
        reason=last.reason,
        trace=trace,
        wall_time=time.perf_counter() - t0,
        info={
            "method": "nelder-mead",
            "final_residual": constraint_residual(X),
            "projected_configuration": projected,
            "projected_energy": energy(projected),
        },
    )
    return report


def _solve_force(n, k, seed, params) -> SolveReport:
    cfg0 = random_configuration(n, 3, seed)
    opts = forces.ForceOptions(
        eta=float(params.get("eta", 0.05)),
        passes=int(params.get("passes", 6000)),
        eta_decay=float(params.get("eta_decay", 0.9995)),
        stop_tol=float(params.get("stop_tol", 1e-10)),
    )
    report = forces.force_relax(cfg0, opts)
    report.info.setdefault("projected_configuration", report.final_point)
    return report


def _solve_l1(n, k, seed, params) -> SolveReport:
    cfg0 = random_configuration(n, k, seed)
    m = int(params.get("m", 1000))
    ens = l1reform.make_ensemble(m, k, int(params.get("ensemble_seed", seed + 10_000)))
    schedule = (_schedule_from_param(params["lambda_schedule"])
                if "lambda_schedule" in params else None)
    opts = SolverOptions(max_iters=int(params.get("max_iters", 2000)), seed=seed)
    return l1reform.l1_penalty_solve(cfg0, ens, schedule, opts)


def _solve_pack(n, k, seed, params) -> SolveReport:
    opts = packing.PackOptions(
        restarts=int(params.get("restarts", 40)),
        perturb_scale=float(params.get("perturb_scale", 0.01)),
        seed=seed,
        center_sweeps=int(params.get("center_sweeps", 500)),
        equalize_rounds=int(params.get("equalize_rounds", 60)),
        pull=float(params.get("pull", 0.1)),
    )
    t0 = time.perf_counter()
    state = packing.pack(n, opts)
    wall = time.perf_counter() - t0
    trace = np.array([[0.0, state.d_min, np.nan,
                       constraint_residual(state.cfg), wall]])
    return SolveReport(
        final_point=state.cfg,
        final_value=state.d_min,
        iterations=0,
        converged=True,
        reason="f-tol",
        trace=trace,
        wall_time=wall,
        info={
            "method": "pack",
            "d_min": state.d_min,
            "per_point_dmin": state.per_point_dmin,
            "projected_configuration": state.cfg,
            "projected_energy": energy(state.cfg),
            "final_residual": constraint_residual(state.cfg),
        },
    )


_DISPATCH = {
    "spherical-lbfgs": _solve_spherical_lbfgs,
    "projected-gd": _solve_projected_gd,
    "penalty": _solve_penalty,
    "auglag": _solve_auglag,
    "sgd": _solve_sgd,
    "nelder-mead": _solve_nelder_mead,
    "force": _solve_force,
    "l1": _solve_l1,
    "pack": _solve_pack,
}


def solve_single(method: str, n: int, k: int, seed: int, params: dict) -> SolveReport:
    """Run one start of one method.  Seeds fully determine the outcome."""
    return _DISPATCH[method](n, k, seed, params)


@dataclass
class MultiStartResult:
    spec: RunSpec
    best: SolveReport
    best_start: int
    reports: list
    start_indices: list
    failures: list  # (start index, repr of the error)

    @property
    def best_energy(self) -> float:
        if self.spec.method == "pack":
            return self.best.info["d_min"]
        return self.best.info["projected_energy"]


def _score(spec: RunSpec, report: SolveReport) -> float:
    # pack maximizes min-distance; everything else minimizes on-sphere energy
    if spec.method == "pack":
        return -report.info["d_min"]
    return report.info["projected_energy"]


def run_multi_start(spec: RunSpec, threads: int = 1) -> MultiStartResult:
    """Execute spec.starts independent runs (seed + index) and keep the best.

    With threads > 1 the starts run on a thread pool; results are reduced in
    start order, so the outcome is identical to the sequential one.
    """
    if spec.method == "sgd":
        sgd.warm_up_jit()  # keep jit compilation out of the timed runs
    seeds = [spec.seed + i for i in range(spec.starts)]

    def one(seed):
        return solve_single(spec.method, spec.n, spec.k, seed, spec.method_params)

    results: list = [None] * spec.starts
    failures = []
    if threads > 1:
        with ThreadPoolExecutor(max_workers=threads) as pool:
            futures = list(map(lambda s: pool.submit(one, s), seeds))
        for i, fut in enumerate(futures):
            try:
                results[i] = fut.result()
            except Exception as exc:  # noqa: BLE001 - recorded, not hidden
                failures.append((i, repr(exc)))
    else:
        for i, seed in enumerate(seeds):
            try:
                results[i] = one(seed)
            except Exception as exc:  # noqa: BLE001
                failures.append((i, repr(exc)))

    reports = [r for r in results if r is not None]
    start_indices = [i for i, r in enumerate(results) if r is not None]
    if not reports:
        raise RuntimeError(
            f"all {spec.starts} starts failed; first failure: {failures[0][1]}"
        )
    scores = [(_score(spec, r), i) for i, r in enumerate(results) if r is not None]
    _, best_idx = min(scores)
    return MultiStartResult(
        spec=spec,
        best=results[best_idx],
        best_start=best_idx,
        reports=reports,
        start_indices=start_indices,
        failures=failures,
    )


# ---------------------------------------------------------------------------
# Files


def export_points(cfg: Configuration, path: str, format: str = "json") -> None:
    """Write a configuration to disk.

    json: the shared {"k", "n", "coords"} object (bitwise round-trip).
    csv: one row per point, k full-precision columns.
    """
    if format == "json":
        payload = cfg.to_json()
    elif format == "csv":
        lines = [",".join(repr(float(v)) for v in cfg.coords[:, i])
                 for i in range(cfg.n)]
        payload = "\n".join(lines) + "\n"
    else:
        raise ValueError(f"unknown export format {format!r}")
    try:
        with open(path, "w", encoding="utf-8") as fh:
            fh.write(payload)
    except OSError as exc:
        raise IOError(f"cannot write {path}: {exc}") from exc


def _report_summary(spec: RunSpec, result: MultiStartResult) -> dict:
    best = result.best
    per_start = []
    for i, rep in zip(result.start_indices, result.reports):
        per_start.append({
            "start": i,
            "projected_energy": rep.info.get("projected_energy"),
            "final_value": rep.final_value,
            "final_residual": rep.info.get("final_residual"),
            "iterations": rep.iterations,
            "converged": rep.converged,
            "reason": rep.reason,
            "wall_time_s": rep.wall_time,
        })
    summary = {
        "spec": spec.to_dict(),
        "best_start": result.best_start,
        "best_projected_energy": best.info.get("projected_energy"),
        "best_final_value": best.final_value,
        "best_residual": best.info.get("final_residual"),
        "best_reason": best.reason,
        "best_converged": best.converged,
        "failures": result.failures,
        "per_start": per_start,
    }
    if spec.method == "pack":
        summary["d_min"] = best.info["d_min"]
    return summary


def run(spec: RunSpec, threads: int = 1, quiet: bool = True):
    """Execute a RunSpec and write configuration/trace/report files.

    Returns (result, exit_code): 0 when the best run converged, 2 when it
    stopped on the iteration budget, 1 reserved for errors (raised).
    """
    result = run_multi_start(spec, threads=threads)
    best = result.best
    if spec.output_dir:
        os.makedirs(spec.output_dir, exist_ok=True)
        cfg = best.info.get("projected_configuration") or best.final_point
        export_points(cfg, os.path.join(spec.output_dir, "config.json"), "json")
        with open(os.path.join(spec.output_dir, "trace.csv"), "w", encoding="utf-8") as fh:
            fh.write(best.trace_csv())
        with open(os.path.join(spec.output_dir, "report.json"), "w", encoding="utf-8") as fh:
            json.dump(_report_summary(spec, result), fh, indent=2)
    exit_code = 0 if best.converged else (2 if best.reason == "max-iters" else 1)
    if not quiet:
        label = "d_min" if spec.method == "pack" else "best energy"
        print(f"{spec.method} n={spec.n} k={spec.k} starts={spec.starts}: "
              f"{label}={result.best_energy:.6f} "
              f"residual={best.info.get('final_residual', float('nan')):.3e} "
              f"({best.reason})")
    return result, exit_code


# ---------------------------------------------------------------------------
# Benchmarks


@dataclass(frozen=True)
class BenchmarkRow:
    method: str
    n: int
    best_projected_energy: float
    mean_energy: float
    best_residual: float
    mean_wall_time_s: float
    starts: int
    failures: int = 0
    error: Optional[str] = None


@dataclass
class BenchmarkTable:
    rows: list

    CSV_HEADER = ("method,n,best_projected_energy,mean_energy,best_residual,"
                  "mean_wall_time_s,starts,failures")

    def to_csv(self) -> str:
        lines = [self.CSV_HEADER]
        for r in self.rows:
            lines.append(
                f"{r.method},{r.n},{r.best_projected_energy!r},{r.mean_energy!r},"
                f"{r.best_residual!r},{r.mean_wall_time_s!r},{r.starts},{r.failures}"
            )
        return "\n".join(lines) + "\n"

    def format_text(self) -> str:
        head = (f"{'method':<16}{'n':>5}{'best energy':>16}{'mean energy':>16}"
                f"{'best residual':>16}{'mean time (s)':>15}{'starts':>8}")
        lines = [head, "-" * len(head)]
        for r in self.rows:
            lines.append(
                f"{r.method:<16}{r.n:>5}{r.best_projected_energy:>16.6f}"
                f"{r.mean_energy:>16.6f}{r.best_residual:>16.3e}"
                f"{r.mean_wall_time_s:>15.4f}{r.starts:>8}"
            )
        return "\n".join(lines)


def benchmark(
    methods,
    n_list,
    starts: int = 20,
    seed: int = 0,
    k: int = 3,
    out_dir: Optional[str] = None,
    threads: int = 1,
    method_params: Optional[dict] = None,
) -> BenchmarkTable:
    """One row per (method, n): best/mean projected energy, best residual,
    mean solve wall time.  Per-run traces land in out_dir/traces/ when an
    output directory is given.  A failed start is recorded in the row, a
    fully failed row is emitted with NaNs rather than aborting the table.
    """
    rows = []
    trace_dir = None
    if out_dir:
        trace_dir = os.path.join(out_dir, "traces")
        os.makedirs(trace_dir, exist_ok=True)
    for method in methods:
        for n in n_list:
            params = dict((method_params or {}).get(method, {}))
            spec = RunSpec(method=method, n=n, k=k, starts=starts,
                           seed=seed + len(rows), method_params=params)
            try:
                result = run_multi_start(spec, threads=threads)
            except Exception as exc:  # noqa: BLE001 -
                rows.append(BenchmarkRow(
                    method=method, n=n,
                    best_projected_energy=math.nan, mean_energy=math.nan,
                    best_residual=math.nan, mean_wall_time_s=math.nan,
                    starts=starts, failures=starts, error=repr(exc),
                ))
                continue
            energies = [r.info["projected_energy"] for r in result.reports]
            rows.append(BenchmarkRow(
                method=method, n=n,
                best_projected_energy=float(min(energies)),
                mean_energy=float(np.mean(energies)),
                best_residual=float(result.best.info.get("final_residual", math.nan)),
                mean_wall_time_s=float(np.mean([r.wall_time for r in result.reports])),
                starts=starts,
                failures=len(result.failures),
            ))
            if trace_dir:
                for i, rep in enumerate(result.reports):
                    name = f"{method}_n{n}_start{i}.csv"
                    with open(os.path.join(trace_dir, name), "w", encoding="utf-8") as fh:
                        fh.write(rep.trace_csv())
    table = BenchmarkTable(rows=rows)
    if out_dir:
        os.makedirs(out_dir, exist_ok=True)
        with open(os.path.join(out_dir, "benchmark.csv"), "w", encoding="utf-8") as fh:
            fh.write(table.to_csv())
    return table


# ---------------------------------------------------------------------------
# Gradient-check target registry (used by the CLI)


def gradcheck_objective(objective: str, n: int, k: int, seed: int):
    """Build (f, g, x0) for one of the named differentiable objectives."""
    rng = np.random.default_rng(seed)
    if objective == "spherical":
        cfg = random_configuration(n, 3, seed)
        a = to_spherical(cfg)
        x0 = np.concatenate([a.phi, a.theta])

        def f(v):
            return spherical_energy_arrays(v[:n], v[n:])

        def g(v):
            dphi, dtheta = spherical_gradient_arrays(v[:n], v[n:])
            return np.concatenate([dphi, dtheta])

        return f, g, x0
    if objective == "penalty":
        lam = 1.0
        X0 = 2.0 * rng.random((k, n)) - 1.0

        def f(v):
            return relaxation.penalty_objective(v.reshape(k, n), lam)

        def g(v):
            return relaxation.penalty_gradient(v.reshape(k, n), lam).ravel()

        return f, g, X0.ravel()
    if objective == "auglag":
        lam = 1.0
        mu = rng.standard_normal(n)
        X0 = random_configuration(n, k, seed).coords.copy()

        def f(v):
            return relaxation.auglag_objective(v.reshape(k, n), lam, mu)

        def g(v):
            return relaxation.auglag_gradient(v.reshape(k, n), lam, mu).ravel()

        return f, g, X0.ravel()
    if objective == "pair":
        # The single-pair stochastic objective for points 0 and 1 of an
        # n-point configuration; the (n-1) scale matches the pair gradient.
        lam = 1.0
        scale = n - 1
        X_full = random_configuration(n, k, seed).coords.copy()
        x0 = np.concatenate([X_full[:, 0], X_full[:, 1]])

        def f(v):
            a, b = v[:k], v[k:]
            d = a - b
            ca = float(a @ a) - 1.0
            cb = float(b @ b) - 1.0
            return (1.0 / float(d @ d)
                    + lam / (4.0 * scale) * (ca * ca + cb * cb))

        def g(v):
            X = X_full.copy()
            X[:, 0] = v[:k]
            X[:, 1] = v[k:]
            gi = sgd.pair_gradient(X, 0, 1, lam)
            gl = sgd.pair_gradient(X, 1, 0, lam)
            return np.concatenate([gi, gl])

        return f, g, x0
    raise InvalidSpecError(
        f"unknown objective {objective!r}; choose spherical|penalty|auglag|pair"
    )


def run_gradcheck(objective: str, n: int, k: int, seed: int, h: float = 1e-6):
    f, g, x0 = gradcheck_objective(objective, n, k, seed)
    return check_gradient(f, g, x0, h)
