"""Point configurations on the unit (hyper)sphere under inverse-square
repulsion: energy minimization by eight methods plus max-min-distance
packing."""

from .geometry import (
    AngularConfiguration,
    CoincidentPointsError,
    Configuration,
    DimensionMismatchError,
    ZeroNormColumnError,
    constraint_residual,
    energy,
    energy_gradient,
    project_to_sphere,
    random_configuration,
    spherical_energy,
    spherical_gradient,
    to_cartesian,
    to_spherical,
)
from .gradcheck import GradCheckReport, NonFiniteObjectiveError, check_gradient, fd_gradient
from .solvers import (
    LineSearchFailureError,
    SolveReport,
    SolverOptions,
    lbfgs,
    nelder_mead,
    projected_gd,
)
from .relaxation import (
    ContinuationSchedule,
    Multipliers,
    ScheduleEmptyError,
    auglag_gradient,
    auglag_objective,
    auglag_solve,
    penalty_gradient,
    penalty_objective,
    penalty_solve,
)
from .sgd import DivergenceDetectedError, SgdOptions, pair_gradient, sample_pair, sgd_solve
from .forces import ForceOptions, force_relax, net_force, sweep
from .packing import PackingState, PackOptions, TooFewPointsError, center_step, equalize_step, pack, three_nearest
from .l1reform import ProjectionEnsemble, l1_penalty_solve, l1_residual, make_ensemble
from .harness import BenchmarkTable, InvalidSpecError, RunSpec, benchmark, export_points, run

__version__ = "0.1.0"

__all__ = [
    "AngularConfiguration",
    "BenchmarkTable",
    "CoincidentPointsError",
    "Configuration",
    "ContinuationSchedule",
    "DimensionMismatchError",
    "DivergenceDetectedError",
    "ForceOptions",
    "GradCheckReport",
    "InvalidSpecError",
    "LineSearchFailureError",
    "Multipliers",
    "NonFiniteObjectiveError",
    "PackOptions",
    "PackingState",
    "ProjectionEnsemble",
    "RunSpec",
    "ScheduleEmptyError",
    "SgdOptions",
    "SolveReport",
    "SolverOptions",
    "TooFewPointsError",
    "ZeroNormColumnError",
    "auglag_gradient",
    "auglag_objective",
    "auglag_solve",
    "benchmark",
    "center_step",
    "check_gradient",
    "constraint_residual",
    "energy",
    "energy_gradient",
    "equalize_step",
    "export_points",
    "fd_gradient",
    "force_relax",
    "l1_penalty_solve",
    "l1_residual",
    "lbfgs",
    "make_ensemble",
    "nelder_mead",
    "net_force",
    "pack",
    "pair_gradient",
    "penalty_gradient",
    "penalty_objective",
    "penalty_solve",
    "project_to_sphere",
    "projected_gd",
    "random_configuration",
    "run",
    "sample_pair",
    "sgd_solve",
    "spherical_energy",
    "spherical_gradient",
    "sweep",
    "three_nearest",
    "to_cartesian",
    "to_spherical",
]
