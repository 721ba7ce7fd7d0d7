"""Configurations of points on the unit (hyper)sphere and the inverse-square
pair energy.

A configuration is a k x n matrix whose columns are the points.  The energy of
a configuration is the sum of 1/d^2 over all unordered pairs, where d is the
Euclidean pair distance.  For k = 3 the points can equivalently be described
by polar/azimuthal angle arrays, which turns the constrained problem into an
unconstrained one; both parameterizations and their analytic gradients live
here, together with the sphere projection and feasibility measures used by
every solver.
"""

from __future__ import annotations

import json
import math
from dataclasses import dataclass, field

import numpy as np

#: Pairwise distances below this raise CoincidentPointsError instead of
#: producing huge finite energies that destabilize line searches.
DIST_FLOOR = 1e-12

#: Default feasibility tolerance: a column x is on-sphere when
#: | ||x|| - 1 | <= TOL_FEAS.
TOL_FEAS = 1e-8


class CoincidentPointsError(ValueError):
    """Two points are closer than the minimum supported pair distance."""


class ZeroNormColumnError(ValueError):
    """A column that must be normalized has (near-)zero norm."""


class DimensionMismatchError(ValueError):
    """An operation restricted to a specific ambient dimension got another."""


def _as_matrix(cfg) -> np.ndarray:
    """Accept a Configuration or a bare (k, n) array and return the array."""
    if isinstance(cfg, Configuration):
        return cfg.coords
    X = np.asarray(cfg, dtype=float)
    if X.ndim != 2:
        raise DimensionMismatchError(f"expected a (k, n) matrix, got shape {X.shape}")
    return X


@dataclass(frozen=True)
class Configuration:
    """n points in R^k, stored as the columns of a k x n matrix.

    The matrix is copied on construction and frozen (read-only), so a
    Configuration never changes after it exists; solvers produce successors
    instead of mutating.  Feasibility (unit-norm columns) is *not* an
    invariant of the type: relaxed solvers legitimately hold off-sphere
    configurations.  Use :meth:`require_feasible` where the contract needs it.
    """

    coords: np.ndarray

    def __post_init__(self):
        X = np.array(self.coords, dtype=float, copy=True)
        if X.ndim != 2:
            raise DimensionMismatchError(f"coords must be 2-D, got shape {X.shape}")
        k, n = X.shape
        if k < 2:
            raise DimensionMismatchError(f"need dimension k >= 2, got k={k}")
        if n < 2:
            raise ValueError(f"need at least 2 points, got n={n}")
        if not np.isfinite(X).all():
            raise ValueError("coords contain NaN/Inf")
        X.flags.writeable = False
        object.__setattr__(self, "coords", X)

    @property
    def k(self) -> int:
        return self.coords.shape[0]

    @property
    def n(self) -> int:
        return self.coords.shape[1]

    def is_feasible(self, tol_feas: float = TOL_FEAS) -> bool:
        norms = np.linalg.norm(self.coords, axis=0)
        return bool(np.all(np.abs(norms - 1.0) <= tol_feas))

    def require_feasible(self, tol_feas: float = TOL_FEAS) -> "Configuration":
        if not self.is_feasible(tol_feas):
            worst = float(np.abs(np.linalg.norm(self.coords, axis=0) - 1.0).max())
            raise ValueError(
                f"configuration is not on the unit sphere (worst norm "
                f"deviation {worst:.3e} > {tol_feas:.1e})"
            )
        return self

    def to_json(self) -> str:
        """Serialize as {"k":, "n":, "coords": [[column 0...], ...]}.

        Floats go through repr (shortest round-trip decimal), so a dump/load
        cycle reproduces the matrix bitwise.
        """
        cols = [[float(v) for v in self.coords[:, i]] for i in range(self.n)]
        return json.dumps({"k": self.k, "n": self.n, "coords": cols})

    @classmethod
    def from_json(cls, text: str) -> "Configuration":
        obj = json.loads(text)
        cols = np.array(obj["coords"], dtype=float)
        if cols.shape != (obj["n"], obj["k"]):
            raise ValueError(
                f"coords shape {cols.shape} inconsistent with "
                f"k={obj['k']}, n={obj['n']}"
            )
        return cls(cols.T)


@dataclass(frozen=True)
class AngularConfiguration:
    """n points on the 2-sphere given by polar angles phi and azimuths theta.

    Angles are wrapped on construction: phi into [0, pi] and theta into
    [0, 2*pi), adjusting theta by pi whenever the polar fold flips the sign
    of sin(phi), so the represented points are unchanged.
    """

    phi: np.ndarray
    theta: np.ndarray

    def __post_init__(self):
        phi = np.array(self.phi, dtype=float, copy=True).ravel()
        theta = np.array(self.theta, dtype=float, copy=True).ravel()
        if phi.shape != theta.shape:
            raise ValueError("phi and theta must have the same length")
        if phi.size < 2:
            raise ValueError(f"need at least 2 points, got n={phi.size}")
        if not (np.isfinite(phi).all() and np.isfinite(theta).all()):
            raise ValueError("angles contain NaN/Inf")
        phi, theta = _wrap_angles(phi, theta)
        phi.flags.writeable = False
        theta.flags.writeable = False
        object.__setattr__(self, "phi", phi)
        object.__setattr__(self, "theta", theta)

    @property
    def n(self) -> int:
        return self.phi.size


def _wrap_angles(phi: np.ndarray, theta: np.ndarray):
    """Fold phi into [0, pi] and theta into [0, 2*pi) preserving the points."""
    phi = np.mod(phi, 2.0 * np.pi)
    flip = phi > np.pi
    phi = np.where(flip, 2.0 * np.pi - phi, phi)
    theta = np.where(flip, theta + np.pi, theta)
    theta = np.mod(theta, 2.0 * np.pi)
    return phi, theta


# ---------------------------------------------------------------------------
# Cartesian energy and gradient


def _pair_dist2(X: np.ndarray, dist_floor: float = DIST_FLOOR):
    """All pairwise squared distances.

    Returns (diff, d2) where diff[a, i, j] = X[a, i] - X[a, j] and
    d2[i, j] = ||x_i - x_j||^2.  Raises CoincidentPointsError when any
    off-diagonal distance falls below ``dist_floor``.

    Built from broadcasting reductions (no BLAS) so the floating-point
    result is independent of thread configuration.
    """
    diff = X[:, :, None] - X[:, None, :]
    d2 = np.einsum("aij,aij->ij", diff, diff, optimize=False)
    n = X.shape[1]
    off = ~np.eye(n, dtype=bool)
    if np.any(d2[off] < dist_floor * dist_floor):
        raise CoincidentPointsError(
            f"minimum pair distance below {dist_floor:g}"
        )
    return diff, d2


def energy(cfg) -> float:
    """Inverse-square pair energy: sum over unordered pairs of 1/||x_i-x_j||^2.

    Accumulation runs over pairs in fixed (i ascending, j ascending) order, so
    the value is bitwise reproducible.
    """
    X = _as_matrix(cfg)
    _, d2 = _pair_dist2(X)
    ii, jj = np.tril_indices(X.shape[1], k=-1)
    return float(np.sum(1.0 / d2[ii, jj]))


def energy_gradient(cfg) -> np.ndarray:
    """Gradient of :func:`energy`: column i is -2 sum_l (x_i-x_l)/||x_i-x_l||^4.

    The columns sum to the zero vector (the energy depends only on pair
    differences).
    """
    X = _as_matrix(cfg)
    diff, d2 = _pair_dist2(X)
    n = X.shape[1]
    inv_d4 = np.zeros_like(d2)
    off = ~np.eye(n, dtype=bool)
    inv_d4[off] = 1.0 / (d2[off] * d2[off])
    return -2.0 * np.einsum("ail,il->ai", diff, inv_d4, optimize=False)


# ---------------------------------------------------------------------------
# Spherical-coordinate energy and gradient (k = 3)


def _pair_cos_terms(phi: np.ndarray, theta: np.ndarray, dist_floor: float = DIST_FLOOR):
    """The bracketed pair term u_ij = cos(angle between points i and j) - 1.

    u relates to squared chord distance by d^2 = -2 u; u == 0 marks
    coincident points and raises CoincidentPointsError.
    """
    sp, cp = np.sin(phi), np.cos(phi)
    dth = theta[:, None] - theta[None, :]
    u = sp[:, None] * sp[None, :] * np.cos(dth) + cp[:, None] * cp[None, :] - 1.0
    n = phi.size
    off = ~np.eye(n, dtype=bool)
    if np.any(np.abs(u[off]) < dist_floor):
        raise CoincidentPointsError("coincident points in angle parameterization")
    return u, sp, cp, dth


def spherical_energy_arrays(phi: np.ndarray, theta: np.ndarray) -> float:
    """Energy as a function of raw angle arrays (periodic; no wrapping)."""
    phi = np.asarray(phi, dtype=float)
    theta = np.asarray(theta, dtype=float)
    u, _, _, _ = _pair_cos_terms(phi, theta)
    ii, jj = np.tril_indices(phi.size, k=-1)
    return float(np.sum(-1.0 / (2.0 * u[ii, jj])))


def spherical_gradient_arrays(phi: np.ndarray, theta: np.ndarray):
    """Partial derivatives of :func:`spherical_energy_arrays` w.r.t. each
    phi_i and theta_i.  Returns (dphi, dtheta), both length-n vectors."""
    phi = np.asarray(phi, dtype=float)
    theta = np.asarray(theta, dtype=float)
    u, sp, cp, dth = _pair_cos_terms(phi, theta)
    n = phi.size
    inv_2u2 = np.zeros_like(u)
    off = ~np.eye(n, dtype=bool)
    inv_2u2[off] = 1.0 / (2.0 * u[off] * u[off])
    # d/dphi_i of the bracket: cos(phi_i) sin(phi_j) cos(dth) - sin(phi_i) cos(phi_j)
    du_dphi = cp[:, None] * sp[None, :] * np.cos(dth) - sp[:, None] * cp[None, :]
    dphi = np.sum(du_dphi * inv_2u2, axis=1)
    # d/dtheta_i of the bracket: -sin(phi_i) sin(phi_j) sin(dth)
    dtheta = -np.sum(sp[:, None] * sp[None, :] * np.sin(dth) * inv_2u2, axis=1)
    return dphi, dtheta


def spherical_energy(acfg: AngularConfiguration) -> float:
    return spherical_energy_arrays(acfg.phi, acfg.theta)


def spherical_gradient(acfg: AngularConfiguration):
    return spherical_gradient_arrays(acfg.phi, acfg.theta)


# ---------------------------------------------------------------------------
# Coordinate transforms and projection


def to_cartesian(acfg: AngularConfiguration) -> Configuration:
    """Map (phi, theta) to unit-sphere Cartesian columns."""
    sp = np.sin(acfg.phi)
    X = np.stack([sp * np.cos(acfg.theta), sp * np.sin(acfg.theta), np.cos(acfg.phi)])
    return Configuration(X)


def to_spherical(cfg: Configuration, tol_feas: float = TOL_FEAS) -> AngularConfiguration:
    """Inverse of :func:`to_cartesian` for k = 3 feasible configurations.

    At the poles (sin(phi) = 0) the azimuth is undefined; the convention
    theta = 0 falls out of atan2(0, 0).
    """
    if cfg.k != 3:
        raise DimensionMismatchError(f"angle parameterization needs k=3, got k={cfg.k}")
    cfg.require_feasible(tol_feas)
    x, y, z = cfg.coords
    phi = np.arccos(np.clip(z, -1.0, 1.0))
    theta = np.mod(np.arctan2(y, x), 2.0 * np.pi)
    return AngularConfiguration(phi, theta)


def project_to_sphere(cfg) -> Configuration:
    """Normalize every column onto the unit sphere.

    Columns whose norm is already within 1e-15 of 1 are passed through
    unchanged, which makes the projection exactly idempotent.
    """
    X = _as_matrix(cfg)
    norms = np.linalg.norm(X, axis=0)
    if np.any(norms < DIST_FLOOR):
        raise ZeroNormColumnError("cannot project a (near-)zero column onto the sphere")
    scale = np.where(np.abs(norms - 1.0) <= 1e-15, 1.0, norms)
    return Configuration(X / scale)


def project_matrix(X: np.ndarray) -> np.ndarray:
    """Array-in/array-out variant of :func:`project_to_sphere` for solver loops."""
    norms = np.linalg.norm(X, axis=0)
    if np.any(norms < DIST_FLOOR):
        raise ZeroNormColumnError("cannot project a (near-)zero column onto the sphere")
    scale = np.where(np.abs(norms - 1.0) <= 1e-15, 1.0, norms)
    return X / scale


def constraint_residual(cfg) -> float:
    """Feasibility violation max_i | ||x_i||^2 - 1 |."""
    X = _as_matrix(cfg)
    return float(np.abs(np.einsum("ai,ai->i", X, X, optimize=False) - 1.0).max())


def random_configuration(n: int, k: int, seed: int) -> Configuration:
    """n independent points uniform on the unit sphere in R^k.

    Standard-normal columns normalized to unit length; deterministic for a
    fixed seed.
    """
    if n < 2 or k < 2:
        raise ValueError(f"need n >= 2 and k >= 2, got n={n}, k={k}")
    rng = np.random.default_rng(seed)
    X = rng.standard_normal((k, n))
    norms = np.linalg.norm(X, axis=0)
    # A zero-norm draw has probability ~0 but would corrupt the output.
    while np.any(norms < DIST_FLOOR):
        bad = norms < DIST_FLOOR
        X[:, bad] = rng.standard_normal((k, int(bad.sum())))
        norms = np.linalg.norm(X, axis=0)
    return Configuration(X / norms)
