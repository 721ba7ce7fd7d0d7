"""Max-min-distance (packing) configurations on the ordinary sphere.

The driver alternates two local moves and a perturbation search:

1. centering: put each point at the spot equidistant from its three nearest
   neighbors -- the spherical circumcenter of the neighbor triangle, taken on
   the point's own side of the sphere.  A configuration where nobody moves
   has every point equally distant from its three nearest neighbors.
2. equalization: when the per-point nearest-neighbor distances d_i are not
   all equal, the three neighbors of the most isolated point (largest d_i)
   slide a fraction of the great-circle arc toward it.
3. restarts: perturb the best arrangement found so far, re-refine, and keep
   the result only when the minimum pairwise distance improved.

k is fixed to 3; n = 2 and n = 3 are answered analytically (antipodal pair,
equilateral triangle on a great circle).
"""

from __future__ import annotations

import math
from dataclasses import dataclass

import numpy as np

from .geometry import (
    Configuration,
    ZeroNormColumnError,
    project_matrix,
    random_configuration,
)


class TooFewPointsError(ValueError):
    """Neighbor-based packing moves need at least 4 points."""


@dataclass(frozen=True)
class PackOptions:
    restarts: int = 40
    perturb_scale: float = 0.01
    seed: int = 0
    center_sweeps: int = 500
    center_tol: float = 1e-9
    equalize_rounds: int = 60
    pull: float = 0.1

    def __post_init__(self):
        if self.restarts < 0:
            raise ValueError("restarts must be >= 0")
        if not (0 < self.pull < 1):
            raise ValueError("pull must lie in (0, 1)")


@dataclass(frozen=True)
class PackingState:
    """A feasible arrangement with its min-distance bookkeeping.

    d_min is the minimum pairwise distance; per_point_dmin[i] is the distance
    from point i to its nearest other point.
    """

    cfg: Configuration
    d_min: float
    per_point_dmin: np.ndarray

    @classmethod
    def from_configuration(cls, cfg: Configuration) -> "PackingState":
        dmins = _per_point_dmin(cfg.coords)
        return cls(cfg=cfg, d_min=float(dmins.min()), per_point_dmin=dmins)


def _pair_distances(X: np.ndarray) -> np.ndarray:
    diff = X[:, :, None] - X[:, None, :]
    d2 = np.einsum("aij,aij->ij", diff, diff, optimize=False)
    return np.sqrt(np.maximum(d2, 0.0))


def _per_point_dmin(X: np.ndarray) -> np.ndarray:
    d = _pair_distances(X)
    np.fill_diagonal(d, np.inf)
    return d.min(axis=1)


def three_nearest(cfg, i: int):
    """Indices of the three nearest neighbors of point i, nearest first.

    Distance ties break toward the lowest index (stable sort).
    """
    X = cfg.coords if isinstance(cfg, Configuration) else np.asarray(cfg, dtype=float)
    n = X.shape[1]
    if n < 4:
        raise TooFewPointsError(f"three_nearest needs n >= 4, got n={n}")
    if not (0 <= i < n):
        raise IndexError(f"point index {i} out of range for n={n}")
    diff = X - X[:, i][:, None]
    d2 = np.einsum("aj,aj->j", diff, diff, optimize=False)
    d2[i] = np.inf
    order = np.argsort(d2, kind="stable")
    return int(order[0]), int(order[1]), int(order[2])


def _circumcenter_toward(p1, p2, p3, anchor):
    """Unit vector equidistant from p1, p2, p3, on the anchor's side."""
    c = np.cross(p2 - p1, p3 - p1)
    norm = float(np.linalg.norm(c))
    if norm < 1e-14:
        raise ZeroNormColumnError(
            "three nearest neighbors are (nearly) collinear; "
            "their equidistant point is undefined"
        )
    c = c / norm
    if float(c @ anchor) < 0.0:
        c = -c
    return c


def center_step(cfg) -> Configuration:
    """One Gauss-Seidel pass moving every point to the equidistant spot of
    its three nearest neighbors (computed against already-moved points)."""
    X = (cfg.coords if isinstance(cfg, Configuration) else np.asarray(cfg, dtype=float)).copy()
    n = X.shape[1]
    if n < 4:
        raise TooFewPointsError(f"center_step needs n >= 4, got n={n}")
    for i in range(n):
        j1, j2, j3 = three_nearest(X, i)
        X[:, i] = _circumcenter_toward(X[:, j1], X[:, j2], X[:, j3], X[:, i])
    return Configuration(X)


def equalize_step(state: PackingState, pull: float = 0.1) -> Configuration:
    """Pull the three nearest neighbors of the most isolated point toward it.

    Each neighbor moves the fraction ``pull`` of the great-circle arc; when
    the per-point nearest distances are already equal (relative spread below
    1e-6) the configuration is returned unchanged.
    """
    X = state.cfg.coords.copy()
    n = X.shape[1]
    if n < 4:
        raise TooFewPointsError(f"equalize_step needs n >= 4, got n={n}")
    dmins = state.per_point_dmin
    spread = float(dmins.max() - dmins.min())
    if spread <= 1e-6 * max(float(dmins.max()), 1e-300):
        return state.cfg
    target = int(np.argmax(dmins))  # ties break to the lowest index
    xt = X[:, target]
    for j in three_nearest(X, target):
        X[:, j] = _slerp(X[:, j], xt, pull)
    return Configuration(project_matrix(X))


def _slerp(a: np.ndarray, b: np.ndarray, frac: float) -> np.ndarray:
    """Great-circle interpolation from unit vector a toward unit vector b."""
    cos_w = float(np.clip(a @ b, -1.0, 1.0))
    w = math.acos(cos_w)
    if w < 1e-12:
        return a.copy()
    s = math.sin(w)
    out = (math.sin((1.0 - frac) * w) * a + math.sin(frac * w) * b) / s
    return out / np.linalg.norm(out)


def _center_until_fixed(X: np.ndarray, opts: PackOptions) -> np.ndarray:
    for _ in range(opts.center_sweeps):
        prev = X
        X = center_step(X).coords
        move = float(np.linalg.norm(X - prev, axis=0).max())
        if move < opts.center_tol:
            break
    return X


def _refine(X: np.ndarray, opts: PackOptions) -> PackingState:
    """Center/equalize loop; a degenerate neighbor triple (collinear points
    in a collapsed arrangement) just ends this restart with its best state."""
    best = PackingState.from_configuration(Configuration(X))
    try:
        X = _center_until_fixed(X, opts)
        state = PackingState.from_configuration(Configuration(X))
        best = max(best, state, key=lambda s: s.d_min)
        for _ in range(opts.equalize_rounds):
            moved = equalize_step(state, opts.pull)
            if moved is state.cfg:  # nearest distances already equal
                break
            X = _center_until_fixed(moved.coords.copy(), opts)
            state = PackingState.from_configuration(Configuration(X))
            if state.d_min > best.d_min:
                best = state
    except ZeroNormColumnError:
        pass
    return best


def _perturb(X: np.ndarray, scale: float, rng: np.random.Generator) -> np.ndarray:
    noise = rng.standard_normal(X.shape) * scale
    # keep the jiggle tangential so it changes geometry, not just radii
    radial = np.einsum("ai,ai->i", noise, X, optimize=False)
    return project_matrix(X + noise - X * radial)


def _analytic_small(n: int) -> PackingState:
    if n == 2:
        cfg = Configuration(np.array([[0.0, 0.0], [0.0, 0.0], [1.0, -1.0]]))
    else:
        ang = 2.0 * np.pi * np.arange(3) / 3.0
        cfg = Configuration(np.vstack([np.cos(ang), np.sin(ang), np.zeros(3)]))
    return PackingState.from_configuration(cfg)


def pack(n: int, opts: PackOptions = PackOptions()) -> PackingState:
    """Search for the n-point arrangement maximizing the minimum distance.

    Best-found over perturbation restarts; deterministic for a fixed seed.
    n = 2 and n = 3 return the known optima directly.
    """
    if n < 2:
        raise ValueError(f"need n >= 2, got n={n}")
    if n <= 3:
        return _analytic_small(n)
    rng = np.random.default_rng(opts.seed)
    X0 = random_configuration(n, 3, opts.seed).coords.copy()
    best = _refine(X0, opts)
    for r in range(opts.restarts):
        if r % 2 == 0:
            trial = _perturb(best.cfg.coords, opts.perturb_scale, rng)
        else:
            # Perturbations alone cannot escape a collapsed arrangement, so
            # every other restart begins from a fresh random configuration.
            G = rng.standard_normal((3, n))
            trial = project_matrix(G)
        candidate = _refine(trial, opts)
        if candidate.d_min > best.d_min:
            best = candidate
    return best
