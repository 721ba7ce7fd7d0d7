"""Configuration types, energy, gradients, transforms, projection."""

import json

import numpy as np
import pytest

from sphereopt.geometry import (
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
    spherical_energy_arrays,
    spherical_gradient,
    spherical_gradient_arrays,
    to_cartesian,
    to_spherical,
)
from sphereopt.gradcheck import fd_gradient

ANTIPODAL = np.array([[0.0, 0.0], [0.0, 0.0], [1.0, -1.0]])


def tetrahedron():
    X = np.array([
        [1.0, 1.0, -1.0, -1.0],
        [1.0, -1.0, 1.0, -1.0],
        [1.0, -1.0, -1.0, 1.0],
    ]) / np.sqrt(3.0)
    return Configuration(X)


def tetrahedron_energy_oracle():
    # closed form from explicit pair distances: all 6 pairs at d^2 = 8/3
    X = tetrahedron().coords
    total = 0.0
    for i in range(4):
        for j in range(i):
            d2 = float(np.sum((X[:, i] - X[:, j]) ** 2))
            assert abs(d2 - 8.0 / 3.0) < 1e-12
            total += 1.0 / d2
    return total


class TestConfiguration:
    def test_shape_and_fields(self):
        cfg = Configuration(ANTIPODAL)
        assert cfg.k == 3 and cfg.n == 2
        assert not cfg.coords.flags.writeable

    def test_rejects_small_k(self):
        with pytest.raises(DimensionMismatchError):
            Configuration(np.ones((1, 3)))

    def test_rejects_single_point(self):
        with pytest.raises(ValueError):
            Configuration(np.ones((3, 1)))

    def test_rejects_nonfinite(self):
        X = ANTIPODAL.copy()
        X[0, 0] = np.nan
        with pytest.raises(ValueError):
            Configuration(X)

    def test_feasibility_check(self):
        cfg = Configuration(ANTIPODAL)
        assert cfg.is_feasible()
        assert not Configuration(2 * ANTIPODAL).is_feasible()
        with pytest.raises(ValueError):
            Configuration(2 * ANTIPODAL).require_feasible()

    def test_json_round_trip_is_bitwise(self):
        cfg = random_configuration(7, 4, seed=3)
        back = Configuration.from_json(cfg.to_json())
        assert back.k == cfg.k and back.n == cfg.n
        assert np.array_equal(back.coords, cfg.coords)

    def test_json_layout_is_column_major(self):
        cfg = Configuration(ANTIPODAL)
        obj = json.loads(cfg.to_json())
        assert obj["k"] == 3 and obj["n"] == 2
        assert obj["coords"][0] == [0.0, 0.0, 1.0]
        assert obj["coords"][1] == [0.0, 0.0, -1.0]


class TestEnergy:
    def test_antipodal_pair(self):
        assert energy(Configuration(ANTIPODAL)) == pytest.approx(0.25, abs=1e-15)

    def test_tetrahedron_closed_form(self):
        oracle = tetrahedron_energy_oracle()
        assert oracle == pytest.approx(2.25, abs=1e-12)
        assert energy(tetrahedron()) == pytest.approx(oracle, rel=1e-14)

    def test_coincident_points_raise(self):
        X = np.array([[1.0, 1.0], [0.0, 0.0], [0.0, 0.0]])
        with pytest.raises(CoincidentPointsError):
            energy(X)

    def test_rotation_invariance(self):
        rng = np.random.default_rng(11)
        for k in (2, 3, 5):
            cfg = random_configuration(8, k, seed=k)
            Q, _ = np.linalg.qr(rng.standard_normal((k, k)))
            e0 = energy(cfg)
            e1 = energy(Q @ cfg.coords)
            assert abs(e1 - e0) <= 1e-9 * e0

    def test_permutation_invariance(self):
        cfg = random_configuration(9, 3, seed=5)
        perm = np.random.default_rng(1).permutation(9)
        e0 = energy(cfg)
        e1 = energy(cfg.coords[:, perm])
        assert abs(e1 - e0) <= 1e-12 * e0


class TestEnergyGradient:
    def test_antipodal_columns(self):
        G = energy_gradient(Configuration(ANTIPODAL))
        assert np.allclose(G[:, 0], [0, 0, -0.25], atol=1e-15)
        assert np.allclose(G[:, 1], [0, 0, 0.25], atol=1e-15)

    def test_columns_sum_to_zero(self):
        for seed in range(5):
            cfg = random_configuration(7, 3, seed=seed)
            G = energy_gradient(cfg)
            assert np.abs(G.sum(axis=1)).max() <= 1e-12

    def test_matches_finite_differences(self):
        cfg = random_configuration(5, 3, seed=2)
        k, n = cfg.k, cfg.n
        G = energy_gradient(cfg).ravel()
        GFD = fd_gradient(lambda v: energy(v.reshape(k, n)), cfg.coords.ravel())
        assert np.linalg.norm(G - GFD) / np.linalg.norm(G) < 1e-5


class TestSphericalForm:
    def test_equatorial_antipodal(self):
        a = AngularConfiguration([np.pi / 2, np.pi / 2], [0.0, np.pi])
        assert spherical_energy(a) == pytest.approx(0.25, abs=1e-14)

    def test_poles(self):
        a = AngularConfiguration([0.0, np.pi], [1.234, 4.321])
        assert spherical_energy(a) == pytest.approx(0.25, abs=1e-14)

    def test_matches_cartesian_energy(self):
        rng = np.random.default_rng(7)
        for _ in range(10):
            a = AngularConfiguration(rng.uniform(0, np.pi, 6),
                                     rng.uniform(0, 2 * np.pi, 6))
            ec = energy(to_cartesian(a))
            es = spherical_energy(a)
            assert abs(es - ec) <= 1e-10 * abs(ec)

    def test_gradient_zero_at_antipodal(self):
        a = AngularConfiguration([np.pi / 2, np.pi / 2], [0.0, np.pi])
        dphi, dtheta = spherical_gradient(a)
        assert np.abs(dphi).max() < 1e-14
        assert np.abs(dtheta).max() < 1e-14

    def test_gradient_matches_finite_differences(self):
        rng = np.random.default_rng(3)
        for _ in range(5):
            n = 4
            phi = rng.uniform(0.2, np.pi - 0.2, n)
            theta = rng.uniform(0, 2 * np.pi, n)
            x = np.concatenate([phi, theta])

            def f(v):
                return spherical_energy_arrays(v[:n], v[n:])

            dphi, dtheta = spherical_gradient_arrays(phi, theta)
            G = np.concatenate([dphi, dtheta])
            GFD = fd_gradient(f, x)
            assert np.linalg.norm(G - GFD) / np.linalg.norm(G) < 1e-5

    def test_theta_dependence_only_through_difference(self):
        a = AngularConfiguration([np.pi / 2, np.pi / 2], [0.0, np.pi / 2])
        _, dtheta = spherical_gradient(a)
        assert dtheta[0] == pytest.approx(-dtheta[1], rel=1e-12)

    def test_coincident_raises(self):
        a = AngularConfiguration([1.0, 1.0], [2.0, 2.0])
        with pytest.raises(CoincidentPointsError):
            spherical_energy(a)


class TestTransforms:
    @pytest.mark.parametrize("phi,theta,expect", [
        (0.0, 2.5, (0.0, 0.0, 1.0)),
        (np.pi / 2, 0.0, (1.0, 0.0, 0.0)),
        (np.pi / 2, np.pi / 2, (0.0, 1.0, 0.0)),
    ])
    def test_to_cartesian_axes(self, phi, theta, expect):
        a = AngularConfiguration([phi, np.pi / 3], [theta, 1.0])
        col = to_cartesian(a).coords[:, 0]
        assert np.allclose(col, expect, atol=1e-15)

    def test_to_cartesian_unit_columns(self):
        rng = np.random.default_rng(0)
        a = AngularConfiguration(rng.uniform(0, np.pi, 50),
                                 rng.uniform(0, 2 * np.pi, 50))
        X = to_cartesian(a).coords
        assert np.abs(np.linalg.norm(X, axis=0) - 1).max() <= 1e-14

    def test_pole_convention(self):
        cfg = Configuration(np.array([[0.0, 1.0], [0.0, 0.0], [1.0, 0.0]]))
        a = to_spherical(cfg)
        assert a.phi[0] == 0.0 and a.theta[0] == 0.0
        assert a.phi[1] == pytest.approx(np.pi / 2) and a.theta[1] == 0.0

    def test_round_trip(self):
        cfg = random_configuration(20, 3, seed=9)
        back = to_cartesian(to_spherical(cfg))
        assert np.abs(back.coords - cfg.coords).max() < 1e-10

    def test_requires_k3(self):
        with pytest.raises(DimensionMismatchError):
            to_spherical(random_configuration(4, 4, seed=0))

    def test_angle_wrapping_preserves_points(self):
        rng = np.random.default_rng(4)
        phi = rng.uniform(-10, 10, 8)
        theta = rng.uniform(-10, 10, 8)
        wrapped = AngularConfiguration(phi, theta)
        assert np.all(wrapped.phi >= 0) and np.all(wrapped.phi <= np.pi)
        assert np.all(wrapped.theta >= 0) and np.all(wrapped.theta < 2 * np.pi)
        raw = to_cartesian(wrapped)
        direct = np.stack([
            np.sin(phi) * np.cos(theta),
            np.sin(phi) * np.sin(theta),
            np.cos(phi),
        ])
        assert np.abs(raw.coords - direct).max() < 1e-12


class TestProjection:
    def test_scales_column(self):
        cfg = project_to_sphere(np.array([[0.0, 0.0], [0.0, 0.0], [2.0, -2.0]]))
        assert np.allclose(cfg.coords[:, 0], [0, 0, 1])

    def test_unit_column_unchanged_bitwise(self):
        X = ANTIPODAL.copy()
        out = project_to_sphere(X)
        assert np.array_equal(out.coords, X)

    def test_idempotent_bitwise(self):
        X = np.random.default_rng(6).standard_normal((3, 10))
        once = project_to_sphere(X)
        twice = project_to_sphere(once)
        assert np.array_equal(once.coords, twice.coords)

    def test_residual_after_projection(self):
        X = np.random.default_rng(8).standard_normal((4, 12)) * 3.0
        assert constraint_residual(project_to_sphere(X)) <= 1e-14

    def test_zero_column_raises(self):
        with pytest.raises(ZeroNormColumnError):
            project_to_sphere(np.array([[0.0, 1.0], [0.0, 0.0], [0.0, 0.0]]))


class TestConstraintResidual:
    def test_feasible_is_zero(self):
        assert constraint_residual(Configuration(ANTIPODAL)) == 0.0

    def test_scaled_by_sqrt2(self):
        X = ANTIPODAL.copy()
        X[:, 0] *= np.sqrt(2.0)
        assert constraint_residual(X) == pytest.approx(1.0, abs=1e-12)

    def test_scaled_by_half(self):
        X = ANTIPODAL.copy()
        X[:, 0] *= 0.5
        assert constraint_residual(X) == pytest.approx(0.75, abs=1e-15)


class TestRandomConfiguration:
    def test_deterministic(self):
        a = random_configuration(15, 3, seed=42)
        b = random_configuration(15, 3, seed=42)
        assert np.array_equal(a.coords, b.coords)

    def test_unit_columns(self):
        cfg = random_configuration(50, 5, seed=1)
        assert np.abs(np.linalg.norm(cfg.coords, axis=0) - 1).max() <= 1e-14

    def test_mean_near_zero(self):
        cfg = random_configuration(1000, 3, seed=0)
        assert np.abs(cfg.coords.mean(axis=1)).max() < 0.05

    def test_rejects_bad_sizes(self):
        with pytest.raises(ValueError):
            random_configuration(1, 3, seed=0)
        with pytest.raises(ValueError):
            random_configuration(5, 1, seed=0)
