"""Pair-sampling SGD: pair gradients, sampling, solver behavior."""

import numpy as np
import pytest

from sphereopt.geometry import (
    CoincidentPointsError,
    Configuration,
    energy_gradient,
    random_configuration,
)
from sphereopt.sgd import (
    DivergenceDetectedError,
    SgdOptions,
    pair_gradient,
    sample_pair,
    sgd_solve,
)

ANTIPODAL = Configuration(np.array([[0.0, 0.0], [0.0, 0.0], [1.0, -1.0]]))


class TestPairGradient:
    def test_repulsion_only_at_lambda_zero(self):
        g = pair_gradient(ANTIPODAL, 0, 1, lam=0.0)
        assert np.allclose(g, [0, 0, -0.25], atol=1e-15)

    def test_feasible_point_has_no_penalty_component(self):
        cfg = random_configuration(6, 3, seed=0)
        for lam in (0.0, 123.0):
            g = pair_gradient(cfg, 2, 4, lam)
            assert np.allclose(g, pair_gradient(cfg, 2, 4, 0.0), atol=1e-12)

    def test_partner_sum_identity(self):
        # summing pair gradients over all partners reproduces the full
        # repulsion plus lam*(||x_i||^2-1)*x_i, exactly
        rng = np.random.default_rng(1)
        for n in (3, 6, 8):
            X = rng.standard_normal((3, n)) * 1.1
            lam = 17.0
            G_rep = energy_gradient(X)
            c = np.sum(X * X, axis=0) - 1.0
            for i in range(n):
                total = np.zeros(3)
                for l in range(n):
                    if l != i:
                        total += pair_gradient(X, i, l, lam)
                expected = G_rep[:, i] + lam * c[i] * X[:, i]
                assert np.abs(total - expected).max() <= 1e-12 * max(
                    1.0, np.abs(expected).max()
                )

    def test_index_errors(self):
        with pytest.raises(IndexError):
            pair_gradient(ANTIPODAL, 1, 1, lam=1.0)
        with pytest.raises(IndexError):
            pair_gradient(ANTIPODAL, 0, 5, lam=1.0)

    def test_coincident_pair_raises(self):
        X = np.array([[1.0, 1.0], [0.0, 0.0], [0.0, 0.0]])
        with pytest.raises(CoincidentPointsError):
            pair_gradient(X, 0, 1, lam=1.0)


class TestSamplePair:
    def test_two_points(self):
        rng = np.random.default_rng(0)
        for _ in range(20):
            assert set(sample_pair(2, rng)) == {0, 1}

    def test_uniform_over_pairs(self):
        n = 10
        rng = np.random.default_rng(7)
        draws = 1_000_000
        counts = np.zeros((n, n))
        ii = rng.integers(0, n, size=draws)
        ll = rng.integers(0, n - 1, size=draws)
        ll = ll + (ll >= ii)
        np.add.at(counts, (np.minimum(ii, ll), np.maximum(ii, ll)), 1)
        p = 2.0 / (n * (n - 1))
        sigma = np.sqrt(draws * p * (1 - p))
        iu, ju = np.triu_indices(n, k=1)
        dev = np.abs(counts[iu, ju] - draws * p)
        assert dev.max() <= 3.5 * sigma  # 45 cells; 3.5 sigma leaves slack

    def test_deterministic_sequence(self):
        a = [sample_pair(8, np.random.default_rng(5)) for _ in range(1)]
        s1 = np.random.default_rng(5)
        s2 = np.random.default_rng(5)
        seq1 = [sample_pair(8, s1) for _ in range(50)]
        seq2 = [sample_pair(8, s2) for _ in range(50)]
        assert seq1 == seq2
        assert a[0] == seq1[0]


class TestSgdSolve:
    def test_antipodal(self):
        rep = sgd_solve(random_configuration(2, 3, seed=0),
                        SgdOptions(lam=100.0, gamma=2e-3, iters=60_000, seed=0))
        assert rep.info["projected_energy"] == pytest.approx(0.25, abs=1e-3 * 0.25)

    def test_deterministic_traces(self):
        opts = SgdOptions(lam=200.0, gamma=1e-3, iters=20_000, seed=3)
        a = sgd_solve(random_configuration(5, 3, seed=1), opts)
        b = sgd_solve(random_configuration(5, 3, seed=1), opts)
        assert np.array_equal(a.trace[:, :4], b.trace[:, :4])
        assert np.array_equal(a.final_point.coords, b.final_point.coords)

    def test_divergence_guard(self):
        # an absurd step with the caps disabled must trip the guard
        with pytest.raises(DivergenceDetectedError):
            sgd_solve(
                random_configuration(8, 3, seed=0),
                SgdOptions(lam=1e6, gamma=1e-4, iters=50_000, seed=0,
                           schedule="constant", max_step=1e9,
                           max_step_frac=1e9, max_scaled_gamma=1e9),
            )

    def test_gamma_bound_validated(self):
        with pytest.raises(ValueError):
            sgd_solve(random_configuration(50, 3, seed=0),
                      SgdOptions(lam=1.0, gamma=0.5, iters=10, max_scaled_gamma=1.0))

    def test_trace_cadence_and_columns(self):
        rep = sgd_solve(random_configuration(4, 3, seed=2),
                        SgdOptions(lam=100.0, gamma=1e-3, iters=1000, seed=0,
                                   trace_every=250))
        assert list(rep.trace[:, 0]) == [0, 250, 500, 750, 1000]
        assert np.isfinite(rep.trace[:, 1:4]).all()

    def test_tracks_penalized_objective(self):
        from sphereopt.relaxation import penalty_objective

        rep = sgd_solve(random_configuration(5, 3, seed=4),
                        SgdOptions(lam=50.0, gamma=1e-3, iters=500, seed=1,
                                   trace_every=500))
        X = rep.final_point.coords
        assert rep.trace[-1, 1] == pytest.approx(penalty_objective(X, 50.0), rel=1e-12)

    def test_n40_reaches_reported_band(self):
        # tuned long-anneal settings; one-sided 2% band above the published
        # single-run value (the on-sphere optimum itself sits 1.94% above it)
        best = np.inf
        for seed in range(10):
            rep = sgd_solve(
                random_configuration(40, 3, seed),
                SgdOptions(lam=3200.0, gamma=2.47e-5, iters=3_000_000,
                           seed=seed, trace_every=10_000, t0=100_000),
            )
            best = min(best, rep.info["projected_energy"])
        assert best <= 1.02 * 659.5119
