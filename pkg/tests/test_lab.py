"""Tests for the matrix-group lab: bases, magic formulas, Laplacian and Brownian motion."""

import math

import numpy as np
import pytest

from tracecalc.algebra.polynomial import TracePolynomial
from tracecalc.errors import DimensionMismatchError
from tracecalc.lab import (
    BrownianConfig,
    SampleStats,
    convergence_ratio,
    laplacian_exact,
    laplacian_fd,
    mc_estimate,
    mc_l2_distance,
    onb,
    random_unitary,
    richardson,
    sample_endpoints,
    trace_deviation,
    trace_power,
    un_inner,
    verify_magic,
)
from tracecalc.lab.brownian import unitarity_defect
from tracecalc.lab.laplacian import relative_error


def ginibre(N: int, seed: int) -> np.ndarray:
    rng = np.random.default_rng(seed)
    return rng.standard_normal((N, N)) + 1j * rng.standard_normal((N, N))


def poly(terms: dict) -> TracePolynomial:
    return TracePolynomial.parse_terms(terms)


def small_config(**changes) -> BrownianConfig:
    base = BrownianConfig("u", 2, 0.2, step=0.05, paths=10, chunk_size=4, seed=7)
    return base.with_(**changes)


# ── Bases ───────────────────────────────────────────────────────────


class TestOnb:
    @pytest.mark.parametrize("N", [1, 2, 4])
    def test_unitary_algebra(self, N):
        basis = onb("u", N)
        assert len(basis) == N * N
        np.testing.assert_allclose(basis.gram(), np.eye(N * N), atol=1e-14)

    @pytest.mark.parametrize("N", [1, 3])
    def test_general_linear_algebra(self, N):
        basis = onb("gl", N)
        assert len(basis) == 2 * N * N
        np.testing.assert_allclose(basis.gram(), np.eye(2 * N * N), atol=1e-14)

    def test_skew_hermitian(self):
        X = onb("u", 3).matrices
        np.testing.assert_allclose(X, -np.conj(np.swapaxes(X, -1, -2)), atol=1e-15)

    def test_inner_product(self):
        X = onb("u", 3).matrices[4]
        assert un_inner(X, X) == pytest.approx(1.0)

    def test_bad_arguments(self):
        with pytest.raises(ValueError):
            onb("sl", 2)
        with pytest.raises(ValueError):
            onb("u", 0)

    def test_read_only(self):
        with pytest.raises(ValueError):
            onb("u", 2).matrices[0, 0, 0] = 1


class TestMagic:
    @pytest.mark.parametrize("N", [1, 2, 5])
    def test_identities_hold(self, N):
        residuals = verify_magic(N, ginibre(N, N), ginibre(N, N + 100))
        assert residuals.worst < 1e-12
        assert set(residuals.as_dict()) == {"square_sum", "sandwich", "trace_weighted", "trace_pair"}

    def test_shape_checked(self):
        with pytest.raises(DimensionMismatchError):
            verify_magic(3, np.eye(2), np.eye(3))


# ── Laplacian ───────────────────────────────────────────────────────


class TestLaplacian:
    @pytest.mark.parametrize("labels", [{"u^2": 1}, {"u*v1": 1}, {"v2": 1, "v1^2": -1}, {"u^3*v1": 2}])
    def test_matches_intertwining_formula(self, labels):
        U = random_unitary(3, seed=1)
        p = poly(labels)
        exact = laplacian_exact(p, U)
        assert relative_error(laplacian_fd(p, U, 1e-3), exact) <= 1e-4

    def test_richardson_improves(self):
        U = random_unitary(2, seed=5)
        p = poly({"u^3": 1})
        exact = laplacian_exact(p, U)
        coarse = laplacian_fd(p, U, 1e-3)
        fine = laplacian_fd(p, U, 5e-4)
        assert relative_error(richardson(coarse, fine), exact) < relative_error(coarse, exact)

    @pytest.mark.parametrize(
        "N, label", [(4, "u"), (3, "v2"), (4, "u*v1"), (2, "u^3*v1"), (3, "v1*v2^2")]
    )
    def test_second_order_convergence(self, N, label):
        U = random_unitary(N, seed=N)
        ratio = convergence_ratio(poly({label: 1}), U, 8e-3)
        assert ratio is not None
        assert 3 <= ratio <= 5

    def test_u_is_an_eigenvector(self):
        U = random_unitary(4, seed=2)
        np.testing.assert_allclose(laplacian_exact(poly({"u": 1}), U), -U, atol=1e-14)

    def test_step_range(self):
        with pytest.raises(ValueError):
            laplacian_fd(poly({"u": 1}), np.eye(2), 1.0)

    def test_square_matrix_required(self):
        with pytest.raises(DimensionMismatchError):
            laplacian_fd(poly({"u": 1}), np.ones((2, 3)))


# ── Brownian motion ─────────────────────────────────────────────────


class TestBrownianConfig:
    def test_horizon(self):
        assert BrownianConfig("u", 2, 1.0, step=0.125).steps == 8
        gl = BrownianConfig("gl", 2, 1.0, step=0.125)
        assert gl.horizon == 0.5
        assert gl.steps == 4
        assert gl.dt == 0.125

    def test_step_shrinks_to_fit(self):
        cfg = BrownianConfig("u", 2, 1.0, step=0.3)
        assert cfg.steps == 4
        assert cfg.dt == pytest.approx(0.25)

    def test_chunks(self):
        cfg = BrownianConfig("u", 2, 1.0, paths=10, chunk_size=4)
        assert cfg.chunks == 3
        assert cfg.chunk_bounds(2) == (8, 10)

    def test_time_zero(self):
        cfg = BrownianConfig("gl", 3, 0.0)
        assert cfg.steps == 0
        assert cfg.dt == 0.0

    @pytest.mark.parametrize(
        "changes",
        [{"group": "sl"}, {"N": 0}, {"t": -1.0}, {"step": 0.0}, {"paths": 0}, {"workers": 0}],
    )
    def test_validation(self, changes):
        with pytest.raises(ValueError):
            small_config(**changes)


class TestBrownian:
    def test_time_zero_is_identity(self):
        Z = sample_endpoints(small_config(t=0.0, group="gl"))
        assert Z.shape == (10, 2, 2)
        np.testing.assert_array_equal(Z, np.broadcast_to(np.eye(2), Z.shape))

    def test_independent_of_worker_count(self):
        serial = sample_endpoints(small_config(workers=1))
        threaded = sample_endpoints(small_config(workers=3))
        np.testing.assert_array_equal(serial, threaded)

    @pytest.mark.parametrize("group", ["u", "gl"])
    def test_independent_of_chunk_size(self, group):
        whole = sample_endpoints(small_config(group=group, paths=8, chunk_size=8))
        for chunk_size in (1, 2, 3):
            split = sample_endpoints(small_config(group=group, paths=8, chunk_size=chunk_size))
            np.testing.assert_allclose(split, whole, rtol=0, atol=1e-13)

    def test_path_depends_only_on_its_index(self):
        few = sample_endpoints(small_config(paths=3, chunk_size=2))
        many = sample_endpoints(small_config(paths=9, chunk_size=4))
        np.testing.assert_allclose(many[:3], few, rtol=0, atol=1e-13)

    def test_seed_changes_paths(self):
        a = sample_endpoints(small_config())
        b = sample_endpoints(small_config(seed=8))
        assert not np.allclose(a, b)

    def test_unitary_paths_stay_unitary(self):
        Z = sample_endpoints(small_config(N=3))
        assert unitarity_defect(Z) < 1e-12

    def test_gl_paths_leave_the_unitary_group(self):
        Z = sample_endpoints(small_config(group="gl"))
        assert unitarity_defect(Z) > 1e-3

    def test_random_unitary(self):
        U = random_unitary(3, seed=4)
        assert unitarity_defect(U) < 1e-12
        np.testing.assert_array_equal(U, random_unitary(3, seed=4))


# ── Estimators ──────────────────────────────────────────────────────


class TestSampleStats:
    def test_moments(self):
        stats = SampleStats.from_samples("x", np.array([1.0, 2.0, 3.0]))
        assert stats.n == 3
        assert stats.mean == pytest.approx(2.0)
        assert stats.variance == pytest.approx(1.0)
        assert stats.stderr == pytest.approx(math.sqrt(1 / 3))
        assert stats.within(2.5)
        assert not stats.within(10.0)

    def test_empty(self):
        with pytest.raises(ValueError):
            SampleStats.from_samples("x", np.array([]))

    def test_single_sample(self):
        stats = SampleStats.from_samples("x", np.array([4.0]))
        assert stats.variance == 0.0
        assert stats.within(4.0)


class TestEstimators:
    def test_observables_on_identity(self):
        eye = np.broadcast_to(np.eye(3, dtype=complex), (2, 3, 3))
        np.testing.assert_allclose(trace_power(4)(eye), [1, 1])
        np.testing.assert_allclose(trace_deviation(2)(eye), [0, 0])

    def test_time_zero_estimate(self):
        stats = mc_estimate(small_config(t=0.0), poly({"v1^2": 1}))
        assert stats.mean == pytest.approx(1.0)
        assert stats.variance == 0.0

    def test_distance_to_itself(self):
        p = poly({"u^2": 1, "u*v1": -1})
        stats = mc_l2_distance(p, p, small_config())
        assert stats.mean == 0

    @pytest.mark.slow
    def test_unitary_trace_mean(self):
        cfg = BrownianConfig("u", 4, 1.0, step=0.01, paths=400, workers=2)
        stats = mc_estimate(cfg, trace_power(1))
        assert stats.within(math.exp(-0.5), sigmas=4)

    @pytest.mark.slow
    def test_general_linear_trace_mean_is_one(self):
        cfg = BrownianConfig("gl", 4, 1.0, step=0.01, paths=400, workers=2)
        stats = mc_estimate(cfg, trace_power(2))
        assert stats.within(1.0, sigmas=4)
