import json
import math

import numpy as np
import pytest
from scipy import stats

from csinterp.basis import BasisSpec, intrinsic_weights
from csinterp.indexsets import IndexSet, build_tensor_product, build_total_degree
from csinterp.measurement import (
    MeasurementSystem,
    assemble_matrix,
    build_system,
    draw_samples,
    export_system,
    measure_function,
)


def cc(d=1):
    return BasisSpec.from_scenario("CC", d)


def lu(d=1):
    return BasisSpec.from_scenario("LU", d)


def lc(d=1):
    return BasisSpec.from_scenario("LC", d)


class TestSampling:
    def test_uniform_sampling_is_centered(self):
        samples = draw_samples(lu(3), 1000, rng_seed=1)
        assert samples.points.shape == (1000, 3)
        assert np.all(np.abs(samples.points.mean(axis=0)) < 0.05)

    def test_chebyshev_sampling_matches_arcsine_law(self):
        samples = draw_samples(cc(1), 10_000, rng_seed=2)
        coords = samples.points[:, 0]
        result = stats.kstest(coords, lambda x: 1.0 - np.arccos(x) / math.pi)
        assert result.statistic < 0.02

    def test_same_seed_gives_identical_points(self):
        a = draw_samples(cc(2), 64, rng_seed=7)
        b = draw_samples(cc(2), 64, rng_seed=7)
        assert np.array_equal(a.points, b.points)

    def test_all_points_strictly_interior(self):
        for spec in (cc(2), lu(2), lc(2)):
            samples = draw_samples(spec, 5000, rng_seed=3)
            assert np.all(np.abs(samples.points) < 1.0)


class TestMatrixAssembly:
    def test_constant_column_for_matched_measures(self):
        m = 40
        samples = draw_samples(cc(1), m, rng_seed=0)
        A = assemble_matrix(cc(1), samples, build_tensor_product(1, 5))
        assert np.allclose(A[:, 0], 1.0 / math.sqrt(m))

    def test_column_mean_square_is_one(self):
        # E |column|^2 = 1 by orthonormality; average over repeated draws
        iset = build_tensor_product(1, 10)
        sq = []
        m = 200
        for seed in range(40):
            samples = draw_samples(cc(1), m, rng_seed=seed)
            A = assemble_matrix(cc(1), samples, iset)
            sq.append(np.sum(A**2, axis=0))
        mean_sq = np.mean(sq, axis=0)
        stderr = np.std(sq, axis=0) / math.sqrt(len(sq))
        assert np.all(np.abs(mean_sq - 1.0) <= 3.0 * np.maximum(stderr, 1e-12))

    @pytest.mark.parametrize("make_spec", [cc, lu, lc])
    def test_entries_bounded_by_intrinsic_weights(self, make_spec):
        spec = make_spec(2)
        iset = build_total_degree(2, 6)
        samples = draw_samples(spec, 300, rng_seed=5)
        A = assemble_matrix(spec, samples, iset)
        u = intrinsic_weights(spec, iset)
        bound = u / math.sqrt(samples.m)
        assert np.all(np.abs(A) <= bound[None, :] * (1 + 1e-12))

    def test_operator_bounded_on_weighted_l1_ball(self):
        # ||A z|| <= ||z||_{1,u} for sparse z, any scenario
        rng = np.random.default_rng(8)
        for make_spec in (cc, lu, lc):
            spec = make_spec(2)
            iset = build_total_degree(2, 8)
            samples = draw_samples(spec, 100, rng_seed=11)
            A = assemble_matrix(spec, samples, iset)
            u = intrinsic_weights(spec, iset)
            for _ in range(20):
                z = np.zeros(len(iset))
                sup = rng.choice(len(iset), 5, replace=False)
                z[sup] = rng.standard_normal(5)
                assert np.linalg.norm(A @ z) <= np.sum(u * np.abs(z)) * (1 + 1e-12)

    def test_deterministic_matrices(self):
        iset = build_tensor_product(1, 8)
        samples = draw_samples(cc(1), 50, rng_seed=9)
        a = assemble_matrix(cc(1), samples, iset)
        b = assemble_matrix(cc(1), draw_samples(cc(1), 50, rng_seed=9), iset)
        assert np.array_equal(a, b)

    def test_gram_concentration(self):
        # qualitative near-isometry: CC d=1, N=20, m=2000
        iset = build_tensor_product(1, 19)
        hits = 0
        for seed in range(50):
            samples = draw_samples(cc(1), 2000, rng_seed=seed)
            A = assemble_matrix(cc(1), samples, iset)
            if np.linalg.norm(A.T @ A - np.eye(20), ord=2) < 0.5:
                hits += 1
        assert hits >= 48

    def test_spec_mismatch_rejected(self):
        samples = draw_samples(cc(1), 10, rng_seed=0)
        with pytest.raises(ValueError):
            assemble_matrix(lu(1), samples, build_tensor_product(1, 3))
        with pytest.raises(ValueError):
            assemble_matrix(cc(1), samples, build_tensor_product(2, 3))


class TestMeasureFunction:
    def test_zero_function_gives_zero_data(self):
        samples = draw_samples(cc(1), 30, rng_seed=0)
        y = measure_function(lambda p: np.zeros(p.shape[0]), samples, 0.0)
        assert np.all(y == 0.0)

    def test_basis_function_reproduces_matrix_column(self):
        spec = lc(2)
        iset = build_total_degree(2, 4)
        samples = draw_samples(spec, 60, rng_seed=4)
        A = assemble_matrix(spec, samples, iset)
        j = iset.position((1, 2))
        from csinterp.basis import tensor_table

        f = lambda pts: tensor_table(spec, [(1, 2)], pts)[:, 0]
        y = measure_function(f, samples, 0.0)
        assert np.allclose(y, A[:, j], atol=1e-14)

    def test_noise_radius_is_exact(self):
        # y - A x has norm exactly eta / sqrt(m) for a known expansion
        spec = cc(1)
        iset = build_tensor_product(1, 6)
        samples = draw_samples(spec, 50, rng_seed=1)
        A = assemble_matrix(spec, samples, iset)
        coeffs = np.arange(7.0)
        from csinterp.basis import tensor_table

        f = lambda pts: tensor_table(spec, iset, pts) @ coeffs
        eta = 0.37
        y = measure_function(f, samples, eta, rng_seed=5)
        assert np.linalg.norm(y - A @ coeffs) == pytest.approx(eta / math.sqrt(50), rel=1e-12)

    def test_gaussian_ball_mode_stays_inside(self):
        samples = draw_samples(cc(1), 50, rng_seed=1)
        eta = 0.5
        y0 = measure_function(lambda p: np.zeros(p.shape[0]), samples, 0.0)
        for seed in range(10):
            y = measure_function(
                lambda p: np.zeros(p.shape[0]), samples, eta, rng_seed=seed, noise_mode="gaussian_ball"
            )
            assert np.linalg.norm(y - y0) <= eta / math.sqrt(50) * (1 + 1e-12)

    def test_noise_deterministic_per_seed(self):
        samples = draw_samples(cc(1), 20, rng_seed=1)
        f = lambda p: np.ones(p.shape[0])
        a = measure_function(f, samples, 0.1, rng_seed=3)
        b = measure_function(f, samples, 0.1, rng_seed=3)
        assert np.array_equal(a, b)

    def test_nonfinite_function_rejected(self):
        samples = draw_samples(cc(1), 5, rng_seed=0)
        with pytest.raises(ValueError):
            measure_function(lambda p: np.full(p.shape[0], np.inf), samples, 0.0)


class TestSystem:
    def test_build_system_shapes_and_eta(self):
        spec = cc(1)
        iset = build_tensor_product(1, 12)
        system = build_system(spec, iset, lambda p: np.cos(p[:, 0]), 25, 0.4, sample_seed=3)
        assert system.m == 25
        assert system.n == 13
        assert system.eta_normalized == pytest.approx(0.4 / math.sqrt(25))

    def test_inconsistent_system_rejected(self):
        spec = cc(1)
        iset = build_tensor_product(1, 3)
        samples = draw_samples(spec, 10, rng_seed=0)
        A = assemble_matrix(spec, samples, iset)
        with pytest.raises(ValueError):
            MeasurementSystem(matrix=A, data=np.zeros(9), noise_eta=0.0,
                              sample_set=samples, index_set=iset)

    def test_export_writes_portable_dump(self, tmp_path):
        spec = lc(1)
        iset = build_tensor_product(1, 4)
        system = build_system(spec, iset, lambda p: p[:, 0] ** 2, 12, 0.0, sample_seed=8)
        export_system(system, tmp_path)
        header = json.loads((tmp_path / "header.json").read_text())
        assert header["scenario"] == "LC"
        assert header["m"] == 12
        assert header["generator"].startswith("numpy.random")
        matrix = np.array([
            [float(tok) for tok in line.split(",")]
            for line in (tmp_path / "matrix.csv").read_text().splitlines()
        ])
        assert np.array_equal(matrix, system.matrix)
        from csinterp.indexsets import IndexSet

        assert IndexSet.from_text((tmp_path / "index_set.txt").read_text()) == iset
