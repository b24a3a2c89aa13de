import numpy as np
import pytest

from oracles import grid_best_direction, graph_pencil_bruteforce, slspp_matrix_bruteforce
from specangle.affinity import heat_kernel_affinity
from specangle.data import HyperCube, SampleSet, synth_scene
from specangle.errors import (
    DimensionMismatchError,
    EmptyClassError,
    MalformedHeaderError,
    ReducedDimTooLargeError,
    SingleClassError,
)
from specangle.linalg import regularized
from specangle.projections import (
    Projection,
    ada_scatter,
    class_stats,
    fit_ada,
    fit_lada,
    fit_lpp,
    fit_lspp,
    fit_slspp,
    lada_weights,
    project,
    slspp_context_matrix,
)


def two_angular_clusters(rng, per_cluster=12, spread=0.03):
    """d=2 samples hugging the 0 and 90 degree directions."""
    a = rng.uniform(-spread, spread, per_cluster)
    b = rng.uniform(-spread, spread, per_cluster)
    scale_a = rng.uniform(0.8, 1.2, per_cluster)
    scale_b = rng.uniform(0.8, 1.2, per_cluster)
    cluster0 = np.stack([np.cos(a), np.sin(a)]) * scale_a
    cluster1 = np.stack([np.sin(b), np.cos(b)]) * scale_b
    return np.hstack([cluster0, cluster1])


class TestLspp:
    def test_rank_one_data(self):
        v = np.array([2.0, 1.0, -1.0])
        X = np.tile(v[:, None], (1, 5))
        proj = fit_lspp(X, r=1, sigma=1.0, ridge=1e-6)
        p = proj.matrix[:, 0]
        cos = abs(p @ v) / (np.linalg.norm(p) * np.linalg.norm(v))
        assert cos >= 1.0 - 1e-6

    def test_constraint_full_rank(self):
        rng = np.random.default_rng(40)
        X = rng.standard_normal((4, 30))
        ridge = 1e-6
        proj = fit_lspp(X, r=4, sigma=2.0, ridge=ridge)
        _, B = graph_pencil_bruteforce(X, 2.0)
        B_reg = regularized(B, ridge)
        gram = proj.matrix.T @ B_reg @ proj.matrix
        assert np.abs(gram - np.eye(4)).max() <= 1e-6

    def test_grid_oracle(self):
        rng = np.random.default_rng(41)
        X = two_angular_clusters(rng)
        sigma = 0.5
        proj = fit_lspp(X, r=1, sigma=sigma, ridge=1e-6)
        A, B = graph_pencil_bruteforce(X, sigma)
        B_reg = regularized(B, 1e-6)
        p = proj.matrix[:, 0]
        achieved = p @ A @ p
        best = grid_best_direction(A, B_reg, n_points=3600)
        assert achieved >= best - 1e-3 * abs(best)
        assert abs(achieved - best) <= 1e-3 * max(1.0, abs(best))

    def test_objective_equals_eigenvalue_sum(self):
        rng = np.random.default_rng(42)
        X = rng.standard_normal((5, 20))
        proj = fit_lspp(X, r=3, sigma=1.5, ridge=1e-6)
        A, _ = graph_pencil_bruteforce(X, 1.5)
        achieved = np.trace(proj.matrix.T @ A @ proj.matrix)
        assert achieved == pytest.approx(proj.eigenvalues.sum(), rel=1e-6)

    def test_r_too_large(self):
        with pytest.raises(ReducedDimTooLargeError):
            fit_lspp(np.ones((3, 4)), r=4, sigma=1.0)

    def test_random_feasible_directions_never_beat_fit(self):
        rng = np.random.default_rng(43)
        for d in (2, 3):
            X = rng.standard_normal((d, 15))
            proj = fit_lspp(X, r=1, sigma=1.0, ridge=1e-6)
            A, B = graph_pencil_bruteforce(X, 1.0)
            B_reg = regularized(B, 1e-6)
            p = proj.matrix[:, 0]
            achieved = p @ A @ p
            for _ in range(1000):
                u = rng.standard_normal(d)
                u = u / np.sqrt(u @ B_reg @ u)
                assert achieved >= u @ A @ u - 1e-9


class TestLpp:
    def test_identical_samples_zero_objective(self):
        X = np.tile(np.array([1.0, 2.0])[:, None], (1, 6))
        proj = fit_lpp(X, r=1, sigma=1.0, ridge=1e-6)
        A, B = graph_pencil_bruteforce(X, 1.0)
        p = proj.matrix[:, 0]
        assert abs(p @ (B - A) @ p) <= 1e-8

    def test_two_sample_laplacian_elementwise(self):
        X = np.array([[0.0, 1.0], [0.0, 0.0]])
        sigma = 2.0
        W = heat_kernel_affinity(X, sigma).weights
        D = np.diag(W.sum(axis=1))
        w12 = np.exp(-1.0 / sigma)
        np.testing.assert_allclose(D - W, [[w12, -w12], [-w12, w12]], atol=1e-15)

    def test_grid_oracle(self):
        rng = np.random.default_rng(44)
        X = two_angular_clusters(rng)
        sigma = 0.5
        proj = fit_lpp(X, r=1, sigma=sigma, ridge=1e-6)
        A, B = graph_pencil_bruteforce(X, sigma)
        B_reg = regularized(B, 1e-6)
        L = B - A
        p = proj.matrix[:, 0]
        achieved = p @ L @ p
        best = grid_best_direction(L, B_reg, n_points=3600, minimize=True)
        assert abs(achieved - best) <= 1e-3 * max(1.0, abs(best))

    def test_eigenvalues_descending_and_importance_first(self):
        rng = np.random.default_rng(45)
        X = rng.standard_normal((4, 25))
        proj = fit_lpp(X, r=3, sigma=1.0, ridge=1e-6)
        assert np.all(np.diff(proj.eigenvalues) <= 0)
        # first column attains the smallest Laplacian objective
        A, B = graph_pencil_bruteforce(X, 1.0)
        L = B - A
        objs = [proj.matrix[:, i] @ L @ proj.matrix[:, i] for i in range(3)]
        assert objs[0] == min(objs)


class TestSlspp:
    def test_constant_cube(self):
        v = np.array([1.0, 3.0, 2.0])
        cube = HyperCube(values=np.tile(v, (4, 4, 1)))
        coords = [(1, 1), (2, 2), (0, 3)]
        proj = fit_slspp(cube, coords, r=1, window=3, sigma=1.0)
        p = proj.matrix[:, 0]
        cos = abs(p @ v) / (np.linalg.norm(p) * np.linalg.norm(v))
        assert cos >= 1.0 - 1e-10

    def test_window_one_outer_product(self):
        rng = np.random.default_rng(50)
        cube = HyperCube(values=rng.standard_normal((3, 3, 4)))
        coords = [(0, 0), (1, 2), (2, 1)]
        M = slspp_context_matrix(cube, coords, window=1, sigma=1.0)
        expected = np.zeros((4, 4))
        for r, c in coords:
            x = cube.values[r, c]
            expected += np.outer(x, x)
        np.testing.assert_allclose(M, expected, atol=1e-12)

    def test_corner_uses_four_neighbors(self):
        rng = np.random.default_rng(51)
        cube = HyperCube(values=rng.standard_normal((3, 3, 2)))
        M = slspp_context_matrix(cube, [(0, 0)], window=3, sigma=1.0)
        brute = slspp_matrix_bruteforce(cube.values, [(0, 0)], 3, 1.0)
        np.testing.assert_allclose(M, brute, atol=1e-12)

    def test_matrix_matches_bruteforce(self):
        rng = np.random.default_rng(52)
        cube = HyperCube(values=rng.standard_normal((5, 6, 3)))
        coords = [(r, c) for r in range(5) for c in range(0, 6, 2)]
        sigma = 0.9
        M = slspp_context_matrix(cube, coords, window=3, sigma=sigma)
        brute = slspp_matrix_bruteforce(cube.values, coords, 3, sigma)
        np.testing.assert_allclose(M, brute, atol=1e-10)

    def test_top_eigenvector_of_symmetrized(self):
        rng = np.random.default_rng(53)
        cube = HyperCube(values=rng.standard_normal((4, 4, 3)))
        coords = [(r, c) for r in range(4) for c in range(4)]
        proj = fit_slspp(cube, coords, r=1, window=3, sigma=1.0)
        M = slspp_matrix_bruteforce(cube.values, coords, 3, 1.0)
        sym = 0.5 * (M + M.T)
        w, V = np.linalg.eigh(sym)
        top = V[:, -1]
        cos = abs(top @ proj.matrix[:, 0])
        assert cos == pytest.approx(1.0, abs=1e-8)
        assert proj.eigenvalues[0] == pytest.approx(w[-1], rel=1e-10)

    def test_symmetrization_objective_identity(self):
        rng = np.random.default_rng(54)
        cube = HyperCube(values=rng.standard_normal((4, 5, 4)))
        coords = [(1, 1), (2, 3), (3, 4)]
        M = slspp_context_matrix(cube, coords, window=3, sigma=1.0)
        sym = 0.5 * (M + M.T)
        for _ in range(20):
            P = np.linalg.qr(rng.standard_normal((4, 2)))[0]
            assert np.trace(P.T @ M @ P) == pytest.approx(
                np.trace(P.T @ sym @ P), abs=1e-10
            )

    def test_columns_orthonormal(self):
        cube, _ = synth_scene(10, 10, 8, 2, noise_sd=0.1, patch_size=5, seed=4)
        coords = [(r, c) for r in range(0, 10, 3) for c in range(0, 10, 3)]
        proj = fit_slspp(cube, coords, r=4, window=3)
        gram = proj.matrix.T @ proj.matrix
        assert np.abs(gram - np.eye(4)).max() <= 1e-8


class TestAda:
    def test_one_sample_per_class_within(self):
        x1 = np.array([1.0, 0.0])
        x2 = np.array([0.0, 1.0])
        sc = ada_scatter(np.stack([x1, x2], axis=1), np.array([1, 2]))
        np.testing.assert_allclose(sc.within, np.outer(x1, x1) + np.outer(x2, x2))

    def test_between_rank_one_identity(self):
        # the between matrix always collapses to n * mu mu^t
        rng = np.random.default_rng(60)
        X = rng.standard_normal((3, 12))
        labels = np.array([1, 2, 3] * 4)
        sc = ada_scatter(X, labels)
        mu = X.mean(axis=1)
        np.testing.assert_allclose(sc.between, 12 * np.outer(mu, mu), atol=1e-12)

    def test_between_example_pre_symmetrization(self):
        X = np.array([[1.0, 0.0], [0.0, 1.0]])
        sc = ada_scatter(X, np.array([1, 2]))
        np.testing.assert_allclose(
            sc.between, [[0.5, 0.5], [0.5, 0.5]], atol=1e-15
        )

    def test_single_class_raises(self):
        X = np.ones((2, 3))
        with pytest.raises(SingleClassError):
            fit_ada(SampleSet(features=X, labels=np.array([1, 1, 1])))

    def test_empty_class_raises(self):
        X = np.ones((2, 3))
        with pytest.raises(EmptyClassError):
            class_stats(X, np.array([1, 3, 3]))

    def test_default_r_and_determinism(self):
        rng = np.random.default_rng(61)
        X = SampleSet(
            features=rng.standard_normal((6, 20)),
            labels=np.array([1, 2, 3, 4] * 5),
        )
        p1 = fit_ada(X)
        p2 = fit_ada(X)
        assert p1.r == 3  # min(d, c-1)
        np.testing.assert_array_equal(p1.matrix, p2.matrix)

    def test_permutation_invariance(self):
        # The between matrix is rank one, so only the leading eigenvector is
        # pinned; the trailing columns live in a degenerate eigenspace. The
        # scatter matrices themselves and the spectrum are invariant.
        rng = np.random.default_rng(62)
        F = rng.standard_normal((4, 16))
        labels = np.array([1, 2] * 8)
        perm = rng.permutation(16)
        sc1 = ada_scatter(F, labels)
        sc2 = ada_scatter(F[:, perm], labels[perm])
        np.testing.assert_allclose(sc1.within, sc2.within, atol=1e-12)
        np.testing.assert_allclose(sc1.between, sc2.between, atol=1e-12)
        p1 = fit_ada(SampleSet(features=F, labels=labels), r=2)
        p2 = fit_ada(SampleSet(features=F[:, perm], labels=labels[perm]), r=2)
        np.testing.assert_allclose(p1.eigenvalues, p2.eigenvalues, atol=1e-8)
        cos = abs(p1.matrix[:, 0] @ p2.matrix[:, 0]) / (
            np.linalg.norm(p1.matrix[:, 0]) * np.linalg.norm(p2.matrix[:, 0])
        )
        assert cos == pytest.approx(1.0, abs=1e-8)


class TestLada:
    def test_weight_formulas(self):
        # n=10, same-class pair of a 5-sample class with A_ij = 1
        labels = np.array([1] * 5 + [2] * 5)
        A = np.ones((10, 10))
        w_within, w_between = lada_weights(labels, A)
        assert w_within[0, 1] == 1.0 / 5
        assert w_between[0, 1] == 1.0 * (1.0 / 10 - 1.0 / 5)
        assert w_between[0, 1] == -0.1
        # different-class pair
        assert w_within[0, 5] == 0.0
        assert w_between[0, 5] == 1.0 / 10

    def test_off_class_between_ignores_affinity(self):
        labels = np.array([1, 1, 2, 2])
        A = np.full((4, 4), 0.3)
        np.fill_diagonal(A, 1.0)
        _, w_between = lada_weights(labels, A)
        assert w_between[0, 2] == 1.0 / 4

    def test_scatter_symmetric_for_symmetric_affinity(self):
        rng = np.random.default_rng(63)
        F = rng.standard_normal((3, 8))
        labels = np.array([1, 1, 1, 1, 2, 2, 2, 2])
        A = heat_kernel_affinity(F, 1.0)
        w_within, w_between = lada_weights(labels, A)
        O_lw = F @ w_within @ F.T
        O_lb = F @ w_between @ F.T
        np.testing.assert_allclose(O_lw, O_lw.T, atol=1e-12)
        np.testing.assert_allclose(O_lb, O_lb.T, atol=1e-12)

    def test_fit_shapes_and_errors(self):
        rng = np.random.default_rng(64)
        X = SampleSet(
            features=rng.standard_normal((5, 12)),
            labels=np.array([1, 2, 3] * 4),
        )
        proj = fit_lada(X, r=2, sigma=1.0)
        assert proj.matrix.shape == (5, 2)
        with pytest.raises(SingleClassError):
            fit_lada(SampleSet(features=X.features, labels=np.ones(12, dtype=int)))

    def test_permutation_invariance_up_to_sign(self):
        # unlike the plain discriminant, the locality-weighted between matrix
        # has a generic spectrum, so full column invariance is testable
        rng = np.random.default_rng(65)
        F = rng.standard_normal((4, 16))
        labels = np.array([1, 2] * 8)
        perm = rng.permutation(16)
        p1 = fit_lada(SampleSet(features=F, labels=labels), r=3, sigma=1.0)
        p2 = fit_lada(
            SampleSet(features=F[:, perm], labels=labels[perm]), r=3, sigma=1.0
        )
        for i in range(3):
            cos = abs(p1.matrix[:, i] @ p2.matrix[:, i]) / (
                np.linalg.norm(p1.matrix[:, i]) * np.linalg.norm(p2.matrix[:, i])
            )
            assert cos == pytest.approx(1.0, abs=1e-8)


class TestProject:
    def test_identity(self):
        rng = np.random.default_rng(70)
        F = rng.standard_normal((3, 5))
        proj = Projection(
            matrix=np.eye(3), eigenvalues=np.array([3.0, 2.0, 1.0]), method="lspp"
        )
        out = project(proj, SampleSet(features=F))
        np.testing.assert_array_equal(out.features, F)

    def test_coordinate_selection(self):
        F = np.array([[1.0, 2.0], [3.0, 4.0]])
        proj = Projection(
            matrix=np.array([[1.0], [0.0]]), eigenvalues=np.array([1.0]), method="lspp"
        )
        out = project(proj, SampleSet(features=F))
        np.testing.assert_array_equal(out.features, [[1.0, 2.0]])

    def test_linearity(self):
        rng = np.random.default_rng(71)
        P = Projection(
            matrix=rng.standard_normal((4, 2)),
            eigenvalues=np.array([2.0, 1.0]),
            method="slspp",
        )
        X = rng.standard_normal((4, 6))
        Y = rng.standard_normal((4, 6))
        a, b = 2.5, -1.25
        left = project(P, a * X + b * Y).features
        right = a * project(P, X).features + b * project(P, Y).features
        np.testing.assert_allclose(left, right, atol=1e-12)

    def test_carries_labels_and_coords(self):
        F = np.eye(3)
        ss = SampleSet(
            features=F,
            labels=np.array([1, 2, 1]),
            coords=np.array([[0, 0], [0, 1], [1, 0]]),
        )
        proj = Projection(
            matrix=np.eye(3)[:, :2], eigenvalues=np.array([1.0, 1.0]), method="lpp"
        )
        out = project(proj, ss)
        np.testing.assert_array_equal(out.labels, ss.labels)
        np.testing.assert_array_equal(out.coords, ss.coords)

    def test_dimension_mismatch(self):
        proj = Projection(
            matrix=np.eye(3), eigenvalues=np.array([1.0, 1.0, 1.0]), method="ada"
        )
        with pytest.raises(DimensionMismatchError):
            project(proj, SampleSet(features=np.ones((2, 4))))


class TestPersistence:
    def test_round_trip_exact(self, tmp_path):
        rng = np.random.default_rng(80)
        X = rng.standard_normal((6, 15))
        proj = fit_lspp(X, r=3, sigma=1.2345, ridge=1e-6)
        path = tmp_path / "proj.txt"
        proj.save(path)
        again = Projection.load(path)
        assert again.method == proj.method
        np.testing.assert_array_equal(again.matrix, proj.matrix)
        np.testing.assert_array_equal(again.eigenvalues, proj.eigenvalues)
        assert again.fit_params["sigma"] == proj.fit_params["sigma"]
        assert again.fit_params["ridge"] == proj.fit_params["ridge"]

    def test_round_trip_slspp_window(self, tmp_path):
        cube, _ = synth_scene(8, 8, 6, 2, noise_sd=0.05, patch_size=4, seed=5)
        proj = fit_slspp(cube, [(1, 1), (4, 4)], r=3, window=5)
        path = tmp_path / "proj.txt"
        proj.save(path)
        again = Projection.load(path)
        assert again.fit_params["window"] == 5
        np.testing.assert_array_equal(again.matrix, proj.matrix)

    def test_malformed(self, tmp_path):
        path = tmp_path / "bad.txt"
        path.write_text("lspp 2 1 - -\n1 2\n")
        with pytest.raises(MalformedHeaderError):
            Projection.load(path)
        path.write_text("nope 2 1 - - -\n1\n2\n3\n")
        with pytest.raises(MalformedHeaderError):
            Projection.load(path)
