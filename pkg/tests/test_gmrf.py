"""
Tests for GMRF structures, scaling, factorization and sampling
"""

import numpy as np
import pytest
import scipy.sparse as sp
from hypothesis import given, settings, strategies as st

from gmrf import (ConstrainedFactor, FactorizationError, PrecisionFactor, StructureError, StructureKind,
                  besag_structure, component_geometric_means, conditional_moments, constrained_marginal_variances,
                  export_structure_csv, iid_structure, rw1_structure, sample_constrained, scale_structure,
                  sparse_logdet)
from ingest.adjacency import graph_from_edges
from ingest.models import AdjacencyGraph

PATH_R = np.array([[1.0, -1.0, 0.0], [-1.0, 2.0, -1.0], [0.0, -1.0, 1.0]])


def graph(n: int, pairs) -> AdjacencyGraph:
    return graph_from_edges(np.arange(1, n + 1), np.array(pairs, dtype=np.int64).reshape(-1, 2))


def random_graph(rng: np.random.Generator, n: int, p: float) -> AdjacencyGraph:
    pairs = [(i, j) for i in range(n) for j in range(i + 1, n) if rng.uniform() < p]
    # a spanning path keeps every node connected
    pairs += [(i, i + 1) for i in range(n - 1)]
    return graph(n, pairs)


def dense_constrained_variances(R: np.ndarray) -> np.ndarray:
    """Diagonal of the pseudo-inverse via eigendecomposition"""
    values, vectors = np.linalg.eigh(R)
    keep = values > 1e-9 * values.max()
    return (vectors[:, keep] ** 2 / values[keep]).sum(axis=1)


class TestBesag:
    def test_path_graph(self):
        structure = besag_structure(graph(3, [(0, 1), (1, 2)]))
        np.testing.assert_array_equal(structure.matrix.toarray(), PATH_R)
        assert structure.kind is StructureKind.BESAG
        assert structure.rank_deficiency == 1

    def test_conditional_moments_of_a_middle_node(self):
        structure = besag_structure(graph(3, [(0, 1), (1, 2)]))
        mean, variance = conditional_moments(structure, 1.0, np.array([1.0, 99.0, 3.0]), 1)
        assert mean == 2.0
        assert variance == 0.5

    def test_two_disconnected_pairs(self):
        structure = besag_structure(graph(4, [(0, 1), (2, 3)]))
        assert structure.rank_deficiency == 2
        assert len(structure.constraints) == 2
        np.testing.assert_array_equal(structure.constraint_matrix, [[1, 1, 0, 0], [0, 0, 1, 1]])

    def test_isolated_unit_gets_independent_effect(self, caplog):
        structure = besag_structure(graph(3, [(0, 1)]))
        assert structure.component.tolist() == [0, 0, -1]
        assert structure.matrix[2, 2] == 1.0
        assert structure.rank_deficiency == 1
        assert "Isolated" in caplog.text

    def test_too_few_units(self):
        with pytest.raises(StructureError):
            besag_structure(graph(1, []))

    def test_conditional_law_on_random_graphs(self):
        rng = np.random.default_rng(42)
        for _ in range(50):
            n = int(rng.integers(3, 15))
            g = random_graph(rng, n, 0.3)
            structure = besag_structure(g)
            tau = float(rng.uniform(0.1, 5.0))
            x = rng.normal(size=n)
            neighbours = [[] for _ in range(n)]
            for i, j in g.edges:
                neighbours[i].append(j)
                neighbours[j].append(i)
            for j in range(n):
                mean, variance = conditional_moments(structure, tau, x, j)
                d = len(neighbours[j])
                assert abs(mean - x[neighbours[j]].sum() / d) < 1e-12
                assert abs(variance - 1.0 / (tau * d)) < 1e-12

    @settings(max_examples=30, deadline=None)
    @given(st.integers(0, 2**32 - 1))
    def test_rows_sum_to_zero_and_form_is_psd(self, seed):
        rng = np.random.default_rng(seed)
        structure = besag_structure(random_graph(rng, int(rng.integers(2, 20)), 0.2))
        np.testing.assert_array_equal(np.asarray(structure.matrix.sum(axis=1)).ravel(), 0.0)
        for _ in range(5):
            assert structure.quadratic_form(rng.normal(size=structure.n)) >= -1e-12

    def test_log_pdet_matches_eigenvalues(self):
        rng = np.random.default_rng(5)
        structure = besag_structure(random_graph(rng, 12, 0.25))
        values = np.linalg.eigvalsh(structure.matrix.toarray())
        expected = np.log(values[values > 1e-9]).sum()
        assert structure.log_pdet == pytest.approx(expected, abs=1e-9)


class TestRw1AndIid:
    def test_rw1_three(self):
        np.testing.assert_array_equal(rw1_structure(3).matrix.toarray(), PATH_R)

    def test_rw1_two(self):
        structure = rw1_structure(2)
        np.testing.assert_array_equal(structure.matrix.toarray(), [[1.0, -1.0], [-1.0, 1.0]])
        assert structure.rank_deficiency == 1

    def test_rw1_quadratic_form(self):
        assert rw1_structure(3).quadratic_form(np.array([0.0, 1.0, 2.0])) == 2.0

    def test_rw1_needs_two_classes(self):
        with pytest.raises(StructureError):
            rw1_structure(1)

    def test_iid(self):
        structure = iid_structure(4)
        np.testing.assert_array_equal(structure.matrix.toarray(), np.eye(4))
        v = np.array([1.0, -2.0, 0.5, 3.0])
        assert structure.quadratic_form(v) == pytest.approx(np.sum(v ** 2))
        assert structure.rank_deficiency == 0

    def test_iid_marginal_variance(self):
        tau = 3.7
        factor = PrecisionFactor(iid_structure(4).precision(tau))
        np.testing.assert_allclose(factor.diag_inverse(), 1.0 / tau, rtol=1e-14)


class TestScaling:
    def test_iid_is_a_no_op(self):
        scaled = scale_structure(iid_structure(5))
        assert scaled.scaling_factor == 1.0
        assert scaled.scaled
        np.testing.assert_array_equal(scaled.matrix.toarray(), np.eye(5))

    def test_path_factor_matches_dense_oracle(self):
        scaled = scale_structure(rw1_structure(3))
        expected = np.exp(np.mean(np.log(dense_constrained_variances(PATH_R))))
        assert scaled.scaling_factor == pytest.approx(expected, abs=1e-8)

    def test_rescaling_is_a_fixed_point(self):
        once = scale_structure(besag_structure(graph(5, [(0, 1), (1, 2), (2, 3), (3, 4), (0, 4)])))
        twice = scale_structure(once)
        assert twice.scaling_factor == pytest.approx(1.0, abs=1e-8)

    def test_geometric_mean_is_one_against_eigendecomposition(self):
        rng = np.random.default_rng(9)
        for n in (4, 17, 60, 200):
            scaled = scale_structure(besag_structure(random_graph(rng, n, 3.0 / n)))
            variances = dense_constrained_variances(scaled.matrix.toarray())
            assert np.exp(np.mean(np.log(variances))) == pytest.approx(1.0, abs=1e-8)

    def test_each_component_is_scaled(self):
        structure = besag_structure(graph(5, [(0, 1), (2, 3), (3, 4)]))
        scaled = scale_structure(structure)
        assert len(scaled.scaling_factors) == 2
        np.testing.assert_allclose(component_geometric_means(scaled), 1.0, atol=1e-8)

    def test_sparse_path_agrees_with_dense(self):
        structure = besag_structure(random_graph(np.random.default_rng(2), 40, 0.1))
        dense = constrained_marginal_variances(structure)
        sparse = constrained_marginal_variances(structure, dense_limit=10)
        np.testing.assert_allclose(sparse, dense, rtol=1e-8)

    @settings(max_examples=10, deadline=None)
    @given(st.floats(0.01, 100.0))
    def test_invariant_to_a_constant_multiple(self, c):
        structure = besag_structure(graph(4, [(0, 1), (1, 2), (2, 3), (0, 2)]))
        base = scale_structure(structure).matrix.toarray()
        other = scale_structure(structure.scaled_by(c)).matrix.toarray()
        np.testing.assert_allclose(other, base, atol=1e-8)

    def test_log_pdet_tracks_scaling(self):
        scaled = scale_structure(rw1_structure(6))
        values = np.linalg.eigvalsh(scaled.matrix.toarray())
        assert scaled.log_pdet == pytest.approx(np.log(values[values > 1e-9]).sum(), abs=1e-9)

    def test_isolated_node_is_not_scaled(self):
        scaled = scale_structure(besag_structure(graph(3, [(0, 1)])))
        assert len(scaled.scaling_factors) == 1
        assert scaled.matrix[2, 2] == 1.0


class TestFactorization:
    def test_dense_and_sparse_backends_agree(self):
        rng = np.random.default_rng(1)
        structure = besag_structure(random_graph(rng, 30, 0.1))
        Q = (structure.matrix + sp.identity(30)).tocsr()
        dense = PrecisionFactor(Q, dense_limit=100)
        sparse = PrecisionFactor(Q, dense_limit=5)
        b = rng.normal(size=30)
        np.testing.assert_allclose(sparse.solve(b), dense.solve(b), rtol=1e-9)
        assert sparse.logdet() == pytest.approx(dense.logdet(), abs=1e-9)
        assert sparse_logdet(Q) == pytest.approx(np.linalg.slogdet(Q.toarray())[1], abs=1e-9)
        np.testing.assert_allclose(sparse.diag_inverse(), np.diag(np.linalg.inv(Q.toarray())), rtol=1e-9)

    def test_indefinite_matrix_fails(self):
        with pytest.raises(FactorizationError, match="factorization failed"):
            PrecisionFactor(sp.csr_matrix(np.array([[1.0, 2.0], [2.0, 1.0]])))

    def test_constrained_solution_satisfies_constraint(self):
        structure = besag_structure(graph(4, [(0, 1), (1, 2), (2, 3)]))
        Q = (structure.matrix + 0.1 * sp.identity(4)).tocsr()
        factor = ConstrainedFactor(PrecisionFactor(Q), structure.constraint_matrix)
        x = factor.solve(np.array([1.0, 2.0, -0.5, 4.0]))
        assert abs(x.sum()) < 1e-12
        variances = factor.marginal_variances()
        covariance = np.linalg.inv(Q.toarray())
        C = structure.constraint_matrix
        conditional = covariance - covariance @ C.T @ np.linalg.solve(C @ covariance @ C.T, C @ covariance)
        np.testing.assert_allclose(variances, np.diag(conditional), rtol=1e-9, atol=1e-12)


class TestSampling:
    def test_samples_sum_to_zero_per_component(self):
        structure = scale_structure(besag_structure(graph(6, [(0, 1), (1, 2), (3, 4), (4, 5)])))
        draws = sample_constrained(structure, 2.0, seed=3, size=50)
        assert draws.shape == (50, 6)
        np.testing.assert_allclose(draws[:, :3].sum(axis=1), 0.0, atol=1e-10)
        np.testing.assert_allclose(draws[:, 3:].sum(axis=1), 0.0, atol=1e-10)

    def test_variances_match_pseudo_inverse(self):
        structure = besag_structure(graph(3, [(0, 1), (1, 2)]))
        draws = sample_constrained(structure, 1.0, seed=0, size=10_000)
        expected = dense_constrained_variances(PATH_R)
        np.testing.assert_allclose(draws.var(axis=0), expected, rtol=0.05)

    def test_fixed_seed_is_bit_identical(self):
        structure = scale_structure(rw1_structure(8))
        np.testing.assert_array_equal(sample_constrained(structure, 1.5, seed=12),
                                      sample_constrained(structure, 1.5, seed=12))

    def test_isolated_node_has_precision_tau(self):
        structure = besag_structure(graph(3, [(0, 1)]))
        draws = sample_constrained(structure, 4.0, seed=1, size=20_000)
        assert draws[:, 2].var() == pytest.approx(0.25, rel=0.05)

    def test_tau_must_be_positive(self):
        with pytest.raises(ValueError):
            sample_constrained(rw1_structure(3), 0.0)


def test_export_structure_csv(tmp_path):
    path = export_structure_csv(rw1_structure(3), tmp_path / "r.csv")
    lines = path.read_text().splitlines()
    assert lines[0].startswith("#")
    assert lines[1] == "row,col,value"
    assert len(lines) == 2 + 7
