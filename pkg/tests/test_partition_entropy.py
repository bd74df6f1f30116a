import numpy as np
import pytest
from hypothesis import given, settings
from hypothesis import strategies as st

from conftest import SHAPES
from orthoentropy.constructions import identity_unitary, pauli_block_diagonal, random_unitary_in, swap_unitary
from orthoentropy.errors import NegativeEigenvalue, NotUnitary, PartitionDefect
from orthoentropy.linalg_core import haar_random_unitary
from orthoentropy.partition_entropy import (
    DensityMatrix,
    OperationalPartition,
    density_matrix,
    density_of_partition,
    entropy_of_unitary,
    entropy_upper_bound,
    flat_index,
    induced_partition,
    theorem_check,
    von_neumann_entropy,
)
from orthoentropy.tensor_algebra import AlgElement, MatrixUnits, TensorContext, TracialAlgebra

LOG2, LOG3 = np.log(2), np.log(3)


def entropy_oracle(ctx, u):
    """Loop-built Gram matrix, LAPACK eigenvalues."""
    n, r = ctx.n, ctx.L.rep_dim
    w = ctx.L.weight_diag
    xs = []
    for col in range(n):
        for row in range(n):
            xs.append(u[row * r:(row + 1) * r, col * r:(col + 1) * r] / np.sqrt(n))
    k = n * n
    rho = np.array([[np.trace(xs[j].conj().T @ xs[i] @ np.diag(w)) for j in range(k)] for i in range(k)])
    lam = np.linalg.eigvalsh(rho)
    lam = lam[lam > 1e-12]
    return float(-np.sum(lam * np.log(lam))), rho


class TestExactValues:
    @pytest.mark.parametrize("n", [2, 3, 4, 5])
    def test_swap_density_is_flat(self, n):
        rho = density_matrix(TensorContext.full(n, n), swap_unitary(n)).matrix
        assert np.max(np.abs(rho - np.eye(n * n) / n ** 2)) <= 1e-10
        assert entropy_of_unitary(TensorContext.full(n, n), swap_unitary(n)) == pytest.approx(2 * np.log(n), abs=1e-12)

    def test_pauli_density_is_flat(self):
        ctx, u = pauli_block_diagonal()
        assert np.max(np.abs(density_matrix(ctx, u).matrix - np.eye(4) / 4)) <= 1e-15

    @pytest.mark.parametrize("shape", [(2, 2), (2, 3), (3, 3), (3, 2)])
    def test_identity_has_zero_entropy(self, shape):
        ctx = TensorContext.full(*shape)
        rho = density_matrix(ctx, identity_unitary(ctx)).matrix
        assert np.linalg.matrix_rank(rho) == 1
        assert abs(entropy_of_unitary(ctx, identity_unitary(ctx))) <= 1e-10

    def test_identity_density_entries(self):
        # only x_1 = u_11/sqrt(n) and x_{n+2} = u_22/sqrt(n) are nonzero, both 1/sqrt(2)
        rho = density_matrix(TensorContext.full(2, 2), np.eye(4)).matrix
        expected = np.zeros((4, 4))
        expected[np.ix_([0, 3], [0, 3])] = 0.5
        np.testing.assert_allclose(rho, expected, atol=1e-15)

    def test_two_point_entropy(self):
        assert von_neumann_entropy(np.diag([0.75, 0.25])) == pytest.approx(0.562335144618808, abs=1e-14)

    def test_haar_golden(self):
        ctx = TensorContext.full(2, 2)
        u = haar_random_unitary(4, 42)
        s = entropy_of_unitary(ctx, u)
        assert s == pytest.approx(0.8837147899893028, abs=1e-12)
        assert s == pytest.approx(entropy_oracle(ctx, u)[0], abs=1e-12)

    def test_upper_bounds(self):
        assert entropy_upper_bound(TensorContext.full(2, 2)) == pytest.approx(2 * LOG2)
        assert entropy_upper_bound(TensorContext.full(3, 2)) == pytest.approx(2 * LOG2)
        assert entropy_upper_bound(TensorContext(3, TracialAlgebra.abelian(3))) == pytest.approx(LOG3)
        assert entropy_upper_bound(TensorContext.full(3, 3)) == pytest.approx(2 * LOG3)


class TestPartition:
    def test_flat_index(self):
        assert [flat_index(2, a, b) for b in range(2) for a in range(2)] == [0, 1, 2, 3]
        assert flat_index(3, 1, 2) == 7

    def test_swap_partition_elements(self):
        X = induced_partition(TensorContext.full(2, 2), swap_unitary(2))
        # u_{a,b} = e_{b,a}
        e12 = np.array([[0, 1], [0, 0]])
        np.testing.assert_allclose(X.elements[flat_index(2, 0, 1)].matrix(), e12.T / np.sqrt(2))
        assert X.size == 4 and X.defect() < 1e-15

    def test_normalization(self, ctx, unitary):
        assert induced_partition(ctx, unitary).defect() <= 1e-10

    def test_rejects_defective_partition(self):
        L = TracialAlgebra.full(2)
        with pytest.raises(PartitionDefect):
            OperationalPartition(L, (AlgElement.from_matrix(L, 0.5 * np.eye(2)),))

    def test_rejects_non_unitary(self):
        with pytest.raises(NotUnitary):
            induced_partition(TensorContext.full(2, 2), np.eye(4) * 1.01)

    def test_density_routes_agree(self, ctx, unitary):
        loop = density_of_partition(induced_partition(ctx, unitary)).matrix
        fast = density_matrix(ctx, unitary).matrix
        np.testing.assert_allclose(fast, loop, atol=1e-14)
        np.testing.assert_allclose(fast, entropy_oracle(ctx, unitary)[1], atol=1e-14)

    def test_entropy_matches_oracle(self, ctx, unitary):
        assert entropy_of_unitary(ctx, unitary) == pytest.approx(entropy_oracle(ctx, unitary)[0], abs=1e-11)

    def test_permutation_invariance(self, ctx, unitary, rng):
        X = induced_partition(ctx, unitary)
        Y = X.permuted(rng.permutation(X.size))
        s_x = von_neumann_entropy(density_of_partition(X))
        assert von_neumann_entropy(density_of_partition(Y)) == pytest.approx(s_x, abs=1e-12)

    def test_matrix_unit_independence(self, ctx, unitary, rng):
        units = MatrixUnits.conjugated(haar_random_unitary(ctx.n, rng))
        s_std = entropy_of_unitary(ctx, unitary)
        s_rot = entropy_of_unitary(ctx, unitary, units)
        assert abs(s_std - s_rot) <= 1e-9
        assert induced_partition(ctx, unitary, units).defect() <= 1e-10


class TestDensityMatrix:
    def test_rejects_bad_trace(self):
        with pytest.raises(PartitionDefect):
            DensityMatrix.from_matrix(np.eye(2))

    def test_rejects_negative(self):
        with pytest.raises(NegativeEigenvalue):
            DensityMatrix.from_matrix(np.diag([1.5, -0.5]))

    def test_small_negative_counts_as_zero(self):
        assert von_neumann_entropy(np.diag([1.0, -1e-13])) == 0.0
        with pytest.raises(NegativeEigenvalue):
            von_neumann_entropy(np.diag([1.0, -1e-6]))


@settings(max_examples=100, deadline=None)
@given(shape=st.sampled_from(SHAPES), seed=st.integers(0, 2 ** 32 - 1))
def test_density_invariants(shape, seed):
    ctx = TensorContext(*shape)
    u = random_unitary_in(ctx, seed)
    assert induced_partition(ctx, u).defect() <= 1e-10
    rho = density_matrix(ctx, u)
    assert rho.trace_defect <= 1e-10 and rho.min_eigenvalue >= -1e-10
    s = von_neumann_entropy(rho)
    assert -1e-12 <= s <= entropy_upper_bound(ctx) + 1e-10


class TestTheoremCheck:
    @pytest.mark.parametrize("n", [2, 3])
    def test_swap(self, n):
        t = theorem_check(TensorContext.full(n, n), swap_unitary(n))
        assert t.consistent and all(r.verdict for r in t.reports)

    def test_identity(self):
        ctx = TensorContext.full(2, 2)
        t = theorem_check(ctx, identity_unitary(ctx))
        assert t.consistent and not any(r.verdict for r in t.reports)
        assert t.entropy_maximal.residual == pytest.approx(2 * LOG2)

    def test_haar(self, ctx, unitary):
        t = theorem_check(ctx, unitary)
        assert t.consistent and not t.orthogonal.verdict
