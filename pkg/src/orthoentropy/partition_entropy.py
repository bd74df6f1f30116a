"""Operational partitions of unity, their density matrices and entropy.

For a unitary ``u = Σ e_ij ⊗ u_ij`` in ``M_n ⊗ L`` the induced partition is
``{u_ij / sqrt(n)}`` flattened column by column: flat index ``k*n + a``
(0-based) holds ``u_{a, k} / sqrt(n)``. Its density matrix has entries
``rho(i, j) = tau_L(x_j^* x_i)`` and its von Neumann entropy peaks at
``2 log n`` exactly when ``M_n ⊗ 1`` and its conjugate by ``u`` are
mutually orthogonal.
"""
from __future__ import annotations

from dataclasses import dataclass

import numpy as np

from .errors import NegativeEigenvalue, PartitionDefect
from .linalg_core import HERMITIAN_TOL, ZERO_TOL, as_matrix, eta, hermitian_spectrum
from .tensor_algebra import (
    AlgElement,
    MatrixUnits,
    TensorContext,
    TracialAlgebra,
    _raw_blocks,
    _raw_blocks_units,
    blocks_of,
)

__all__ = [
    "PARTITION_TOL",
    "OperationalPartition",
    "DensityMatrix",
    "flat_index",
    "induced_partition",
    "density_of_partition",
    "density_matrix",
    "von_neumann_entropy",
    "entropy_of_unitary",
    "entropy_upper_bound",
    "TheoremCheck",
    "theorem_check",
]

PARTITION_TOL = 1e-10
DENSITY_TOL = 1e-10


def flat_index(n: int, row: int, col: int) -> int:
    """0-based position of block ``u_{row, col}`` in the induced partition."""
    return col * n + row


@dataclass(frozen=True)
class OperationalPartition:
    """Finite family ``{x_1, ..., x_k}`` in ``L`` with ``Σ x_i^* x_i = 1``."""

    parent: TracialAlgebra
    elements: tuple

    def __post_init__(self):
        object.__setattr__(self, "elements", tuple(self.elements))
        d = self.defect()
        if d > PARTITION_TOL:
            raise PartitionDefect(f"||Σ x_i^* x_i - 1||_F = {d:.3e} exceeds {PARTITION_TOL:.0e}")

    @property
    def size(self) -> int:
        return len(self.elements)

    def defect(self) -> float:
        total = sum((x.H @ x for x in self.elements), self.parent.zero())
        return (total - self.parent.identity()).norm()

    def permuted(self, order) -> "OperationalPartition":
        return OperationalPartition(self.parent, tuple(self.elements[i] for i in order))


@dataclass(frozen=True)
class DensityMatrix:
    """A positive semidefinite, unit-trace matrix."""

    matrix: np.ndarray
    trace_defect: float
    min_eigenvalue: float

    @classmethod
    def from_matrix(cls, rho, tol: float = DENSITY_TOL) -> "DensityMatrix":
        rho = as_matrix(rho, "rho")
        spec = hermitian_spectrum(rho, tol)
        trace_defect = abs(np.trace(rho) - 1.0)
        if trace_defect > tol:
            raise PartitionDefect(f"|Tr rho - 1| = {trace_defect:.3e}")
        if spec.eigenvalues[0] < -tol:
            raise NegativeEigenvalue(f"rho has eigenvalue {spec.eigenvalues[0]:.3e}")
        return cls(rho, float(trace_defect), float(spec.eigenvalues[0]))

    @property
    def dim(self) -> int:
        return self.matrix.shape[0]


def induced_partition(ctx: TensorContext, u, units: MatrixUnits | None = None) -> OperationalPartition:
    """The partition ``{u_ij / sqrt(n)}`` of ``L`` induced by a unitary ``u ∈ M``."""
    u = ctx.check_unitary(u)
    grid = blocks_of(ctx, u, units)
    n = ctx.n
    scale = 1.0 / np.sqrt(n)
    elements = [None] * (n * n)
    for a in range(n):
        for b in range(n):
            elements[flat_index(n, a, b)] = grid[a][b] * scale
    return OperationalPartition(ctx.L, tuple(elements))


def density_of_partition(X: OperationalPartition) -> DensityMatrix:
    """Gram matrix ``rho(i, j) = tau_L(x_j^* x_i)``."""
    L = X.parent
    k = X.size
    rho = np.empty((k, k), dtype=np.complex128)
    for i, xi in enumerate(X.elements):
        for j, xj in enumerate(X.elements):
            rho[i, j] = sum(w * np.trace(bj.conj().T @ bi) for w, bi, bj in zip(L.weights, xi.blocks, xj.blocks))
    return DensityMatrix.from_matrix(rho)


def _partition_stack(ctx: TensorContext, u: np.ndarray, units: MatrixUnits | None) -> np.ndarray:
    # (n*n, r, r) stack of u_ij / sqrt(n) in flat order
    raw = _raw_blocks(ctx, u) if units is None else _raw_blocks_units(ctx, u, units)
    return raw.transpose(1, 0, 2, 3).reshape(ctx.n * ctx.n, ctx.L.rep_dim, ctx.L.rep_dim) / np.sqrt(ctx.n)


def _density_raw(ctx: TensorContext, u: np.ndarray, units: MatrixUnits | None = None) -> np.ndarray:
    x = _partition_stack(ctx, u, units)
    # tau_L(x_j^* x_i) = sum_{a,b} conj(x_j[a,b]) x_i[a,b] w_b
    w = ctx.L.weight_diag
    return np.einsum("iab,jab,b->ij", x, x.conj(), w)


def density_matrix(ctx: TensorContext, u, units: MatrixUnits | None = None) -> DensityMatrix:
    """``rho[U]`` for the partition induced by ``u``; vectorized equivalent of
    ``density_of_partition(induced_partition(ctx, u, units))``."""
    u = ctx.check_unitary(u)
    return DensityMatrix.from_matrix(_density_raw(ctx, u, units))


def von_neumann_entropy(rho, zero_tol: float = ZERO_TOL) -> float:
    """``S(rho) = Σ eta(lambda_i)``, natural log.

    Eigenvalues in ``[-zero_tol, 0)`` count as zero.

    Raises
    ------
    NegativeEigenvalue
        If an eigenvalue is below ``-zero_tol``.
    """
    m = rho.matrix if isinstance(rho, DensityMatrix) else rho
    lam = hermitian_spectrum(m).eigenvalues
    # eigenvalues of 1 + O(eps) give eta slightly below 0
    return max(float(np.sum(eta(lam, zero_tol))), 0.0)


def entropy_of_unitary(ctx: TensorContext, u, units: MatrixUnits | None = None, zero_tol: float = ZERO_TOL) -> float:
    return von_neumann_entropy(density_matrix(ctx, u, units), zero_tol)


def entropy_upper_bound(ctx: TensorContext) -> float:
    """``min(2 log n, log dim L)``: ``rho[U]`` is an ``n^2`` Gram matrix of vectors in ``L``."""
    return float(min(2.0 * np.log(ctx.n), np.log(ctx.L.alg_dim)))


@dataclass(frozen=True)
class TheoremCheck:
    orthogonal: object
    identity_form: object
    entropy: float
    entropy_maximal: object
    consistent: bool

    @property
    def reports(self) -> list:
        return [self.orthogonal, self.identity_form, self.entropy_maximal]


def theorem_check(ctx: TensorContext, u, tol: float = 1e-8, units: MatrixUnits | None = None) -> TheoremCheck:
    """Evaluate the three equivalent conditions for ``u``.

    ``orthogonal`` is the block-trace criterion, ``identity_form`` measures
    ``||n^2 rho[U] - I||_F`` and ``entropy_maximal`` measures
    ``|2 log n - S(rho[U])|``. ``consistent`` is true when all three verdicts
    agree.
    """
    from .orthogonality import CriterionReport, block_criterion

    u = ctx.check_unitary(u)
    n2 = ctx.n * ctx.n
    rho = density_matrix(ctx, u, units)
    s = von_neumann_entropy(rho)
    orth = block_criterion(ctx, u, tol)
    ident = CriterionReport("identity_form", float(np.linalg.norm(n2 * rho.matrix - np.eye(n2))), tol)
    ent = CriterionReport("entropy", abs(2.0 * np.log(ctx.n) - s), tol)
    consistent = orth.verdict == ident.verdict == ent.verdict
    return TheoremCheck(orth, ident, s, ent, consistent)
