"""Known orthogonal and non-orthogonal unitaries used as ground truth."""
from __future__ import annotations

from dataclasses import dataclass

import numpy as np

from .errors import NotUnitary, ShapeMismatch
from .linalg_core import UNITARY_TOL, as_matrix, haar_random_unitary, is_unitary
from .tensor_algebra import TensorContext, TracialAlgebra

__all__ = [
    "ConstructionSpec",
    "swap_unitary",
    "dressed_swap",
    "pauli_block_diagonal",
    "fourier_unitary",
    "identity_unitary",
    "random_unitary_in",
    "build",
    "PAULIS",
]

PAULIS = np.array(
    [
        [[1, 0], [0, 1]],
        [[0, 1], [1, 0]],
        [[0, -1j], [1j, 0]],
        [[1, 0], [0, -1]],
    ],
    dtype=np.complex128,
)


def swap_unitary(n: int) -> np.ndarray:
    """The tensor flip ``Σ_ab e_ab ⊗ e_ba`` on ``C^n ⊗ C^n``."""
    if n < 1:
        raise ShapeMismatch(f"n must be >= 1, got {n}")
    u = np.zeros((n * n, n * n), dtype=np.complex128)
    for a in range(n):
        for b in range(n):
            u[a * n + b, b * n + a] = 1.0
    return u


def dressed_swap(n: int, v=None, w=None, v2=None, w2=None) -> np.ndarray:
    """``(v ⊗ w) · swap · (v2 ⊗ w2)`` for unitaries in ``M_n``; ``None`` means identity."""
    mats = []
    for name, x in (("v", v), ("w", w), ("v2", v2), ("w2", w2)):
        x = np.eye(n) if x is None else as_matrix(x, name)
        if x.shape != (n, n):
            raise ShapeMismatch(f"{name} must be {n} x {n}")
        if not is_unitary(x, UNITARY_TOL):
            raise NotUnitary(f"{name} is not unitary")
        mats.append(x)
    v, w, v2, w2 = mats
    return np.kron(v, w) @ swap_unitary(n) @ np.kron(v2, w2)


def pauli_block_diagonal() -> tuple:
    """Context ``n = 2``, ``L = C^4`` (uniform trace) and the unitary whose
    ``s``-th abelian summand carries the Pauli matrix ``σ^s``.

    Block ``u_ij ∈ C^4`` is the vector ``(σ^0_ij, σ^1_ij, σ^2_ij, σ^3_ij)``.
    """
    ctx = TensorContext(2, TracialAlgebra.abelian(4))
    u = np.zeros((8, 8), dtype=np.complex128)
    for i in range(2):
        for j in range(2):
            u[i * 4:(i + 1) * 4, j * 4:(j + 1) * 4] = np.diag(PAULIS[:, i, j])
    return ctx, u


def fourier_unitary(n: int) -> np.ndarray:
    """``F[j, k] = exp(2πi jk / n) / sqrt(n)``."""
    if n < 1:
        raise ShapeMismatch(f"n must be >= 1, got {n}")
    j = np.arange(n)
    return np.exp(2j * np.pi * np.outer(j, j) / n) / np.sqrt(n)


def identity_unitary(ctx: TensorContext) -> np.ndarray:
    return np.eye(ctx.total_dim, dtype=np.complex128)


def random_unitary_in(ctx: TensorContext, seed=None) -> np.ndarray:
    """Haar-random unitary of ``M = M_n ⊗ L``.

    ``M`` is the direct sum over blocks of ``L`` of ``M_n ⊗ M_{m_s}``; each
    summand gets an independent Haar unitary. For ``L = M_m`` this is just a
    Haar unitary of size ``n m``.
    """
    rng = np.random.default_rng(seed)
    if ctx.L.is_single_block:
        return haar_random_unitary(ctx.total_dim, rng)
    n, r = ctx.n, ctx.L.rep_dim
    u = np.zeros((n, r, n, r), dtype=np.complex128)
    o = ctx.L.offsets
    for s, m in enumerate(ctx.L.block_sizes):
        block = haar_random_unitary(n * m, rng).reshape(n, m, n, m)
        u[:, o[s]:o[s + 1], :, o[s]:o[s + 1]] = block
    return u.reshape(n * r, n * r)


@dataclass(frozen=True)
class ConstructionSpec:
    kind: str
    n: int
    L: TracialAlgebra
    seed: int | None = None
    expected_orthogonal: bool = False

    @property
    def ctx(self) -> TensorContext:
        return TensorContext(self.n, self.L)


def build(spec: ConstructionSpec) -> np.ndarray:
    """Materialize the unitary described by ``spec``."""
    ctx = spec.ctx
    kind = spec.kind
    if kind in ("swap", "dressed_swap") and ctx.L != TracialAlgebra.full(spec.n):
        raise ShapeMismatch(f"{kind} requires L = M_n with normalized trace")
    if kind == "swap":
        return swap_unitary(spec.n)
    if kind == "dressed_swap":
        rng = np.random.default_rng(spec.seed)
        return dressed_swap(spec.n, *(haar_random_unitary(spec.n, rng) for _ in range(4)))
    if kind == "pauli_block_diagonal":
        pctx, u = pauli_block_diagonal()
        if ctx != pctx:
            raise ShapeMismatch("pauli_block_diagonal requires n = 2 and L = C^4 with uniform weights")
        return u
    if kind == "identity":
        return identity_unitary(ctx)
    if kind == "haar_random":
        return random_unitary_in(ctx, spec.seed)
    if kind == "fourier_masa":
        if ctx.L.block_sizes != (1,):
            raise ShapeMismatch("fourier_masa requires L = C")
        return fourier_unitary(spec.n)
    raise ValueError(f"unknown construction kind {kind!r}")
