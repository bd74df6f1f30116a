"""Finite-dimensional tracial algebras and the ambient algebra ``M_n ⊗ L``.

``L`` is a direct sum of full matrix blocks ``M_{m_1} ⊕ ... ⊕ M_{m_r}``
represented block-diagonally on ``C^{m_1 + ... + m_r}``. Its trace is
``tau_L(y) = sum_s w_s Tr(y_s)``. Elements of ``M = M_n ⊗ L`` are
``n * rep_dim`` square matrices ordered as ``kron(e_ij, y)``.
"""
from __future__ import annotations

from dataclasses import dataclass, field
from functools import cached_property

import numpy as np

from .errors import NotUnitary, ShapeMismatch
from .linalg_core import UNITARY_TOL, as_matrix, unitarity_defect

__all__ = [
    "TracialAlgebra",
    "AlgElement",
    "TensorContext",
    "MatrixUnits",
    "N_LEG",
    "L_LEG",
    "tau_L",
    "tau_M",
    "blocks_of",
    "assemble",
    "unitarity_block_check",
    "expect_onto_N",
    "expect_onto_L_leg",
    "expect_onto_conjugate",
]

N_LEG = "N"
L_LEG = "L"


@dataclass(frozen=True)
class TracialAlgebra:
    """``L = ⊕_s M_{m_s}`` with trace weight ``w_s`` on each minimal projection of block ``s``."""

    block_sizes: tuple
    weights: tuple

    def __post_init__(self):
        sizes = tuple(int(m) for m in self.block_sizes)
        weights = tuple(float(w) for w in self.weights)
        if not sizes or any(m < 1 for m in sizes):
            raise ShapeMismatch(f"block sizes must be positive integers, got {self.block_sizes}")
        if len(weights) != len(sizes):
            raise ShapeMismatch("need exactly one weight per block")
        if any(not np.isfinite(w) or w <= 0 for w in weights):
            raise ShapeMismatch(f"weights must be positive (faithful trace), got {weights}")
        total = sum(w * m for w, m in zip(weights, sizes))
        if abs(total - 1.0) > 1e-12:
            raise ShapeMismatch(f"sum_s w_s m_s = {total!r}, must equal 1")
        object.__setattr__(self, "block_sizes", sizes)
        object.__setattr__(self, "weights", weights)

    @classmethod
    def full(cls, m: int) -> "TracialAlgebra":
        """``M_m`` with the normalized trace ``Tr / m``."""
        return cls((m,), (1.0 / m,))

    @classmethod
    def abelian(cls, r: int, weights=None) -> "TracialAlgebra":
        """``C^r`` with the given (default uniform) weights."""
        if weights is None:
            weights = (1.0 / r,) * r
        return cls((1,) * r, tuple(weights))

    @property
    def rep_dim(self) -> int:
        return sum(self.block_sizes)

    @property
    def alg_dim(self) -> int:
        return sum(m * m for m in self.block_sizes)

    @property
    def is_single_block(self) -> bool:
        return len(self.block_sizes) == 1

    @cached_property
    def offsets(self) -> tuple:
        return tuple(np.concatenate([[0], np.cumsum(self.block_sizes)]).astype(int))

    @cached_property
    def weight_diag(self) -> np.ndarray:
        """Diagonal of the density ``W`` with ``tau_L(y) = Tr(W y)``."""
        return np.repeat(np.asarray(self.weights), self.block_sizes)

    @cached_property
    def mask(self) -> np.ndarray:
        """Boolean ``rep_dim`` square mask of the block-diagonal support."""
        labels = np.repeat(np.arange(len(self.block_sizes)), self.block_sizes)
        return labels[:, None] == labels[None, :]

    def identity(self) -> "AlgElement":
        return AlgElement.from_matrix(self, np.eye(self.rep_dim))

    def zero(self) -> "AlgElement":
        return AlgElement.from_matrix(self, np.zeros((self.rep_dim, self.rep_dim)))

    def unit_basis(self) -> list:
        """Block matrix units of ``L`` as ``rep_dim`` square matrices (``alg_dim`` of them)."""
        out = []
        for s, m in enumerate(self.block_sizes):
            off = self.offsets[s]
            for a in range(m):
                for b in range(m):
                    f = np.zeros((self.rep_dim, self.rep_dim), dtype=np.complex128)
                    f[off + a, off + b] = 1.0
                    out.append(f)
        return out


@dataclass(frozen=True)
class AlgElement:
    """An element of ``L``, stored as its list of diagonal blocks."""

    parent: TracialAlgebra
    blocks: tuple

    def __post_init__(self):
        blocks = tuple(np.asarray(b, dtype=np.complex128) for b in self.blocks)
        if len(blocks) != len(self.parent.block_sizes) or any(
            b.shape != (m, m) for b, m in zip(blocks, self.parent.block_sizes)
        ):
            raise ShapeMismatch("block shapes do not match the parent algebra")
        object.__setattr__(self, "blocks", blocks)

    @classmethod
    def from_matrix(cls, parent: TracialAlgebra, y, atol: float = 0.0) -> "AlgElement":
        """Split a block-diagonal ``rep_dim`` matrix; off-block entries above ``atol`` are rejected."""
        y = np.asarray(y, dtype=np.complex128)
        if y.shape != (parent.rep_dim, parent.rep_dim):
            raise ShapeMismatch(f"expected shape {(parent.rep_dim,) * 2}, got {y.shape}")
        off = np.abs(y[~parent.mask])
        if off.size and off.max() > atol:
            raise ShapeMismatch(f"not block-diagonal: off-block entry of size {off.max():.3e}")
        o = parent.offsets
        return cls(parent, tuple(y[o[s]:o[s + 1], o[s]:o[s + 1]] for s in range(len(parent.block_sizes))))

    def matrix(self) -> np.ndarray:
        o = self.parent.offsets
        y = np.zeros((self.parent.rep_dim, self.parent.rep_dim), dtype=np.complex128)
        for s, b in enumerate(self.blocks):
            y[o[s]:o[s + 1], o[s]:o[s + 1]] = b
        return y

    def __matmul__(self, other: "AlgElement") -> "AlgElement":
        return AlgElement(self.parent, tuple(a @ b for a, b in zip(self.blocks, other.blocks)))

    def __add__(self, other: "AlgElement") -> "AlgElement":
        return AlgElement(self.parent, tuple(a + b for a, b in zip(self.blocks, other.blocks)))

    def __sub__(self, other: "AlgElement") -> "AlgElement":
        return AlgElement(self.parent, tuple(a - b for a, b in zip(self.blocks, other.blocks)))

    def __mul__(self, scalar) -> "AlgElement":
        return AlgElement(self.parent, tuple(scalar * b for b in self.blocks))

    __rmul__ = __mul__

    @property
    def H(self) -> "AlgElement":
        return AlgElement(self.parent, tuple(b.conj().T for b in self.blocks))

    def norm(self) -> float:
        """Frobenius norm of the block-diagonal representation."""
        return float(np.sqrt(sum(np.linalg.norm(b) ** 2 for b in self.blocks)))


@dataclass(frozen=True)
class MatrixUnits:
    """A system of matrix units ``{e_ij}`` of ``M_n``; ``units[i, j]`` is ``e_ij``."""

    units: np.ndarray

    def __post_init__(self):
        u = np.asarray(self.units, dtype=np.complex128)
        n = u.shape[0]
        if u.shape != (n, n, n, n):
            raise ShapeMismatch(f"matrix units need shape (n, n, n, n), got {u.shape}")
        object.__setattr__(self, "units", u)

    @property
    def n(self) -> int:
        return self.units.shape[0]

    @classmethod
    def standard(cls, n: int) -> "MatrixUnits":
        return cls(np.eye(n * n).reshape(n, n, n, n))

    @classmethod
    def conjugated(cls, v) -> "MatrixUnits":
        """The system ``v e_ij v^H`` for a unitary ``v``."""
        v = as_matrix(v, "v")
        std = cls.standard(v.shape[0]).units
        return cls(np.einsum("ab,ijbc,dc->ijad", v, std, v.conj()))

    def defect(self) -> float:
        """Largest violation of ``e_ij^H = e_ji``, ``e_ij e_st = δ_js e_it``, ``Σ e_ii = I``."""
        e = self.units
        n = self.n
        adj = np.max(np.abs(e.conj().transpose(1, 0, 3, 2) - e))
        prod = np.einsum("ijab,stbc->ijstac", e, e)
        target = np.einsum("js,itac->ijstac", np.eye(n), e)
        mult = np.max(np.abs(prod - target))
        ident = np.max(np.abs(np.einsum("iiab->ab", e) - np.eye(n)))
        return float(max(adj, mult, ident))


@dataclass(frozen=True)
class TensorContext:
    """The ambient algebra ``M = M_n ⊗ L`` with trace ``tau_M = Tr/n ⊗ tau_L``."""

    n: int
    L: TracialAlgebra

    def __post_init__(self):
        if int(self.n) < 1:
            raise ShapeMismatch(f"n must be >= 1, got {self.n}")
        object.__setattr__(self, "n", int(self.n))

    @classmethod
    def full(cls, n: int, m: int) -> "TensorContext":
        return cls(n, TracialAlgebra.full(m))

    @property
    def total_dim(self) -> int:
        return self.n * self.L.rep_dim

    @cached_property
    def mask(self) -> np.ndarray:
        """Support of ``M`` inside ``M_{total_dim}``."""
        return np.kron(np.ones((self.n, self.n), dtype=bool), self.L.mask)

    @cached_property
    def weight_diag(self) -> np.ndarray:
        return np.tile(self.L.weight_diag, self.n)

    def check_shape(self, x, name: str = "x") -> np.ndarray:
        x = as_matrix(x, name)
        if x.shape[0] != self.total_dim:
            raise ShapeMismatch(f"{name} has dim {x.shape[0]}, context needs {self.total_dim}")
        return x

    def check_member(self, x, name: str = "x", atol: float = 0.0) -> np.ndarray:
        """Shape check plus membership in ``M`` (blocks lie in ``L``)."""
        x = self.check_shape(x, name)
        off = np.abs(x[~self.mask])
        if off.size and off.max() > atol:
            raise ShapeMismatch(f"{name} is not in M_n ⊗ L: off-block entry {off.max():.3e}")
        return x

    def check_unitary(self, u, tol: float = UNITARY_TOL, name: str = "u") -> np.ndarray:
        u = self.check_member(u, name)
        d = unitarity_defect(u)
        if d > tol:
            raise NotUnitary(f"{name} is not unitary: defect {d:.3e} > {tol:.1e}")
        return u

    def project_member(self, x) -> np.ndarray:
        """Zero the entries of ``x`` outside the support of ``M``."""
        return np.where(self.mask, x, 0.0)

    def one_N(self, a) -> np.ndarray:
        """``a ⊗ 1_L``."""
        return np.kron(as_matrix(a, "a"), np.eye(self.L.rep_dim))

    def one_L(self, y) -> np.ndarray:
        """``1_n ⊗ y``."""
        y = y.matrix() if isinstance(y, AlgElement) else np.asarray(y, dtype=np.complex128)
        return np.kron(np.eye(self.n), y)

    def leg_basis(self, leg: str) -> np.ndarray:
        """Matrix-unit basis of ``N = M_n ⊗ 1`` or of ``1 ⊗ L``, stacked on axis 0."""
        if leg == N_LEG:
            units = MatrixUnits.standard(self.n).units.reshape(-1, self.n, self.n)
            return np.stack([self.one_N(e) for e in units])
        if leg == L_LEG:
            return np.stack([self.one_L(f) for f in self.L.unit_basis()])
        raise ValueError(f"unknown leg {leg!r}")

    def ambient_basis(self) -> np.ndarray:
        """Basis ``kron(e_ij, f)`` of ``M`` over standard units and block units of ``L``."""
        units = MatrixUnits.standard(self.n).units.reshape(-1, self.n, self.n)
        return np.stack([np.kron(e, f) for e in units for f in self.L.unit_basis()])


def _raw_blocks(ctx: TensorContext, x: np.ndarray) -> np.ndarray:
    # x_ij as array (n, n, r, r) under the standard units
    n, r = ctx.n, ctx.L.rep_dim
    return x.reshape(n, r, n, r).transpose(0, 2, 1, 3)


def _raw_blocks_units(ctx: TensorContext, x: np.ndarray, units: MatrixUnits) -> np.ndarray:
    # x_ij = (Tr ⊗ id)((f_ji ⊗ 1) x), valid for any system of matrix units
    n, r = ctx.n, ctx.L.rep_dim
    xr = x.reshape(n, r, n, r)
    return np.einsum("jiba,asbt->ijst", units.units, xr)


def _tau_L_raw(L: TracialAlgebra, y: np.ndarray) -> np.ndarray:
    # works on stacks (..., r, r)
    return np.einsum("...ii,i->...", y, L.weight_diag)


def tau_L(L: TracialAlgebra, y) -> complex:
    """``sum_s w_s Tr(y_s)``."""
    if isinstance(y, AlgElement):
        if y.parent != L:
            raise ShapeMismatch("element belongs to a different algebra")
        return complex(sum(w * np.trace(b) for w, b in zip(L.weights, y.blocks)))
    return complex(tau_L(L, AlgElement.from_matrix(L, y)))


def tau_M(ctx: TensorContext, x) -> complex:
    """``(Tr/n ⊗ tau_L)(x) = sum_i tau_L(x_ii) / n``."""
    x = ctx.check_shape(x)
    return complex(np.sum(np.diag(x) * ctx.weight_diag) / ctx.n)


def blocks_of(ctx: TensorContext, x, units: MatrixUnits | None = None) -> list:
    """The unique coefficients ``x_ij ∈ L`` with ``x = Σ e_ij ⊗ x_ij``.

    Returns an ``n x n`` nested list of ``AlgElement``. ``units`` selects an
    alternative system of matrix units (default: standard).
    """
    x = ctx.check_member(x)
    if units is None:
        raw = _raw_blocks(ctx, x)
    else:
        if units.n != ctx.n:
            raise ShapeMismatch("matrix units have the wrong size")
        raw = _raw_blocks_units(ctx, x, units)
    return [[AlgElement.from_matrix(ctx.L, raw[i, j], atol=1e-12) for j in range(ctx.n)] for i in range(ctx.n)]


def assemble(ctx: TensorContext, blocks, units: MatrixUnits | None = None) -> np.ndarray:
    """Inverse of :func:`blocks_of`: ``Σ kron(e_ij, x_ij)``."""
    if len(blocks) != ctx.n or any(len(row) != ctx.n for row in blocks):
        raise ShapeMismatch(f"need an {ctx.n} x {ctx.n} grid of blocks")
    for row in blocks:
        for b in row:
            if not isinstance(b, AlgElement) or b.parent != ctx.L:
                raise ShapeMismatch("grid entries must be elements of the context's L")
    n, r = ctx.n, ctx.L.rep_dim
    if units is None:
        raw = np.stack([np.stack([b.matrix() for b in row]) for row in blocks])
        return raw.transpose(0, 2, 1, 3).reshape(n * r, n * r)
    out = np.zeros((n * r, n * r), dtype=np.complex128)
    for i in range(n):
        for j in range(n):
            out += np.kron(units.units[i, j], blocks[i][j].matrix())
    return out


def unitarity_block_check(ctx: TensorContext, blocks, tol: float = UNITARY_TOL) -> bool:
    """Row and column relations ``Σ_j u_ij u_kj^* = δ_ik 1`` and ``Σ_i u_ij^* u_ik = δ_jk 1``.

    Each relation is a sum over the whole grid, so its Frobenius defect is the
    same number as ``||u u^H - I||_F`` (resp. ``||u^H u - I||_F``) of the
    assembled matrix.
    """
    n = ctx.n
    raw = np.stack([np.stack([b.matrix() for b in row]) for row in blocks])
    rows = np.einsum("ijab,kjcb->ikac", raw, raw.conj())
    cols = np.einsum("ijba,ikbc->jkac", raw.conj(), raw)
    target = np.einsum("ik,ab->ikab", np.eye(n), np.eye(ctx.L.rep_dim))
    row_defect = np.sqrt(np.sum(np.abs(rows - target) ** 2))
    col_defect = np.sqrt(np.sum(np.abs(cols - target) ** 2))
    return bool(row_defect <= tol and col_defect <= tol)


def _expect_N_raw(ctx: TensorContext, x: np.ndarray) -> np.ndarray:
    coeffs = _tau_L_raw(ctx.L, _raw_blocks(ctx, x))
    return np.kron(coeffs, np.eye(ctx.L.rep_dim))


def _expect_L_raw(ctx: TensorContext, x: np.ndarray) -> np.ndarray:
    raw = _raw_blocks(ctx, x)
    return np.kron(np.eye(ctx.n), np.einsum("iiab->ab", raw) / ctx.n)


def expect_onto_N(ctx: TensorContext, x) -> np.ndarray:
    """Trace-preserving conditional expectation onto ``N = M_n ⊗ 1``: ``Σ tau_L(x_ij) e_ij ⊗ 1``."""
    return _expect_N_raw(ctx, ctx.check_member(x))


def expect_onto_L_leg(ctx: TensorContext, x) -> np.ndarray:
    """Trace-preserving conditional expectation onto ``1 ⊗ L``: ``1 ⊗ (Σ_i x_ii / n)``."""
    return _expect_L_raw(ctx, ctx.check_member(x))


def expect_onto_conjugate(ctx: TensorContext, u, x, leg: str = N_LEG) -> np.ndarray:
    """Expectation onto ``u A u^*`` for ``A`` the chosen leg: ``u E_A(u^* x u) u^*``."""
    u = ctx.check_unitary(u)
    x = ctx.check_member(x)
    inner = u.conj().T @ x @ u
    if leg == N_LEG:
        e = _expect_N_raw(ctx, inner)
    elif leg == L_LEG:
        e = _expect_L_raw(ctx, inner)
    else:
        raise ValueError(f"unknown leg {leg!r}")
    return u @ e @ u.conj().T
