"""Maximal abelian subalgebras: the unistochastic matrix of a unitary and its entropy.

For the diagonal algebra ``D`` of ``M_n`` and ``u D u^*``, orthogonality holds
exactly when every ``|u_ij|^2`` equals ``1/n``, which is also when
``H(b(u)) = (1/n) Σ_ij eta(|u_ij|^2)`` reaches its maximum ``log n``.
"""
from __future__ import annotations

from dataclasses import dataclass

import numpy as np

from .errors import NotUnitary, ShapeMismatch
from .linalg_core import UNITARY_TOL, as_matrix, eta, unitarity_defect
from .orthogonality import CriterionReport

__all__ = ["BistochasticMatrix", "unistochastic", "bistochastic_entropy", "masa_orthogonal"]

BISTOCHASTIC_TOL = 1e-10


@dataclass(frozen=True)
class BistochasticMatrix:
    entries: np.ndarray

    def __post_init__(self):
        b = np.asarray(self.entries, dtype=float)
        if b.ndim != 2 or b.shape[0] != b.shape[1]:
            raise ShapeMismatch(f"bistochastic matrix must be square, got {b.shape}")
        if np.any(b < 0):
            raise ShapeMismatch("bistochastic matrix has negative entries")
        defect = max(np.max(np.abs(b.sum(axis=0) - 1)), np.max(np.abs(b.sum(axis=1) - 1)))
        if defect > BISTOCHASTIC_TOL:
            raise ShapeMismatch(f"row/column sums deviate from 1 by {defect:.3e}")
        object.__setattr__(self, "entries", b)

    @property
    def dim(self) -> int:
        return self.entries.shape[0]


def unistochastic(u, tol: float = UNITARY_TOL) -> BistochasticMatrix:
    """``b[i, j] = |u[i, j]|^2``."""
    u = as_matrix(u, "u")
    d = unitarity_defect(u)
    if d > tol:
        raise NotUnitary(f"u is not unitary: defect {d:.3e}")
    return BistochasticMatrix(np.abs(u) ** 2)


def bistochastic_entropy(b) -> float:
    """``(1/n) Σ_ij eta(b_ij)``, between 0 and ``log n``."""
    if not isinstance(b, BistochasticMatrix):
        b = BistochasticMatrix(b)
    return float(np.sum(eta(b.entries)) / b.dim)


def masa_orthogonal(u, tol: float = 1e-8) -> CriterionReport:
    """Flat-moduli test ``max_ij ||u_ij|^2 - 1/n|``; ``extra`` carries ``H(b(u))``."""
    b = unistochastic(u)
    n = b.dim
    h = bistochastic_entropy(b)
    residual = float(np.max(np.abs(b.entries - 1.0 / n)))
    return CriterionReport(
        "masa_flat_moduli",
        residual,
        tol,
        extra={"entropy": h, "entropy_max": float(np.log(n)), "entropy_gap": float(np.log(n) - h)},
    )
