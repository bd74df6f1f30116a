"""Dense complex linear algebra used throughout the package.

Matrices are plain ``numpy.ndarray`` objects of dtype ``complex128``. The
Hermitian eigensolver is a cyclic complex Jacobi method so that spectra are
reproducible bit-for-bit for identical input.
"""
from __future__ import annotations

from dataclasses import dataclass

import numpy as np

from .errors import NegativeEigenvalue, NotHermitian, ShapeMismatch

__all__ = [
    "UNITARY_TOL",
    "HERMITIAN_TOL",
    "ZERO_TOL",
    "Spectrum",
    "as_matrix",
    "kron",
    "hermitian_spectrum",
    "eta",
    "is_unitary",
    "unitarity_defect",
    "haar_random_unitary",
]

UNITARY_TOL = 1e-10
HERMITIAN_TOL = 1e-10
ZERO_TOL = 1e-12

_JACOBI_REL_TOL = 1e-13
_JACOBI_MAX_SWEEPS = 100


@dataclass(frozen=True)
class Spectrum:
    """Eigen-decomposition of a Hermitian matrix.

    ``eigenvalues`` are sorted ascending; column ``k`` of ``eigenvectors``
    belongs to ``eigenvalues[k]``. ``residual`` is the largest max-norm of
    ``A v - lambda v`` over the computed pairs.
    """

    eigenvalues: np.ndarray
    eigenvectors: np.ndarray
    residual: float
    sweeps: int

    def __len__(self) -> int:
        return len(self.eigenvalues)


def as_matrix(a, name: str = "matrix") -> np.ndarray:
    """Validate and convert ``a`` to a square, finite complex128 array."""
    m = np.asarray(a, dtype=np.complex128)
    if m.ndim != 2 or m.shape[0] != m.shape[1] or m.shape[0] < 1:
        raise ShapeMismatch(f"{name} must be a non-empty square matrix, got shape {m.shape}")
    if not np.all(np.isfinite(m)):
        raise ShapeMismatch(f"{name} has non-finite entries")
    return m


def kron(a, b) -> np.ndarray:
    """Kronecker product; entry ``(i*db + s, j*db + t)`` is ``a[i,j] * b[s,t]``."""
    return np.kron(as_matrix(a, "a"), as_matrix(b, "b"))


def _jacobi_rotation(app: float, aqq: float, apq: complex) -> np.ndarray:
    # 2x2 unitary V with (V^H A V)[0,1] == 0 for A = [[app, apq], [conj(apq), aqq]]
    r = abs(apq)
    phase = apq / r
    theta = (aqq - app) / (2.0 * r)
    t = np.copysign(1.0, theta) / (abs(theta) + np.sqrt(theta * theta + 1.0))
    c = 1.0 / np.sqrt(t * t + 1.0)
    s = t * c
    return np.array([[c, s * phase], [-s * np.conj(phase), c]], dtype=np.complex128)


def hermitian_spectrum(a, tol: float = HERMITIAN_TOL) -> Spectrum:
    """Eigenvalues and eigenvectors of a Hermitian matrix by cyclic Jacobi.

    The input is symmetrized as ``(a + a^H) / 2`` after checking that
    ``max |a - a^H| <= tol``. Sweeps continue until the off-diagonal
    Frobenius mass drops below ``1e-13 * ||a||_F`` (at most 100 sweeps).

    Raises
    ------
    NotHermitian
        If the input deviates from Hermitian by more than ``tol``.
    """
    a = as_matrix(a, "a")
    defect = float(np.max(np.abs(a - a.conj().T)))
    if defect > tol:
        raise NotHermitian(f"max |a - a^H| = {defect:.3e} exceeds tol {tol:.1e}")
    work = 0.5 * (a + a.conj().T)
    dim = work.shape[0]
    vecs = np.eye(dim, dtype=np.complex128)
    scale = np.linalg.norm(work)
    sweeps = 0
    if dim > 1 and scale > 0.0:
        target = _JACOBI_REL_TOL * scale
        upper = np.triu_indices(dim, 1)
        while sweeps < _JACOBI_MAX_SWEEPS:
            off = np.sqrt(2.0) * np.linalg.norm(work[upper])
            if off < target:
                break
            sweeps += 1
            for p in range(dim - 1):
                for q in range(p + 1, dim):
                    apq = work[p, q]
                    if apq == 0.0:
                        continue
                    rot = _jacobi_rotation(work[p, p].real, work[q, q].real, apq)
                    idx = [p, q]
                    work[:, idx] = work[:, idx] @ rot
                    work[idx, :] = rot.conj().T @ work[idx, :]
                    work[p, q] = work[q, p] = 0.0
                    work[p, p] = work[p, p].real
                    work[q, q] = work[q, q].real
                    vecs[:, idx] = vecs[:, idx] @ rot
    vals = np.real(np.diag(work)).copy()
    order = np.argsort(vals, kind="stable")
    vals = vals[order]
    vecs = vecs[:, order]
    resid = a @ vecs - vecs * vals if dim else np.zeros((0, 0))
    residual = float(np.max(np.abs(resid))) if dim else 0.0
    return Spectrum(vals, vecs, residual, sweeps)


def eta(t, zero_tol: float = ZERO_TOL):
    """The entropy function ``-t log t`` with ``eta(0) = 0``.

    Accepts a scalar or an array. Values with ``|t| <= zero_tol`` map to 0.

    Raises
    ------
    NegativeEigenvalue
        If some ``t < -zero_tol``.
    """
    arr = np.asarray(t, dtype=float)
    if np.any(arr < -zero_tol):
        raise NegativeEigenvalue(f"eta undefined at t = {arr.min():.3e} < -{zero_tol:.1e}")
    pos = arr > zero_tol
    out = np.zeros_like(arr)
    out[pos] = -arr[pos] * np.log(arr[pos])
    if out.ndim == 0:
        return float(out)
    return out


def unitarity_defect(u) -> float:
    """``max(||u^H u - I||_F, ||u u^H - I||_F)``."""
    u = as_matrix(u, "u")
    eye = np.eye(u.shape[0])
    return float(max(np.linalg.norm(u.conj().T @ u - eye), np.linalg.norm(u @ u.conj().T - eye)))


def is_unitary(u, tol: float = UNITARY_TOL) -> bool:
    m = np.asarray(u)
    if m.ndim != 2 or m.shape[0] != m.shape[1] or not np.all(np.isfinite(m)):
        return False
    return unitarity_defect(m) <= tol


def haar_random_unitary(dim: int, seed=None) -> np.ndarray:
    """Haar-distributed unitary of size ``dim``.

    QR of a complex Ginibre matrix, with the phases of ``diag(R)`` moved into
    ``Q`` so the result is Haar rather than QR-biased. ``seed`` may be an int
    or a ``numpy.random.Generator``.
    """
    if dim < 1:
        raise ShapeMismatch(f"dim must be >= 1, got {dim}")
    rng = np.random.default_rng(seed)
    z = (rng.standard_normal((dim, dim)) + 1j * rng.standard_normal((dim, dim))) / np.sqrt(2.0)
    q, r = np.linalg.qr(z)
    d = np.diag(r)
    return q * (d / np.abs(d))
