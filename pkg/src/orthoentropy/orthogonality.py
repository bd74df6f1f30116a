"""Numerical orthogonality (complementarity) criteria for inner-conjugate subalgebras.

Every criterion returns a :class:`CriterionReport` whose ``residual`` is a
max-defect norm: zero when the criterion holds exactly, and compared against
one tolerance ``tol`` across all criteria so that verdicts can be
cross-checked.
"""
from __future__ import annotations

from dataclasses import dataclass, field, replace

import numpy as np

from .errors import UnsupportedAlgebra
from .linalg_core import UNITARY_TOL
from .tensor_algebra import (
    L_LEG,
    N_LEG,
    TensorContext,
    _expect_L_raw,
    _expect_N_raw,
    _raw_blocks,
    _tau_L_raw,
)

__all__ = [
    "CriterionReport",
    "SubfactorPair",
    "popa_check",
    "block_criterion",
    "lemma_criterion",
    "petz_criterion",
    "petz_applicable",
    "dimension_obstruction",
    "full_report",
    "is_unanimous",
]


@dataclass(frozen=True)
class CriterionReport:
    name: str
    residual: float
    tol: float
    necessary_only: bool = False
    consistent: bool = True
    extra: dict = field(default_factory=dict, compare=False)

    @property
    def verdict(self) -> bool:
        return bool(self.residual <= self.tol)

    def as_dict(self) -> dict:
        return {"name": self.name, "residual": float(self.residual), "verdict": self.verdict, "tol": float(self.tol)}


@dataclass(frozen=True)
class SubfactorPair:
    """The pair ``{A, u A u^*}`` with ``A = M_n ⊗ 1`` (leg ``"N"``) or ``1 ⊗ L`` (leg ``"L"``)."""

    ctx: TensorContext
    u: np.ndarray
    leg: str = N_LEG

    def __post_init__(self):
        if self.leg not in (N_LEG, L_LEG):
            raise ValueError(f"unknown leg {self.leg!r}")
        object.__setattr__(self, "u", self.ctx.check_unitary(self.u, UNITARY_TOL))

    def swapped(self) -> "SubfactorPair":
        """The same pair with the roles of ``A`` and ``B`` exchanged: ``{B, u^* B u}``."""
        return _SwappedPair(self.ctx, self.u, self.leg)

    # The helpers below work on stacks of matrices (..., d, d).
    def tau(self, x):
        return np.einsum("...ii,i->...", x, self.ctx.weight_diag) / self.ctx.n

    def expect_A(self, x):
        return self._expect_inner(x)

    def expect_B(self, x):
        return self._expect_outer(x)

    def basis_A(self):
        return self.ctx.leg_basis(self.leg)

    def basis_B(self):
        return self.u @ self.ctx.leg_basis(self.leg) @ self.u.conj().T

    def _expect_inner(self, x):
        f = (lambda y: _expect_N_raw(self.ctx, y)) if self.leg == N_LEG else (lambda y: _expect_L_raw(self.ctx, y))
        return _stack_apply(f, x)

    def _expect_outer(self, x):
        u = self.u
        return u @ self._expect_inner(u.conj().T @ x @ u) @ u.conj().T


class _SwappedPair(SubfactorPair):
    def swapped(self) -> SubfactorPair:
        return SubfactorPair(self.ctx, self.u, self.leg)

    def expect_A(self, x):
        return self._expect_outer(x)

    def expect_B(self, x):
        return self._expect_inner(x)

    def basis_A(self):
        return SubfactorPair.basis_B(self)

    def basis_B(self):
        return SubfactorPair.basis_A(self)


def _stack_apply(f, x):
    if x.ndim == 2:
        return f(x)
    return np.stack([f(xi) for xi in x])


def _tau_norm(pair, x):
    return np.sqrt(np.abs(pair.tau(x.conj().swapaxes(-1, -2) @ x)))


def popa_check(pair: SubfactorPair, which: int, tol: float = 1e-8) -> CriterionReport:
    """One of Popa's five equivalent conditions, evaluated on spanning bases.

    1. ``tau(ab) = 0`` for centered ``a ∈ A``, ``b ∈ B``
    2. ``tau(ab) = tau(a) tau(b)``
    3. ``||ab||_tau = ||a||_tau ||b||_tau`` (basis products only; necessary, not sufficient)
    4. ``E_A E_B(x) = tau(x) 1`` for ``x`` over a basis of ``M``
    5. ``E_A(b) ∈ C 1`` for ``b`` over a basis of ``B``
    """
    d = pair.ctx.total_dim
    eye = np.eye(d)
    name = f"popa_{which}"
    if which in (1, 2, 3):
        a = pair.basis_A()
        b = pair.basis_B()
        if which == 1:
            a = a - pair.tau(a)[:, None, None] * eye
            b = b - pair.tau(b)[:, None, None] * eye
        ab = np.einsum("pij,qjk->pqik", a, b)
        if which == 3:
            lhs = _tau_norm(pair, ab)
            rhs = _tau_norm(pair, a)[:, None] * _tau_norm(pair, b)[None, :]
            return CriterionReport(name, float(np.max(np.abs(lhs - rhs))), tol, necessary_only=True)
        lhs = pair.tau(ab)
        rhs = 0.0 if which == 1 else pair.tau(a)[:, None] * pair.tau(b)[None, :]
        return CriterionReport(name, float(np.max(np.abs(lhs - rhs))), tol)
    if which == 4:
        x = pair.ctx.ambient_basis()
        lhs = pair.expect_A(pair.expect_B(x))
        rhs = pair.tau(x)[:, None, None] * eye
        return CriterionReport(name, float(np.max(np.linalg.norm(lhs - rhs, axis=(1, 2)))), tol)
    if which == 5:
        b = pair.basis_B()
        lhs = pair.expect_A(b)
        rhs = pair.tau(b)[:, None, None] * eye
        return CriterionReport(name, float(np.max(np.linalg.norm(lhs - rhs, axis=(1, 2)))), tol)
    raise ValueError(f"Popa condition must be 1..5, got {which}")


def block_criterion(ctx: TensorContext, u, tol: float = 1e-8) -> CriterionReport:
    """``max |tau_L(u_ij^* u_kl) - δ_ik δ_jl / n|`` over all block indices."""
    u = ctx.check_unitary(u)
    raw = _raw_blocks(ctx, u)
    n = ctx.n
    # tau_L(u_ij^* u_kl) = sum_{a,b} conj(u_ij[a,b]) u_kl[a,b] w_b
    gram = np.einsum("ijab,klab,b->ijkl", raw.conj(), raw, ctx.L.weight_diag)
    target = np.einsum("ik,jl->ijkl", np.eye(n), np.eye(n)) / n
    return CriterionReport("block", float(np.max(np.abs(gram - target))), tol)


def lemma_criterion(ctx: TensorContext, u, tol: float = 1e-8) -> CriterionReport:
    """``max_ij ||E_N(u^*(e_ij ⊗ 1)u) - (Tr(e_ij)/n) 1||_F``."""
    u = ctx.check_unitary(u)
    n = ctx.n
    eye = np.eye(ctx.total_dim)
    worst = 0.0
    for i in range(n):
        for j in range(n):
            e = np.zeros((n, n))
            e[i, j] = 1.0
            lhs = _expect_N_raw(ctx, u.conj().T @ ctx.one_N(e) @ u)
            worst = max(worst, float(np.linalg.norm(lhs - (i == j) / n * eye)))
    return CriterionReport("lemma", worst, tol)


def petz_applicable(ctx: TensorContext) -> bool:
    """Petz's frame condition is only equivalent to the ``N``-leg criteria when ``L = M_n``."""
    return ctx.L.is_single_block and ctx.L.block_sizes[0] == ctx.n


def petz_criterion(ctx: TensorContext, u, tol: float = 1e-8) -> CriterionReport:
    """``||(m/n) Σ_ij |u_ij><u_ij| - I_{m^2}||_F`` for ``L = M_m``.

    Decides complementarity of ``1 ⊗ M_m`` and ``u (1 ⊗ M_m) u^*``.
    """
    if not ctx.L.is_single_block:
        raise UnsupportedAlgebra("Petz criterion needs L = M_m (a single block)")
    u = ctx.check_unitary(u)
    m = ctx.L.rep_dim
    vecs = _raw_blocks(ctx, u).reshape(ctx.n * ctx.n, m * m)
    frame = (m / ctx.n) * vecs.T @ vecs.conj()
    return CriterionReport("petz", float(np.linalg.norm(frame - np.eye(m * m))), tol)


def dimension_obstruction(ctx: TensorContext) -> bool:
    """True when ``dim L < n^2``, in which case no unitary makes the pair orthogonal."""
    return ctx.L.alg_dim < ctx.n * ctx.n


def is_unanimous(reports) -> bool:
    return len({r.verdict for r in reports}) <= 1


def full_report(ctx: TensorContext, u, tol: float = 1e-8) -> list:
    """Run every applicable criterion for the ``N``-leg pair and cross-check the verdicts.

    Returns Popa 2/4/5, block, lemma, Petz (when ``L = M_n``) and the entropy
    criterion. If the verdicts disagree, every report comes back with
    ``consistent=False``.
    """
    from .partition_entropy import density_matrix, von_neumann_entropy

    u = ctx.check_unitary(u)
    pair = SubfactorPair(ctx, u, N_LEG)
    reports = [popa_check(pair, k, tol) for k in (2, 4, 5)]
    reports.append(block_criterion(ctx, u, tol))
    reports.append(lemma_criterion(ctx, u, tol))
    if petz_applicable(ctx):
        reports.append(petz_criterion(ctx, u, tol))
    s = von_neumann_entropy(density_matrix(ctx, u))
    reports.append(CriterionReport("entropy", abs(2.0 * np.log(ctx.n) - s), tol, extra={"entropy": s}))
    if not is_unanimous(reports):
        reports = [replace(r, consistent=False) for r in reports]
    return reports
