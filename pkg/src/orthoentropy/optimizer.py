"""Entropy maximization over the unitary group of ``M = M_n ⊗ L``.

Projected gradient ascent on ``S(rho[U])`` with exact geodesic steps
``u -> u expm(t A)`` (``A`` skew-Hermitian, supported on ``M``) and Armijo
backtracking. A run that reaches ``2 log n`` has found a unitary making
``M_n ⊗ 1`` and its conjugate mutually orthogonal.
"""
from __future__ import annotations

import os
from concurrent.futures import ThreadPoolExecutor
from dataclasses import dataclass, field

import numpy as np
from scipy.linalg import expm, polar

from .constructions import dressed_swap, pauli_block_diagonal, random_unitary_in
from .linalg_core import ZERO_TOL, haar_random_unitary, unitarity_defect
from .orthogonality import dimension_obstruction
from .partition_entropy import _density_raw, _partition_stack, entropy_of_unitary, entropy_upper_bound
from .tensor_algebra import TensorContext, TracialAlgebra

__all__ = [
    "SearchConfig",
    "SearchResult",
    "entropy_objective",
    "euclidean_gradient",
    "riemannian_direction",
    "riemannian_step",
    "search",
    "thread_count",
]

EPS_FLOOR = 1e-12
_DRIFT_TOL = 1e-10
_MIN_STEP = 1e-14
_STALL_WINDOW = 100
_STALL_GAIN = 1e-14
_POLISH_ITERS = 500
_POLISH_TOL = 1e-28
_POLISH_MAX_STEP = 1e3


@dataclass(frozen=True)
class SearchConfig:
    ctx: TensorContext
    max_iters: int = 2000
    restarts: int = 8
    seed: int = 0
    step_init: float = 0.5
    step_shrink: float = 0.5
    grad_tol: float = 1e-9
    target_gap: float = 1e-12
    armijo: float = 1e-4
    warm_start: bool = True

    def __post_init__(self):
        if self.max_iters < 1 or self.restarts < 1:
            raise ValueError("max_iters and restarts must be positive")
        if not (self.step_init > 0 and 0 < self.step_shrink < 1):
            raise ValueError("need step_init > 0 and 0 < step_shrink < 1")
        if not (self.grad_tol > 0 and self.target_gap > 0 and 0 < self.armijo < 1):
            raise ValueError("grad_tol, target_gap must be positive and armijo in (0, 1)")


@dataclass
class SearchResult:
    best_u: np.ndarray
    best_entropy: float
    iterations_used: int
    converged: bool
    restart_index: int
    trajectory: list = field(default_factory=list)
    grad_norm: float = float("nan")
    reached_target: bool = False
    upper_bound: float = float("nan")
    obstructed: bool = False
    restart_entropies: list = field(default_factory=list)


def entropy_objective(ctx: TensorContext, u) -> float:
    """``S(rho[U])`` computed through the partition-entropy pipeline."""
    return entropy_of_unitary(ctx, u)


def _chain_gradient(ctx: TensorContext, u: np.ndarray, k: np.ndarray) -> np.ndarray:
    # Euclidean gradient of f(u) when df = Tr(K drho), K Hermitian
    n, r = ctx.n, ctx.L.rep_dim
    blocks = _partition_stack(ctx, u, None) * np.sqrt(n)
    grad_blocks = (2.0 / n) * np.einsum("ij,jab->iab", k, blocks) * ctx.L.weight_diag[None, None, :]
    # flat index col * n + row  ->  (row, col) grid  ->  full matrix
    g = grad_blocks.reshape(n, n, r, r).transpose(1, 0, 2, 3)
    return g.transpose(0, 2, 1, 3).reshape(n * r, n * r)


def _entropy_and_gradient(ctx: TensorContext, u: np.ndarray, eps_floor: float = EPS_FLOOR):
    rho = _density_raw(ctx, u)
    rho = 0.5 * (rho + rho.conj().T)
    lam, vecs = np.linalg.eigh(rho)
    pos = lam > ZERO_TOL
    s = float(-np.sum(lam[pos] * np.log(lam[pos])))
    # dS = Tr(K drho) with K = -(log rho + 1)
    k = (vecs * -(np.log(np.maximum(lam, eps_floor)) + 1.0)) @ vecs.conj().T
    return s, _chain_gradient(ctx, u, k)


def _identity_defect_and_gradient(ctx: TensorContext, u: np.ndarray):
    # maximize -||rho - I/n^2||_F^2; same maximizers as the entropy
    rho = _density_raw(ctx, u)
    rho = 0.5 * (rho + rho.conj().T)
    d = rho - np.eye(ctx.n * ctx.n) / ctx.n ** 2
    return -float(np.sum(np.abs(d) ** 2)), _chain_gradient(ctx, u, -2.0 * d)


def euclidean_gradient(ctx: TensorContext, u, eps_floor: float = EPS_FLOOR) -> np.ndarray:
    """Gradient ``G`` of ``S(rho[U])`` with ``dS = Re Tr(G^H du)``.

    Eigenvalues of ``rho`` below ``eps_floor`` are clamped inside the log.
    """
    u = ctx.check_unitary(u)
    return _entropy_and_gradient(ctx, u, eps_floor)[1]


def riemannian_direction(u, G, ctx: TensorContext | None = None) -> np.ndarray:
    """Skew-Hermitian ``A = (u^H G - G^H u) / 2``, restricted to ``M`` when ``ctx`` is given."""
    a = u.conj().T @ G
    a = 0.5 * (a - a.conj().T)
    if ctx is not None:
        a = ctx.project_member(a)
    return a


def riemannian_step(u, G, step: float, ctx: TensorContext | None = None) -> np.ndarray:
    """Move along the geodesic ``u expm(step A)`` in the direction of the projected gradient."""
    u = np.asarray(u, dtype=np.complex128)
    if step == 0:
        return u.copy()
    return _geodesic(u, riemannian_direction(u, np.asarray(G, dtype=np.complex128), ctx), step, ctx)


def _geodesic(u, a, step, ctx=None):
    out = u @ expm(step * a)
    if unitarity_defect(out) > _DRIFT_TOL:
        out = polar(out)[0]
        if ctx is not None:
            out = ctx.project_member(out)
    return out


def _line_search(ctx, u, a, f, cfg, grad_norm, objective, t=None):
    """Armijo backtracking along the geodesic; returns ``(u, f, g, t)`` or ``None``."""
    t = cfg.step_init if t is None else t
    while t >= _MIN_STEP:
        cand = _geodesic(u, a, t, ctx)
        f_new, g_new = objective(ctx, cand)
        if f_new >= f + cfg.armijo * t * grad_norm ** 2:
            return cand, f_new, g_new, t
        t *= cfg.step_shrink
    return None


def _ascend(ctx: TensorContext, u0: np.ndarray, cfg: SearchConfig, obstructed: bool):
    target = 2.0 * np.log(ctx.n)
    u = u0
    s, g = _entropy_and_gradient(ctx, u)
    a = riemannian_direction(u, g, ctx)
    traj = [(0, s)]
    for it in range(1, cfg.max_iters + 1):
        grad_norm = float(np.linalg.norm(a))
        if (not obstructed and target - s <= cfg.target_gap) or grad_norm <= cfg.grad_tol:
            break
        if it > _STALL_WINDOW and s - traj[-_STALL_WINDOW][1] <= _STALL_GAIN:
            break
        step = _line_search(ctx, u, a, s, cfg, grad_norm, _entropy_and_gradient)
        if step is None:
            break
        u, s, g, _ = step
        a = riemannian_direction(u, g, ctx)
        traj.append((it, s))
    reached = not obstructed and target - s <= cfg.target_gap
    if reached:
        u = _polish(ctx, u, cfg)
        s, g = _entropy_and_gradient(ctx, u)
        a = riemannian_direction(u, g, ctx)
        traj.append((len(traj), s))
    grad_norm = float(np.linalg.norm(a))
    converged = reached or grad_norm <= cfg.grad_tol
    return u, s, len(traj) - 1, converged, reached, grad_norm, traj


def _polish(ctx: TensorContext, u: np.ndarray, cfg: SearchConfig) -> np.ndarray:
    """Drive ``||n^2 rho - I||`` to rounding level once the entropy is at its maximum.

    Near the maximum the entropy deficit is quadratic in the distance to an
    orthogonal unitary and drowns in rounding around ``2 log n``; the squared
    identity-form defect has the same maximizers but is evaluated near zero.
    """
    f, g = _identity_defect_and_gradient(ctx, u)
    t = cfg.step_init
    for _ in range(_POLISH_ITERS):
        if -f <= _POLISH_TOL:
            break
        a = riemannian_direction(u, g, ctx)
        step = _line_search(ctx, u, a, f, cfg, float(np.linalg.norm(a)), _identity_defect_and_gradient, t)
        if step is None:
            break
        u, f, g, t = step
        t = min(t / cfg.step_shrink, _POLISH_MAX_STEP)
    return u


def _warm_start(ctx: TensorContext, rng) -> np.ndarray | None:
    n = ctx.n
    if ctx.L == TracialAlgebra.full(n):
        return dressed_swap(n, *(haar_random_unitary(n, rng) for _ in range(4)))
    pctx, pu = pauli_block_diagonal()
    if ctx == pctx:
        v, v2 = haar_random_unitary(2, rng), haar_random_unitary(2, rng)
        return ctx.project_member(np.kron(v, np.eye(4)) @ pu @ np.kron(v2, np.eye(4)))
    return None


def thread_count() -> int:
    """Worker threads for restarts: ``ORTHOENTROPY_THREADS`` or the machine's CPU count."""
    env = os.environ.get("ORTHOENTROPY_THREADS")
    if env:
        try:
            return max(1, int(env))
        except ValueError:
            pass
    return os.cpu_count() or 1


def search(config: SearchConfig) -> SearchResult:
    """Multi-restart entropy ascent.

    Restart ``k`` starts from a Haar-random unitary of ``M`` drawn from the
    ``k``-th child of ``SeedSequence(seed)``. With ``warm_start`` the last
    restart instead begins at a randomly dressed witness (swap for ``L = M_n``,
    the Pauli construction for ``n = 2, L = C^4``) when the shape allows one.
    The best restart wins; ties go to the lowest index.
    """
    ctx = config.ctx
    obstructed = dimension_obstruction(ctx)
    children = np.random.SeedSequence(config.seed).spawn(config.restarts)
    starts = [random_unitary_in(ctx, np.random.default_rng(c)) for c in children]
    if config.warm_start and not obstructed:
        warm = _warm_start(ctx, np.random.default_rng(children[-1].spawn(1)[0]))
        if warm is not None:
            starts[-1] = warm

    def run(k):
        return _ascend(ctx, starts[k], config, obstructed)

    workers = min(thread_count(), config.restarts)
    if workers > 1:
        with ThreadPoolExecutor(max_workers=workers) as pool:
            runs = list(pool.map(run, range(config.restarts)))
    else:
        runs = [run(k) for k in range(config.restarts)]

    entropies = [r[1] for r in runs]
    best = int(np.argmax(entropies))  # first maximum wins ties
    u, s, it, converged, reached, grad_norm, traj = runs[best]
    return SearchResult(
        best_u=u,
        best_entropy=s,
        iterations_used=it,
        converged=converged,
        restart_index=best,
        trajectory=traj,
        grad_norm=grad_norm,
        reached_target=reached,
        upper_bound=entropy_upper_bound(ctx),
        obstructed=obstructed,
        restart_entropies=entropies,
    )
