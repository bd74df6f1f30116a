"""Problem files and reports.

A problem file is JSON::

    {"n": 2, "L": {"blocks": [2], "weights": [0.5]},
     "u": [[[re, im], ...], ...], "metadata": {...}}

``weights`` may be omitted for a single block ``M_m`` (defaults to ``1/m``).
A bare ``{"u": ...}`` is read as ``n = dim``, ``L = C``.
"""
from __future__ import annotations

import hashlib
import json
import sys
from dataclasses import dataclass, field
from importlib import resources

import numpy as np

from .errors import NotUnitary, OrthoEntropyError, ShapeMismatch
from .linalg_core import unitarity_defect
from .tensor_algebra import TensorContext, TracialAlgebra

__all__ = [
    "LOAD_UNITARY_TOL",
    "LOAD_WEIGHT_TOL",
    "InputError",
    "Problem",
    "encode_matrix",
    "decode_matrix",
    "load_problem",
    "parse_problem",
    "dump_problem",
    "checksum",
    "Report",
    "report_schema",
    "dumps",
]

LOAD_UNITARY_TOL = 1e-8
LOAD_WEIGHT_TOL = 1e-8
_MEMBER_ATOL = 1e-12


class InputError(OrthoEntropyError):
    """A problem file that cannot be used."""


def encode_matrix(a) -> list:
    a = np.asarray(a, dtype=np.complex128)
    return [[[float(z.real), float(z.imag)] for z in row] for row in a]


def decode_matrix(rows) -> np.ndarray:
    try:
        arr = np.asarray(rows, dtype=float)
    except (TypeError, ValueError) as exc:
        raise InputError(f"u must be a matrix of [re, im] pairs: {exc}") from None
    if arr.ndim != 3 or arr.shape[2] != 2 or arr.shape[0] != arr.shape[1]:
        raise InputError(f"u must be a square matrix of [re, im] pairs, got array shape {arr.shape}")
    if not np.all(np.isfinite(arr)):
        raise InputError("u has non-finite entries")
    return arr[..., 0] + 1j * arr[..., 1]


def checksum(u) -> str:
    return hashlib.sha256(np.ascontiguousarray(u, dtype=np.complex128).tobytes()).hexdigest()


@dataclass
class Problem:
    ctx: TensorContext
    u: np.ndarray
    metadata: dict = field(default_factory=dict)
    load_defect: float = 0.0

    @property
    def digest(self) -> dict:
        return {
            "n": self.ctx.n,
            "blocks": list(self.ctx.L.block_sizes),
            "weights": list(self.ctx.L.weights),
            "total_dim": self.ctx.total_dim,
            "checksum": checksum(self.u),
        }

    def to_json(self) -> dict:
        out = {
            "n": self.ctx.n,
            "L": {"blocks": list(self.ctx.L.block_sizes), "weights": list(self.ctx.L.weights)},
            "u": encode_matrix(self.u),
        }
        if self.metadata:
            out["metadata"] = {str(k): str(v) for k, v in self.metadata.items()}
        return out


def _algebra(spec) -> TracialAlgebra:
    if not isinstance(spec, dict) or "blocks" not in spec:
        raise InputError("L must be an object with a 'blocks' list")
    blocks = spec["blocks"]
    if not isinstance(blocks, list) or not blocks or not all(isinstance(b, int) and b >= 1 for b in blocks):
        raise InputError(f"L.blocks must be a non-empty list of positive integers, got {blocks!r}")
    weights = spec.get("weights")
    if weights is None:
        if len(blocks) != 1:
            raise InputError("L.weights is required when L has more than one block")
        weights = [1.0 / blocks[0]]
    if not isinstance(weights, list) or len(weights) != len(blocks):
        raise InputError("L.weights must list one weight per block")
    try:
        weights = [float(w) for w in weights]
    except (TypeError, ValueError):
        raise InputError("L.weights must be numbers") from None
    if any(not np.isfinite(w) or w <= 0 for w in weights):
        raise InputError(f"L.weights must be positive, got {weights}")
    total = sum(w * m for w, m in zip(weights, blocks))
    if abs(total - 1.0) > LOAD_WEIGHT_TOL:
        raise InputError(f"bad weights: sum_s w_s m_s = {total!r}, must be 1 within {LOAD_WEIGHT_TOL:.0e}")
    # absorb serialization rounding so the strict internal check holds
    weights = [w / total for w in weights]
    return TracialAlgebra(tuple(blocks), tuple(weights))


def parse_problem(data) -> Problem:
    """Validate a decoded problem-file object.

    Unitaries within ``1e-8`` of unitary are accepted and replaced by their
    polar factor, so that the tighter internal checks hold.
    """
    if not isinstance(data, dict) or "u" not in data:
        raise InputError("problem file must be a JSON object with key 'u'")
    u = decode_matrix(data["u"])
    if "n" in data or "L" in data:
        n = data.get("n")
        if not isinstance(n, int) or n < 1:
            raise InputError(f"n must be a positive integer, got {n!r}")
        L = _algebra(data.get("L"))
    else:
        n, L = u.shape[0], TracialAlgebra.full(1)
    try:
        ctx = TensorContext(n, L)
    except ShapeMismatch as exc:
        raise InputError(str(exc)) from None
    if u.shape[0] != ctx.total_dim:
        raise InputError(f"shape mismatch: u is {u.shape[0]}x{u.shape[0]} but n * sum(blocks) = {ctx.total_dim}")
    off = np.abs(u[~ctx.mask])
    if off.size and off.max() > _MEMBER_ATOL:
        raise InputError(f"shape mismatch: u has off-block entries (max {off.max():.3e}); blocks must lie in L")
    u = ctx.project_member(u)
    defect = unitarity_defect(u)
    if defect > LOAD_UNITARY_TOL:
        raise InputError(f"non-unitary input: defect {defect:.3e} exceeds {LOAD_UNITARY_TOL:.0e}")
    if defect > 1e-13:
        from scipy.linalg import polar

        u = ctx.project_member(polar(u)[0])
    meta = data.get("metadata") or {}
    if not isinstance(meta, dict):
        raise InputError("metadata must be an object")
    return Problem(ctx, u, dict(meta), defect)


def load_problem(path) -> Problem:
    """Read a problem file; ``"-"`` reads standard input."""
    try:
        if str(path) == "-":
            text = sys.stdin.read()
        else:
            with open(path, encoding="utf-8") as fh:
                text = fh.read()
    except OSError as exc:
        raise InputError(f"cannot read {path}: {exc}") from None
    try:
        data = json.loads(text)
    except json.JSONDecodeError as exc:
        raise InputError(f"malformed JSON in {path}: {exc}") from None
    return parse_problem(data)


def dump_problem(problem: Problem) -> str:
    return dumps(problem.to_json())


def dumps(obj) -> str:
    return json.dumps(obj, indent=2, allow_nan=False) + "\n"


@dataclass
class Report:
    """Machine-readable outcome of a ``check`` run."""

    input: dict
    criteria: list
    entropy: float
    entropy_max: float
    upper_bound: float
    consistent: bool
    obstructed: bool = False
    timing_ms: dict | None = None

    @property
    def orthogonal(self) -> bool:
        return self.consistent and all(c["verdict"] for c in self.criteria)

    def to_json(self) -> dict:
        out = {
            "input": self.input,
            "criteria": self.criteria,
            "entropy": self.entropy,
            "entropy_max": self.entropy_max,
            "upper_bound": self.upper_bound,
            "consistent": self.consistent,
            "obstructed": self.obstructed,
            "orthogonal": self.orthogonal,
        }
        if self.timing_ms is not None:
            out["timing_ms"] = self.timing_ms
        return out

    @classmethod
    def from_json(cls, data: dict) -> "Report":
        return cls(
            input=data["input"],
            criteria=data["criteria"],
            entropy=data["entropy"],
            entropy_max=data["entropy_max"],
            upper_bound=data["upper_bound"],
            consistent=data["consistent"],
            obstructed=data.get("obstructed", False),
            timing_ms=data.get("timing_ms"),
        )

    def to_text(self) -> str:
        lines = [
            f"n = {self.input['n']}, L blocks = {self.input['blocks']}, dim = {self.input['total_dim']}",
            f"checksum {self.input['checksum'][:16]}",
        ]
        for c in self.criteria:
            lines.append(f"  {c['name']:<10} residual {c['residual']:.3e}  {'PASS' if c['verdict'] else 'fail'}  (tol {c['tol']:.0e})")
        lines.append(f"entropy S(rho[U]) = {self.entropy:.10f}   2 log n = {self.entropy_max:.10f}   bound = {self.upper_bound:.10f}")
        if self.obstructed:
            lines.append("dim L < n^2: orthogonality is impossible for this shape")
        verdict = "orthogonal" if self.orthogonal else ("INCONSISTENT" if not self.consistent else "not orthogonal")
        lines.append(f"verdict: {verdict}")
        if self.timing_ms:
            lines.append("timing: " + ", ".join(f"{k} {v:.1f} ms" for k, v in self.timing_ms.items()))
        return "\n".join(lines) + "\n"


def report_schema() -> dict:
    """JSON schema for :class:`Report` documents."""
    text = resources.files("orthoentropy").joinpath("report.schema.json").read_text(encoding="utf-8")
    return json.loads(text)
