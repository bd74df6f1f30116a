"""Command-line entry point: ``orthoentropy {check,entropy,search,demo,masa}``.

Exit codes: 0 orthogonal / success, 1 not orthogonal (or search did not reach
the target), 2 criteria disagree, 3 input error.
"""
from __future__ import annotations

import argparse
import csv
import sys
import time

import numpy as np

from . import constructions
from .errors import OrthoEntropyError
from .io import InputError, Problem, Report, dump_problem, dumps, load_problem
from .masa_compare import masa_orthogonal, unistochastic
from .optimizer import SearchConfig, search
from .orthogonality import dimension_obstruction, full_report, is_unanimous
from .partition_entropy import density_matrix, entropy_upper_bound, von_neumann_entropy
from .linalg_core import hermitian_spectrum
from .tensor_algebra import TensorContext, TracialAlgebra

EXIT_ORTHOGONAL = 0
EXIT_NOT_ORTHOGONAL = 1
EXIT_INCONSISTENT = 2
EXIT_INPUT_ERROR = 3


class _Parser(argparse.ArgumentParser):
    def error(self, message):
        self.print_usage(sys.stderr)
        self.exit(EXIT_INPUT_ERROR, f"{self.prog}: error: {message}\n")


def _ms(t0: float) -> float:
    return round((time.perf_counter() - t0) * 1000.0, 3)


def build_report(problem: Problem, tol: float, timing: bool = True) -> Report:
    ctx, u = problem.ctx, problem.u
    t0 = time.perf_counter()
    reports = full_report(ctx, u, tol)
    t_criteria = _ms(t0)
    t0 = time.perf_counter()
    s = von_neumann_entropy(density_matrix(ctx, u))
    t_entropy = _ms(t0)
    return Report(
        input=problem.digest,
        criteria=[r.as_dict() for r in reports],
        entropy=s,
        entropy_max=float(2.0 * np.log(ctx.n)),
        upper_bound=entropy_upper_bound(ctx),
        consistent=is_unanimous(reports),
        obstructed=dimension_obstruction(ctx),
        timing_ms={"criteria": t_criteria, "entropy": t_entropy} if timing else None,
    )


def _emit_report(report: Report, fmt: str, stream) -> None:
    stream.write(dumps(report.to_json()) if fmt == "json" else report.to_text())


def _report_exit(report: Report) -> int:
    if not report.consistent:
        return EXIT_INCONSISTENT
    return EXIT_ORTHOGONAL if report.orthogonal else EXIT_NOT_ORTHOGONAL


def cmd_check(args) -> int:
    t0 = time.perf_counter()
    problem = load_problem(args.path)
    t_load = _ms(t0)
    report = build_report(problem, args.tol, timing=not args.no_timing)
    if report.timing_ms is not None:
        report.timing_ms = {"load": t_load, **report.timing_ms}
    _emit_report(report, args.format, sys.stdout)
    return _report_exit(report)


def cmd_entropy(args) -> int:
    problem = load_problem(args.path)
    ctx = problem.ctx
    rho = density_matrix(ctx, problem.u)
    s = von_neumann_entropy(rho)
    smax = float(2.0 * np.log(ctx.n))
    spectrum = [float(x) for x in hermitian_spectrum(rho.matrix).eigenvalues]
    out = {
        "input": problem.digest,
        "entropy": s,
        "entropy_max": smax,
        "gap": smax - s,
        "upper_bound": entropy_upper_bound(ctx),
        "maximal": bool(abs(smax - s) <= args.tol),
        "spectrum": spectrum,
    }
    if args.format == "json":
        sys.stdout.write(dumps(out))
    else:
        sys.stdout.write(
            f"S(rho[U]) = {s:.10f}\n2 log n   = {smax:.10f}\ngap       = {smax - s:.3e}\n"
            f"bound     = {out['upper_bound']:.10f}\nspectrum  = {' '.join(f'{x:.6g}' for x in spectrum)}\n"
        )
    return 0


def _context_from_flags(n: int, blocks: str, weights: str | None) -> TensorContext:
    try:
        sizes = [int(b) for b in blocks.split(",")]
        ws = None if weights is None else [float(w) for w in weights.split(",")]
    except ValueError:
        raise InputError("--blocks and --weights must be comma-separated numbers") from None
    if ws is None:
        if len(sizes) != 1:
            raise InputError("--weights is required when L has more than one block")
        ws = [1.0 / sizes[0]]
    if n < 1:
        raise InputError("--n must be positive")
    try:
        return TensorContext(n, TracialAlgebra(tuple(sizes), tuple(ws)))
    except OrthoEntropyError as exc:
        raise InputError(str(exc)) from None


def _write(text: str, path: str | None) -> None:
    if path is None or path == "-":
        sys.stdout.write(text)
    else:
        with open(path, "w", encoding="utf-8") as fh:
            fh.write(text)


def cmd_search(args) -> int:
    ctx = _context_from_flags(args.n, args.blocks, args.weights)
    try:
        cfg = SearchConfig(
            ctx,
            max_iters=args.max_iters,
            restarts=args.restarts,
            seed=args.seed,
            target_gap=args.target_gap,
            warm_start=not args.no_warm_start,
        )
    except ValueError as exc:
        raise InputError(str(exc)) from None
    result = search(cfg)
    if args.trajectory:
        with open(args.trajectory, "w", newline="", encoding="utf-8") as fh:
            writer = csv.writer(fh)
            writer.writerow(["iteration", "entropy"])
            writer.writerows((i, repr(float(s))) for i, s in result.trajectory)
    meta = {
        "source": "search",
        "seed": args.seed,
        "restarts": args.restarts,
        "best_entropy": repr(result.best_entropy),
        "reached_target": result.reached_target,
    }
    problem = Problem(ctx, result.best_u, meta)
    _write(dump_problem(problem), args.out)
    report = build_report(problem, args.tol, timing=not args.no_timing)
    _emit_report(report, args.format, sys.stderr)
    return EXIT_ORTHOGONAL if result.reached_target else EXIT_NOT_ORTHOGONAL


DEMOS = ("swap", "pauli", "fourier", "identity")


def _masa_out(problem: Problem, tol: float) -> dict:
    u = problem.u
    rep = masa_orthogonal(u, tol)
    return {
        "input": problem.digest,
        "b": unistochastic(u).entries.tolist(),
        "entropy": rep.extra["entropy"],
        "entropy_max": rep.extra["entropy_max"],
        "criteria": [rep.as_dict()],
        "orthogonal": rep.verdict,
    }


def _emit_masa(out: dict, fmt: str, stream) -> None:
    if fmt == "json":
        stream.write(dumps(out))
        return
    rows = "\n".join("  " + " ".join(f"{x:.6f}" for x in row) for row in out["b"])
    c = out["criteria"][0]
    stream.write(
        f"b(u) =\n{rows}\nH(b(u)) = {out['entropy']:.10f}\nlog n   = {out['entropy_max']:.10f}\n"
        f"flat-moduli residual {c['residual']:.3e} -> {'orthogonal' if c['verdict'] else 'not orthogonal'}\n"
    )


def cmd_demo(args) -> int:
    n = args.n
    if args.name == "swap":
        problem = Problem(TensorContext.full(n, n), constructions.swap_unitary(n), {"demo": "swap"})
    elif args.name == "identity":
        ctx = TensorContext.full(n, n)
        problem = Problem(ctx, constructions.identity_unitary(ctx), {"demo": "identity"})
    elif args.name == "pauli":
        ctx, u = constructions.pauli_block_diagonal()
        problem = Problem(ctx, u, {"demo": "pauli"})
    elif args.name == "fourier":
        problem = Problem(TensorContext.full(n, 1), constructions.fourier_unitary(n), {"demo": "fourier"})
    else:
        raise InputError(f"unknown demo {args.name!r}; choose from {', '.join(DEMOS)}")
    _write(dump_problem(problem), args.out)
    if args.name == "fourier":
        _emit_masa(_masa_out(problem, args.tol), args.format, sys.stderr)
    else:
        _emit_report(build_report(problem, args.tol, timing=not args.no_timing), args.format, sys.stderr)
    return 0


def cmd_masa(args) -> int:
    problem = load_problem(args.path)
    if problem.ctx.L.block_sizes != (1,):
        raise InputError("masa needs L = C (blocks [1]) or a bare n x n unitary")
    out = _masa_out(problem, args.tol)
    _emit_masa(out, args.format, sys.stdout)
    return EXIT_ORTHOGONAL if out["orthogonal"] else EXIT_NOT_ORTHOGONAL


def make_parser() -> argparse.ArgumentParser:
    p = _Parser(prog="orthoentropy", description=__doc__.splitlines()[0])
    sub = p.add_subparsers(dest="command", required=True, parser_class=_Parser)

    def common(sp, tol=1e-8):
        sp.add_argument("--tol", type=float, default=tol)
        sp.add_argument("--format", choices=("text", "json"), default="text")
        sp.add_argument("--no-timing", action="store_true", help="omit timing fields (byte-stable output)")

    sp = sub.add_parser("check", help="run every orthogonality criterion on a problem file")
    sp.add_argument("path")
    common(sp)
    sp.set_defaults(func=cmd_check)

    sp = sub.add_parser("entropy", help="entropy of rho[U] and its spectrum")
    sp.add_argument("path")
    common(sp)
    sp.set_defaults(func=cmd_entropy)

    sp = sub.add_parser("search", help="maximize S(rho[U]) over unitaries of M_n ⊗ L")
    sp.add_argument("--n", type=int, required=True)
    sp.add_argument("--blocks", required=True, help="block sizes of L, e.g. 2 or 1,1,1,1")
    sp.add_argument("--weights", help="trace weight per block, e.g. 0.25,0.25,0.25,0.25")
    sp.add_argument("--restarts", type=int, default=8)
    sp.add_argument("--seed", type=int, default=0)
    sp.add_argument("--max-iters", type=int, default=2000)
    sp.add_argument("--target-gap", type=float, default=1e-12)
    sp.add_argument("--no-warm-start", action="store_true")
    sp.add_argument("--trajectory", help="write iteration,entropy CSV here")
    sp.add_argument("--out", help="write the best unitary as a problem file here (default stdout)")
    common(sp)
    sp.set_defaults(func=cmd_search)

    sp = sub.add_parser("demo", help="emit a built-in construction and its report")
    sp.add_argument("name")
    sp.add_argument("--n", type=int, default=2)
    sp.add_argument("--out")
    common(sp)
    sp.set_defaults(func=cmd_demo)

    sp = sub.add_parser("masa", help="unistochastic entropy test for maximal abelian subalgebras")
    sp.add_argument("path")
    common(sp)
    sp.set_defaults(func=cmd_masa)
    return p


def main(argv=None) -> int:
    args = make_parser().parse_args(argv)
    try:
        return args.func(args)
    except OrthoEntropyError as exc:
        sys.stderr.write(f"orthoentropy: error: {exc}\n")
        return EXIT_INPUT_ERROR


if __name__ == "__main__":
    sys.exit(main())
