"""
Steering Ellipsoid Lab — Main Orchestrator
==========================================
Command-line surface over the nodes:

  classify         state file → separable / non-steerable / steerable / gap verdict
  ellipsoid        state file → steering ellipsoid (or surface point grid)
  boundary         LHS boundary surface on a grid, or the closed-form symmetric slice
  figure1a         boundary surface with linear and separable planes
  figure1b         s1 = s2 cross-section: necessary, linear and nonlinear curves
  verify-theorem1  hemisphere integral: closed form vs quadrature on random (T, v)
  ntconst          N_T by quadrature, Carlson R_G and incomplete elliptic integrals
  lhs-simulate     Monte Carlo run of the LHS model
  lhs-verify       quadrature check of the LHS model on a boundary state

Exit codes: 0 success, 1 verification failure, 2 usage / I/O / domain error.
"""

import argparse
import logging
import sys

import numpy as np

from nodes import ellipsoid, figures, lhs_boundary, lhs_sim, qstate, steer_criteria
from nodes.quadrature import QuadratureSpec, random_unit_vectors
from utils.config import DEFAULT_SEED, ORDER_PHI, ORDER_THETA, VERIFY_THRESHOLD
from utils.error_report import report_error
from utils.errors import SteeringError
from utils.logger import log_info, log_warning, set_console_level
from utils.output import emit, load_directions, load_json, render_json, render_rows, validate_report

EXIT_OK, EXIT_VERIFY, EXIT_ERROR = 0, 1, 2
MC_SIGMA_LIMIT = 5.0


# ── Argument parsing ─────────────────────────────────────────


def _triple(text: str) -> tuple[float, float, float]:
    try:
        values = tuple(float(x) for x in text.split(","))
    except ValueError:
        raise argparse.ArgumentTypeError(f"expected t1,t2,t3, got {text!r}")
    if len(values) != 3:
        raise argparse.ArgumentTypeError(f"expected three comma-separated numbers, got {text!r}")
    return values


def _u_range(text: str) -> tuple[float, float, int]:
    parts = text.split(",")
    if len(parts) != 3:
        raise argparse.ArgumentTypeError(f"expected lo,hi,n, got {text!r}")
    try:
        return float(parts[0]), float(parts[1]), int(parts[2])
    except ValueError:
        raise argparse.ArgumentTypeError(f"expected lo,hi,n, got {text!r}")


def build_parser() -> argparse.ArgumentParser:
    common = argparse.ArgumentParser(add_help=False)
    common.add_argument("--order-theta", type=int, default=ORDER_THETA, help="Gauss–Legendre nodes in cos θ")
    common.add_argument("--order-phi", type=int, default=ORDER_PHI, help="trapezoid nodes in φ")
    common.add_argument("--seed", type=int, default=DEFAULT_SEED, help="64-bit RNG seed")
    common.add_argument("--format", choices=("json", "csv"), default=None, help="output format")
    common.add_argument("--out", default=None, help="output path (default: stdout)")
    common.add_argument("-v", "--verbose", action="store_true", help="debug logging on stderr")

    parser = argparse.ArgumentParser(prog="steering", description="EPR-steering ellipsoid toolkit")
    sub = parser.add_subparsers(dest="command", required=True)

    p = sub.add_parser("classify", parents=[common], help="classify a state")
    p.add_argument("--state", required=True, help="JSON state file")
    p.add_argument("--method", choices=lhs_boundary.METHODS, default="closed")

    p = sub.add_parser("ellipsoid", parents=[common], help="steering ellipsoid of a state")
    p.add_argument("--state", required=True, help="JSON state file")
    p.add_argument("--surface", type=int, default=None, metavar="N", help="emit an N×N surface grid")

    p = sub.add_parser("boundary", parents=[common], help="LHS boundary surface")
    mode = p.add_mutually_exclusive_group(required=True)
    mode.add_argument("--grid", type=int, metavar="N")
    mode.add_argument("--symmetric", action="store_true", help="closed-form slice s1 = s2")
    p.add_argument("--u-range", type=_u_range, default=(0.1, 10.0, 50), metavar="LO,HI,N")
    p.add_argument("--method", choices=lhs_boundary.METHODS, default="closed")

    p = sub.add_parser("figure1a", parents=[common], help="boundary surface with planes")
    p.add_argument("--grid", type=int, default=100)
    p.add_argument("--method", choices=lhs_boundary.METHODS, default="closed")

    p = sub.add_parser("figure1b", parents=[common], help="s1 = s2 cross-section")
    p.add_argument("--samples", type=int, default=200)

    p = sub.add_parser("verify-theorem1", parents=[common], help="hemisphere integral oracle")
    p.add_argument("--trials", type=int, default=200)
    p.add_argument("--iso", action="store_true", help="T = I, v = ẑ")

    p = sub.add_parser("ntconst", parents=[common], help="normalization constant N_T")
    p.add_argument("--t", type=_triple, required=True, metavar="T1,T2,T3")

    p = sub.add_parser("lhs-simulate", parents=[common], help="Monte Carlo LHS model")
    p.add_argument("--t", type=_triple, required=True, metavar="T1,T2,T3")
    p.add_argument("--count", type=int, default=100_000)
    p.add_argument("--directions", default=None, help="JSON list of 3-vectors")
    p.add_argument("--n-directions", type=int, default=20, help="random directions when no file is given")

    p = sub.add_parser("lhs-verify", parents=[common], help="quadrature check of the LHS model")
    p.add_argument("--t", type=_triple, required=True, metavar="T1,T2,T3")
    p.add_argument("--directions", default=None, help="JSON list of 3-vectors")
    p.add_argument("--n-directions", type=int, default=20, help="random directions when no file is given")

    return parser


# ── Helpers ──────────────────────────────────────────────────


def _flatten(record: dict, prefix: str = "") -> dict:
    """Nested dicts and short lists become suffixed columns (center_1, center_2, ...)."""
    flat = {}
    for key, value in record.items():
        name = f"{prefix}{key}"
        if isinstance(value, dict):
            flat.update(_flatten(value, f"{name}_"))
        elif isinstance(value, (list, tuple, np.ndarray)) and np.ndim(value) == 1:
            flat.update({f"{name}_{i + 1}": v for i, v in enumerate(value)})
        elif isinstance(value, (list, tuple, np.ndarray)):
            flat.update(_flatten({f"{i + 1}": row for i, row in enumerate(value)}, f"{name}_"))
        else:
            flat[name] = value
    return flat


def _write(args, rows: list[dict], columns: tuple[str, ...] | None = None, report=None,
           schema: str | None = None, default: str = "csv") -> None:
    fmt = args.format or default
    if fmt == "json" and report is not None:
        emit(render_json(validate_report(report, schema) if schema else report), args.out)
    else:
        emit(render_rows(rows, columns, fmt), args.out)


def _load_state(path: str):
    return qstate.execute(load_json(path))


def _directions(args) -> np.ndarray:
    if args.directions:
        return load_directions(args.directions)
    return random_unit_vectors(args.seed, args.n_directions, stream=1)


# ── Commands ─────────────────────────────────────────────────


def cmd_classify(args, spec: QuadratureSpec) -> int:
    state = _load_state(args.state)
    if state is None:
        return EXIT_ERROR
    verdict = steer_criteria.execute(state, method=args.method, spec=spec)
    if verdict is None:
        return EXIT_ERROR
    _write(args, [_flatten(verdict)], report=verdict, schema="classify", default="json")
    return EXIT_OK


def cmd_ellipsoid(args, spec: QuadratureSpec) -> int:
    state = _load_state(args.state)
    if state is None:
        return EXIT_ERROR
    result = ellipsoid.execute(state, surface=args.surface)
    if result is None:
        return EXIT_ERROR
    if args.surface:
        _write(args, result, ("theta", "phi", "x", "y", "z"))
    else:
        _write(args, [_flatten(result)], report=result, schema="ellipsoid", default="json")
    return EXIT_OK


def cmd_boundary(args, spec: QuadratureSpec) -> int:
    if args.symmetric:
        rows = figures.run_symmetric(*args.u_range)
        _write(args, rows, figures.SYMMETRIC_COLUMNS)
    else:
        rows = figures.run_boundary_surface(args.grid, method=args.method, spec=spec)
        _write(args, rows, ("s1", "s2", "s3_boundary"))
    return EXIT_OK


def cmd_surface(args, spec: QuadratureSpec) -> int:
    _write(args, figures.run_boundary_surface(args.grid, method=args.method, spec=spec), figures.SURFACE_COLUMNS)
    return EXIT_OK


def cmd_slice(args, spec: QuadratureSpec) -> int:
    _write(args, figures.run_slice_curves(args.samples), figures.SLICE_COLUMNS)
    return EXIT_OK


def cmd_verify(args, spec: QuadratureSpec) -> int:
    summary = figures.run_verify(args.trials, args.seed, spec, iso=args.iso)
    _write(args, summary["rows"], figures.VERIFY_COLUMNS, report=summary, schema="hemisphere_check", default="json")
    return EXIT_OK if summary["passed"] else EXIT_VERIFY


def cmd_ntconst(args, spec: QuadratureSpec) -> int:
    result = lhs_boundary.execute(args.t, spec)
    if result is None:
        return EXIT_ERROR
    _write(args, [_flatten(result)], report=result, schema="ntconst", default="json")
    return EXIT_OK


def _warn_if_not_state(t) -> None:
    try:
        qstate.make_tstate(t)
    except SteeringError:
        log_warning(f"t = {list(t)} lies outside the state tetrahedron; running the model anyway")


def cmd_lhs_simulate(args, spec: QuadratureSpec) -> int:
    _warn_if_not_state(args.t)
    report = lhs_sim.execute(args.t, _directions(args), args.count, args.seed)
    if report is None:
        return EXIT_ERROR
    rows = [_flatten(vars(r)) for r in report.records]
    _write(args, rows, report=report, schema="simulation", default="json")
    if report.max_z > MC_SIGMA_LIMIT:
        log_warning(f"Monte Carlo deviation {report.max_z:.2f}σ exceeds {MC_SIGMA_LIMIT}σ")
        return EXIT_VERIFY
    return EXIT_OK


def cmd_lhs_verify(args, spec: QuadratureSpec) -> int:
    _warn_if_not_state(args.t)
    report = lhs_sim.execute_verify(args.t, _directions(args), spec)
    if report is None:
        return EXIT_ERROR
    _write(args, [_flatten(r) for r in report.rows], report=report, schema="verification", default="json")
    return EXIT_OK if report.max_deviation <= VERIFY_THRESHOLD else EXIT_VERIFY


COMMANDS = {
    "classify": cmd_classify,
    "ellipsoid": cmd_ellipsoid,
    "boundary": cmd_boundary,
    "figure1a": cmd_surface,
    "figure1b": cmd_slice,
    "verify-theorem1": cmd_verify,
    "ntconst": cmd_ntconst,
    "lhs-simulate": cmd_lhs_simulate,
    "lhs-verify": cmd_lhs_verify,
}


# ── Entry point ──────────────────────────────────────────────


def main(argv: list[str] | None = None) -> int:
    parser = build_parser()
    try:
        args = parser.parse_args(argv)
    except SystemExit as e:
        return EXIT_OK if e.code == 0 else EXIT_ERROR

    if args.verbose:
        set_console_level(logging.DEBUG)

    try:
        spec = QuadratureSpec(args.order_theta, args.order_phi)
        log_info(f"[CLI] {args.command} (orders {spec.order_theta}×{spec.order_phi}, seed {args.seed})")
        return COMMANDS[args.command](args, spec)
    except (SteeringError, ValueError, OSError) as e:
        report_error(f"{type(e).__name__}: {e}", node_name=args.command)
        return EXIT_ERROR


if __name__ == "__main__":
    sys.exit(main())
