"""
Command-line front end.

    effham diag matrix.json --method npad
    effham counts --kmax 8 --check-table1
    effham fig4 --grid cut=-0.8:-0.4:81 --out results/fig4
    effham emit-expr two_rotation --format graph-json

Exit codes: 0 success, 2 invalid input, 3 computation refused, 4 failed check.
"""

import argparse
import json
import math
import os
import sys
from pathlib import Path
from typing import Callable, Dict, Optional, Sequence

import numpy as np
from loguru import logger
from pydantic import ValidationError

from . import __version__
from .apps.dispersive import zeta_rswt_traced
from .apps.pipelines import PIPELINES, run_pipeline
from .cqed import CqedParams
from .errors import AcceptanceError, EffHamError, InputError
from .expr import Expr, emit, evaluate, node_count
from .figures import FIGURES
from .linalg import HermitianMatrix, eig_oracle
from .log import setup_logging
from .npad import NpadConfig, npad_diagonalize
from .rswt import commutator_count_rswt, commutator_count_swt, rswt
from .settings import AppConfig, config_manager, reload_config
from .sweeps import parse_grids, write_csv

# commutator counts for K = 2..8
TABLE1 = {
    2: (1, 1),
    3: (4, 2),
    4: (11, 4),
    5: (26, 5),
    6: (57, 7),
    7: (120, 8),
    8: (247, 11),
}

FIGURE_PARAMS = {
    "fig3": CqedParams(omega1=0.0, omega2=0.0, alpha1=-0.3, alpha2=-0.3, g=0.1, levels=3),
    "fig4": CqedParams(alpha1=-0.33, alpha2=-0.33, g1=0.05, g2=0.05, levels=4),
    "fig5": CqedParams(omega1=0.06, omega2=0.0, alpha1=-0.33, alpha2=-0.33, g=-0.003, levels=4),
    "fig7": CqedParams(alpha1=-0.33, alpha2=-0.33, g1=0.05, g2=0.05, levels=4),
}

# single evaluation points for emit-expr
PIPELINE_PARAMS = {
    "two_rotation": FIGURE_PARAMS["fig3"],
    "two_level": FIGURE_PARAMS["fig3"],
    "kerr_approx": FIGURE_PARAMS["fig3"],
    "disp": CqedParams.quasi_dispersive(-0.5, 0.132, -0.33, 0.05),
    "zeta4": CqedParams.quasi_dispersive(-0.5, 0.132, -0.33, 0.05),
    "zeta6": CqedParams.quasi_dispersive(-0.5, 0.132, -0.33, 0.05),
    "npad8": CqedParams.quasi_dispersive(-0.5, 0.132, -0.33, 0.05),
    "rswt": CqedParams.quasi_dispersive(-0.5, 0.132, -0.33, 0.05),
    "omega_zx": FIGURE_PARAMS["fig5"].model_copy(update={"Omega": 0.03}),
    "omega_zx_npad4": FIGURE_PARAMS["fig5"].model_copy(update={"Omega": 0.03}),
}


def _json_dump(payload, path: Path) -> Path:
    path.parent.mkdir(parents=True, exist_ok=True)
    path.write_text(json.dumps(payload, indent=2, sort_keys=True) + "\n", encoding="utf-8")
    return path


def _load_params(args: argparse.Namespace, default: CqedParams) -> CqedParams:
    p = CqedParams.load(args.config) if getattr(args, "config", None) else default
    if getattr(args, "levels", None) is not None:
        p = CqedParams(**{**p.model_dump(), "levels": args.levels})
    return p


# subcommands ----------------------------------------------------------------

def cmd_diag(args: argparse.Namespace, config: AppConfig) -> dict:
    """Diagonalize a matrix JSON file with NPAD, RSWT or the reference solver."""
    path = Path(args.matrix)
    try:
        h = HermitianMatrix.from_json(path.read_text(encoding="utf-8"))
    except OSError as e:
        raise InputError(f"cannot read matrix file {path}: {e}") from e

    oracle = eig_oracle(h)
    payload = {"method": args.method, "dim": h.dim}
    if args.method == "npad":
        cfg = NpadConfig.from_settings(tolerance=args.tol, strategy=args.strategy)
        result = npad_diagonalize(h, cfg)
        payload.update(result.to_dict())
        eigenvalues = result.eigenvalues
        print(f"rotations: {len(result.rotations)}  sweeps: {result.sweeps}  converged: {result.converged}")
    elif args.method == "rswt":
        final, trace = rswt(h, args.order)
        payload["final_matrix"] = final.to_dict()
        payload["trace"] = trace.to_dict()
        eigenvalues = sorted(final.diagonal())
        print(f"order: {args.order}  commutators: {trace.total_commutators}")
    else:
        payload["final_matrix"] = HermitianMatrix.diagonal_matrix(oracle.values).to_dict()
        payload["sweeps"] = oracle.sweeps
        eigenvalues = [float(v) for v in oracle.values]

    payload["eigenvalues"] = [float(v) for v in eigenvalues]
    diff = float(np.max(np.abs(np.asarray(eigenvalues) - oracle.values)))
    payload["max_abs_diff_vs_oracle"] = diff
    for n, value in enumerate(eigenvalues):
        print(f"  E[{n}] = {value!r}")
    print(f"max |{args.method} - oracle| = {diff:.3e}")
    out = _json_dump(payload, args.out / "result.json")
    return {"outputs": [str(out)]}


def cmd_counts(args: argparse.Namespace, config: AppConfig) -> dict:
    """Commutator counts of the direct and the recursive transformation."""
    if args.kmax < 2:
        raise InputError("--kmax must be at least 2")
    rows = [(k, commutator_count_swt(k), commutator_count_rswt(k)) for k in range(2, args.kmax + 1)]
    print(f"{'K':>3} {'SWT':>8} {'RSWT':>6}")
    for k, swt, recursive in rows:
        print(f"{k:>3} {swt:>8} {recursive:>6}")
    out = write_csv(args.out / "counts.csv", ["K", "SWT", "RSWT"], rows)
    if args.check_table1:
        mismatches = [k for k, swt, recursive in rows if k in TABLE1 and TABLE1[k] != (swt, recursive)]
        if mismatches or args.kmax < max(TABLE1):
            missing = [k for k in TABLE1 if k > args.kmax]
            raise AcceptanceError(f"commutator counts differ at K={mismatches}, not computed for K={missing}")
        print("table check passed")
    return {"outputs": [str(out)]}


def _figure_command(name: str) -> Callable[[argparse.Namespace, AppConfig], dict]:
    tables_fn, render_fn, default_grids = FIGURES[name]

    def command(args: argparse.Namespace, config: AppConfig) -> dict:
        p = _load_params(args, FIGURE_PARAMS[name])
        grids = parse_grids(args.grid, default_grids)
        tables = tables_fn(p, grids, config.sweep.threads)
        outputs = [str(write_csv(args.out / f"{key}.csv", t.header, t.rows)) for key, t in tables.items()]
        if not args.no_plot:
            outputs += [str(path) for path in render_fn(tables, args.out)]
        for key, t in tables.items():
            masked = sum(1 for row in t.rows for v in row if isinstance(v, float) and math.isnan(v))
            print(f"{key}: {len(t.rows)} rows, {masked} masked values")
        return {
            "outputs": outputs,
            "params": p.model_dump(),
            "grids": {k: [g.start, g.stop, g.steps] for k, g in grids.items()},
        }

    command.__name__ = f"cmd_{name}"
    return command


def cmd_emit_expr(args: argparse.Namespace, config: AppConfig) -> dict:
    """Print the closed-form expression of a pipeline and its node count."""
    p = _load_params(args, PIPELINE_PARAMS[args.pipeline])
    layers = None
    if args.pipeline == "rswt":
        estimate, trace = zeta_rswt_traced(p, order=args.order, symbolic=True)
        expr = estimate.value
        layers = trace.layer_map()
    else:
        expr = run_pipeline(args.pipeline, p, symbolic=True, order=args.order)
    if not isinstance(expr, Expr):
        raise InputError(f"pipeline '{args.pipeline}' folded to the constant {expr!r}")

    try:
        text = emit(expr, args.format, layers=layers)
    except ValueError as e:
        raise InputError(str(e)) from e
    count = node_count(expr)
    print(text)
    print(f"node_count: {count}")
    logger.info("emitted {} with {} nodes", args.pipeline, count)
    suffix = "json" if args.format == "graph-json" else "txt"
    out = args.out / f"{args.pipeline}.{suffix}"
    out.parent.mkdir(parents=True, exist_ok=True)
    out.write_text(text + "\n", encoding="utf-8")

    result = {"outputs": [str(out)], "params": p.model_dump(), "node_count": count}
    if args.check:
        symbolic_value = evaluate(expr, p.env())
        numeric_value = float(run_pipeline(args.pipeline, p, order=args.order))
        scale = max(abs(numeric_value), 1e-300)
        if abs(symbolic_value - numeric_value) > 1e-10 * scale:
            raise AcceptanceError(f"symbolic {symbolic_value!r} differs from numeric {numeric_value!r}")
        print(f"symbolic = numeric = {numeric_value!r}")
        result["value"] = numeric_value
    return result


COMMANDS: Dict[str, Callable[[argparse.Namespace, AppConfig], dict]] = {
    "diag": cmd_diag,
    "counts": cmd_counts,
    "emit-expr": cmd_emit_expr,
}
COMMANDS.update({name: _figure_command(name) for name in FIGURES})


# parser ---------------------------------------------------------------------

def build_parser() -> argparse.ArgumentParser:
    parser = argparse.ArgumentParser(prog="effham", description="Effective Hamiltonians by NPAD and RSWT")
    parser.add_argument("--version", action="version", version=f"%(prog)s {__version__}")
    parser.add_argument("--env", choices=["development", "testing", "production"], help="Configuration environment")
    parser.add_argument("--log-level", choices=["DEBUG", "INFO", "WARNING", "ERROR", "CRITICAL"])
    parser.add_argument("--json-logs", action="store_true", help="Serialize log records as JSON")

    common = argparse.ArgumentParser(add_help=False)
    common.add_argument("--out", type=Path, default=Path("results"), help="Output directory")
    common.add_argument("--tol", type=float, help="NPAD tolerance (GHz)")

    sub = parser.add_subparsers(dest="command", required=True)

    diag = sub.add_parser("diag", parents=[common], help="Diagonalize a matrix JSON file")
    diag.add_argument("matrix", help='Matrix JSON {"dim": n, "entries": [[re, im], ...]}')
    diag.add_argument("--method", choices=["npad", "rswt", "oracle"], default="npad")
    diag.add_argument("--order", type=int, default=4, help="RSWT target order K")
    diag.add_argument("--strategy", choices=["largest", "cyclic"], default=None, help="NPAD pivot strategy")

    counts = sub.add_parser("counts", parents=[common], help="Commutator counts of SWT and RSWT")
    counts.add_argument("--kmax", type=int, default=8)
    counts.add_argument("--check-table1", action="store_true", help="Compare K = 2..8 with the reference commutator counts")

    for name in FIGURES:
        fig = sub.add_parser(name, parents=[common], help=f"Reproduce {name}")
        fig.add_argument("--config", help="Parameter file (.toml or .json)")
        fig.add_argument("--levels", type=int, help="Levels per subsystem")
        fig.add_argument("--grid", action="append", default=[], metavar="NAME=START:STOP:STEPS")
        fig.add_argument("--no-plot", action="store_true", help="Write CSV only")

    expr = sub.add_parser("emit-expr", parents=[common], help="Print a closed-form expression")
    expr.add_argument("pipeline", choices=sorted(PIPELINES))
    expr.add_argument("--format", choices=["infix", "graph-json"], default="infix")
    expr.add_argument("--config", help="Parameter file (.toml or .json)")
    expr.add_argument("--levels", type=int)
    expr.add_argument("--order", type=int, default=4, help="RSWT target order K")
    expr.add_argument("--check", action="store_true", help="Compare with the numeric pipeline")
    return parser


def _configure(args: argparse.Namespace) -> AppConfig:
    if args.env:
        os.environ["EFFHAM_ENVIRONMENT"] = args.env
        config = reload_config()
    else:
        config = config_manager.get_config()
    logging_updates = {}
    if args.log_level:
        logging_updates["level"] = args.log_level
    if args.json_logs:
        logging_updates["json_logs"] = True
    updates = {}
    if logging_updates:
        updates["logging"] = config.logging.model_copy(update=logging_updates)
    if args.tol is not None:
        if args.tol < 0:
            raise InputError("--tol must be non-negative")
        updates["numerics"] = config.numerics.model_copy(update={"tolerance": args.tol})
    if updates:
        config = config.model_copy(update=updates)
        config_manager.set_config(config)
    setup_logging(config.logging)
    return config


def main(argv: Optional[Sequence[str]] = None) -> int:
    parser = build_parser()
    args = parser.parse_args(argv)
    try:
        config = _configure(args)
        logger.info("effham {} {}", __version__, args.command)
        result = COMMANDS[args.command](args, config)
        manifest = {
            "command": args.command,
            "argv": list(argv) if argv is not None else sys.argv[1:],
            "environment": config.environment.value,
            "numerics": config.numerics.model_dump(),
        }
        manifest.update(result)
        _json_dump(manifest, args.out / "run.json")
        return 0
    except EffHamError as e:
        logger.error("{}: {}", type(e).__name__, e)
        print(f"error: {e}", file=sys.stderr)
        return e.exit_code
    except ValidationError as e:
        logger.error("invalid configuration: {}", e)
        print(f"error: {e}", file=sys.stderr)
        return InputError.exit_code


def run() -> None:
    sys.exit(main())


if __name__ == "__main__":
    run()
