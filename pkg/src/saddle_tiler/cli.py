"""Command-line interface: closed-form optima, form reduction, tiling export, verification.

Exit codes: 0 success, 1 verification failure, 2 usage error, 3 domain error
(non-saddle input, oversized window, ...), 4 I/O failure.
"""

from __future__ import annotations

import argparse
import json
import os
import sys
from pathlib import Path

from .errors import SaddleTilerError
from .optimizer import (
    ApproximationKind,
    ApproximationSpec,
    TABLE_ORDER,
    optimal_triangle,
    parse_kind,
)
from .quadform import QuadraticForm, reduce_to_standard
from .tiling import (
    build_tiling,
    continuity_report,
    density_estimate,
    export,
    max_error_over_window,
)
from .verify import DEFAULT_SEED, format_report, run_checks

EXIT_OK = 0
EXIT_VERIFY_FAILED = 1
EXIT_USAGE = 2
EXIT_DOMAIN = 3
EXIT_IO = 4

_KIND_NAMES = tuple(k.value for k in ApproximationKind)


def _workers_from_env() -> int:
    raw = os.environ.get("SADDLE_TILER_THREADS", "1")
    try:
        return max(1, int(raw))
    except ValueError:
        return 1


def _positive_float(text: str) -> float:
    value = float(text)
    if not value > 0.0:
        raise argparse.ArgumentTypeError(f"must be positive, got {text}")
    return value


def _solution_text(sol) -> str:
    lines = [
        f"kind:               {sol.kind.value}",
        f"epsilon:            {sol.epsilon:.12g}",
        f"area:               {sol.area:.12g}",
        f"density:            {sol.density:.12g}",
        f"deviations:         ({sol.deviations.d1:.12g}, {sol.deviations.d2:.12g}, "
        f"{sol.deviations.d3:.12g})",
        f"k ascending:        {sol.k_ascending:.12g}",
        f"k descending:       {sol.k_descending:.12g}",
        f"lambda ascending:   {sol.lambda_ascending:.12g}",
        f"lambda descending:  {sol.lambda_descending:.12g}",
        f"aspect ratio:       {sol.aspect_ratio:.12g}",
        "vertices:           " + "  ".join(
            f"({x:.12g}, {y:.12g})" for x, y in sol.vertices.vertices),
    ]
    return "\n".join(lines)


def _table_text(epsilon: float) -> str:
    header = (f"{'kind':28} {'area':>12} {'density':>12} {'k':>10} "
              f"{'d1':>10} {'d2=d3':>10} {'lam1':>6} {'lam3':>6}")
    lines = [f"optimal triangles at epsilon = {epsilon:.12g}", header,
             "-" * len(header)]
    for kind in TABLE_ORDER:
        sol = optimal_triangle(ApproximationSpec(kind, epsilon))
        lines.append(
            f"{kind.value:28} {sol.area:12.6f} {sol.density:12.6f} "
            f"{sol.k_ascending:10.6f} {sol.deviations.d1:10.6f} "
            f"{sol.deviations.d2:10.6f} {sol.lambda_ascending:6.3f} "
            f"{sol.lambda_descending:6.3f}")
    return "\n".join(lines)


def _cmd_optimal(args) -> int:
    if args.all:
        if args.json:
            sols = [optimal_triangle(ApproximationSpec(kind, args.epsilon)).to_json_dict()
                    for kind in TABLE_ORDER]
            print(json.dumps(sols, indent=2))
        else:
            print(_table_text(args.epsilon))
        return EXIT_OK
    sol = optimal_triangle(ApproximationSpec(parse_kind(args.kind), args.epsilon))
    if args.json:
        print(json.dumps(sol.to_json_dict(), indent=2))
    else:
        print(_solution_text(sol))
    return EXIT_OK


def _cmd_reduce(args) -> int:
    qf = QuadraticForm(args.a, args.b, args.c, args.d, args.e, args.g)
    red = reduce_to_standard(qf)
    if args.json:
        doc = red.to_json_dict()
        doc["epsilon_standard"] = args.epsilon / abs(red.kappa)
        doc["residual"] = [red.residual.alpha, red.residual.beta, red.residual.gamma]
        print(json.dumps(doc, indent=2))
        return EXIT_OK
    (p00, p01), (p10, p11) = red.phi
    lines = [
        f"case:      {red.case_tag.value}",
        f"kappa:     {red.kappa:.12g}",
        f"phi:       [[{p00:.12g}, {p01:.12g}], [{p10:.12g}, {p11:.12g}]]",
        f"jacobian:  {red.jacobian:.12g}",
        f"residual:  {red.residual.alpha:.12g}*u + {red.residual.beta:.12g}*v "
        f"+ {red.residual.gamma:.12g}",
        f"tolerance: an epsilon budget on the source form equals "
        f"epsilon/|kappa| = {args.epsilon / abs(red.kappa):.12g} on F(u,v) = uv",
    ]
    print("\n".join(lines))
    return EXIT_OK


def _cmd_tile(args) -> int:
    spec = ApproximationSpec(parse_kind(args.kind), args.epsilon)
    tiling = build_tiling(optimal_triangle(spec), args.window)
    data = export(tiling, args.format)
    out_path = Path(args.out) if args.out else Path(f"tiling-{args.kind}.{args.format}")
    out_path.write_bytes(data)
    vertex_jump, edge_jump = continuity_report(tiling)
    lines = [
        f"wrote:            {out_path} ({len(data)} bytes)",
        f"facets:           {tiling.facet_count}",
        f"density estimate: {density_estimate(tiling, args.window):.6f} "
        f"(1/area = {1.0 / tiling.base.area:.6f})",
        f"max error:        {max_error_over_window(tiling):.9f}",
        f"continuity:       vertex jump {vertex_jump:.9f}, edge jump {edge_jump:.9f}",
    ]
    print("\n".join(lines))
    return EXIT_OK


def _cmd_verify(args) -> int:
    results = run_checks(args.level, seed=args.seed,
                         workers=_workers_from_env(), tamper=args.tamper)
    print(format_report(results))
    return EXIT_OK if all(r.passed for r in results) else EXIT_VERIFY_FAILED


def _build_parser() -> argparse.ArgumentParser:
    parser = argparse.ArgumentParser(
        prog="saddle-tiler",
        description="Optimal triangulations for piecewise-linear approximation "
                    "of indefinite quadratic surfaces.")
    sub = parser.add_subparsers(dest="command", required=True)

    p_opt = sub.add_parser("optimal", help="closed-form optimal triangle")
    p_opt.add_argument("kind", nargs="?", default=ApproximationKind.GENERAL.value,
                       choices=_KIND_NAMES)
    p_opt.add_argument("--epsilon", type=_positive_float, default=1.0)
    p_opt.add_argument("--json", action="store_true", help="machine-readable output")
    p_opt.add_argument("--all", action="store_true",
                       help="print the full table over all classes")
    p_opt.set_defaults(func=_cmd_optimal)

    p_red = sub.add_parser("reduce", help="reduce a quadratic form to kappa*u*v")
    for name in ("a", "b", "c", "d", "e", "g"):
        p_red.add_argument(f"--{name}", type=float, default=0.0)
    p_red.add_argument("--epsilon", type=_positive_float, default=1.0,
                       help="error budget on the source form")
    p_red.add_argument("--json", action="store_true")
    p_red.set_defaults(func=_cmd_reduce)

    p_tile = sub.add_parser("tile", help="materialize and export a window tiling")
    p_tile.add_argument("kind", nargs="?", default=ApproximationKind.GENERAL.value,
                        choices=_KIND_NAMES)
    p_tile.add_argument("--epsilon", type=_positive_float, default=1.0)
    p_tile.add_argument("--window", type=_positive_float, default=20.0,
                        help="side length of the centered square window")
    p_tile.add_argument("--format", choices=("svg", "obj", "json"), default="svg")
    p_tile.add_argument("--out", default=None, help="output file path")
    p_tile.set_defaults(func=_cmd_tile)

    p_ver = sub.add_parser("verify", help="run the verification suite")
    p_ver.add_argument("--level", choices=("fast", "full"), default="fast")
    p_ver.add_argument("--seed", type=int, default=DEFAULT_SEED)
    p_ver.add_argument("--tamper", choices=("table1",), default=None,
                       help="perturb an internal constant (harness self-test)")
    p_ver.set_defaults(func=_cmd_verify)
    return parser


def main(argv=None) -> int:
    parser = _build_parser()
    try:
        args = parser.parse_args(argv)
    except SystemExit as exc:  # argparse exits with 2 on usage errors
        return int(exc.code or 0)
    try:
        return args.func(args)
    except SaddleTilerError as exc:
        print(f"error: {type(exc).__name__}: {exc}", file=sys.stderr)
        return EXIT_DOMAIN
    except OSError as exc:
        print(f"i/o error: {exc}", file=sys.stderr)
        return EXIT_IO


if __name__ == "__main__":
    sys.exit(main())
