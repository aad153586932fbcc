"""
Command-line front end.

Every subcommand computes one payload; ``--json`` prints it as
``{"command": ..., "result": ..., "exact": true}`` with every number written as
a decimal or ``p/q`` string, otherwise it is rendered with rich.
"""

import argparse
import logging
import sys
import time
from fractions import Fraction
from pathlib import Path
from typing import Any, Sequence

from pydantic import BaseModel
from rich.console import Console
from rich.table import Table

from .bvalpha import (
    alpha_table,
    check_box_corner_positivity,
    face_class_summaries,
    reconstruct_ehrhart_from_alpha,
    scan_alpha_positivity,
)
from .config import Settings
from .counting import count_points, ehrhart_via_counting
from .ehrhart import (
    FAMILY_TAGS,
    FamilySpec,
    check_choice_k_bounds,
    choose_a,
    ehrhart_family,
    ehrhart_p_corner,
    mu_coeffs,
    negative_indices,
    search_negative,
)
from .errors import EhrhartError
from .exactpoly import (
    Polynomial,
    boundary_point_count,
    format_rational,
    hstar_transform,
    interior_point_total,
    lattice_point_total,
    normalized_volume,
    poly_interpolate,
)
from .polyfile import read_polytope_file, write_polytope_file
from .polytope import ChiselPlan, SmoothPolytope, apply_chisel_plan, make_box, make_hexagon_prism, validate
from .reproduce import GROUPS, reproduce

logger = logging.getLogger(__name__)


class CommandResult(BaseModel):
    command: str
    result: dict[str, Any]
    status: str = "ok"
    elapsed_ms: str = "0"
    exact: bool = True


def exact_payload(value: Any) -> Any:
    """Replace every number by its exact string form, recursively."""
    if isinstance(value, bool) or value is None or isinstance(value, str):
        return value
    if isinstance(value, (int, Fraction)):
        return format_rational(value)
    if isinstance(value, Polynomial):
        return value.as_strings()
    if isinstance(value, BaseModel):
        return exact_payload(value.model_dump())
    if isinstance(value, dict):
        return {str(k): exact_payload(v) for k, v in value.items()}
    if isinstance(value, (list, tuple)):
        return [exact_payload(v) for v in value]
    if isinstance(value, Path):
        return str(value)
    raise TypeError(f"cannot serialize {type(value).__name__} exactly")


def _int_list(text: str) -> list[int]:
    try:
        return [int(x) for x in text.split(",") if x.strip()]
    except ValueError:
        raise argparse.ArgumentTypeError(f"expected comma separated integers, got {text!r}") from None


def _rational_list(text: str) -> list[Fraction]:
    try:
        return [Fraction(x.strip()) for x in text.split(",") if x.strip()]
    except ValueError:
        raise argparse.ArgumentTypeError(f"expected comma separated rationals, got {text!r}") from None


def _samples(text: str) -> list[tuple[int, Fraction]]:
    pairs = []
    for chunk in text.split(","):
        try:
            t, value = chunk.split(":")
            pairs.append((int(t), Fraction(value)))
        except ValueError:
            raise argparse.ArgumentTypeError(f"expected t:value pairs, got {chunk!r}") from None
    return pairs


def _group_list(text: str) -> list[str]:
    groups = [g.strip().upper() for g in text.split(",") if g.strip()]
    unknown = [g for g in groups if g not in GROUPS]
    if unknown:
        raise argparse.ArgumentTypeError(f"unknown groups: {', '.join(unknown)}")
    return groups


def _polytope_source(args) -> SmoothPolytope:
    if args.file is not None:
        base = read_polytope_file(args.file)
    elif args.cube is not None:
        base = make_box([args.scale] * args.cube)
    elif args.hexprism:
        base = make_hexagon_prism(args.scale)
    else:
        raise EhrhartError("give one of --file, --cube or --hexprism")
    return apply_chisel_plan(ChiselPlan(base, tuple(args.depths or ())))


def _polynomial_payload(p: Polynomial) -> dict[str, Any]:
    return {"polynomial": p, "text": str(p)}


def cmd_ehrhart(args, settings: Settings) -> dict[str, Any]:
    spec = FamilySpec(
        tag=args.family,
        n=args.n,
        k=args.k,
        a=args.a,
        b=args.b,
        sides=tuple(args.sides or ()),
        depths=tuple(args.depths or ()),
        base=Polynomial.from_coefficients(args.base) if args.base else None,
        f0=args.f0,
        scale=args.scale,
    )
    return {"family": args.family, **_polynomial_payload(ehrhart_family(spec))}


def cmd_chisel(args, settings: Settings) -> dict[str, Any]:
    P = _polytope_source(args)
    if args.out is not None:
        write_polytope_file(P, args.out)
    return {"validation": validate(P), "out": args.out}


def cmd_count(args, settings: Settings) -> dict[str, Any]:
    sample = count_points(
        _polytope_source(args),
        args.t,
        strict=args.strict,
        threads=settings.threads,
        budget=settings.budget,
        progress=args.progress,
    )
    return {"t": sample.t, "count": sample.count, "strict": sample.strict}


def cmd_interp(args, settings: Settings) -> dict[str, Any]:
    if args.samples:
        return _polynomial_payload(poly_interpolate(args.samples))
    p = ehrhart_via_counting(
        _polytope_source(args),
        threads=settings.threads,
        budget=settings.budget,
        progress=args.progress,
    )
    return _polynomial_payload(p)


def cmd_hstar(args, settings: Settings) -> dict[str, Any]:
    p = Polynomial.from_coefficients(args.coeffs)
    h = hstar_transform(p)
    return {
        "hstar": list(h.coefficients),
        "integral": h.is_integral,
        "lattice_points": lattice_point_total(p),
        "interior_points": interior_point_total(p),
        "boundary_points": boundary_point_count(p),
        "normalized_volume": normalized_volume(p),
    }


def cmd_alpha_table(args, settings: Settings) -> dict[str, Any]:
    return {"rows": alpha_table(args.n)}


def cmd_alpha_scan(args, settings: Settings) -> dict[str, Any]:
    return {"scan": scan_alpha_positivity(args.n)}


def cmd_reconstruct(args, settings: Settings) -> dict[str, Any]:
    p = reconstruct_ehrhart_from_alpha(args.n, args.a, args.b)
    classes = [face_class_summaries(args.n, args.a, args.b, k) for k in range(args.n + 1)]
    return {
        **_polynomial_payload(p),
        "matches_closed_form": p == ehrhart_p_corner(args.n, args.a, args.b),
        "face_classes": classes,
    }


def cmd_box_corner(args, settings: Settings) -> dict[str, Any]:
    return {"report": check_box_corner_positivity(args.sides, args.b)}


def cmd_mu(args, settings: Settings) -> dict[str, Any]:
    mu = mu_coeffs(args.n, args.k, args.a)
    return {"mu": list(mu.values), "negative_indices": negative_indices(args.n, args.k, args.a)}


def cmd_choose_a(args, settings: Settings) -> dict[str, Any]:
    return {"a": choose_a(args.n, args.k), "bounds": check_choice_k_bounds(args.n, args.k)}


def cmd_search(args, settings: Settings) -> dict[str, Any]:
    witnesses = search_negative(
        args.n, args.k_max, a_max=args.a_max, a_rule=args.rule, k_min=args.k_min
    )
    return {"witnesses": witnesses}


def cmd_validate(args, settings: Settings) -> dict[str, Any]:
    return {"validation": validate(_polytope_source(args))}


def cmd_reproduce(args, settings: Settings) -> dict[str, Any]:
    report = reproduce(
        only=args.only, heavy=args.heavy, threads=settings.threads, budget=settings.budget
    )
    return {"report": report}


def _common_parser() -> argparse.ArgumentParser:
    common = argparse.ArgumentParser(add_help=False)
    common.add_argument("--json", action="store_true", help="Print one exact JSON object")
    common.add_argument("--threads", type=int, default=None, help="Counting processes (default: CPU count)")
    common.add_argument("--budget", type=int, default=None, help="Candidate-point budget for counting")
    common.add_argument(
        "--log-level",
        choices=["DEBUG", "INFO", "WARNING", "ERROR"],
        default=None,
        help="Logging level for standard error",
    )
    common.add_argument("--progress", action="store_true", help="Show a progress bar on standard error")
    return common


def _add_source(parser: argparse.ArgumentParser):
    source = parser.add_mutually_exclusive_group(required=True)
    source.add_argument("--file", type=Path, help="Polytope file (DIM / INEQ / VERT)")
    source.add_argument("--cube", type=int, metavar="N", help="Cube of dimension N")
    source.add_argument("--hexprism", action="store_true", help="Prism over the smooth hexagon")
    parser.add_argument("--scale", type=int, default=1, help="Scale of --cube or --hexprism (default: 1)")
    parser.add_argument("--depths", type=_int_list, default=None, help="Full chiseling depths, e.g. 27,9,3,1")


def build_parser() -> argparse.ArgumentParser:
    common = _common_parser()
    parser = argparse.ArgumentParser(
        prog="chisel",
        description="Exact Ehrhart polynomials of chiseled smooth lattice polytopes",
        formatter_class=argparse.RawDescriptionHelpFormatter,
        epilog="""
Examples:
  # Closed form of Q_7(5,2)
  uv run src/main.py ehrhart Q --n 7 --a 5 --b 2 --json

  # Count lattice points of the bundled 9-dimensional polytope
  uv run src/main.py count --file data/smooth_reflexive_9d.poly --t 1

  # Run every reproduction check
  uv run src/main.py reproduce
        """,
    )
    sub = parser.add_subparsers(dest="command", required=True)

    p = sub.add_parser("ehrhart", parents=[common], help="Closed-form Ehrhart polynomial of a family")
    p.add_argument("family", choices=FAMILY_TAGS)
    for name in ("n", "k", "a", "b", "f0", "scale"):
        p.add_argument(f"--{name}", type=int, default=None)
    p.add_argument("--sides", type=_int_list, default=None, help="Box sides for boxCorner")
    p.add_argument("--depths", type=_int_list, default=None, help="Depths for chiselSeries")
    p.add_argument("--base", type=_rational_list, default=None, help="Base polynomial, ascending")
    p.set_defaults(handler=cmd_ehrhart)

    p = sub.add_parser("chisel", parents=[common], help="Build and validate a chiseled polytope")
    _add_source(p)
    p.add_argument("--out", type=Path, default=None, help="Write the result as a polytope file")
    p.set_defaults(handler=cmd_chisel)

    p = sub.add_parser("count", parents=[common], help="Count lattice points of a dilate")
    _add_source(p)
    p.add_argument("--t", type=int, default=1, help="Dilation factor (default: 1)")
    p.add_argument("--strict", action="store_true", help="Count interior points only")
    p.set_defaults(handler=cmd_count)

    p = sub.add_parser("interp", parents=[common], help="Interpolate samples or counted dilates")
    source = p.add_mutually_exclusive_group(required=True)
    source.add_argument("--samples", type=_samples, help="t:value pairs, e.g. 0:1,1:12,2:37")
    source.add_argument("--file", type=Path)
    source.add_argument("--cube", type=int, metavar="N")
    source.add_argument("--hexprism", action="store_true")
    p.add_argument("--scale", type=int, default=1)
    p.add_argument("--depths", type=_int_list, default=None)
    p.set_defaults(handler=cmd_interp)

    p = sub.add_parser("hstar", parents=[common], help="h*-vector and point totals of a polynomial")
    p.add_argument("--coeffs", type=_rational_list, required=True, help="Ascending coefficients")
    p.set_defaults(handler=cmd_hstar)

    p = sub.add_parser("alpha-table", parents=[common], help="Alpha values of cut-simplex faces")
    p.add_argument("--n", type=int, default=7)
    p.set_defaults(handler=cmd_alpha_table)

    p = sub.add_parser("alpha-scan", parents=[common], help="Sign scan of one alpha-table row")
    p.add_argument("--n", type=int, required=True)
    p.set_defaults(handler=cmd_alpha_scan)

    p = sub.add_parser("reconstruct", parents=[common], help="i(P_n(a,b), t) from alpha values")
    for name in ("n", "a", "b"):
        p.add_argument(f"--{name}", type=int, required=True)
    p.set_defaults(handler=cmd_reconstruct)

    p = sub.add_parser("box-corner", parents=[common], help="Positivity chain for a box with one corner cut")
    p.add_argument("--sides", type=_int_list, required=True)
    p.add_argument("--b", type=int, required=True)
    p.set_defaults(handler=cmd_box_corner)

    p = sub.add_parser("mu", parents=[common], help="Coefficients of i(P^n(k,a), t)")
    for name in ("n", "k", "a"):
        p.add_argument(f"--{name}", type=int, required=True)
    p.set_defaults(handler=cmd_mu)

    p = sub.add_parser("choose-a", parents=[common], help="The formulaic a and its bounds")
    for name in ("n", "k"):
        p.add_argument(f"--{name}", type=int, required=True)
    p.set_defaults(handler=cmd_choose_a)

    p = sub.add_parser("search", parents=[common], help="Search (k, a) with negative coefficients")
    p.add_argument("--n", type=int, required=True)
    p.add_argument("--k-max", type=int, required=True)
    p.add_argument("--k-min", type=int, default=1)
    p.add_argument("--a-max", type=int, default=10**6)
    p.add_argument("--rule", choices=["grid", "formula"], default="grid")
    p.set_defaults(handler=cmd_search)

    p = sub.add_parser("validate", parents=[common], help="Smoothness and reflexivity report")
    _add_source(p)
    p.set_defaults(handler=cmd_validate)

    p = sub.add_parser("reproduce", parents=[common], help="Recompute every published value")
    p.add_argument(
        "--only",
        type=_group_list,
        default=None,
        help=f"Comma separated groups: {', '.join(GROUPS)}",
    )
    p.add_argument("--heavy", action="store_true", help="Include the long counting checks")
    p.set_defaults(handler=cmd_reproduce)
    return parser


def _render_value(value: Any) -> str:
    if isinstance(value, list):
        return ", ".join(_render_value(v) for v in value)
    if isinstance(value, dict):
        return "; ".join(f"{k}={_render_value(v)}" for k, v in value.items())
    return str(value)


def render_text(console: Console, command: str, payload: dict[str, Any]):
    if command == "alpha-table":
        table = Table(title="alpha values of cut-simplex faces")
        width = len(payload["rows"])
        table.add_column("n")
        for k in range(width + 1):
            table.add_column(f"k={k}")
        for n, row in enumerate(payload["rows"], start=1):
            table.add_row(str(n), *row)
        console.print(table)
        return
    if command == "reproduce":
        report = payload["report"]
        table = Table(title="reproduction")
        for column in ("group", "item", "status", "detail"):
            table.add_column(column)
        for check in report["checks"]:
            status = "[green]✓[/green]" if check["passed"] else "[red]✗[/red]"
            table.add_row(check["group"], check["item"], status, check["detail"])
        console.print(table)
        return
    if "text" in payload:
        console.print(payload["text"], soft_wrap=True, highlight=False)
    table = Table(show_header=False)
    table.add_column("key", style="bold")
    table.add_column("value")
    for key, value in payload.items():
        if key in ("text", "polynomial"):
            continue
        table.add_row(key, _render_value(value))
    if table.row_count:
        console.print(table)


def _exit_code(payload: dict[str, Any]) -> int:
    report = payload.get("report")
    if isinstance(report, dict) and report.get("passed") is False:
        return 1
    return 0


def run(argv: Sequence[str] | None = None) -> int:
    """
    Parse the arguments and execute one subcommand.

    Args:
        argv: Command-line arguments without the program name (default: sys.argv[1:])

    Returns:
        Exit code: 0 on success, 1 on computation errors or failed checks,
        2 on usage errors and invalid CHISEL_* environment values
    """
    parser = build_parser()
    try:
        args = parser.parse_args(argv)
    except SystemExit as exc:
        return 0 if exc.code in (0, None) else 2

    try:
        settings = Settings()
    except EhrhartError as exc:
        sys.stderr.write(f"invalid environment: {exc}\n")
        return 2
    if args.threads is not None:
        settings.threads = args.threads
    if args.budget is not None:
        settings.budget = args.budget
    if args.log_level is not None:
        settings.log_level = args.log_level
    logging.basicConfig(
        level=settings.log_level.upper(),
        format="%(asctime)s - %(levelname)s - %(message)s",
        datefmt="%Y-%m-%d %H:%M:%S",
        stream=sys.stderr,
        force=True,
    )

    start = time.perf_counter_ns()
    try:
        raw = args.handler(args, settings)
    except EhrhartError as exc:
        logger.error(f"{args.command} failed: {exc}")
        return 1
    elapsed_ms = (time.perf_counter_ns() - start) // 1_000_000
    logger.info(f"{args.command} finished in {elapsed_ms} ms")

    payload = exact_payload(raw)
    code = _exit_code(payload)
    if args.json:
        result = CommandResult(
            command=args.command,
            result=payload,
            status="failed" if code else "ok",
            elapsed_ms=str(elapsed_ms),
        )
        sys.stdout.write(result.model_dump_json() + "\n")
    else:
        render_text(Console(), args.command, payload)
    if code:
        for check in payload["report"]["checks"]:
            if not check["passed"]:
                logger.error(f"✗ {check['group']} {check['item']}: {check['detail']}")
                break
    return code
