"""qlattice CLI — expansion, identity verification, VPV listing, determinants and partition counts.

Exit codes: 0 pass, 1 identity failed, 2 usage error, 3 numeric check inconclusive.
"""

from __future__ import annotations

import json
import logging
from contextlib import contextmanager
from fractions import Fraction
from math import factorial
from pathlib import Path
from typing import Optional

import typer

from src import binpart, oracle, qseries, vpv
from src.config import CapsChoice, Settings, load_settings, parse_floats, parse_ints, resolve_caps
from src.detkit import PowerSums, constant_a_sums, det, det_by_both, hessenberg_matrix, powers_a_sums
from src.registry import CheckRequest, identity_names, run_check
from src.report import IdentityMismatchError, compare_series, render_report
from src.series import Series, SeriesError, UsageError, VarTable, coeff, project
from src.series_codec import dumps, format_series, from_json, to_json
from src.utils.logger import setup_logging

log = logging.getLogger(__name__)

USAGE_EXIT = 2
MAX_DET_ORDER = 8

PRODUCTS = (
    "qbinom-sum", "fn", "f1", "gn", "g1", "binary-lhs", "binary-rhs", "macmahon", "plane-trace",
    "vpv-axis", "vpv-axis-rhs", "vpv-pyramid", "vpv-pyramid-rhs",
)
DET_FAMILIES = ("constant-a", "powers-a", "f1", "pyramid")

app = typer.Typer(help="Exact q-series and visible point vector identity checker.",
                  no_args_is_help=True, add_completion=False)
partitions_app = typer.Typer(help="Brute-force partition counts.", no_args_is_help=True)
app.add_typer(partitions_app, name="partitions")


@contextmanager
def cli_errors():
    try:
        yield
    except IdentityMismatchError as e:
        log.debug(f"identity mismatch: {e.report.identity}")
        typer.echo(f"Error: {e}", err=True)
        raise typer.Exit(code=1)
    except SeriesError as e:
        log.debug(f"usage error: {e}")
        typer.echo(f"Error: {e}", err=True)
        raise typer.Exit(code=USAGE_EXIT)


def _settings(ctx: typer.Context) -> Settings:
    return ctx.obj if isinstance(ctx.obj, Settings) else load_settings()


def _rational(text: Optional[str]) -> Optional[Fraction]:
    if text is None:
        return None
    try:
        return Fraction(text)
    except (ValueError, ZeroDivisionError):
        raise UsageError(f"--a must be a rational number, got {text!r}")


def _emit_series(f: Series, as_json: bool):
    typer.echo(dumps(f) if as_json else format_series(f))


@app.callback()
def main(
    ctx: typer.Context,
    config: Optional[Path] = typer.Option(None, "--config", help="Path to config.yaml."),
    log_level: Optional[str] = typer.Option(None, "--log-level", help="Console log level."),
):
    with cli_errors():
        settings = load_settings(config)
    setup_logging(log_dir=settings.log_dir, level=log_level or settings.log_level)
    ctx.obj = settings


def _expand_product(product: str, choice: CapsChoice, default: int, n: Optional[int],
                    a: Optional[Fraction], k: Optional[int]) -> Series:
    named = choice.named
    if product in ("qbinom-sum", "f1", "fn"):
        dim = 1 if product != "fn" else (n or 2)
        spec = qseries.FnSpec(n=dim, caps=named, default_cap=default, a=a)
        return qseries.qbinom_sum(spec) if product == "qbinom-sum" else qseries.expand_F_product(spec)
    if product in ("g1", "gn"):
        spec = qseries.GnSpec(n=1 if product == "g1" else (n or 2), caps=named, default_cap=default, a=a)
        return qseries.expand_G_product(spec)
    if product in ("binary-lhs", "binary-rhs"):
        _only(named, ("q", "t"))
        spec = binpart.BinPartSpec(q_cap=named.get("q", default), t_cap=named.get("t", default))
        return binpart.lhs_expand(spec) if product == "binary-lhs" else binpart.rhs_expand(spec)
    if product == "macmahon":
        _only(named, ("q",))
        return qseries.macmahon_specials(0 if k is None else k, named.get("q", default))
    if product == "plane-trace":
        _only(named, ("a", "q"))
        return qseries.trace_generating_function(named.get("q", default), named.get("a", default))
    ring = vpv.vpv_ring(n or (3 if product.startswith("vpv-axis") else 2), named, default)
    if product == "vpv-axis":
        return vpv.vpv_product_expand(vpv.Region(vpv.AXIS_EXTENDED, ring.arity), ring, vpv.DIRECT)
    if product == "vpv-axis-rhs":
        return vpv.axis_rhs(ring)
    if product == "vpv-pyramid":
        return vpv.vpv_product_expand(vpv.Region(vpv.HYPERPYRAMID, ring.arity), ring, vpv.RECIPROCAL)
    return vpv.pyramid_rhs(ring)


def _only(named: dict, names: tuple[str, ...]):
    unknown = set(named) - set(names)
    if unknown:
        raise UsageError(f"Caps given for unknown variables {sorted(unknown)}; expected {list(names)}")


@app.command()
def expand(
    ctx: typer.Context,
    product: str = typer.Option(..., "--product", help=f"One of: {', '.join(PRODUCTS)}."),
    caps: Optional[str] = typer.Option(None, "--caps", help="var=n,... or a single integer."),
    n: Optional[int] = typer.Option(None, "--n", help="Dimension for fn, gn and vpv products."),
    a: Optional[str] = typer.Option(None, "--a", help="Specialize a to a rational number."),
    k: Optional[int] = typer.Option(None, "--k", help="Row bound for macmahon (0 = unlimited)."),
    json_output: bool = typer.Option(False, "--json", help="Emit Series JSON."),
):
    """Expand a product and print the truncated series."""
    settings = _settings(ctx)
    with cli_errors():
        if product not in PRODUCTS:
            raise UsageError(f"Unknown product {product!r}; choose from {', '.join(PRODUCTS)}")
        choice = resolve_caps(caps)
        f = _expand_product(product, choice, choice.default(settings.cap), n, _rational(a), k)
    _emit_series(f, json_output or settings.json_output)


@app.command()
def verify(
    ctx: typer.Context,
    name: str = typer.Argument(..., help="Identity name."),
    n: Optional[int] = typer.Option(None, "--n"),
    k: Optional[int] = typer.Option(None, "--k"),
    caps: Optional[str] = typer.Option(None, "--caps", help="var=n,... or a single integer."),
    tol: Optional[float] = typer.Option(None, "--tol", help="Numeric tolerance."),
    b: Optional[str] = typer.Option(None, "--b", help="Comma-separated weights b_1..b_n."),
    point: Optional[str] = typer.Option(None, "--point", help="Comma-separated evaluation point."),
    perturb: bool = typer.Option(False, "--perturb", help="Add 1 to one left-side coefficient."),
    json_output: bool = typer.Option(False, "--json", help="Emit the report as JSON."),
):
    """Verify a registered identity; the exit code carries the verdict."""
    settings = _settings(ctx)
    with cli_errors():
        if name not in identity_names():
            raise UsageError(f"Unknown identity {name!r}; choose from {', '.join(identity_names())}")
        choice = resolve_caps(caps)
        request = CheckRequest(
            n=n,
            k=k,
            caps=choice.named,
            default_cap=choice.default(settings.cap),
            numeric_cap=choice.default(settings.numeric_cap),
            tol=settings.tol if tol is None else tol,
            b=parse_floats(b, "--b") if b else None,
            point=parse_floats(point, "--point") if point else None,
            perturb=perturb,
        )
        if request.tol <= 0:
            raise UsageError(f"--tol must be positive, got {request.tol}")
        report = run_check(name, request)
    typer.echo(render_report(report, as_json=json_output or settings.json_output).rstrip("\n"))
    raise typer.Exit(code=report.exit_code)


def _family_sums(family: str, k: int, choice: CapsChoice, default: int) -> tuple[PowerSums, VarTable]:
    named = choice.named
    if family in ("constant-a", "powers-a"):
        _only(named, ("a",))
        ring = VarTable(("a",), (named.get("a", k),))
        sums = constant_a_sums(ring, k) if family == "constant-a" else powers_a_sums(ring, k)
        return sums, ring
    if family == "f1":
        _only(named, ("q", "a"))
        spec = qseries.FnSpec(n=1, caps={**named, "t": k}, default_cap=default)
        ring = VarTable(("q", "a"), (spec.ring().cap_of("q"), spec.ring().cap_of("a")))
        return PowerSums(tuple(project(p, ring) for p in qseries.F_power_sums(spec).p)), ring
    _only(named, ("y",))
    full = vpv.vpv_ring(2, {"y": named.get("y", default), "z": k})
    ring = VarTable(("y",), (full.cap_of("y"),))
    return PowerSums(tuple(project(vpv.pyramid_power_sum(full, m), ring) for m in range(1, k + 1))), ring


@app.command("det")
def det_command(
    ctx: typer.Context,
    family: str = typer.Option(..., "--family", help=f"One of: {', '.join(DET_FAMILIES)}."),
    k: int = typer.Option(4, "--k", help=f"Matrix order, 1..{MAX_DET_ORDER}."),
    caps: Optional[str] = typer.Option(None, "--caps"),
    method: str = typer.Option("both", "--method", help="cofactor, bareiss or both."),
    json_output: bool = typer.Option(False, "--json"),
):
    """Evaluate the Hessenberg determinant of a power-sum family."""
    settings = _settings(ctx)
    with cli_errors():
        if family not in DET_FAMILIES:
            raise UsageError(f"Unknown family {family!r}; choose from {', '.join(DET_FAMILIES)}")
        if not 1 <= k <= MAX_DET_ORDER:
            raise UsageError(f"--k must lie in 1..{MAX_DET_ORDER}, got {k}")
        choice = resolve_caps(caps)
        sums, _ = _family_sums(family, k, choice, choice.default(settings.cap))
        matrix = hessenberg_matrix(sums, k)
        value = det_by_both(matrix) if method == "both" else det(matrix, method)
        coefficient = value.scale(Fraction(1, factorial(k)))
    if json_output or settings.json_output:
        typer.echo(json.dumps({"family": family, "k": k, "det": to_json(value),
                               "coefficient": to_json(coefficient)}, separators=(",", ":")))
    else:
        typer.echo(f"det = {format_series(value)}")
        typer.echo(f"det/{k}! = {format_series(coefficient)}")


def _read_series(path: Path) -> Series:
    try:
        text = path.read_text()
    except OSError as e:
        raise UsageError(f"Cannot read {path}: {e.strerror}")
    return from_json(text)


@app.command()
def compare(
    ctx: typer.Context,
    left: Path = typer.Argument(..., help="Series JSON file (left side)."),
    right: Path = typer.Argument(..., help="Series JSON file (right side)."),
    json_output: bool = typer.Option(False, "--json", help="Emit the report as JSON."),
):
    """Compare two saved expansions (as written by `expand --json`) term by term."""
    settings = _settings(ctx)
    with cli_errors():
        f, g = _read_series(left), _read_series(right)
        report = compare_series("saved-series", f, g, {"left": left.name, "right": right.name},
                                left_name=left.name, right_name=right.name)
    typer.echo(render_report(report, as_json=json_output or settings.json_output).rstrip("\n"))
    raise typer.Exit(code=report.exit_code)


@app.command("vpv-points")
def vpv_points(
    region: str = typer.Option(..., "--region", help=", ".join(vpv.REGION_KINDS)),
    bounds: str = typer.Option(..., "--bounds", help="Comma-separated coordinate bounds."),
):
    """List visible point vectors of a region as a JSON array."""
    with cli_errors():
        box = parse_ints(bounds, "--bounds")
        points = vpv.visible_points(vpv.Region(region, len(box)), box)
    typer.echo(json.dumps([list(v) for v in points], separators=(",", ":")))


def _emit_count(payload: dict, as_json: bool):
    if as_json:
        typer.echo(json.dumps(payload, sort_keys=True, separators=(",", ":")))
    else:
        typer.echo(" ".join(f"{key}={value}" for key, value in payload.items() if value is not None))


@partitions_app.command("vector")
def partitions_vector(
    target: str = typer.Option(..., "--target", help="J,K"),
    mode: str = typer.Option(oracle.UNRESTRICTED, "--mode", help="unrestricted or distinct"),
    json_output: bool = typer.Option(False, "--json"),
):
    """Count vector partitions of a target by exhaustive search."""
    with cli_errors():
        vector = parse_ints(target, "--target")
        count = oracle.count_vector_partitions(vector, mode)
    _emit_count({"target": list(vector), "mode": mode, "count": count}, json_output)


@partitions_app.command("plane")
def partitions_plane(
    n: int = typer.Option(..., "--n"),
    rows: Optional[int] = typer.Option(None, "--rows"),
    trace: Optional[int] = typer.Option(None, "--trace"),
    json_output: bool = typer.Option(False, "--json"),
):
    """Count plane partitions of n, optionally by row bound and trace."""
    with cli_errors():
        if n < 0:
            raise UsageError(f"--n must be non-negative, got {n}")
        count = oracle.count_plane_partitions(n, rows=rows, trace_value=trace)
    _emit_count({"n": n, "rows": rows, "trace": trace, "count": count}, json_output)


@partitions_app.command("integer")
def partitions_integer(
    n: int = typer.Option(..., "--n"),
    json_output: bool = typer.Option(False, "--json"),
):
    """Count integer partitions of n."""
    with cli_errors():
        count = oracle.count_integer_partitions(n)
    _emit_count({"n": n, "count": count}, json_output)


@partitions_app.command("count-b")
def partitions_count_b(
    j: int = typer.Option(..., "--j"),
    k: int = typer.Option(..., "--k"),
    json_output: bool = typer.Option(False, "--json"),
):
    """B(j,k) by both partition modes and by coefficient extraction."""
    with cli_errors():
        distinct, unrestricted = binpart.count_B(j, k)
        f = binpart.lhs_expand(binpart.BinPartSpec(q_cap=max(j, 1), t_cap=max(k, 1)))
        c = coeff(f, {"q": j, "t": k})
    _emit_count({"j": j, "k": k, "distinct": distinct, "unrestricted": unrestricted,
                 "coefficient": int(c)}, json_output)


if __name__ == "__main__":
    app()
