"""Command-line front end: single coefficients, tables, verification, benchmarks.

Exit codes are uniform across subcommands: 0 success, 1 input error
(including malformed quantum numbers and unwritable paths), 2 verification
or cross-route agreement failure.  Data output is deterministic; benchmark
timing is isolated in clearly labelled fields.
"""

from __future__ import annotations

import json
import sys
import time

import click

from .formulas import (
    CouplingSpec,
    MalformedCouplingError,
    cg_alternative,
    cg_racah,
)
from .ladder import CoefficientRecord, TableRoute, build_full_table, cg_ladder
from .numerics import HalfInt, RadicalSum, to_decimal
from .verification import CHECKS, run_checks

__all__ = [
    "cli",
    "main",
    "parse_table_csv",
    "parse_table_json",
    "records_to_csv",
    "records_to_json",
    "records_to_pretty",
]

CSV_HEADER = "J,M,m1,m2,exact,value"

_COEFF_ROUTES = {
    "alternative": cg_alternative,
    "racah": cg_racah,
    "ladder": cg_ladder,
}

_BENCH_ROUTES = (
    TableRoute.CLOSED_FORM,
    TableRoute.RACAH,
    TableRoute.LADDER_ITERATIVE,
)


def _halfint(label: str, text: str) -> HalfInt:
    """Parse a CLI half-integer ('2', '3/2', '1.5', '-1/2') or exit 1."""
    try:
        return HalfInt(text)
    except ValueError:
        click.echo(f"error: invalid half-integer for {label}: {text!r}", err=True)
        sys.exit(1)


def _write_output(text: str, out: str | None) -> None:
    if out is None:
        click.echo(text, nl=False)
        return
    try:
        with open(out, "w", encoding="utf-8", newline="") as handle:
            handle.write(text)
    except OSError as exc:
        click.echo(f"error: cannot write {out!r}: {exc}", err=True)
        sys.exit(1)


# ---------------------------------------------------------------------------
# Table rendering and parsing
# ---------------------------------------------------------------------------


def records_to_csv(records: list[CoefficientRecord]) -> str:
    lines = [CSV_HEADER]
    for r in records:
        lines.append(f"{r.J},{r.M},{r.m1},{r.m2},{r.exact_text},{r.value_text}")
    return "\n".join(lines) + "\n"


def records_to_json(records: list[CoefficientRecord]) -> str:
    rows = [
        {
            "J": str(r.J),
            "M": str(r.M),
            "m1": str(r.m1),
            "m2": str(r.m2),
            "exact": r.exact_text,
            "value": r.value_text,
        }
        for r in records
    ]
    return json.dumps(rows, indent=2) + "\n"


def records_to_pretty(records: list[CoefficientRecord]) -> str:
    header = ("J", "M", "m1", "m2", "exact", "value")
    rows = [
        (str(r.J), str(r.M), str(r.m1), str(r.m2), r.exact_text, r.value_text)
        for r in records
    ]
    widths = [
        max(len(header[i]), *(len(row[i]) for row in rows)) if rows else len(header[i])
        for i in range(6)
    ]
    lines = []
    for row in [header, *rows]:
        cells = [row[i].rjust(widths[i]) for i in range(4)]
        cells.append(row[4].ljust(widths[4]))
        cells.append(row[5].rjust(widths[5]))
        lines.append("  ".join(cells).rstrip())
    return "\n".join(lines) + "\n"


def _record_from_strings(J, M, m1, m2, exact) -> CoefficientRecord:
    return CoefficientRecord(
        HalfInt(J), HalfInt(M), HalfInt(m1), HalfInt(m2), RadicalSum.parse(exact)
    )


def parse_table_csv(text: str) -> list[CoefficientRecord]:
    """Inverse of records_to_csv (value column is re-derived from exact)."""
    lines = text.strip("\n").split("\n")
    if not lines or lines[0] != CSV_HEADER:
        raise ValueError(f"missing csv header {CSV_HEADER!r}")
    records = []
    for line in lines[1:]:
        J, M, m1, m2, exact, _value = line.split(",")
        records.append(_record_from_strings(J, M, m1, m2, exact))
    return records


def parse_table_json(text: str) -> list[CoefficientRecord]:
    """Inverse of records_to_json."""
    return [
        _record_from_strings(row["J"], row["M"], row["m1"], row["m2"], row["exact"])
        for row in json.loads(text)
    ]


_FORMATTERS = {
    "pretty": records_to_pretty,
    "csv": records_to_csv,
    "json": records_to_json,
}


# ---------------------------------------------------------------------------
# Commands
# ---------------------------------------------------------------------------


@click.group()
@click.version_option(package_name="cgexact", prog_name="cgexact")
def cli() -> None:
    """Exact Clebsch-Gordan coefficients, cross-checked three ways.

    All values are exact radicals; decimals are correctly rounded
    renderings at five places.
    """


@cli.command()
@click.option("--j1", required=True, help="First angular momentum j1.")
@click.option("--j2", required=True, help="Second angular momentum j2.")
@click.option("--m1", required=True, help="Projection m1.")
@click.option("--m2", required=True, help="Projection m2.")
@click.option("--J", "big_j", required=True, help="Total angular momentum J.")
@click.option("--M", "big_m", required=True, help="Total projection M.")
@click.option(
    "--formula",
    type=click.Choice(["alternative", "racah", "ladder", "both"]),
    default="alternative",
    show_default=True,
    help="Computation route; 'both' compares every route.",
)
def coeff(j1, j2, m1, m2, big_j, big_m, formula) -> None:
    """Print one coefficient as an exact radical and a 5-place decimal."""
    spec = CouplingSpec(
        _halfint("--j1", j1),
        _halfint("--j2", j2),
        _halfint("--m1", m1),
        _halfint("--m2", m2),
        _halfint("--J", big_j),
        _halfint("--M", big_m),
    )
    routes = _COEFF_ROUTES if formula == "both" else {formula: _COEFF_ROUTES[formula]}
    values = {}
    for name, compute in routes.items():
        try:
            values[name] = compute(spec)
        except MalformedCouplingError as exc:
            click.echo(f"error: {exc}", err=True)
            sys.exit(1)
    if formula != "both":
        value = values[formula]
        click.echo(f"{value} = {to_decimal(value, 5)}")
        return
    width = max(len(name) for name in values)
    for name, value in values.items():
        click.echo(f"{name.ljust(width)}  {value} = {to_decimal(value, 5)}")
    if len(set(values.values())) == 1:
        click.echo("AGREE")
    else:
        click.echo("DISAGREE")
        sys.exit(2)


@cli.command()
@click.option("--j1", required=True, help="First angular momentum j1.")
@click.option("--j2", required=True, help="Second angular momentum j2.")
@click.option("--J", "big_j", default=None, help="Only rows with this J.")
@click.option(
    "--route",
    type=click.Choice([route.value for route in TableRoute]),
    default=TableRoute.CLOSED_FORM.value,
    show_default=True,
    help="Table construction route.",
)
@click.option(
    "--format",
    "fmt",
    type=click.Choice(["pretty", "csv", "json"]),
    default="pretty",
    show_default=True,
)
@click.option("--out", default=None, help="Write to a file instead of stdout.")
def table(j1, j2, big_j, route, fmt, out) -> None:
    """Emit all nonzero coefficients for (j1, j2), sorted by (J, M, m1)."""
    records = build_full_table(
        _halfint("--j1", j1), _halfint("--j2", j2), TableRoute(route)
    )
    if big_j is not None:
        wanted = _halfint("--J", big_j)
        records = [r for r in records if r.J == wanted]
    _write_output(_FORMATTERS[fmt](records), out)


@cli.command()
@click.option(
    "--max-2j",
    "max_twice_j",
    type=int,
    default=6,
    show_default=True,
    help="Sweep bound on doubled angular momenta.",
)
@click.option(
    "--checks",
    "check_names",
    default=",".join(CHECKS),
    show_default=True,
    help="Comma-separated subset of checks to run.",
)
@click.option(
    "--jobs",
    type=int,
    default=1,
    show_default=True,
    help="Worker processes for the cell sweeps (results merge in cell order).",
)
@click.option(
    "--format",
    "fmt",
    type=click.Choice(["pretty", "json"]),
    default="pretty",
    show_default=True,
)
def verify(max_twice_j, check_names, jobs, fmt) -> None:
    """Run the exact cross-route verification suite; exit 2 on any failure."""
    if max_twice_j < 0 or jobs < 1:
        click.echo("error: --max-2j must be >= 0 and --jobs >= 1", err=True)
        sys.exit(1)
    names = [name.strip() for name in check_names.split(",") if name.strip()]
    unknown = [name for name in names if name not in CHECKS]
    if unknown:
        click.echo(
            f"error: unknown checks {', '.join(unknown)} "
            f"(available: {', '.join(CHECKS)})",
            err=True,
        )
        sys.exit(1)
    reports = run_checks(names, max_twice_j, jobs)
    if fmt == "json":
        click.echo(json.dumps([report.to_dict() for report in reports], indent=2))
    else:
        name_width = max(len(report.name) for report in reports)
        scope_width = max(len(report.scope) for report in reports)
        for report in reports:
            status = "PASS" if report.passed else "FAIL"
            click.echo(
                f"{report.name.ljust(name_width)}  {report.scope.ljust(scope_width)}"
                f"  {status}  {report.elapsed:8.3f}s"
            )
            if not report.passed:
                click.echo(f"  counterexample: {report.counterexample.description}")
                for label, value in report.counterexample.values.items():
                    click.echo(f"    {label}: {value}")
    if not all(report.passed for report in reports):
        sys.exit(2)


def _peak_bits(records: list[CoefficientRecord]) -> int:
    peak = 0
    for record in records:
        for kernel, coeff in record.exact.terms():
            peak = max(
                peak,
                coeff.numerator.bit_length(),
                coeff.denominator.bit_length(),
                kernel.bit_length(),
            )
    return peak


@cli.command()
@click.option(
    "--max-2j",
    "max_twice_j",
    type=int,
    default=8,
    show_default=True,
    help="Sweep bound on doubled angular momenta.",
)
@click.option("--reps", type=int, default=1, show_default=True)
@click.option(
    "--format",
    "fmt",
    type=click.Choice(["pretty", "json"]),
    default="pretty",
    show_default=True,
)
def bench(max_twice_j, reps, fmt) -> None:
    """Time full-table generation per route over the (j1, j2) sweep.

    Also asserts, inline, that every route reproduces the closed-form
    tables during the run (exit 2 if not).
    """
    if max_twice_j < 0 or reps < 1:
        click.echo("error: --max-2j must be >= 0 and --reps >= 1", err=True)
        sys.exit(1)
    cells = [
        (HalfInt.from_twice(tj1), HalfInt.from_twice(tj2))
        for tj1 in range(max_twice_j + 1)
        for tj2 in range(max_twice_j + 1)
    ]
    reference: list[list[CoefficientRecord]] | None = None
    results = []
    for route in _BENCH_ROUTES:
        runs = []
        peak = 0
        tables: list[list[CoefficientRecord]] = []
        for rep in range(reps):
            start = time.perf_counter()
            tables = [build_full_table(j1, j2, route) for j1, j2 in cells]
            elapsed = time.perf_counter() - start
            count = sum(len(t) for t in tables)
            runs.append(
                {
                    "seconds": elapsed,
                    "coefficients": count,
                    "per_second": count / elapsed if elapsed > 0 else float("inf"),
                }
            )
        peak = max((_peak_bits(t) for t in tables), default=0)
        if reference is None:
            reference = tables
        elif tables != reference:
            click.echo(
                f"error: route {route.value} disagrees with {_BENCH_ROUTES[0].value}",
                err=True,
            )
            sys.exit(2)
        results.append({"route": route.value, "runs": runs, "peak_integer_bits": peak})
    if fmt == "json":
        click.echo(
            json.dumps(
                {"max_2j": max_twice_j, "reps": reps, "routes": results}, indent=2
            )
        )
        return
    click.echo(f"sweep: all (j1, j2) with 2j <= {max_twice_j}, {reps} rep(s) per route")
    for result in results:
        for index, run in enumerate(result["runs"]):
            click.echo(
                f"{result['route']:>12}  rep {index + 1}  "
                f"{run['seconds']:9.3f}s  {run['coefficients']:7d} coefficients  "
                f"{run['per_second']:10.0f}/s  peak {result['peak_integer_bits']} bits"
            )
    click.echo("all routes produced identical tables")


def main(argv: list[str] | None = None) -> None:
    """Entry point enforcing the exit-code contract (usage errors exit 1)."""
    no_args_help = getattr(click.exceptions, "NoArgsIsHelpError", ())
    try:
        value = cli.main(args=argv, standalone_mode=False)
    except click.UsageError as exc:
        if no_args_help and isinstance(exc, no_args_help):
            click.echo(exc.format_message())
            raise SystemExit(0) from None
        click.echo(f"error: {exc.format_message()}", err=True)
        raise SystemExit(1) from None
    except click.ClickException as exc:
        exc.show()
        raise SystemExit(1) from None
    except click.exceptions.Abort:
        click.echo("aborted", err=True)
        raise SystemExit(1) from None
    raise SystemExit(value if isinstance(value, int) else 0)


if __name__ == "__main__":
    main()
