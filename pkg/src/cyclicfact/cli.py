"""Command-line front end.

Exit codes: 0 all comparisons agree, 1 verification failure, 2 parse error,
3 capacity exceeded, 4 I/O error.
"""

from __future__ import annotations

import csv
import io
import json
import os
import re
import sys
from dataclasses import asdict, dataclass, field
from fractions import Fraction

import click

from . import verify as V
from .counting import GroupAnalysis, cf2_bruteforce
from .errors import CapacityError, SpecParseError, ValidationError
from .families import GroupSpec, build, parse_spec
from .formulas import formula_for
from .group import DEFAULT_MAX_ORDER
from .lattice import dumps_lattice, enumerate_subgroups, mobius

EXIT_OK, EXIT_FAIL, EXIT_PARSE, EXIT_CAPACITY, EXIT_IO = 0, 1, 2, 3, 4

QUANTITIES = ("cf2", "f2", "sd", "csd")
METHODS = ("bruteforce", "mobius", "formula")
CSV_COLUMNS = ("spec", "order", "cf2_bf", "cf2_mob", "cf2_formula", "f2", "sd", "csd", "status")


@dataclass
class OutputRecord:
    spec: str
    order: int
    cf2_bruteforce: int | None = None
    cf2_mobius: int | None = None
    cf2_formula: int | None = None
    f2: int | None = None
    f2_mobius: int | None = None
    sd: str | None = None
    sd_identity: str | None = None
    csd: str | None = None
    csd_identity: str | None = None
    match_flags: dict[str, bool] = field(default_factory=dict)
    status: str = "OK"
    note: str = ""

    def finish(self) -> "OutputRecord":
        if not all(self.match_flags.values()):
            self.status = "FAILED"
        return self

    def csv_row(self) -> list[str]:
        values = {
            "spec": self.spec, "order": self.order, "cf2_bf": self.cf2_bruteforce,
            "cf2_mob": self.cf2_mobius, "cf2_formula": self.cf2_formula, "f2": self.f2,
            "sd": self.sd, "csd": self.csd, "status": self.status,
        }
        return ["" if values[c] is None else str(values[c]) for c in CSV_COLUMNS]


def _frac(x: Fraction) -> str:
    return str(x)


def compute_record(spec: GroupSpec, quantities: tuple[str, ...], methods: tuple[str, ...],
                   max_order: int = DEFAULT_MAX_ORDER) -> OutputRecord:
    g = build(spec, max_order=max_order)
    rec = OutputRecord(str(spec), g.order)
    needs_lattice = "mobius" in methods or any(q != "cf2" for q in quantities)
    a = GroupAnalysis(g) if needs_lattice else None
    if "cf2" in quantities:
        if "bruteforce" in methods:
            rec.cf2_bruteforce = a.cf2 if a else cf2_bruteforce(g)
        if "mobius" in methods:
            rec.cf2_mobius = a.cf2_mobius()
        if "formula" in methods:
            fr = formula_for(spec)
            if fr is None:
                rec.note = f"no closed formula for {spec}"
            else:
                rec.cf2_formula = fr.value
        present = [v for v in (rec.cf2_bruteforce, rec.cf2_mobius, rec.cf2_formula) if v is not None]
        if len(present) > 1:
            rec.match_flags["cf2"] = len(set(present)) == 1
    if "f2" in quantities:
        rec.f2 = a.f2
        if "mobius" in methods:
            rec.f2_mobius = a.f2_mobius()
            rec.match_flags["f2"] = rec.f2 == rec.f2_mobius
    if "sd" in quantities:
        rec.sd = _frac(a.sd)
        if "mobius" in methods:
            ident = a.sd_from_subgroup_f2()
            rec.sd_identity = _frac(ident)
            rec.match_flags["sd"] = a.sd == ident
    if "csd" in quantities:
        rec.csd = _frac(a.csd)
        if "mobius" in methods:
            ident = a.csd_from_subgroup_cf2()
            rec.csd_identity = _frac(ident)
            rec.match_flags["csd"] = a.csd == ident
    return rec.finish()


def _compute_star(args) -> OutputRecord:
    return compute_record(*args)


def render(records: list[OutputRecord], fmt: str, header: bool) -> str:
    if fmt == "json":
        payload = [asdict(r) for r in records]
        return json.dumps(payload if len(payload) != 1 else payload[0], indent=2) + "\n"
    if fmt == "csv":
        buf = io.StringIO()
        w = csv.writer(buf, lineterminator="\n")
        if header:
            w.writerow(CSV_COLUMNS)
        for r in records:
            w.writerow(r.csv_row())
        return buf.getvalue()
    rows = [r.csv_row() for r in records]
    if header:
        rows.insert(0, list(CSV_COLUMNS))
    widths = [max(len(row[i]) for row in rows) for i in range(len(CSV_COLUMNS))] if rows else []
    lines = ["  ".join(cell.ljust(w) for cell, w in zip(row, widths)).rstrip() for row in rows]
    notes = [f"# {r.spec}: {r.note}" for r in records if r.note]
    return "\n".join(lines + notes) + "\n"


def _split(value: str, allowed: tuple[str, ...], what: str) -> tuple[str, ...]:
    items = tuple(v for v in value.split(",") if v)
    if items == ("all",):
        return allowed
    bad = [v for v in items if v not in allowed]
    if bad or not items:
        raise click.BadParameter(f"{what} must be a comma list from {', '.join(allowed)} (or 'all')")
    return tuple(v for v in allowed if v in items)


def _fail(message: str, code: int) -> None:
    click.echo(f"error: {message}", err=True)
    sys.exit(code)


def _run_guarded(fn):
    try:
        return fn()
    except SpecParseError as exc:
        _fail(str(exc), EXIT_PARSE)
    except CapacityError as exc:
        _fail(str(exc), EXIT_CAPACITY)
    except ValidationError as exc:
        _fail(str(exc), EXIT_PARSE)


def _jobs(value: int | None) -> int:
    return value if value else (os.cpu_count() or 1)


jobs_option = click.option("--jobs", type=int, default=None,
                           help="Worker processes; defaults to the CPU count. Results do not depend on it.")
format_option = click.option("--format", "fmt", type=click.Choice(["text", "csv", "json"]), default="text",
                             show_default=True)
header_option = click.option("--no-header", is_flag=True, help="Omit the column header line.")
max_order_option = click.option("--max-order", type=int, default=DEFAULT_MAX_ORDER, show_default=True,
                                help="Largest group order that may be built.")


@click.group()
def main():
    """Exact cyclic factorization numbers and related invariants of finite groups."""


@main.command()
@click.argument("spec")
@click.option("--quantities", "-q", "--q", default="cf2,f2,sd,csd", show_default=True,
              help="Comma list from cf2, f2, sd, csd.")
@click.option("--methods", "-m", "--m", default="bruteforce", show_default=True,
              help="Comma list from bruteforce, mobius, formula, or 'all'.")
@format_option
@header_option
@jobs_option
@max_order_option
def compute(spec, quantities, methods, fmt, no_header, jobs, max_order):
    """Compute invariants of the group named by SPEC (e.g. dihedral:10)."""
    q = _split(quantities, QUANTITIES, "--quantities")
    m = _split(methods, METHODS, "--methods")
    rec = _run_guarded(lambda: compute_record(parse_spec(spec), q, m, max_order))
    click.echo(render([rec], fmt, not no_header), nl=False)
    sys.exit(EXIT_OK if rec.status == "OK" else EXIT_FAIL)


_TABLE_FAMILY = re.compile(r"^(cyclic|dihedral|quaternion|semidihedral|dicyclic|symmetric|alternating"
                           r"|modular(\d+)|gendicyclic-(ahalf|b|ahalfb))$")
_RANGE = re.compile(r"^(\d+)\.\.(\d+)$")


def table_specs(family: str, lo: int, hi: int) -> list[GroupSpec]:
    m = _TABLE_FAMILY.match(family)
    if not m:
        raise SpecParseError(family, 0, "a table family (cyclic, dihedral, quaternion, semidihedral, "
                                        "modular<p>, dicyclic, gendicyclic-<ahalf|b|ahalfb>, symmetric, alternating)")
    if m.group(2):
        return [parse_spec(f"modular:{m.group(2)},{n}") for n in range(lo, hi + 1)]
    if m.group(3):
        # ahalf and ahalfb only exist for even n
        step_ok = (lambda n: n % 2 == 0) if m.group(3) != "b" else (lambda n: True)
        return [parse_spec(f"gendicyclic:{n},{m.group(3)}") for n in range(lo, hi + 1) if step_ok(n)]
    return [parse_spec(f"{family}:{n}") for n in range(lo, hi + 1)]


@main.command()
@click.argument("family")
@click.argument("range_", metavar="RANGE")
@click.option("--quantities", "-q", "--q", default="cf2", show_default=True)
@click.option("--methods", "-m", "--m", default="bruteforce,formula", show_default=True)
@format_option
@header_option
@jobs_option
@max_order_option
def table(family, range_, quantities, methods, fmt, no_header, jobs, max_order):
    """One row per parameter value, e.g. `table dihedral 3..10`."""
    q = _split(quantities, QUANTITIES, "--quantities")
    m = _split(methods, METHODS, "--methods")
    r = _RANGE.match(range_)
    if not r:
        _fail(f"range {range_!r} must look like LO..HI", EXIT_PARSE)
    lo, hi = int(r.group(1)), int(r.group(2))

    def work():
        specs = table_specs(family, lo, hi)
        return V._pmap(_compute_star, [(s, q, m, max_order) for s in specs], _jobs(jobs))

    records = _run_guarded(work)
    click.echo(render(records, fmt, not no_header), nl=False)
    sys.exit(EXIT_OK if all(r.status == "OK" for r in records) else EXIT_FAIL)


@main.command(name="verify")
@click.option("--scope", default="all", show_default=True,
              help="'all', 'identities', or a comma list of: " + ", ".join(V.SCOPES))
@click.option("--budget", type=int, default=V.DEFAULT_BUDGET, show_default=True,
              help="Skip sweep members above this group order.")
@jobs_option
def verify_cmd(scope, budget, jobs):
    """Run the formula-versus-enumeration sweeps and identity checks."""
    scopes = [s for s in scope.split(",") if s]
    try:
        results = V.run(scopes, budget=budget, jobs=_jobs(jobs))
    except ValueError as exc:
        _fail(str(exc), EXIT_PARSE)
    for r in results:
        click.echo(r.line())
    passed = sum(r.passed for r in results)
    overall = "PASS" if passed == len(results) else "FAIL"
    click.echo(f"{overall}: {passed}/{len(results)} checks passed (budget {budget})")
    sys.exit(EXIT_OK if overall == "PASS" else EXIT_FAIL)


@main.command(name="dump-lattice")
@click.argument("spec")
@click.argument("path", type=click.Path(dir_okay=False))
@max_order_option
def dump_lattice_cmd(spec, path, max_order):
    """Write the subgroup lattice and Möbius table of SPEC to PATH as JSON."""

    def work():
        g = build(parse_spec(spec), max_order=max_order)
        lat = enumerate_subgroups(g)
        return lat, mobius(lat)

    lat, mob = _run_guarded(work)
    text = dumps_lattice(lat, mob)
    try:
        with open(path, "w", encoding="utf-8") as fh:
            fh.write(text)
    except OSError as exc:
        _fail(f"cannot write {path}: {exc}", EXIT_IO)
    click.echo(f"{lat.group.name}: {len(lat)} subgroups, {len(lat.cyclic_indices)} cyclic, "
               f"mu(1, G) = {mob(0, lat.top)} -> {path}")


if __name__ == "__main__":
    main()
