"""Command line: ``classify``, ``check``, ``tables``, ``bch`` and ``oracle``.

Exit codes: 0 success or empty diff, 1 nonempty diff or failed check,
2 input error, 3 resource guard or truncated run.
"""
from __future__ import annotations

import json
import re
import sys
from fractions import Fraction
from pathlib import Path
from typing import List, Optional, Sequence, Tuple

import click

from .errors import InputError, ResourceGuardError

FAMILIES = "ABCDEFG"


class _Exit(Exception):
    def __init__(self, code: int):
        self.code = code


def _families(text: str) -> List[str]:
    if text.strip().lower() == "all":
        return list(FAMILIES)
    out = [x.strip().upper() for x in text.split(",") if x.strip()]
    bad = [x for x in out if x not in FAMILIES]
    if bad:
        raise InputError(f"unknown families {bad}; choose from {','.join(FAMILIES)} or 'all'")
    return out


def _ints(text: str) -> Tuple[int, ...]:
    try:
        return tuple(int(x) for x in text.replace("{", "").replace("}", "").split(",") if x.strip())
    except ValueError as exc:
        raise InputError(f"expected comma-separated integers, got {text!r}") from exc


def _pairs(text: str) -> List[Tuple[str, str]]:
    toks = [x.strip() for x in re.sub(r"[()a]", "", text).split(",") if x.strip()]
    if not toks or len(toks) % 2:
        raise InputError(f"--mu needs pairs p,q[,p,q...], got {text!r}")
    for t in toks:
        if not re.fullmatch(r"\d+'?", t):
            raise InputError(f"bad node {t!r} in --mu")
    return [(toks[i], toks[i + 1]) for i in range(0, len(toks), 2)]


def _grading(tag: str):
    from .algebras import resolve_type
    from .lie_core import build_root_system
    from .parabolic import build_grading
    m = re.fullmatch(r"\s*([^:]+):([\d,\s{}]+)\s*", tag)
    if not m:
        raise InputError(f"grading must look like A3:1,2, got {tag!r}")
    t, _ = resolve_type(m.group(1))
    return build_grading(build_root_system(t), _ints(m.group(2)))


@click.group()
def cli() -> None:
    """Rigidity of parabolic geometries: regenerate and check the classification tables."""


# ------------------------------------------------------------------ classify
@cli.command()
@click.option("--family", default="all", show_default=True, help="Comma-separated families or 'all'.")
@click.option("--max-rank", type=int, default=4, show_default=True)
@click.option("--form", type=click.Choice(["complex", "all"]), default="complex", show_default=True)
@click.option("--out", type=click.Path(dir_okay=False), default=None, help="Output file (default stdout).")
@click.option("--format", "fmt", type=click.Choice(["json", "csv", "latex"]), default="json", show_default=True)
@click.option("--allow-large", is_flag=True, help="Lift the rank guard.")
@click.option("--time-budget", type=float, default=None, help="Stop after this many seconds (truncated output).")
@click.option("--workers", type=int, default=None, help="Worker processes (default from the environment).")
def classify(family, max_rank, form, out, fmt, allow_large, time_budget, workers):
    """Enumerate every fixable triple and export the records."""
    from .classify import classify_all, export
    run = classify_all(_families(family), max_rank, form=form, workers=workers,
                       allow_large=allow_large, time_budget=time_budget)
    doc = export(run.records, fmt, truncated=run.truncated, params=run.params)
    _emit(doc, out)
    click.echo(f"{len(run.records)} records" + (" (truncated)" if run.truncated else ""), err=True)
    if run.truncated:
        raise _Exit(3)


def _emit(doc: str, out: Optional[str]) -> None:
    if out:
        Path(out).write_text(doc)
    else:
        click.echo(doc, nl=False)


# ------------------------------------------------------------------ check
@cli.command()
@click.option("--algebra", required=True, help="Type (A3) or table-style tag (sl(4,R), sp(4,C), su(2,2)).")
@click.option("--sigma", required=True, help="Crossed nodes, e.g. 1,2.")
@click.option("--mu", required=True, help="Component labels p,q[,p,q...]; primes allowed for complex forms.")
@click.option("--expect-pr", default=None, help="Fail (exit 1) unless the PR condition renders to this text.")
@click.option("--json", "as_json", is_flag=True, help="Print the record as JSON.")
def check(algebra, sigma, mu, expect_pr, as_json):
    """Run the full pipeline on one triple."""
    rec = check_record(algebra, _ints(sigma), _pairs(mu))
    if as_json:
        click.echo(json.dumps(rec.to_dict(), indent=1, sort_keys=True))
    else:
        click.echo(describe(rec))
    if expect_pr is not None and _norm(expect_pr) not in (_norm(rec.pr.text), _norm(rec.pr_domain)):
        click.echo(f"expected PR {expect_pr!r}, got {rec.pr.text!r}", err=True)
        raise _Exit(1)


def _norm(s: str) -> str:
    return s.replace(" ", "")


def check_record(algebra: str, sigma: Sequence[int], mu: Sequence[Tuple[str, str]]):
    """Record for one triple; primed labels or a real-form tag go through the real-form layer."""
    from .algebras import resolve_type
    from .classify import check_triple
    from .realform import apply_real_form, real_form
    primed = any("'" in x for lab in mu for x in lab)
    plain = [(int(a.rstrip("'")), int(b.rstrip("'"))) for a, b in mu]
    if re.fullmatch(r"[A-Ga-g]\d+", algebra.strip()):
        if primed:
            raise InputError("primed labels need a complex form tag such as sl(3,C)")
        return check_triple(algebra, sigma, plain)
    rf = real_form(algebra)
    if rf.is_complex and primed:
        from .classify import TripleRecord
        t = resolve_type(algebra)[0]
        labels = tuple(f"(a{a},a{b})" for a, b in mu)
        stub = TripleRecord(t.label, "complex", tuple(sorted(sigma)), labels, None, None, None)
        return apply_real_form(stub, rf.tag)
    if primed:
        raise InputError(f"primed labels need a complex form, not {algebra}")
    if rf.is_complex:
        return check_triple(rf.type.label, sigma, plain)
    # external forms are computed on the complexification, crossed at the arrow closure
    rec = check_triple(rf.type.label, sigma if rf.is_split else rf.complex_sigma(sigma), plain)
    return apply_real_form(rec, rf.tag)


def describe(rec) -> str:
    from .center_sym import prettify
    lines = [f"{rec.form} ({rec.algebra}) sigma={{{','.join(map(str, rec.sigma))}}} mu={' '.join(rec.mu)}",
             f"  fix:   {prettify(rec.fix.text)}",
             f"  PR:    {prettify(rec.pr.text)}",
             f"  shape: {rec.shape}"]
    if rec.domain:
        lines.append(f"  domain: {' | '.join(rec.domain)}" + (f"   PR: {rec.pr_domain}" if rec.pr_domain else ""))
    return "\n".join(lines)


# ------------------------------------------------------------------ tables
@cli.group()
def tables() -> None:
    """Ground-truth tables: diff, real-form check, listing."""


@tables.command("diff")
@click.option("--run", "run_path", type=click.Path(exists=True, dir_okay=False), default=None,
              help="JSON export of a classify run.")
@click.option("--regen", is_flag=True, help="Regenerate records instead of reading a run.")
@click.option("--max-rank", type=int, default=6, show_default=True)
@click.option("--verbose", "-v", is_flag=True, help="List matched and shadowed instances too.")
def tables_diff(run_path, regen, max_rank, verbose):
    """Three-way diff of complex records against the tables; exit 1 unless empty."""
    from .classify import classify_all, load_run
    from .tables import diff_tables
    if bool(run_path) == bool(regen):
        raise InputError("give exactly one of --run PATH or --regen")
    if regen:
        records = classify_all(list(FAMILIES), max_rank).records
    else:
        run = load_run(Path(run_path).read_text())
        records = run.records
        max_rank = min(max_rank, run.params.get("max_rank", max_rank))
    rep = diff_tables(records, max_rank=max_rank)
    click.echo(rep.render(verbose=verbose))
    if not rep.clean:
        raise _Exit(1)


@tables.command("real")
@click.option("--max-rank", type=int, default=6, show_default=True)
def tables_real(max_rank):
    """Check the real-form rows; exit 1 on any failure."""
    from .realform import check_real_rows
    rep = check_real_rows(max_rank)
    click.echo(rep.render())
    if rep.failures():
        raise _Exit(1)


@tables.command("show")
@click.argument("table", type=int)
def tables_show(table):
    """Print a shipped table verbatim."""
    from .tables import raw_table_text
    click.echo(raw_table_text(table), nl=False)


# ------------------------------------------------------------------ bch
@cli.group()
def bch() -> None:
    """Symmetry defects and their invariantization."""


def _value(v):
    from .center_sym import ExactValue
    if isinstance(v, dict):
        return ExactValue(Fraction(str(v.get("phase", 0))), Fraction(str(v.get("modulus", 1))))
    f = Fraction(str(v))
    if f == 0:
        raise InputError("eigenvalues must be nonzero")
    return ExactValue(Fraction(1, 2) if f < 0 else Fraction(0), abs(f))


def _element(pg, data, dom):
    from .bch import PPlusElement
    coeffs = {}
    for item in data:
        root = tuple(int(x) for x in item["root"])
        coeffs[root] = Fraction(str(item.get("coeff", 1)))
    return PPlusElement.make(pg, coeffs, dom)


def _dump(x) -> list:
    return [{"root": list(r), "coeff": str(x.dom.to_sympy(c))} for r, c in sorted(x.coeffs.items())]


@bch.command("eval")
@click.option("--grading", required=True, help="Type and crossed nodes, e.g. A3:1,2.")
@click.option("--op", type=click.Choice(["defect", "invariantize"]), required=True)
@click.option("--input", "input_path", type=click.Path(exists=True, dir_okay=False), required=True,
              help='JSON: {"s": [...], "y": [{"root": [...], "coeff": "1/2"}, ...]}.')
def bch_eval(grading, op, input_path):
    """Symmetry defect C(-Ad(s)^-1 Y, Y), or the corrections that clear a defect."""
    from .bch import apply_sequence, invariantize, scalar_domain, symmetry_defect, NoInvariantNormalization
    from .center_sym import CenterElement
    pg = _grading(grading)
    try:
        data = json.loads(Path(input_path).read_text())
    except json.JSONDecodeError as exc:
        raise InputError(f"{input_path}: {exc}") from exc
    s = CenterElement(pg.sigma, tuple(_value(v) for v in data["s"]))
    dom = scalar_domain(s)
    if op == "defect":
        y = _element(pg, data["y"], dom)
        click.echo(json.dumps({"defect": _dump(symmetry_defect(pg, y, s))}, indent=1))
        return
    defect = _element(pg, data.get("defect", data.get("y", [])), dom)
    try:
        steps = invariantize(pg, defect, s)
    except NoInvariantNormalization as exc:
        click.echo(json.dumps({"error": str(exc)}), err=True)
        raise _Exit(1)
    final = apply_sequence(pg, defect.to(steps[0].dom) if steps else defect, steps, s)
    click.echo(json.dumps({"steps": [_dump(u) for u in steps], "final_zero": final.is_zero()}, indent=1))
    if not final.is_zero():
        raise _Exit(1)


# ------------------------------------------------------------------ oracle
@cli.group()
def oracle() -> None:
    """Independent brute-force checks."""


@oracle.command("h2")
@click.option("--algebra", required=True)
@click.option("--sigma", required=True)
@click.option("--max-rank", type=int, default=3, show_default=True)
def oracle_h2(algebra, sigma, max_rank):
    """Compare Kostant's H^2 lowest weights with direct cohomology; exit 1 on mismatch."""
    from .algebras import resolve_type
    from .kostant import brute_force_h2, kostant_lowest_weights
    from .lie_core import build_root_system
    from .parabolic import build_grading
    t, _ = resolve_type(algebra)
    pg = build_grading(build_root_system(t), _ints(sigma))
    want = kostant_lowest_weights(pg)
    got = brute_force_h2(pg, max_rank=max_rank)
    for w in sorted(set(want) | set(got)):
        mark = "" if want.get(w, 0) == got.get(w, 0) else "   MISMATCH"
        click.echo(f"{tuple(str(x) for x in w)}  kostant={want.get(w, 0)} direct={got.get(w, 0)}{mark}")
    if want != got:
        raise _Exit(1)


def main(argv: Optional[Sequence[str]] = None) -> int:
    try:
        cli.main(args=list(argv) if argv is not None else None, standalone_mode=False)
    except _Exit as e:
        return e.code
    except click.exceptions.Exit as e:
        return e.exit_code
    except click.Abort:
        return 2
    except click.ClickException as e:
        e.show()
        return 2
    except ResourceGuardError as e:
        click.echo(f"error: {e}", err=True)
        return 3
    except (InputError, KeyError, ValueError) as e:
        click.echo(f"error: {e}", err=True)
        return 2
    return 0


if __name__ == "__main__":
    sys.exit(main())
