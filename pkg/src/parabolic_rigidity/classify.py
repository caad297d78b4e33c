"""Enumeration of triples (g, Sigma, mu), their verdicts, and export formats."""
from __future__ import annotations

import csv
import io
import json
import os
import time
from concurrent.futures import ProcessPoolExecutor
from dataclasses import dataclass, field, replace
from functools import lru_cache
from importlib import resources
from itertools import combinations
from typing import Dict, Iterable, List, Optional, Sequence, Tuple

from .algebras import resolve_type
from .center_sym import (EigenspaceShape, Shape, SolvedConstraints, classify_shape, rigidity_locus,
                         solve_constraints, ConstraintSet)
from .errors import InputError, ResourceGuardError
from .kostant import HarmonicComponent, harmonic_components
from .lattice import Lattice, intersect
from .lie_core import Family, SimpleType, build_root_system, diagram_automorphisms
from .notation import parse_condition
from .parabolic import ParabolicGrading, build_grading

SCHEMA_VERSION = 1
WORKERS_ENV = "PARABOLIC_RIGIDITY_WORKERS"
RANK_GUARD = 8

FLAT = "flat-per-paper"
MULTI = "multi-mu"

# types the classifier enumerates; C2 = B2 and D3 = A3 are not repeated
_MIN_RANK = {Family.A: 1, Family.B: 2, Family.C: 3, Family.D: 4, Family.E: 6, Family.F: 4, Family.G: 2}
_MAX_RANK = {Family.E: 8, Family.F: 4, Family.G: 2}


@dataclass(frozen=True)
class TripleRecord:
    algebra: str
    form: str
    sigma: Tuple[int, ...]
    mu: Tuple[str, ...]
    fix: SolvedConstraints
    pr: SolvedConstraints
    shape: EigenspaceShape
    flags: Tuple[str, ...] = ()
    piece: str = ""
    table_rows: Tuple[str, ...] = ()
    domain: Tuple[str, ...] = ()
    pr_domain: str = ""

    @property
    def key(self) -> tuple:
        t = SimpleType.parse(self.algebra)
        return (t.family.value, t.rank, self.form, self.sigma, self.mu, self.piece)

    def to_dict(self) -> dict:
        return {
            "algebra": self.algebra,
            "form": self.form,
            "sigma": list(self.sigma),
            "mu": list(self.mu),
            "fix": _solved_dict(self.fix),
            "pr": _solved_dict(self.pr),
            "shape": self.shape.shape.value,
            "sigma_prime": [list(s) for s in self.shape.sigma_prime],
            "flags": list(self.flags),
            "piece": self.piece,
            "table_rows": list(self.table_rows),
            "domain": list(self.domain),
            "pr_domain": self.pr_domain,
        }

    @classmethod
    def from_dict(cls, d: dict) -> "TripleRecord":
        sigma = tuple(d["sigma"])
        return cls(
            algebra=d["algebra"], form=d["form"], sigma=sigma, mu=tuple(d["mu"]),
            fix=_solved_from(sigma, d["fix"]), pr=_solved_from(sigma, d["pr"]),
            shape=EigenspaceShape(Shape(d["shape"]), tuple(tuple(s) for s in d["sigma_prime"])),
            flags=tuple(d.get("flags", ())), piece=d.get("piece", ""),
            table_rows=tuple(d.get("table_rows", ())), domain=tuple(d.get("domain", ())),
            pr_domain=d.get("pr_domain", ""),
        )


def _solved_dict(s: SolvedConstraints) -> dict:
    return {"text": s.text, "sigma": list(s.sigma), "lattice": [list(b) for b in s.lattice.basis],
            "torsion": list(s.torsion), "free_rank": s.free_rank, "qualifying": s.qualifying}


def _solved_from(sigma, d: dict) -> SolvedConstraints:
    # complex-as-real records are solved on the doubled Sigma
    sigma = tuple(d.get("sigma", sigma))
    solved = solve_constraints(ConstraintSet(sigma, Lattice.span(len(sigma), d["lattice"])))
    return replace(solved, text=d.get("text", solved.text))


# ------------------------------------------------------------------ flat data
@lru_cache(maxsize=None)
def flat_loci() -> Dict[Tuple[str, Tuple[int, ...], Tuple[int, int]], Tuple[str, ...]]:
    """Triples whose geometry is flat away from listed pieces (pieces may be empty)."""
    text = resources.files(__package__).joinpath("data/flat_loci.tsv").read_text()
    out = {}
    for line in text.splitlines():
        if not line or line.startswith("#"):
            continue
        t, sig, mu, pieces = (line.split("\t") + [""])[:4]
        sigma = tuple(int(x) for x in sig.strip("{}").split(","))
        p, q = (int(x) for x in mu.strip("()").replace("a", "").split(","))
        out[(t, sigma, (p, q))] = tuple(x.strip() for x in pieces.split(";") if x.strip())
    return out


def _flat_pieces(t: SimpleType, sigma: Tuple[int, ...], label: Tuple[int, int]) -> Optional[List[str]]:
    """Pieces for this triple, transporting data along diagram automorphisms."""
    import re
    for (tt, sig, lab), pieces in flat_loci().items():
        if tt != t.label:
            continue
        for perm in diagram_automorphisms(t):
            img = lambda i: perm[i - 1] + 1
            if tuple(sorted(img(i) for i in sig)) == sigma and (img(lab[0]), img(lab[1])) == label:
                return [re.sub(r"j(\d+)", lambda m: f"j{img(int(m.group(1)))}", p) for p in pieces]
    return None


# -------------------------------------------------------------- single triples
def _label(hc: HarmonicComponent) -> str:
    return hc.label_str


def _record(t: SimpleType, pg: ParabolicGrading, mu_set: Sequence[HarmonicComponent], form: str = "complex",
            flags: Tuple[str, ...] = ()) -> TripleRecord:
    loc = rigidity_locus(pg, mu_set)
    fix, pr = solve_constraints(loc.fix), solve_constraints(loc.pr)
    shape = classify_shape(pg, pr.lattice, mu_set)
    return TripleRecord(t.label, form, pg.sigma, tuple(_label(h) for h in mu_set), fix, pr, shape, flags)


def _piece_records(t: SimpleType, pg: ParabolicGrading, hc: HarmonicComponent, base: TripleRecord,
                   pieces: List[str]) -> List[TripleRecord]:
    out = [replace(base, flags=base.flags + (FLAT,), piece="flat")]
    for text in pieces:
        alts = [parse_condition(a) for a in text.split(" or ")]
        fix = intersect_all([base.fix.lattice + a.lattice(pg.sigma) for a in alts])
        prs = [base.pr.lattice + a.lattice(pg.sigma) for a in alts]
        shape = classify_shape(pg, prs, [hc])
        fix_s = solve_constraints(ConstraintSet(pg.sigma, fix))
        pr_s = solve_constraints(ConstraintSet(pg.sigma, intersect_all(prs)))
        if len(alts) > 1:
            # a union of loci: show each alternative rather than the hull
            fix_s = replace(fix_s, text=" or ".join(
                solve_constraints(ConstraintSet(pg.sigma, base.fix.lattice + a.lattice(pg.sigma))).text for a in alts))
            pr_s = replace(pr_s, text=" or ".join(
                solve_constraints(ConstraintSet(pg.sigma, l)).text for l in prs))
        out.append(replace(base, fix=fix_s, pr=pr_s, shape=shape, flags=base.flags + (FLAT,), piece=text))
    return out


def intersect_all(lats: Sequence[Lattice]) -> Lattice:
    out = lats[0]
    for l in lats[1:]:
        out = intersect(out, l)
    return out


def _pair_qualifies(pg: ParabolicGrading, a: HarmonicComponent, b: HarmonicComponent) -> bool:
    """Some s fixes both, neither alone is PR for it, and the pair is."""
    loc = rigidity_locus(pg, [a, b])
    m = loc.pr.lattice
    if m.is_full():
        return False
    for h in (a, b):
        if (rigidity_locus(pg, [h]).pr.lattice + loc.fix.lattice) <= m:
            return False
    return True


def records_for(type_label: str, sigma: Tuple[int, ...], pairs: bool = True) -> List[TripleRecord]:
    """All records of one (type, Sigma): fixable single components and qualifying pairs."""
    t = SimpleType.parse(type_label)
    pg = build_grading(build_root_system(t), sigma)
    singles = []
    out: List[TripleRecord] = []
    for hc in harmonic_components(pg):
        if rigidity_locus(pg, [hc]).fix.lattice.is_full():
            continue
        singles.append(hc)
        rec = _record(t, pg, [hc])
        pieces = _flat_pieces(t, pg.sigma, hc.label)
        if pieces is None:
            out.append(rec)
        else:
            out.extend(_piece_records(t, pg, hc, rec, pieces))
    if pairs:
        for a, b in combinations(singles, 2):
            if _pair_qualifies(pg, a, b):
                out.append(_record(t, pg, [a, b], flags=(MULTI,)))
    return out


def check_triple(algebra: str, sigma: Sequence[int], mu_set: Sequence[Tuple[int, int]]) -> TripleRecord:
    """Full pipeline for one triple; ``algebra`` is a type tag or a table-style name."""
    t, form = resolve_type(algebra)
    rs = build_root_system(t)
    sigma = tuple(sorted(int(x) for x in sigma))
    pg = build_grading(rs, sigma)
    comps = harmonic_components(pg, include_irregular=True)
    chosen = []
    for lab in mu_set:
        lab = tuple(int(x) for x in lab)
        hit = [h for h in comps if h.label == lab or h.label == lab[::-1] and _commuting(rs, lab)]
        if not hit:
            avail = ", ".join(h.label_str for h in comps)
            raise InputError(f"no component (a{lab[0]},a{lab[1]}) for {t} {set(sigma)}; available: {avail}")
        chosen.append(hit[0])
    if not chosen:
        raise InputError("mu_set must be non-empty")
    return _record(t, pg, chosen, form=form, flags=(MULTI,) if len(chosen) > 1 else ())


def _commuting(rs, lab) -> bool:
    return rs.cartan_matrix[lab[0] - 1][lab[1] - 1] == 0


# -------------------------------------------------------------- enumeration
def enumerated_types(families: Iterable[str], max_rank: int) -> List[SimpleType]:
    out = []
    for f in sorted({Family(x.upper()) for x in families}, key=lambda f: f.value):
        hi = min(max_rank, _MAX_RANK.get(f, max_rank))
        for r in range(_MIN_RANK[f], hi + 1):
            out.append(SimpleType(f, r))
    return out


def worker_count() -> int:
    env = os.environ.get(WORKERS_ENV)
    if env:
        try:
            n = int(env)
        except ValueError as exc:
            raise InputError(f"{WORKERS_ENV} must be an integer") from exc
        if n < 1:
            raise InputError(f"{WORKERS_ENV} must be positive")
        return n
    try:
        return len(os.sched_getaffinity(0))
    except AttributeError:
        return os.cpu_count() or 1


@dataclass
class RunResult:
    records: List[TripleRecord]
    truncated: bool = False
    params: dict = field(default_factory=dict)


def _task(args):
    kind, label, sigma = args
    if kind == "realified":
        from .realform import realified_records_for
        return realified_records_for(label, sigma)
    return records_for(label, sigma)


def classify_all(families: Iterable[str], max_rank: int, form: str = "complex", workers: Optional[int] = None,
                 allow_large: bool = False, time_budget: Optional[float] = None) -> RunResult:
    """Every fixable triple of the given families up to ``max_rank``, sorted.

    Ranks above the guard need ``allow_large``.  With ``time_budget`` the run
    stops after that many seconds and returns what it has, marked truncated.
    """
    families = list(families)
    if form not in ("complex", "all"):
        raise InputError(f"form must be 'complex' or 'all', not {form!r}")
    if max_rank > RANK_GUARD and not allow_large:
        raise ResourceGuardError(f"max rank {max_rank} exceeds the guard {RANK_GUARD}")
    kinds = ("complex", "realified") if form == "all" else ("complex",)
    tasks = [(kind, t.label, sig) for kind in kinds for t in enumerated_types(families, max_rank)
             for k in range(1, t.rank + 1) for sig in combinations(range(1, t.rank + 1), k)]
    workers = worker_count() if workers is None else workers
    start = time.monotonic()
    out: List[TripleRecord] = []
    truncated = False
    if workers <= 1 or len(tasks) < 2:
        for tk in tasks:
            if time_budget is not None and time.monotonic() - start > time_budget:
                truncated = True
                break
            out.extend(_task(tk))
    else:
        with ProcessPoolExecutor(max_workers=workers) as ex:
            futs = [ex.submit(_task, tk) for tk in tasks]
            for f in futs:
                left = None if time_budget is None else max(0.0, time_budget - (time.monotonic() - start))
                try:
                    out.extend(f.result(timeout=left))
                except TimeoutError:
                    truncated = True
                    for g in futs:
                        g.cancel()
                    break
    if form == "all":
        from .realform import split_views
        out.extend(split_views(out))
    out.sort(key=lambda r: r.key)
    params = {"families": sorted({f.upper() for f in families}), "max_rank": max_rank, "form": form}
    return RunResult(out, truncated, params)


# ------------------------------------------------------------------ export
def export(records: Sequence[TripleRecord], fmt: str, truncated: bool = False, params: Optional[dict] = None) -> str:
    if fmt == "json":
        doc = {"version": SCHEMA_VERSION, "truncated": truncated, "params": params or {},
               "count": len(records), "records": [r.to_dict() for r in records]}
        return json.dumps(doc, indent=1, sort_keys=True) + "\n"
    if fmt == "csv":
        buf = io.StringIO()
        w = csv.writer(buf, lineterminator="\n")
        w.writerow(["version", "algebra", "form", "sigma", "mu", "fix", "pr", "shape", "sigma_prime",
                    "flags", "piece", "domain", "pr_domain", "table_rows"])
        for r in records:
            d = r.to_dict()
            w.writerow([SCHEMA_VERSION, r.algebra, r.form, _set(r.sigma), " ".join(r.mu), r.fix.text, r.pr.text,
                        d["shape"], ";".join(_set(s) for s in r.shape.sigma_prime), ";".join(r.flags), r.piece,
                        " | ".join(r.domain), r.pr_domain, ";".join(r.table_rows)])
        if truncated:
            buf.write("# truncated\n")
        return buf.getvalue()
    if fmt == "latex":
        return _latex(records, truncated)
    raise InputError(f"unknown format {fmt!r}")


def load_run(text: str) -> RunResult:
    try:
        doc = json.loads(text)
    except json.JSONDecodeError as exc:
        raise InputError(f"run file is not JSON: {exc}") from exc
    if doc.get("version") != SCHEMA_VERSION:
        raise InputError(f"unsupported run file version {doc.get('version')!r}")
    recs = [TripleRecord.from_dict(d) for d in doc["records"]]
    return RunResult(recs, bool(doc.get("truncated")), doc.get("params", {}))


def _set(s: Sequence[int]) -> str:
    return "{" + ",".join(map(str, s)) + "}"


_TEX_ORDER = [Shape.ZERO, Shape.PARABOLIC, Shape.G1_ZERO, Shape.G1_IN_PARABOLIC, Shape.OTHER, Shape.NONE]


def _tex(s: str) -> str:
    import re
    s = re.sub(r"sqrt\[(\d+)\]\(1\)", r"\\sqrt[\1]{1}", s).replace("sqrt(1)", r"\sqrt{1}")
    s = re.sub(r"j(\d+)", r"j_{\1}", s)
    s = re.sub(r"\^(-?\d+)", r"^{\1}", s)
    s = re.sub(r"\ba(\d+)('?)", r"\\alpha_{\1}\2", s)
    return s.replace("*", "")


def _latex(records: Sequence[TripleRecord], truncated: bool) -> str:
    lines = ["% generated by parabolic-rigidity"]
    for sh in _TEX_ORDER:
        rows = [r for r in records if r.shape.shape is sh]
        if not rows:
            continue
        lines += [r"\begin{table}[th]\centering", rf"\caption{{{sh.value}}}",
                  r"\begin{tabular}{|c|c|c|c|c|}", r"\hline",
                  r"$\mathfrak g$ & $\Sigma$ & $j_{i_a}$ & $\mu$ & PR\\ \hline"]
        for r in rows:
            sig = r"\{" + ",".join(map(str, r.sigma)) + r"\}"
            lines.append(f"{r.algebra} & ${sig}$ & ${_tex(r.fix.text)}$ & ${_tex(', '.join(r.mu))}$ & "
                         f"${_tex(r.pr.text)}$\\\\ \\hline")
        lines += [r"\end{tabular}", r"\end{table}"]
    if truncated:
        lines.append("% truncated")
    return "\n".join(lines) + "\n"
