"""Shipped ground-truth tables, their instantiation at concrete ranks, and the diff.

Each ``data/tableNN.tsv`` holds one table: a ``#`` header line and one
tab-separated row per printed row with the columns

    algebra  sigma  sigma_cond  eigen  mu  pr  interp

``eigen`` cells are joined by `` | ``.  ``interp`` holds ``;``-separated
reading directives that never alter the verbatim columns:
``algebra=<list>`` replaces the algebra column, ``eigen=<text>`` the eigen
column, and ``bind=p:3`` fixes an index variable.
"""
from __future__ import annotations

import re
from dataclasses import dataclass, field
from functools import lru_cache
from importlib import resources
from itertools import product
from typing import Dict, Iterable, List, Optional, Sequence, Tuple

from .algebras import AlgebraName, canonical_type, parse_algebra_list
from .center_sym import Shape
from .classify import FLAT, MULTI, TripleRecord
from .errors import InputError
from .kostant import harmonic_components
from .lattice import Lattice, permute
from .lie_core import SimpleType, build_root_system, diagram_automorphisms
from .notation import TRUE, Condition, eval_index, parse_cell, parse_condition
from .parabolic import build_grading

COLUMNS = ("algebra", "sigma", "sigma_cond", "eigen", "mu", "pr", "interp")
TABLES = tuple(range(1, 16))
COMPLEX_SCOPE = tuple(t for t in TABLES if t != 13)

EXPECTED_SHAPE = {1: Shape.ZERO, 2: Shape.PARABOLIC, 3: Shape.PARABOLIC, 4: Shape.PARABOLIC,
                  5: Shape.G1_ZERO, 6: Shape.G1_ZERO, 7: Shape.G1_IN_PARABOLIC, 8: Shape.G1_IN_PARABOLIC,
                  9: Shape.G1_IN_PARABOLIC, 10: Shape.OTHER, 11: Shape.OTHER, 12: Shape.OTHER, 15: Shape.NONE}


class TableParseError(InputError):
    def __init__(self, table: int, line: int, msg: str):
        self.table, self.line = table, line
        super().__init__(f"table{table:02d}.tsv line {line}: {msg}")


# ------------------------------------------------------------------- rows
@dataclass(frozen=True)
class TableRow:
    table: int
    index: int
    line: int
    algebra: str
    sigma: str
    sigma_cond: str
    eigen: str
    mu: str
    pr: str
    interp: str

    @property
    def id(self) -> str:
        return f"T{self.table:02d}R{self.index:02d}"

    @property
    def directives(self) -> Dict[str, str]:
        out = {}
        for part in filter(None, (p.strip() for p in self.interp.split(";"))):
            k, _, v = part.partition("=")
            out[k.strip()] = v.strip()
        return out

    @property
    def algebras(self) -> List[AlgebraName]:
        return parse_algebra_list(self.directives.get("algebra", self.algebra))

    @property
    def cells(self) -> List[str]:
        return [c.strip() for c in self.directives.get("eigen", self.eigen).split("|")]

    @property
    def labels(self) -> List[Tuple[str, str]]:
        lab = r"a(?:\([^()]+\)|[^(),']+)'?"
        return re.findall(rf"\(({lab}),({lab})\)", self.mu)

    @property
    def is_realification(self) -> bool:
        text = " ".join([self.eigen, self.pr, self.mu])
        return "'" in self.mu or bool(re.search(r"\br(\d|[a-z]\b)|phi", text))

    @property
    def bindings(self) -> Dict[str, int]:
        b = self.directives.get("bind")
        if not b:
            return {}
        k, _, v = b.partition(":")
        return {k.strip(): int(v)}

    def serialize(self) -> str:
        return "\t".join(getattr(self, c) for c in COLUMNS)


@dataclass
class GroundTruthTable:
    headers: Dict[int, str]
    rows: Dict[int, List[TableRow]]

    def all_rows(self) -> List[TableRow]:
        return [r for t in sorted(self.rows) for r in self.rows[t]]

    def serialize(self, table: int) -> str:
        lines = [self.headers[table]] + [r.serialize() for r in self.rows[table]]
        return "\n".join(lines) + "\n"

    def row(self, rid: str) -> TableRow:
        t, i = int(rid[1:3]), int(rid[4:])
        return self.rows[t][i - 1]


def parse_table(table: int, text: str) -> Tuple[str, List[TableRow]]:
    lines = text.split("\n")
    if lines and lines[-1] == "":
        lines = lines[:-1]
    if not lines or not lines[0].startswith("#"):
        raise TableParseError(table, 1, "missing header line")
    rows = []
    for no, line in enumerate(lines[1:], start=2):
        parts = line.split("\t")
        if len(parts) != len(COLUMNS):
            raise TableParseError(table, no, f"expected {len(COLUMNS)} columns, found {len(parts)}")
        row = TableRow(table, len(rows) + 1, no, *parts)
        try:
            _validate(row)
        except InputError as exc:
            raise TableParseError(table, no, str(exc)) from exc
        rows.append(row)
    return lines[0], rows


def _validate(row: TableRow) -> None:
    row.algebras
    if not re.fullmatch(r"\{[^{}]+\}", row.sigma):
        raise InputError(f"bad sigma {row.sigma!r}")
    if not row.labels:
        raise InputError(f"bad mu {row.mu!r}")
    if row.sigma_cond:
        _parse_cond(row.sigma_cond)
    if not row.is_realification:
        env = {v: 5 for v in "npq"}
        env.update(row.bindings)
        nodes = _sigma_nodes(row.sigma, env)
        for k, cell in enumerate(row.cells):
            if k < len(nodes):
                parse_cell(cell, nodes[k], env)
        parse_condition(row.pr, env)


@lru_cache(maxsize=None)
def load_tables() -> GroundTruthTable:
    base = resources.files(__package__).joinpath("data")
    headers, rows = {}, {}
    for t in TABLES:
        h, r = parse_table(t, base.joinpath(f"table{t:02d}.tsv").read_text())
        headers[t], rows[t] = h, r
    return GroundTruthTable(headers, rows)


def raw_table_text(table: int) -> str:
    return resources.files(__package__).joinpath(f"data/table{table:02d}.tsv").read_text()


# ----------------------------------------------------------- instantiation
def _sigma_nodes(text: str, env: Dict[str, int]) -> List[int]:
    return [eval_index(x, env) for x in text.strip("{}").split(",")]


def _parse_cond(text: str) -> List[Tuple[List[str], str, List[str]]]:
    """``2<p<n`` -> [(["2"], "<", ["p"]), (["p"], "<", ["n"])]; ``3<p,q<n`` shares the middle."""
    parts = re.split(r"(<|>)", text.replace(" ", ""))
    if len(parts) < 3 or len(parts) % 2 == 0:
        raise InputError(f"bad condition {text!r}")
    out = []
    for i in range(0, len(parts) - 2, 2):
        out.append((parts[i].split(","), parts[i + 1], parts[i + 2].split(",")))
    return out


def _cond_holds(text: str, env: Dict[str, int]) -> bool:
    if not text:
        return True
    for lhs, op, rhs in _parse_cond(text):
        for a, b in product(lhs, rhs):
            x, y = eval_index(a, env), eval_index(b, env)
            if (op == "<" and not x < y) or (op == ">" and not x > y):
                return False
    return True


def _label_nodes(lab: str, env: Dict[str, int]) -> int:
    m = re.fullmatch(r"a\(?([^()']+)\)?('?)", lab)
    if not m:
        raise InputError(f"bad label {lab!r}")
    return eval_index(m.group(1), env)


@dataclass(frozen=True)
class Instance:
    row: TableRow
    algebra: str
    env: Tuple[Tuple[str, int], ...]
    type: SimpleType
    sigma: Tuple[int, ...]
    mu: Tuple[Tuple[int, int], ...]
    fix: Lattice
    pr: Lattice
    flat: bool
    pattern: bool
    literal: int

    @property
    def key(self) -> tuple:
        return canonical_key(self.type, self.sigma, self.mu, self.flat)

    def describe(self) -> str:
        env = ",".join(f"{k}={v}" for k, v in self.env)
        mu = ", ".join(f"(a{p},a{q})" for p, q in self.mu)
        return f"{self.row.id} {self.algebra}{'[' + env + ']' if env else ''} -> {self.type} {set(self.sigma)} {mu}"


def _norm_label(t: SimpleType, lab: Tuple[int, int]) -> Tuple[int, int]:
    rs = build_root_system(t)
    if rs.cartan_matrix[lab[0] - 1][lab[1] - 1] == 0:
        return tuple(sorted(lab))
    return lab


def _image(t: SimpleType, perm: Sequence[int], sigma, mu):
    img = lambda i: perm[i - 1] + 1
    s = tuple(sorted(img(i) for i in sigma))
    m = tuple(sorted(_norm_label(t, (img(p), img(q))) for p, q in mu))
    return s, m


def canonical_key(t: SimpleType, sigma, mu, flat: bool) -> tuple:
    best = min(_image(t, perm, sigma, mu) for perm in diagram_automorphisms(t))
    return (t.family.value, t.rank) + best + (flat,)


def instantiate(row: TableRow, max_rank: int, field: str = "C") -> List[Instance]:
    """Concrete instances of a row's algebras carrying ``field`` up to ``max_rank``.

    The default gives the complex instances (none for real-only rows).
    """
    if row.is_realification:
        return []
    out: Dict[tuple, Instance] = {}
    for alg in row.algebras:
        if field in alg.fields:
            for inst in instantiate_algebra(row, alg, max_rank):
                out.setdefault((inst.type, inst.sigma, inst.mu), inst)
    return list(out.values())


def instantiate_algebra(row: TableRow, alg: AlgebraName, max_rank: int) -> List[Instance]:
    out: Dict[tuple, Instance] = {}
    literal = sum(1 for x in row.sigma.strip("{}").split(",") if x.isdigit())
    letters = sorted(set(re.findall(r"[pq]", row.sigma + row.mu)) - set(row.bindings))
    for t, env0 in alg.instances(max_rank):
        rank = t.rank
        if "n" not in env0 and alg.is_pattern:
            continue
        for vals in product(range(1, rank + 1), repeat=len(letters)):
            env = dict(env0)
            env.update(row.bindings)
            env.update(zip(letters, vals))
            if alg.kind != "so":
                env.setdefault("n", rank)
            else:
                env = dict(env, n=env0.get("n", rank)) if "n" in row.sigma + row.mu else env
            inst = _build(row, alg, t, env, literal)
            if inst is not None:
                out.setdefault((inst.type, inst.sigma, inst.mu), inst)
    return list(out.values())


def _build(row: TableRow, alg: AlgebraName, t: SimpleType, env: Dict[str, int], literal: int) -> Optional[Instance]:
    if alg.kind == "so" and "n" in row.sigma + row.mu + row.eigen + row.pr:
        # so(2n,C)/so(2n+1,C)/so(n,n): n is the rank in these rows
        env = dict(env, n=t.rank)
    if not _cond_holds(row.sigma_cond, env):
        return None
    try:
        nodes = _sigma_nodes(row.sigma, env)
    except InputError:
        return None
    if len(set(nodes)) != len(nodes) or any(not 1 <= x <= t.rank for x in nodes):
        return None
    if any(len(set(v for k, v in env.items() if k in "pq")) != len([k for k in env if k in "pq"]) for _ in [0]):
        return None
    labels = [(_label_nodes(a, env), _label_nodes(b, env)) for a, b in row.labels]
    if any(not 1 <= x <= t.rank for lab in labels for x in lab):
        return None
    flat = row.table == 13
    cond = TRUE
    for k, cell in enumerate(row.cells):
        if k < len(nodes):
            cond = cond & parse_cell(cell, nodes[k], env)
    sigma = tuple(sorted(nodes))
    fix = cond.lattice(sigma)
    if row.table == 15:
        pr = Lattice.full(len(sigma))
    else:
        pr = (cond & parse_condition(row.pr, env)).lattice(sigma)
    # move to the enumerated type
    ct, nmap = canonical_type(t)
    csigma = tuple(sorted(nmap[i] for i in sigma))
    perm = [csigma.index(nmap[i]) for i in sigma]
    cmu = tuple(_norm_label(ct, (nmap[p], nmap[q])) for p, q in labels)
    pg = build_grading(build_root_system(ct), csigma)
    avail = {h.label for h in harmonic_components(pg, include_irregular=True)}
    if any(m not in avail and m[::-1] not in avail for m in cmu):
        raise InputError(f"{row.id}: label(s) {cmu} not components of {ct} {set(csigma)}")
    return Instance(row, alg.text, tuple(sorted(env.items())), ct, csigma, cmu,
                    permute(fix, perm), permute(pr, perm), flat, alg.is_pattern, literal)


# --------------------------------------------------------------------- diff
def _record_labels(rec: TripleRecord) -> Tuple[Tuple[int, int], ...]:
    return tuple(tuple(int(x) for x in re.findall(r"\d+", m)) for m in rec.mu)


def _record_matches(rec: TripleRecord, inst: Instance) -> bool:
    t = SimpleType.parse(rec.algebra)
    if t != inst.type or len(rec.mu) != len(inst.mu):
        return False
    if (rec.piece == "flat") != inst.flat:
        return False
    labels = _record_labels(rec)
    for perm in diagram_automorphisms(t):
        s, m = _image(t, perm, rec.sigma, labels)
        if s != inst.sigma or m != tuple(sorted(inst.mu)):
            continue
        coord = [inst.sigma.index(perm[i - 1] + 1) for i in rec.sigma]
        if permute(rec.fix.lattice, coord) == inst.fix and permute(rec.pr.lattice, coord) == inst.pr:
            return True
    return False


def record_key(rec: TripleRecord) -> tuple:
    t = SimpleType.parse(rec.algebra)
    return canonical_key(t, rec.sigma, _record_labels(rec), rec.piece == "flat")


@dataclass
class DiffReport:
    matched: List[Tuple[Instance, TripleRecord]] = field(default_factory=list)
    missing: List[Tuple[Instance, Optional[TripleRecord]]] = field(default_factory=list)
    extra: List[TripleRecord] = field(default_factory=list)
    shadowed: List[Tuple[Instance, Instance]] = field(default_factory=list)
    shape_mismatches: List[Tuple[Instance, TripleRecord]] = field(default_factory=list)

    @property
    def clean(self) -> bool:
        return not self.missing and not self.extra

    def rows(self, status: str) -> List[str]:
        src = {"matched": self.matched, "missing": self.missing}[status]
        return sorted({i.row.id for i, _ in src})

    def render(self, verbose: bool = False) -> str:
        out = [f"matched instances: {len(self.matched)} (rows: {len(self.rows('matched'))})",
               f"missing instances: {len(self.missing)}",
               f"extra records: {len(self.extra)}",
               f"shadowed instances: {len(self.shadowed)}",
               f"shape mismatches: {len(self.shape_mismatches)}"]
        for inst, rec in self.missing:
            why = ""
            if rec is not None:
                why = f"  [computed fix: {rec.fix.text} | pr: {rec.pr.text}]"
            out.append(f"MISSING {inst.describe()}{why}")
        for rec in self.extra:
            out.append(f"EXTRA {rec.algebra} {set(rec.sigma)} {' '.join(rec.mu)} {rec.piece} "
                       f"fix: {rec.fix.text} | pr: {rec.pr.text}")
        for inst, rec in self.shape_mismatches:
            out.append(f"SHAPE {inst.describe()}: expected {EXPECTED_SHAPE[inst.row.table].value}, got {rec.shape}")
        if verbose:
            out.extend(f"MATCHED {inst.describe()}" for inst, _ in self.matched)
            out.extend(f"SHADOWED {inst.describe()} by {by.row.id}" for inst, by in self.shadowed)
        return "\n".join(out) + "\n"


def live_instances(gt: GroundTruthTable, max_rank: int, tables: Iterable[int] = TABLES
                   ) -> Tuple[List[Instance], List[Tuple[Instance, Instance]]]:
    """Instances after precedence: explicit rows beat patterns, more literal Sigma entries win."""
    groups: Dict[tuple, List[Instance]] = {}
    for t in tables:
        for row in gt.rows[t]:
            for inst in instantiate(row, max_rank):
                groups.setdefault(inst.key, []).append(inst)
    live, shadowed = [], []
    for insts in groups.values():
        best = max((not i.pattern, i.literal) for i in insts)
        winners = [i for i in insts if (not i.pattern, i.literal) == best]
        live.extend(winners)
        shadowed.extend((i, winners[0]) for i in insts if (not i.pattern, i.literal) != best)
    live.sort(key=lambda i: (i.row.table, i.row.index, i.type, i.sigma))
    return live, shadowed


def diff_tables(records: Sequence[TripleRecord], gt: Optional[GroundTruthTable] = None, max_rank: int = 6,
                tables: Iterable[int] = TABLES) -> DiffReport:
    """Three-way comparison of complex records against the table instances up to ``max_rank``."""
    gt = gt or load_tables()
    recs = [r for r in records if r.form == "complex" and SimpleType.parse(r.algebra).rank <= max_rank]
    live, shadowed = live_instances(gt, max_rank, tables)
    rep = DiffReport(shadowed=shadowed)
    by_key: Dict[tuple, List[TripleRecord]] = {}
    for r in recs:
        by_key.setdefault(record_key(r), []).append(r)
    used = set()
    for inst in live:
        cands = by_key.get(inst.key, [])
        hits = [r for r in cands if _record_matches(r, inst)]
        if hits:
            for r in hits:
                used.add(id(r))
                rep.matched.append((inst, r))
                exp = EXPECTED_SHAPE.get(inst.row.table)
                if exp is not None and r.shape.shape is not exp:
                    rep.shape_mismatches.append((inst, r))
        else:
            rep.missing.append((inst, cands[0] if cands else None))
    covered = {i.key for i in live}
    rep.extra = [r for r in recs if id(r) not in used and _in_scope(r, covered, tables)]
    return rep


def _in_scope(rec: TripleRecord, covered, tables) -> bool:
    if record_key(rec) in covered:
        return True
    # records for triples no table mentions count only if every table is in play
    return set(tables) >= set(TABLES)


def annotate(records: Sequence[TripleRecord], report: DiffReport) -> List[TripleRecord]:
    """Copy of ``records`` with ``table_rows`` filled from the matches."""
    from dataclasses import replace
    rows: Dict[int, set] = {}
    for inst, r in report.matched:
        rows.setdefault(id(r), set()).add(inst.row.id)
    return [replace(r, table_rows=tuple(sorted(rows.get(id(r), ())))) for r in records]
