"""Real forms: Satake data, complex algebras viewed as real, and real eigenvalue domains.

A complex simple algebra viewed as a real one has complexification
``g + conj(g)``; its root system is the doubled diagram, where node ``i`` of
the conjugate copy is printed ``a{i}'``.  A real center element is a pair
``(j, conj(j))``, so writing ``j_i = exp(r_i + i phi_i)`` a character
``(a, b)`` of the doubled torus is trivial iff ``r . (a + b) = 0`` and
``phi . (a - b)`` lies in ``2 pi Z``.  Cells are rendered in those ``r``/``phi``
coordinates.

For a split form every ``j_i`` is real: ``j_i = eps_i exp(r_i)`` with a sign
``eps_i``.  Forms whose admissible domains are not derived here are marked
``external-source`` and handled at the label level.
"""
from __future__ import annotations

import json
import re
from dataclasses import dataclass, field, replace
from functools import lru_cache
from importlib import resources
from itertools import combinations, product
from typing import Dict, FrozenSet, Iterable, List, Optional, Sequence, Tuple

from sympy import Matrix, Rational

from .algebras import AlgebraName, canonical_type, parse_algebra_item, resolve_type, table_node
from .center_sym import (EigenspaceShape, Shape, _shape_of, pattern_levels, rigidity_locus,
                         solve_constraints)
from .errors import InputError
from .kostant import HarmonicComponent, hasse_words
from .lattice import Lattice, cyclic_refinements, intersect
from .lie_core import (Family, Root, RootSystem, SimpleType, affine_action, build_root_system,
                       doubled_root_system, weyl_word_on_root)
from .parabolic import ParabolicGrading, build_grading

_SPLIT_INDEX = {"g2": "2", "f4": "4", "e6": "6", "e7": "7", "e8": "8"}


# ------------------------------------------------------------------ catalog
@lru_cache(maxsize=None)
def satake_catalog() -> Dict[str, dict]:
    text = resources.files(__package__).joinpath("data/satake.json").read_text()
    return {c["class"]: c for c in json.loads(text)["classes"]}


def _black(rule: str, n: int, p: int, q: int) -> FrozenSet[int]:
    nodes = range(1, n + 1)
    if rule == "none":
        return frozenset()
    if rule == "odd":
        return frozenset(i for i in nodes if i % 2)
    if rule == "middle":
        return frozenset(i for i in nodes if p < i < n + 1 - p)
    if rule == "after-p":
        return frozenset(i for i in nodes if i > p)
    if rule == "not-even-to-2p":
        return frozenset(i for i in nodes if i % 2 or i > 2 * p)
    raise InputError(f"unknown Satake rule {rule!r}")


def _arrows(rule: str, n: int, white: Iterable[int]) -> Tuple[Tuple[int, int], ...]:
    if rule == "none":
        return ()
    if rule == "flip":
        return tuple((i, n + 1 - i) for i in sorted(white) if i < n + 1 - i)
    if rule == "last-two":
        return ((n - 1, n),)
    raise InputError(f"unknown Satake rule {rule!r}")


@dataclass(frozen=True)
class RealForm:
    """One real form: its complex type and Satake diagram (1-based nodes)."""

    tag: str
    cls: str
    type: SimpleType
    signature: Optional[Tuple[int, int]]
    black: FrozenSet[int]
    arrows: Tuple[Tuple[int, int], ...]
    domain: str

    @property
    def is_complex(self) -> bool:
        return self.cls == "complex"

    @property
    def is_split(self) -> bool:
        return self.domain == "real"

    @property
    def external(self) -> bool:
        return self.domain == "external-source"

    def partner(self, i: int) -> int:
        for a, b in self.arrows:
            if i in (a, b):
                return b if i == a else a
        return i

    def complex_sigma(self, sigma: Iterable[int]) -> Tuple[int, ...]:
        """Crossed nodes of the complexification: ``sigma`` closed under the arrows."""
        sigma = set(sigma)
        if sigma & self.black:
            raise InputError(f"{self.tag}: nodes {sorted(sigma & self.black)} are compact (black)")
        return tuple(sorted(sigma | {self.partner(i) for i in sigma}))


def _make(tag: str, cls: str, t: SimpleType, sig: Optional[Tuple[int, int]] = None) -> RealForm:
    entry = satake_catalog()[cls]
    fam = t.family.value
    if fam not in entry["families"]:
        raise InputError(f"{tag}: class {cls} has no type {t}")
    p, q = sig or (0, 0)
    black = _black(entry["black"], t.rank, p, q)
    arrows = _arrows(entry["arrows"], t.rank, [i for i in range(1, t.rank + 1) if i not in black])
    return RealForm(tag, cls, t, sig, black, arrows, entry["domain"])


def real_form(tag: str) -> RealForm:
    """Resolve a concrete tag such as ``sl(4,R)``, ``su(2,2)``, ``so(3,4)``, ``g2(2)``, ``sp(6,C)``."""
    tag = tag.strip().replace(" ", "")
    item = parse_algebra_item(tag)
    if item.is_pattern:
        raise InputError(f"{tag!r} is a rank pattern; give a concrete size")
    kind = item.kind
    if kind in _SPLIT_INDEX:
        t = SimpleType.parse(kind.upper())
        if item.fields == ("C",):
            return _make(tag, "complex", t)
        if item.fields == (_SPLIT_INDEX[kind],):
            return _make(tag, "exceptional split", t)
        raise InputError(f"{tag}: real form not in the Satake catalog")
    if item.fields == ("C",):
        return _make(tag, "complex", resolve_type(tag)[0])
    if item.fields == ("R",):
        cls = {"sl": "sl(n,R)", "sp": "sp(2n,R)"}.get(kind)
        if cls is None:
            raise InputError(f"{tag}: write real orthogonal forms as so(p,q)")
        return _make(tag, cls, resolve_type(tag)[0])
    if item.fields == ("H",) and kind == "sl":
        m = int(item.size)
        return _make(tag, "sl(n,H)", SimpleType(Family.A, 2 * m - 1), (m, m))
    if item.signature[0]:
        p, q = sorted(int(x) for x in item.signature)
        if p < 1:
            raise InputError(f"{tag} is compact and has no proper parabolics")
        if kind == "su":
            return _make(tag, "su(p,q)", SimpleType(Family.A, p + q - 1), (p, q))
        if kind == "sp":
            return _make(tag, "sp(p,q)", SimpleType(Family.C, p + q), (p, q))
        size = p + q
        t = SimpleType(Family.B, size // 2) if size % 2 else SimpleType(Family.D, size // 2)
        if q - p <= 1:
            cls = "so(p,q) split"
        elif q - p == 2 and t.family is Family.D:
            cls = "so(p,q) quasi-split"
        else:
            cls = "so(p,q)"
        return _make(tag, cls, t, (p, q))
    raise InputError(f"{tag}: real form not in the Satake catalog")


def split_tag(t: SimpleType) -> str:
    n = t.rank
    fam = t.family
    if fam is Family.A:
        return f"sl({n + 1},R)"
    if fam is Family.B:
        return f"so({n},{n + 1})"
    if fam is Family.C:
        return f"sp({2 * n},R)"
    if fam is Family.D:
        return f"so({n},{n})"
    return f"{t.label.lower()}({_SPLIT_INDEX[t.label.lower()]})"


def complex_tag(t: SimpleType) -> str:
    n = t.rank
    fam = t.family
    if fam is Family.A:
        return f"sl({n + 1},C)"
    if fam is Family.B:
        return f"so({2 * n + 1},C)"
    if fam is Family.C:
        return f"sp({2 * n},C)"
    if fam is Family.D:
        return f"so({2 * n},C)"
    return f"{t.label.lower()}(C)"


# ------------------------------------------------------- complex viewed as real
@lru_cache(maxsize=None)
def realified_grading(t: SimpleType, sigma: Tuple[int, ...]) -> ParabolicGrading:
    """Grading of ``g + conj(g)`` crossed at ``sigma`` and its conjugate."""
    r = t.rank
    return build_grading(doubled_root_system(build_root_system(t)), tuple(sigma) + tuple(i + r for i in sigma))


def prime_label(node: int, r: int) -> str:
    return f"a{node}" if node <= r else f"a{node - r}'"


def parse_prime_label(text: str, r: int) -> int:
    m = re.fullmatch(r"a\(?(\d+)\)?('?)", text.strip())
    if not m:
        raise InputError(f"bad label {text!r}")
    i = int(m.group(1))
    if not 1 <= i <= r:
        raise InputError(f"node {i} out of range 1..{r}")
    return i + r if m.group(2) else i


def _component(pg: ParabolicGrading, t: SimpleType, word: Tuple[int, int], copy: int) -> HarmonicComponent:
    """Kostant component of word ``(P, Q)`` valued in copy ``copy`` (1 or 2)."""
    rs = pg.rs
    r = t.rank
    theta = build_root_system(t).highest_root
    lam_root = tuple(theta) + (0,) * r if copy == 1 else (0,) * r + tuple(theta)
    hw = affine_action(rs, word, rs.to_fundamental(lam_root))
    low = tuple(-x for x in hw)
    p, q = word
    ap = rs.simple_roots[p - 1]
    spq = rs.reflect(p - 1, rs.simple_roots[q - 1])
    wl = weyl_word_on_root(rs, word, lam_root)
    return HarmonicComponent(
        pg=pg, label=word, word=word, highest_weight=hw, lowest_weight=low,
        lowest_weight_roots=rs.from_fundamental(low),
        homogeneity=pg.height(int(x) for x in rs.from_fundamental(low)),
        arg_roots=(tuple(-c for c in ap), tuple(-c for c in spq)), value_root=tuple(-c for c in wl))


@dataclass(frozen=True)
class RealComponent:
    """A component of the complex-as-real algebra and its conjugate."""

    type: SimpleType
    sigma: Tuple[int, ...]
    word: Tuple[int, int]
    hc: HarmonicComponent = field(repr=False, compare=False)
    conj: HarmonicComponent = field(repr=False, compare=False)

    @property
    def label_str(self) -> str:
        r = self.type.rank
        return f"({prime_label(self.word[0], r)},{prime_label(self.word[1], r)})"


def _flip(i: int, r: int) -> int:
    return i + r if i <= r else i - r


def real_component(t: SimpleType, sigma: Sequence[int], word: Tuple[int, int]) -> RealComponent:
    sigma = tuple(sorted(sigma))
    pg = realified_grading(t, sigma)
    r = t.rank
    if word not in hasse_words(pg) and word[::-1] in hasse_words(pg):
        word = word[::-1]
    if word not in hasse_words(pg):
        lab = f"({prime_label(word[0], r)},{prime_label(word[1], r)})"
        raise InputError(f"no component {lab} for {complex_tag(t)} {set(sigma)}")
    hc = _component(pg, t, word, 1)
    bar = _component(pg, t, (_flip(word[0], r), _flip(word[1], r)), 2)
    return RealComponent(t, sigma, word, hc, bar)


def real_components(t: SimpleType, sigma: Sequence[int], include_irregular: bool = False) -> List[RealComponent]:
    """Components up to conjugation: every Hasse word of the doubled grading, valued in copy 1."""
    sigma = tuple(sorted(sigma))
    out = []
    for w in hasse_words(realified_grading(t, sigma)):
        c = real_component(t, sigma, w)
        if include_irregular or c.hc.regular:
            out.append(c)
    return out


# ------------------------------------------------------------ r/phi rendering
def _unit(i: int, s: int) -> Tuple[int, ...]:
    return tuple(int(i == j) for j in range(s))


def _solve(basis: Sequence[Sequence[int]], target: Sequence[int], extra: Sequence[Sequence[int]]
           ) -> Optional[List[Rational]]:
    """Coefficients ``c`` with ``target - sum c_j extra_j`` in the rational span of ``basis``."""
    cols = [list(b) for b in basis] + [list(e) for e in extra]
    if not cols:
        return None if any(target) else []
    try:
        sol, params = Matrix(cols).T.gauss_jordan_solve(Matrix(list(target)))
    except ValueError:
        return None
    sol = sol.subs({p: 0 for p in params})
    return [Rational(x) for x in list(sol)[len(basis):]]


def modulus_phase(lat: Lattice) -> Tuple[Lattice, Lattice]:
    """``U = {a+b}`` (conditions on r) and ``V = {a-b}`` (conditions on phi) of a doubled lattice."""
    s = lat.n // 2
    u = Lattice.span(s, [[b[i] + b[s + i] for i in range(s)] for b in lat.basis])
    v = Lattice.span(s, [[b[i] - b[s + i] for i in range(s)] for b in lat.basis])
    return u, v


def _forced(lat: Lattice, s: int) -> List[bool]:
    return [_solve(lat.basis, _unit(i, s), []) is not None for i in range(s)]


def _torsion(v: Lattice, i: int) -> int:
    s = v.n
    d = 1
    while not v.contains(tuple(d * x for x in _unit(i, s))):
        d += 1
    return d


def _coef(c: Rational, name: str) -> str:
    if c == 1:
        return name
    if c == -1:
        return "-" + name
    return f"{c}{name}"


def _linear(cs: Sequence[Rational], names: Sequence[str]) -> str:
    parts = [_coef(c, n) for c, n in zip(cs, names) if c != 0]
    out = parts[0]
    for p in parts[1:]:
        out += p if p.startswith("-") else "+" + p
    return out


def domain_cells(lat: Lattice, sigma: Sequence[int]) -> Tuple[str, ...]:
    """Per-node cells of a doubled fix lattice in r/phi coordinates (blank = unconstrained)."""
    s = len(sigma)
    u, v = modulus_phase(lat)
    fr, fp = _forced(u, s), _forced(v, s)
    generic = [j for j in range(s) if not fr[j] and not fp[j]]
    out = []
    for i in range(s):
        if not fr[i] and not fp[i]:
            out.append("")
        elif fr[i] and fp[i]:
            d = _torsion(v, i)
            out.append("1" if d == 1 else "sqrt(1)" if d == 2 else f"sqrt[{d}](1)")
        else:
            base, var = (v, "phi") if fr[i] else (u, "r")
            c = _solve(base.basis, _unit(i, s), [_unit(j, s) for j in generic])
            if c is None or not any(c):
                out.append(f"{var}{sigma[i]}")
            else:
                out.append(_linear(c, [f"{var}{sigma[j]}" for j in generic]))
    return tuple(out)


def domain_pr(fix: Lattice, pr: Lattice, sigma: Sequence[int]) -> str:
    """Conditions the PR locus adds on nodes left free by the fix locus."""
    s = len(sigma)
    u0, v0 = modulus_phase(fix)
    u1, v1 = modulus_phase(pr)
    fr0, fp0, fr1, fp1 = _forced(u0, s), _forced(v0, s), _forced(u1, s), _forced(v1, s)
    out = []
    for i in range(s):
        if fr0[i] or fp0[i]:
            continue
        if fr1[i]:
            out.append(f"r{sigma[i]}=0")
        if fp1[i]:
            d = _torsion(v1, i)
            out.append(f"phi{sigma[i]}=2pi" if d == 1 else f"phi{sigma[i]}=2pi/{d}")
    return ", ".join(out)


# ---------------------------------------------------------- real-domain shape
def _flats(start: Lattice, mgs: Sequence[Tuple[int, ...]], saturate: bool) -> List[Lattice]:
    start = start.saturation() if saturate else start
    seen, queue = {start}, [start]
    while queue:
        f = queue.pop()
        for m in mgs:
            if not f.contains(m):
                g = f.add([m])
                g = g.saturation() if saturate else g
                if g not in seen:
                    seen.add(g)
                    queue.append(g)
    return sorted(seen, key=lambda l: (l.rank, l.basis))


def _pairs_patterns(mgs, moduli: Sequence[Lattice], phases: Sequence[Lattice]) -> List[FrozenSet]:
    """Distinct sets of multigrades killed by some non-identity (R, P) pair."""
    out = set()
    in_r = [(R.is_full(), frozenset(m for m in mgs if R.contains(m))) for R in moduli]
    in_p = [(P.is_full(), frozenset(m for m in mgs if P.contains(m))) for P in phases]
    for (rf, a), (pf, b) in product(in_r, in_p):
        if rf and pf:
            continue
        out.add(a & b)
    return sorted(out, key=sorted)


def _symmetric_subsets(sigma: Sequence[int], r: int):
    half = [i for i in sigma if i <= r]
    for k in range(len(half), -1, -1):
        for c in combinations(half, k):
            yield tuple(sorted(c + tuple(i + r for i in c)))


def realified_shape(t: SimpleType, sigma: Sequence[int], lat: Lattice, comps: Sequence[RealComponent]
                    ) -> EigenspaceShape:
    """Shape over all real (conjugation-symmetric) non-identity s with ``j^m = 1`` on ``lat``."""
    sigma = tuple(sorted(sigma))
    s, r = len(sigma), t.rank
    pg = realified_grading(t, sigma)
    u, v = modulus_phase(lat)
    roots1 = [x for x in pg.negative_roots if not any(x[r:])]
    mg1 = {x: pg.multigrade(x)[:s] for x in roots1}
    mgs = sorted(set(mg1.values()))
    phases = [k for f in _flats(v, mgs, False) for k in cyclic_refinements(f)]
    patterns = _pairs_patterns(mgs, _flats(u, mgs, True), phases)
    if not patterns:
        return EigenspaceShape(Shape.NONE)
    mu = [h for c in comps for h in (c.hc, c.conj)]
    cands = list(_symmetric_subsets(pg.sigma, r))
    levels = []
    for pat in patterns:
        roots = [x for x in roots1 if mg1[x] in pat]
        roots += [tuple([0] * r + list(x[:r])) for x in roots]
        levels.append(pattern_levels(pg, frozenset(roots), mu, candidates=cands))
    shape = _shape_of(levels)
    sp = tuple(tuple(i for i in x if i <= r) for x in shape.sigma_prime)
    return replace(shape, sigma_prime=sp)


def split_shape(pg: ParabolicGrading, lat: Lattice, mu_set: Sequence[HarmonicComponent]) -> EigenspaceShape:
    """Shape over all real non-identity s with ``j^m = 1`` on ``lat``."""
    s = lat.n
    mgs = sorted({pg.multigrade(x) for x in pg.negative_roots})
    signs = []
    for eps in product((0, 1), repeat=s):
        if all(sum(e * x for e, x in zip(eps, b)) % 2 == 0 for b in lat.basis):
            rows = [[int(i == j) for j in range(s)] for i in range(s) if not eps[i]]
            pivot = [i for i in range(s) if eps[i]]
            if pivot:
                k = pivot[0]
                rows += [[2 * int(j == k) for j in range(s)]]
                rows += [[int(j == k) + int(j == i) for j in range(s)] for i in pivot[1:]]
            signs.append(Lattice.span(s, rows))
    patterns = _pairs_patterns(mgs, _flats(lat, mgs, True), signs)
    if not patterns:
        return EigenspaceShape(Shape.NONE)
    levels = [pattern_levels(pg, frozenset(x for x in pg.negative_roots if pg.multigrade(x) in pat), mu_set)
              for pat in patterns]
    return _shape_of(levels)


# ------------------------------------------------------------------ records
def _primed(solved, r: int):
    """Name the eigenvalue of conjugate node ``i`` as ``j{i}'``."""
    text = re.sub(r"j(\d+)", lambda m: f"j{int(m.group(1)) - r}'" if int(m.group(1)) > r else m.group(0), solved.text)
    return replace(solved, text=text)


def realified_record(t: SimpleType, sigma: Sequence[int], comps: Sequence[RealComponent], tag: str = ""):
    from .classify import MULTI, TripleRecord
    sigma = tuple(sorted(sigma))
    pg = realified_grading(t, sigma)
    loc = rigidity_locus(pg, [h for c in comps for h in (c.hc, c.conj)])
    fix, pr = (_primed(solve_constraints(x), t.rank) for x in (loc.fix, loc.pr))
    return TripleRecord(
        algebra=t.label, form=tag or complex_tag(t), sigma=sigma, mu=tuple(c.label_str for c in comps),
        fix=fix, pr=pr, shape=realified_shape(t, sigma, pr.lattice, comps),
        flags=(MULTI,) if len(comps) > 1 else (), domain=domain_cells(fix.lattice, sigma),
        pr_domain=domain_pr(fix.lattice, pr.lattice, sigma))


def apply_real_form(record, form: str):
    """View a record in a real form of its complex type.

    Complex forms reinterpret the labels (primes allowed) on ``g + conj(g)``;
    split forms keep labels and lattices and restrict the shape to real s;
    other catalog forms are checked against the Satake diagram and flagged
    ``external-source``.
    """
    rf = real_form(form)
    t = SimpleType.parse(record.algebra)
    ct, nmap = canonical_type(rf.type)
    if t == rf.type:
        back = {i: i for i in range(1, t.rank + 1)}
    elif ct == t:
        back = {v: k for k, v in nmap.items()}
    else:
        raise InputError(f"{form} is a real form of {rf.type}, not {t}")
    sigma = tuple(sorted(back[i] for i in record.sigma))
    labels = [tuple(x.strip() for x in m.strip("()").split(",")) for m in record.mu]
    if rf.is_complex:
        r = t.rank
        comps = []
        for a, b in labels:
            p, q = (parse_prime_label(x, r) for x in (a, b))
            comps.append(real_component(t, record.sigma, (p, q)))
        return replace(realified_record(t, record.sigma, comps, tag=rf.tag), piece=record.piece)
    rf.complex_sigma(sigma)
    if any("'" in x for lab in labels for x in lab):
        raise InputError(f"primed labels need a complex form, not {form}")
    if rf.is_split:
        from .kostant import find_component
        pg = build_grading(build_root_system(t), record.sigma)
        comps = [find_component(pg, tuple(int(x[1:].strip("()")) for x in lab)) for lab in labels]
        shape = split_shape(pg, record.pr.lattice, comps)
        return replace(record, form=rf.tag, shape=shape, domain=("real",), pr_domain="")
    return replace(record, form=rf.tag, domain=("external-source",), pr_domain="")


def realified_records_for(type_label: str, sigma: Tuple[int, ...]) -> List:
    """Fixable single components of the complex-as-real algebra at ``sigma``."""
    t = SimpleType.parse(type_label)
    out = []
    for c in real_components(t, sigma):
        if rigidity_locus(realified_grading(t, tuple(sigma)), [c.hc, c.conj]).fix.lattice.is_full():
            continue
        out.append(realified_record(t, sigma, [c]))
    return out


def split_views(records: Sequence) -> List:
    """Each complex record viewed in the split real form of its type."""
    return [apply_real_form(r, split_tag(SimpleType.parse(r.algebra))) for r in records if r.form == "complex"]


# --------------------------------------------------------------- table check
@dataclass
class RealCheck:
    row: str
    tag: str
    kind: str          # "verbatim", "split" or "external"
    target: str
    ok: bool
    detail: str = ""


@dataclass
class RealReport:
    checks: List[RealCheck] = field(default_factory=list)

    def failures(self) -> List[RealCheck]:
        return [c for c in self.checks if not c.ok]

    @property
    def external_rows(self) -> List[str]:
        return sorted({c.row for c in self.checks if c.kind == "external"})

    def render(self) -> str:
        kinds = {}
        for c in self.checks:
            kinds.setdefault(c.kind, [0, 0])[0 if c.ok else 1] += 1
        lines = [f"{k}: {v[0]} ok, {v[1]} failed" for k, v in sorted(kinds.items())]
        lines.append(f"external-source rows (label level only): {len(self.external_rows)}")
        for c in self.failures():
            lines.append(f"FAIL {c.row} {c.tag} {c.target}: {c.detail}")
        return "\n".join(lines)


def _subst(text: str, env: Dict[str, int]) -> str:
    return re.sub(r"(r|phi)([npq])\b", lambda m: m.group(1) + str(env[m.group(2)]), text)


def _label_parts(lab: str, env: Dict[str, int]) -> Tuple[int, bool]:
    from .notation import eval_index
    m = re.fullmatch(r"a\(?([^()']+)\)?('?)", lab)
    if not m:
        raise InputError(f"bad label {lab!r}")
    return eval_index(m.group(1), env), m.group(2) == "'"


def _envs(row, alg: AlgebraName, max_rank: int, letters: Sequence[str]):
    from .tables import _cond_holds, _sigma_nodes
    for t, env0 in alg.instances(max_rank):
        if "n" not in env0 and alg.is_pattern and alg.kind != "so":
            continue
        for vals in product(range(1, t.rank + 1), repeat=len(letters)):
            if len(set(vals)) != len(vals):
                continue
            env = dict(env0)
            env.update(row.bindings)
            env.update(zip(letters, vals))
            if alg.kind == "so" or "n" not in env:
                env["n"] = t.rank
            if not _cond_holds(row.sigma_cond, env):
                continue
            try:
                nodes = _sigma_nodes(row.sigma, env)
            except InputError:
                continue
            if len(set(nodes)) != len(nodes) or any(not 1 <= x <= t.rank for x in nodes):
                continue
            yield t, env, nodes


def _check_realified(row, alg: AlgebraName, max_rank: int, expected: Optional[Shape] = None) -> List[RealCheck]:
    out = []
    letters = sorted(set(re.findall(r"[pq]", row.sigma + row.mu)) - set(row.bindings))
    for t, env, nodes in _envs(row, alg, max_rank, letters):
        r = t.rank
        try:
            (p, pc), (q, qc) = (_label_parts(x, env) for x in row.labels[0])
        except InputError:
            continue
        if not all(1 <= x <= r for x in (p, q)) or p == q and pc == qc:
            continue
        p, q = table_node(t, p), table_node(t, q)
        nodes = [table_node(t, x) for x in nodes]
        word = (p + r * pc, q + r * qc)
        target = f"{t} {{{','.join(map(str, nodes))}}} {row.mu}"
        tag = complex_tag(t)
        try:
            comp = real_component(t, nodes, word)
        except InputError as exc:
            out.append(RealCheck(row.id, tag, "verbatim", target, False, str(exc)))
            continue
        rec = realified_record(t, nodes, [comp], tag)
        order = [rec.sigma.index(x) for x in nodes]
        cells = [rec.domain[i] for i in order]
        want = [_subst(x, env) for x in row.cells][:len(nodes)]
        want += [""] * (len(nodes) - len(want))
        want_pr = _subst(row.pr, env)
        problems = []
        if cells != want:
            problems.append(f"cells {cells} != {want}")
        if rec.pr_domain != want_pr:
            problems.append(f"pr {rec.pr_domain!r} != {want_pr!r}")
        out.append(RealCheck(row.id, tag, "verbatim", target, not problems, "; ".join(problems)))
        if expected is not None:
            ok = rec.shape.shape is expected
            out.append(RealCheck(row.id, tag, "realified-shape", target, ok,
                                 "" if ok else f"{rec.shape} != {expected.value}"))
    return out


def _check_split(inst, expected: Optional[Shape]) -> RealCheck:
    from .classify import check_triple
    tag = split_tag(inst.type)
    rec = check_triple(inst.type.label, inst.sigma, inst.mu)
    problems = []
    if rec.fix.lattice != inst.fix or rec.pr.lattice != inst.pr:
        problems.append(f"lattice {rec.fix.text} / {rec.pr.text}")
    real = apply_real_form(rec, tag)
    if expected is not None and real.shape.shape is not expected:
        problems.append(f"real shape {real.shape} != {expected.value}")
    return RealCheck(inst.row.id, tag, "split", inst.describe(), not problems, "; ".join(problems))


def _live(insts) -> list:
    """Explicit rows beat patterns, then more literal Sigma entries win."""
    groups: Dict[tuple, list] = {}
    for inst in insts:
        groups.setdefault(inst.key, []).append(inst)
    out = []
    for group in groups.values():
        best = max((not i.pattern, i.literal) for i in group)
        seen = set()
        for i in group:
            if (not i.pattern, i.literal) == best and i.row.id not in seen:
                seen.add(i.row.id)
                out.append(i)
    return sorted(out, key=lambda i: (i.row.table, i.row.index, i.type, i.sigma))


def _quaternionic_instances(alg: AlgebraName, max_rank: int):
    """``sl(m,H)`` has type A(2m-1); ``m`` is the printed size."""
    from .algebras import _eval
    for n in range(1, max_rank + 1):
        m = _eval(alg.size, {"n": n})
        if m is None or m.denominator != 1 or not 2 <= m or 2 * m - 1 > max_rank:
            continue
        m = int(m)
        yield SimpleType(Family.A, 2 * m - 1), {"n": n}, [real_form(f"sl({m},H)")]


def _signature_instances(alg: AlgebraName, max_rank: int):
    for t, env in alg.instances(max_rank, respect_threshold=False):
        if alg.is_pattern:
            yield t, env, list(_class_forms(alg, t))
        else:
            yield t, env, [real_form(alg.text)]


def _check_external(row, alg: AlgebraName, max_rank: int, quaternionic: bool = False) -> List[RealCheck]:
    """Some form of the class has Sigma white and the labels as components at its arrow closure."""
    from .kostant import harmonic_components
    from .tables import _cond_holds, _sigma_nodes
    out = []
    letters = sorted(set(re.findall(r"[p]", row.sigma + row.mu)) - set(row.bindings))
    insts = _quaternionic_instances(alg, max_rank) if quaternionic else _signature_instances(alg, max_rank)
    tag = alg.text.replace("{R,C,H}", "H").replace("{R,H}", "H") if quaternionic else alg.text
    found = instantiable = False
    for t, env0, forms in insts:
        for vals in product(range(1, t.rank + 1), repeat=len(letters)):
            env = dict(env0, **row.bindings)
            env.update(zip(letters, vals))
            env.setdefault("n", t.rank)
            if not _cond_holds(row.sigma_cond, env):
                continue
            try:
                nodes = _sigma_nodes(row.sigma, env)
                labs = [tuple(_label_parts(x, env)[0] for x in lab) for lab in row.labels]
            except InputError:
                continue
            if list(nodes) != sorted(set(nodes)) or any(not 1 <= x <= t.rank for x in nodes + [y for l in labs for y in l]):
                continue
            if any(a == b for a, b in labs):
                continue
            target = f"{t} {{{','.join(map(str, nodes))}}} {row.mu}"
            instantiable = True
            for rf in forms:
                try:
                    sig_c = rf.complex_sigma(nodes)
                except InputError:
                    continue
                pg = build_grading(build_root_system(t), sig_c)
                avail = {h.label for h in harmonic_components(pg, include_irregular=True)}
                ok = all(l in avail or l[::-1] in avail for l in labs)
                out.append(RealCheck(row.id, tag, "external", f"{rf.tag}: {target}", ok,
                                     "" if ok else f"labels not components at {set(sig_c)}"))
                found = True
    if instantiable and not found:
        out.append(RealCheck(row.id, tag, "external", row.sigma, False,
                             f"no form of the class up to rank {max_rank} has these nodes white"))
    return out


def _class_forms(alg: AlgebraName, t: SimpleType) -> Iterable[RealForm]:
    size = {Family.A: t.rank + 1, Family.B: 2 * t.rank + 1, Family.C: t.rank, Family.D: 2 * t.rank}[t.family]
    for p in range(1, size // 2 + 1):
        try:
            rf = real_form(f"{alg.kind}({p},{size - p})")
        except (InputError, ValueError):
            continue
        if rf.type == t:
            yield rf


def _is_split_signature(alg: AlgebraName) -> bool:
    if alg.kind != "so":
        return False
    if not alg.is_pattern:
        return real_form(alg.text).is_split
    return alg.signature[0] == alg.signature[1]


def check_real_rows(max_rank: int = 6, gt=None) -> RealReport:
    """Real-form rows of the tables checked against this module.

    Complex-as-real rows are compared verbatim (labels, r/phi cells, PR
    annotation); split rows by lattice and real shape, after the same
    precedence as the complex diff; external-source rows at the label level.
    """
    from .tables import EXPECTED_SHAPE, instantiate_algebra, load_tables
    gt = gt or load_tables()
    rep = RealReport()
    split = []
    for row in gt.all_rows():
        if row.table > 12:
            continue
        for alg in row.algebras:
            if not alg.fields:
                if _is_split_signature(alg) and not row.is_realification:
                    split.extend(instantiate_algebra(row, alg, max_rank))
                else:
                    rep.checks.extend(_check_external(row, alg, max_rank))
                continue
            if "C" in alg.fields and row.is_realification:
                rep.checks.extend(_check_realified(row, alg, max_rank, EXPECTED_SHAPE.get(row.table)))
            if row.is_realification:
                continue
            if "R" in alg.fields or _SPLIT_INDEX.get(alg.kind) in alg.fields:
                split.extend(instantiate_algebra(row, alg, max_rank))
            if "H" in alg.fields:
                rep.checks.extend(_check_external(row, alg, max_rank, quaternionic=True))
    for inst in _live(split):
        rep.checks.append(_check_split(inst, EXPECTED_SHAPE.get(inst.row.table)))
    return rep
