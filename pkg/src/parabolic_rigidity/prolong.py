"""Annihilators and prolongations of lowest-weight curvature cochains.

For a weight vector every space here is stable under the Cartan subalgebra,
so beyond the Cartan part it is spanned by root vectors.  The weight tier
uses that directly; the dense tier solves the full linear systems and is
kept as a cross-check at small rank.
"""
from __future__ import annotations

import itertools
from dataclasses import dataclass, field
from fractions import Fraction
from typing import Dict, FrozenSet, Iterable, List, Optional, Sequence, Tuple, Union

from sympy import QQ
from sympy.polys.matrices import DomainMatrix

from .errors import ConsistencyError, InputError
from .kostant import Cochain, HarmonicComponent, act_g0, evaluate, realize_component
from .lie_core import GVector, Root, bracket
from .parabolic import ParabolicGrading


@dataclass(frozen=True)
class AnnihilatorSpace:
    """Cartan part (coefficient vectors over h_1..h_r) plus root vectors of g0."""

    pg: ParabolicGrading = field(repr=False, compare=False)
    cartan: Tuple[Tuple[Fraction, ...], ...]
    roots: FrozenSet[Root]

    @property
    def dim(self) -> int:
        return len(self.cartan) + len(self.roots)

    def vectors(self) -> List[GVector]:
        rs = self.pg.rs
        out = [{i: c for i, c in enumerate(v) if c} for v in self.cartan]
        out += [{rs.index[r]: Fraction(1)} for r in sorted(self.roots)]
        return out

    def contains(self, v: GVector) -> bool:
        rs = self.pg.rs
        h = [Fraction(0)] * rs.rank
        for k, c in v.items():
            if k < rs.rank:
                h[k] = c
            elif rs.roots[k - rs.rank] not in self.roots:
                return False
        if not any(h):
            return True
        return _in_span(self.cartan, h)


@dataclass(frozen=True)
class ProlongationSpace:
    """Span of the root vectors ``e_gamma`` for gamma in ``roots`` (all in g_degree)."""

    pg: ParabolicGrading = field(repr=False, compare=False)
    degree: int
    roots: FrozenSet[Root]

    @property
    def dim(self) -> int:
        return len(self.roots)

    @property
    def buckets(self) -> Dict[Tuple[int, ...], FrozenSet[Root]]:
        out: Dict[Tuple[int, ...], set] = {}
        for r in self.roots:
            out.setdefault(self.pg.multigrade(r), set()).add(r)
        return {k: frozenset(v) for k, v in sorted(out.items())}

    def vectors(self) -> List[GVector]:
        return [{self.pg.rs.index[r]: Fraction(1)} for r in sorted(self.roots)]

    def contains(self, v: GVector) -> bool:
        rs = self.pg.rs
        return all(k >= rs.rank and rs.roots[k - rs.rank] in self.roots for k in v)


def _in_span(basis: Sequence[Sequence[Fraction]], v: Sequence[Fraction]) -> bool:
    if not basis:
        return not any(v)
    m = DomainMatrix([[QQ(x.numerator, x.denominator) for x in row] for row in basis], (len(basis), len(v)), QQ)
    ext = DomainMatrix([[QQ(x.numerator, x.denominator) for x in row] for row in list(basis) + [list(v)]],
                       (len(basis) + 1, len(v)), QQ)
    return m.rank() == ext.rank()


def _nullspace_rows(rows: List[List[Fraction]], ncols: int) -> List[Tuple[Fraction, ...]]:
    if not rows:
        return [tuple(Fraction(int(i == j)) for j in range(ncols)) for i in range(ncols)]
    m = DomainMatrix([[QQ(x.numerator, x.denominator) for x in r] for r in rows], (len(rows), ncols), QQ)
    ns = m.nullspace().to_list()
    return [tuple(Fraction(int(x.numerator), int(x.denominator)) for x in r) for r in ns]


# ---------------------------------------------------------------- annihilator
def _target(pg: ParabolicGrading, phi) -> Tuple[Tuple[Fraction, ...], Cochain]:
    """Weight in fundamental coordinates and cochain for a component or a lowest-weight cochain."""
    if isinstance(phi, HarmonicComponent):
        return phi.lowest_weight, phi.lowest_cochain()
    if not phi:
        raise InputError("the zero cochain has no meaningful annihilator")
    from .kostant import cochain_weight
    wts = {cochain_weight(pg.rs, k) for k in phi}
    if len(wts) != 1:
        raise InputError("cochain is not a weight vector")
    return pg.rs.to_fundamental(wts.pop()), phi


def annihilator(pg: ParabolicGrading, phi, method: str = "weight") -> AnnihilatorSpace:
    """``{A in g0 : A.phi = 0}`` for a lowest-weight cochain (or its component)."""
    nu, cochain = _target(pg, phi)
    if method == "dense":
        return _annihilator_dense(pg, cochain)
    if method != "weight":
        raise InputError(f"unknown method {method!r}")
    rs = pg.rs
    cartan = _nullspace_rows([[Fraction(x) for x in nu]], rs.rank)
    roots = set()
    for beta in pg.g0_roots:
        if not rs.is_positive(beta):
            roots.add(beta)
        elif sum(c * x for c, x in zip(rs.coroot(beta), nu)) == 0:
            roots.add(beta)
    return AnnihilatorSpace(pg, tuple(cartan), frozenset(roots))


def _annihilator_dense(pg: ParabolicGrading, phi: Cochain) -> AnnihilatorSpace:
    rs = pg.rs
    r = rs.rank
    g0_basis = list(range(r)) + [rs.index[b] for b in pg.g0_roots]
    images = [act_g0(pg, x, phi) for x in g0_basis]
    keys = sorted({k for im in images for k in im})
    rows = [[im.get(k, Fraction(0)) for im in images] for k in keys]
    full = _nullspace_rows(rows, len(g0_basis))
    cartan = _nullspace_rows([row[:r] for row in rows], r)
    roots = frozenset(b for b, im in zip(pg.g0_roots, images[r:]) if not im)
    out = AnnihilatorSpace(pg, tuple(cartan), roots)
    # a torus-stable kernel is the sum of its Cartan part and its root lines
    if out.dim != len(full):
        raise ConsistencyError("dense annihilator is not torus stable")
    return out


# ---------------------------------------------------------------- prolongation
def prolongation(pg: ParabolicGrading, ann: AnnihilatorSpace, i: int) -> ProlongationSpace:
    """``pr_i = {Z in g_i : [X, Z] in pr_{i-1} for all X in g_-1}``, ``pr_0 = ann``."""
    if i < 1:
        raise InputError("prolongation degree must be >= 1")
    return prolongation_chain(pg, ann)[i - 1] if i <= pg.k else ProlongationSpace(pg, i, frozenset())


def prolongation_chain(pg: ParabolicGrading, ann: AnnihilatorSpace) -> List[ProlongationSpace]:
    rs = pg.rs
    ann_h = ann.cartan
    minus_one = pg.layers[-1]
    out: List[ProlongationSpace] = []
    prev = ann.roots
    for i in range(1, pg.k + 1):
        cur = set()
        for gam in pg.layers[i]:
            ok = True
            for beta in minus_one:
                s = tuple(x + y for x, y in zip(gam, beta))
                if not any(s):
                    # [e_-gam, e_gam] = -h_gam must lie in ann
                    if not _in_span(ann_h, rs.coroot(gam)):
                        ok = False
                        break
                elif rs.is_root(s) and s not in prev:
                    ok = False
                    break
            if ok:
                cur.add(gam)
        space = ProlongationSpace(pg, i, frozenset(cur))
        out.append(space)
        prev = space.roots
    return out


def prolongation_dense(pg: ParabolicGrading, ann: AnnihilatorSpace, i: int) -> List[GVector]:
    """Same space by solving the iterated linear system over arbitrary vectors."""
    rs = pg.rs
    target = ann.vectors()
    for deg in range(1, i + 1):
        layer = [rs.index[r] for r in pg.layers[deg]]
        if not layer:
            return []
        minus = [rs.index[r] for r in pg.layers[-1]]
        # unknowns: coefficients over layer, plus one copy of target coords per X
        tkeys = sorted({k for v in target for k in v})
        rows: List[List[Fraction]] = []
        nt = len(target)
        ncols = len(layer) + nt * len(minus)
        for xi, x in enumerate(minus):
            imgs = [bracket(rs, {x: Fraction(1)}, {z: Fraction(1)}) for z in layer]
            keys = sorted({k for im in imgs for k in im} | set(tkeys))
            for k in keys:
                row = [im.get(k, Fraction(0)) for im in imgs] + [Fraction(0)] * (nt * len(minus))
                for t, v in enumerate(target):
                    row[len(layer) + xi * nt + t] = -v.get(k, Fraction(0))
                rows.append(row)
        ns = _nullspace_rows(rows, ncols)
        proj = [v[: len(layer)] for v in ns]
        basis = _row_basis(proj)
        target = [{layer[j]: c for j, c in enumerate(v) if c} for v in basis]
    return target


def _row_basis(rows: List[Sequence[Fraction]]) -> List[Tuple[Fraction, ...]]:
    if not rows:
        return []
    n = len(rows[0])
    m = DomainMatrix([[QQ(x.numerator, x.denominator) for x in r] for r in rows], (len(rows), n), QQ)
    red, piv = m.rref()
    out = red.to_list()[: len(piv)]
    return [tuple(Fraction(int(x.numerator), int(x.denominator)) for x in r) for r in out]


def in_prolongation(pg: ParabolicGrading, ann: AnnihilatorSpace, z: GVector, i: int) -> bool:
    """Direct test of ``ad(X_1)...ad(X_i) Z in ann`` for all X_j in a g_-1 basis."""
    rs = pg.rs
    minus = [{rs.index[r]: Fraction(1)} for r in pg.layers[-1]]
    cur = [z]
    for _ in range(i):
        nxt = []
        for v in cur:
            for x in minus:
                w = bracket(rs, x, v)
                if w:
                    nxt.append(w)
        cur = nxt
    return all(ann.contains(v) for v in cur)


def intersect_prolongations(spaces: Sequence[ProlongationSpace]) -> ProlongationSpace:
    if not spaces:
        raise InputError("need at least one space")
    deg = spaces[0].degree
    if any(s.degree != deg for s in spaces):
        raise InputError("degree mismatch")
    roots = frozenset.intersection(*(s.roots for s in spaces))
    return ProlongationSpace(spaces[0].pg, deg, roots)


def a_spaces(pg: ParabolicGrading, components: Iterable[HarmonicComponent]) -> List[ProlongationSpace]:
    """``a_i`` (i = 1..k): intersection of pr(phi_0)_i over the given components."""
    chains = [prolongation_chain(pg, annihilator(pg, hc)) for hc in components]
    if not chains:
        raise InputError("no components")
    return [intersect_prolongations([c[i] for c in chains]) for i in range(pg.k)]


# ---------------------------------------------------------------- insertion
def _g0_stable(pg: ParabolicGrading, roots: FrozenSet[Root]) -> bool:
    rs = pg.rs
    for r in roots:
        for b in pg.g0_roots:
            s = tuple(x + y for x, y in zip(r, b))
            if rs.is_root(s) and pg.height(s) < 0 and s not in roots:
                return False
    return True


def inserts_trivially(pg: ParabolicGrading, phi: Union[HarmonicComponent, List[Cochain]],
                      q_part: Iterable[Root]) -> bool:
    """True iff every cochain of the component vanishes with an argument in span(q_part)."""
    q = frozenset(tuple(r) for r in q_part)
    if not q:
        return True
    rs = pg.rs
    if isinstance(phi, HarmonicComponent):
        if _g0_stable(pg, q):
            # the cochains killing span(q) form a g0-submodule: test the generator
            return not (set(phi.arg_roots) & q)
        basis = realize_component(pg, phi)
    else:
        basis = phi
    qidx = {rs.index[r] for r in q}
    return all(not (set(s) & qidx) for cochain in basis for (s, _v) in cochain)


def inserts_trivially_dense(pg: ParabolicGrading, hc: HarmonicComponent, q_part: Iterable[Root]) -> bool:
    """Evaluate every realized cochain on every argument pair meeting span(q_part)."""
    rs = pg.rs
    basis = realize_component(pg, hc)
    neg = sorted(rs.index[r] for r in pg.negative_roots)
    qidx = [rs.index[tuple(r)] for r in q_part]
    for phi in basis:
        for x in qidx:
            for y in neg:
                if evaluate(pg, phi, x, y):
                    return False
    return True
