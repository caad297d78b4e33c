"""Harmonic curvature components of a parabolic grading.

A component is indexed by a length-2 element ``w = s_p s_q`` of the Hasse set
W^p and has highest weight ``w . lambda`` where lambda is the highest root.
We work on the cochain side ``Lambda^2 g_-^* (x) g``: the lowest-weight cochain
is ``e^{-alpha_p} ^ e^{-s_p(alpha_q)} (x) e_{-w(lambda)}`` with weight
``-(w . lambda)``.

The cochain basis element ``(S, v)`` (``S`` a sorted tuple of g_- basis
indices, ``v`` a g basis index) is the form ``e^{S[0]} ^ ... ^ e^{S[-1]} (x) e_v``
that sends the ordered tuple ``(e_{S[0]}, ...)`` to ``e_v``.
"""
from __future__ import annotations

import itertools
import threading
from dataclasses import dataclass, field
from fractions import Fraction
from typing import Dict, Iterable, List, Optional, Sequence, Tuple

from sympy import QQ
from sympy.polys.matrices import DomainMatrix

from .errors import ConsistencyError, InputError, ResourceGuardError
from .lie_core import Root, RootSystem, Weight, affine_action, bracket_basis, weyl_word_on_root
from .parabolic import ParabolicGrading

CochainKey = Tuple[Tuple[int, ...], int]
Cochain = Dict[CochainKey, Fraction]


@dataclass(eq=False)
class HarmonicComponent:
    pg: ParabolicGrading = field(repr=False)
    label: Tuple[int, int]
    word: Tuple[int, int]
    highest_weight: Weight
    lowest_weight: Weight
    lowest_weight_roots: Tuple[Fraction, ...]
    homogeneity: int
    arg_roots: Tuple[Root, Root]
    value_root: Root

    @property
    def regular(self) -> bool:
        return self.homogeneity >= 1

    @property
    def label_str(self) -> str:
        return f"(a{self.label[0]},a{self.label[1]})"

    @property
    def multigrade(self) -> Tuple[int, ...]:
        """Σ-coefficients of the lowest weight (the eigenvalue exponent of s on μ)."""
        return tuple(int(self.lowest_weight_roots[s - 1]) for s in self.pg.sigma)

    def lowest_cochain(self) -> Cochain:
        rs = self.pg.rs
        a, b = (rs.index[r] for r in self.arg_roots)
        sign = 1
        if a > b:
            a, b, sign = b, a, -1
        return {((a, b), rs.index[self.value_root]): Fraction(sign)}

    @property
    def dimension(self) -> int:
        return weyl_dimension(self.pg, self.highest_weight)


def hasse_words(pg: ParabolicGrading) -> List[Tuple[int, int]]:
    """Length-2 elements ``s_p s_q`` of W^p as 1-based pairs ``(p, q)``."""
    a = pg.rs.cartan_matrix
    out = []
    for p in pg.sigma:
        for q in range(1, pg.rs.rank + 1):
            if q == p or (q not in pg.sigma and a[p - 1][q - 1] == 0):
                continue
            # commuting reflections give the same element; keep p < q
            if a[p - 1][q - 1] == 0 and q < p:
                continue
            out.append((p, q))
    return out


def harmonic_components(pg: ParabolicGrading, include_irregular: bool = False) -> List[HarmonicComponent]:
    """One component per length-2 Hasse word; by default only homogeneity >= 1."""
    cache = pg.__dict__.setdefault("_harmonic", {})
    if include_irregular in cache:
        return cache[include_irregular]
    rs = pg.rs
    lam = rs.to_fundamental(rs.highest_root)
    out = []
    for p, q in hasse_words(pg):
        hw = affine_action(rs, (p, q), lam)
        low = tuple(-x for x in hw)
        low_roots = rs.from_fundamental(low)
        ap = rs.simple_roots[p - 1]
        spq = rs.reflect(p - 1, rs.simple_roots[q - 1])
        wl = weyl_word_on_root(rs, (p, q), rs.highest_root)
        # lowest weight = alpha_p + s_p(alpha_q) - w(lambda)
        check = tuple(Fraction(x + y - z) for x, y, z in zip(ap, spq, wl))
        if check != low_roots:
            raise ConsistencyError(f"lowest weight mismatch for word {(p, q)}")
        hc = HarmonicComponent(
            pg=pg,
            label=(p, q),
            word=(p, q),
            highest_weight=hw,
            lowest_weight=low,
            lowest_weight_roots=low_roots,
            homogeneity=pg.height(int(x) for x in low_roots),
            arg_roots=(tuple(-c for c in ap), tuple(-c for c in spq)),
            value_root=tuple(-c for c in wl),
        )
        if include_irregular or hc.regular:
            out.append(hc)
    cache[include_irregular] = out
    return out


def find_component(pg: ParabolicGrading, label: Tuple[int, int], include_irregular: bool = True) -> HarmonicComponent:
    for hc in harmonic_components(pg, include_irregular=include_irregular):
        if hc.label == tuple(label):
            return hc
    avail = ", ".join(hc.label_str for hc in harmonic_components(pg, include_irregular=True))
    raise InputError(f"no component (a{label[0]},a{label[1]}); available: {avail}")


def weyl_dimension(pg: ParabolicGrading, hw: Sequence) -> int:
    """Dimension of the irreducible g0-module with highest weight ``hw``."""
    rs = pg.rs
    num = Fraction(1)
    for beta in pg.g0_positive:
        cor = rs.coroot(beta)
        num *= sum((Fraction(x) + 1) * c for x, c in zip(hw, cor)) / sum(cor)
    if num.denominator != 1:
        raise ConsistencyError("non-integral Weyl dimension")
    return int(num)


# ------------------------------------------------------------------ cochains
def _g_weight(rs: RootSystem, v: int) -> Root:
    return (0,) * rs.rank if v < rs.rank else rs.roots[v - rs.rank]


def cochain_weight(rs: RootSystem, key: CochainKey) -> Root:
    s, v = key
    w = list(_g_weight(rs, v))
    for i in s:
        for t, c in enumerate(rs.roots[i - rs.rank]):
            w[t] -= c
    return tuple(w)


def _sort_sign(seq: List[int]) -> Tuple[int, Optional[Tuple[int, ...]]]:
    if len(set(seq)) != len(seq):
        return 0, None
    sign = 1
    arr = list(seq)
    for i in range(len(arr)):
        for j in range(len(arr) - 1 - i):
            if arr[j] > arr[j + 1]:
                arr[j], arr[j + 1] = arr[j + 1], arr[j]
                sign = -sign
    return sign, tuple(arr)


def _add(out: Dict, key, c) -> None:
    v = out.get(key, 0) + c
    if v:
        out[key] = v
    else:
        out.pop(key, None)


def act_g0(pg: ParabolicGrading, x: int, phi: Cochain) -> Cochain:
    """Tensorial action of the g0 basis element ``x`` on a cochain over g_-."""
    rs = pg.rs
    out: Cochain = {}
    for (s, v), c in phi.items():
        for w, d in bracket_basis(rs, x, v).items():
            _add(out, (s, w), c * d)
        for pos, b in enumerate(s):
            # (x . e^b)(Y) = -e^b([x, Y])
            if x < rs.rank:
                coef = -rs.pairing(rs.roots[b - rs.rank], x)
                if coef:
                    _add(out, (s, v), c * coef)
                continue
            gam = rs.roots[x - rs.rank]
            beta = rs.roots[b - rs.rank]
            delta = tuple(u - g for u, g in zip(beta, gam))
            if not rs.is_root(delta) or pg.height(delta) >= 0:
                continue
            n = rs.structure_constant(gam, delta)
            if not n:
                continue
            new = list(s)
            new[pos] = rs.index[delta]
            sign, srt = _sort_sign(new)
            if sign:
                _add(out, (srt, v), -c * n * sign)
    return out


def differential(pg: ParabolicGrading, key: CochainKey) -> Cochain:
    """Lie algebra cohomology differential of a basis cochain over g_-."""
    rs = pg.rs
    s, v = key
    neg = _neg_indices(pg)
    out: Cochain = {}
    sset = set(s)
    for x in neg:
        if x in sset:
            continue
        t = tuple(sorted(s + (x,)))
        i = t.index(x)
        for w, d in bracket_basis(rs, x, v).items():
            _add(out, (t, w), (-1) ** i * d)
    for pos, g in enumerate(s):
        rest = s[:pos] + s[pos + 1:]
        rset = set(rest)
        for a, b, n in _splittings(pg, g):
            if a in rset or b in rset:
                continue
            t = tuple(sorted(rest + (a, b)))
            i, j = t.index(a), t.index(b)
            if i > j:
                i, j = j, i
                n = -n
            _add(out, (t, v), Fraction((-1) ** (i + j) * n * (-1) ** pos))
    return out


def _neg_indices(pg: ParabolicGrading) -> Tuple[int, ...]:
    got = pg.__dict__.get("_neg_idx")
    if got is None:
        got = tuple(sorted(pg.rs.index[r] for r in pg.negative_roots))
        pg.__dict__["_neg_idx"] = got
    return got


def _splittings(pg: ParabolicGrading, g: int) -> List[Tuple[int, int, int]]:
    """Pairs ``a < b`` of g_- indices with ``[e_a, e_b] = n e_g``."""
    cache = pg.__dict__.setdefault("_split", {})
    if g in cache:
        return cache[g]
    rs = pg.rs
    gam = rs.roots[g - rs.rank]
    res = []
    for a in _neg_indices(pg):
        alpha = rs.roots[a - rs.rank]
        beta = tuple(x - y for x, y in zip(gam, alpha))
        if rs.is_root(beta) and pg.height(beta) < 0:
            b = rs.index[beta]
            if a < b:
                res.append((a, b, rs.structure_constant(alpha, beta)))
    cache[g] = res
    return res


# --------------------------------------------------------------- realization
_REAL_LOCK = threading.Lock()


def realize_component(pg: ParabolicGrading, hc: HarmonicComponent) -> List[Cochain]:
    """Basis of the g0-submodule generated by the lowest-weight cochain.

    Computed once per component (guarded by a lock) and cached.
    """
    cache = pg.__dict__.setdefault("_realized", {})
    with _REAL_LOCK:
        if hc.label in cache:
            return cache[hc.label]
    phi0 = hc.lowest_cochain()
    raising = [pg.rs.index[pg.rs.simple_roots[j]] for j in pg.g0_simple]
    basis: List[Cochain] = [phi0]
    layer = [phi0]
    while layer:
        buckets: Dict[Root, List[Cochain]] = {}
        for phi in layer:
            for x in raising:
                img = act_g0(pg, x, phi)
                if img:
                    wt = cochain_weight(pg.rs, next(iter(img)))
                    buckets.setdefault(wt, []).append(img)
        layer = []
        for wt in sorted(buckets):
            layer.extend(_independent(buckets[wt]))
        basis.extend(layer)
    if len(basis) != hc.dimension:
        raise ConsistencyError(f"realized dimension {len(basis)} != Weyl dimension {hc.dimension}")
    with _REAL_LOCK:
        cache.setdefault(hc.label, basis)
    return cache[hc.label]


def _independent(vectors: List[Cochain]) -> List[Cochain]:
    """Row-reduced basis of the span (echelon form, exact)."""
    pivots: List[Tuple[CochainKey, Cochain]] = []
    for v in vectors:
        v = dict(v)
        for key, p in pivots:
            c = v.get(key)
            if c:
                for k2, c2 in p.items():
                    _add(v, k2, -c * c2)
        if v:
            key = min(v)
            c = v[key]
            v = {k: x / c for k, x in v.items()}
            for i, (k0, p) in enumerate(pivots):
                c0 = p.get(key)
                if c0:
                    p = dict(p)
                    for k2, c2 in v.items():
                        _add(p, k2, -c0 * c2)
                    pivots[i] = (k0, p)
            pivots.append((key, v))
    return [p for _, p in pivots]


def evaluate(pg: ParabolicGrading, phi: Cochain, x: int, y: int) -> Dict[int, Fraction]:
    """``phi(e_x, e_y)`` for g_- basis indices; arguments outside g_- give 0."""
    if x == y:
        return {}
    sign = 1
    if x > y:
        x, y, sign = y, x, -1
    out: Dict[int, Fraction] = {}
    for (s, v), c in phi.items():
        if s == (x, y):
            _add(out, v, sign * c)
    return out


# ---------------------------------------------------------------- the oracle
def _weight_basis(pg: ParabolicGrading, degree: int) -> Dict[Root, List[CochainKey]]:
    rs = pg.rs
    neg = _neg_indices(pg)
    out: Dict[Root, List[CochainKey]] = {}
    for s in itertools.combinations(neg, degree):
        for v in range(rs.dim):
            key = (s, v)
            out.setdefault(cochain_weight(rs, key), []).append(key)
    return out


def _matrix(rows: List[CochainKey], cols: List[Cochain]) -> DomainMatrix:
    pos = {k: i for i, k in enumerate(rows)}
    m = [[QQ(0)] * len(cols) for _ in rows]
    for j, col in enumerate(cols):
        for k, c in col.items():
            m[pos[k]][j] = QQ(c.numerator, c.denominator)
    return DomainMatrix(m, (len(rows), len(cols)), QQ)


def brute_force_h2(pg: ParabolicGrading, max_rank: int = 3) -> Dict[Weight, int]:
    """Lowest weights (fundamental coordinates) of H^2(g_-, g) with multiplicities.

    Direct computation: for every g0-antidominant weight nu, count cocycles of
    weight nu that are lowest-weight modulo coboundaries.
    """
    rs = pg.rs
    if rs.rank > max_rank:
        raise ResourceGuardError(f"oracle limited to rank <= {max_rank}")
    c1 = _weight_basis(pg, 1)
    c2 = _weight_basis(pg, 2)
    c3 = _weight_basis(pg, 3)
    lowering = [rs.index[tuple(-c for c in rs.simple_roots[j])] for j in pg.g0_simple]
    bcache: Dict[Root, DomainMatrix] = {}

    def coboundaries(nu: Root) -> DomainMatrix:
        if nu not in bcache:
            rows = c2.get(nu, [])
            cols = [differential(pg, k) for k in c1.get(nu, [])]
            bcache[nu] = _colspace(_matrix(rows, cols))
        return bcache[nu]

    result: Dict[Weight, int] = {}
    for nu, keys in sorted(c2.items()):
        if any(rs.pairing(nu, j) > 0 for j in pg.g0_simple):
            continue
        d2 = _matrix(c3.get(nu, []), [differential(pg, k) for k in keys])
        z = d2.nullspace()
        nz = z.shape[0]
        nb = coboundaries(nu).shape[1]
        if nz == nb:
            continue
        zcols = [{keys[i]: _frac(z[j, i].element) for i in range(len(keys)) if z[j, i].element}
                 for j in range(nz)]
        # solve  sum_j c_j f(z_j) = B' y  for every lowering f simultaneously
        blocks = []
        for f in lowering:
            lower = tuple(x + y for x, y in zip(nu, _g_weight(rs, f)))
            rows = c2.get(lower, [])
            if rows:
                blocks.append((_matrix(rows, [act_g0(pg, f, zc) for zc in zcols]), coboundaries(lower)))
        if blocks:
            nrows = sum(fz.shape[0] for fz, _ in blocks)
            ncols = nz + sum(bl.shape[1] for _, bl in blocks)
            m = [[QQ(0)] * ncols for _ in range(nrows)]
            r0, c0 = 0, nz
            for fz, bl in blocks:
                fl, bll = fz.to_list(), bl.to_list()
                for i in range(fz.shape[0]):
                    m[r0 + i][:nz] = fl[i]
                    m[r0 + i][c0:c0 + bl.shape[1]] = bll[i]
                r0 += fz.shape[0]
                c0 += bl.shape[1]
            ns = DomainMatrix(m, (nrows, ncols), QQ).nullspace().to_list()
            good = DomainMatrix([row[:nz] for row in ns], (len(ns), nz), QQ).rank() if ns else 0
        else:
            good = nz
        mult = good - nb
        if mult:
            result[rs.to_fundamental(nu)] = mult
    return result


def _frac(x) -> Fraction:
    return Fraction(int(x.numerator), int(x.denominator))


def _colspace(m: DomainMatrix) -> DomainMatrix:
    if m.shape[1] == 0 or m.shape[0] == 0:
        return DomainMatrix([[]] * m.shape[0], (m.shape[0], 0), QQ) if m.shape[0] else m
    _, piv = m.rref()
    return m.extract(list(range(m.shape[0])), list(piv))


def kostant_lowest_weights(pg: ParabolicGrading) -> Dict[Weight, int]:
    out: Dict[Weight, int] = {}
    for hc in harmonic_components(pg, include_irregular=True):
        out[hc.lowest_weight] = out.get(hc.lowest_weight, 0) + 1
    return out
