"""Root systems and Chevalley bases for the finite simple types A-G.

Everything is exact: roots are integer tuples over the simple roots, weights
are tuples of ``Fraction`` in fundamental-weight coordinates, and structure
constants are integers.

Node numbering follows Bourbaki.  The Cartan matrix convention is
``a[i][j] = <alpha_j, alpha_i^vee>``, so ``<beta, alpha_i^vee> = sum_j c_j a[i][j]``
for ``beta = sum_j c_j alpha_j``.

Structure-constant signs: positive roots are totally ordered by
(height, coefficient tuple).  For every non-simple positive root xi the
extraspecial pair (alpha, beta) has alpha minimal among decompositions
xi = alpha + beta with alpha < beta, and we set ``N[alpha, beta] = p + 1 > 0``
where p is the largest integer with ``beta - p*alpha`` a root.  All other
constants follow from the Chevalley relations, with ``N[-a, -b] = -N[a, b]``
and ``[e_a, e_-a] = h_a`` (the coroot).
"""
from __future__ import annotations

import enum
from dataclasses import dataclass
from fractions import Fraction
from functools import cached_property
from typing import Dict, Iterable, List, Optional, Sequence, Tuple

from .errors import InputError

Root = Tuple[int, ...]
Weight = Tuple[Fraction, ...]
GVector = Dict[int, Fraction]


class Family(str, enum.Enum):
    A = "A"
    B = "B"
    C = "C"
    D = "D"
    E = "E"
    F = "F"
    G = "G"


_RANK_BOUNDS = {
    Family.A: (1, None),
    Family.B: (2, None),
    Family.C: (2, None),
    Family.D: (3, None),
    Family.E: (6, 8),
    Family.F: (4, 4),
    Family.G: (2, 2),
}


@dataclass(frozen=True, order=True)
class SimpleType:
    family: Family
    rank: int

    def __post_init__(self) -> None:
        fam = Family(self.family)
        object.__setattr__(self, "family", fam)
        lo, hi = _RANK_BOUNDS[fam]
        if not isinstance(self.rank, int) or self.rank < lo or (hi is not None and self.rank > hi):
            raise InputError(f"rank {self.rank} out of bounds for family {fam.value}")

    @classmethod
    def parse(cls, tag: str) -> "SimpleType":
        tag = tag.strip().upper()
        if len(tag) < 2 or tag[0] not in "ABCDEFG" or not tag[1:].isdigit():
            raise InputError(f"cannot parse simple type {tag!r}")
        return cls(Family(tag[0]), int(tag[1:]))

    @property
    def label(self) -> str:
        return f"{self.family.value}{self.rank}"

    def __str__(self) -> str:
        return self.label


def cartan_matrix(t: SimpleType) -> Tuple[Tuple[int, ...], ...]:
    """Bourbaki-ordered Cartan matrix ``a[i][j] = <alpha_j, alpha_i^vee>``."""
    n = t.rank
    a = [[2 if i == j else 0 for j in range(n)] for i in range(n)]

    def link(i: int, j: int, aij: int = -1, aji: int = -1) -> None:
        a[i][j] = aij
        a[j][i] = aji

    fam = t.family
    if fam in (Family.A, Family.B, Family.C):
        for i in range(n - 1):
            link(i, i + 1)
        if fam is Family.B:
            # alpha_n short
            link(n - 2, n - 1, -1, -2)
        elif fam is Family.C:
            # alpha_n long
            link(n - 2, n - 1, -2, -1)
    elif fam is Family.D:
        for i in range(n - 2):
            link(i, i + 1)
        link(n - 3, n - 1)
    elif fam is Family.E:
        link(0, 2)
        link(1, 3)
        for i in range(2, n - 1):
            link(i, i + 1)
    elif fam is Family.F:
        link(0, 1)
        link(1, 2, -1, -2)
        link(2, 3)
    elif fam is Family.G:
        # alpha_1 short, alpha_2 long; highest root 3a1 + 2a2
        link(0, 1, -3, -1)
    return tuple(tuple(row) for row in a)


def _symmetrizer(a: Sequence[Sequence[int]]) -> Tuple[Fraction, ...]:
    """Squared lengths (alpha_i, alpha_i), normalized so the longest is 2 per component."""
    n = len(a)
    norms: List[Optional[Fraction]] = [None] * n
    for start in range(n):
        if norms[start] is not None:
            continue
        norms[start] = Fraction(2)
        comp = [start]
        stack = [start]
        while stack:
            i = stack.pop()
            for j in range(n):
                if j != i and a[i][j] != 0 and norms[j] is None:
                    # a_ij n_i = a_ji n_j
                    norms[j] = norms[i] * a[i][j] / a[j][i]
                    comp.append(j)
                    stack.append(j)
        top = max(norms[i] for i in comp)
        for i in comp:
            norms[i] = norms[i] * 2 / top
    return tuple(norms)  # type: ignore[arg-type]


def _invert(a: Sequence[Sequence[int]]) -> List[List[Fraction]]:
    n = len(a)
    m = [[Fraction(a[i][j]) for j in range(n)] + [Fraction(int(i == j)) for j in range(n)] for i in range(n)]
    for col in range(n):
        piv = next(r for r in range(col, n) if m[r][col] != 0)
        m[col], m[piv] = m[piv], m[col]
        inv = 1 / m[col][col]
        m[col] = [x * inv for x in m[col]]
        for r in range(n):
            if r != col and m[r][col] != 0:
                f = m[r][col]
                m[r] = [x - f * y for x, y in zip(m[r], m[col])]
    return [row[n:] for row in m]


class RootSystem:
    """Roots, Weyl data and Chevalley structure constants of a Cartan matrix.

    Basis of g used for vectors: indices ``0..rank-1`` are the Cartan elements
    ``h_i`` (simple coroots), followed by one root vector ``e_alpha`` per root
    in ``self.roots`` order.
    """

    def __init__(self, cartan: Sequence[Sequence[int]], simple_type: Optional[SimpleType] = None):
        self.simple_type = simple_type
        self.cartan_matrix: Tuple[Tuple[int, ...], ...] = tuple(tuple(int(x) for x in r) for r in cartan)
        self.rank = len(self.cartan_matrix)
        self.norms = _symmetrizer(self.cartan_matrix)
        self._cartan_inv = _invert(self.cartan_matrix)
        self.positive_roots: Tuple[Root, ...] = self._positive_roots()
        neg = tuple(tuple(-c for c in r) for r in self.positive_roots)
        self.roots: Tuple[Root, ...] = self.positive_roots + neg
        self._root_set = frozenset(self.roots)
        self.simple_roots: Tuple[Root, ...] = tuple(
            tuple(int(i == j) for j in range(self.rank)) for i in range(self.rank)
        )
        self.index: Dict[Root, int] = {r: self.rank + k for k, r in enumerate(self.roots)}
        self.dim = self.rank + len(self.roots)
        self.rho: Weight = tuple(Fraction(1) for _ in range(self.rank))
        self._n: Dict[Tuple[Root, Root], int] = {}
        self._extraspecial: Dict[Root, Tuple[Root, Root]] = {}
        self._build_structure_constants()

    # ------------------------------------------------------------------ roots
    def _positive_roots(self) -> Tuple[Root, ...]:
        n = self.rank
        simple = [tuple(int(i == j) for j in range(n)) for i in range(n)]
        found = set(simple)
        layer = list(simple)
        while layer:
            nxt = []
            for beta in layer:
                for i in range(n):
                    p = 0
                    while True:
                        cand = tuple(c - (p + 1) * int(k == i) for k, c in enumerate(beta))
                        if cand in found:
                            p += 1
                        else:
                            break
                    q = p - self.pairing(beta, i)
                    if q > 0:
                        up = tuple(c + int(k == i) for k, c in enumerate(beta))
                        if up not in found:
                            found.add(up)
                            nxt.append(up)
            layer = nxt
        return tuple(sorted(found, key=lambda r: (sum(r), r)))

    def is_root(self, beta: Root) -> bool:
        return beta in self._root_set

    def is_positive(self, beta: Root) -> bool:
        return any(c > 0 for c in beta)

    @staticmethod
    def height(beta: Root) -> int:
        return sum(beta)

    @cached_property
    def highest_root(self) -> Root:
        return self.positive_roots[-1]

    def pairing(self, beta: Iterable[int], i: int) -> int:
        """``<beta, alpha_i^vee>`` for beta in root coordinates."""
        row = self.cartan_matrix[i]
        return sum(c * row[j] for j, c in enumerate(beta))

    def inner(self, a: Sequence, b: Sequence) -> Fraction:
        """Invariant form with ``(alpha_i, alpha_i) = self.norms[i]``."""
        tot = Fraction(0)
        for i, ai in enumerate(a):
            if not ai:
                continue
            for j, bj in enumerate(b):
                if bj:
                    tot += ai * bj * self.cartan_matrix[i][j] * self.norms[i] / 2
        return tot

    def reflect(self, i: int, beta: Root) -> Root:
        k = self.pairing(beta, i)
        return tuple(c - k * int(j == i) for j, c in enumerate(beta))

    def coroot(self, alpha: Root) -> Tuple[Fraction, ...]:
        """Coefficients of ``alpha^vee`` over the simple coroots."""
        na = self.inner(alpha, alpha)
        return tuple(Fraction(c) * self.norms[i] / na for i, c in enumerate(alpha))

    # ---------------------------------------------------------------- weights
    def to_fundamental(self, beta: Sequence) -> Weight:
        return tuple(Fraction(sum(Fraction(c) * self.cartan_matrix[i][j] for j, c in enumerate(beta)))
                     for i in range(self.rank))

    def from_fundamental(self, lam: Sequence) -> Tuple[Fraction, ...]:
        inv = self._cartan_inv
        return tuple(sum(inv[i][j] * Fraction(lam[j]) for j in range(self.rank)) for i in range(self.rank))

    def simple_reflection_weight(self, i: int, lam: Sequence) -> Weight:
        li = Fraction(lam[i])
        return tuple(Fraction(x) - li * self.cartan_matrix[k][i] for k, x in enumerate(lam))

    # ----------------------------------------------------- structure constants
    def _order_key(self, r: Root) -> Tuple[int, Root]:
        return (sum(r), r)

    def _build_structure_constants(self) -> None:
        for xi in self.positive_roots:
            if sum(xi) == 1:
                continue
            best = None
            for a in self.positive_roots:
                if self._order_key(a) >= self._order_key(xi):
                    break
                b = tuple(x - y for x, y in zip(xi, a))
                if b in self._root_set and self.is_positive(b) and self._order_key(a) < self._order_key(b):
                    best = (a, b)
                    break
            assert best is not None
            self._extraspecial[xi] = best
        for a in self.roots:
            for b in self.roots:
                s = tuple(x + y for x, y in zip(a, b))
                if s in self._root_set:
                    self._constant(a, b)

    def _string_p(self, a: Root, b: Root) -> int:
        p = 0
        while tuple(y - (p + 1) * x for x, y in zip(a, b)) in self._root_set:
            p += 1
        return p

    def _constant(self, x: Root, y: Root) -> int:
        key = (x, y)
        got = self._n.get(key)
        if got is not None:
            return got
        s = tuple(u + v for u, v in zip(x, y))
        if s not in self._root_set:
            return 0
        px, py = self.is_positive(x), self.is_positive(y)
        if px and py:
            if self._order_key(x) > self._order_key(y):
                val = -self._constant(y, x)
            else:
                a1, b1 = self._extraspecial[s]
                if (x, y) == (a1, b1):
                    val = self._string_p(a1, b1) + 1
                else:
                    na1, nb1 = tuple(-c for c in a1), tuple(-c for c in b1)
                    acc = Fraction(0)
                    ya = tuple(u - v for u, v in zip(y, a1))
                    xb = tuple(u - v for u, v in zip(x, b1))
                    if ya in self._root_set and xb in self._root_set:
                        acc += Fraction(self._constant(y, na1) * self._constant(x, nb1)) / self.inner(ya, ya)
                    xa = tuple(u - v for u, v in zip(x, a1))
                    yb = tuple(u - v for u, v in zip(y, b1))
                    if xa in self._root_set and yb in self._root_set:
                        acc += Fraction(self._constant(na1, x) * self._constant(y, nb1)) / self.inner(xa, xa)
                    v = self.inner(s, s) / self._constant(a1, b1) * acc
                    assert v.denominator == 1
                    val = int(v)
        elif not px and not py:
            val = -self._constant(tuple(-c for c in x), tuple(-c for c in y))
        else:
            z = tuple(-c for c in s)
            pz = self.is_positive(z)
            if pz == py:
                v = self.inner(z, z) / self.inner(x, x) * self._constant(y, z)
            else:
                v = self.inner(z, z) / self.inner(y, y) * self._constant(z, x)
            assert v.denominator == 1
            val = int(v)
        self._n[key] = val
        return val

    def structure_constant(self, a: Root, b: Root) -> int:
        """``N[a, b]`` with ``[e_a, e_b] = N[a, b] e_{a+b}``; 0 if a+b is not a root."""
        return self._n.get((a, b), 0)

    @property
    def structure_constants(self) -> Dict[Tuple[Root, Root], int]:
        return dict(self._n)

    def extraspecial_pair(self, xi: Root) -> Tuple[Root, Root]:
        return self._extraspecial[xi]

    # ----------------------------------------------------------- basis labels
    def root_of(self, k: int) -> Optional[Root]:
        return None if k < self.rank else self.roots[k - self.rank]

    def basis_label(self, k: int) -> str:
        if k < self.rank:
            return f"h{k + 1}"
        return "e" + format_root(self.roots[k - self.rank])

    def __repr__(self) -> str:
        name = self.simple_type.label if self.simple_type else f"rank{self.rank}"
        return f"RootSystem({name})"


def format_root(beta: Sequence[int]) -> str:
    """Human form such as ``a1+2a2`` or ``-a1-a2``."""
    parts = []
    for i, c in enumerate(beta):
        if not c:
            continue
        coef = "" if abs(c) == 1 else str(abs(c))
        sign = "-" if c < 0 else "+"
        parts.append(f"{sign}{coef}a{i + 1}")
    s = "".join(parts) or "0"
    return s[1:] if s.startswith("+") else s


_CACHE: Dict[SimpleType, RootSystem] = {}


def build_root_system(t: SimpleType) -> RootSystem:
    """Return the (cached, immutable) root system of a simple type."""
    if not isinstance(t, SimpleType):
        raise InputError(f"expected SimpleType, got {t!r}")
    rs = _CACHE.get(t)
    if rs is None:
        rs = RootSystem(cartan_matrix(t), t)
        _CACHE[t] = rs
    return rs


def doubled_root_system(rs: RootSystem) -> RootSystem:
    """Root system of the complexification of a complex algebra viewed as real.

    Nodes ``0..r-1`` are the original ones, ``r..2r-1`` their conjugates.
    """
    r = rs.rank
    a = [[0] * (2 * r) for _ in range(2 * r)]
    for i in range(r):
        for j in range(r):
            a[i][j] = rs.cartan_matrix[i][j]
            a[r + i][r + j] = rs.cartan_matrix[i][j]
    return RootSystem(a, None)


# ------------------------------------------------------------------ brackets
def _add(out: GVector, k: int, c) -> None:
    v = out.get(k, 0) + c
    if v:
        out[k] = v
    else:
        out.pop(k, None)


def bracket_basis(rs: RootSystem, x: int, y: int) -> GVector:
    """Bracket of two basis elements (indices into the g basis)."""
    out: GVector = {}
    r = rs.rank
    if x < r and y < r:
        return out
    if x < r:
        beta = rs.roots[y - r]
        c = rs.pairing(beta, x)
        if c:
            out[y] = Fraction(c)
        return out
    if y < r:
        beta = rs.roots[x - r]
        c = rs.pairing(beta, y)
        if c:
            out[x] = Fraction(-c)
        return out
    a, b = rs.roots[x - r], rs.roots[y - r]
    s = tuple(u + v for u, v in zip(a, b))
    if not any(s):
        for i, c in enumerate(rs.coroot(a)):
            if c:
                out[i] = c
        return out
    n = rs.structure_constant(a, b)
    if n:
        out[rs.index[s]] = Fraction(n)
    return out


def chevalley_bracket(rs: RootSystem, x, y) -> GVector:
    """Bracket of two basis elements given as roots or ``('h', i)`` tags (0-based i)."""
    return bracket_basis(rs, _basis_index(rs, x), _basis_index(rs, y))


def _basis_index(rs: RootSystem, x) -> int:
    if isinstance(x, int):
        return x
    if isinstance(x, tuple) and len(x) == 2 and x[0] == "h":
        return int(x[1])
    x = tuple(x)
    if x not in rs.index:
        raise InputError(f"{x} is not a root of {rs}")
    return rs.index[x]


def bracket(rs: RootSystem, u: GVector, v: GVector) -> GVector:
    """Bilinear extension of the Chevalley bracket to sparse vectors."""
    out: GVector = {}
    for i, a in u.items():
        for j, b in v.items():
            for k, c in bracket_basis(rs, i, j).items():
                _add(out, k, a * b * c)
    return out


def ad_power_chain(rs: RootSystem, xs: Sequence[GVector], z: GVector) -> GVector:
    """``ad(x_1) ... ad(x_m) z``."""
    cur = z
    for x in reversed(xs):
        cur = bracket(rs, x, cur)
        if not cur:
            break
    return cur


# ------------------------------------------------------------------- weyl
def affine_action(rs: RootSystem, word: Sequence[int], lam: Sequence) -> Weight:
    """``w . lam = w(lam + rho) - rho`` with ``w = s_{word[0]} ... s_{word[-1]}``.

    Indices in ``word`` are 1-based node numbers; ``lam`` is in fundamental
    coordinates.  Reflections are applied right to left.
    """
    for i in word:
        if not 1 <= i <= rs.rank:
            raise InputError(f"node {i} out of range for {rs}")
    mu = [Fraction(x) + 1 for x in lam]
    for i in reversed(word):
        mu = list(rs.simple_reflection_weight(i - 1, mu))
    return tuple(x - 1 for x in mu)


def weyl_word_on_root(rs: RootSystem, word: Sequence[int], beta: Root) -> Root:
    for i in reversed(word):
        beta = rs.reflect(i - 1, beta)
    return beta


def diagram_automorphisms(t: SimpleType) -> List[Tuple[int, ...]]:
    """Dynkin diagram automorphisms as 0-based node permutations (identity first)."""
    n = t.rank
    ident = tuple(range(n))
    out = [ident]
    fam = t.family
    if fam is Family.A and n > 1:
        out.append(tuple(n - 1 - i for i in range(n)))
    elif fam is Family.D and n == 4:
        for perm in ((0, 3, 2), (2, 0, 3), (2, 3, 0), (3, 0, 2), (3, 2, 0)):
            p = list(ident)
            p[0], p[2], p[3] = perm
            out.append(tuple(p))
    elif fam is Family.D:
        p = list(ident)
        p[n - 2], p[n - 1] = n - 1, n - 2
        out.append(tuple(p))
    elif fam is Family.E and n == 6:
        out.append((5, 1, 4, 3, 2, 0))
    return out
