"""Integer lattices in Z^n: canonical forms, saturation and quotient structure.

Thin wrappers around sympy's Hermite and Smith normal forms.  A lattice is
stored as a tuple of integer row vectors in Hermite normal form, which makes
equality of lattices plain tuple equality.
"""
from __future__ import annotations

from dataclasses import dataclass
from functools import lru_cache
from fractions import Fraction
from itertools import product
from typing import Iterable, List, Sequence, Tuple

from sympy import Matrix
from sympy.matrices.normalforms import hermite_normal_form, smith_normal_decomp

Vec = Tuple[int, ...]


@lru_cache(maxsize=200_000)
def _hnf(rows: Tuple[Vec, ...], n: int) -> Tuple[Vec, ...]:
    rows = tuple(r for r in rows if any(r))
    if not rows:
        return ()
    h = hermite_normal_form(Matrix(rows).T).T
    out = tuple(tuple(int(x) for x in h.row(i)) for i in range(h.rows))
    return tuple(sorted(out, reverse=True))


@dataclass(frozen=True)
class Lattice:
    """Sublattice of Z^n spanned by ``basis`` (canonical, use ``Lattice.span``)."""

    n: int
    basis: Tuple[Vec, ...]

    @classmethod
    def span(cls, n: int, vectors: Iterable[Sequence[int]]) -> "Lattice":
        rows = tuple(tuple(int(x) for x in v) for v in vectors)
        for r in rows:
            if len(r) != n:
                raise ValueError(f"vector {r} is not in Z^{n}")
        return cls(n, _hnf(rows, n))

    @classmethod
    def zero(cls, n: int) -> "Lattice":
        return cls(n, ())

    @classmethod
    def full(cls, n: int) -> "Lattice":
        return cls.span(n, [[int(i == j) for j in range(n)] for i in range(n)])

    @property
    def rank(self) -> int:
        return len(self.basis)

    def __add__(self, other: "Lattice") -> "Lattice":
        return Lattice.span(self.n, self.basis + other.basis)

    def add(self, vectors: Iterable[Sequence[int]]) -> "Lattice":
        return Lattice.span(self.n, list(self.basis) + [tuple(v) for v in vectors])

    def contains(self, v: Sequence[int]) -> bool:
        return self.quotient().kills(v)

    def __le__(self, other: "Lattice") -> bool:
        q = other.quotient()
        return all(q.kills(b) for b in self.basis)

    def is_full(self) -> bool:
        return self.rank == self.n and self.index() == 1

    def index(self) -> int:
        """Order of the torsion of Z^n / self (the full index when rank == n)."""
        t = 1
        for d in self.quotient().invariants:
            t *= d
        return t

    def quotient(self) -> "Quotient":
        return _quotient(self)

    def saturation(self) -> "Lattice":
        q = self.quotient()
        return Lattice.span(self.n, [q.vinv[i] for i in range(self.rank)])


@dataclass(frozen=True)
class Quotient:
    """Z^n / L  =  (+)_i Z/d_i  (+)  Z^(n - rank).

    ``coords(v) = v V``; ``v`` lies in ``L`` iff the first ``rank`` coordinates
    are divisible by ``invariants`` and the remaining ones vanish.  Rows of
    ``vinv`` (V^-1) map back: ``L`` is spanned by ``d_i * vinv[i]``.
    """

    n: int
    rank: int
    invariants: Tuple[int, ...]
    v: Tuple[Vec, ...]
    vinv: Tuple[Vec, ...]

    def coords(self, x: Sequence[int]) -> Vec:
        return tuple(sum(x[i] * self.v[i][k] for i in range(self.n)) for k in range(self.n))

    def kills(self, x: Sequence[int]) -> bool:
        c = self.coords(x)
        for k in range(self.n):
            if k < self.rank:
                if c[k] % self.invariants[k]:
                    return False
            elif c[k]:
                return False
        return True

    @property
    def torsion(self) -> Tuple[int, ...]:
        return tuple(d for d in self.invariants if d > 1)

    @property
    def free_rank(self) -> int:
        return self.n - self.rank


@lru_cache(maxsize=200_000)
def _quotient(lat: Lattice) -> Quotient:
    n = lat.n
    if not lat.basis:
        eye = tuple(tuple(int(i == j) for j in range(n)) for i in range(n))
        return Quotient(n, 0, (), eye, eye)
    a = Matrix(lat.basis)
    s, u, v = smith_normal_decomp(a)
    r = lat.rank
    inv = tuple(abs(int(s[i, i])) for i in range(r))
    # normalize signs so the diagonal is positive
    vv = [[int(v[i, k]) for k in range(n)] for i in range(n)]
    for k in range(r):
        if int(s[k, k]) < 0:
            for i in range(n):
                vv[i][k] = -vv[i][k]
    vm = Matrix(vv)
    vi = vm.inv()
    return Quotient(
        n, r, inv,
        tuple(tuple(row) for row in vv),
        tuple(tuple(int(vi[i, k]) for k in range(n)) for i in range(n)),
    )


def cyclic_refinements(lat: Lattice) -> List[Lattice]:
    """All K with lat <= K <= sat(lat) and sat(lat)/K cyclic.

    These are the kernels of characters of the finite group sat(lat)/lat.
    """
    q = lat.quotient()
    idx = [i for i in range(q.rank) if q.invariants[i] > 1]
    if not idx:
        return [lat]
    ds = [q.invariants[i] for i in idx]
    elems = list(product(*[range(d) for d in ds]))
    out = set()
    for a in elems:
        gens = []
        for c in elems:
            if sum(Fraction(ai * ci, d) for ai, ci, d in zip(a, c, ds)).denominator == 1:
                gens.append(tuple(sum(ci * q.vinv[i][j] for ci, i in zip(c, idx)) for j in range(lat.n)))
        out.add(lat.add(gens))
    return sorted(out, key=lambda l: l.basis)


def integer_kernel(rows: Sequence[Sequence[int]], n: int) -> Lattice:
    """``{x in Z^n : r . x = 0 for every row r}``."""
    rows = [list(r) for r in rows if any(r)]
    if not rows:
        return Lattice.full(n)
    s, _u, v = smith_normal_decomp(Matrix(rows))
    r = sum(1 for i in range(min(s.shape)) if s[i, i] != 0)
    return Lattice.span(n, [tuple(int(v[i, k]) for i in range(n)) for k in range(r, n)])


def restrict(lat: Lattice, k: int) -> Lattice:
    """``{x in Z^k : (x, 0) in lat}`` for a lattice in Z^(k + extra)."""
    if not lat.basis:
        return Lattice.zero(k)
    tail = [[b[j] for b in lat.basis] for j in range(k, lat.n)]
    coeffs = integer_kernel(tail, lat.rank)
    return Lattice.span(k, [[sum(c[i] * lat.basis[i][j] for i in range(lat.rank)) for j in range(k)]
                            for c in coeffs.basis])


def intersect(a: Lattice, b: Lattice) -> Lattice:
    n = a.n
    # x = u A = w B  <=>  (u, w) [A; -B] = 0
    stacked = list(a.basis) + [tuple(-x for x in r) for r in b.basis]
    if not a.basis or not b.basis:
        return Lattice.zero(n)
    cols = [[r[j] for r in stacked] for j in range(n)]
    ker = integer_kernel(cols, len(stacked))
    return Lattice.span(n, [[sum(c[i] * a.basis[i][j] for i in range(a.rank)) for j in range(n)]
                            for c in ker.basis])


def permute(lat: Lattice, perm: Sequence[int]) -> Lattice:
    """Image under the coordinate map e_i -> e_perm[i]."""
    out = []
    for b in lat.basis:
        v = [0] * lat.n
        for i, x in enumerate(b):
            v[perm[i]] = x
        out.append(v)
    return Lattice.span(lat.n, out)
