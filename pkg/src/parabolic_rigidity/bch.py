"""Baker-Campbell-Hausdorff calculus on the nilpotent algebra p+ and the
symmetry-defect identities built on it.

Elements of p+ are sparse maps root -> scalar.  Scalars live in a sympy
domain: QQ by default, or a cyclotomic field when a center element has
non-real eigenvalues.  The BCH series is finite because brackets of more
than k elements of p+ vanish.
"""
from __future__ import annotations

from dataclasses import dataclass
from fractions import Fraction
from functools import lru_cache
from itertools import product
from math import factorial, lcm
from typing import Dict, Iterable, List, Mapping, Optional, Tuple

from sympy import I, QQ, exp, pi

from .center_sym import CenterElement, ExactValue
from .errors import InputError
from .lie_core import Root, bracket, format_root
from .parabolic import ParabolicGrading


# ------------------------------------------------------------------ scalars
def scalar_domain(*elements: CenterElement):
    """Smallest field used here that contains every eigenvalue of the given elements."""
    n = 1
    for s in elements:
        for v in s.values:
            n = lcm(n, v.phase.denominator)
    if n <= 2:
        return QQ
    return _cyclotomic(n)


_ORDER: Dict[object, int] = {}


@lru_cache(maxsize=None)
def _cyclotomic(n: int):
    dom = QQ.algebraic_field(exp(2 * pi * I / n))
    _ORDER[dom] = n
    return dom


@lru_cache(maxsize=None)
def _zeta(n: int):
    # from_sympy factors a minimal polynomial; do it once per field
    return _cyclotomic(n).from_sympy(exp(2 * pi * I / n))


def to_domain(dom, value):
    """Convert an int, Fraction, ExactValue or domain element into ``dom``."""
    if isinstance(value, ExactValue):
        mod = dom.convert(QQ(value.modulus.numerator, value.modulus.denominator))
        if value.phase == 0:
            return mod
        if value.phase == Fraction(1, 2):
            return -mod
        if dom == QQ:
            raise InputError(f"{value} is not rational")
        n = _ORDER.get(dom)
        if n is None or (value.phase * n).denominator != 1:
            raise InputError(f"{value} does not lie in {dom}")
        return mod * _zeta(n) ** int(value.phase * n)
    if isinstance(value, Fraction):
        return dom.convert(QQ(value.numerator, value.denominator))
    return dom.convert(value)


# ------------------------------------------------------------------ elements
@dataclass(frozen=True, eq=False)
class PPlusElement:
    """Element of p+ = g_1 + ... + g_k as a sparse map from roots to scalars."""

    pg: ParabolicGrading
    coeffs: Mapping[Root, object]
    dom: object = QQ

    @classmethod
    def make(cls, pg: ParabolicGrading, coeffs: Mapping, dom=QQ) -> "PPlusElement":
        out = {}
        for r, c in coeffs.items():
            r = tuple(int(x) for x in r)
            if not pg.rs.is_root(r) or pg.height(r) < 1:
                raise InputError(f"{format_root(r)} is not a root of p+")
            c = to_domain(dom, c)
            if c:
                out[r] = c
        return cls(pg, out, dom)

    @classmethod
    def zero(cls, pg: ParabolicGrading, dom=QQ) -> "PPlusElement":
        return cls(pg, {}, dom)

    def to(self, dom) -> "PPlusElement":
        if dom == self.dom:
            return self
        return PPlusElement(self.pg, {r: dom.convert_from(c, self.dom) for r, c in self.coeffs.items()}, dom)

    def component(self, i: int) -> "PPlusElement":
        return PPlusElement(self.pg, {r: c for r, c in self.coeffs.items() if self.pg.height(r) == i}, self.dom)

    def degrees(self) -> List[int]:
        return sorted({self.pg.height(r) for r in self.coeffs})

    @property
    def lowest_degree(self) -> Optional[int]:
        d = self.degrees()
        return d[0] if d else None

    def is_zero(self) -> bool:
        return not self.coeffs

    def _combine(self, other: "PPlusElement", sign: int) -> "PPlusElement":
        dom = _common(self.dom, other.dom)
        a, b = self.to(dom), other.to(dom)
        out = dict(a.coeffs)
        for r, c in b.coeffs.items():
            v = out.get(r, dom.zero) + (c if sign > 0 else -c)
            if v:
                out[r] = v
            else:
                out.pop(r, None)
        return PPlusElement(self.pg, out, dom)

    def __add__(self, other: "PPlusElement") -> "PPlusElement":
        return self._combine(other, 1)

    def __sub__(self, other: "PPlusElement") -> "PPlusElement":
        return self._combine(other, -1)

    def __neg__(self) -> "PPlusElement":
        return PPlusElement(self.pg, {r: -c for r, c in self.coeffs.items()}, self.dom)

    def scale(self, c) -> "PPlusElement":
        c = to_domain(self.dom, c)
        if not c:
            return PPlusElement.zero(self.pg, self.dom)
        return PPlusElement(self.pg, {r: c * v for r, v in self.coeffs.items()}, self.dom)

    def __eq__(self, other) -> bool:
        if not isinstance(other, PPlusElement):
            return NotImplemented
        return (self - other).is_zero()

    def __hash__(self):
        raise TypeError("PPlusElement is unhashable")

    def __repr__(self) -> str:
        if not self.coeffs:
            return "0"
        terms = [f"{self.dom.to_sympy(c)}*e[{format_root(r)}]" for r, c in sorted(self.coeffs.items())]
        return " + ".join(terms)


def _common(d1, d2):
    if d1 == d2:
        return d1
    if d1 == QQ:
        return d2
    if d2 == QQ:
        return d1
    raise InputError("elements live over different cyclotomic fields")


def lie_bracket(x: PPlusElement, y: PPlusElement) -> PPlusElement:
    pg = x.pg
    dom = _common(x.dom, y.dom)
    x, y = x.to(dom), y.to(dom)
    rs = pg.rs
    u = {rs.index[r]: c for r, c in x.coeffs.items()}
    v = {rs.index[r]: c for r, c in y.coeffs.items()}
    out = bracket(rs, u, v)
    coeffs = {}
    for k, c in out.items():
        if k < rs.rank:
            raise AssertionError("p+ bracket produced a Cartan element")
        coeffs[rs.roots[k - rs.rank]] = c
    return PPlusElement(pg, coeffs, dom)


# ---------------------------------------------------------------------- BCH
@lru_cache(maxsize=None)
def _log_coefficients(m: int) -> Dict[Tuple[int, ...], Fraction]:
    """Coefficients of words of length m in log(e^X e^Y); letters 0 = X, 1 = Y."""
    out: Dict[Tuple[int, ...], Fraction] = {}
    for word in product((0, 1), repeat=m):
        total = Fraction(0)
        # split the word into blocks of the form X^a Y^b with a + b > 0
        for cuts in product((0, 1), repeat=m - 1):
            blocks, start = [], 0
            for pos, c in enumerate(cuts, start=1):
                if c:
                    blocks.append(word[start:pos])
                    start = pos
            blocks.append(word[start:])
            coef = Fraction(1)
            ok = True
            for b in blocks:
                a = 0
                while a < len(b) and b[a] == 0:
                    a += 1
                if any(x == 0 for x in b[a:]):
                    ok = False
                    break
                coef /= factorial(a) * factorial(len(b) - a)
            if ok:
                n = len(blocks)
                total += Fraction((-1) ** (n - 1), n) * coef
        if total:
            out[word] = total
    return out


def bch(pg: ParabolicGrading, x: PPlusElement, y: PPlusElement) -> PPlusElement:
    """``C(X, Y) = log(exp X exp Y)`` computed exactly on p+.

    Uses the Dynkin form: every word w of log(e^X e^Y) contributes
    ``coef(w) / |w|`` times its right-nested bracket.  Words longer than the
    depth of the grading vanish.
    """
    dom = _common(x.dom, y.dom)
    x, y = x.to(dom), y.to(dom)
    letters = (x, y)
    out = PPlusElement.zero(pg, dom)
    memo: Dict[Tuple[int, ...], PPlusElement] = {}

    def nested(word: Tuple[int, ...]) -> PPlusElement:
        if word in memo:
            return memo[word]
        if len(word) == 1:
            val = letters[word[0]]
        else:
            tail = nested(word[1:])
            val = tail if tail.is_zero() else lie_bracket(letters[word[0]], tail)
        memo[word] = val
        return val

    for m in range(1, pg.k + 1):
        for word, c in _log_coefficients(m).items():
            term = nested(word)
            if not term.is_zero():
                out = out + term.scale(Fraction(c.numerator, c.denominator * m))
    return out


# ------------------------------------------------------------ Ad(s) action
def ad_s(pg: ParabolicGrading, s: CenterElement, y: PPlusElement, power: int = 1) -> PPlusElement:
    """``Ad(s)^power`` applied bucket-wise by the eigenvalue monomials."""
    if tuple(s.sigma) != tuple(pg.sigma):
        raise InputError("center element and grading use different crossed nodes")
    dom = _common(y.dom, scalar_domain(s))
    y = y.to(dom)
    out = {}
    for r, c in y.coeffs.items():
        ev = to_domain(dom, s.evaluate(pg.multigrade(r)) ** power)
        out[r] = c * ev
    return PPlusElement(pg, out, dom)


def eigenvalue_of(pg: ParabolicGrading, s: CenterElement, root: Root) -> ExactValue:
    return s.evaluate(pg.multigrade(root))


def symmetry_defect(pg: ParabolicGrading, y: PPlusElement, s: CenterElement) -> PPlusElement:
    """``C(-Ad(s)^-1 Y, Y)``."""
    return bch(pg, -ad_s(pg, s, y, -1), y)


def transform_defect(pg: ParabolicGrading, defect: PPlusElement, upsilon: PPlusElement,
                     s: CenterElement) -> PPlusElement:
    """``C(-Ad(s)^-1 Upsilon, C(defect, Upsilon))``."""
    return bch(pg, -ad_s(pg, s, upsilon, -1), bch(pg, defect, upsilon))


def eigen_buckets(pg: ParabolicGrading, s: CenterElement, z: PPlusElement) -> Dict[ExactValue, PPlusElement]:
    """Split ``z`` by the Ad(s)-eigenvalue of each root space."""
    out: Dict[ExactValue, Dict[Root, object]] = {}
    for r, c in z.coeffs.items():
        out.setdefault(eigenvalue_of(pg, s, r), {})[r] = c
    return {a: PPlusElement(pg, d, z.dom) for a, d in out.items()}


class NoInvariantNormalization(ValueError):
    """The lowest component of a defect has a non-zero 1-eigenspace part."""

    def __init__(self, degree: int, part: PPlusElement):
        self.degree = degree
        self.part = part
        super().__init__(f"no invariant normalization: degree {degree} has 1-eigenspace part {part!r}")


def invariantize(pg: ParabolicGrading, defect: PPlusElement, s: CenterElement) -> List[PPlusElement]:
    """Corrections Upsilon_i, ..., Upsilon_k that transform ``defect`` to exactly zero.

    At each step the lowest component is split into Ad(s)-eigenbuckets
    tau(a) and ``Upsilon = sum_{a != 1} a/(1 - a) tau(a)``, which cancels that
    component under ``transform_defect``.
    """
    dom = _common(defect.dom, scalar_domain(s))
    cur = defect.to(dom)
    steps: List[PPlusElement] = []
    while not cur.is_zero():
        i = cur.lowest_degree
        if len(steps) >= pg.k:
            raise AssertionError("invariantize did not terminate within k steps")
        ups = PPlusElement.zero(pg, dom)
        for a, tau in eigen_buckets(pg, s, cur.component(i)).items():
            if a.is_one():
                raise NoInvariantNormalization(i, tau)
            av = to_domain(dom, a)
            ups = ups + tau.scale(av / (dom.one - av))
        steps.append(ups)
        cur = transform_defect(pg, cur, ups, s)
        if not cur.is_zero() and cur.lowest_degree <= i:
            raise AssertionError("transform did not clear the lowest component")
    return steps


def apply_sequence(pg: ParabolicGrading, defect: PPlusElement, upsilons: Iterable[PPlusElement],
                   s: CenterElement) -> PPlusElement:
    cur = defect
    for u in upsilons:
        cur = transform_defect(pg, cur, u, s)
    return cur
