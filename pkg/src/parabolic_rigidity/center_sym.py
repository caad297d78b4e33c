"""Center elements of G0, their eigenvalue constraints and 1-eigenspaces.

An element ``s`` of the center of G0 is determined by one eigenvalue
``j_a`` per crossed node.  It acts on a root space (or a g0-component) of
multigrade ``m`` by the monomial ``j^m``.  Every condition used here has the
form ``j^m = 1``; the set of exponent vectors ``m`` for which a given ``s``
satisfies ``j^m = 1`` is a lattice, and the solution set of a family of
conditions is the character group of ``Z^Sigma / L``.
"""
from __future__ import annotations

import enum
from dataclasses import dataclass, field
from fractions import Fraction
from typing import Dict, FrozenSet, Iterable, List, Optional, Sequence, Tuple, Union

from .errors import InputError
from .kostant import HarmonicComponent
from .lattice import Lattice, cyclic_refinements
from .lie_core import Root
from .parabolic import IrreducibleComponent, ParabolicGrading, parabolic_closure, q_minus
from .prolong import a_spaces, inserts_trivially

_PRIMES = (2, 3, 5, 7, 11, 13, 17, 19, 23, 29, 31, 37)


# ------------------------------------------------------------------ monomials
def eigenvalue_monomial(pg: ParabolicGrading, target) -> Tuple[int, ...]:
    """Exponent vector of the eigenvalue of s on a root, component or μ."""
    if isinstance(target, HarmonicComponent):
        return target.multigrade
    if isinstance(target, IrreducibleComponent):
        return target.multigrade
    beta = tuple(int(x) for x in target)
    if not pg.rs.is_root(beta):
        raise InputError(f"{beta} is not a root")
    return pg.multigrade(beta)


# ------------------------------------------------------------ exact elements
@dataclass(frozen=True)
class ExactValue:
    """Nonzero complex number ``modulus * exp(2 pi i * phase)``, phase taken mod 1."""

    phase: Fraction = Fraction(0)
    modulus: Fraction = Fraction(1)

    def __post_init__(self) -> None:
        if self.modulus <= 0:
            raise InputError("modulus must be positive")
        object.__setattr__(self, "phase", Fraction(self.phase) % 1)
        object.__setattr__(self, "modulus", Fraction(self.modulus))

    def __mul__(self, other: "ExactValue") -> "ExactValue":
        return ExactValue(self.phase + other.phase, self.modulus * other.modulus)

    def __pow__(self, k: int) -> "ExactValue":
        return ExactValue(self.phase * k, self.modulus ** k)

    def is_one(self) -> bool:
        return self.phase == 0 and self.modulus == 1

    @property
    def order(self) -> Optional[int]:
        """Multiplicative order, or None if infinite."""
        return self.phase.denominator if self.modulus == 1 else None

    def __str__(self) -> str:
        if self.modulus == 1:
            if self.phase == 0:
                return "1"
            if self.phase == Fraction(1, 2):
                return "-1"
            return f"exp(2pi*i*{self.phase})"
        if self.phase == 0:
            return str(self.modulus)
        return f"{self.modulus}*exp(2pi*i*{self.phase})"


@dataclass(frozen=True)
class CenterElement:
    sigma: Tuple[int, ...]
    values: Tuple[ExactValue, ...]

    def __post_init__(self) -> None:
        if len(self.sigma) != len(self.values):
            raise InputError("one eigenvalue per crossed node is required")

    @classmethod
    def of(cls, sigma: Sequence[int], values: Sequence) -> "CenterElement":
        vals = []
        for v in values:
            if isinstance(v, ExactValue):
                vals.append(v)
            elif v == -1:
                vals.append(ExactValue(Fraction(1, 2)))
            else:
                f = Fraction(v)
                if f > 0:
                    vals.append(ExactValue(0, f))
                elif f < 0:
                    vals.append(ExactValue(Fraction(1, 2), -f))
                else:
                    raise InputError("eigenvalues must be nonzero")
        return cls(tuple(sigma), tuple(vals))

    @property
    def is_identity(self) -> bool:
        return all(v.is_one() for v in self.values)

    def evaluate(self, m: Sequence[int]) -> ExactValue:
        out = ExactValue()
        for v, e in zip(self.values, m):
            out = out * (v ** int(e))
        return out

    def kernel(self) -> Lattice:
        """``{m : j^m = 1}``."""
        n = len(self.values)
        # phases and log-moduli are independent; moduli are products of primes
        mods = [_factor(v.modulus) for v in self.values]
        primes = sorted({p for f in mods for p in f})
        den = 1
        for v in self.values:
            den = den * v.phase.denominator // _gcd(den, v.phase.denominator)
        # m is in the kernel iff sum m_i * log|j_i| = 0 and sum m_i * phase_i in Z:
        # integer matrix whose kernel is exactly that lattice
        cols = [[f.get(p, 0) for f in mods] for p in primes] + [[int(v.phase * den) for v in self.values]]
        return _integer_kernel(cols, n, den)

    def __str__(self) -> str:
        return ", ".join(f"j{s}={v}" for s, v in zip(self.sigma, self.values))


def _gcd(a: int, b: int) -> int:
    while b:
        a, b = b, a % b
    return a


def _factor(q: Fraction) -> Dict[int, int]:
    out: Dict[int, int] = {}
    for num, sign in ((q.numerator, 1), (q.denominator, -1)):
        d = 2
        while num > 1:
            while num % d == 0:
                out[d] = out.get(d, 0) + sign
                num //= d
            d += 1
    return out


def _integer_kernel(eqs: List[List[int]], n: int, modulus: int) -> Lattice:
    """``{m : eqs[:-1] . m = 0, eqs[-1] . m = 0 mod modulus}``."""
    from sympy import Matrix
    from sympy.matrices.normalforms import smith_normal_decomp

    exact = eqs[:-1]
    last = eqs[-1]
    # unknowns (m, t) with exact . m = 0 and last . m - modulus * t = 0
    rows = [r + [0] for r in exact] + [last + [-modulus]]
    a = Matrix(rows)
    s, _u, v = smith_normal_decomp(a)
    r = sum(1 for i in range(min(s.shape)) if s[i, i] != 0)
    gens = [tuple(int(v[i, k]) for i in range(n)) for k in range(r, n + 1)]
    return Lattice.span(n, gens)


# -------------------------------------------------------------- constraints
@dataclass(frozen=True)
class ConstraintSet:
    """Conditions ``j^m = 1`` for ``m`` in ``lattice`` (labels are crossed nodes)."""

    sigma: Tuple[int, ...]
    lattice: Lattice

    @classmethod
    def from_monomials(cls, sigma: Sequence[int], monomials: Iterable[Sequence[int]]) -> "ConstraintSet":
        sigma = tuple(sigma)
        return cls(sigma, Lattice.span(len(sigma), list(monomials)))

    def admits(self, s: CenterElement) -> bool:
        return all(s.evaluate(b).is_one() for b in self.lattice.basis)

    def __and__(self, other: "ConstraintSet") -> "ConstraintSet":
        return ConstraintSet(self.sigma, self.lattice + other.lattice)


@dataclass(frozen=True)
class RigidityLocus:
    fix: ConstraintSet
    pr: ConstraintSet
    a_roots: Tuple[FrozenSet[Root], ...]


def rigidity_locus(pg: ParabolicGrading, mu_set: Sequence[HarmonicComponent]) -> RigidityLocus:
    """Fix-μ conditions and the PR conditions (fix plus every a_i multigrade)."""
    mu_set = list(mu_set)
    if not mu_set:
        raise InputError("mu_set must be non-empty")
    fix = ConstraintSet.from_monomials(pg.sigma, [hc.multigrade for hc in mu_set])
    spaces = a_spaces(pg, mu_set)
    extra = [pg.multigrade(r) for sp in spaces for r in sp.roots]
    pr = ConstraintSet(pg.sigma, fix.lattice.add(extra)) if extra else fix
    return RigidityLocus(fix, pr, tuple(sp.roots for sp in spaces))


@dataclass(frozen=True)
class SolvedConstraints:
    sigma: Tuple[int, ...]
    lattice: Lattice
    torsion: Tuple[int, ...]
    free_rank: int
    qualifying: bool
    text: str

    @property
    def pretty(self) -> str:
        return prettify(self.text)

    def sample(self) -> Optional[CenterElement]:
        """A non-identity solution, generic when the torsion is cyclic."""
        if not self.qualifying:
            return None
        if len(self.lattice.quotient().torsion) <= 1:
            return witness(self.sigma, self.lattice)
        k = next(k for k in cyclic_refinements(self.lattice) if not k.is_full())
        return witness(self.sigma, k)

    def check(self, s: CenterElement) -> bool:
        return all(s.evaluate(b).is_one() for b in self.lattice.basis)


def solve_constraints(cs: ConstraintSet) -> SolvedConstraints:
    lat = cs.lattice
    q = lat.quotient()
    qualifying = not lat.is_full()
    text = render_lattice(cs.sigma, lat) if qualifying else "no qualifying s"
    return SolvedConstraints(cs.sigma, lat, q.torsion, q.free_rank, qualifying, text)


def witness(sigma: Sequence[int], kernel: Lattice) -> CenterElement:
    """Exact element whose kernel is exactly ``kernel`` (torsion of the quotient must be cyclic)."""
    q = kernel.quotient()
    if len(q.torsion) > 1:
        raise InputError("kernel quotient has non-cyclic torsion")
    n = kernel.n
    vals = []
    for i in range(n):
        phase = Fraction(0)
        modulus = Fraction(1)
        for k in range(n):
            e = q.v[i][k]
            if k < q.rank:
                if q.invariants[k] > 1:
                    phase += Fraction(e, q.invariants[k])
            else:
                modulus *= Fraction(_PRIMES[k - q.rank]) ** e
        vals.append(ExactValue(phase, modulus))
    return CenterElement(tuple(sigma), tuple(vals))


# ------------------------------------------------------------------ rendering
def _mono(sigma: Sequence[int], expo: Dict[int, int]) -> str:
    parts = []
    for i, e in sorted(expo.items()):
        if e:
            parts.append(f"j{sigma[i]}" + ("" if e == 1 else f"^{e}"))
    return "*".join(parts) if parts else "1"


def render_lattice(sigma: Sequence[int], lat: Lattice) -> str:
    """ASCII rendering in table style (``j2=-1``, ``j1=j2^-2``, ``j1=sqrt[3](1)``)."""
    n = lat.n
    if lat.is_full():
        return "no qualifying s"
    if not lat.basis:
        return ""
    if lat.rank == n and lat.index() == 2:
        s = witness(sigma, lat)
        return ", ".join(f"j{a}={v}" for a, v in zip(sigma, s.values))
    rels = []
    radical = False
    for row in sorted(lat.basis, key=lambda r: max(i for i, x in enumerate(r) if x)):
        p = max(i for i, x in enumerate(row) if x)
        d = row[p]
        if d < 0:
            row = tuple(-x for x in row)
            d = -d
        rhs = {i: -row[i] for i in range(p) if row[i]}
        lhs = f"j{sigma[p]}" + ("" if d == 1 else f"^{d}")
        if not rhs:
            # a repeated radical would read as one shared root
            if d == 1:
                rels.append(f"j{sigma[p]}=1")
            elif radical:
                rels.append(f"{lhs}=1")
            else:
                rels.append(f"j{sigma[p]}=sqrt[{d}](1)")
                radical = True
        else:
            rels.append(f"{lhs}={_mono(sigma, rhs)}")
    return ", ".join(rels)


_SUPER = {"2": "√1", "3": "∛1", "4": "∜1"}


def prettify(text: str) -> str:
    import re

    def rad(m):
        d = m.group(1)
        return _SUPER.get(d, f"{d}√1")

    out = re.sub(r"sqrt\[(\d+)\]\(1\)", rad, text)
    return re.sub(r"=-1\b", "=−1", out)


# ------------------------------------------------------------ 1-eigenspace
class Shape(str, enum.Enum):
    ZERO = "ZERO"
    PARABOLIC = "PARABOLIC"
    G1_ZERO = "G1_ZERO"
    G1_IN_PARABOLIC = "G1_IN_PARABOLIC"
    OTHER = "OTHER"
    NONE = "NO_QUALIFYING_S"


@dataclass(frozen=True)
class EigenspaceShape:
    shape: Shape
    sigma_prime: Tuple[Tuple[int, ...], ...] = ()
    patterns: int = field(default=0, compare=False)

    def __str__(self) -> str:
        if self.sigma_prime and self.shape in (Shape.PARABOLIC, Shape.G1_IN_PARABOLIC):
            sp = ";".join("{" + ",".join(map(str, s)) + "}" for s in self.sigma_prime)
            return f"{self.shape.value}({sp})"
        return self.shape.value


def one_eigenspace_roots(pg: ParabolicGrading, kernel: Lattice) -> FrozenSet[Root]:
    q = kernel.quotient()
    return frozenset(r for r in pg.negative_roots if q.kills(pg.multigrade(r)))


def achievable_kernels(pg: ParabolicGrading, lat: Lattice) -> Dict[FrozenSet[Root], Lattice]:
    """Distinct 1-eigenspaces in g_- over all non-identity s with ``j^m = 1`` on ``lat``.

    Maps each root pattern to one kernel lattice realizing it.
    """
    mgs = sorted({pg.multigrade(r) for r in pg.negative_roots})
    full = Lattice.full(lat.n)
    seen = {lat}
    queue = [lat]
    flats = []
    while queue:
        f = queue.pop()
        flats.append(f)
        qf = f.quotient()
        for m in mgs:
            if not qf.kills(m):
                g = f.add([m])
                if g not in seen:
                    seen.add(g)
                    queue.append(g)
    out: Dict[FrozenSet[Root], Lattice] = {}
    for f in sorted(flats, key=lambda l: (l.rank, l.basis)):
        for k in cyclic_refinements(f):
            if k == full:
                continue
            pat = one_eigenspace_roots(pg, k)
            out.setdefault(pat, k)
    return out


def pattern_levels(pg: ParabolicGrading, pattern: FrozenSet[Root], mu_set: Sequence[HarmonicComponent],
                   candidates: Optional[Sequence[Tuple[int, ...]]] = None) -> Dict[int, Optional[Tuple[int, ...]]]:
    """Shape levels (1..4) this 1-eigenspace satisfies, each with a witnessing Σ' or None.

    Level 1 (zero) implies every other level; 2 and 3 both imply 4.
    ``candidates`` restricts the Σ' searched for level 4 (default: all subsets).
    """
    if not pattern:
        return {1: None, 2: pg.sigma, 3: None, 4: pg.sigma}
    out: Dict[int, Optional[Tuple[int, ...]]] = {}
    sp = parabolic_closure(pg, pattern)
    if sp and all(inserts_trivially(pg, hc, pattern) for hc in mu_set):
        out[2] = sp
        out[4] = sp
    g1 = frozenset(r for r in pattern if pg.height(r) == -1)
    if not g1:
        out[3] = None
        out.setdefault(4, pg.sigma)
    if 4 not in out:
        for sub in (_subsets(pg.sigma) if candidates is None else candidates):
            if not sub:
                continue
            qm = q_minus(pg, sub)
            if g1 <= qm <= pattern and all(inserts_trivially(pg, hc, qm) for hc in mu_set):
                out[4] = sub
                break
    return out


def _subsets(sigma: Sequence[int]):
    from itertools import combinations
    for k in range(len(sigma), -1, -1):
        for c in combinations(sigma, k):
            yield c


_BY_LEVEL = {1: Shape.ZERO, 2: Shape.PARABOLIC, 3: Shape.G1_ZERO, 4: Shape.G1_IN_PARABOLIC, 5: Shape.OTHER}


def _shape_of(levels: Sequence[Dict[int, Optional[Tuple[int, ...]]]]) -> EigenspaceShape:
    for lvl in (1, 2, 3, 4):
        if all(lvl in lv for lv in levels):
            sps = ()
            if lvl in (2, 4):
                sps = tuple(sorted({lv[lvl] for lv in levels if lv[lvl] is not None}))
            return EigenspaceShape(_BY_LEVEL[lvl], sps, len(levels))
    return EigenspaceShape(Shape.OTHER, (), len(levels))


def classify_shape(pg: ParabolicGrading, lat: Union[Lattice, Sequence[Lattice]],
                   mu_set: Sequence[HarmonicComponent]) -> EigenspaceShape:
    """Strongest shape class shared by the 1-eigenspaces of all non-identity s in ``lat``.

    A sequence of lattices stands for the union of their solution sets.
    """
    lats = [lat] if isinstance(lat, Lattice) else list(lat)
    lats = [l for l in lats if not l.is_full()]
    if not lats:
        return EigenspaceShape(Shape.NONE)
    pats: Dict[FrozenSet[Root], Lattice] = {}
    for l in lats:
        for pat, k in achievable_kernels(pg, l).items():
            pats.setdefault(pat, k)
    return _shape_of([pattern_levels(pg, pat, mu_set) for pat in sorted(pats, key=sorted)])


def one_eigenspace(pg: ParabolicGrading, s: Union[CenterElement, SolvedConstraints],
                   mu_set: Sequence[HarmonicComponent] = ()) -> Tuple[FrozenSet[Root], EigenspaceShape]:
    """1-eigenspace of s in g_- and its shape.

    For a concrete element this is its own eigenspace; for a solved locus the
    returned roots are those of a generic element and the shape holds for
    every non-identity element of the locus.
    """
    if isinstance(s, CenterElement):
        if s.is_identity:
            raise InputError("s must not be the identity")
        roots = frozenset(r for r in pg.negative_roots if s.evaluate(pg.multigrade(r)).is_one())
        return roots, _shape_of([pattern_levels(pg, roots, mu_set)])
    if not s.qualifying:
        raise InputError("the locus contains only the identity")
    return one_eigenspace_roots(pg, s.lattice), classify_shape(pg, s.lattice, mu_set)
