"""Gradings of a simple Lie algebra defined by a set of crossed Dynkin nodes."""
from __future__ import annotations

from dataclasses import dataclass, field
from functools import cached_property
from typing import Dict, FrozenSet, Iterable, List, Optional, Tuple

from .errors import InputError
from .lie_core import Root, RootSystem, Weight, bracket_basis, format_root


@dataclass(frozen=True)
class IrreducibleComponent:
    """A g0-irreducible summand of one graded layer (always a set of root spaces)."""

    degree: int
    roots: Tuple[Root, ...]
    lowest_root: Root
    highest_root: Root
    lowest_weight: Weight
    highest_weight: Weight
    multigrade: Tuple[int, ...]

    @property
    def dim(self) -> int:
        return len(self.roots)

    def __repr__(self) -> str:
        return f"IrreducibleComponent(deg={self.degree}, multigrade={self.multigrade}, dim={self.dim})"


@dataclass(eq=False)
class ParabolicGrading:
    rs: RootSystem
    sigma: Tuple[int, ...]
    k: int = field(init=False)
    layers: Dict[int, Tuple[Root, ...]] = field(init=False)

    def __post_init__(self) -> None:
        self._sig0 = tuple(i - 1 for i in self.sigma)
        self.k = self.height(self.rs.highest_root)
        layers: Dict[int, List[Root]] = {i: [] for i in range(-self.k, self.k + 1)}
        for r in self.rs.roots:
            layers[self.height(r)].append(r)
        self.layers = {i: tuple(v) for i, v in layers.items()}

    # 1-based node numbers
    def height(self, beta: Iterable[int]) -> int:
        beta = tuple(beta)
        return sum(beta[i] for i in self._sig0)

    def multigrade(self, beta: Iterable[int]) -> Tuple[int, ...]:
        beta = tuple(beta)
        return tuple(beta[i] for i in self._sig0)

    @cached_property
    def g0_simple(self) -> Tuple[int, ...]:
        """0-based indices of the uncrossed simple roots."""
        return tuple(i for i in range(self.rs.rank) if i not in self._sig0)

    @cached_property
    def g0_roots(self) -> Tuple[Root, ...]:
        return self.layers[0]

    @cached_property
    def g0_positive(self) -> Tuple[Root, ...]:
        return tuple(r for r in self.layers[0] if self.rs.is_positive(r))

    @cached_property
    def negative_roots(self) -> Tuple[Root, ...]:
        """Roots of g_-, ordered by layer then root order."""
        return tuple(r for i in range(-1, -self.k - 1, -1) for r in self.layers[i])

    @cached_property
    def positive_part_roots(self) -> Tuple[Root, ...]:
        return tuple(r for i in range(1, self.k + 1) for r in self.layers[i])

    def layer_dim(self, i: int) -> int:
        if i == 0:
            return len(self.layers[0]) + self.rs.rank
        return len(self.layers.get(i, ()))

    def components(self, i: int) -> List[IrreducibleComponent]:
        return g0_components(self, i)

    def __repr__(self) -> str:
        return f"ParabolicGrading({self.rs!r}, sigma={set(self.sigma)}, k={self.k})"


def build_grading(rs: RootSystem, sigma: Iterable[int]) -> ParabolicGrading:
    """Grading of ``rs`` by Σ-height; ``sigma`` holds 1-based node numbers."""
    sig = tuple(sorted(set(int(s) for s in sigma)))
    if not sig:
        raise InputError("sigma must be non-empty")
    for s in sig:
        if not 1 <= s <= rs.rank:
            raise InputError(f"node {s} out of range 1..{rs.rank}")
    return ParabolicGrading(rs, sig)


def g0_components(pg: ParabolicGrading, i: int) -> List[IrreducibleComponent]:
    """Decompose layer ``i`` into g0-irreducibles, sorted by multigrade."""
    if abs(i) > pg.k:
        raise InputError(f"|{i}| exceeds depth {pg.k}")
    if i == 0:
        # the Cartan block stays separate; root part of g0 splits by simple factors
        return _g0_factor_components(pg)
    cached = pg.__dict__.setdefault("_components", {})
    if i in cached:
        return cached[i]
    rs = pg.rs
    remaining = set(pg.layers[i])
    out: List[IrreducibleComponent] = []
    while remaining:
        seed = min(remaining, key=lambda r: (sum(r), r))
        orbit = {seed}
        stack = [seed]
        while stack:
            b = stack.pop()
            for j in pg.g0_simple:
                for sgn in (1, -1):
                    c = tuple(x + sgn * int(t == j) for t, x in enumerate(b))
                    if c in remaining and c not in orbit:
                        orbit.add(c)
                        stack.append(c)
        remaining -= orbit
        out.append(_make_component(pg, i, orbit))
    out.sort(key=lambda c: c.multigrade)
    cached[i] = out
    return out


def _make_component(pg: ParabolicGrading, i: int, orbit) -> IrreducibleComponent:
    rs = pg.rs
    lows, highs = [], []
    for b in orbit:
        down = [tuple(x - int(t == j) for t, x in enumerate(b)) for j in pg.g0_simple]
        up = [tuple(x + int(t == j) for t, x in enumerate(b)) for j in pg.g0_simple]
        if not any(d in orbit for d in down):
            lows.append(b)
        if not any(u in orbit for u in up):
            highs.append(b)
    if len(lows) != 1 or len(highs) != 1:
        raise AssertionError(f"component of degree {i} is not irreducible")
    mgs = {pg.multigrade(b) for b in orbit}
    if len(mgs) != 1:
        raise AssertionError("component is not multigraded")
    roots = tuple(sorted(orbit, key=lambda r: (sum(r), r)))
    return IrreducibleComponent(
        degree=i,
        roots=roots,
        lowest_root=lows[0],
        highest_root=highs[0],
        lowest_weight=rs.to_fundamental(lows[0]),
        highest_weight=rs.to_fundamental(highs[0]),
        multigrade=mgs.pop(),
    )


def _g0_factor_components(pg: ParabolicGrading) -> List[IrreducibleComponent]:
    out = []
    remaining = set(pg.layers[0])
    while remaining:
        seed = next(iter(sorted(remaining)))
        orbit = {seed}
        stack = [seed]
        while stack:
            b = stack.pop()
            for c in pg.layers[0]:
                if c not in orbit and (pg.rs.is_root(tuple(x + y for x, y in zip(b, c))) or
                                       pg.rs.is_root(tuple(x - y for x, y in zip(b, c)))):
                    orbit.add(c)
                    stack.append(c)
        remaining -= orbit
        roots = tuple(sorted(orbit, key=lambda r: (sum(r), r)))
        out.append(IrreducibleComponent(0, roots, roots[0], roots[-1],
                                        pg.rs.to_fundamental(roots[0]), pg.rs.to_fundamental(roots[-1]),
                                        pg.multigrade(roots[0])))
    return out


def parabolic_closure(pg: ParabolicGrading, extra: Iterable[Root]) -> Optional[Tuple[int, ...]]:
    """Σ' with ``span(extra) + p == p_{Σ'}``, or None if no such standard parabolic exists.

    An empty tuple means ``span(extra) + p`` is all of g (not proper).
    """
    extra = frozenset(tuple(r) for r in extra)
    for r in extra:
        if not pg.rs.is_root(r) or pg.height(r) >= 0:
            raise InputError(f"{format_root(r)} is not a root of g_-")
    dropped = {i for i in pg.sigma if tuple(-int(t == i - 1) for t in range(pg.rs.rank)) in extra}
    new_sigma = tuple(s for s in pg.sigma if s not in dropped)
    sig0 = [s - 1 for s in new_sigma]
    want = frozenset(r for r in pg.negative_roots if all(r[s] == 0 for s in sig0))
    if want != extra:
        return None
    return new_sigma


def q_minus(pg: ParabolicGrading, sigma_prime: Iterable[int]) -> FrozenSet[Root]:
    """Roots of g_- lying in the standard parabolic for ``sigma_prime``."""
    sig0 = [s - 1 for s in sigma_prime]
    return frozenset(r for r in pg.negative_roots if all(r[s] == 0 for s in sig0))


def check_layer_brackets(pg: ParabolicGrading) -> bool:
    """[g_i, g_j] lands in g_{i+j} for all root pairs."""
    rs = pg.rs
    for a in rs.roots:
        for b in rs.roots:
            out = bracket_basis(rs, rs.index[a], rs.index[b])
            for idx in out:
                hgt = 0 if idx < rs.rank else pg.height(rs.roots[idx - rs.rank])
                if hgt != pg.height(a) + pg.height(b):
                    return False
    return True
