"""Names of classical and exceptional Lie algebras and their complex types.

A name is written the way the tables print it, in ASCII: ``sl(n+1,{R,C})``,
``so(q,n-q)``, ``sp(2n,C)``, ``su(2,2)``, ``g2({2,C})``, ``e6(C)``.  Sizes may be
linear expressions in ``n`` (and ``q`` for the real-form bookkeeping).
"""
from __future__ import annotations

import ast
import re
from dataclasses import dataclass
from fractions import Fraction
from typing import Dict, Iterator, List, Optional, Tuple

from .errors import InputError
from .lie_core import Family, SimpleType

# low-rank coincidences, mapped onto the type the classifier enumerates;
# node maps are 1-based
ISOMORPHISMS: Dict[SimpleType, Tuple[SimpleType, Dict[int, int]]] = {
    SimpleType(Family.C, 2): (SimpleType(Family.B, 2), {1: 2, 2: 1}),
    SimpleType(Family.D, 3): (SimpleType(Family.A, 3), {1: 2, 2: 1, 3: 3}),
}

# smallest rank at which a rank-n pattern row is checked; below it the
# explicit low-rank rows are authoritative
PATTERN_THRESHOLD = {Family.A: 3, Family.B: 3, Family.C: 3, Family.D: 4}

_ITEM = re.compile(r"^(sl|su|so|sp|g2|f4|e6|e7|e8)\((.*)\)$")


@dataclass(frozen=True)
class AlgebraName:
    """One algebra of a table's g column, possibly listing several fields."""

    text: str
    kind: str
    size: str                 # matrix size expression ("" for exceptional)
    fields: Tuple[str, ...]   # ("R", "C") etc; () for su/so(p,q)/sp(p,q)
    signature: Tuple[str, str] = ("", "")

    @property
    def is_pattern(self) -> bool:
        return bool(re.search(r"[a-z]", self.size)) or any(re.search(r"[a-z]", s) for s in self.signature)

    @property
    def has_complex(self) -> bool:
        return "C" in self.fields

    def form_tags(self) -> List[str]:
        """One tag per real form, e.g. ``sl(n+1,R)``, ``sl(n+1,C)``, ``su(1,2)``."""
        if self.kind in ("g2", "f4", "e6", "e7", "e8"):
            return [f"{self.kind}({f})" for f in self.fields]
        if self.fields:
            return [f"{self.kind}({self.size},{f})" for f in self.fields]
        return [self.text]

    def families(self) -> List[Family]:
        k = self.kind
        if k in ("sl", "su"):
            return [Family.A]
        if k == "sp":
            return [Family.C]
        if k == "so":
            return [Family.B, Family.D]
        return [{"g2": Family.G, "f4": Family.F}.get(k, Family.E)]

    def instances(self, max_rank: int, respect_threshold: bool = True) -> Iterator[Tuple[SimpleType, Dict[str, int]]]:
        """Concrete types (with the binding of ``n`` and ``q``) up to ``max_rank``."""
        if self.kind in ("g2", "f4", "e6", "e7", "e8"):
            t = SimpleType.parse(self.kind.upper())
            if t.rank <= max_rank:
                yield t, {}
            return
        for fam in self.families():
            for rank in range(1, max_rank + 1):
                try:
                    t = SimpleType(fam, rank)
                except InputError:
                    continue
                env = self._solve(t)
                if env is None:
                    continue
                if respect_threshold and self.is_pattern and rank < PATTERN_THRESHOLD.get(fam, 0):
                    continue
                yield t, env

    def _solve(self, t: SimpleType) -> Optional[Dict[str, int]]:
        size = {Family.A: t.rank + 1, Family.B: 2 * t.rank + 1,
                Family.C: 2 * t.rank, Family.D: 2 * t.rank}[t.family]
        if self.kind == "so" and (size % 2 == 1) != (t.family is Family.B):
            return None
        exprs = [self.size] if self.size else []
        if self.signature[0]:
            # p + q = size for su/so; sp(p,q) has size 2(p + q)
            total = f"({self.signature[0]})+({self.signature[1]})"
            exprs = [total if self.kind != "sp" else f"2*({total})"]
        if not self.is_pattern:
            return {} if all(_eval(e, {}) == size for e in exprs) else None
        for n in range(1, size + 1):
            env = {"n": n}
            if all(_eval(e, env) == size for e in exprs) and all(
                    (v := _eval(x, env)) is None or v.denominator == 1 for x in self.signature if x):
                return env
        return None


def _eval(expr: str, env: Dict[str, int]) -> Optional[Fraction]:
    """Rational value of a size expression such as ``n+1``, ``2n`` or ``n/2``."""
    expr = re.sub(r"(\d)([a-z(])", r"\1*\2", expr.replace(" ", ""))
    # q only appears in signatures p + q where it cancels
    env = dict(env, q=0)
    try:
        tree = ast.parse(expr, mode="eval")
    except SyntaxError:
        return None

    def ev(node):
        if isinstance(node, ast.Expression):
            return ev(node.body)
        if isinstance(node, ast.Constant) and isinstance(node.value, int):
            return Fraction(node.value)
        if isinstance(node, ast.Name) and node.id in env:
            return Fraction(env[node.id])
        if isinstance(node, ast.UnaryOp) and isinstance(node.op, ast.USub):
            return -ev(node.operand)
        if isinstance(node, ast.BinOp):
            a, b = ev(node.left), ev(node.right)
            ops = {ast.Add: a + b, ast.Sub: a - b, ast.Mult: a * b}
            if isinstance(node.op, ast.Div):
                return a / b
            for k, v in ops.items():
                if isinstance(node.op, k):
                    return v
        raise ValueError(expr)

    try:
        return ev(tree)
    except ValueError:
        return None


def parse_algebra_item(text: str) -> AlgebraName:
    text = text.strip()
    m = _ITEM.match(text)
    if not m:
        raise InputError(f"unknown algebra {text!r}")
    kind, inner = m.group(1), m.group(2)
    if kind in ("g2", "f4", "e6", "e7", "e8"):
        return AlgebraName(text, kind, "", _fields(inner))
    parts = _split_top(inner)
    if len(parts) != 2:
        raise InputError(f"unknown algebra {text!r}")
    a, b = parts
    if kind == "su" or (re.search(r"[RCH{}]", b) is None):
        return AlgebraName(text, kind, "", (), (a, b))
    return AlgebraName(text, kind, a, _fields(b))


def parse_algebra_list(text: str) -> List[AlgebraName]:
    return [parse_algebra_item(p) for p in _split_top(text)]


def _fields(s: str) -> Tuple[str, ...]:
    s = s.strip()
    if s.startswith("{"):
        return tuple(x.strip() for x in s[1:-1].split(","))
    return (s,)


def _split_top(s: str) -> List[str]:
    out, depth, cur = [], 0, ""
    for ch in s:
        if ch in "({":
            depth += 1
        elif ch in ")}":
            depth -= 1
        if ch == "," and depth == 0:
            out.append(cur.strip())
            cur = ""
        else:
            cur += ch
    if cur.strip():
        out.append(cur.strip())
    return out


def resolve_type(tag: str) -> Tuple[SimpleType, str]:
    """Complex type of an algebra tag (``A3``, ``sl(4,R)``, ``so(7,C)``) and its form tag."""
    tag = tag.strip()
    if re.fullmatch(r"[A-Ga-g]\d+", tag):
        return SimpleType.parse(tag), "complex"
    item = parse_algebra_item(tag)
    if item.is_pattern:
        raise InputError(f"{tag!r} is a rank pattern; give a concrete size")
    found = list(item.instances(8, respect_threshold=False))
    if len(found) != 1:
        raise InputError(f"cannot resolve {tag!r} to a simple type")
    form = "complex" if item.fields == ("C",) else tag
    return found[0][0], form


def table_node(t: SimpleType, i: int) -> int:
    """Bourbaki node of a table node; E types are numbered along the long chain."""
    if t.family is not Family.E:
        return i
    if i == t.rank:
        return 2
    return i if i == 1 else i + 1


def canonical_type(t: SimpleType) -> Tuple[SimpleType, Dict[int, int]]:
    """Enumerated representative of ``t`` with the node map onto it."""
    if t in ISOMORPHISMS:
        return ISOMORPHISMS[t]
    return t, {i: i for i in range(1, t.rank + 1)}
