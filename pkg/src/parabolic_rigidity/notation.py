"""ASCII notation for eigenvalue conditions and its lattice semantics.

Grammar (whitespace-insensitive)::

    union    := relset (" or " relset)*
    relset   := rel ("," rel)*
    rel      := expr "=" expr | expr "!=" expr
    expr     := factor ("*" factor)*
    factor   := atom ("^" int)?
    atom     := "j" index | "sqrt[" d "](1)" | "sqrt(1)" | "sqrt(" expr ")"
              | "(" expr ")" | int

``index`` is a digit string, a single letter, or a parenthesised expression
in n, p, q such as ``(n-1)`` or ``(2n-1)``.  ``sqrt[d](1)`` is a d-th root of
unity shared by every occurrence in the same row; ``-1`` is its own order-2
constant.  ``!=`` conditions carve out exceptional points and never change
the lattice of relations.
"""
from __future__ import annotations

import ast
import re
from dataclasses import dataclass
from fractions import Fraction
from math import lcm
from typing import Dict, List, Mapping, Optional, Sequence, Tuple

from .errors import InputError
from .lattice import Lattice, intersect, restrict

Symbol = Tuple[str, int]          # ("j", node) or ("z", order)
Monomial = Dict[Symbol, Fraction]

_TOKEN = re.compile(r"\s*(sqrt\[\d+\]\(1\)|sqrt\(1\)|sqrt\(|j\([^)]*\)|j[0-9]+|j[a-z]|!=|-?\d+|[*^()=,])")


def eval_index(text: str, env: Mapping[str, int]) -> int:
    """Evaluate a node index such as ``n-1``, ``p+1`` or ``2n-1``."""
    expr = re.sub(r"(\d)([a-z])", r"\1*\2", text.strip())
    try:
        tree = ast.parse(expr, mode="eval")
    except SyntaxError as exc:
        raise InputError(f"bad index {text!r}") from exc

    def ev(node):
        if isinstance(node, ast.Expression):
            return ev(node.body)
        if isinstance(node, ast.Constant) and isinstance(node.value, int):
            return node.value
        if isinstance(node, ast.Name):
            if node.id not in env:
                raise InputError(f"unbound index variable {node.id!r} in {text!r}")
            return env[node.id]
        if isinstance(node, ast.BinOp) and isinstance(node.op, (ast.Add, ast.Sub, ast.Mult)):
            a, b = ev(node.left), ev(node.right)
            if isinstance(node.op, ast.Add):
                return a + b
            if isinstance(node.op, ast.Sub):
                return a - b
            return a * b
        if isinstance(node, ast.UnaryOp) and isinstance(node.op, ast.USub):
            return -ev(node.operand)
        raise InputError(f"bad index {text!r}")

    return ev(tree)


def _tokens(text: str) -> List[str]:
    out, pos = [], 0
    text = text.rstrip()
    while pos < len(text):
        m = _TOKEN.match(text, pos)
        if not m:
            raise InputError(f"cannot parse {text!r} at {text[pos:]!r}")
        out.append(m.group(1))
        pos = m.end()
    return out


class _Parser:
    def __init__(self, text: str, env: Mapping[str, int]):
        self.text = text
        self.toks = _tokens(text)
        self.i = 0
        self.env = env

    def peek(self) -> Optional[str]:
        return self.toks[self.i] if self.i < len(self.toks) else None

    def take(self, want: Optional[str] = None) -> str:
        t = self.peek()
        if t is None or (want is not None and t != want):
            raise InputError(f"cannot parse {self.text!r}: expected {want or 'token'}, got {t!r}")
        self.i += 1
        return t

    def expr(self) -> Monomial:
        out = self.factor()
        while self.peek() == "*":
            self.take()
            out = _mul(out, self.factor())
        return out

    def factor(self) -> Monomial:
        base = self.atom()
        if self.peek() == "^":
            self.take()
            e = int(self.take())
            base = {k: v * e for k, v in base.items()}
        return base

    def atom(self) -> Monomial:
        t = self.take()
        if t.startswith("j"):
            idx = t[1:]
            if idx.startswith("("):
                idx = idx[1:-1]
            return {("j", eval_index(idx, self.env)): Fraction(1)}
        if t == "sqrt(1)":
            return {("z", 2): Fraction(1)}
        if t.startswith("sqrt["):
            return {("z", int(t[5:t.index("]")])): Fraction(1)}
        if t == "sqrt(":
            inner = self.expr()
            self.take(")")
            return {k: v / 2 for k, v in inner.items()}
        if t == "(":
            inner = self.expr()
            self.take(")")
            return inner
        if re.fullmatch(r"-?\d+", t):
            v = int(t)
            if v == 1:
                return {}
            if v == -1:
                return {("z", -2): Fraction(1)}
            raise InputError(f"unsupported constant {t} in {self.text!r}")
        raise InputError(f"cannot parse {self.text!r} at {t!r}")

    def relset(self) -> Tuple[List[Monomial], bool]:
        rels, exceptional = [], False
        while True:
            lhs = self.expr()
            op = self.take()
            if op not in ("=", "!="):
                raise InputError(f"cannot parse {self.text!r}: expected '=' got {op!r}")
            rhs = self.expr()
            if op == "=":
                rels.append(_mul(lhs, {k: -v for k, v in rhs.items()}))
            else:
                exceptional = True
            if self.peek() != ",":
                return rels, exceptional
            self.take()


def _mul(a: Monomial, b: Monomial) -> Monomial:
    out = dict(a)
    for k, v in b.items():
        out[k] = out.get(k, Fraction(0)) + v
        if not out[k]:
            del out[k]
    return out


@dataclass(frozen=True)
class Condition:
    """A union of relation sets; each relation says ``monomial = 1``."""

    alternatives: Tuple[Tuple[Tuple[Tuple[Symbol, Fraction], ...], ...], ...]
    exceptional: bool = False

    @property
    def nodes(self) -> List[int]:
        return sorted({s[1] for alt in self.alternatives for rel in alt for s, _ in rel if s[0] == "j"})

    def __and__(self, other: "Condition") -> "Condition":
        alts = tuple(a + b for a in self.alternatives for b in other.alternatives)
        return Condition(alts, self.exceptional or other.exceptional)

    def lattice(self, sigma: Sequence[int]) -> Lattice:
        """Characters ``m`` of the torus on ``sigma`` that are 1 on every solution."""
        out = None
        for alt in self.alternatives:
            lat = _relations_lattice(sigma, alt)
            out = lat if out is None else intersect(out, lat)
        return out if out is not None else Lattice.zero(len(sigma))


TRUE = Condition(((),))


def _relations_lattice(sigma: Sequence[int], rels) -> Lattice:
    pos = {("j", s): i for i, s in enumerate(sigma)}
    rads = sorted({sym for rel in rels for sym, _ in rel if sym[0] == "z"})
    for r in rads:
        pos[r] = len(pos)
    n = len(pos)
    rows = []
    for rel in rels:
        den = lcm(*[v.denominator for _, v in rel]) if rel else 1
        row = [0] * n
        for sym, v in rel:
            if sym not in pos:
                raise InputError(f"j{sym[1]} is not a crossed node of {tuple(sigma)}")
            row[pos[sym]] += int(v * den)
        rows.append(row)
    for r in rads:
        row = [0] * n
        row[pos[r]] = abs(r[1])
        rows.append(row)
    return restrict(Lattice.span(n, rows), len(sigma))


def parse_condition(text: str, env: Mapping[str, int] = {}) -> Condition:
    """Parse ``a=b, c=d`` lists joined by `` or ``."""
    text = text.strip()
    if not text:
        return TRUE
    alts, exc = [], False
    for part in text.split(" or "):
        p = _Parser(part, env)
        rels, e = p.relset()
        if p.peek() is not None:
            raise InputError(f"trailing input in {part!r}")
        exc = exc or e
        alts.append(tuple(tuple(sorted(r.items())) for r in rels))
    return Condition(tuple(alts), exc)


def parse_cell(text: str, node: int, env: Mapping[str, int] = {}) -> Condition:
    """A table cell: a bare expression means ``j_node = expr``."""
    text = text.strip()
    if not text:
        return TRUE
    if "=" in text:
        return parse_condition(text, env)
    return parse_condition(f"j{node}={text}" if node < 10 else f"j({node})={text}", env)
