"""Sparse multivariate polynomials over Q and a small expression parser.

Variables are addressed by position.  Text I/O uses the naming scheme
``X{j}_{i}`` for coordinate i of projective factor j (both zero-based).
"""

from __future__ import annotations

import math
import re
from dataclasses import dataclass
from fractions import Fraction
from functools import reduce
from typing import Iterable, Mapping, Sequence

Exponent = tuple[int, ...]


class ParseError(ValueError):
    def __init__(self, message: str, column: int | None = None, text: str | None = None):
        self.column = column
        self.text = text
        loc = f" at column {column}" if column is not None else ""
        super().__init__(f"{message}{loc}" + (f" in {text!r}" if text is not None else ""))


@dataclass(frozen=True)
class MPoly:
    nvars: int
    terms: tuple[tuple[Exponent, Fraction], ...]

    def __init__(self, nvars: int, terms: Mapping[Exponent, object] | Iterable[tuple[Exponent, object]] = ()):
        acc: dict[Exponent, Fraction] = {}
        items = terms.items() if isinstance(terms, Mapping) else terms
        for e, c in items:
            e = tuple(int(x) for x in e)
            if len(e) != nvars:
                raise ValueError(f"exponent {e} has wrong length for {nvars} variables")
            acc[e] = acc.get(e, Fraction(0)) + Fraction(c)
        clean = tuple(sorted(((e, c) for e, c in acc.items() if c != 0), reverse=True))
        object.__setattr__(self, "nvars", nvars)
        object.__setattr__(self, "terms", clean)

    @classmethod
    def constant(cls, nvars: int, c) -> MPoly:
        return cls(nvars, {(0,) * nvars: c})

    @classmethod
    def variable(cls, nvars: int, i: int) -> MPoly:
        e = [0] * nvars
        e[i] = 1
        return cls(nvars, {tuple(e): 1})

    def is_zero(self) -> bool:
        return not self.terms

    def as_dict(self) -> dict[Exponent, Fraction]:
        return dict(self.terms)

    def __add__(self, other: MPoly) -> MPoly:
        return MPoly(self.nvars, list(self.terms) + list(other.terms))

    def __neg__(self) -> MPoly:
        return MPoly(self.nvars, [(e, -c) for e, c in self.terms])

    def __sub__(self, other: MPoly) -> MPoly:
        return self + (-other)

    def __mul__(self, other) -> MPoly:
        if not isinstance(other, MPoly):
            c = Fraction(other)
            return MPoly(self.nvars, [(e, c * a) for e, a in self.terms])
        out: dict[Exponent, Fraction] = {}
        for e1, c1 in self.terms:
            for e2, c2 in other.terms:
                e = tuple(a + b for a, b in zip(e1, e2))
                out[e] = out.get(e, Fraction(0)) + c1 * c2
        return MPoly(self.nvars, out)

    __rmul__ = __mul__

    def __pow__(self, k: int) -> MPoly:
        out = MPoly.constant(self.nvars, 1)
        base = self
        while k:
            if k & 1:
                out = out * base
            base = base * base
            k >>= 1
        return out

    def group_degrees(self, groups: Sequence[range]) -> set[tuple[int, ...]]:
        """Set of per-group total degrees over all terms."""
        return {tuple(sum(e[i] for i in g) for g in groups) for e, _ in self.terms}

    def variables_used(self) -> set[int]:
        return {i for e, _ in self.terms for i, a in enumerate(e) if a}

    def integral(self) -> MPoly:
        """Scalar multiple with coprime integer coefficients, positive leading term."""
        if self.is_zero():
            return self
        den = reduce(lambda a, b: a * b // math.gcd(a, b), (c.denominator for _, c in self.terms), 1)
        ints = [int(c * den) for _, c in self.terms]
        g = math.gcd(*ints)
        if ints[0] < 0:
            g = -g
        return MPoly(self.nvars, [(e, Fraction(v // g)) for (e, _), v in zip(self.terms, ints)])

    def embed(self, nvars: int, offset: int) -> MPoly:
        """Same polynomial viewed in a larger variable set, shifted by ``offset``."""
        pre, post = (0,) * offset, (0,) * (nvars - offset - self.nvars)
        return MPoly(nvars, [(pre + e + post, c) for e, c in self.terms])

    def substitute(self, values: Sequence[MPoly]) -> MPoly:
        """Compose: replace variable i by ``values[i]``."""
        if len(values) != self.nvars:
            raise ValueError("wrong number of substitution values")
        nv = values[0].nvars if values else 0
        cache: dict[tuple[int, int], MPoly] = {}

        def pw(i: int, k: int) -> MPoly:
            key = (i, k)
            if key not in cache:
                cache[key] = values[i] ** k
            return cache[key]

        out = MPoly(nv)
        for e, c in self.terms:
            term = MPoly.constant(nv, c)
            for i, k in enumerate(e):
                if k:
                    term = term * pw(i, k)
            out = out + term
        return out

    def evaluate(self, point: Sequence[int]):
        """Exact value at an integer or rational point."""
        if len(point) != self.nvars:
            raise ValueError("point has wrong dimension")
        powers: dict[tuple[int, int], object] = {}
        total = 0
        for e, c in self.terms:
            term = c.numerator if c.denominator == 1 else c
            for i, k in enumerate(e):
                if k:
                    key = (i, k)
                    if key not in powers:
                        powers[key] = point[i] ** k
                    term = term * powers[key]
            total = total + term
        return total

    def evaluate_mod(self, point: Sequence[int], m: int) -> int:
        """Value at an integer point modulo m; denominators must be units mod m."""
        total = 0
        for e, c in self.terms:
            term = c.numerator * pow(c.denominator, -1, m) % m
            for x, k in zip(point, e):
                if k:
                    term = term * pow(x, k, m) % m
            total += term
        return total % m

    def to_string(self, names: Sequence[str]) -> str:
        if self.is_zero():
            return "0"
        pieces = []
        for e, c in self.terms:
            mono = "*".join(
                names[i] if k == 1 else f"{names[i]}^{k}" for i, k in enumerate(e) if k
            )
            mag = abs(c)
            if not mono:
                body = str(mag)
            elif mag == 1:
                body = mono
            else:
                body = f"{mag}*{mono}"
            pieces.append(("-" if c < 0 else "+", body))
        s, b = pieces[0]
        out = ("-" if s == "-" else "") + b
        for s, b in pieces[1:]:
            out += f" {s} {b}"
        return out


def factor_variable_names(dims: Sequence[int]) -> list[str]:
    return [f"X{j}_{i}" for j, n in enumerate(dims) for i in range(n + 1)]


_TOKEN = re.compile(r"\s*(?:(\d+)|([A-Za-z_][A-Za-z0-9_]*)|(\*\*|[-+*/^()]))")


class _Parser:
    def __init__(self, text: str, names: Sequence[str]):
        self.text = text
        self.index = {n: i for i, n in enumerate(names)}
        self.nvars = len(names)
        self.tokens: list[tuple[str, str, int]] = []
        pos = 0
        while pos < len(text):
            m = _TOKEN.match(text, pos)
            if not m or m.end() == pos:
                if text[pos:].strip() == "":
                    break
                bad = len(text) - len(text[pos:].lstrip())
                raise ParseError(f"unexpected character {text[bad]!r}", bad + 1, text)
            col = m.start(m.lastindex) + 1
            if m.group(1):
                self.tokens.append(("num", m.group(1), col))
            elif m.group(2):
                self.tokens.append(("name", m.group(2), col))
            else:
                op = m.group(3)
                self.tokens.append(("op", "^" if op == "**" else op, col))
            pos = m.end()
        self.i = 0

    def peek(self):
        return self.tokens[self.i] if self.i < len(self.tokens) else ("eof", "", len(self.text) + 1)

    def take(self):
        tok = self.peek()
        self.i += 1
        return tok

    def parse(self) -> MPoly:
        if not self.tokens:
            raise ParseError("empty polynomial", 1, self.text)
        p = self.expr()
        kind, val, col = self.peek()
        if kind != "eof":
            raise ParseError(f"unexpected token {val!r}", col, self.text)
        return p

    def expr(self) -> MPoly:
        p = self.term()
        while self.peek()[:2] in (("op", "+"), ("op", "-")):
            _, op, _ = self.take()
            q = self.term()
            p = p + q if op == "+" else p - q
        return p

    def term(self) -> MPoly:
        p = self.unary()
        while self.peek()[:2] in (("op", "*"), ("op", "/")):
            _, op, col = self.take()
            q = self.unary()
            if op == "*":
                p = p * q
            else:
                if q.variables_used() or q.is_zero():
                    raise ParseError("division only by a nonzero constant", col, self.text)
                p = p * (1 / q.terms[0][1])
        return p

    def unary(self) -> MPoly:
        if self.peek()[:2] == ("op", "-"):
            self.take()
            return -self.unary()
        if self.peek()[:2] == ("op", "+"):
            self.take()
            return self.unary()
        return self.power()

    def power(self) -> MPoly:
        base = self.atom()
        if self.peek()[:2] == ("op", "^"):
            self.take()
            kind, val, col = self.take()
            if kind != "num":
                raise ParseError("exponent must be a nonnegative integer", col, self.text)
            return base ** int(val)
        return base

    def atom(self) -> MPoly:
        kind, val, col = self.take()
        if kind == "num":
            return MPoly.constant(self.nvars, int(val))
        if kind == "name":
            if val not in self.index:
                raise ParseError(f"unknown variable {val!r}", col, self.text)
            return MPoly.variable(self.nvars, self.index[val])
        if (kind, val) == ("op", "("):
            p = self.expr()
            k2, v2, c2 = self.take()
            if (k2, v2) != ("op", ")"):
                raise ParseError("expected ')'", c2, self.text)
            return p
        raise ParseError(f"unexpected token {val!r}" if val else "unexpected end of input", col, self.text)


def parse_polynomial(text: str, names: Sequence[str]) -> MPoly:
    return _Parser(text, names).parse()
