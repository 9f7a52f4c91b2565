"""Exact multivariate polynomials with rational coefficients.

A :class:`Poly` lives over a fixed, lexicographically sorted tuple of
parameter names.  Its terms map exponent tuples (one entry per parameter) to
non-zero :class:`fractions.Fraction` coefficients, so two polynomials are
equal exactly when their term maps coincide.  This is the scalar ring for
every tensor component in the package.

Text form::

    1/2*l2 + 1/2*m1
    l1^2 - 2*l1 + 1
"""

from __future__ import annotations

import re
from fractions import Fraction
from typing import Iterable, Mapping, Union

from .errors import PolyParseError, StructureError

Number = Union[int, Fraction]
Exponent = tuple[int, ...]

_IDENT = re.compile(r"[A-Za-z_][A-Za-z_0-9]*")


def to_rational(value) -> Fraction:
    """Coerce ints, Fractions and strings like ``"-3/4"`` to a Fraction.

    Floats are refused: they would smuggle rounding into exact arithmetic.
    """
    if isinstance(value, bool):
        raise StructureError(f"not a rational: {value!r}")
    if isinstance(value, (int, Fraction)):
        return Fraction(value)
    if isinstance(value, str):
        text = value.strip()
        if not re.fullmatch(r"[+-]?\d+(/\d+)?", text):
            raise StructureError(f"not a rational literal: {value!r}")
        try:
            return Fraction(text)
        except ZeroDivisionError:
            raise StructureError(f"zero denominator in {value!r}") from None
    raise StructureError(f"not a rational: {value!r}")


def format_rational(q: Fraction) -> str:
    if q.denominator == 1:
        return str(q.numerator)
    return f"{q.numerator}/{q.denominator}"


class Poly:
    __slots__ = ("params", "terms", "_hash")

    def __init__(self, params: Iterable[str], terms: Mapping[Exponent, Number] | None = None):
        params = tuple(params)
        if list(params) != sorted(set(params)):
            raise StructureError(f"parameters must be sorted and distinct: {params}")
        self.params = params
        clean: dict[Exponent, Fraction] = {}
        for exp, coeff in (terms or {}).items():
            if len(exp) != len(params):
                raise StructureError(
                    f"exponent {exp} has length {len(exp)}, expected {len(params)}"
                )
            q = Fraction(coeff)
            if q:
                clean[tuple(exp)] = clean.get(tuple(exp), Fraction(0)) + q
        self.terms = {e: c for e, c in clean.items() if c}
        self._hash = None

    @classmethod
    def _trusted(cls, params: tuple[str, ...], terms: dict) -> "Poly":
        """Skip validation for terms produced by our own arithmetic; drops zero coefficients."""
        p = object.__new__(cls)
        p.params = params
        p.terms = {e: c for e, c in terms.items() if c}
        p._hash = None
        return p

    # -- constructors -------------------------------------------------

    @classmethod
    def const(cls, params: Iterable[str], value: Number = 0) -> "Poly":
        params = tuple(params)
        q = to_rational(value)
        return cls(params, {(0,) * len(params): q} if q else {})

    @classmethod
    def var(cls, params: Iterable[str], name: str) -> "Poly":
        params = tuple(params)
        if name not in params:
            raise StructureError(f"unknown parameter {name!r}; declared: {list(params)}")
        exp = tuple(1 if p == name else 0 for p in params)
        return cls(params, {exp: Fraction(1)})

    # -- predicates ---------------------------------------------------

    def is_zero(self) -> bool:
        return not self.terms

    def is_constant(self) -> bool:
        return all(not any(e) for e in self.terms)

    def constant_value(self) -> Fraction:
        if not self.is_constant():
            raise StructureError(f"{self} is not constant")
        return next(iter(self.terms.values()), Fraction(0))

    def variables(self) -> set[str]:
        used = set()
        for exp in self.terms:
            used.update(p for p, k in zip(self.params, exp) if k)
        return used

    def degree(self) -> int:
        return max((sum(e) for e in self.terms), default=0)

    # -- arithmetic ---------------------------------------------------

    def _coerce(self, other) -> "Poly":
        if isinstance(other, Poly):
            if other.params != self.params:
                raise StructureError(
                    f"parameter sets differ: {self.params} vs {other.params}"
                )
            return other
        if isinstance(other, (int, Fraction)) and not isinstance(other, bool):
            return Poly.const(self.params, other)
        return NotImplemented

    def __add__(self, other):
        other = self._coerce(other)
        if other is NotImplemented:
            return other
        if not other.terms:
            return self
        if not self.terms:
            return other
        out = dict(self.terms)
        for e, c in other.terms.items():
            out[e] = out[e] + c if e in out else c
        return Poly._trusted(self.params, out)

    __radd__ = __add__

    def __neg__(self) -> "Poly":
        return Poly._trusted(self.params, {e: -c for e, c in self.terms.items()})

    def __pos__(self) -> "Poly":
        return self

    def __sub__(self, other):
        other = self._coerce(other)
        if other is NotImplemented:
            return other
        return self + (-other)

    def __rsub__(self, other):
        other = self._coerce(other)
        if other is NotImplemented:
            return other
        return other - self

    def __mul__(self, other):
        other = self._coerce(other)
        if other is NotImplemented:
            return other
        if not self.terms or not other.terms:
            return Poly._trusted(self.params, {})
        out: dict[Exponent, Fraction] = {}
        for e1, c1 in self.terms.items():
            for e2, c2 in other.terms.items():
                e = tuple(a + b for a, b in zip(e1, e2))
                out[e] = out[e] + c1 * c2 if e in out else c1 * c2
        return Poly._trusted(self.params, out)

    __rmul__ = __mul__

    def __truediv__(self, other):
        # Only division by non-zero rationals; the ring has no parameter inverses.
        if isinstance(other, Poly):
            other = other.constant_value()
        q = to_rational(other)
        if not q:
            raise ZeroDivisionError("division of a polynomial by zero")
        return Poly(self.params, {e: c / q for e, c in self.terms.items()})

    def __pow__(self, k: int) -> "Poly":
        if not isinstance(k, int) or k < 0:
            raise StructureError(f"exponent must be a non-negative integer, got {k!r}")
        result = Poly.const(self.params, 1)
        base = self
        while k:
            if k & 1:
                result = result * base
            base = base * base
            k >>= 1
        return result

    # -- comparison ---------------------------------------------------

    def __eq__(self, other) -> bool:
        if isinstance(other, Poly):
            return self.params == other.params and self.terms == other.terms
        if isinstance(other, (int, Fraction)) and not isinstance(other, bool):
            return self.is_constant() and self.constant_value() == other
        return NotImplemented

    def __hash__(self) -> int:
        if self._hash is None:
            self._hash = hash((self.params, frozenset(self.terms.items())))
        return self._hash

    def __bool__(self) -> bool:
        return bool(self.terms)

    # -- evaluation ---------------------------------------------------

    def substitute(self, bindings: Mapping[str, Number]) -> Fraction:
        """Evaluate exactly; every parameter that occurs must be bound."""
        missing = sorted(self.variables() - set(bindings))
        if missing:
            raise StructureError(f"missing binding for {', '.join(missing)}")
        values = [to_rational(bindings[p]) if p in bindings else Fraction(0) for p in self.params]
        total = Fraction(0)
        for exp, coeff in self.terms.items():
            term = coeff
            for v, k in zip(values, exp):
                if k:
                    term *= v**k
            total += term
        return total

    def bind(self, bindings: Mapping[str, Number]) -> "Poly":
        """Partially evaluate, keeping the same parameter set."""
        idx = {p: i for i, p in enumerate(self.params)}
        unknown = sorted(set(bindings) - set(idx))
        if unknown:
            raise StructureError(f"unknown parameter(s) {unknown}")
        fixed = {idx[p]: to_rational(v) for p, v in bindings.items()}
        out: dict[Exponent, Fraction] = {}
        for exp, coeff in self.terms.items():
            new = list(exp)
            for i, v in fixed.items():
                if new[i]:
                    coeff = coeff * v ** new[i]
                    new[i] = 0
            key = tuple(new)
            out[key] = out.get(key, Fraction(0)) + coeff
        return Poly(self.params, out)

    def rename(self, mapping: Mapping[str, str]) -> "Poly":
        """Rename parameters; the result is re-sorted into canonical order."""
        names = [mapping.get(p, p) for p in self.params]
        order = sorted(range(len(names)), key=names.__getitem__)
        params = tuple(names[i] for i in order)
        return Poly(params, {tuple(e[i] for i in order): c for e, c in self.terms.items()})

    # -- text ---------------------------------------------------------

    def render(self) -> str:
        if not self.terms:
            return "0"
        # graded order: higher total degree first, then lexicographic exponents
        keys = sorted(self.terms, key=lambda e: (-sum(e), tuple(-k for k in e)))
        pieces = []
        for exp in keys:
            coeff = self.terms[exp]
            factors = []
            for p, k in zip(self.params, exp):
                if k == 1:
                    factors.append(p)
                elif k > 1:
                    factors.append(f"{p}^{k}")
            mag = abs(coeff)
            if not factors:
                body = format_rational(mag)
            elif mag == 1:
                body = "*".join(factors)
            else:
                body = "*".join([format_rational(mag)] + factors)
            sign = "-" if coeff < 0 else "+"
            pieces.append((sign, body))
        first_sign, first_body = pieces[0]
        out = ("-" if first_sign == "-" else "") + first_body
        for sign, body in pieces[1:]:
            out += f" {sign} {body}"
        return out

    def __str__(self) -> str:
        return self.render()

    def __repr__(self) -> str:
        return f"Poly({self.render()!r})"


def poly_add(a: Poly, b: Poly) -> Poly:
    return a + b


def poly_mul(a: Poly, b: Poly) -> Poly:
    return a * b


def poly_substitute(a: Poly, bindings: Mapping[str, Number]) -> Fraction:
    return a.substitute(bindings)


class _Parser:
    """Recursive-descent parser for the polynomial grammar.

    expr   := term (('+' | '-') term)*
    term   := factor ('*' factor)*
    factor := ('+' | '-') factor | power
    power  := atom ('^' INT)?
    atom   := INT ('/' INT)? | IDENT | '(' expr ')'
    """

    def __init__(self, text: str, params: tuple[str, ...]):
        self.text = text
        self.params = params
        self.pos = 0

    def fail(self, message: str, pos: int | None = None):
        raise PolyParseError(message, self.text, self.pos if pos is None else pos)

    def skip(self) -> None:
        while self.pos < len(self.text) and self.text[self.pos].isspace():
            self.pos += 1

    def peek(self) -> str:
        self.skip()
        return self.text[self.pos] if self.pos < len(self.text) else ""

    def integer(self) -> int:
        self.skip()
        m = re.compile(r"\d+").match(self.text, self.pos)
        if not m:
            self.fail("expected integer")
        self.pos = m.end()
        return int(m.group())

    def parse(self) -> Poly:
        if not self.text.strip():
            self.fail("empty expression", 0)
        value = self.expr()
        if self.peek():
            self.fail(f"unexpected {self.peek()!r}")
        return value

    def expr(self) -> Poly:
        value = self.term()
        while self.peek() in ("+", "-"):
            op = self.text[self.pos]
            self.pos += 1
            rhs = self.term()
            value = value + rhs if op == "+" else value - rhs
        return value

    def term(self) -> Poly:
        value = self.factor()
        while self.peek() == "*":
            self.pos += 1
            value = value * self.factor()
        return value

    def factor(self) -> Poly:
        c = self.peek()
        if c in ("+", "-"):
            self.pos += 1
            inner = self.factor()
            return -inner if c == "-" else inner
        return self.power()

    def power(self) -> Poly:
        base = self.atom()
        if self.peek() == "^":
            self.pos += 1
            at = self.pos
            k = self.integer()
            if k < 1:
                self.fail("exponent must be a positive integer", at)
            base = base**k
        return base

    def atom(self) -> Poly:
        c = self.peek()
        if c == "(":
            self.pos += 1
            value = self.expr()
            if self.peek() != ")":
                self.fail("expected ')'")
            self.pos += 1
            return value
        if c.isdigit():
            num = self.integer()
            if self.peek() == "/":
                self.pos += 1
                at = self.pos
                den = self.integer()
                if den == 0:
                    self.fail("zero denominator", at)
                return Poly.const(self.params, Fraction(num, den))
            return Poly.const(self.params, num)
        m = _IDENT.match(self.text, self.pos)
        if m:
            name = m.group()
            if name not in self.params:
                self.fail(f"unknown identifier {name!r}")
            self.pos = m.end()
            return Poly.var(self.params, name)
        if not c:
            self.fail("unexpected end of input")
        self.fail(f"unexpected {c!r}")


def parse_poly(text: str, params: Iterable[str]) -> Poly:
    """Parse ``text`` into a canonical polynomial over ``params`` (sorted)."""
    return _Parser(text, tuple(sorted(params))).parse()
