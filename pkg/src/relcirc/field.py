"""Exact arithmetic in Q(x), the field of univariate rational functions.

Polynomials are stored as tuples of ``gmpy2.mpq`` coefficients in ascending
order of powers; the zero polynomial is the empty tuple.  A rational function
is a reduced fraction ``num/den`` with a monic denominator.

Constants are ubiquitous in circuit work (resistances, source values), so the
linear-algebra layer does not wrap them: it works with plain ``mpq`` values and
only falls back to :class:`RatFunc` for genuinely non-constant entries.  Use
:func:`lower` to collapse a constant ``RatFunc`` to ``mpq`` and :func:`to_field`
to coerce user input.
"""

from __future__ import annotations

import re
from fractions import Fraction
from typing import Union

from gmpy2 import mpq

__all__ = [
    "FieldError", "ZeroDenominator", "DivisionByZero", "PoleAtPoint",
    "RatFuncSyntaxError", "Poly", "RatFunc", "X", "rf_normalize", "rf_arith",
    "rf_eval", "parse_ratfunc", "parse_rational", "to_field", "lower",
    "format_value", "is_constant",
]

ZERO = mpq(0)
ONE = mpq(1)


class FieldError(ArithmeticError):
    pass


class ZeroDenominator(FieldError, ZeroDivisionError):
    pass


class DivisionByZero(FieldError, ZeroDivisionError):
    pass


class PoleAtPoint(FieldError):
    pass


class RatFuncSyntaxError(FieldError, ValueError):
    def __init__(self, message, pos=None):
        self.pos = pos
        super().__init__(message if pos is None else f"{message} (at offset {pos})")


def _strip(coeffs):
    coeffs = list(coeffs)
    while coeffs and not coeffs[-1]:
        coeffs.pop()
    return tuple(coeffs)


class Poly:
    """Polynomial over Q in the indeterminate ``x``."""

    __slots__ = ("coeffs",)

    def __init__(self, coeffs=()):
        self.coeffs = _strip(mpq(c) for c in coeffs)

    @classmethod
    def _raw(cls, coeffs):
        p = object.__new__(cls)
        p.coeffs = coeffs
        return p

    @classmethod
    def constant(cls, c):
        c = mpq(c)
        return cls._raw((c,) if c else ())

    @property
    def degree(self):
        return len(self.coeffs) - 1  # -1 for the zero polynomial

    @property
    def lead(self):
        return self.coeffs[-1] if self.coeffs else ZERO

    def is_zero(self):
        return not self.coeffs

    def __bool__(self):
        return bool(self.coeffs)

    def __eq__(self, other):
        if isinstance(other, Poly):
            return self.coeffs == other.coeffs
        return NotImplemented

    def __hash__(self):
        return hash(self.coeffs)

    def __repr__(self):
        return f"Poly({str(self)!r})"

    def __add__(self, other):
        a, b = self.coeffs, other.coeffs
        if len(a) < len(b):
            a, b = b, a
        out = list(a)
        for k, c in enumerate(b):
            out[k] += c
        return Poly._raw(_strip(out))

    def __neg__(self):
        return Poly._raw(tuple(-c for c in self.coeffs))

    def __sub__(self, other):
        return self + (-other)

    def __mul__(self, other):
        a, b = self.coeffs, other.coeffs
        if not a or not b:
            return Poly._raw(())
        out = [ZERO] * (len(a) + len(b) - 1)
        for i, ca in enumerate(a):
            if ca:
                for j, cb in enumerate(b):
                    out[i + j] += ca * cb
        return Poly._raw(_strip(out))

    def scale(self, c):
        if not c:
            return Poly._raw(())
        return Poly._raw(tuple(v * c for v in self.coeffs))

    def divmod(self, other):
        if not other.coeffs:
            raise DivisionByZero("polynomial division by zero")
        rem = list(self.coeffs)
        db = other.degree
        lead_inv = 1 / other.lead
        if len(rem) - 1 < db:
            return Poly._raw(()), self
        quo = [ZERO] * (len(rem) - db)
        for k in range(len(rem) - 1, db - 1, -1):
            c = rem[k] * lead_inv
            if c:
                quo[k - db] = c
                for j, cb in enumerate(other.coeffs):
                    rem[k - db + j] -= c * cb
        return Poly._raw(_strip(quo)), Poly._raw(_strip(rem[:db]))

    def monic(self):
        if not self.coeffs or self.lead == 1:
            return self
        return self.scale(1 / self.lead)

    def __call__(self, point):
        acc = ZERO
        for c in reversed(self.coeffs):
            acc = acc * point + c
        return acc

    def __str__(self):
        if not self.coeffs:
            return "0"
        parts = []
        for k in range(len(self.coeffs) - 1, -1, -1):
            c = self.coeffs[k]
            if not c:
                continue
            neg = c < 0
            mag = -c if neg else c
            if k == 0:
                body = str(mag)
            else:
                xs = "x" if k == 1 else f"x^{k}"
                body = xs if mag == 1 else f"{mag}*{xs}"
            if not parts:
                parts.append(("-" if neg else "") + body)
            else:
                parts.append((" - " if neg else " + ") + body)
        return "".join(parts)


def poly_gcd(a: Poly, b: Poly) -> Poly:
    """Monic gcd over Q (Euclid)."""
    while b.coeffs:
        a, b = b, a.divmod(b)[1]
    return a.monic()


_P_ONE = Poly._raw((ONE,))
_P_X = Poly._raw((ZERO, ONE))


class RatFunc:
    """Reduced fraction of polynomials with monic denominator.

    Instances are immutable.  Arithmetic always returns a ``RatFunc``;
    comparison with plain numbers works for constant values.
    """

    __slots__ = ("num", "den")

    def __init__(self, num=0, den=1):
        if not isinstance(num, Poly):
            num = Poly.constant(num)
        if not isinstance(den, Poly):
            den = Poly.constant(den)
        n, d = _reduce(num, den)
        self.num = n
        self.den = d

    @classmethod
    def _raw(cls, num, den):
        r = object.__new__(cls)
        r.num = num
        r.den = den
        return r

    @classmethod
    def from_value(cls, v):
        if isinstance(v, RatFunc):
            return v
        if isinstance(v, Poly):
            return cls._raw(v, _P_ONE)
        return cls._raw(Poly.constant(v), _P_ONE)

    def is_constant(self):
        return self.den.degree == 0 and self.num.degree <= 0

    def constant_value(self):
        if not self.is_constant():
            raise ValueError(f"{self} is not constant")
        return self.num.coeffs[0] if self.num.coeffs else ZERO

    def __bool__(self):
        return bool(self.num.coeffs)

    def __eq__(self, other):
        if isinstance(other, RatFunc):
            return self.num == other.num and self.den == other.den
        if isinstance(other, (int, Fraction)) or type(other) is type(ZERO):
            return self.is_constant() and self.constant_value() == other
        return NotImplemented

    def __hash__(self):
        if self.is_constant():
            return hash(self.constant_value())
        return hash((self.num, self.den))

    def __repr__(self):
        return f"RatFunc({str(self)!r})"

    def __str__(self):
        if self.den.degree == 0:
            return str(self.num)
        return f"({self.num})/({self.den})"

    # arithmetic -----------------------------------------------------------

    def __add__(self, other):
        other = _coerce(other)
        if other is NotImplemented:
            return other
        a, b = self, other
        if a.den.degree == 0 and b.den.degree == 0:
            return RatFunc._raw(a.num + b.num, _P_ONE)
        if a.den == b.den:
            return _make(a.num + b.num, a.den)
        return _make(a.num * b.den + b.num * a.den, a.den * b.den)

    __radd__ = __add__

    def __neg__(self):
        return RatFunc._raw(-self.num, self.den)

    def __sub__(self, other):
        other = _coerce(other)
        if other is NotImplemented:
            return other
        return self + (-other)

    def __rsub__(self, other):
        other = _coerce(other)
        if other is NotImplemented:
            return other
        return other + (-self)

    def __mul__(self, other):
        other = _coerce(other)
        if other is NotImplemented:
            return other
        a, b = self, other
        if a.den.degree == 0 and b.den.degree == 0:
            return RatFunc._raw(a.num * b.num, _P_ONE)
        return _make(a.num * b.num, a.den * b.den)

    __rmul__ = __mul__

    def inverse(self):
        if not self.num.coeffs:
            raise DivisionByZero("inverse of zero rational function")
        lead = self.num.lead
        return RatFunc._raw(self.den.scale(1 / lead), self.num.scale(1 / lead))

    def __truediv__(self, other):
        other = _coerce(other)
        if other is NotImplemented:
            return other
        return self * other.inverse()

    def __rtruediv__(self, other):
        other = _coerce(other)
        if other is NotImplemented:
            return other
        return other * self.inverse()

    def __pow__(self, k):
        if not isinstance(k, int):
            return NotImplemented
        base = self if k >= 0 else self.inverse()
        out = RatFunc._raw(_P_ONE, _P_ONE)
        for _ in range(abs(k)):
            out = out * base
        return out

    def __call__(self, point):
        return rf_eval(self, point)


def _coerce(v):
    if isinstance(v, RatFunc):
        return v
    if isinstance(v, (int, Fraction)) or type(v) is type(ZERO):
        return RatFunc._raw(Poly.constant(v), _P_ONE)
    return NotImplemented


def _reduce(num: Poly, den: Poly):
    if not den.coeffs:
        raise ZeroDenominator("denominator is the zero polynomial")
    if not num.coeffs:
        return Poly._raw(()), _P_ONE
    if den.degree == 0:
        return num.scale(1 / den.lead), _P_ONE
    g = poly_gcd(num, den)
    if g.degree > 0:
        num = num.divmod(g)[0]
        den = den.divmod(g)[0]
    lead = den.lead
    if lead != 1:
        num, den = num.scale(1 / lead), den.scale(1 / lead)
    return num, den


def _make(num, den):
    n, d = _reduce(num, den)
    return RatFunc._raw(n, d)


X = RatFunc._raw(_P_X, _P_ONE)


# functional entry points -----------------------------------------------------

def rf_normalize(num, den) -> RatFunc:
    """Unique reduced, monic-denominator representative of ``num/den``."""
    if not isinstance(num, Poly):
        num = Poly(num) if isinstance(num, (list, tuple)) else Poly.constant(num)
    if not isinstance(den, Poly):
        den = Poly(den) if isinstance(den, (list, tuple)) else Poly.constant(den)
    return _make(num, den)


def rf_arith(op: str, a, b) -> RatFunc:
    a, b = RatFunc.from_value(a), RatFunc.from_value(b)
    if op == "add":
        return a + b
    if op == "sub":
        return a - b
    if op == "mul":
        return a * b
    if op == "div":
        if not b:
            raise DivisionByZero(f"division of {a} by zero")
        return a / b
    raise ValueError(f"unknown operation {op!r}")


def rf_eval(f, point):
    """Evaluate ``f`` exactly at a rational ``point``."""
    f = RatFunc.from_value(f)
    point = mpq(point)
    d = f.den(point)
    if not d:
        raise PoleAtPoint(f"{f} has a pole at {point}")
    return f.num(point) / d


# field-element helpers used by the linear algebra ---------------------------

Scalar = Union["mpq", RatFunc]


def lower(v):
    """Collapse constant rational functions to ``mpq``."""
    if v.__class__ is RatFunc:
        if v.den.degree == 0 and v.num.degree <= 0:
            return v.num.coeffs[0] if v.num.coeffs else ZERO
        return v
    return v


def to_field(v):
    """Coerce user input (int, Fraction, str, RatFunc, Poly) to a field element."""
    if v.__class__ is type(ZERO):
        return v
    if isinstance(v, RatFunc):
        return lower(v)
    if isinstance(v, Poly):
        return lower(RatFunc.from_value(v))
    if isinstance(v, str):
        return lower(parse_ratfunc(v))
    if isinstance(v, (int, Fraction)):
        return mpq(v)
    if isinstance(v, float):
        raise TypeError("floats are not exact; pass a Fraction or string")
    return mpq(v)


def is_constant(v):
    return not isinstance(v, RatFunc) or v.is_constant()


def format_value(v) -> str:
    return str(lower(v))


# parsing ----------------------------------------------------------------------

_TOKEN = re.compile(r"\s*(?:(\d+)|(x)|([-+*/^()]))")


class _Parser:
    def __init__(self, text):
        self.text = text
        self.toks = []
        pos = 0
        while pos < len(text):
            if text[pos:].strip() == "":
                break
            m = _TOKEN.match(text, pos)
            if not m:
                raise RatFuncSyntaxError(f"unexpected character {text[pos:].lstrip()[:1]!r}",
                                         pos + len(text[pos:]) - len(text[pos:].lstrip()))
            start = m.start(m.lastindex)
            if m.group(1):
                self.toks.append(("int", m.group(1), start))
            elif m.group(2):
                self.toks.append(("x", "x", start))
            else:
                self.toks.append(("op", m.group(3), start))
            pos = m.end()
        self.i = 0

    def peek(self):
        return self.toks[self.i] if self.i < len(self.toks) else ("end", "", len(self.text))

    def take(self):
        tok = self.peek()
        self.i += 1
        return tok

    def expect(self, value):
        tok = self.take()
        if tok[1] != value:
            raise RatFuncSyntaxError(f"expected {value!r}, found {tok[1] or 'end of input'!r}", tok[2])

    def parse(self):
        if not self.toks:
            raise RatFuncSyntaxError("empty expression", 0)
        v = self.expr()
        tok = self.peek()
        if tok[0] != "end":
            raise RatFuncSyntaxError(f"unexpected {tok[1]!r}", tok[2])
        return v

    def expr(self):
        v = self.term()
        while self.peek()[1] in ("+", "-") and self.peek()[0] == "op":
            op = self.take()[1]
            rhs = self.term()
            v = v + rhs if op == "+" else v - rhs
        return v

    def term(self):
        v = self.unary()
        while self.peek()[1] in ("*", "/") and self.peek()[0] == "op":
            _, op, pos = self.take()
            rhs = self.unary()
            if op == "*":
                v = v * rhs
            else:
                if not rhs:
                    raise RatFuncSyntaxError("division by zero", pos)
                v = v / rhs
        return v

    def unary(self):
        if self.peek()[1] == "-":
            self.take()
            return -self.unary()
        if self.peek()[1] == "+":
            self.take()
            return self.unary()
        return self.power()

    def power(self):
        base = self.atom()
        if self.peek()[1] == "^":
            self.take()
            tok = self.take()
            if tok[0] != "int":
                raise RatFuncSyntaxError("exponent must be a non-negative integer", tok[2])
            base = base ** int(tok[1])
        return base

    def atom(self):
        kind, val, pos = self.take()
        if kind == "int":
            return RatFunc._raw(Poly.constant(int(val)), _P_ONE)
        if kind == "x":
            return X
        if val == "(":
            v = self.expr()
            self.expect(")")
            return v
        raise RatFuncSyntaxError(f"unexpected {val or 'end of input'!r}", pos)


def parse_ratfunc(text: str) -> RatFunc:
    """Parse ``(3*x^2-1)/(x+2)``-style text into a :class:`RatFunc`."""
    return _Parser(text).parse()


def parse_rational(text: str):
    """Parse a rational literal such as ``5`` or ``-3/2``."""
    v = parse_ratfunc(text)
    if not v.is_constant():
        raise RatFuncSyntaxError(f"expected a rational constant, got {text!r}")
    return v.constant_value()
