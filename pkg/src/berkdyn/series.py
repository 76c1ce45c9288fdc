"""Exact Puiseux series over Q with valuation and precision tracking.

A series is a finite, strictly increasing list of (exponent, coefficient)
pairs — both exact rationals — plus an absolute precision: every term with
exponent below the precision is stored exactly, nothing is known beyond it.
Exact values (finite sums) carry precision ``INF``.

The order (least exponent) of a nonzero element doubles as the negated
natural logarithm of its absolute value: |z| = e^(-order(z)).  All metric
quantities in the engine live in this log scale, as exact rationals.

The surface syntax for series literals (shared with the CLI) is a signed sum
of terms ``rational ['*'] 't' '^' '(' rational ')'`` or bare rationals, e.g.
``3/2*t^(-1) + t^(1/2) - 7*t^(2)``.
"""

from __future__ import annotations

import re
from fractions import Fraction
from math import lcm
from typing import Iterable, Iterator

from .errors import (
    ApproximateZeroError,
    IndeterminateOrderError,
    InputSyntaxError,
    PreconditionError,
)
from .rational import INF, Extended, as_fraction, render_fraction

_DEFAULT_PRECISION = Fraction(32)


def default_precision() -> Fraction:
    """Global working precision used when inverting exact series."""
    return _DEFAULT_PRECISION


def set_default_precision(value) -> None:
    global _DEFAULT_PRECISION
    value = as_fraction(value, "precision")
    if value <= 0:
        raise PreconditionError("default precision must be positive")
    _DEFAULT_PRECISION = value


class PuiseuxSeries:
    """Immutable exact series in rational powers of t.

    ``terms``: tuple of (exponent, coefficient), exponents strictly
    increasing, coefficients nonzero.  ``precision``: Fraction or INF; all
    exponents are < precision (boundary-inclusive truncations, used for
    residue-class inspection, may carry one term at the precision itself).
    """

    __slots__ = ("terms", "precision", "_hash")

    def __init__(self, terms: Iterable[tuple[Fraction, Fraction]], precision: Extended = INF):
        merged: dict[Fraction, Fraction] = {}
        for exponent, coefficient in terms:
            exponent = as_fraction(exponent, "exponent")
            coefficient = as_fraction(coefficient, "coefficient")
            if coefficient == 0:
                continue
            acc = merged.get(exponent, Fraction(0)) + coefficient
            if acc == 0:
                merged.pop(exponent, None)
            else:
                merged[exponent] = acc
        if precision is not INF:
            precision = as_fraction(precision, "precision")
            merged = {e: c for e, c in merged.items() if e < precision}
        object.__setattr__(self, "terms", tuple(sorted(merged.items())))
        object.__setattr__(self, "precision", precision)
        object.__setattr__(self, "_hash", None)

    def __setattr__(self, name, value):  # immutability guard
        raise AttributeError("PuiseuxSeries is immutable")

    # -- constructors -------------------------------------------------

    @classmethod
    def _raw(cls, terms: tuple[tuple[Fraction, Fraction], ...], precision: Extended) -> "PuiseuxSeries":
        out = cls.__new__(cls)
        object.__setattr__(out, "terms", terms)
        object.__setattr__(out, "precision", precision)
        object.__setattr__(out, "_hash", None)
        return out

    @classmethod
    def zero(cls, precision: Extended = INF) -> "PuiseuxSeries":
        return cls._raw((), precision)

    @classmethod
    def one(cls) -> "PuiseuxSeries":
        return cls.rational(1)

    @classmethod
    def rational(cls, value) -> "PuiseuxSeries":
        return cls.monomial(value, 0)

    @classmethod
    def monomial(cls, coefficient, exponent) -> "PuiseuxSeries":
        coefficient = as_fraction(coefficient, "coefficient")
        exponent = as_fraction(exponent, "exponent")
        if coefficient == 0:
            return cls.zero()
        return cls._raw(((exponent, coefficient),), INF)

    @classmethod
    def tau(cls, exponent=1) -> "PuiseuxSeries":
        return cls.monomial(1, exponent)

    # -- basic queries -------------------------------------------------

    @property
    def is_exact(self) -> bool:
        return self.precision is INF

    @property
    def is_zero(self) -> bool:
        """Exactly the zero element (no terms, infinite precision)."""
        return not self.terms and self.is_exact

    @property
    def is_indistinguishable_from_zero(self) -> bool:
        return not self.terms

    def order(self) -> Extended:
        """Least exponent; INF for exact zero.

        Raises when the series has no stored terms but finite precision:
        its order is only known to be >= precision."""
        if self.terms:
            return self.terms[0][0]
        if self.is_exact:
            return INF
        raise IndeterminateOrderError(
            f"order unknown: zero to precision {render_fraction(self.precision)}"
        )

    def order_bound(self) -> Extended:
        """Certified lower bound for the order; never raises."""
        if self.terms:
            return self.terms[0][0]
        return INF if self.is_exact else self.precision

    def order_at_least(self, bound) -> bool:
        """Exact decision of order >= bound (raises if indeterminate)."""
        bound = as_fraction(bound, "bound")
        if self.terms:
            return self.terms[0][0] >= bound
        if self.is_exact or self.precision >= bound:
            return True
        raise IndeterminateOrderError(
            f"cannot certify order >= {render_fraction(bound)} at precision "
            f"{render_fraction(self.precision)}"
        )

    def leading(self) -> tuple[Fraction, Fraction]:
        if not self.terms:
            raise ApproximateZeroError("series has no determinate leading term")
        return self.terms[0]

    def coefficient(self, exponent) -> Fraction:
        exponent = as_fraction(exponent, "exponent")
        if self.precision is not INF and exponent >= self.precision:
            raise IndeterminateOrderError("coefficient beyond stored precision")
        for e, c in self.terms:
            if e == exponent:
                return c
        return Fraction(0)

    def __bool__(self) -> bool:
        return bool(self.terms)

    def __iter__(self) -> Iterator[tuple[Fraction, Fraction]]:
        return iter(self.terms)

    # -- arithmetic ----------------------------------------------------

    def __add__(self, other: "PuiseuxSeries") -> "PuiseuxSeries":
        if not isinstance(other, PuiseuxSeries):
            return NotImplemented
        return self._merge(other, False)

    def __neg__(self) -> "PuiseuxSeries":
        return PuiseuxSeries._raw(tuple((e, -c) for e, c in self.terms), self.precision)

    def __sub__(self, other: "PuiseuxSeries") -> "PuiseuxSeries":
        if not isinstance(other, PuiseuxSeries):
            return NotImplemented
        return self._merge(other, True)

    def _merge(self, other: "PuiseuxSeries", negate: bool) -> "PuiseuxSeries":
        precision = min_precision(self.precision, other.precision)
        ta, tb = self.terms, other.terms
        out: list[tuple[Fraction, Fraction]] = []
        i = j = 0
        na, nb = len(ta), len(tb)
        while i < na and j < nb:
            ea, ca = ta[i]
            eb, cb = tb[j]
            if ea < eb:
                out.append(ta[i])
                i += 1
            elif eb < ea:
                out.append((eb, -cb) if negate else tb[j])
                j += 1
            else:
                c = ca - cb if negate else ca + cb
                if c:
                    out.append((ea, c))
                i += 1
                j += 1
        if i < na:
            out.extend(ta[i:])
        if j < nb:
            if negate:
                out.extend((eb, -cb) for eb, cb in tb[j:])
            else:
                out.extend(tb[j:])
        if precision is not INF:
            out = [tc for tc in out if tc[0] < precision]
        return PuiseuxSeries._raw(tuple(out), precision)

    def __mul__(self, other: "PuiseuxSeries") -> "PuiseuxSeries":
        if not isinstance(other, PuiseuxSeries):
            return NotImplemented
        if self.is_zero or other.is_zero:
            return PuiseuxSeries.zero()
        precision = _product_precision(self, other)
        acc: dict[Fraction, Fraction] = {}
        for e1, c1 in self.terms:
            for e2, c2 in other.terms:
                e = e1 + e2
                if precision is not INF and e >= precision:
                    continue
                v = acc.get(e, Fraction(0)) + c1 * c2
                if v == 0:
                    acc.pop(e, None)
                else:
                    acc[e] = v
        return PuiseuxSeries._raw(tuple(sorted(acc.items())), precision)

    def scale(self, coefficient) -> "PuiseuxSeries":
        coefficient = as_fraction(coefficient, "coefficient")
        if coefficient == 0:
            return PuiseuxSeries.zero()
        return PuiseuxSeries._raw(
            tuple((e, c * coefficient) for e, c in self.terms), self.precision
        )

    def shift_exponents(self, delta) -> "PuiseuxSeries":
        """Multiply by t^delta."""
        delta = as_fraction(delta, "delta")
        precision = self.precision if self.precision is INF else self.precision + delta
        return PuiseuxSeries._raw(tuple((e + delta, c) for e, c in self.terms), precision)

    def __pow__(self, exponent: int) -> "PuiseuxSeries":
        if not isinstance(exponent, int):
            return NotImplemented
        if exponent < 0:
            return self.invert() ** (-exponent)
        result = PuiseuxSeries.one()
        base = self
        n = exponent
        while n:
            if n & 1:
                result = result * base
            base = base * base if n > 1 else base
            n >>= 1
        return result

    def invert(self, precision: Extended | None = None) -> "PuiseuxSeries":
        """Multiplicative inverse, correct below the returned precision.

        Exact monomials invert exactly.  Otherwise the result precision is
        the requested one, defaulting to the standard valuation bookkeeping
        input_precision - 2*order (global default window for exact inputs).
        """
        if not self.terms:
            raise ApproximateZeroError("cannot invert a series indistinguishable from 0")
        v, c0 = self.terms[0]
        if len(self.terms) == 1 and self.is_exact:
            return PuiseuxSeries.monomial(1 / c0, -v)
        if precision is None:
            if self.precision is INF:
                precision = default_precision() - 2 * v
            else:
                precision = self.precision - 2 * v
        else:
            precision = as_fraction(precision, "precision")
        relative = precision + v  # needed correct exponent window of 1/(unit part)
        if relative <= 0:
            return PuiseuxSeries.zero(precision)
        # unit = self / (c0 t^v) = 1 + g with order(g) > 0
        unit = self.scale(1 / c0).shift_exponents(-v).truncate_below(relative)
        inv = PuiseuxSeries.one()
        two = PuiseuxSeries.rational(2)
        for _ in range(64):
            err = (unit * inv - PuiseuxSeries.one()).truncate_below(relative)
            if not err.terms:
                break
            inv = (inv * (two - unit * inv)).truncate_below(relative)
        else:  # pragma: no cover - geometric convergence
            raise ApproximateZeroError("inversion failed to converge")
        return inv.scale(1 / c0).shift_exponents(-v).truncate_below(precision)

    def __truediv__(self, other: "PuiseuxSeries") -> "PuiseuxSeries":
        if not isinstance(other, PuiseuxSeries):
            return NotImplemented
        return self * other.invert()

    # -- truncation / structure -----------------------------------------

    def truncate_below(self, cutoff, include_boundary: bool = False) -> "PuiseuxSeries":
        """Keep terms with exponent < cutoff (<= with the flag); the result's
        precision is the cutoff."""
        cutoff = as_fraction(cutoff, "cutoff")
        if include_boundary:
            kept = tuple((e, c) for e, c in self.terms if e <= cutoff)
        else:
            kept = tuple((e, c) for e, c in self.terms if e < cutoff)
        precision = cutoff
        if self.precision is not INF and self.precision < cutoff:
            precision = self.precision
        return PuiseuxSeries._raw(kept, precision)

    def restrict_precision(self, precision) -> "PuiseuxSeries":
        precision = as_fraction(precision, "precision")
        if self.precision is not INF and self.precision <= precision:
            return self
        return self.truncate_below(precision)

    def ramification_index(self) -> int:
        """lcm of the exponent denominators of the stored terms.

        Equals the degree of the smallest ramified extension Q((t^(1/m)))
        containing the element; for truncated input this is a certified
        lower bound (deeper terms can only increase it)."""
        out = 1
        for e, _ in self.terms:
            out = lcm(out, e.denominator)
        return out

    # -- comparisons -----------------------------------------------------

    def _key(self):
        return (self.terms, self.precision)

    def __eq__(self, other: object) -> bool:
        if not isinstance(other, PuiseuxSeries):
            return NotImplemented
        return self._key() == other._key()

    def __hash__(self) -> int:
        h = self._hash
        if h is None:
            h = hash(self._key())
            object.__setattr__(self, "_hash", h)
        return h

    def sort_key(self):
        """Deterministic total order for reports: by order, then terms."""
        lead = self.order_bound()
        lead_key = (1,) if lead is INF else (0, lead)
        return (lead_key, self.terms, () if self.precision is INF else (self.precision,))

    def __repr__(self) -> str:
        return f"PuiseuxSeries({render_series(self)!r})"


def min_precision(a: Extended, b: Extended) -> Extended:
    if a is INF:
        return b
    if b is INF:
        return a
    return min(a, b)


def _product_precision(a: PuiseuxSeries, b: PuiseuxSeries) -> Extended:
    if a.precision is INF and b.precision is INF:
        return INF
    candidates = []
    if a.precision is not INF:
        candidates.append(a.precision + b.order_bound())
    if b.precision is not INF:
        candidates.append(b.precision + a.order_bound())
    finite = [c for c in candidates if c is not INF]
    return min(finite) if finite else INF


# -- series literal grammar ------------------------------------------------

_TOKEN = re.compile(
    r"\s*(?:(?P<rational>\d+(?:/\d+)?)|(?P<t>t)|(?P<op>[-+*^()]))"
)


def _tokenize(text: str):
    pos = 0
    tokens = []
    while pos < len(text):
        m = _TOKEN.match(text, pos)
        if not m or m.end() == m.start():
            if text[pos:].strip():
                raise InputSyntaxError(f"unexpected character {text[pos]!r}", pos)
            break
        if m.lastgroup == "rational":
            tokens.append(("num", m.group("rational"), m.start("rational")))
        elif m.lastgroup == "t":
            tokens.append(("t", "t", m.start("t")))
        else:
            tokens.append((m.group("op"), m.group("op"), m.start("op")))
        pos = m.end()
    return tokens


class _TokenStream:
    def __init__(self, tokens, length):
        self.tokens = tokens
        self.index = 0
        self.length = length

    def peek(self):
        return self.tokens[self.index] if self.index < len(self.tokens) else (None, None, self.length)

    def next(self):
        tok = self.peek()
        self.index += 1
        return tok

    def expect(self, kind, what):
        tok = self.next()
        if tok[0] != kind:
            raise InputSyntaxError(f"expected {what}", tok[2])
        return tok


def _parse_signed_rational(stream: _TokenStream) -> Fraction:
    sign = 1
    tok = stream.peek()
    while tok[0] in ("+", "-"):
        if tok[0] == "-":
            sign = -sign
        stream.next()
        tok = stream.peek()
    tok = stream.expect("num", "a rational number")
    return sign * Fraction(tok[1])


def _parse_term(stream: _TokenStream) -> tuple[Fraction, Fraction]:
    """One grammar term -> (exponent, coefficient)."""
    tok = stream.peek()
    coefficient = Fraction(1)
    saw_coefficient = False
    if tok[0] == "num":
        coefficient = Fraction(tok[1])
        saw_coefficient = True
        stream.next()
        if stream.peek()[0] == "*":
            stream.next()
    tok = stream.peek()
    if tok[0] == "t":
        stream.next()
        if stream.peek()[0] == "^":
            stream.next()
            stream.expect("(", "'(' after '^'")
            exponent = _parse_signed_rational(stream)
            stream.expect(")", "')' closing the exponent")
        else:
            exponent = Fraction(1)
        return exponent, coefficient
    if saw_coefficient:
        return Fraction(0), coefficient
    raise InputSyntaxError("expected a term (rational or t^(...))", tok[2])


def parse_series(text: str) -> PuiseuxSeries:
    """Parse a series literal into an exact PuiseuxSeries."""
    tokens = _tokenize(text)
    stream = _TokenStream(tokens, len(text))
    if stream.peek()[0] is None:
        raise InputSyntaxError("empty series literal", 0)
    terms: list[tuple[Fraction, Fraction]] = []
    sign = 1
    tok = stream.peek()
    if tok[0] in ("+", "-"):
        sign = -1 if tok[0] == "-" else 1
        stream.next()
    while True:
        exponent, coefficient = _parse_term(stream)
        terms.append((exponent, sign * coefficient))
        tok = stream.peek()
        if tok[0] is None:
            break
        if tok[0] not in ("+", "-"):
            raise InputSyntaxError("expected '+' or '-' between terms", tok[2])
        sign = -1 if tok[0] == "-" else 1
        stream.next()
    return PuiseuxSeries(terms)


def render_series(series: PuiseuxSeries) -> str:
    """Render in the literal grammar; truncated series get an O(...) marker
    (reports only; the parser accepts exact literals)."""
    parts: list[str] = []
    for exponent, coefficient in series.terms:
        if exponent == 0:
            body = render_fraction(coefficient)
            sign = ""
            if coefficient < 0:
                sign, body = "-", render_fraction(-coefficient)
        else:
            mag = -coefficient if coefficient < 0 else coefficient
            sign = "-" if coefficient < 0 else ""
            factor = "" if mag == 1 else f"{render_fraction(mag)}*"
            body = f"{factor}t^({render_fraction(exponent)})"
        if not parts:
            parts.append(f"{sign}{body}" if sign else body)
        else:
            parts.append(f"{'-' if sign else '+'} {body}")
    rendered = " ".join(parts) if parts else "0"
    if series.precision is not INF:
        rendered += f" + O(t^({render_fraction(series.precision)}))"
    return rendered
