"""Exact rational scalars and the +infinity marker.

Rationals are stdlib ``fractions.Fraction`` (already reduced, denominator
positive).  ``INF`` is a single shared object comparing above every Fraction;
it stands for the order of the zero series and for infinite distances.  No
value in the engine is ever a float."""

from __future__ import annotations

from fractions import Fraction
from math import lcm


class _PlusInfinity:
    """Totally ordered above all rationals; absorbing under addition."""

    __slots__ = ()
    _instance: "_PlusInfinity | None" = None

    def __new__(cls) -> "_PlusInfinity":
        if cls._instance is None:
            cls._instance = super().__new__(cls)
        return cls._instance

    def __lt__(self, other: object) -> bool:
        return False

    def __le__(self, other: object) -> bool:
        return other is self

    def __gt__(self, other: object) -> bool:
        return other is not self

    def __ge__(self, other: object) -> bool:
        return True

    def __eq__(self, other: object) -> bool:
        return other is self

    def __hash__(self) -> int:
        return hash("berkdyn.+inf")

    def __add__(self, other: object) -> "_PlusInfinity":
        return self

    __radd__ = __add__

    def __mul__(self, other: object) -> "_PlusInfinity":
        if isinstance(other, (int, Fraction)) and other <= 0:
            raise ArithmeticError("INF may only be scaled by positive rationals")
        return self

    __rmul__ = __mul__

    def __neg__(self):  # pragma: no cover - guarded usage
        raise ArithmeticError("-INF is not representable")

    def __repr__(self) -> str:
        return "+inf"


INF = _PlusInfinity()

#: Order values: a finite Fraction or INF (the zero series).
Extended = Fraction | _PlusInfinity


def is_finite(value: Extended) -> bool:
    return value is not INF


def as_fraction(value, name: str = "value") -> Fraction:
    """Coerce ints/Fractions (and exact strings like '3/2') to Fraction."""
    if isinstance(value, Fraction):
        return value
    if isinstance(value, int):
        return Fraction(value)
    if isinstance(value, str):
        return parse_fraction(value)
    raise TypeError(f"{name} must be an exact rational, got {type(value).__name__}")


def parse_fraction(text: str) -> Fraction:
    """Parse 'p' or 'p/q' with optional sign; no decimals accepted."""
    text = text.strip()
    if "." in text or "e" in text.lower():
        raise ValueError(f"not an exact rational: {text!r}")
    return Fraction(text)


def render_fraction(value: Extended) -> str:
    """Render as 'p/q' ('p' when the denominator is 1), or 'inf'."""
    if value is INF:
        return "inf"
    if value.denominator == 1:
        return str(value.numerator)
    return f"{value.numerator}/{value.denominator}"


def denominator_lcm(values) -> int:
    """lcm of the denominators of finitely many Fractions (1 when empty)."""
    out = 1
    for v in values:
        out = lcm(out, v.denominator)
    return out
