"""Polynomials over the exact Puiseux field: evaluation, Taylor shifts,
derivatives, composition.  Coefficient index i is the coefficient of z^i."""

from __future__ import annotations

from fractions import Fraction
from typing import Iterable, Sequence

from .errors import PreconditionError
from .series import PuiseuxSeries


class Polynomial:
    """Immutable polynomial with PuiseuxSeries coefficients, degree >= 1.

    The leading coefficient must be determinately nonzero (it has stored
    terms); trailing coefficients that are exactly zero are trimmed."""

    __slots__ = ("coeffs",)

    def __init__(self, coeffs: Iterable[PuiseuxSeries]):
        coeffs = list(coeffs)
        while len(coeffs) > 1 and coeffs[-1].is_zero:
            coeffs.pop()
        if len(coeffs) < 2:
            raise PreconditionError("polynomial degree must be >= 1")
        if not coeffs[-1].terms:
            raise PreconditionError("leading coefficient is not determinately nonzero")
        object.__setattr__(self, "coeffs", tuple(coeffs))

    def __setattr__(self, name, value):
        raise AttributeError("Polynomial is immutable")

    @classmethod
    def from_rationals(cls, values: Sequence) -> "Polynomial":
        return cls([PuiseuxSeries.rational(Fraction(v)) for v in values])

    @property
    def degree(self) -> int:
        return len(self.coeffs) - 1

    def __eq__(self, other: object) -> bool:
        if not isinstance(other, Polynomial):
            return NotImplemented
        return self.coeffs == other.coeffs

    def __hash__(self) -> int:
        return hash(self.coeffs)

    def __call__(self, point: PuiseuxSeries) -> PuiseuxSeries:
        result = PuiseuxSeries.zero()
        for c in reversed(self.coeffs):
            result = result * point + c
        return result

    def derivative(self) -> "Polynomial":
        return Polynomial(
            [c.scale(i) for i, c in enumerate(self.coeffs) if i >= 1]
        )

    def taylor_shift(self, center: PuiseuxSeries) -> "Polynomial":
        """Coefficients of P(z + center); exact for exact inputs."""
        work = list(self.coeffs)
        d = len(work) - 1
        if center.is_zero:
            return self
        for i in range(d):
            for j in range(d - 1, i - 1, -1):
                work[j] = work[j] + center * work[j + 1]
        return Polynomial(work)

    def minus_constant(self, value: PuiseuxSeries) -> "Polynomial":
        """P(z) - value."""
        coeffs = list(self.coeffs)
        coeffs[0] = coeffs[0] - value
        return Polynomial(coeffs)

    def minus_identity(self) -> "Polynomial":
        """P(z) - z."""
        coeffs = list(self.coeffs)
        coeffs[1] = coeffs[1] - PuiseuxSeries.one()
        return Polynomial(coeffs)

    def __add__(self, other: "Polynomial") -> "Polynomial":
        if not isinstance(other, Polynomial):
            return NotImplemented
        a, b = self.coeffs, other.coeffs
        n = max(len(a), len(b))
        out = []
        for i in range(n):
            ca = a[i] if i < len(a) else PuiseuxSeries.zero()
            cb = b[i] if i < len(b) else PuiseuxSeries.zero()
            out.append(ca + cb)
        return Polynomial(out)

    def __mul__(self, other: "Polynomial") -> "Polynomial":
        if not isinstance(other, Polynomial):
            return NotImplemented
        out = [PuiseuxSeries.zero()] * (len(self.coeffs) + len(other.coeffs) - 1)
        for i, ca in enumerate(self.coeffs):
            if ca.is_zero:
                continue
            for j, cb in enumerate(other.coeffs):
                if cb.is_zero:
                    continue
                out[i + j] = out[i + j] + ca * cb
        return Polynomial(out)

    def compose(self, inner: "Polynomial") -> "Polynomial":
        """P(inner(z)) by Horner over polynomial arithmetic."""
        acc: Polynomial | None = None
        for c in reversed(self.coeffs[:-1]):
            if acc is None:
                lead = self.coeffs[-1]
                acc = Polynomial([coef * lead for coef in inner.coeffs])
            else:
                acc = acc * inner
            acc = acc.plus_constant(c)
        assert acc is not None
        return acc

    def plus_constant(self, value: PuiseuxSeries) -> "Polynomial":
        coeffs = list(self.coeffs)
        coeffs[0] = coeffs[0] + value
        return Polynomial(coeffs)

    def iterate(self, n: int) -> "Polynomial":
        """n-fold composition P^n (degree grows as degree**n)."""
        if n < 1:
            raise PreconditionError("iterate count must be >= 1")
        result = self
        for _ in range(n - 1):
            result = self.compose(result)
        return result

    def __repr__(self) -> str:
        from .series import render_series

        parts = [
            f"({render_series(c)})*z^{i}" for i, c in enumerate(self.coeffs) if c.terms
        ]
        return "Polynomial(" + " + ".join(parts) + ")"
