"""Newton polygons, root valuations and Newton-Puiseux root lifting.

Conventions: for P = sum a_i z^i the polygon is the lower convex hull of the
points (i, order(a_i)).  An edge of geometric slope s carries (horizontal
length) roots of order -s; polygon ``slopes`` are reported as (root order,
multiplicity) pairs, ascending in root order, so a root of valuation v
corresponds to slope v.

Residual polynomials are solved over Q only; a residual without a full set
of rational roots surfaces as a structured needs-extension outcome (strict
calls raise, partial calls return unresolved branch records).
"""

from __future__ import annotations

from dataclasses import dataclass
from fractions import Fraction
from typing import Sequence

from .errors import (
    IndeterminateOrderError,
    NeedsExtensionError,
    PrecisionExhaustedError,
)
from .poly import Polynomial
from .rational import INF, Extended, as_fraction, render_fraction
from .series import PuiseuxSeries, default_precision

LIFT_STEP_CAP = 64


@dataclass(frozen=True)
class NewtonPolygon:
    """Lower convex hull data for a polynomial."""

    vertices: tuple[tuple[int, Fraction], ...]
    #: (root order, multiplicity), ascending root order; nonzero roots only.
    slopes: tuple[tuple[Fraction, int], ...]
    #: multiplicity of the exact root 0 (index of the first vertex).
    zero_root_multiplicity: int


@dataclass(frozen=True)
class RootValuations:
    valuations: tuple[tuple[Fraction, int], ...]
    zero_multiplicity: int


@dataclass(frozen=True)
class UnresolvedBranch:
    """A root cluster that leaves the rational-coefficient field.

    ``prefix`` is the rational part already lifted, ``valuation`` the order
    of the next (irrational) correction, ``multiplicity`` the number of
    roots in the cluster, ``residual`` the integer coefficients (low to
    high) of the residual polynomial that failed to split over Q."""

    prefix: PuiseuxSeries
    valuation: Fraction
    multiplicity: int
    residual: tuple[int, ...]

    def root_order(self) -> Fraction:
        bound = self.prefix.order_bound()
        return self.valuation if bound is INF else min(bound, self.valuation)


def newton_polygon(poly: Polynomial) -> NewtonPolygon:
    """Exact lower convex hull of (i, order(a_i)).

    Coefficients that are exactly zero are skipped; a coefficient that is
    zero only to finite precision must be certifiably above the hull, else
    the polygon is indeterminate."""
    points: list[tuple[int, Fraction]] = []
    pending: list[tuple[int, Fraction]] = []  # (index, order lower bound)
    for i, c in enumerate(poly.coeffs):
        if c.terms:
            points.append((i, c.terms[0][0]))
        elif not c.is_exact:
            pending.append((i, c.precision))
    if not points:
        raise IndeterminateOrderError("no coefficient has a determinate order")
    # monotone-chain lower hull over indices
    hull: list[tuple[int, Fraction]] = []
    for pt in points:
        while len(hull) >= 2:
            (x1, y1), (x2, y2) = hull[-2], hull[-1]
            # keep turn strictly convex: slope(x1->x2) < slope(x2->pt)
            if (y2 - y1) * (pt[0] - x2) >= (pt[1] - y2) * (x2 - x1):
                hull.pop()
            else:
                break
        hull.append(pt)
    # indeterminate coefficients must sit strictly above the hull; below the
    # first vertex they would change the zero-root count
    for i, bound in pending:
        if i < hull[0][0]:
            raise IndeterminateOrderError(
                f"coefficient of z^{i} is indeterminate (affects zero-root count)"
            )
        if bound <= _hull_value(hull, i):
            raise IndeterminateOrderError(
                f"coefficient of z^{i} is zero only to precision "
                f"{render_fraction(bound)}, not certifiably above the Newton polygon"
            )
    slopes: list[tuple[Fraction, int]] = []
    for (x1, y1), (x2, y2) in zip(hull, hull[1:]):
        geometric = Fraction(y2 - y1, x2 - x1)
        slopes.append((-geometric, x2 - x1))
    slopes.sort(key=lambda sv: sv[0])
    return NewtonPolygon(tuple(hull), tuple(slopes), hull[0][0])


def _hull_value(hull: list[tuple[int, Fraction]], i: int) -> Fraction:
    for (x1, y1), (x2, y2) in zip(hull, hull[1:]):
        if x1 <= i <= x2:
            return y1 + Fraction(y2 - y1, x2 - x1) * (i - x1)
    if i >= hull[-1][0]:
        return hull[-1][1]
    return hull[0][1]


def root_valuations(poly: Polynomial) -> RootValuations:
    polygon = newton_polygon(poly)
    return RootValuations(polygon.slopes, polygon.zero_root_multiplicity)


def count_roots_of_order_at_least(poly: Polynomial, bound) -> int:
    """Number of roots (with multiplicity) of order >= bound — i.e. roots in
    the closed ball of log-radius ``bound`` around 0."""
    bound = as_fraction(bound, "bound")
    rv = root_valuations(poly)
    return rv.zero_multiplicity + sum(m for v, m in rv.valuations if v >= bound)


# -- residual polynomials over Q --------------------------------------------


def _edge_residual(poly: Polynomial, v: Fraction) -> list[Fraction]:
    """Coefficients of the residual polynomial of the edge with root order v.

    Index j holds the leading coefficient of a_(i1+j) when the point
    (i1+j, ord) lies on the edge, 0 otherwise."""
    # edge: points with ord(a_i) + i*v minimal
    best: Fraction | None = None
    entries: dict[int, Fraction] = {}
    for i, c in enumerate(poly.coeffs):
        if not c.terms:
            continue
        e, lead = c.terms[0]
        value = e + i * v
        if best is None or value < best:
            best = value
            entries = {i: lead}
        elif value == best:
            entries[i] = lead
    assert best is not None
    i_low = min(entries)
    i_high = max(entries)
    out = [Fraction(0)] * (i_high - i_low + 1)
    for i, lead in entries.items():
        out[i - i_low] = lead
    return out


_DIVISOR_SEARCH_LIMIT = 10**12


def rational_roots(coeffs: Sequence[Fraction]) -> tuple[list[tuple[Fraction, int]], list[int]]:
    """All rational roots (with multiplicity) of a Q-polynomial.

    Returns (roots, deflated integer coefficients of the rational-root-free
    part).  Degrees 1 and 2 are solved directly (no factoring), so residuals
    with huge exact coefficients — the normal case deep into a lift — stay
    cheap; the divisor search only ever sees small early-stage residuals."""
    work = [Fraction(c) for c in coeffs]
    while work and work[-1] == 0:
        work.pop()
    roots: list[tuple[Fraction, int]] = []
    while len(work) > 1:
        if work[0] == 0:
            k = 0
            while work[k] == 0:
                k += 1
            roots.append((Fraction(0), k))
            work = work[k:]
            continue
        if len(work) == 2:
            root = -work[0] / work[1]
            _absorb(roots, root, 1)
            work = [work[1]]
            continue
        if len(work) == 3:
            a, b, c = work[2], work[1], work[0]
            disc = b * b - 4 * a * c
            if disc < 0:
                break
            sq = _fraction_sqrt(disc)
            if sq is None:
                break
            for root in ((-b + sq) / (2 * a), (-b - sq) / (2 * a)):
                _absorb(roots, root, 1)
            work = [work[2]]
            continue
        found = _divisor_search(work)
        if found is None:
            break
        _absorb(roots, found, 1)
        work = _synthetic_divide(work, found)
    return roots, _clear_denominators(work)


def _absorb(roots: list[tuple[Fraction, int]], value: Fraction, mult: int) -> None:
    for i, (v, m) in enumerate(roots):
        if v == value:
            roots[i] = (v, m + mult)
            return
    roots.append((value, mult))


def _fraction_sqrt(value: Fraction) -> Fraction | None:
    from math import isqrt

    if value < 0:
        return None
    n, d = value.numerator, value.denominator
    rn, rd = isqrt(n), isqrt(d)
    if rn * rn != n or rd * rd != d:
        return None
    return Fraction(rn, rd)


def _divisor_search(work: Sequence[Fraction]) -> Fraction | None:
    ints = _clear_denominators(work)
    lead, const = abs(ints[-1]), abs(ints[0])
    if lead > _DIVISOR_SEARCH_LIMIT or const > _DIVISOR_SEARCH_LIMIT:
        raise PrecisionExhaustedError(
            "rational-root search on a high-degree residual with oversized "
            "coefficients"
        )
    for p in _divisors(const):
        for q in _divisors(lead):
            for cand in (Fraction(p, q), Fraction(-p, q)):
                if _poly_eval(work, cand) == 0:
                    return cand
    return None


def _clear_denominators(coeffs: Sequence[Fraction]) -> list[int]:
    from math import gcd, lcm

    denom = 1
    for c in coeffs:
        denom = lcm(denom, Fraction(c).denominator)
    ints = [int(c * denom) for c in coeffs]
    g = 0
    for v in ints:
        g = gcd(g, v)
    if g > 1:
        ints = [v // g for v in ints]
    return ints


def _divisors(n: int) -> list[int]:
    out = []
    d = 1
    while d * d <= n:
        if n % d == 0:
            out.append(d)
            if d != n // d:
                out.append(n // d)
        d += 1
    return sorted(out)


def _poly_eval(coeffs: Sequence[Fraction], x: Fraction) -> Fraction:
    acc = Fraction(0)
    for c in reversed(coeffs):
        acc = acc * x + c
    return acc


def _synthetic_divide(coeffs: Sequence[Fraction], root: Fraction) -> list[Fraction]:
    out = [Fraction(0)] * (len(coeffs) - 1)
    carry = Fraction(0)
    for i in range(len(coeffs) - 1, 0, -1):
        carry = coeffs[i] + carry * root
        out[i - 1] = carry
    return out


# -- Newton-Puiseux lifting ---------------------------------------------------


@dataclass(frozen=True)
class LiftedRoots:
    """Roots with multiplicity; ``unresolved`` lists the branch clusters that
    could not be split over Q (empty in strict mode)."""

    roots: tuple[tuple[PuiseuxSeries, int], ...]
    unresolved: tuple[UnresolvedBranch, ...]

    def total_multiplicity(self) -> int:
        return sum(m for _, m in self.roots) + sum(b.multiplicity for b in self.unresolved)


def puiseux_roots(poly: Polynomial, target_precision=None) -> list[tuple[PuiseuxSeries, int]]:
    """All roots of ``poly`` over Q-Puiseux to ``target_precision``.

    Roots are returned with multiplicity (a returned multiplicity > 1 means
    that many roots agree to the target precision — exact multiple roots are
    reported exactly).  Raises NeedsExtensionError when a residual polynomial
    fails to split over Q."""
    lifted = lift_roots(poly, target_precision, partial=False)
    return list(lifted.roots)


def lift_roots(poly: Polynomial, target_precision=None, partial: bool = True) -> LiftedRoots:
    if target_precision is None:
        target_precision = default_precision()
    target_precision = as_fraction(target_precision, "target_precision")
    roots: list[tuple[PuiseuxSeries, int]] = []
    unresolved: list[UnresolvedBranch] = []

    def descend(
        shifted: Polynomial,
        prefix: PuiseuxSeries,
        prev_v: Extended | None,
        expected: int,
        steps: int,
    ) -> None:
        if steps > LIFT_STEP_CAP:
            raise PrecisionExhaustedError(
                f"root lifting exceeded {LIFT_STEP_CAP} steps "
                f"(prefix order {render_fraction(prefix.order_bound())})"
            )
        polygon = newton_polygon(shifted)
        remaining = expected
        exact_mult = polygon.zero_root_multiplicity
        if exact_mult:
            roots.append((prefix, exact_mult))
            remaining -= exact_mult
        for v, mult in polygon.slopes:
            if prev_v is not None and v <= prev_v:
                continue  # belongs to a sibling branch already handled
            if v >= target_precision:
                roots.append((prefix.restrict_precision(target_precision), mult))
                remaining -= mult
                continue
            residual = _edge_residual(shifted, v)
            rational, leftover_ints = rational_roots(residual)
            used = 0
            for c, m in rational:
                if c == 0:
                    continue
                step = PuiseuxSeries.monomial(c, v)
                descend(shifted.taylor_shift(step), prefix + step, v, m, steps + 1)
                used += m
            leftover = mult - used
            if leftover > 0:
                branch = UnresolvedBranch(
                    prefix.truncate_below(v), v, leftover, tuple(leftover_ints)
                )
                if not partial:
                    raise NeedsExtensionError(
                        "residual polynomial does not split over Q at order "
                        f"{render_fraction(v)}",
                        residual=branch.residual,
                    )
                unresolved.append(branch)
            remaining -= mult
        if remaining != 0:  # pragma: no cover - bookkeeping guard
            raise PrecisionExhaustedError(
                f"root bookkeeping mismatch: {remaining} roots unaccounted for"
            )

    descend(poly, PuiseuxSeries.zero(), None, poly.degree, 0)
    roots.sort(key=lambda rm: rm[0].sort_key())
    return LiftedRoots(tuple(roots), tuple(unresolved))


def back_substitution_bound(poly: Polynomial, root: PuiseuxSeries) -> Extended:
    """Certified lower bound for order(P(r_true)) - 0 given r correct to its
    precision: min over i >= 1 of order(c_i) + i * precision(r), where c is
    the shift of P at r.  Tests check order(P(r)) >= this bound."""
    shifted = poly.taylor_shift(root)
    prec = root.precision
    if prec is INF:
        return INF
    best: Extended = INF
    for i, c in enumerate(shifted.coeffs):
        if i == 0 or not c.terms:
            continue
        value = c.terms[0][0] + i * prec
        if value < best:
            best = value
    return best
