"""Closed-ball calculus: images, degrees, preimages, exact radius maps.

A ball is (center, log-radius rho) with radius e^(-rho); every metric
quantity is an exact rational in this log scale.  The image of a ball under
P with shifted coefficients c_i (at the ball's center) is the ball of
log-radius min over 1<=i<=d of order(c_i) + i*rho around P(center); the
degree is the largest index attaining the minimum.  The paper-level identity
"degree = number of preimages of a generic point" is enforced as a runtime
check on preimage computations, not used as the definition.
"""

from __future__ import annotations

from dataclasses import dataclass
from fractions import Fraction

from .errors import (
    IndeterminateOrderError,
    InvariantViolationError,
    NeedsExtensionError,
    PrecisionExhaustedError,
)
from .newton import UnresolvedBranch, lift_roots
from .poly import Polynomial
from .rational import INF, as_fraction, render_fraction
from .series import PuiseuxSeries, default_precision


class BallSpec:
    """Closed ball B(center, e^(-log_radius)); equality and hashing use the
    canonical center (terms below the log-radius), so any member of the ball
    is an equally valid center."""

    __slots__ = ("center", "log_radius", "_canon")

    def __init__(self, center: PuiseuxSeries, log_radius):
        log_radius = as_fraction(log_radius, "log_radius")
        object.__setattr__(self, "center", center)
        object.__setattr__(self, "log_radius", log_radius)
        object.__setattr__(self, "_canon", None)

    def __setattr__(self, name, value):
        raise AttributeError("BallSpec is immutable")

    def canonical_center(self) -> PuiseuxSeries:
        canon = self._canon
        if canon is None:
            if self.center.precision is not INF and self.center.precision < self.log_radius:
                raise IndeterminateOrderError(
                    "ball center known to precision "
                    f"{render_fraction(self.center.precision)} < log-radius "
                    f"{render_fraction(self.log_radius)}"
                )
            canon = self.center.truncate_below(self.log_radius)
            object.__setattr__(self, "_canon", canon)
        return canon

    @property
    def log_diameter(self) -> Fraction:
        """log of the diameter = -log_radius."""
        return -self.log_radius

    def simplest_member(self) -> PuiseuxSeries:
        """The exact classical point obtained by dropping every term at or
        beyond the log-radius: a member of the ball with the fewest terms,
        valid as a replacement center."""
        canon = self.canonical_center()
        return PuiseuxSeries(canon.terms)

    def contains_point(self, value: PuiseuxSeries) -> bool:
        return (value - self.center).order_at_least(self.log_radius)

    def contains_ball(self, other: "BallSpec") -> bool:
        if other.log_radius < self.log_radius:
            return False
        return (other.center - self.center).order_at_least(self.log_radius)

    def __eq__(self, other: object) -> bool:
        if not isinstance(other, BallSpec):
            return NotImplemented
        if self.log_radius != other.log_radius:
            return False
        return self.canonical_center().terms == other.canonical_center().terms

    def __hash__(self) -> int:
        return hash((self.log_radius, self.canonical_center().terms))

    def sort_key(self):
        return (self.log_radius, self.canonical_center().sort_key())

    def __repr__(self) -> str:
        from .series import render_series

        return f"BallSpec({render_series(self.canonical_center())}; {render_fraction(self.log_radius)})"


# -- exact piecewise-linear radius maps ---------------------------------------


@dataclass(frozen=True)
class RadiusMap:
    """rho -> min over lines of (intercept + slope*rho), slopes positive ints.

    This is exactly how a polynomial transforms ball log-radii around a fixed
    center; the form is closed under composition."""

    lines: tuple[tuple[int, Fraction], ...]  # (slope, intercept)

    def __call__(self, rho: Fraction) -> Fraction:
        return min(b + s * rho for s, b in self.lines)

    def degree_at(self, rho: Fraction) -> int:
        value = self(rho)
        return max(s for s, b in self.lines if b + s * rho == value)

    def solve(self, target: Fraction) -> Fraction:
        """Smallest rho with map(rho) = target (the map is increasing)."""
        return max((target - b) / s for s, b in self.lines)

    def compose_after(self, inner: "RadiusMap") -> "RadiusMap":
        """self o inner."""
        lines = {}
        for s2, b2 in self.lines:
            for s1, b1 in inner.lines:
                key = s2 * s1
                val = b2 + s2 * b1
                if key not in lines or val < lines[key]:
                    lines[key] = val
        return RadiusMap(tuple(sorted(lines.items())))

    def fixed_points(self) -> list[Fraction]:
        """All isolated fixed points carried by slope >= 2 lines (slope-1
        fixed segments are neutral and reported by the caller if needed)."""
        out = []
        for s, b in self.lines:
            if s == 1:
                continue
            rho = b / (1 - s)
            if self(rho) == rho and rho not in out:
                out.append(rho)
        return sorted(out)


def radius_map(shifted: Polynomial) -> RadiusMap:
    """Radius map of P around a center, from the shifted coefficients.

    Indeterminate coefficients are tolerated only when provably irrelevant
    (their bound line never achieves the minimum is checked per use-site via
    ball_image; here any empty non-exact coefficient raises)."""
    lines = []
    for i, c in enumerate(shifted.coeffs):
        if i == 0:
            continue
        if c.terms:
            lines.append((i, c.terms[0][0]))
        elif not c.is_exact:
            raise IndeterminateOrderError(
                f"shifted coefficient of z^{i} has indeterminate order"
            )
    if not lines:
        raise IndeterminateOrderError("no determinate nonconstant coefficient")
    return RadiusMap(tuple(lines))


# -- ball image ----------------------------------------------------------------


def ball_image(poly: Polynomial, ball: BallSpec) -> tuple[BallSpec, int]:
    """Image ball and local degree of P at the ball.

    Exact: image log-radius = min(order(c_i) + i*rho), degree = largest index
    attaining the minimum (ties resolve upward: that is the count of roots of
    P(z+a)-w of order >= rho for generic w in the image)."""
    shifted = poly.taylor_shift(ball.center)
    rho = ball.log_radius
    best: Fraction | None = None
    degree = 0
    pending: list[tuple[int, Fraction]] = []
    for i, c in enumerate(shifted.coeffs):
        if i == 0:
            continue
        if c.terms:
            value = c.terms[0][0] + i * rho
            if best is None or value < best or (value == best and i > degree):
                if best is None or value < best:
                    best = value
                    degree = i
                else:
                    degree = max(degree, i)
        elif not c.is_exact:
            pending.append((i, c.precision + i * rho))
    if best is None:
        raise IndeterminateOrderError("all nonconstant shifted coefficients indeterminate")
    for i, bound in pending:
        if bound <= best:
            raise IndeterminateOrderError(
                f"shifted coefficient of z^{i} (zero to precision) could reach "
                "the radius minimum"
            )
    return BallSpec(shifted.coeffs[0], best), degree


def local_degree_at_classical(poly: Polynomial, point: PuiseuxSeries) -> int:
    """Multiplicity of (z - point) in P(z) - P(point)."""
    shifted = poly.taylor_shift(point)
    for i, c in enumerate(shifted.coeffs):
        if i == 0:
            continue
        if c.terms:
            return i
        if not c.is_exact:
            raise IndeterminateOrderError(
                f"cannot certify vanishing of shifted coefficient z^{i}"
            )
    raise InvariantViolationError("polynomial with no nonzero coefficient")


# -- ball preimages -------------------------------------------------------------


@dataclass(frozen=True)
class UnresolvedPreimage:
    """A preimage root cluster outside the rational Puiseux field.

    The degree (number of roots, with multiplicity) is exact even though the
    ball's center is not representable; enough for degree sums and masses."""

    branch: UnresolvedBranch
    degree: int


@dataclass(frozen=True)
class PreimageSet:
    balls: tuple[tuple[BallSpec, int], ...]
    unresolved: tuple[UnresolvedPreimage, ...]

    def total_degree(self) -> int:
        return sum(d for _, d in self.balls) + sum(u.degree for u in self.unresolved)


def ball_preimages(poly: Polynomial, target: BallSpec) -> list[tuple[BallSpec, int]]:
    """The pairwise-disjoint preimage balls of ``target`` with their degrees.

    Degrees sum to deg(P); raises NeedsExtensionError when a preimage center
    is not rationally representable (use ball_preimages_partial to keep going
    with exact degree bookkeeping)."""
    result = ball_preimages_partial(poly, target)
    if result.unresolved:
        u = result.unresolved[0]
        raise NeedsExtensionError(
            "preimage ball center leaves the rational Puiseux field",
            residual=u.branch.residual,
        )
    return list(result.balls)


def ball_preimages_partial(poly: Polynomial, target: BallSpec) -> PreimageSet:
    # any exact member of the target is an equally valid equation right-hand
    # side: every preimage ball maps onto the whole target, and per-ball root
    # counts (with multiplicity) equal the ball degree for every image point
    equation = poly.minus_constant(target.simplest_member())
    rho_t = target.log_radius
    lift_precision = _initial_lift_precision(rho_t)
    for _ in range(4):
        lifted = lift_roots(equation, lift_precision, partial=True)
        try:
            balls = _cluster_preimage_roots(poly, target, lifted.roots)
        except PrecisionExhaustedError:
            lift_precision = lift_precision * 2 + 8
            continue
        break
    else:
        raise PrecisionExhaustedError("preimage radius exceeded lifting precision")
    unresolved = tuple(
        UnresolvedPreimage(branch, branch.multiplicity) for branch in lifted.unresolved
    )
    result = PreimageSet(balls, unresolved)
    if result.total_degree() != poly.degree:
        raise InvariantViolationError(
            f"preimage degrees sum to {result.total_degree()} != deg = {poly.degree}"
        )
    return result


def _initial_lift_precision(rho_t: Fraction) -> Fraction:
    # enough to separate clusters at the solved radius in typical cases; the
    # caller retries with doubled precision when the solve outruns it
    return max(rho_t + 4, Fraction(4))


def _cluster_preimage_roots(
    poly: Polynomial, target: BallSpec, roots
) -> tuple[tuple[BallSpec, int], ...]:
    clusters: dict[BallSpec, int] = {}
    rho_t = target.log_radius
    for root, multiplicity in roots:
        shifted = poly.taylor_shift(root)
        sigma = radius_map(shifted).solve(rho_t)
        if root.precision is not INF and root.precision < sigma:
            raise PrecisionExhaustedError("root precision below solved preimage radius")
        ball = BallSpec(root, sigma)
        clusters[ball] = clusters.get(ball, 0) + multiplicity
    for ball in clusters:
        image, _ = ball_image(poly, ball)
        if image.log_radius != rho_t or not target.contains_ball(image):
            raise InvariantViolationError("preimage ball does not map onto the target")
    items = sorted(clusters.items(), key=lambda kv: kv[0].sort_key())
    return tuple(items)


def count_critical_points_in_ball(derivative: Polynomial, ball: BallSpec) -> int:
    """Number of zeros of P' (with multiplicity) inside the ball, straight
    from the Newton polygon of the shifted derivative — no root lifting."""
    from .newton import count_roots_of_order_at_least

    shifted = derivative.taylor_shift(ball.center)
    return count_roots_of_order_at_least(shifted, ball.log_radius)
