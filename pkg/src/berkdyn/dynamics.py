"""Dynamical core: validated tame systems, level sets, tracked chains,
orbit classification, equilibrium ball masses, repelling periodic points.

The base point of the analysis is computed as the join of one classical
fixed point with all classical critical points.  For a tame nonsimple
polynomial this join carries local degree equal to deg(P) (Riemann-Hurwitz:
it contains every critical point), which forces it to be the boundary point
of the smallest ball containing the bounded classical dynamics; everything
that justification promises is re-checked at runtime on every build.
"""

from __future__ import annotations

from dataclasses import dataclass, field
from fractions import Fraction
from functools import lru_cache
from typing import Sequence

from .balls import (
    BallSpec,
    PreimageSet,
    UnresolvedPreimage,
    ball_image,
    ball_preimages_partial,
    count_critical_points_in_ball,
    local_degree_at_classical,
    radius_map,
)
from .errors import (
    BudgetExhaustedError,
    ChainExitError,
    IndeterminateOrderError,
    InvariantViolationError,
    NeedsExtensionError,
    PreconditionError,
)
from .newton import UnresolvedBranch, lift_roots, puiseux_roots
from .poly import Polynomial
from .rational import INF, Extended, as_fraction
from .series import PuiseuxSeries
from .tree import BerkPoint, compare, direction_at, hyperbolic_distance, join, less_equal, strictly_below

DEFAULT_ESCAPE_BUDGET = 64
DEFAULT_NODE_BUDGET = 2048


# -- orbit verdicts -------------------------------------------------------------


@dataclass(frozen=True)
class OrbitVerdict:
    kind: str  # "escapes" | "preperiodic" | "bounded-undetermined"
    escape_step: int | None = None
    preperiod: int | None = None
    period: int | None = None
    budget: int | None = None
    note: str = ""

    @property
    def escapes(self) -> bool:
        return self.kind == "escapes"

    @property
    def bounded_certified(self) -> bool:
        return self.kind == "preperiodic"


# -- the analysis context --------------------------------------------------------


@dataclass(frozen=True)
class SimpleVerdict:
    """All critical orbits are trapped: the candidate base point satisfies
    P(x*) <= x*, so the polynomial is simple and the level machinery does
    not apply."""

    fixed_point: BerkPoint
    image: BerkPoint


@dataclass(frozen=True)
class Marker:
    critical_point: PuiseuxSeries
    escape_step: int
    point: BerkPoint  # where [w, infinity) meets the Julia hull


@dataclass(frozen=True)
class TameSystem:
    poly: Polynomial
    degree: int
    critical_points: tuple[tuple[PuiseuxSeries, int], ...]  # (point, multiplicity)
    fixed_point: PuiseuxSeries
    level0: BerkPoint
    base_ball: BallSpec
    image_level0: BerkPoint
    critical_verdicts: tuple[tuple[PuiseuxSeries, OrbitVerdict], ...]
    markers: tuple[Marker, ...]
    generators: tuple[BerkPoint, ...]  # v_{q-1} < ... < v_0 = P(level0)
    generator_count: int
    intervals: tuple[Fraction, ...]  # |I_j| for j = 0..q-1
    residual_characteristic: int
    flags: tuple[str, ...]

    @property
    def base_log_radius(self) -> Fraction:
        return self.base_ball.log_radius

    def bounded_critical_points(self) -> list[PuiseuxSeries]:
        return [w for w, verdict in self.critical_verdicts if not verdict.escapes]


# -- pointwise action --------------------------------------------------------------


def act_on_point(poly: Polynomial, point: BerkPoint) -> BerkPoint:
    """Type-preserving action: evaluation on classical points, ball image on
    disks."""
    if point.is_classical:
        return BerkPoint.from_value(poly(point.classical))
    image, _ = ball_image(poly, point.disk)
    return BerkPoint(disk=image)


def local_degree(poly: Polynomial, point: BerkPoint) -> int:
    if point.is_classical:
        return local_degree_at_classical(poly, point.classical)
    return ball_image(poly, point.disk)[1]


def iterated_local_degree(poly: Polynomial, point: BerkPoint, steps: int) -> int:
    """deg of P^steps at the point, as the product of stepwise degrees."""
    degree = 1
    current = point
    for _ in range(steps):
        degree *= local_degree(poly, current)
        current = act_on_point(poly, current)
    return degree


# -- tameness (explicit even though automatic in residual characteristic 0) -------


def tameness_certificate(
    poly: Polynomial,
    critical_points: Sequence[tuple[PuiseuxSeries, int]],
    residual_characteristic: int = 0,
) -> bool:
    """No local degree along the critical tree divisible by the residual
    characteristic; trivially true for characteristic 0, kept explicit so the
    contract is visible and future-proof."""
    if residual_characteristic == 0:
        return True
    for w, _ in critical_points:
        degree = local_degree_at_classical(poly, w)
        if degree % residual_characteristic == 0:
            return False
    return True


# -- orbit classification ------------------------------------------------------------


def orbit_classify(system: TameSystem, value: PuiseuxSeries, budget: int = DEFAULT_ESCAPE_BUDGET) -> OrbitVerdict:
    """Certified escape / exact preperiodicity / honest budget verdict."""
    ball = system.base_ball
    seen: dict[PuiseuxSeries, int] = {}
    current = value
    for step in range(budget + 1):
        try:
            inside = (current - ball.center).order_at_least(ball.log_radius)
        except IndeterminateOrderError:
            return OrbitVerdict(
                "bounded-undetermined", budget=budget,
                note=f"membership indeterminate at step {step}",
            )
        if not inside:
            return OrbitVerdict("escapes", escape_step=step)
        if current.is_exact:
            if current in seen:
                first = seen[current]
                return OrbitVerdict("preperiodic", preperiod=first, period=step - first)
            seen[current] = step
        current = system.poly(current)
    return OrbitVerdict("bounded-undetermined", budget=budget)


# -- tracked chains -------------------------------------------------------------------


@dataclass
class TrackedChain:
    """The decreasing chain of level balls above a tracked point.

    ``center`` is a classical member of every chain ball (the tracked point
    itself, or the disk's center); levels are extended on demand.  All radii
    come from exact piecewise-linear solves along the orbit of the center —
    no root lifting."""

    system: TameSystem
    center: PuiseuxSeries
    stop_log_radius: Extended  # INF for classical tracked points
    _orbit: list[PuiseuxSeries] = field(default_factory=list)
    _maps: list = field(default_factory=list)  # RadiusMap per orbit point
    _radii: dict[tuple[int, int], Fraction] = field(default_factory=dict)

    @classmethod
    def over(cls, system: TameSystem, point: BerkPoint) -> "TrackedChain":
        if point.is_classical:
            return cls(system, point.classical, INF)
        if not less_equal(point, system.level0):
            raise ChainExitError(0, "tracked point is not below the base point")
        return cls(system, point.disk.center, point.disk.log_radius)

    def _orbit_point(self, j: int) -> PuiseuxSeries:
        while len(self._orbit) <= j:
            if not self._orbit:
                self._orbit.append(self.center)
            else:
                self._orbit.append(self.system.poly(self._orbit[-1]))
        return self._orbit[j]

    def _map_at(self, j: int):
        while len(self._maps) <= j:
            shifted = self.system.poly.taylor_shift(self._orbit_point(len(self._maps)))
            self._maps.append(radius_map(shifted))
        return self._maps[j]

    def radius(self, n: int, orbit_index: int = 0) -> Fraction:
        """Log-radius of the level-n ball above P^orbit_index(tracked)."""
        key = (orbit_index, n)
        if key in self._radii:
            return self._radii[key]
        ball = self.system.base_ball
        if n == 0:
            center = self._orbit_point(orbit_index)
            try:
                inside = (center - ball.center).order_at_least(ball.log_radius)
            except IndeterminateOrderError as exc:
                raise ChainExitError(orbit_index, str(exc))
            if not inside:
                raise ChainExitError(
                    orbit_index, f"orbit point {orbit_index} leaves the base ball"
                )
            rho = ball.log_radius
        else:
            target = self.radius(n - 1, orbit_index + 1)
            rho = self._map_at(orbit_index).solve(target)
        if orbit_index == 0 and self.stop_log_radius is not INF and rho > self.stop_log_radius:
            raise ChainExitError(n, "chain descended past the tracked point")
        self._radii[key] = rho
        return rho

    def point(self, n: int, orbit_index: int = 0) -> BerkPoint:
        rho = self.radius(n, orbit_index)
        return BerkPoint.from_disk(self._orbit_point(orbit_index), rho)

    def step_degree(self, n: int, orbit_index: int = 0) -> int:
        """Local degree of P at the level-n ball."""
        rho = self.radius(n, orbit_index)
        return self._map_at(orbit_index).degree_at(rho)

    def increment(self, n: int) -> Fraction:
        """Hyperbolic distance from level n to level n+1 above the point."""
        return self.radius(n + 1) - self.radius(n)


def dynamical_sequence(system: TameSystem, point: BerkPoint, depth: int) -> list[BerkPoint]:
    """The unique chain of level points above ``point`` to the given depth."""
    chain = TrackedChain.over(system, point)
    return [chain.point(n) for n in range(depth + 1)]


# -- level sets --------------------------------------------------------------------


@dataclass(frozen=True)
class LevelPoint:
    point: BerkPoint
    degree: int  # local degree of P at the ball
    cumulative_degree: int  # local degree of P^n at the ball
    image_index: int  # index into the previous level (the ball it maps onto)
    parent_index: int  # index into the previous level (the ball it sits inside)

    def mass(self, level: int, total_degree: int) -> Fraction:
        return Fraction(self.cumulative_degree, total_degree**level)


@dataclass(frozen=True)
class LevelMarker:
    """Unresolved preimage cluster: exact degree bookkeeping without a
    representable center."""

    branch: UnresolvedBranch
    degree: int
    cumulative_degree: int
    image_index: int

    def mass(self, level: int, total_degree: int) -> Fraction:
        return Fraction(self.cumulative_degree, total_degree**level)


@dataclass
class LevelSet:
    levels: list[list[LevelPoint]]
    markers: list[list[LevelMarker]]
    complete: bool

    def level_mass(self, n: int, total_degree: int) -> Fraction:
        """Total mass at level n: resolved balls plus every unresolved
        cluster's subtree (a marker's preimage descendants carry exactly the
        marker's mass at every deeper level)."""
        points = sum(e.mass(n, total_degree) for e in self.levels[n])
        carried = sum(
            m.mass(level, total_degree)
            for level in range(1, n + 1)
            for m in self.markers[level]
        )
        return points + carried


def level_set(system: TameSystem, depth: int, node_budget: int = DEFAULT_NODE_BUDGET) -> LevelSet:
    """Iterated preimages of the base point, with exact degree bookkeeping.

    Unresolvable branches (centers outside the rational Puiseux field) are
    carried as markers whose exact degrees keep every level's preimage sum at
    deg(P)^n; ``complete`` is False once markers appear or the node budget
    trims expansion."""
    d = system.degree
    root = LevelPoint(system.level0, ball_image(system.poly, system.base_ball)[1], 1, -1, -1)
    levels: list[list[LevelPoint]] = [[root]]
    marker_rows: list[list[LevelMarker]] = [[]]
    complete = True
    nodes = 1
    for n in range(1, depth + 1):
        row: list[LevelPoint] = []
        marker_row: list[LevelMarker] = []
        for image_index, parent_entry in enumerate(levels[n - 1]):
            preimages = ball_preimages_partial(system.poly, parent_entry.point.disk)
            for ball, degree in preimages.balls:
                point = BerkPoint(disk=ball)
                parent_index = _nesting_parent(levels[n - 1], point, parent_entry)
                row.append(
                    LevelPoint(
                        point,
                        degree,
                        degree * parent_entry.cumulative_degree,
                        image_index,
                        parent_index,
                    )
                )
            for unresolved in preimages.unresolved:
                marker_row.append(
                    LevelMarker(
                        unresolved.branch,
                        unresolved.degree,
                        unresolved.degree * parent_entry.cumulative_degree,
                        image_index,
                    )
                )
            nodes += len(preimages.balls) + len(preimages.unresolved)
            if nodes > node_budget:
                raise BudgetExhaustedError(
                    f"level expansion exceeded {node_budget} nodes at level {n}",
                    budget=node_budget,
                )
        if marker_row:
            complete = False
        _check_level(row, marker_row, levels[n - 1], n, d)
        levels.append(row)
        marker_rows.append(marker_row)
    return LevelSet(levels, marker_rows, complete)


def _nesting_parent(previous: list[LevelPoint], point: BerkPoint, image_entry: LevelPoint) -> int:
    """Index of the level-(n-1) ball containing the new level-n ball.

    Monotonicity narrows the candidates: the container's image must contain
    the new ball's image, so it is one of the predecessors mapping onto the
    image entry's own nesting parent."""
    if image_entry.parent_index < 0:
        return 0
    candidates = [
        i
        for i, entry in enumerate(previous)
        if entry.image_index == image_entry.parent_index
    ]
    hits = [i for i in candidates if less_equal(point, previous[i].point)]
    if len(hits) != 1:
        raise InvariantViolationError(
            f"level point should sit below exactly one predecessor, found {len(hits)}"
        )
    return hits[0]


def _check_level(
    row: list[LevelPoint],
    marker_row: list[LevelMarker],
    previous: list[LevelPoint],
    n: int,
    d: int,
) -> None:
    # pairwise incomparable: same-radius balls only need distinctness (their
    # canonical keys are hashed), different radii need the containment check
    by_radius: dict[Fraction, list[LevelPoint]] = {}
    for entry in row:
        by_radius.setdefault(entry.point.disk.log_radius, []).append(entry)
    for radius, bucket in by_radius.items():
        if len({e.point for e in bucket}) != len(bucket):
            raise InvariantViolationError("duplicate level points at one radius")
    radii = sorted(by_radius)
    for i, small in enumerate(radii):
        for large in radii[i + 1 :]:
            for a in by_radius[small]:
                for b in by_radius[large]:
                    if compare(a.point, b.point) != "incomparable":
                        raise InvariantViolationError(
                            "level points are not pairwise incomparable"
                        )
    # preimage degree sums per image point
    degree_sums = [0] * len(previous)
    for e in row:
        degree_sums[e.image_index] += e.degree
    for m in marker_row:
        degree_sums[m.image_index] += m.degree
    for image_index, total in enumerate(degree_sums):
        if total != d:
            raise InvariantViolationError(
                f"preimage degrees of level-{n - 1} point {image_index} sum to {total} != {d}"
            )


def equilibrium_mass(system: TameSystem, level_set_data: LevelSet, level: int, index: int) -> Fraction:
    """Mass of a level ball: deg of P^level at the ball over deg(P)^level."""
    entry = level_set_data.levels[level][index]
    return entry.mass(level, system.degree)


# -- repelling periodic points ----------------------------------------------------


@dataclass(frozen=True)
class RepellingPeriodicPoint:
    value: PuiseuxSeries
    level: int
    ball: BerkPoint
    multiplier_order: Fraction  # order of (P^N)'(value); repelling iff < 0


def find_repelling_periodic(system: TameSystem, depth: int) -> RepellingPeriodicPoint:
    """Solve P^depth(z) = z inside a non-critical level-``depth`` ball.

    The chosen ball has cumulative degree 1, so P^depth maps it bijectively
    onto the base ball and the classical fixed point of the iterate inside it
    is repelling."""
    data = level_set(system, depth)
    candidates = [e for e in data.levels[depth] if e.cumulative_degree == 1]
    if not candidates:
        raise PreconditionError(f"no non-critical level-{depth} point exists")
    entry = min(
        candidates,
        key=lambda e: (len(e.point.disk.canonical_center().terms), e.point.sort_key()),
    )
    iterate = system.poly.iterate(depth)
    equation = iterate.minus_identity()
    roots = puiseux_roots(equation, max(entry.point.disk.log_radius + 8, Fraction(8)))
    inside = [
        (root, mult)
        for root, mult in roots
        if (root - entry.point.disk.center).order_at_least(entry.point.disk.log_radius)
    ]
    inside.sort(key=lambda rm: (len(rm[0].terms), rm[0].sort_key()))
    if not inside:
        raise InvariantViolationError("no fixed point of the iterate inside the chosen ball")
    root = inside[0][0]
    derivative = system.poly.derivative()
    multiplier_order = Fraction(0)
    current = root
    for _ in range(depth):
        multiplier_order += derivative(current).order()
        current = system.poly(current)
    if multiplier_order >= 0:
        raise InvariantViolationError("expected a repelling fixed point of the iterate")
    return RepellingPeriodicPoint(root, depth, entry.point, multiplier_order)


# -- system construction --------------------------------------------------------------


def critical_points_of(poly: Polynomial) -> list[tuple[PuiseuxSeries, int]]:
    """Classical critical points with multiplicities (roots of P')."""
    derivative = poly.derivative()
    if derivative.degree < 1:
        lifted = lift_roots(Polynomial([derivative.coeffs[0], PuiseuxSeries.one()]), partial=True)
        # degree-0 derivative: no critical points (linear P), unreachable for d >= 2
        return []
    roots = lift_roots(derivative, partial=True)
    if roots.unresolved:
        raise NeedsExtensionError(
            "critical points are not rational over the base field",
            residual=roots.unresolved[0].residual,
        )
    return list(roots.roots)


def rational_fixed_point(poly: Polynomial) -> PuiseuxSeries:
    lifted = lift_roots(poly.minus_identity(), partial=True)
    if not lifted.roots:
        raise NeedsExtensionError(
            "no rational classical fixed point",
            residual=lifted.unresolved[0].residual if lifted.unresolved else None,
        )
    return lifted.roots[0][0]


def build_system(
    poly: Polynomial,
    escape_budget: int = DEFAULT_ESCAPE_BUDGET,
) -> TameSystem | SimpleVerdict:
    """Validate a tame analysis context, or certify simplicity.

    Runs the full invariant battery on the constructed base point: local
    degree equals deg(P), strict expansion, unique self-preimage, at least
    two incomparable base-point preimages in at least two directions."""
    if poly.degree < 2:
        raise PreconditionError("dynamics requires degree >= 2")
    critical = critical_points_of(poly)
    fixed = rational_fixed_point(poly)

    candidate: BerkPoint = BerkPoint.from_value(fixed)
    for w, _ in critical:
        candidate = join(candidate, BerkPoint.from_value(w))
    image = act_on_point(poly, candidate)
    if less_equal(image, candidate):
        return SimpleVerdict(candidate, image)
    if candidate.is_classical:
        raise InvariantViolationError("expanding candidate base point is classical")

    # re-center on the simplest exact member: keeps all downstream shifts
    # rational and small
    base_ball = BallSpec(candidate.disk.simplest_member(), candidate.disk.log_radius)
    level0 = BerkPoint(disk=base_ball)
    image = act_on_point(poly, level0)
    flags: list[str] = []

    # invariant battery
    degree_at_base = ball_image(poly, base_ball)[1]
    if degree_at_base != poly.degree:
        raise InvariantViolationError(
            f"local degree {degree_at_base} at the base point != deg = {poly.degree}"
        )
    if compare(level0, image) != "le":
        raise InvariantViolationError("base point does not strictly expand")
    image_preimages = ball_preimages_partial(poly, image.disk)
    if image_preimages.unresolved or len(image_preimages.balls) != 1:
        raise InvariantViolationError("image of the base point has extra preimages")
    only_ball, only_degree = image_preimages.balls[0]
    if BerkPoint(disk=only_ball) != level0 or only_degree != poly.degree:
        raise InvariantViolationError("the base point is not the unique self-preimage")
    base_preimages = ball_preimages_partial(poly, base_ball)
    preimage_count = len(base_preimages.balls) + len(base_preimages.unresolved)
    if preimage_count < 2:
        raise InvariantViolationError("base point needs at least two preimages")
    points = [BerkPoint(disk=b) for b, _ in base_preimages.balls]
    for i, a in enumerate(points):
        for b in points[i + 1 :]:
            if compare(a, b) != "incomparable":
                raise InvariantViolationError("base-point preimages must be incomparable")
        if not strictly_below(a, level0):
            raise InvariantViolationError("base-point preimage not strictly below it")
    directions = {direction_at(level0, p) for p in points}
    if len(directions) < 2 and len(base_preimages.unresolved) == 0:
        raise InvariantViolationError("preimages of the base point span one direction")
    if len(directions) < 2:
        flags.append("direction-count-uses-unresolved-branches")

    if not tameness_certificate(poly, critical, 0):
        raise InvariantViolationError("tameness certificate failed")

    verdicts = []
    markers: list[Marker] = []
    provisional = TameSystem(
        poly=poly,
        degree=poly.degree,
        critical_points=tuple(critical),
        fixed_point=fixed,
        level0=level0,
        base_ball=base_ball,
        image_level0=image,
        critical_verdicts=(),
        markers=(),
        generators=(),
        generator_count=0,
        intervals=(),
        residual_characteristic=0,
        flags=(),
    )
    for w, _ in critical:
        verdicts.append((w, orbit_classify(provisional, w, escape_budget)))
    for w, verdict in verdicts:
        if verdict.kind == "bounded-undetermined":
            flags.append("markers-possibly-incomplete")
        if verdict.escapes:
            markers.append(
                Marker(w, verdict.escape_step, _marker_point(provisional, w, verdict.escape_step))
            )

    generators = _generators(provisional, markers)
    q = len(generators)
    if not 1 <= q <= poly.degree:
        raise InvariantViolationError(f"generator count {q} outside 1..{poly.degree}")
    if generators[-1] != image:
        raise InvariantViolationError("the largest generator must be the base-point image")
    intervals = _interval_lengths(level0, generators)

    return TameSystem(
        poly=poly,
        degree=poly.degree,
        critical_points=tuple(critical),
        fixed_point=fixed,
        level0=level0,
        base_ball=base_ball,
        image_level0=image,
        critical_verdicts=tuple(verdicts),
        markers=tuple(markers),
        generators=generators,
        generator_count=q,
        intervals=intervals,
        residual_characteristic=0,
        flags=tuple(sorted(set(flags))),
    )


def _marker_point(system: TameSystem, w: PuiseuxSeries, escape_step: int) -> BerkPoint:
    """Where the ray from the escaping critical point meets the Julia hull.

    The minimum join with branches freezes at the escape level: from then on
    the critical point lies outside every level ball, so joins with anything
    inside a branch equal the join with the branch itself."""
    chain = TrackedChain(system, w, INF)
    branches = _branches_inside(system, chain, 0, escape_step)
    best = system.base_log_radius
    for kind, payload in branches:
        if kind == "ball":
            ball: BallSpec = payload
            difference = w - ball.center
            if difference.order_at_least(ball.log_radius):
                raise InvariantViolationError(
                    "critical point inside a level ball at its escape level"
                )
            order = difference.order()
        else:
            branch: UnresolvedBranch = payload
            difference = w - branch.prefix
            tail_order = branch.valuation
            if difference.terms:
                order = min(difference.order(), tail_order)
            else:
                order = tail_order
        if order > best:
            best = order
    return BerkPoint.from_disk(w, best)


def _branches_inside(system: TameSystem, chain: TrackedChain, orbit_index: int, k: int):
    """Level-k branch positions inside the level-(k-1) chain ball around
    P^orbit_index of the tracked center: (kind, BallSpec|UnresolvedBranch)."""
    if k == 0:
        return [("ball", system.base_ball)]
    targets = _branches_inside(system, chain, orbit_index + 1, k - 1)
    container = BallSpec(chain._orbit_point(orbit_index), chain.radius(k - 1, orbit_index))
    out = []
    for kind, payload in targets:
        if kind != "ball":
            raise NeedsExtensionError(
                "marker computation blocked by an unresolved branch",
                residual=payload.residual,
            )
        preimages = ball_preimages_partial(system.poly, payload)
        for ball, _ in preimages.balls:
            if container.contains_ball(ball):
                out.append(("ball", ball))
        for unresolved in preimages.unresolved:
            branch = unresolved.branch
            difference = branch.prefix - container.center
            if difference.terms:
                position = min(difference.order(), branch.valuation)
            else:
                position = branch.valuation
            if position >= container.log_radius:
                out.append(("branch", branch))
    return out


def _generators(system: TameSystem, markers: list[Marker]) -> tuple[BerkPoint, ...]:
    """Distinct first entries of marker orbits into the half-open window
    between the base point and its image, sorted increasingly (the last one
    is always the image itself)."""
    entries: list[BerkPoint] = []
    for marker in markers:
        current = marker.point
        for _ in range(DEFAULT_ESCAPE_BUDGET):
            if strictly_below(system.level0, current):
                break
            current = act_on_point(system.poly, current)
        else:
            raise InvariantViolationError("marker orbit failed to pass the base point")
        if not less_equal(current, system.image_level0):
            raise InvariantViolationError("marker first entry overshoots the window")
        if current not in entries:
            entries.append(current)
    if system.image_level0 not in entries:
        entries.append(system.image_level0)
    entries.sort(key=lambda p: -p.disk.log_radius)
    return tuple(entries)


def _interval_lengths(level0: BerkPoint, generators: tuple[BerkPoint, ...]) -> tuple[Fraction, ...]:
    """|I_j|: distances between consecutive generators, the deepest one closed
    off by the base point itself."""
    q = len(generators)
    lengths = []
    for j in range(q):
        upper = generators[q - 1 - j]  # v_j
        lower = generators[q - 2 - j] if j <= q - 2 else level0  # v_{j+1} or L0
        lengths.append(hyperbolic_distance(lower, upper))
    return tuple(lengths)
