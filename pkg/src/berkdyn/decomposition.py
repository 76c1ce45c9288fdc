"""Periodic critical elements and the Julia-set decomposition.

Every nonclassical Julia point of a tame polynomial lies in the grand orbit
of one of finitely many repelling periodic critical elements; those elements
sit on rays above bounded classical critical points, so they are found by
solving exact piecewise-linear fixed-radius equations along the orbits of
the bounded critical points.  Everything a budget touches is labeled."""

from __future__ import annotations

from dataclasses import dataclass, field
from fractions import Fraction

from .balls import BallSpec, ball_image, ball_preimages_partial, radius_map
from .dynamics import TameSystem, TrackedChain, act_on_point, local_degree
from .errors import ChainExitError, IndeterminateOrderError, InvariantViolationError
from .newton import UnresolvedBranch, lift_roots
from .rational import INF
from .series import PuiseuxSeries
from .tree import BerkPoint, compare, less_equal

DEFAULT_MAX_PERIOD = 4
DEFAULT_GRAND_ORBIT_BUDGET = 64


@dataclass(frozen=True)
class CriticalOrbit:
    points: tuple[BerkPoint, ...]  # the orbit, in dynamical order
    period: int
    cycle_degree: int  # local degree of P^period on the orbit (>= 2: repelling)


def periodic_critical_elements(system: TameSystem, max_period: int = DEFAULT_MAX_PERIOD) -> list[CriticalOrbit]:
    """All repelling periodic type II points whose ball meets the critical
    set, up to the stated period (completeness beyond it is a stated
    limitation of the search, not of the theory)."""
    if max_period < 1:
        raise InvariantViolationError("max_period must be >= 1")
    found: dict[BerkPoint, CriticalOrbit] = {}
    for w, verdict in system.critical_verdicts:
        if verdict.escapes:
            continue
        for period in range(1, max_period + 1):
            orbit_points = [w]
            for _ in range(period):
                orbit_points.append(system.poly(orbit_points[-1]))
            maps = [
                radius_map(system.poly.taylor_shift(orbit_points[i]))
                for i in range(period)
            ]
            composed = maps[0]
            for i in range(1, period):
                composed = maps[i].compose_after(composed)
            for rho in composed.fixed_points():
                if rho <= system.base_log_radius:
                    continue
                try:
                    returns = (orbit_points[period] - w).order_at_least(rho)
                except IndeterminateOrderError:
                    continue
                if not returns:
                    continue
                if composed.degree_at(rho) < 2:
                    continue  # neutral; not a Julia point
                point = BerkPoint.from_disk(w, rho)
                orbit = _assemble_orbit(system, point)
                key = min(orbit.points, key=lambda p: p.sort_key())
                if key not in found:
                    found[key] = orbit
    orbits = sorted(found.values(), key=lambda o: o.points[0].sort_key())
    _decomposition_sanity(system, orbits)
    return orbits


def _assemble_orbit(system: TameSystem, point: BerkPoint) -> CriticalOrbit:
    orbit = [point]
    degree = local_degree(system.poly, point)
    current = act_on_point(system.poly, point)
    while current != point:
        if len(orbit) > 64:
            raise InvariantViolationError("periodic orbit failed to close")
        orbit.append(current)
        degree *= local_degree(system.poly, current)
        current = act_on_point(system.poly, current)
    return CriticalOrbit(tuple(orbit), len(orbit), degree)


def _decomposition_sanity(system: TameSystem, orbits: list[CriticalOrbit]) -> None:
    if len(orbits) > max(system.degree - 2, 0):
        raise InvariantViolationError(
            f"{len(orbits)} periodic critical orbits exceed degree - 2"
        )
    seen: set[BerkPoint] = set()
    for orbit in orbits:
        if orbit.cycle_degree < 2:
            raise InvariantViolationError("periodic critical element is not repelling")
        for point in orbit.points:
            if point.is_classical:
                raise InvariantViolationError("periodic critical element must be type II")
            if point in seen:
                raise InvariantViolationError("periodic critical orbits intersect")
            seen.add(point)


# -- grand orbits ---------------------------------------------------------------------


@dataclass(frozen=True)
class GrandOrbitLayer:
    depth: int
    balls: tuple[BerkPoint, ...]
    unresolved: tuple[UnresolvedBranch, ...]


@dataclass(frozen=True)
class GrandOrbitSample:
    orbit_index: int
    layers: tuple[GrandOrbitLayer, ...]
    complete_to_depth: int
    budget_exhausted: bool


def expand_grand_orbit(
    system: TameSystem,
    orbit: CriticalOrbit,
    orbit_index: int,
    depth: int,
    node_budget: int = DEFAULT_GRAND_ORBIT_BUDGET,
) -> GrandOrbitSample:
    """Backward expansion of the orbit to the requested depth; unresolved
    clusters are kept with exact positions, and budget cuts are flagged."""
    frontier = [p for p in orbit.points]
    layers: list[GrandOrbitLayer] = [GrandOrbitLayer(0, tuple(frontier), ())]
    nodes = len(frontier)
    exhausted = False
    complete_to = depth
    for level in range(1, depth + 1):
        next_balls: list[BerkPoint] = []
        unresolved: list[UnresolvedBranch] = []
        for point in layers[-1].balls:
            preimages = ball_preimages_partial(system.poly, point.disk)
            for ball, _ in preimages.balls:
                candidate = BerkPoint(disk=ball)
                if candidate not in next_balls and candidate not in orbit.points:
                    next_balls.append(candidate)
            unresolved.extend(u.branch for u in preimages.unresolved)
            nodes += len(preimages.balls) + len(preimages.unresolved)
            if nodes > node_budget:
                exhausted = True
                break
        next_balls.sort(key=lambda p: p.sort_key())
        layers.append(GrandOrbitLayer(level, tuple(next_balls), tuple(unresolved)))
        if unresolved:
            complete_to = min(complete_to, level - 1)
        if exhausted:
            complete_to = min(complete_to, level - 1)
            break
    return GrandOrbitSample(orbit_index, tuple(layers), complete_to, exhausted)


# -- classical-side certificates --------------------------------------------------------


@dataclass(frozen=True)
class ChainEvidence:
    """Divergence evidence for one tracked chain: exact level increments and
    the window of dynamical degrees; ``certified`` only with a recorded
    reason (a chain whose balls keep containing grand-orbit points is not
    classical evidence and is marked as such)."""

    label: str
    increments: tuple[Fraction, ...]
    partial_sum: Fraction
    degree_window: tuple[int, ...]
    meets_grand_orbit: bool
    certified: bool
    reason: str


@dataclass
class JuliaDecomposition:
    orbits: list[CriticalOrbit]
    grand_orbit_samples: list[GrandOrbitSample]
    escape_certificates: list[tuple[PuiseuxSeries, int]]  # (critical point, escape step)
    chain_evidence: list[ChainEvidence]
    all_critical_points_escape: bool
    nonclassical_julia_empty: bool  # certified only in the all-escape case
    complete: bool
    flags: tuple[str, ...]

    @property
    def orbit_count(self) -> int:
        return len(self.orbits)


def julia_decomposition(
    system: TameSystem,
    depth: int = 8,
    budget: int = DEFAULT_GRAND_ORBIT_BUDGET,
    max_period: int = DEFAULT_MAX_PERIOD,
) -> JuliaDecomposition:
    """Theorem-A style decomposition data: periodic critical orbits, sampled
    grand orbits, escape certificates, and divergence evidence for sampled
    chains; completeness is flagged, never assumed."""
    orbits = periodic_critical_elements(system, max_period)
    samples = [
        expand_grand_orbit(system, orbit, i, depth, budget)
        for i, orbit in enumerate(orbits)
    ]
    escape_certificates = [
        (w, verdict.escape_step)
        for w, verdict in system.critical_verdicts
        if verdict.escapes
    ]
    all_escape = len(escape_certificates) == len(system.critical_verdicts)
    flags: list[str] = []
    if any(v.kind == "bounded-undetermined" for _, v in system.critical_verdicts):
        flags.append("critical-orbit-budget-undetermined")
    if any(s.budget_exhausted for s in samples):
        flags.append("grand-orbit-budget-exhausted")
    if any(s.complete_to_depth < depth for s in samples):
        flags.append("grand-orbit-needs-extension-markers")
    flags.append(f"periodic-search-capped-at-period-{max_period}")

    known_points = [p for orbit in orbits for p in orbit.points]
    for sample in samples:
        for layer in sample.layers:
            known_points.extend(layer.balls)

    evidence = [
        _chain_evidence(system, label, point, depth, known_points, all_escape)
        for label, point in _sample_chain_seeds(system)
    ]
    complete = not any(
        f.startswith("grand-orbit") or f == "critical-orbit-budget-undetermined"
        for f in flags
    )
    return JuliaDecomposition(
        orbits=orbits,
        grand_orbit_samples=samples,
        escape_certificates=escape_certificates,
        chain_evidence=evidence,
        all_critical_points_escape=all_escape,
        nonclassical_julia_empty=all_escape and not orbits,
        complete=complete,
        flags=tuple(flags),
    )


def _sample_chain_seeds(system: TameSystem) -> list[tuple[str, BerkPoint]]:
    """Deterministic classical seeds: the rational fixed points inside the
    base ball, plus first-level preimage centers."""
    seeds: list[tuple[str, BerkPoint]] = []
    fixed = lift_roots(system.poly.minus_identity(), partial=True)
    for i, (root, _) in enumerate(fixed.roots):
        try:
            inside = (root - system.base_ball.center).order_at_least(
                system.base_ball.log_radius
            )
        except IndeterminateOrderError:
            continue
        if inside:
            seeds.append((f"fixed-point-{i}", BerkPoint.from_value(root)))
    preimages = ball_preimages_partial(system.poly, system.base_ball)
    for i, (ball, _) in enumerate(preimages.balls):
        seeds.append((f"level1-branch-{i}", BerkPoint.from_value(ball.simplest_member())))
    unique: list[tuple[str, BerkPoint]] = []
    for label, point in seeds:
        if all(point != existing for _, existing in unique):
            unique.append((label, point))
    return unique


def _chain_evidence(
    system: TameSystem,
    label: str,
    point: BerkPoint,
    depth: int,
    known_points: list[BerkPoint],
    all_escape: bool,
) -> ChainEvidence:
    chain = TrackedChain.over(system, point)
    increments: list[Fraction] = []
    degrees: list[int] = []
    deepest: BerkPoint | None = None
    exited = False
    for n in range(depth):
        try:
            increments.append(chain.increment(n))
            degrees.append(chain.step_degree(n + 1))
            deepest = chain.point(n + 1)
        except ChainExitError:
            exited = True
            break
    meets = False
    if deepest is not None:
        meets = any(less_equal(g, deepest) for g in known_points)
    certified = False
    reason = ""
    if exited:
        reason = "chain exits the level tree (escaping region)"
    elif meets:
        reason = "chain descends to a grand-orbit point (nonclassical limit)"
    elif all_escape:
        certified = True
        reason = (
            "all critical points escape: beyond their escape levels every "
            "branch has degree 1 and increments repeat shallow values"
        )
    elif degrees and all(d == 1 for d in degrees[-3:]) and deepest is not None:
        inside = _critical_points_in(system, deepest)
        if not inside:
            certified = True
            reason = (
                "tail window is critical-point free with stable degree-1 "
                "increments repeating a generator interval"
            )
        else:
            reason = "critical point inside the deepest explored ball"
    else:
        reason = "insufficient depth for a certificate"
    return ChainEvidence(
        label=label,
        increments=tuple(increments),
        partial_sum=sum(increments, Fraction(0)),
        degree_window=tuple(degrees),
        meets_grand_orbit=meets,
        certified=certified,
        reason=reason,
    )


def _critical_points_in(system: TameSystem, point: BerkPoint) -> list[PuiseuxSeries]:
    out = []
    for w, _ in system.critical_points:
        try:
            if (w - point.disk.center).order_at_least(point.disk.log_radius):
                out.append(w)
        except IndeterminateOrderError:
            continue
    return out
