"""Geometric refinements of the level chains and the algebraic-degree
machinery: injectivity times, critical pullbacks, value-group indices,
dynamical degrees, the distance ledger, level/time sequences between a point
and its recurrence targets, and good starting levels.

The geometric points above a tracked point refine its level chain so that
the local degree is constant between consecutive entries; each one maps onto
a fixed generator after floor(n/q)+1 steps, which is exactly how they are
computed here (exact backward radius solving along the orbit of the tracked
center — no root lifting)."""

from __future__ import annotations

from dataclasses import dataclass
from fractions import Fraction
from math import lcm

from .dynamics import TameSystem, TrackedChain, act_on_point, local_degree
from .errors import (
    BudgetExhaustedError,
    IndeterminateOrderError,
    InvariantViolationError,
    NeedsExtensionError,
)
from .newton import lift_roots
from .rational import INF, Extended
from .series import PuiseuxSeries
from .tree import BerkPoint, hyperbolic_distance, less_equal


# -- algebraic degree -------------------------------------------------------------


@dataclass(frozen=True)
class AlgebraicDegree:
    """Minimal ramification over the ball (exact for disks); classical points
    with finite precision only certify a lower bound."""

    value: int
    exact: bool


def algebraic_degree(point: BerkPoint) -> AlgebraicDegree:
    """Least degree of a base-field extension whose convex hull contains the
    point: the lcm of exponent denominators of the canonical center (terms at
    or beyond the radius are droppable, so the boundary never counts)."""
    if point.is_classical:
        series = point.classical
        return AlgebraicDegree(series.ramification_index(), series.is_exact)
    canonical = point.disk.canonical_center()
    return AlgebraicDegree(canonical.ramification_index(), True)


# -- geometric sequences ------------------------------------------------------------


@dataclass(frozen=True)
class GeometricEntry:
    index: int
    point: BerkPoint
    log_radius: Fraction
    step_degree: int  # local degree of P at the point
    injectivity_time: int  # largest t with deg(P^t) = 1 at the point
    value_index: int  # denominator of the log-diameter in the value group
    dynamical_degree: int  # deg of P^(floor(n/q)+1) at the next entry
    algebraic_deg: int
    pullbacks: tuple[PuiseuxSeries, ...]
    pullback_flag: str  # "" | "needs-extension" | "indeterminate"


@dataclass
class GeometricRecord:
    system: TameSystem
    tracked: BerkPoint
    entries: list[GeometricEntry]

    @property
    def generator_count(self) -> int:
        return self.system.generator_count

    def distance_to_base(self, n: int) -> Fraction:
        """Hyperbolic distance from the entry of index n up to the base point."""
        return self.entries[n].log_radius - self.entries[0].log_radius

    def ledger_sum(self, n: int) -> Fraction:
        """The distance ledger: sum over generator classes of the interval
        length times the reciprocal dynamical degrees through level n."""
        q = self.generator_count
        total = Fraction(0)
        for ell in range(n + 1):
            j = ell % q
            total += self.system.intervals[j] / self.entries[ell].dynamical_degree
        return total

    def sandwich(self, n: int) -> tuple[int, int, int]:
        """(max, algebraic degree of entry n+1, lcm) over the value indices at
        levels where the injectivity time changes; the virtual level -1 has
        time -1 and index 1."""
        times = [-1] + [e.injectivity_time for e in self.entries]
        indices = [1] + [e.value_index for e in self.entries]
        chosen = []
        for j in range(-1, n + 1):
            if times[j + 1] != times[j + 2]:
                chosen.append(indices[j + 1])
        if not chosen:
            chosen = [1]
        delta = self.entries[n + 1].algebraic_deg
        out_lcm = 1
        for s in chosen:
            out_lcm = lcm(out_lcm, s)
        return max(chosen), delta, out_lcm


def geometric_sequence(system: TameSystem, point: BerkPoint, depth: int) -> GeometricRecord:
    """Geometric record of a tracked point to index ``depth`` (entries carry
    the dynamical degree, which needs one extra internal level)."""
    chain = TrackedChain.over(system, point)
    q = system.generator_count
    generator_radii = [g.disk.log_radius for g in system.generators]  # v_{q-1}..v_0

    def radius_of(n: int) -> Fraction:
        m, j = divmod(n, q)
        sigma = generator_radii[q - 1 - j]
        for i in reversed(range(m + 1)):
            sigma = chain._map_at(i).solve(sigma)
        return sigma

    radii = [radius_of(n) for n in range(depth + 2)]
    for n in range(depth + 1):
        if radii[n + 1] <= radii[n]:
            raise InvariantViolationError("geometric radii must strictly increase")
        if n % q == 0 and radii[n] != chain.radius(n // q):
            raise InvariantViolationError("geometric entry disagrees with the level chain")
    entries: list[GeometricEntry] = []
    for n in range(depth + 1):
        sigma = radii[n]
        point_n = BerkPoint.from_disk(chain.center, sigma)
        steps = n // q + 1
        t_n = _injectivity_time(chain, sigma, steps)
        d_n = _iterate_degree(chain, radii[n + 1], steps)
        pullbacks, flag = _critical_pullbacks(system, chain, sigma, t_n)
        entries.append(
            GeometricEntry(
                index=n,
                point=point_n,
                log_radius=sigma,
                step_degree=chain._map_at(0).degree_at(sigma),
                injectivity_time=t_n,
                value_index=sigma.denominator,
                dynamical_degree=d_n,
                algebraic_deg=algebraic_degree(point_n).value,
                pullbacks=tuple(pullbacks),
                pullback_flag=flag,
            )
        )
    return GeometricRecord(system, point, entries)


def _injectivity_time(chain: TrackedChain, sigma: Fraction, cap: int) -> int:
    rho = sigma
    for t in range(cap + 1):
        if chain._map_at(t).degree_at(rho) >= 2:
            return t
        rho = chain._map_at(t)(rho)
    raise InvariantViolationError(
        "no critical image within the generator window (injectivity time)"
    )


def _iterate_degree(chain: TrackedChain, sigma: Fraction, steps: int) -> int:
    degree = 1
    rho = sigma
    for i in range(steps):
        degree *= chain._map_at(i).degree_at(rho)
        rho = chain._map_at(i)(rho)
    return degree


def _critical_pullbacks(
    system: TameSystem, chain: TrackedChain, sigma: Fraction, t_n: int
) -> tuple[list[PuiseuxSeries], str]:
    """Elements of the ball that reach a critical point in exactly t_n steps,
    pulled back one exact root solve at a time."""
    radii = [sigma]
    for i in range(t_n):
        radii.append(chain._map_at(i)(radii[-1]))
    center_t = chain._orbit_point(t_n)
    inside = []
    for w, _ in system.critical_points:
        try:
            if (w - center_t).order_at_least(radii[t_n]):
                inside.append(w)
        except IndeterminateOrderError:
            return [], "indeterminate"
    if not inside:
        raise InvariantViolationError("critical image ball contains no critical point")
    pullbacks = []
    # the pull through a degree-1 ball certifies exactly the precision it was
    # handed, so one constant target (past the deepest radius) flows through
    stage_target = radii[0] + 4
    for w in inside:
        current = w
        try:
            for i in reversed(range(t_n)):
                desired = stage_target
                if current.precision is not INF:
                    desired = min(desired, current.precision)
                if desired <= radii[i]:
                    return [], "indeterminate"
                current = _pull_root(
                    system, current, chain._orbit_point(i), radii[i], desired
                )
        except NeedsExtensionError:
            return [], "needs-extension"
        except IndeterminateOrderError:
            return [], "indeterminate"
        pullbacks.append(current)
    return pullbacks, ""


def _pull_root(
    system: TameSystem,
    target: PuiseuxSeries,
    ball_center: PuiseuxSeries,
    ball_radius: Fraction,
    lift_target: Fraction,
) -> PuiseuxSeries:
    equation = system.poly.minus_constant(target)
    lifted = None
    last: IndeterminateOrderError | None = None
    ladder = (
        lift_target,
        lift_target - Fraction(1, 2),
        lift_target - 1,
        ball_radius + 1,
        ball_radius + Fraction(1, 2),
    )
    for candidate in ladder:
        if candidate <= ball_radius:
            continue
        try:
            lifted = lift_roots(equation, candidate, partial=True)
            break
        except IndeterminateOrderError as exc:
            last = exc  # target precision ran out; retry shallower
    if lifted is None:
        raise last if last is not None else IndeterminateOrderError("pullback failed")
    hits = []
    for root, _ in lifted.roots:
        if (root - ball_center).order_at_least(ball_radius):
            hits.append(root)
    if not hits:
        for branch in lifted.unresolved:
            difference = branch.prefix - ball_center
            position = branch.valuation
            if difference.terms:
                position = min(difference.order(), branch.valuation)
            if position >= ball_radius:
                raise NeedsExtensionError(
                    "critical pullback leaves the rational field",
                    residual=branch.residual,
                )
        raise InvariantViolationError("no preimage root inside a degree-1 ball")
    if len(hits) > 1:
        raise InvariantViolationError("several preimage roots inside a degree-1 ball")
    return hits[0]


# -- level / time sequences between a point and a recurrence target ------------------


@dataclass(frozen=True)
class RecurrenceStep:
    time: int  # k_n
    level: int  # l_n (shared geometric level after k_n steps)


@dataclass
class RecurrenceData:
    shared_level_start: Extended  # lcg(x, y)
    steps: list[RecurrenceStep]
    reached_exact_hit: bool  # some iterate's chain coincides with the target's
    degree_bound_checks: list[tuple[int, int, int]]  # (j, deg, bound) on mandated segment
    distance_bound_ok: bool | None  # d(y, base) <= d^(d-1) d(x, base), None if classical


def shared_geometric_level(
    system: TameSystem, x: BerkPoint, y: BerkPoint, max_level: int
) -> Extended:
    """Largest j <= max_level with G_j(x) = G_j(y); INF when x = y or when the
    chains agree through the whole window."""
    if x == y:
        return INF
    record_x = geometric_sequence(system, x, max_level)
    record_y = geometric_sequence(system, y, max_level)
    shared = -1
    for j in range(max_level + 1):
        if record_x.entries[j].point == record_y.entries[j].point:
            shared = j
        else:
            break
    if shared == max_level:
        return INF
    if shared < 0:
        raise InvariantViolationError("chains must share the base level")
    return Fraction(shared)


def sequences_between(
    system: TameSystem,
    x: BerkPoint,
    y: BerkPoint,
    budget: int,
    max_level: int = 24,
) -> RecurrenceData:
    """Level and time sequences from x toward y (y expected in the closure of
    the forward orbit of x); verifies the bounded-degree and distance bounds
    on the explored data."""
    d = system.degree
    q = system.generator_count
    ell0 = shared_geometric_level(system, x, y, max_level)
    steps: list[RecurrenceStep] = []
    reached = ell0 is INF
    previous_level = ell0
    if not reached:
        current_level = ell0
        time = 0
        while len(steps) < 8:
            found = None
            for j in range(time + 1, budget + 1):
                candidate = _iterate_point(system, x, j)
                level = shared_geometric_level(system, candidate, y, max_level)
                if level is INF:
                    steps.append(RecurrenceStep(j, max_level))
                    found = "exact"
                    break
                if level > current_level:
                    steps.append(RecurrenceStep(j, int(level)))
                    current_level = level
                    time = j
                    found = "advanced"
                    break
            if found == "exact":
                reached = True
                break
            if found is None:
                if not steps:
                    raise BudgetExhaustedError(
                        "recurrence not observed within budget", budget=budget
                    )
                break
    checks = _degree_bound_checks(system, x, steps, previous_level, max_level)
    db_ok: bool | None = None
    if not x.is_classical and not y.is_classical:
        bound = Fraction(d ** (d - 1))
        lhs = hyperbolic_distance(y, system.level0)
        rhs = bound * hyperbolic_distance(x, system.level0)
        db_ok = lhs <= rhs
    return RecurrenceData(ell0, steps, reached, checks, db_ok)


def _iterate_point(system: TameSystem, point: BerkPoint, steps: int) -> BerkPoint:
    current = point
    for _ in range(steps):
        current = act_on_point(system.poly, current)
    return current


# -- good starting level -----------------------------------------------------------


@dataclass(frozen=True)
class StartingLevel:
    value: int
    determined: bool
    note: str = ""


def system_stabilization_level(
    system: TameSystem, periodic_orbit_points: list[BerkPoint] | None = None
) -> int:
    """Budgeted witness for the polynomial-wide stabilization level: the
    largest escape step of a critical point, joined with the level at which
    each known periodic critical element reaches its limiting local degree."""
    level = 1
    for marker in system.markers:
        level = max(level, marker.escape_step)
    for c in periodic_orbit_points or []:
        target = local_degree(system.poly, c)
        chain = TrackedChain.over(system, c)
        for n in range(1, 33):
            if chain.step_degree(n) == target:
                level = max(level, n)
                break
        else:
            raise BudgetExhaustedError("periodic critical element never stabilizes")
    return level


def good_starting_level(
    system: TameSystem,
    point: BerkPoint,
    budget: int,
    periodic_orbit_points: list[BerkPoint] | None = None,
) -> StartingLevel:
    """Least level (at or past the system stabilization level) from which the
    tracked point's local degree matches its level chain and critical level
    balls along the budgeted orbit are accounted for by known critical
    elements.  The orbit scan is a budget, so the verdict carries a flag."""
    base = system_stabilization_level(system, periodic_orbit_points)
    target_degree = local_degree(system.poly, point)
    chain = TrackedChain.over(system, point)
    candidate = None
    for n in range(base, base + 33):
        if chain.step_degree(n) == target_degree:
            candidate = n
            break
    if candidate is None:
        return StartingLevel(base, False, "degree did not stabilize within budget")
    known = periodic_orbit_points or []
    for j in range(1, budget + 1):
        iterate = _iterate_point(system, point, j)
        try:
            level_chain = TrackedChain.over(system, iterate)
            degree = level_chain.step_degree(candidate)
        except Exception:
            return StartingLevel(candidate, False, f"orbit scan stopped at step {j}")
        if degree >= 2:
            ball = level_chain.point(candidate)
            matches = any(
                TrackedChain.over(system, c).point(candidate) == ball for c in known
            )
            if not matches:
                candidate_note = (
                    f"critical level ball at orbit step {j} not matched to a known "
                    "critical element"
                )
                return StartingLevel(candidate, False, candidate_note)
    return StartingLevel(candidate, True)


def _degree_bound_checks(
    system: TameSystem,
    x: BerkPoint,
    steps: list[RecurrenceStep],
    ell0: Extended,
    max_level: int,
) -> list[tuple[int, int, int]]:
    """deg of P^(k_n) at geometric points below the mandated segment stays
    below d^(d-1)."""
    if not steps or ell0 is INF:
        return []
    d = system.degree
    q = system.generator_count
    bound = d ** (d - 1)
    chain = TrackedChain.over(system, x)
    record = geometric_sequence(system, x, min(max_level, 12))
    out = []
    previous = int(ell0)
    for step in steps[:3]:
        k_n = step.time
        cutoff = previous + q * k_n
        for entry in record.entries:
            if entry.index <= cutoff:
                continue
            degree = _iterate_degree(chain, entry.log_radius, k_n)
            out.append((entry.index, degree, bound))
        previous = step.level
    return out
