"""The Berkovich line as a partially ordered metric tree.

Representable points are classical (type I, a Puiseux series) or disks
(type II, center + exact rational log-radius).  With value group Q and
rational coefficients every representable nonclassical point is type II;
type III/IV never arise from rational data and are not representable —
pipelines that would converge to them stop at their budget with an explicit
marker instead.

Hyperbolic distances are exact rationals in log scale, +inf to or from a
classical point.  Segment walks are exact: callers iterate over finitely
many rational breakpoints, never over discretizations.
"""

from __future__ import annotations

from dataclasses import dataclass, field
from fractions import Fraction
from typing import Iterable

from .balls import BallSpec
from .errors import IndeterminateOrderError, PreconditionError
from .rational import INF, Extended, as_fraction, render_fraction
from .series import PuiseuxSeries, render_series


class BerkPoint:
    """A representable point: classical value or closed disk."""

    __slots__ = ("classical", "disk")

    def __init__(self, classical: PuiseuxSeries | None = None, disk: BallSpec | None = None):
        if (classical is None) == (disk is None):
            raise PreconditionError("exactly one of classical/disk must be given")
        object.__setattr__(self, "classical", classical)
        object.__setattr__(self, "disk", disk)

    def __setattr__(self, name, value):
        raise AttributeError("BerkPoint is immutable")

    @classmethod
    def from_value(cls, value: PuiseuxSeries) -> "BerkPoint":
        return cls(classical=value)

    @classmethod
    def from_disk(cls, center: PuiseuxSeries, log_radius) -> "BerkPoint":
        return cls(disk=BallSpec(center, log_radius))

    @classmethod
    def gauss(cls) -> "BerkPoint":
        return cls.from_disk(PuiseuxSeries.zero(), 0)

    @property
    def is_classical(self) -> bool:
        return self.classical is not None

    @property
    def type_name(self) -> str:
        return "I" if self.is_classical else "II"

    def representative(self) -> PuiseuxSeries:
        """A classical point at or below this point."""
        return self.classical if self.classical is not None else self.disk.center

    def log_radius(self) -> Extended:
        """Exact log-radius; INF for classical points (radius 0)."""
        return INF if self.is_classical else self.disk.log_radius

    def log_diameter(self) -> Extended:
        """log(diam); -INF conceptually for classical points, reported as the
        log_radius INF marker by callers."""
        if self.is_classical:
            raise PreconditionError("classical points have diameter 0")
        return -self.disk.log_radius

    def __eq__(self, other: object) -> bool:
        if not isinstance(other, BerkPoint):
            return NotImplemented
        if self.is_classical != other.is_classical:
            return False
        if self.is_classical:
            return self.classical == other.classical
        return self.disk == other.disk

    def __hash__(self) -> int:
        if self.is_classical:
            return hash(("I", self.classical))
        return hash(("II", self.disk))

    def sort_key(self):
        if self.is_classical:
            return (1, self.classical.sort_key())
        return (0, self.disk.sort_key())

    def __repr__(self) -> str:
        if self.is_classical:
            return f"BerkPoint(I: {render_series(self.classical)})"
        return (
            f"BerkPoint(II: {render_series(self.disk.canonical_center())}; "
            f"{render_fraction(self.disk.log_radius)})"
        )


def compare(x: BerkPoint, y: BerkPoint) -> str:
    """Partial order from ball inclusion: one of 'eq', 'le', 'ge', 'incomparable'."""
    if x == y:
        return "eq"
    if _below(x, y):
        return "le"
    if _below(y, x):
        return "ge"
    return "incomparable"


def _below(x: BerkPoint, y: BerkPoint) -> bool:
    if y.is_classical:
        return False  # classical points are minimal
    rho = y.disk.log_radius
    if not x.is_classical and x.disk.log_radius < rho:
        return False
    return (x.representative() - y.disk.center).order_at_least(rho)


def less_equal(x: BerkPoint, y: BerkPoint) -> bool:
    return compare(x, y) in ("eq", "le")


def strictly_below(x: BerkPoint, y: BerkPoint) -> bool:
    return compare(x, y) == "le"


def join(x: BerkPoint, y: BerkPoint) -> BerkPoint:
    """Smallest point above both; type II whenever x != y."""
    if x == y:
        return x
    a = x.representative()
    b = y.representative()
    candidates = []
    if not x.is_classical:
        candidates.append(x.disk.log_radius)
    if not y.is_classical:
        candidates.append(y.disk.log_radius)
    difference = a - b
    if difference.terms:
        candidates.append(difference.order())
    elif not difference.is_exact:
        if not candidates or difference.precision < min(candidates):
            raise IndeterminateOrderError(
                "join depends on terms beyond the centers' precision"
            )
    if not candidates:
        raise IndeterminateOrderError("join of classically equal exact points")
    rho = min(candidates)
    return BerkPoint.from_disk(a, rho)


def hyperbolic_distance(x: BerkPoint, y: BerkPoint) -> Extended:
    """Tree metric in log scale; INF when either point is classical."""
    if x == y:
        return Fraction(0)
    if x.is_classical or y.is_classical:
        return INF
    top = join(x, y)
    rho_top = top.disk.log_radius
    return (x.disk.log_radius - rho_top) + (y.disk.log_radius - rho_top)


@dataclass(frozen=True)
class Segment:
    """Order-validated segment lower <= upper; its length is the hyperbolic
    distance of the endpoints when both are nonclassical."""

    lower: BerkPoint
    upper: BerkPoint

    def __post_init__(self):
        if not less_equal(self.lower, self.upper):
            raise PreconditionError("segment endpoints must satisfy lower <= upper")

    def length(self) -> Extended:
        return hyperbolic_distance(self.lower, self.upper)

    def point_at_log_radius(self, rho) -> BerkPoint:
        """The unique segment point with the given log-radius (exact walk)."""
        rho = as_fraction(rho, "rho")
        upper_rho = self.upper.disk.log_radius
        lower_rho = self.lower.log_radius()
        if rho < upper_rho or (lower_rho is not INF and rho > lower_rho):
            raise PreconditionError("log-radius outside the segment")
        return BerkPoint.from_disk(self.lower.representative(), rho)


@dataclass(frozen=True)
class Direction:
    """A tangent direction at a type II point: toward infinity, or the open
    ball holding a canonical residue representative."""

    at: BerkPoint
    toward_infinity: bool
    representative: PuiseuxSeries | None = None

    def __eq__(self, other: object) -> bool:
        if not isinstance(other, Direction):
            return NotImplemented
        if self.at != other.at or self.toward_infinity != other.toward_infinity:
            return False
        if self.toward_infinity:
            return True
        return self.representative.terms == other.representative.terms

    def __hash__(self) -> int:
        rep = None if self.toward_infinity else self.representative.terms
        return hash((self.at, self.toward_infinity, rep))


def direction_at(vertex: BerkPoint, x: BerkPoint) -> Direction:
    """Direction at ``vertex`` containing ``x`` (x != vertex).

    Stable under the choice of representative: two points below the vertex
    share a direction iff their representatives agree modulo the open ball,
    i.e. the order of the difference exceeds the vertex log-radius."""
    if vertex.is_classical:
        raise PreconditionError("directions are defined at type II points")
    if x == vertex:
        raise PreconditionError("no direction from a point to itself")
    if not strictly_below(x, vertex):
        return Direction(vertex, True)
    rho = vertex.disk.log_radius
    representative = x.representative().truncate_below(rho, include_boundary=True)
    return Direction(vertex, False, representative)


# -- finite subtrees -----------------------------------------------------------


@dataclass
class FiniteSubtree:
    """Join-closed finite set of points with parent links along the order.

    Single-writer while building; freeze() before sharing."""

    nodes: list[BerkPoint] = field(default_factory=list)
    labels: dict[BerkPoint, str] = field(default_factory=dict)
    _frozen: bool = False

    def add(self, point: BerkPoint, label: str = "") -> None:
        if self._frozen:
            raise PreconditionError("subtree is frozen")
        if point not in self.nodes:
            self.nodes.append(point)
        if label:
            self.labels[point] = label

    def close_under_joins(self) -> None:
        changed = True
        while changed:
            changed = False
            snapshot = list(self.nodes)
            for i, a in enumerate(snapshot):
                for b in snapshot[i + 1 :]:
                    if a.is_classical and b.is_classical and a == b:
                        continue
                    top = join(a, b)
                    if top not in self.nodes:
                        self.nodes.append(top)
                        changed = True

    def freeze(self) -> None:
        self.close_under_joins()
        self.nodes.sort(key=lambda p: p.sort_key())
        self._frozen = True

    def edges(self) -> list[tuple[BerkPoint, BerkPoint, Extended]]:
        """(child, parent, exact length) pairs; parent = least node strictly above."""
        out = []
        for node in self.nodes:
            parent = None
            for other in self.nodes:
                if other == node or not strictly_below(node, other):
                    continue
                if parent is None or strictly_below(other, parent):
                    parent = other
            if parent is not None:
                out.append((node, parent, hyperbolic_distance(node, parent)))
        return out

    def to_dot(self) -> str:
        """DOT graph; node labels are 'center ; logRadius ; degree' where the
        degree comes from the stored label (callers attach it)."""
        names = {node: f"n{i}" for i, node in enumerate(self.nodes)}
        lines = ["graph berkovich_tree {", "  node [shape=box];"]
        for node in self.nodes:
            if node.is_classical:
                center = render_series(node.classical)
                rho = "inf"
            else:
                center = render_series(node.disk.canonical_center())
                rho = render_fraction(node.disk.log_radius)
            extra = self.labels.get(node, "")
            label = f"{center} ; {rho}" + (f" ; {extra}" if extra else "")
            label = label.replace('"', "'")
            lines.append(f'  {names[node]} [label="{label}"];')
        for child, parent, length in self.edges():
            rendered = render_fraction(length)
            lines.append(
                f'  {names[parent]} -- {names[child]} [label="{rendered}"];'
            )
        lines.append("}")
        return "\n".join(lines)

    def to_json_dict(self) -> dict:
        from .report import point_to_json

        return {
            "nodes": [
                {"point": point_to_json(node), "label": self.labels.get(node, "")}
                for node in self.nodes
            ],
            "edges": [
                {
                    "child": point_to_json(child),
                    "parent": point_to_json(parent),
                    "length": render_fraction(length),
                }
                for child, parent, length in self.edges()
            ],
        }
