"""Closed-form moving-target interception math and circular-arena geometry.

Everything here is pure: the engine, planner, and agents all share these
primitives. Coordinates are pixels with the arena center at the origin and
the y-axis pointing up.
"""

from __future__ import annotations

import math
from dataclasses import dataclass

EPSILON = 1e-9


class UnsolvablePursuitError(ValueError):
    """Pursuer is not strictly faster than the target."""


@dataclass(frozen=True, slots=True)
class Vec2:
    """Immutable 2D vector (pixels)."""

    x: float
    y: float

    def __add__(self, other: "Vec2") -> "Vec2":
        return Vec2(self.x + other.x, self.y + other.y)

    def __sub__(self, other: "Vec2") -> "Vec2":
        return Vec2(self.x - other.x, self.y - other.y)

    def __mul__(self, scalar: float) -> "Vec2":
        return Vec2(self.x * scalar, self.y * scalar)

    __rmul__ = __mul__

    def __truediv__(self, scalar: float) -> "Vec2":
        return Vec2(self.x / scalar, self.y / scalar)

    def __neg__(self) -> "Vec2":
        return Vec2(-self.x, -self.y)

    def dot(self, other: "Vec2") -> float:
        return self.x * other.x + self.y * other.y

    def cross(self, other: "Vec2") -> float:
        """Scalar z-component of the 3D cross product."""
        return self.x * other.y - self.y * other.x

    def length(self) -> float:
        return math.sqrt(self.x * self.x + self.y * self.y)

    def length_squared(self) -> float:
        return self.x * self.x + self.y * self.y

    def normalized(self) -> "Vec2":
        l = self.length()
        if l < EPSILON:
            return Vec2(0.0, 0.0)
        return self / l

    def distance_to(self, other: "Vec2") -> float:
        return (other - self).length()

    @staticmethod
    def from_angle(angle: float, length: float = 1.0) -> "Vec2":
        return Vec2(math.cos(angle) * length, math.sin(angle) * length)


@dataclass(frozen=True, slots=True)
class Arena:
    """The playable circle, centered at the origin."""

    radius: float

    def __post_init__(self) -> None:
        if not self.radius > 0:
            raise ValueError(f"arena radius must be positive, got {self.radius}")

    def contains(self, point: Vec2) -> bool:
        return math.sqrt(point.x * point.x + point.y * point.y) <= self.radius + EPSILON


@dataclass(frozen=True, slots=True)
class InterceptSolution:
    """Earliest interception of a constant-velocity target by a pursuer.

    ``point`` lies on the target's path: point = target_pos + target_vel * time.
    ``reachable`` is false when the point falls outside the arena; callers then
    navigate to ``clamp_to_arena(point)``.
    """

    time: float
    point: Vec2
    reachable: bool


def solve_interception(
    pursuer_pos: Vec2,
    pursuer_speed: float,
    target_pos: Vec2,
    target_vel: Vec2,
    arena: Arena,
) -> InterceptSolution:
    """Solve |d + u*t| = s*t for the unique nonnegative interception time.

    With d = target_pos - pursuer_pos, u = target_vel, and s = pursuer_speed,
    the pursuit reduces to a quadratic in t whose single nonnegative root is

        t = (d.u + sqrt((d.u)^2 + (s^2 - |u|^2) |d|^2)) / (s^2 - |u|^2)

    Requires s > |u|; engine-spawned targets guarantee this, the guard is for
    hand-built scenarios.
    """
    dx = target_pos.x - pursuer_pos.x
    dy = target_pos.y - pursuer_pos.y
    ux = target_vel.x
    uy = target_vel.y
    denom = pursuer_speed * pursuer_speed - (ux * ux + uy * uy)
    if denom <= 0:
        raise UnsolvablePursuitError(
            "unsolvable pursuit: pursuer speed must exceed target speed"
        )
    du = dx * ux + dy * uy
    disc = du * du + denom * (dx * dx + dy * dy)
    t = (du + math.sqrt(disc)) / denom
    px = target_pos.x + ux * t
    py = target_pos.y + uy * t
    reachable = math.sqrt(px * px + py * py) <= arena.radius + EPSILON
    return InterceptSolution(time=t, point=Vec2(px, py), reachable=reachable)


def clamp_to_arena(point: Vec2, arena: Arena) -> Vec2:
    """Project a point outside the arena radially back onto the rim."""
    r = math.sqrt(point.x * point.x + point.y * point.y)
    if r <= arena.radius:
        return point
    scale = arena.radius / r
    return Vec2(point.x * scale, point.y * scale)


def _orientation(a: Vec2, b: Vec2, c: Vec2) -> int:
    """Sign of the turn a->b->c: +1 ccw, -1 cw, 0 collinear (within EPSILON)."""
    v = (b.x - a.x) * (c.y - a.y) - (b.y - a.y) * (c.x - a.x)
    if v > EPSILON:
        return 1
    if v < -EPSILON:
        return -1
    return 0


def _on_segment(a: Vec2, b: Vec2, p: Vec2) -> bool:
    """Assuming p is collinear with segment ab, is it within the bounding box?"""
    return (
        min(a.x, b.x) - EPSILON <= p.x <= max(a.x, b.x) + EPSILON
        and min(a.y, b.y) - EPSILON <= p.y <= max(a.y, b.y) + EPSILON
    )


def segments_intersect(a1: Vec2, a2: Vec2, b1: Vec2, b2: Vec2) -> bool:
    """True iff the closed segments a1a2 and b1b2 share a point.

    Collinear overlap counts as intersecting.
    """
    o1 = _orientation(a1, a2, b1)
    o2 = _orientation(a1, a2, b2)
    o3 = _orientation(b1, b2, a1)
    o4 = _orientation(b1, b2, a2)

    if o1 != o2 and o3 != o4:
        return True
    if o1 == 0 and _on_segment(a1, a2, b1):
        return True
    if o2 == 0 and _on_segment(a1, a2, b2):
        return True
    if o3 == 0 and _on_segment(b1, b2, a1):
        return True
    if o4 == 0 and _on_segment(b1, b2, a2):
        return True
    return False
