"""2D geometry primitives shared by the assistance and simulation code.

Coordinates are screen pixels with +x right and +y down; input deltas are
pixels per tick. Intentionally small and dependency-free so the hot
simulation loop stays easy to audit.
"""

from __future__ import annotations

import math
from dataclasses import dataclass


@dataclass(frozen=True, slots=True)
class Vec2:
    """Immutable 2D vector. Components are always finite."""

    x: float
    y: float

    def __post_init__(self) -> None:
        if not (math.isfinite(self.x) and math.isfinite(self.y)):
            raise ValueError(f"non-finite Vec2 components: ({self.x!r}, {self.y!r})")

    def __add__(self, other: Vec2) -> Vec2:
        return Vec2(self.x + other.x, self.y + other.y)

    def __sub__(self, other: Vec2) -> Vec2:
        return Vec2(self.x - other.x, self.y - other.y)

    def __mul__(self, scalar: float) -> Vec2:
        return Vec2(self.x * scalar, self.y * scalar)

    __rmul__ = __mul__

    def __neg__(self) -> Vec2:
        return Vec2(-self.x, -self.y)

    def dot(self, other: Vec2) -> float:
        return self.x * other.x + self.y * other.y

    def length(self) -> float:
        return math.hypot(self.x, self.y)

    def length_sq(self) -> float:
        return self.x * self.x + self.y * self.y

    def distance_to(self, other: Vec2) -> float:
        return math.hypot(self.x - other.x, self.y - other.y)

    def normalized(self) -> Vec2:
        """Unit vector in this direction; the zero vector maps to itself."""
        length = math.hypot(self.x, self.y)
        if length == 0.0:
            return Vec2(0.0, 0.0)
        return Vec2(self.x / length, self.y / length)


def lerp(a: Vec2, b: Vec2, t: float) -> Vec2:
    """Component-wise linear interpolation a + t*(b - a). Not re-normalized."""
    return Vec2(a.x + (b.x - a.x) * t, a.y + (b.y - a.y) * t)


@dataclass(frozen=True, slots=True)
class TargetRect:
    """Axis-aligned target rectangle; (x, y) is the top-left corner."""

    x: float
    y: float
    width: float
    height: float
    id: str = ""

    def __post_init__(self) -> None:
        if not (self.width > 0 and self.height > 0):
            raise ValueError(f"rect sides must be positive: {self.width} x {self.height}")

    @property
    def right(self) -> float:
        return self.x + self.width

    @property
    def bottom(self) -> float:
        return self.y + self.height

    @property
    def center(self) -> Vec2:
        return Vec2(self.x + self.width / 2.0, self.y + self.height / 2.0)


def point_in_rect(p: Vec2, rect: TargetRect) -> bool:
    """Point containment with inclusive edges (boundary contact counts)."""
    return rect.x <= p.x <= rect.right and rect.y <= p.y <= rect.bottom


def point_in_rect_interior(p: Vec2, rect: TargetRect) -> bool:
    """Strict interior containment; boundary points are outside."""
    return rect.x < p.x < rect.right and rect.y < p.y < rect.bottom


def closest_point_on_rect(p: Vec2, rect: TargetRect) -> Vec2:
    """Point of the rect (boundary or interior) nearest to p, via per-axis clamp."""
    return Vec2(
        min(max(p.x, rect.x), rect.right),
        min(max(p.y, rect.y), rect.bottom),
    )
