"""Upper half-plane primitives: points, distances, isometries.

Everything downstream (checkerboards, heptagon patches, clique witnesses)
is built on the three operations in this module, so they are kept exact
(closed forms, no iteration) and numerically careful near zero distance.
"""

from __future__ import annotations

import math
from dataclasses import dataclass

__all__ = [
    "HPoint",
    "Isometry",
    "acosh1p",
    "hyp_distance",
    "point_at_distance",
    "geodesic_point",
    "direction_angle",
    "apply_isometry",
    "identity",
    "translation",
    "rotation_about",
]

DET_TOL = 1e-12


@dataclass(frozen=True)
class HPoint:
    """A point (x, y) of the upper half-plane, y > 0."""

    x: float
    y: float

    def __post_init__(self):
        if not (math.isfinite(self.x) and math.isfinite(self.y)):
            raise ValueError(f"non-finite coordinates ({self.x}, {self.y})")
        if self.y <= 0.0:
            raise ValueError(f"point ({self.x}, {self.y}) not in the upper half-plane")


def acosh1p(t: float) -> float:
    """arccosh(1 + t) for t >= 0 without cancellation near t = 0."""
    if t < 0.0:
        if t > -1e-12:  # tolerate rounding noise from distance quotients
            return 0.0
        raise ValueError(f"acosh argument 1 + {t} below 1")
    return math.log1p(t + math.sqrt(t * (t + 2.0)))


def hyp_distance(p: HPoint, q: HPoint) -> float:
    """Hyperbolic distance arccosh(1 + ((x-x')^2 + (y-y')^2) / (2 y y'))."""
    dx = p.x - q.x
    dy = p.y - q.y
    return acosh1p((dx * dx + dy * dy) / (2.0 * p.y * q.y))


def point_at_distance(p: HPoint, phi: float, s: float) -> HPoint:
    """Point at hyperbolic distance s from p, direction parameter phi.

    Uses the Euclidean parametrization of the hyperbolic circle around
    (x, y): center (x, y cosh s), radius y sinh s.  phi = pi/2 points
    straight up, phi = -pi/2 straight down.
    """
    if s < 0.0:
        raise ValueError("distance must be non-negative")
    sh = math.sinh(s)
    return HPoint(p.x + p.y * sh * math.cos(phi), p.y * (math.cosh(s) + sh * math.sin(phi)))


def geodesic_point(p: HPoint, psi: float, s: float) -> HPoint:
    """Follow the geodesic from p with initial tangent angle psi for length s.

    Unlike point_at_distance (which parametrizes the circle by its
    Euclidean angle), psi here is the genuine tangent direction, so equal
    psi increments are equal hyperbolic angles at p.  psi = pi/2 points
    straight up.
    """
    if s < 0.0:
        raise ValueError("distance must be non-negative")
    # rotate the vertical ray at i by psi - pi/2, then move back to p
    half = (psi - math.pi / 2.0) / 2.0
    c, sn = math.cos(half), math.sin(half)
    e2 = math.exp(2.0 * s)
    den = c * c + sn * sn * e2
    wx = sn * c * (1.0 - e2) / den
    wy = math.exp(s) / den
    return HPoint(p.x + p.y * wx, p.y * wy)


def direction_angle(p: HPoint, q: HPoint) -> float:
    """Initial tangent angle of the geodesic from p to q.

    Differences of these angles are genuine hyperbolic angles between
    geodesic rays at p (the metric is conformal); inverse of
    geodesic_point in the angle argument.
    """
    u = (q.x - p.x) / p.y
    v = q.y / p.y
    if u == 0.0 and v == 1.0:
        raise ValueError("direction undefined for coincident points")
    if abs(u) < 1e-300:
        return math.pi / 2.0 if v > 1.0 else -math.pi / 2.0
    # center of the Euclidean semicircle through i and (u, v)
    m = (u * u + v * v - 1.0) / (2.0 * u)
    return math.atan2(m, 1.0) if u > 0.0 else math.atan2(-m, -1.0)


@dataclass(frozen=True)
class Isometry:
    """Orientation-preserving isometry as a real Moebius map (a z + b)/(c z + e).

    Determinant is renormalized to +1 after every composition.
    """

    a: float
    b: float
    c: float
    e: float

    def __post_init__(self):
        det = self.a * self.e - self.b * self.c
        if det <= 0.0 or not math.isfinite(det):
            raise ValueError(f"matrix determinant {det} not positive")
        if abs(det - 1.0) > DET_TOL:
            s = 1.0 / math.sqrt(det)
            object.__setattr__(self, "a", self.a * s)
            object.__setattr__(self, "b", self.b * s)
            object.__setattr__(self, "c", self.c * s)
            object.__setattr__(self, "e", self.e * s)

    def __matmul__(self, other: "Isometry") -> "Isometry":
        return Isometry(
            self.a * other.a + self.b * other.c,
            self.a * other.b + self.b * other.e,
            self.c * other.a + self.e * other.c,
            self.c * other.b + self.e * other.e,
        )

    def inverse(self) -> "Isometry":
        return Isometry(self.e, -self.b, -self.c, self.a)

    def __call__(self, p: HPoint) -> HPoint:
        return apply_isometry(self, p)


def apply_isometry(m: Isometry, p: HPoint) -> HPoint:
    """Apply the Moebius map to z = x + iy; the image stays in y > 0."""
    # (a z + b)(conj(c z + e)) expanded over the real denominator.
    cx = m.c * p.x + m.e
    cy = m.c * p.y
    den = cx * cx + cy * cy
    if den == 0.0:
        raise ValueError("degenerate matrix action")
    ax = m.a * p.x + m.b
    ay = m.a * p.y
    det = m.a * m.e - m.b * m.c
    return HPoint((ax * cx + ay * cy) / den, det * p.y / den)


def identity() -> Isometry:
    return Isometry(1.0, 0.0, 0.0, 1.0)


def translation(t: float) -> Isometry:
    """z -> z + t."""
    return Isometry(1.0, t, 0.0, 1.0)


def _to_point(p: HPoint) -> Isometry:
    # maps i to x + iy
    ry = math.sqrt(p.y)
    return Isometry(ry, p.x / ry, 0.0, 1.0 / ry)


def rotation_about(p: HPoint, alpha: float) -> Isometry:
    """Elliptic isometry fixing p, rotating tangent vectors by alpha (ccw)."""
    c = math.cos(alpha / 2.0)
    s = math.sin(alpha / 2.0)
    rot = Isometry(c, s, -s, c)
    conj = _to_point(p)
    return conj @ rot @ conj.inverse()
