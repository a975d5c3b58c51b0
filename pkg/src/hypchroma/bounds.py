"""Upper bounds for half-plane chromatic numbers, pure and interval.

Closed forms, the checkerboard optimizer over the stratum height h, the
branch-switch root d0 that separates the two diameter regimes, and the
circle-clique witness for the interval lower bound.
"""

from __future__ import annotations

import math
from dataclasses import dataclass, field
from enum import Enum
from typing import Optional

from .checkerboard import Scheme, rect_diameter
from .hypgeom import HPoint, geodesic_point, hyp_distance

__all__ = [
    "BoundSource",
    "BoundResult",
    "CliqueWitness",
    "w_of_h",
    "k_of_h",
    "optimize_checkerboard",
    "closed_form_bound",
    "applicable_bounds",
    "solve_d0",
    "d0_closed_form",
    "interval_upper_bound",
    "interval_scheme",
    "interval_clique_points",
    "scheme_from_result",
    "pure_scheme",
]

LOG2 = math.log(2.0)
LOG3 = math.log(3.0)
LOG4 = math.log(4.0)

#: relative guard when taking ceilings of analytically-integer expressions
CEIL_GUARD = 1e-12


class BoundSource(Enum):
    SMALL_D_9 = "SMALL_D_9"
    TABLE_12 = "TABLE_12"
    TABLE_15 = "TABLE_15"
    TABLE_16 = "TABLE_16"
    TABLE_18 = "TABLE_18"
    FUNDDOM_8 = "FUNDDOM_8"
    LARGE_D_K4 = "LARGE_D_K4"
    LARGE_D_K3 = "LARGE_D_K3"
    OPTIMIZED = "OPTIMIZED"
    INTERVAL = "INTERVAL"


@dataclass(frozen=True)
class BoundResult:
    value: int
    source: BoundSource
    params: Optional[dict] = None
    applicable: bool = True
    note: str = ""

    def __post_init__(self):
        if self.applicable and self.value < 4:
            raise ValueError("no valid coloring bound can beat the universal lower bound 4")

    def as_dict(self) -> dict:
        out = {"value": self.value, "source": self.source.value}
        if self.params is not None:
            out["params"] = self.params
        if not self.applicable:
            out["applicable"] = False
        if self.note:
            out["note"] = self.note
        return out


def _guarded_ceil(x: float) -> int:
    return math.ceil(x - CEIL_GUARD * max(1.0, abs(x)))


def w_of_h(d: float, h: float) -> float:
    """Base width maximizing rectangle area for stratum height h.

    Either the base w = d itself, or the width at which the rectangle
    diagonal reaches exactly d, whichever is smaller.
    """
    if not 0.0 < h < d:
        raise ValueError(f"need 0 < h < d, got h={h}, d={d}")
    arg = (1.0 + 2.0 * math.exp(h) * math.cosh(d) - math.exp(2.0 * h)) / 2.0
    if arg < 1.0:
        # only possible for h >= d; kept as a guard
        raise ValueError(f"h={h} too large for d={d}")
    return min(d, math.acosh(arg))


def k_of_h(d: float, h: float) -> int:
    """Smallest horizontal period guaranteeing distance >= d across a gap of k."""
    w = w_of_h(d, h)
    k = _guarded_ceil(
        math.exp(h) * math.sqrt((math.cosh(d) - 1.0) / (math.cosh(w) - 1.0))
    )
    return max(k, 2)


def _objective(d: float, h: float) -> tuple[int, int, int, float]:
    """(bound, k, m, w) of the checkerboard using stratum height h."""
    w = w_of_h(d, h)
    k = k_of_h(d, h)
    m = _guarded_ceil(d / h)
    return (k + 1) * (m + 1), k, m, w


def _relaxed(d: float, h: float) -> float:
    # continuous relaxation used only to steer golden-section refinement
    w = w_of_h(d, h)
    kf = math.exp(h) * math.sqrt((math.cosh(d) - 1.0) / (math.cosh(w) - 1.0))
    return (kf + 1.0) * (d / h + 1.0)


_GOLDEN = (math.sqrt(5.0) - 1.0) / 2.0


def optimize_checkerboard(d: float, grid_steps: int = 512) -> BoundResult:
    """Minimize (k(h)+1)(ceil(d/h)+1) over stratum heights h < d.

    Log-uniform grid over (d/50, d) with golden-section refinement of the
    continuous relaxation; the corner heights h = d/m (stratum-count
    boundaries) and h = log(2..4) are always included since the discrete
    optimum sits on them.  Ties break toward larger h (fewer strata).
    """
    if d <= 0.0:
        raise ValueError("d must be positive")
    if grid_steps < 10:
        raise ValueError("grid_steps must be >= 10")

    lo, hi = d / 50.0, d
    candidates = [lo * (hi / lo) ** (t / (grid_steps - 1)) for t in range(grid_steps)]
    candidates += [d / m for m in range(2, 51)]
    candidates += [lg for lg in (LOG2, LOG3, LOG4) if lg < d]

    # golden-section on the continuous relaxation around the best grid point
    grid_best = min(
        (c for c in candidates if lo * 0.999 <= c < d), key=lambda h: _relaxed(d, h)
    )
    a = max(lo, grid_best * 0.8)
    b = min(d * (1.0 - 1e-9), grid_best * 1.25)
    for _ in range(60):
        x1 = b - _GOLDEN * (b - a)
        x2 = a + _GOLDEN * (b - a)
        if _relaxed(d, x1) <= _relaxed(d, x2):
            b = x2
        else:
            a = x1
    candidates += [a, (a + b) / 2.0, b]

    best = None
    for h in sorted(set(c for c in candidates if 0.0 < c < d)):
        value, k, m, w = _objective(d, h)
        # ties toward larger h: scanning in increasing h, strict improvement only
        if best is None or value <= best[0]:
            best = (value, h, k, m, w)

    value, h, k, m, w = best
    return BoundResult(
        value,
        BoundSource.OPTIMIZED,
        params={"h": h, "w": w, "k": k, "m": m},
    )


def _table_entries() -> list[tuple[float, int, BoundSource]]:
    return [
        (2.0 * LOG2, 9, BoundSource.SMALL_D_9),
        (2.0 * LOG3, 12, BoundSource.TABLE_12),
        (2.0 * LOG4, 15, BoundSource.TABLE_15),
        (3.0 * LOG3, 16, BoundSource.TABLE_16),
        (5.0 * LOG2, 18, BoundSource.TABLE_18),
    ]


def applicable_bounds(d: float) -> list[BoundResult]:
    """Every closed-form bound whose validity interval contains d."""
    if d <= 0.0:
        raise ValueError("d must be positive")
    out = []
    for limit, value, source in _table_entries():
        if d <= limit:
            out.append(BoundResult(value, source, params={"d_max": limit}))
    if 1.22 <= d <= 1.77:
        out.append(BoundResult(8, BoundSource.FUNDDOM_8, params={"window": [1.22, 1.77]}))
    if d >= 2.0:
        m4 = _guarded_ceil(d / LOG4)
        m3 = _guarded_ceil(d / LOG3)
        out.append(
            BoundResult(5 * (m4 + 1), BoundSource.LARGE_D_K4, params={"k": 4, "m": m4})
        )
        out.append(
            BoundResult(4 * (m3 + 1), BoundSource.LARGE_D_K3, params={"k": 3, "m": m3})
        )
    return out


def closed_form_bound(d: float) -> BoundResult:
    """Best closed-form bound at d (minimum over all applicable forms)."""
    return min(applicable_bounds(d), key=lambda b: b.value)


def _d0_residual(d: float) -> float:
    # the two w_of_h branches coincide at h = d/2 exactly when this vanishes
    return (1.0 + 2.0 * math.exp(d / 2.0) * math.cosh(d) - math.exp(d)) / 2.0 - math.cosh(d)


def d0_closed_form() -> float:
    c = (108.0 + 12.0 * math.sqrt(69.0)) ** (1.0 / 3.0)
    return 2.0 * math.log((c + 12.0 / c) / 6.0)


def solve_d0(tol: float = 1e-12) -> float:
    """Bisection root of the branch-switch residual in (0, 1)."""
    a, b = 0.1, 1.0
    fa = _d0_residual(a)
    if fa > 0.0 or _d0_residual(b) < 0.0:
        raise RuntimeError("bisection bracket lost")
    while b - a > tol:
        mid = 0.5 * (a + b)
        if _d0_residual(mid) < 0.0:
            a = mid
        else:
            b = mid
    return 0.5 * (a + b)


def scheme_from_result(d: float, result: BoundResult, d_max: Optional[float] = None) -> Scheme:
    """Instantiate the checkerboard Scheme realizing a parameterized bound."""
    if result.params is None or "h" not in result.params:
        raise ValueError("result carries no checkerboard parameters")
    p = result.params
    return Scheme(
        d_min=d,
        d_max=d if d_max is None else d_max,
        h=p["h"],
        w=p["w"],
        k_period=p["k"],
        m_period=p["m"],
    )


def pure_scheme(d: float, grid_steps: int = 512) -> Scheme:
    """Optimized single-distance checkerboard for forbidden distance d."""
    return scheme_from_result(d, optimize_checkerboard(d, grid_steps))


def interval_upper_bound(d: float, c: float) -> BoundResult:
    """Checkerboard bound for the forbidden interval [d, cd].

    Fixes w = d and h = log 4; valid once the rectangle diameter is at
    most d and the stratum period floor(cd) covers the interval.  Returns
    an inapplicable result (never raises) outside that regime.
    """
    if c <= 1.0:
        raise ValueError("need c > 1")
    if d <= 0.0:
        raise ValueError("d must be positive")
    cd = c * d
    h = LOG4
    m = math.floor(cd)

    diam = rect_diameter(d, h)
    if diam > d + 1e-12:
        return BoundResult(
            0,
            BoundSource.INTERVAL,
            applicable=False,
            note=f"rect_diameter(d, log4) = {diam:.6g} exceeds d = {d:.6g}",
        )
    if m * h < cd:
        return BoundResult(
            0,
            BoundSource.INTERVAL,
            applicable=False,
            note=f"vertical period floor(cd)*log4 = {m * h:.6g} below cd = {cd:.6g}",
        )

    k = _guarded_ceil(
        math.exp(h) * math.sqrt((math.cosh(cd) - 1.0) / (math.cosh(d) - 1.0))
    )
    exact = (k + 1) * (m + 1)
    envelope = 2.0 * (2.0 * math.exp((cd - 1.0) / 2.0) + 1.0) * (cd + 1.0)
    if d >= 2.0 and exact > envelope:
        raise AssertionError(
            f"exact interval bound {exact} above analytic envelope {envelope:.6g}"
        )
    return BoundResult(
        exact,
        BoundSource.INTERVAL,
        params={"h": h, "w": d, "k": k, "m": m, "envelope": envelope},
    )


def interval_scheme(d: float, c: float) -> Scheme:
    """The Scheme behind interval_upper_bound (raises if inapplicable)."""
    result = interval_upper_bound(d, c)
    if not result.applicable:
        raise ValueError(f"interval checkerboard inapplicable: {result.note}")
    return scheme_from_result(d, result, d_max=c * d)


@dataclass(frozen=True)
class CliqueWitness:
    points: list[HPoint]
    d_min: float
    d_max: float
    pairwise_ok: bool = field(default=False)

    @property
    def n(self) -> int:
        return len(self.points)

    def as_dict(self) -> dict:
        return {
            "n": self.n,
            "dMin": self.d_min,
            "dMax": self.d_max,
            "pairwiseOk": self.pairwise_ok,
            "points": [[p.x, p.y] for p in self.points],
        }


def interval_clique_points(d: float, c: float, tol: float = 1e-9) -> CliqueWitness:
    """Points on a hyperbolic circle pairwise at distance in [d, cd].

    n = floor(2 pi / theta) points at angle steps theta on the circle of
    radius cd/2, where theta = 2 arcsin(sinh(d/2)/sinh(cd/2)) makes
    successive points exactly d apart; the circle diameter caps every
    chord at cd.
    """
    if c <= 1.0 or d <= 0.0:
        raise ValueError("need d > 0 and c > 1")
    radius = c * d / 2.0
    ratio = math.sinh(d / 2.0) / math.sinh(radius)
    if ratio >= 1.0:
        raise ValueError("chord angle undefined; c too close to 1")
    theta = 2.0 * math.asin(ratio)
    n = math.floor(2.0 * math.pi / theta)

    center = HPoint(0.0, 1.0)
    points = [geodesic_point(center, k * theta, radius) for k in range(n)]

    ok = True
    prev_chord = 0.0
    for k in range(1, n):
        # chord lengths grow with the central angle up to pi
        ang = k * theta
        chord = hyp_distance(points[0], points[k])
        if ang <= math.pi:
            if chord + tol < prev_chord:
                ok = False
            prev_chord = chord
    for a in range(n):
        for b in range(a + 1, n):
            dist = hyp_distance(points[a], points[b])
            if dist < d - tol * (1.0 + d) or dist > c * d + tol * (1.0 + c * d):
                ok = False
    return CliqueWitness(points, d, c * d, ok)
