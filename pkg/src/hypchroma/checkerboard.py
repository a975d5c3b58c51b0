"""Horocyclic checkerboard colorings of the half-plane.

The plane is cut into horocyclic strata of height h (bands e^{jh} <= y <
e^{(j+1)h}), each stratum into half-open rectangles whose base endpoints
are at hyperbolic distance w.  Colors cycle with horizontal period
kPeriod+1 inside a stratum and vertical palette period mPeriod+1 across
strata, giving (kPeriod+1)(mPeriod+1) colors in total.  A Scheme is valid
for forbidden distances [dMin, dMax] when no two same-colored points can
realize a distance in that interval; validate_scheme checks the three
inequalities behind that claim and verify_by_sampling attacks it
empirically with exact distance-t pairs.
"""

from __future__ import annotations

import csv
import json
import math
from dataclasses import dataclass, field
from typing import Optional

import numpy as np

from .hypgeom import HPoint, acosh1p, point_at_distance

__all__ = [
    "Scheme",
    "RectIndex",
    "Color",
    "ValidationCheck",
    "ValidationReport",
    "ViolationReport",
    "rect_of_point",
    "color_of_point",
    "rect_diameter",
    "upper_corner_distance",
    "same_stratum_separation",
    "validate_scheme",
    "verify_by_sampling",
    "export_color_map_csv",
]

#: tolerance used when checking scheme inequalities that may hold with equality
CHECK_TOL = 1e-9

#: hyperbolic nudge used to screen floating-point boundary artifacts
PERTURB = 1e-7


@dataclass(frozen=True)
class RectIndex:
    i: int  # horizontal index within the stratum
    j: int  # stratum index


@dataclass(frozen=True)
class Color:
    horiz: int
    vert: int

    def index(self, k_period: int) -> int:
        return self.horiz + (k_period + 1) * self.vert


@dataclass(frozen=True)
class Scheme:
    """Parameters of one checkerboard coloring.

    dMin/dMax are the forbidden-distance interval ends (equal in the pure
    single-distance problem).  r = sqrt(2(cosh w - 1)) is the Euclidean
    base width of the rectangle whose base has hyperbolic length w.
    """

    d_min: float
    d_max: float
    h: float
    w: float
    k_period: int
    m_period: int
    r: float = field(init=False)

    def __post_init__(self):
        if not (0.0 < self.d_min <= self.d_max):
            raise ValueError("need 0 < d_min <= d_max")
        if self.h <= 0.0 or self.w <= 0.0:
            raise ValueError("h and w must be positive")
        if self.k_period < 2 or self.m_period < 1:
            raise ValueError("need k_period >= 2 and m_period >= 1")
        object.__setattr__(self, "r", math.sqrt(2.0 * (math.cosh(self.w) - 1.0)))

    @property
    def palette_size(self) -> int:
        return (self.k_period + 1) * (self.m_period + 1)

    def as_dict(self) -> dict:
        return {
            "dMin": self.d_min,
            "dMax": self.d_max,
            "h": self.h,
            "w": self.w,
            "r": self.r,
            "kPeriod": self.k_period,
            "mPeriod": self.m_period,
            "palette": self.palette_size,
        }


def rect_diameter(w: float, h: float) -> float:
    """Diameter of the closed rectangle: max of base and diagonal lengths."""
    if w <= 0.0 or h <= 0.0:
        raise ValueError("w, h must be positive")
    eh = math.exp(h)
    diag = acosh1p((2.0 * (math.cosh(w) - 1.0) + (eh - 1.0) ** 2) / (2.0 * eh))
    return max(w, diag)


def upper_corner_distance(w: float, h: float) -> float:
    """Distance between the two upper corners (shorter than the base w)."""
    return acosh1p((math.cosh(w) - 1.0) / math.exp(2.0 * h))


def same_stratum_separation(w: float, h: float, gap: int) -> float:
    """Distance between rectangle closures in one stratum.

    gap counts the full rectangles strictly between the two; adjacent
    closures (gap = 0) touch.  Realized by the facing upper corners.
    """
    if gap < 0:
        raise ValueError("gap must be >= 0")
    return acosh1p(gap * gap * (math.cosh(w) - 1.0) / math.exp(2.0 * h))


def _stratum_of(y: float, h: float) -> int:
    j = math.floor(math.log(y) / h)
    # floor on the log can be off by one ulp; settle against exp directly
    if y < math.exp(j * h):
        j -= 1
    elif y >= math.exp((j + 1) * h):
        j += 1
    return j


def rect_of_point(s: Scheme, p: HPoint) -> RectIndex:
    """Index of the half-open rectangle containing p.

    Left and bottom boundaries belong to the rectangle, right and top do
    not (so the plane is partitioned exactly).
    """
    j = _stratum_of(p.y, s.h)
    base = s.r * math.exp(j * s.h)
    i = math.floor(p.x / base)
    if p.x < i * base:
        i -= 1
    elif p.x >= (i + 1) * base:
        i += 1
    return RectIndex(i, j)


def color_of_point(s: Scheme, p: HPoint) -> Color:
    rect = rect_of_point(s, p)
    return Color(rect.i % (s.k_period + 1), rect.j % (s.m_period + 1))


@dataclass(frozen=True)
class ValidationCheck:
    name: str
    lhs: float
    rhs: float
    ok: bool


@dataclass(frozen=True)
class ValidationReport:
    checks: list[ValidationCheck]

    @property
    def ok(self) -> bool:
        return all(c.ok for c in self.checks)

    def as_dict(self) -> dict:
        return {
            "ok": self.ok,
            "checks": [
                {"name": c.name, "lhs": c.lhs, "rhs": c.rhs, "ok": c.ok} for c in self.checks
            ],
        }


def validate_scheme(s: Scheme) -> ValidationReport:
    """Check every Scheme invariant; failures are reported, not raised."""

    def le(name, lhs, rhs):
        return ValidationCheck(name, lhs, rhs, lhs <= rhs + CHECK_TOL * max(1.0, abs(rhs)))

    k_needed = math.exp(s.h) * math.sqrt((math.cosh(s.d_max) - 1.0) / (math.cosh(s.w) - 1.0))
    checks = [
        ValidationCheck(
            "r_consistent",
            s.r,
            math.sqrt(2.0 * (math.cosh(s.w) - 1.0)),
            abs(s.r - math.sqrt(2.0 * (math.cosh(s.w) - 1.0))) <= 1e-12,
        ),
        le("horizontal_k", k_needed, float(s.k_period)),
        le("vertical_m", s.d_max, s.m_period * s.h),
        le("rect_diameter", rect_diameter(s.w, s.h), s.d_min),
    ]
    return ValidationReport(checks)


@dataclass(frozen=True)
class ViolationReport:
    scheme: Scheme
    samples: int
    seed: int
    count: int
    exemplars: list[dict]

    @property
    def ok(self) -> bool:
        return self.count == 0

    def as_dict(self) -> dict:
        return {
            "scheme": self.scheme.as_dict(),
            "samples": self.samples,
            "seed": self.seed,
            "violations": self.exemplars,
            "count": self.count,
        }

    def to_json(self, path) -> None:
        with open(path, "w") as fh:
            json.dump(self.as_dict(), fh, indent=2)


_BLOCK = 1 << 16


def _color_arrays(s: Scheme, x, y):
    """Vectorized color_of_point over coordinate arrays."""
    j = np.floor(np.log(y) / s.h).astype(np.int64)
    j = np.where(y < np.exp(j * s.h), j - 1, j)
    j = np.where(y >= np.exp((j + 1) * s.h), j + 1, j)
    base = s.r * np.exp(j * s.h)
    i = np.floor(x / base).astype(np.int64)
    i = np.where(x < i * base, i - 1, i)
    i = np.where(x >= (i + 1) * base, i + 1, i)
    return i % (s.k_period + 1), j % (s.m_period + 1)


def _confirm_violation(s: Scheme, px, py, phi, t) -> bool:
    """Re-check a candidate same-color pair after a tiny hyperbolic nudge.

    Screens pairs produced by points sitting on rectangle boundaries up
    to floating-point noise; a genuine violation survives the nudge.
    """
    p = point_at_distance(HPoint(px, py), 0.123456, PERTURB)
    q = point_at_distance(p, phi, t)
    return color_of_point(s, p) == color_of_point(s, q)


def verify_by_sampling(
    s: Scheme,
    n_samples: int,
    seed: int,
    *,
    max_exemplars: int = 100,
    jobs: int = 1,
    strata_span: Optional[int] = None,
    allow_invalid: bool = False,
) -> ViolationReport:
    """Empirical falsifier: sample exact forbidden-distance pairs.

    Each sample is (p, phi, t) with p uniform in a window spanning three
    full palette periods of strata, phi uniform in [0, 2pi), and t = dMin
    (pure case) or uniform in [dMin, dMax] (interval case); the partner is
    q = point_at_distance(p, phi, t).  Same-colored pairs are re-checked
    with a 1e-7 perturbation and reported.  Deterministic given seed, and
    independent of how many worker blocks are used.

    Invalid schemes are refused unless allow_invalid is set (used by
    mutation tests that want to watch a broken scheme fail).
    """
    report = validate_scheme(s)
    if not report.ok and not allow_invalid:
        bad = [c.name for c in report.checks if not c.ok]
        raise ValueError(f"scheme fails validation: {', '.join(bad)}")
    if n_samples < 0:
        raise ValueError("n_samples must be >= 0")

    span = 3 * (s.m_period + 1) if strata_span is None else strata_span
    interval = s.d_max > s.d_min

    n_blocks = (n_samples + _BLOCK - 1) // _BLOCK
    seeds = np.random.SeedSequence(seed).spawn(n_blocks) if n_blocks else []

    def run_block(b: int) -> list[dict]:
        m = min(_BLOCK, n_samples - b * _BLOCK)
        rng = np.random.default_rng(seeds[b])
        j = rng.integers(0, span + 1, size=m)
        ylo = np.exp(j * s.h)
        y = ylo + rng.random(m) * (np.exp((j + 1) * s.h) - ylo)
        x = rng.random(m) * (3.0 * (s.k_period + 1) * s.r * ylo)
        phi = rng.random(m) * (2.0 * math.pi)
        if interval:
            t = s.d_min + rng.random(m) * (s.d_max - s.d_min)
        else:
            t = np.full(m, s.d_min)

        sh = np.sinh(t)
        qx = x + y * sh * np.cos(phi)
        qy = y * (np.cosh(t) + sh * np.sin(phi))

        ph, pv = _color_arrays(s, x, y)
        qh, qv = _color_arrays(s, qx, qy)
        hits = np.flatnonzero((ph == qh) & (pv == qv))
        found = []
        for idx in hits:
            if not _confirm_violation(s, x[idx], y[idx], phi[idx], t[idx]):
                continue
            found.append(
                {
                    "p": [float(x[idx]), float(y[idx])],
                    "q": [float(qx[idx]), float(qy[idx])],
                    "t": float(t[idx]),
                    "color": [int(ph[idx]), int(pv[idx])],
                }
            )
        return found

    # blocks are fixed-size and seeded independently of the worker count,
    # so the aggregated report never depends on jobs
    if jobs > 1 and n_blocks > 1:
        from concurrent.futures import ThreadPoolExecutor

        with ThreadPoolExecutor(max_workers=jobs) as pool:
            per_block = list(pool.map(run_block, range(n_blocks)))
    else:
        per_block = [run_block(b) for b in range(n_blocks)]

    count = sum(len(f) for f in per_block)
    exemplars = [v for f in per_block for v in f][:max_exemplars]
    return ViolationReport(s, n_samples, seed, count, exemplars)


def export_color_map_csv(s: Scheme, path, nx: int = 200, ny: int = 100) -> None:
    """Dump a grid of colored sample points: x,y,horiz,vert,colorIndex."""
    xs = np.linspace(0.0, (s.k_period + 1) * s.r, nx, endpoint=False)
    ys = np.exp(np.linspace(0.0, (s.m_period + 1) * s.h, ny, endpoint=False))
    with open(path, "w", newline="") as fh:
        writer = csv.writer(fh)
        writer.writerow(["x", "y", "horiz", "vert", "colorIndex"])
        for y in ys:
            for x in xs:
                c = color_of_point(s, HPoint(float(x), float(y)))
                writer.writerow([f"{x:.12g}", f"{y:.12g}", c.horiz, c.vert, c.index(s.k_period)])
