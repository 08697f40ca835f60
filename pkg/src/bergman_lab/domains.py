"""Planar domains (disc minus closed discs, optional punctures) with exact
signed boundary distance, shrinking neighborhood families, and the Hartogs /
tube domains built over them.

All types are immutable after construction and every operation is pure, so
instances can be shared freely across threads.
"""

from __future__ import annotations

import json
import math
from dataclasses import dataclass, field
from typing import Callable, Iterable, NamedTuple, Sequence

import numpy as np

from .backend import sd_batch


class ScaleUnderflowError(ValueError):
    """A family parameter underflows binary64."""


class DegenerateAnnulusError(ValueError):
    """The probe annulus [2r, sqrt(2r)] is empty (r >= 1/2)."""


class NearestComponent(NamedTuple):
    kind: str  # "outer" | "hole" | "puncture"
    index: int | None


@dataclass(frozen=True)
class SignedDistanceValue:
    """Distance to the nearest boundary component, positive inside."""

    value: float
    nearest_component: NearestComponent


@dataclass(frozen=True)
class PlanarDomain:
    """Open disc minus finitely many closed discs, minus listed punctures."""

    outer_center: complex = 0j
    outer_radius: float = 1.0
    holes: tuple[tuple[complex, float], ...] = ()
    punctures: tuple[complex, ...] = ()

    def __post_init__(self):
        if not self.outer_radius > 0:
            raise ValueError("outer_radius must be positive")
        object.__setattr__(self, "holes", tuple((complex(c), float(r)) for c, r in self.holes))
        object.__setattr__(self, "punctures", tuple(complex(p) for p in self.punctures))
        for c, r in self.holes:
            if not r > 0:
                raise ValueError("hole radius must be positive (use punctures for points)")
            if abs(c - self.outer_center) + r >= self.outer_radius:
                raise ValueError(f"hole at {c} not contained in the open outer disc")
        for i, (c, r) in enumerate(self.holes):
            for c2, r2 in self.holes[i + 1 :]:
                if abs(c - c2) <= r + r2:
                    raise ValueError(f"hole closures at {c} and {c2} intersect")
        for p in self.punctures:
            if abs(p - self.outer_center) >= self.outer_radius:
                raise ValueError(f"puncture {p} outside the outer disc")
            for c, r in self.holes:
                if abs(p - c) <= r:
                    raise ValueError(f"puncture {p} inside a hole closure")

    # -- packed arrays for the backend kernel ------------------------------
    @property
    def _packed(self):
        hre = np.array([c.real for c, _ in self.holes], dtype=np.float64)
        him = np.array([c.imag for c, _ in self.holes], dtype=np.float64)
        hr = np.array([r for _, r in self.holes], dtype=np.float64)
        pre = np.array([p.real for p in self.punctures], dtype=np.float64)
        pim = np.array([p.imag for p in self.punctures], dtype=np.float64)
        return (
            self.outer_center.real,
            self.outer_center.imag,
            self.outer_radius,
            hre,
            him,
            hr,
            pre,
            pim,
        )

    def contains(self, z: complex) -> bool:
        return signed_distance(self, z).value > 0.0

    def to_json(self) -> str:
        doc = {
            "outer": {
                "center": [self.outer_center.real, self.outer_center.imag],
                "radius": self.outer_radius,
            },
            "holes": [
                {"center": [c.real, c.imag], "radius": r} for c, r in self.holes
            ],
            "punctures": [[p.real, p.imag] for p in self.punctures],
        }
        return json.dumps(doc)

    @staticmethod
    def from_json(text: str | dict) -> "PlanarDomain":
        doc = json.loads(text) if isinstance(text, str) else text
        outer = doc["outer"]
        return PlanarDomain(
            outer_center=complex(outer["center"][0], outer["center"][1]),
            outer_radius=float(outer["radius"]),
            holes=tuple(
                (complex(h["center"][0], h["center"][1]), float(h["radius"]))
                for h in doc.get("holes", [])
            ),
            punctures=tuple(complex(p[0], p[1]) for p in doc.get("punctures", [])),
        )


def signed_distance(domain: PlanarDomain, z: complex) -> SignedDistanceValue:
    """Exact signed distance: min over boundary components, positive inside."""
    z = complex(z)
    best = domain.outer_radius - abs(z - domain.outer_center)
    comp = NearestComponent("outer", None)
    for i, (c, r) in enumerate(domain.holes):
        d = abs(z - c) - r
        if d < best:
            best, comp = d, NearestComponent("hole", i)
    for i, p in enumerate(domain.punctures):
        d = abs(z - p)
        if d < best:
            best, comp = d, NearestComponent("puncture", i)
    return SignedDistanceValue(best, comp)


def signed_distance_batch(domain: PlanarDomain, re, im):
    """Backend-accelerated signed distance over coordinate arrays."""
    re = np.ascontiguousarray(re, dtype=np.float64)
    im = np.ascontiguousarray(im, dtype=np.float64)
    return sd_batch(re, im, *domain._packed)


def membership_batch(domain: PlanarDomain, re, im):
    vals, _ = signed_distance_batch(domain, re, im)
    return vals > 0.0


def project_to_boundary(domain: PlanarDomain, z: complex) -> complex:
    """Project onto the nearest boundary component (exact for circles)."""
    z = complex(z)
    comp = signed_distance(domain, z).nearest_component
    if comp.kind == "outer":
        c, r = domain.outer_center, domain.outer_radius
    elif comp.kind == "hole":
        c, r = domain.holes[comp.index]
    else:
        return domain.punctures[comp.index]
    if z == c:
        return c + r
    return c + r * (z - c) / abs(z - c)


def boundary_samples(domain: PlanarDomain, per_component: int = 64) -> np.ndarray:
    """Evenly spaced points on every circle component plus the punctures."""
    pts = []
    angles = 2.0 * np.pi * np.arange(per_component) / per_component
    circles = [(domain.outer_center, domain.outer_radius)] + list(domain.holes)
    for c, r in circles:
        pts.append(c + r * np.exp(1j * angles))
    if domain.punctures:
        pts.append(np.array(domain.punctures, dtype=complex))
    return np.concatenate(pts)


def random_interior_points(domain: PlanarDomain, n: int, rng) -> np.ndarray:
    """Rejection-sample n interior points (deterministic for a seeded rng)."""
    out = np.empty(n, dtype=complex)
    have = 0
    c, R = domain.outer_center, domain.outer_radius
    while have < n:
        m = max(64, 2 * (n - have))
        cand = c + (rng.uniform(-R, R, m) + 1j * rng.uniform(-R, R, m))
        vals, _ = signed_distance_batch(domain, cand.real, cand.imag)
        good = cand[vals > 1e-9]
        take = min(len(good), n - have)
        out[have : have + take] = good[:take]
        have += take
    return out


# ---------------------------------------------------------------------------
# Neighborhood families
# ---------------------------------------------------------------------------


@dataclass(frozen=True)
class NeighborhoodFamily:
    """Shrinking neighborhoods of closure(base): outer radius grows by
    grow(t), hole radii shrink by shrink(t); holes whose shrunk radius is
    <= 0 are removed, punctures are always filled."""

    base: PlanarDomain
    schedule: tuple[float, ...]
    grow: Callable[[float], float] = field(default=lambda t: t)
    shrink: Callable[[float], float] = field(default=lambda t: t)

    def __post_init__(self):
        sched = tuple(float(t) for t in self.schedule)
        if not sched:
            raise ValueError("empty schedule")
        if any(t <= 0 for t in sched):
            raise ValueError("schedule values must be positive")
        if any(a <= b for a, b in zip(sched, sched[1:])):
            raise ValueError("schedule must be strictly decreasing")
        object.__setattr__(self, "schedule", sched)
        for t in sched:
            if not (self.grow(t) > 0 and self.shrink(t) > 0):
                raise ValueError(f"growth/shrink must be positive at t={t}")

    def member(self, t: float) -> PlanarDomain:
        g, s = self.grow(t), self.shrink(t)
        holes = tuple(
            (c, r - s) for c, r in self.base.holes if r - s > 0.0
        )
        return PlanarDomain(
            outer_center=self.base.outer_center,
            outer_radius=self.base.outer_radius + g,
            holes=holes,
            punctures=(),
        )

    def members(self) -> Iterable[tuple[float, PlanarDomain]]:
        for t in self.schedule:
            yield t, self.member(t)


def zalcman_paper_family(j_max: int) -> tuple[PlanarDomain, NeighborhoodFamily]:
    """Unit disc minus holes at x_l = 2^-l with r_l = 2^-3l, l <= j_max, and
    the neighborhood family at t_j = 2^-j whose enlargement/shrink is
    2^(-2^(j/3))."""
    if j_max < 1:
        raise ValueError("j_max must be >= 1")

    def shrink_of(t: float) -> float:
        return 2.0 ** (-(2.0 ** (-math.log2(t) / 3.0)))

    smallest = shrink_of(2.0 ** (-j_max))
    if smallest == 0.0:
        raise ScaleUnderflowError(
            f"scale underflow: 2^-2^(j/3) vanishes in binary64 at j={j_max}"
        )
    base = PlanarDomain(
        outer_center=0j,
        outer_radius=1.0,
        holes=tuple((2.0 ** (-l) + 0j, 2.0 ** (-3 * l)) for l in range(1, j_max + 1)),
    )
    schedule = tuple(2.0 ** (-j) for j in range(1, j_max + 1))
    family = NeighborhoodFamily(base, schedule, grow=shrink_of, shrink=shrink_of)
    return base, family


def scaled_zalcman(n_holes: int = 3) -> PlanarDomain:
    """Quadrature-friendly relative of the dyadic hole chain: centers 2^-l,
    radii 2^-l/5 (>= 1e-2 for n_holes <= 3)."""
    if not 1 <= n_holes <= 5:
        raise ValueError("n_holes must be in 1..5")
    return PlanarDomain(
        outer_center=0j,
        outer_radius=1.0,
        holes=tuple((2.0 ** (-l) + 0j, 2.0 ** (-l) / 5.0) for l in range(1, n_holes + 1)),
    )


def neighborhood_gap_profile(
    family: NeighborhoodFamily, samples: Sequence[complex]
) -> list[dict]:
    """Per scheduled t: max and min of the member's signed distance over the
    given boundary samples of the base (projected; must lie within 1e-12)."""
    if len(samples) == 0:
        raise ValueError("empty sample list")
    proj = np.array([project_to_boundary(family.base, z) for z in samples], dtype=complex)
    for z, p in zip(samples, proj):
        if abs(complex(z) - p) > 1e-12:
            raise ValueError(f"sample {z} is not on the base boundary (within 1e-12)")
    rows = []
    for t, member in family.members():
        vals, _ = signed_distance_batch(member, proj.real, proj.imag)
        rows.append({"t": t, "Lambda_hat": float(vals.max()), "lambda_hat": float(vals.min())})
    return rows


# ---------------------------------------------------------------------------
# Disc-attachment distance bound
# ---------------------------------------------------------------------------


def _arc_distance(z: complex, center: complex, radius: float, gap_angle: float, gap_width: float) -> float:
    """Distance from z to the circle arc obtained by removing the open
    angular window of half-width gap_width around gap_angle."""
    if gap_width >= math.pi:
        return math.inf
    phi = math.atan2((z - center).imag, (z - center).real)
    sep = abs((phi - gap_angle + math.pi) % (2 * math.pi) - math.pi)
    if sep >= gap_width:
        return abs(abs(z - center) - radius)
    e1 = center + radius * complex(math.cos(gap_angle + gap_width), math.sin(gap_angle + gap_width))
    e2 = center + radius * complex(math.cos(gap_angle - gap_width), math.sin(gap_angle - gap_width))
    return min(abs(z - e1), abs(z - e2))


def dk_bound_check(
    domain: PlanarDomain, z0: complex, r_k: float, samples: int = 512
) -> dict:
    """Attach the disc of radius r_k at boundary point z0 and compare boundary
    distances on D inside the probe annulus 2*r_k <= |z - z0| <= sqrt(2*r_k).

    The attached circle is retained in full as a boundary component of the
    union (its points realize the constructive upper bounds), so the reported
    ratio is the certified one; PASS iff max ratio <= 3 + 1e-9.
    """
    z0 = complex(z0)
    if r_k >= 0.5:
        raise DegenerateAnnulusError(f"degenerate annulus: r_k={r_k} >= 1/2")
    if r_k <= 0:
        raise ValueError("r_k must be positive")
    sd0 = signed_distance(domain, z0)
    if abs(sd0.value) > 1e-9:
        raise ValueError(f"z0={z0} is not a boundary point (signed distance {sd0.value})")
    own = sd0.nearest_component

    # the attachment may interact only with z0's own component
    others = []
    circles = [("outer", None, domain.outer_center, domain.outer_radius)]
    circles += [("hole", i, c, r) for i, (c, r) in enumerate(domain.holes)]
    for kind, idx, c, r in circles:
        if (kind, idx) == (own.kind, own.index):
            continue
        gap = abs(abs(z0 - c) - r)
        if gap <= r_k:
            raise ValueError("r_k reaches another boundary component")
        others.append(("circle", c, r))
    for i, p in enumerate(domain.punctures):
        if (own.kind, own.index) == ("puncture", i):
            continue
        if abs(z0 - p) <= r_k:
            raise ValueError("r_k reaches another boundary component")
        others.append(("point", p, 0.0))

    own_piece = None
    if own.kind != "puncture":
        c, r = (
            (domain.outer_center, domain.outer_radius)
            if own.kind == "outer"
            else domain.holes[own.index]
        )
        if r_k < 2.0 * r:
            gap_angle = math.atan2((z0 - c).imag, (z0 - c).real)
            gap_width = 2.0 * math.asin(r_k / (2.0 * r))
            own_piece = (c, r, gap_angle, gap_width)

    def delta_union(z: complex) -> float:
        best = abs(abs(z - z0) - r_k)  # the attached circle, kept in full
        for kind, c, r in others:
            d = abs(z - c) if kind == "point" else abs(abs(z - c) - r)
            best = min(best, d)
        if own_piece is not None:
            best = min(best, _arc_distance(z, *own_piece))
        return best

    r_in, r_out = 2.0 * r_k, math.sqrt(2.0 * r_k)
    n_r = max(4, int(math.ceil(math.sqrt(samples / 2.0))))
    n_a = max(8, 2 * n_r)
    radii = np.geomspace(r_in, r_out, n_r)
    angles = 2.0 * np.pi * np.arange(n_a) / n_a
    pts = (z0 + np.outer(radii, np.exp(1j * angles))).ravel()
    vals, _ = signed_distance_batch(domain, pts.real, pts.imag)
    keep = vals > 1e-12
    pts, deltas = pts[keep], vals[keep]
    if len(pts) == 0:
        raise ValueError("no sample points of D in the probe annulus")

    rows = []
    max_ratio = 0.0
    for z, d in zip(pts, deltas):
        dk = delta_union(complex(z))
        ratio = dk / d
        case = 1 if d < abs(z - z0) - r_k else 2
        rows.append({"z": complex(z), "delta": float(d), "delta_k": float(dk), "ratio": float(ratio), "case": case})
        max_ratio = max(max_ratio, ratio)
    return {
        "z0": z0,
        "r_k": r_k,
        "max_ratio": float(max_ratio),
        "pass": bool(max_ratio <= 3.0 + 1e-9),
        "rows": rows,
    }


# ---------------------------------------------------------------------------
# Hartogs and tube domains over a planar base
# ---------------------------------------------------------------------------


@dataclass(frozen=True)
class HartogsDomain:
    """(z, w) with z in base and |w| < delta_base(z)^alpha."""

    base: PlanarDomain
    alpha: float

    def __post_init__(self):
        if not self.alpha > 0:
            raise ValueError("alpha must be positive")

    def fiber_radius(self, z: complex) -> float:
        d = signed_distance(self.base, z).value
        return d**self.alpha if d > 0 else 0.0

    def contains(self, z: complex, w: complex) -> bool:
        d = signed_distance(self.base, z).value
        return d > 0 and abs(w) < d**self.alpha


@dataclass(frozen=True)
class TubeDomain:
    """x + iy with x in the real base and k |y|^2 < delta(x)^2."""

    base_real: PlanarDomain
    k: float

    def __post_init__(self):
        if not self.k > 0:
            raise ValueError("k must be positive")


def tube_membership(tube: TubeDomain, x: Sequence[float], y: Sequence[float]) -> bool:
    zx = complex(x[0], x[1])
    d = signed_distance(tube.base_real, zx).value
    if d <= 0:
        return False
    return tube.k * (y[0] ** 2 + y[1] ** 2) < d * d
