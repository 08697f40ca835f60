"""Bergman metric from kernel models: exact-derivative metric values, path
lengths with per-decade increments, boundary-approach ratio sequences, and
kernel mass in boundary collars.

The metric is the square root of the complex Hessian of log K(z,z) applied to
the direction. Derivatives are assembled from differentiated basis vectors
(kernels are rational in basis values, stable near the boundary); a central
finite-difference route is kept as a cross-check.
"""

from __future__ import annotations

import math
from dataclasses import dataclass
from typing import Sequence

import numpy as np

from .hartogs import HartogsKernel, hartogs_diag
from .kernels import DomainError, KernelModel
from .quadrature import collar_nodes, pairwise_total


@dataclass(frozen=True)
class MetricValue:
    point: tuple[complex, ...]
    direction: tuple[complex, ...]
    value: float


@dataclass(frozen=True)
class PathLengthProfile:
    points: tuple
    lengths: tuple[float, ...]  # cumulative, L(0) = 0
    endpoint_regime: str  # "isolated" | "non_isolated" | "interior"
    decade_increments: dict[int, float]


@dataclass(frozen=True)
class BoundaryMassProfile:
    probes: tuple[complex, ...]
    rows: tuple[dict, ...]
    r_hat: float
    fit_residual: float


def _planar_hessian_log_k(model: KernelModel, z: complex) -> tuple[float, float]:
    e = model.ortho_eval(np.array([z]))[:, 0]
    d = model.ortho_deriv(np.array([z]))[:, 0]
    K = float(np.sum(np.abs(e) ** 2))
    if K <= 0:
        raise DomainError(f"kernel not positive at {z}")
    dK = complex(np.sum(d * np.conj(e)))
    ddK = float(np.sum(np.abs(d) ** 2))
    return (K * ddK - abs(dK) ** 2) / (K * K), K


def _hartogs_hessian_log_k(hk: HartogsKernel, z: complex, w: complex, need_w: bool):
    """2x2 complex Hessian of log K at (z,w) on the diagonal."""
    cs, Ks, dKs, ddKs = [], [], [], []
    for j, m in enumerate(hk.fiber_models):
        e = m.ortho_eval(np.array([z]))[:, 0]
        d = m.ortho_deriv(np.array([z]))[:, 0]
        cs.append((j + 1) / math.pi)
        Ks.append(float(np.sum(np.abs(e) ** 2)))
        dKs.append(complex(np.sum(d * np.conj(e))))
        ddKs.append(float(np.sum(np.abs(d) ** 2)))
    if need_w and hk.j_max < 1:
        raise ValueError("w-direction Hessian needs fiber index 1; build j_max >= 1")
    F = Fz = Fzz = Fw = Fww = Fzw = 0.0
    aw = abs(w)
    for j in range(hk.j_max + 1):
        wj = aw ** (2 * j)
        F += cs[j] * Ks[j] * wj
        Fz += cs[j] * dKs[j] * wj
        Fzz += cs[j] * ddKs[j] * wj
        if j >= 1:
            Fw += cs[j] * Ks[j] * j * w ** (j - 1) * np.conj(w) ** j
            Fww += cs[j] * Ks[j] * j * j * aw ** (2 * (j - 1))
            Fzw += cs[j] * dKs[j] * j * w**j * np.conj(w) ** (j - 1)
    if F <= 0:
        raise DomainError(f"kernel not positive at ({z}, {w})")
    H11 = (F * Fzz - abs(Fz) ** 2) / (F * F)
    H22 = (F * Fww - abs(Fw) ** 2) / (F * F)
    H12 = (F * Fzw - Fz * np.conj(Fw)) / (F * F)
    return H11, H22, H12, F


def metric_at(model, point, direction) -> MetricValue:
    """Metric value sqrt(Hess log K [direction, direction]) at the point.

    Planar models take complex point/direction; Hartogs kernels take pairs.
    """
    if isinstance(model, KernelModel):
        z = complex(point)
        X = complex(direction)
        model._require_member(z)
        form, _ = _planar_hessian_log_k(model, z)
        val = math.sqrt(max(form, 0.0)) * abs(X)
        return MetricValue((z,), (X,), val)
    hk: HartogsKernel = model
    z, w = complex(point[0]), complex(point[1])
    X1, X2 = complex(direction[0]), complex(direction[1])
    hk._require_member(z, w)
    need_w = not (w == 0 and X2 == 0)
    H11, H22, H12, _ = _hartogs_hessian_log_k(hk, z, w, need_w)
    form = (
        H11 * abs(X1) ** 2
        + H22 * abs(X2) ** 2
        + 2.0 * (H12 * X1 * np.conj(X2)).real
    )
    return MetricValue((z, w), (X1, X2), math.sqrt(max(float(form), 0.0)))


def metric_at_fd(model, point, direction, step: float = 1e-4) -> MetricValue:
    """Same quantity via central differences of log K (cross-check route)."""

    if isinstance(model, KernelModel):
        z = complex(point)
        X = complex(direction)

        def g(p: complex) -> float:
            return math.log(float(model.kernel_diag(np.array([p]))[0]))

        lap = (
            g(z + step) + g(z - step) + g(z + 1j * step) + g(z - 1j * step) - 4 * g(z)
        ) / (step * step)
        form = lap / 4.0
        return MetricValue((z,), (X,), math.sqrt(max(form, 0.0)) * abs(X))

    hk: HartogsKernel = model
    z, w = complex(point[0]), complex(point[1])
    X1, X2 = complex(direction[0]), complex(direction[1])

    def g(dz: complex, dw: complex) -> float:
        return math.log(hartogs_diag(hk, z + dz, w + dw).value.real)

    def second(a: int, b: int) -> float:
        # real coordinates: 0 x1, 1 y1, 2 x2, 3 y2
        delta = [0j, 0j]
        da = (step if a in (0, 2) else 1j * step)
        db = (step if b in (0, 2) else 1j * step)
        ia, ib = a // 2, b // 2
        if a == b:
            plus = [0j, 0j]
            plus[ia] += da
            minus = [0j, 0j]
            minus[ia] -= da
            return (g(*plus) - 2 * g(0j, 0j) + g(*minus)) / step**2
        pp = [0j, 0j]; pp[ia] += da; pp[ib] += db
        pm = [0j, 0j]; pm[ia] += da; pm[ib] -= db
        mp = [0j, 0j]; mp[ia] -= da; mp[ib] += db
        mm = [0j, 0j]; mm[ia] -= da; mm[ib] -= db
        return (g(*pp) - g(*pm) - g(*mp) + g(*mm)) / (4 * step**2)

    def hess(ca: int, cb: int) -> complex:
        xa, ya = 2 * ca, 2 * ca + 1
        xb, yb = 2 * cb, 2 * cb + 1
        return 0.25 * (
            second(xa, xb) + second(ya, yb) + 1j * (second(xa, yb) - second(ya, xb))
        )

    H11 = hess(0, 0).real
    H22 = hess(1, 1).real
    H12 = hess(0, 1)
    form = (
        H11 * abs(X1) ** 2 + H22 * abs(X2) ** 2 + 2.0 * (H12 * X1 * np.conj(X2)).real
    )
    return MetricValue((z, w), (X1, X2), math.sqrt(max(float(form), 0.0)))


# ---------------------------------------------------------------------------
# Path lengths and the two boundary-approach regimes
# ---------------------------------------------------------------------------


def path_length(
    model,
    points: Sequence,
    segment_decades: Sequence[int] | None = None,
    endpoint_regime: str = "interior",
) -> PathLengthProfile:
    """Composite trapezoidal Bergman length along the sampled path."""
    pts = list(points)
    if len(pts) < 2:
        return PathLengthProfile(tuple(pts), (0.0,) * len(pts), endpoint_regime, {})
    lengths = [0.0]
    increments: dict[int, float] = {}
    for i in range(len(pts) - 1):
        p, q = pts[i], pts[i + 1]
        if isinstance(model, KernelModel):
            d = complex(q) - complex(p)
        else:
            d = (complex(q[0]) - complex(p[0]), complex(q[1]) - complex(p[1]))
        b0 = metric_at(model, p, d).value
        b1 = metric_at(model, q, d).value
        seg = 0.5 * (b0 + b1)
        lengths.append(lengths[-1] + seg)
        if segment_decades is not None:
            k = int(segment_decades[i])
            increments[k] = increments.get(k, 0.0) + seg
    return PathLengthProfile(tuple(pts), tuple(lengths), endpoint_regime, increments)


def dyadic_approach_samples(k_min: int = 1, k_max: int = 7, per_decade: int = 8):
    """Scales eps_m sweeping [2^-k_max-1, 2^-k_min] geometrically, with the
    decade label of each segment; decade k covers [2^-(k+1), 2^-k]."""
    if not (1 <= k_min <= k_max <= 12):
        raise ValueError("decades must satisfy 1 <= k_min <= k_max <= 12")
    m = np.arange(per_decade * (k_max - k_min + 1) + 1)
    eps = 2.0 ** (-(k_min + m / per_decade))
    decades = (k_min + m[:-1] // per_decade).astype(int)
    return eps, decades


def puncture_approach_path(k_min: int = 1, k_max: int = 7, per_decade: int = 8):
    """(z, 0) samples with z real sliding dyadically into the puncture at 0."""
    eps, decades = dyadic_approach_samples(k_min, k_max, per_decade)
    pts = [(complex(e), 0j) for e in eps]
    return pts, decades, "isolated"


def circle_approach_path(
    target: complex = -1.0 + 0j, k_min: int = 1, k_max: int = 7, per_decade: int = 8
):
    """(z, 0) samples approaching a circle boundary point radially."""
    eps, decades = dyadic_approach_samples(k_min, k_max, per_decade)
    target = complex(target)
    unit = target / abs(target)
    pts = [((1.0 - e) * target, 0j) for e in eps] if abs(abs(target) - 1.0) < 1e-12 else [
        (target - e * unit, 0j) for e in eps
    ]
    return pts, decades, "non_isolated"


# ---------------------------------------------------------------------------
# Kobayashi-criterion ratios
# ---------------------------------------------------------------------------


def kobayashi_ratio(
    model: KernelModel, coeffs: Sequence[complex], points: Sequence[complex]
) -> dict:
    """Rows (k, |f(y_k)|^2 / K(y_k, y_k)); the PASS flag is a trend criterion:
    the tail half decreases monotonically and sits a factor >= 10 below the
    first value."""
    pts = np.asarray(points, dtype=complex)
    fvals = model.eval_coeffs(coeffs, pts)
    kvals = model.kernel_diag(pts)
    ratios = np.abs(fvals) ** 2 / kvals
    rows = [
        {"k": i, "y": complex(y), "ratio": float(r)}
        for i, (y, r) in enumerate(zip(pts, ratios))
    ]
    n = len(ratios)
    if n >= 4:
        tail = ratios[n // 2 :]
        decreasing = bool(np.all(np.diff(tail) < 0))
        passed = decreasing and bool(np.max(tail) <= ratios[0] / 10.0)
    else:
        passed = False
    return {"rows": rows, "pass": passed}


# ---------------------------------------------------------------------------
# Boundary mass profiles
# ---------------------------------------------------------------------------


def boundary_mass(
    model: KernelModel,
    probes: Sequence[complex],
    ts: Sequence[float],
    flag_fraction: float = 0.25,
) -> BoundaryMassProfile:
    """nu_E(t) = sup over probes of the squared weighted kernel mass in the
    collar {0 < delta < t}, with a least-squares exponent fit of log nu
    against log t. Rows where the collar ambiguity bound dominates are
    flagged (and excluded from the fit)."""
    probes = tuple(complex(w) for w in probes)
    for w in probes:
        model._require_member(w)
    ts = sorted(set(float(t) for t in ts), reverse=True)
    if len(ts) < 2:
        raise ValueError("need at least two collar widths for the fit")
    rows = []
    for t in ts:
        z, delta, wts, ambiguous = collar_nodes(model.decomp, t)
        dens = model.weight.density_from_delta(delta) * wts
        best = 0.0
        gmax = 0.0
        for w in probes:
            col = np.abs(model.kernel_column(z, w)) ** 2
            val = float(np.sum(col * dens))
            gmax = max(gmax, float(np.max(col * model.weight.density_from_delta(delta))) if len(col) else 0.0)
            best = max(best, val)
        bound = ambiguous * gmax
        rows.append({"t": t, "nu": best, "bound": bound, "flagged": bound > flag_fraction * best})
    good = [(r["t"], r["nu"]) for r in rows if not r["flagged"] and r["nu"] > 0]
    if len(good) >= 2:
        lt = np.log([g[0] for g in good])
        ln = np.log([g[1] for g in good])
        slope, intercept = np.polyfit(lt, ln, 1)
        resid = float(np.sqrt(np.mean((ln - (slope * lt + intercept)) ** 2)))
    else:
        slope, resid = math.nan, math.nan
    return BoundaryMassProfile(probes, tuple(rows), float(slope), resid)
