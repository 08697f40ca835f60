"""Analytic side conditions as checkable procedures: the neighborhood-gap
integral classifier, the beta < alpha/2 gate, plurisubharmonicity of the tube
defining function via finite-difference Levi forms, and the bounded-index
falsifier for exhaustion functions vanishing faster than linearly.
"""

from __future__ import annotations

import math
from dataclasses import dataclass
from typing import Callable, Sequence

import numpy as np

from .domains import PlanarDomain, TubeDomain, signed_distance, tube_membership

RIDGE_KINDS = ("outer", "hole", "puncture")


# ---------------------------------------------------------------------------
# Gap-profile classifier: is the integral of dt / (t log(t/eta(t))) infinite?
# ---------------------------------------------------------------------------


@dataclass(frozen=True)
class EtaProfile:
    """Admissible gap lower-bound profile eta on (0, r0]: positive,
    continuous, nondecreasing, with eta(t) < t where evaluated."""

    kind: str  # "power_law" | "stretched_exponential" | "tabulated"
    params: tuple = ()
    samples: tuple = ()  # (t_i, eta_i) pairs, t decreasing, tabulated only
    r0: float = 0.1

    @staticmethod
    def power_law(C: float, alpha: float, r0: float = 0.1) -> "EtaProfile":
        if C <= 0 or alpha <= 0:
            raise ValueError("power law needs C > 0 and alpha > 0")
        return EtaProfile("power_law", (C, alpha), (), r0)

    @staticmethod
    def stretched_exponential(C: float, C1: float, beta: float, r0: float = 0.1) -> "EtaProfile":
        if C <= 0 or C1 <= 0 or beta <= 0:
            raise ValueError("stretched exponential needs positive C, C1, beta")
        return EtaProfile("stretched_exponential", (C, C1, beta), (), r0)

    @staticmethod
    def tabulated(ts: Sequence[float], etas: Sequence[float], r0: float | None = None) -> "EtaProfile":
        ts = tuple(float(t) for t in ts)
        etas = tuple(float(e) for e in etas)
        if len(ts) != len(etas) or len(ts) < 4:
            raise ValueError("tabulated profile needs >= 4 (t, eta) pairs")
        if any(a <= b for a, b in zip(ts, ts[1:])):
            raise ValueError("t samples must be strictly decreasing")
        if any(e <= 0 for e in etas):
            raise ValueError("eta must be positive")
        if any(a < b for a, b in zip(etas, etas[1:])):
            raise ValueError("eta must be nondecreasing in t")
        return EtaProfile("tabulated", (), tuple(zip(ts, etas)), r0 or ts[0])

    def eta(self, t: float) -> float:
        if self.kind == "power_law":
            C, alpha = self.params
            return C * t**alpha
        if self.kind == "stretched_exponential":
            C, C1, beta = self.params
            return C * math.exp(-C1 / t**beta)
        ts = np.array([s[0] for s in self.samples])
        es = np.array([s[1] for s in self.samples])
        # log-log interpolation between tabulated points
        lt = np.log(ts[::-1])
        le = np.log(es[::-1])
        return float(np.exp(np.interp(math.log(t), lt, le)))


def _require_eta_below_t(eta: EtaProfile):
    if eta.kind == "power_law":
        C, alpha = eta.params
        if alpha < 1.0 or (alpha == 1.0 and C >= 1.0):
            raise ValueError(f"eta(t) >= t near t={eta.r0:g}: profile inadmissible")
        if C * eta.r0**alpha >= eta.r0:
            raise ValueError(f"eta(t) >= t at t={eta.r0:g}")
    elif eta.kind == "stretched_exponential":
        if eta.eta(eta.r0) >= eta.r0:
            raise ValueError(f"eta(t) >= t at t={eta.r0:g}")
    else:
        for t, e in eta.samples:
            if e >= t:
                raise ValueError(f"eta(t) >= t at t={t:g}")


def classify_condition(eta: EtaProfile) -> dict:
    """Classify whether the gap integral diverges.

    Symbolic kinds are decided in closed form; tabulated profiles get dyadic
    partial integrals, an increment-ratio trend test and an honest
    "inconclusive" verdict when the trend is not separable at float scale.
    """
    _require_eta_below_t(eta)
    if eta.kind == "power_law":
        C, alpha = eta.params
        reason = (
            "integrand ~ 1/((alpha-1) t log(1/t))"
            if alpha > 1
            else "integrand ~ 1/(t log(1/C))"
        )
        return {"verdict": "divergent", "reason": reason, "partial_integrals": [], "slope": None}
    if eta.kind == "stretched_exponential":
        _, C1, beta = eta.params
        return {
            "verdict": "convergent",
            "reason": f"integrand ~ t^(beta-1)/C1 with beta={beta:g} integrable at 0",
            "partial_integrals": [],
            "slope": None,
        }

    t_min = eta.samples[-1][0]
    n_dec = int(math.floor(math.log2(eta.r0 / t_min)))
    if n_dec < 6:
        raise ValueError("tabulated range too short: need >= 6 dyadic decades")
    eps = [eta.r0 * 2.0 ** (-m) for m in range(1, n_dec + 1)]

    def partial(e: float) -> float:
        # integrate du / log(t/eta), u = log t, trapezoid at 64 points/decade
        n = max(16, int(64 * math.log2(eta.r0 / e)))
        u = np.linspace(math.log(e), math.log(eta.r0), n)
        t = np.exp(u)
        vals = np.array([1.0 / math.log(ti / eta.eta(ti)) for ti in t])
        return float(np.trapezoid(vals, u))

    Is = [partial(e) for e in eps]
    rows = list(zip(eps, Is))
    incs = np.diff(Is)
    loglog = [math.log(math.log(1.0 / e)) for e in eps]
    slope = (Is[-1] - Is[0]) / (loglog[-1] - loglog[0])
    tail_ratios = incs[-3:] / incs[-4:-1] if len(incs) >= 4 and np.all(incs[-4:-1] > 0) else None
    if tail_ratios is not None and np.all(tail_ratios >= 0.93) and slope > 0.15:
        verdict, reason = "divergent", "partial-integral increments settle toward a harmonic tail"
    elif tail_ratios is not None and np.all(tail_ratios <= 0.90):
        verdict, reason = "convergent", "increments decay geometrically"
    else:
        verdict, reason = "inconclusive", "trend flat within noise at float scale"
    return {"verdict": verdict, "reason": reason, "partial_integrals": rows, "slope": slope}


def beta_alpha_gate(alpha: float, beta: float) -> bool:
    """Strict gate beta < alpha/2."""
    return beta < alpha / 2.0


# ---------------------------------------------------------------------------
# Levi form of the tube defining function
# ---------------------------------------------------------------------------


@dataclass(frozen=True)
class LeviReport:
    samples: tuple
    min_eigenvalues: tuple[float, ...]
    global_min: float
    skipped: int
    threshold: float
    passed: bool


def levi_check_tube(
    tube: TubeDomain,
    samples: Sequence[tuple[tuple[float, float], tuple[float, float]]],
    fd_step: float = 1e-4,
    threshold: float = -1e-6,
) -> LeviReport:
    """Minimum eigenvalue of the complex Hessian of k|y|^2 - delta(x)^2 by
    central differences, per sample. Samples whose difference stencil crosses
    a distance ridge (the nearest boundary component changes) are skipped."""
    if fd_step > 1e-3:
        raise ValueError("fd_step must be <= 1e-3")
    k = tube.k
    dom = tube.base_real
    kept_eigs = []
    kept_samples = []
    skipped = 0
    h = fd_step
    for x, y in samples:
        if not tube_membership(tube, x, y):
            raise ValueError(f"sample ({x}, {y}) not in the tube")
        comps = set()

        def rho(x1, y1, x2, y2):
            sd = signed_distance(dom, complex(x1, x2))
            comps.add(sd.nearest_component)
            return k * (y1 * y1 + y2 * y2) - sd.value * sd.value

        base = (x[0], y[0], x[1], y[1])

        def at(offsets):
            return rho(*(b + o for b, o in zip(base, offsets)))

        def second(a, b):
            if a == b:
                da = [0.0] * 4
                da[a] = h
                mid = at((0, 0, 0, 0))
                return (at(da) - 2 * mid + at([-v for v in da])) / (h * h)
            dab = [0.0] * 4
            dab[a] = h
            dab[b] = h
            dan = list(dab)
            dan[b] = -h
            dna = [0.0] * 4
            dna[a] = -h
            dna[b] = h
            dnn = [-v for v in dab]
            return (at(dab) - at(dan) - at(dna) + at(dnn)) / (4 * h * h)

        # coordinates ordered (x1, y1, x2, y2); complex coords 0: (0,1), 1: (2,3)
        def hess(ca, cb):
            xa, ya = 2 * ca, 2 * ca + 1
            xb, yb = 2 * cb, 2 * cb + 1
            return 0.25 * (
                second(xa, xb) + second(ya, yb) + 1j * (second(xa, yb) - second(ya, xb))
            )

        H = np.array([[hess(0, 0), hess(0, 1)], [np.conj(hess(0, 1)), hess(1, 1)]])
        if len(comps) > 1:
            skipped += 1
            continue
        eigs = np.linalg.eigvalsh(0.5 * (H + H.conj().T))
        kept_eigs.append(float(eigs[0]))
        kept_samples.append((x, y))
    gmin = min(kept_eigs) if kept_eigs else math.nan
    return LeviReport(
        samples=tuple(kept_samples),
        min_eigenvalues=tuple(kept_eigs),
        global_min=gmin,
        skipped=skipped,
        threshold=threshold,
        passed=bool(kept_eigs) and gmin >= threshold,
    )


def near_puncture_tube_samples(
    tube: TubeDomain, n: int = 12, radius_range: tuple[float, float] = (0.05, 0.2)
) -> list[tuple[tuple[float, float], tuple[float, float]]]:
    """Sample grid in the tube over the region where the puncture is the
    nearest boundary component (y = 0 slice plus small y offsets)."""
    if not tube.base_real.punctures:
        raise ValueError("base has no puncture")
    p = tube.base_real.punctures[0]
    out = []
    radii = np.linspace(radius_range[0], radius_range[1], max(2, n // 4))
    angles = np.linspace(0.0, 2 * math.pi, 5)[:-1]
    for r in radii:
        for a in angles:
            x = (p.real + r * math.cos(a), p.imag + r * math.sin(a))
            d = signed_distance(tube.base_real, complex(*x)).value
            ymag = 0.3 * d / math.sqrt(tube.k)
            out.append((x, (ymag, 0.0)))
            if len(out) >= n:
                return out
    return out


# ---------------------------------------------------------------------------
# Bounded-index falsifier
# ---------------------------------------------------------------------------


def _inward_direction(domain: PlanarDomain, b: complex) -> complex:
    sd = signed_distance(domain, b)
    comp = sd.nearest_component
    if comp.kind == "outer":
        v = domain.outer_center - b
    elif comp.kind == "hole":
        c, _ = domain.holes[comp.index]
        v = b - c
    else:
        v = 1.0 + 0j  # any direction leaves a puncture
    return v / abs(v)


def hyperconvex_index_falsifier(
    domain: PlanarDomain,
    rho: Callable[[complex], float],
    alpha: float,
    boundary_points: Sequence[complex] | None = None,
    d0: float = 0.05,
    n_depths: int = 10,
    factor: float = 4.0,
) -> dict:
    """Test the incompatible pair: a linear lower bound -rho >= c delta along
    inward normal segments against the candidate upper bound -rho <= C
    delta^alpha. For alpha > 1 a genuinely bounded defining function must
    break one side: either the fitted c collapses toward zero or the fitted C
    blows up; the report carries the larger violation factor as the margin."""
    if alpha <= 1:
        raise ValueError("the falsifier targets alpha > 1 (alpha <= 1 is admissible)")
    if boundary_points is None:
        from .domains import boundary_samples

        boundary_points = boundary_samples(domain, 8)
    depths = d0 * 2.0 ** (-np.arange(n_depths, dtype=float))
    c_est, C_est = [], []
    for d in depths:
        hopf, upper = [], []
        for b in boundary_points:
            z = complex(b) + d * _inward_direction(domain, complex(b))
            if not signed_distance(domain, z).value > 0:
                continue
            v = -float(rho(z))
            if v <= 0:
                raise ValueError(f"candidate rho is not negative at {z}")
            delta = signed_distance(domain, z).value
            hopf.append(v / delta)
            upper.append(v / delta**alpha)
        if hopf:
            c_est.append(min(hopf))
            C_est.append(max(upper))
    c_est, C_est = np.array(c_est), np.array(C_est)
    hopf_decay = float(c_est[0] / c_est[-1])
    alpha_growth = float(C_est[-1] / C_est[0])
    if alpha_growth >= factor and alpha_growth >= hopf_decay:
        side = "alpha_bound"
    elif hopf_decay >= factor:
        side = "hopf"
    else:
        side = None
    return {
        "falsified": side is not None,
        "side": side,
        "margin": max(hopf_decay, alpha_growth),
        "depths": depths.tolist(),
        "c_estimates": c_est.tolist(),
        "C_estimates": C_est.tolist(),
    }
