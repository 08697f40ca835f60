"""Exact verification of the boundary-gap chains for the dyadic hole-chain
domain (holes at 2^-l with radii 2^-3l) and its shrinking neighborhoods, plus
the tube-domain witness and box steps.

Everything is evaluated in exact arithmetic (`DyadicShrink`): the supported
range 18 <= j <= 24 is exactly where binary64 could no longer subtract the
shrink from the hole radii, while the gap quantities themselves still fit in
floats for reporting. The analytic lower bound e^(-log2 / t_j^(1/3)) equals
the shrink 2^(-2^(j/3)) by the identity e^(x log 2) = 2^x; the PASS decision
uses that identity, the float column is computed through exp for display.

Boundary suprema/infima are taken over explicitly enumerated components. All
circle centers lie on the real axis and the binding distances are realized at
the two real-axis points of each circle (for l <= j the own-hole gap is the
constant shrink; for l > j the nearest retained component is the innermost
kept hole, whose distance over the circle peaks at the axis), so the per
component extrema below are exact, not sampled approximations.
"""

from __future__ import annotations

import math
from fractions import Fraction

from .exactdyadic import DyadicShrink, exact_max, exact_min

J_MIN, J_MAX = 18, 24
_SQRT_K = {1: Fraction(1), 4: Fraction(2)}


def _x(l: int) -> Fraction:
    return Fraction(1, 2**l)


def _r(l: int) -> Fraction:
    return Fraction(1, 2 ** (3 * l))


def _delta_member(j: int, x: DyadicShrink) -> DyadicShrink:
    """Distance from a real-axis point of the closed base to the boundary of
    the j-th neighborhood member (outer radius 1 + S, holes l <= j shrunk
    by S)."""
    S = DyadicShrink.shrink(j)
    cands = [(1 + S) - abs(x)]
    for l in range(1, j + 1):
        cands.append(abs(x - _x(l)) - (_r(l) - S))
    best = exact_min(cands)
    if not best.sign() > 0:
        raise AssertionError("sample point not interior to the member")
    return best


def _delta_base(x: Fraction, levels: int) -> Fraction:
    """Base-domain boundary distance of a real dyadic point, enumerating hole
    levels 1..levels. Exact for points whose nearest feature is at most that
    deep (all points used here)."""
    best = 1 - abs(x)
    for l in range(1, levels + 1):
        best = min(best, abs(x - _x(l)) - _r(l))
    return best


def _planar_components(j: int, levels: int):
    """(name, inf, sup) of the member distance over each base boundary
    component: outer circle, hole circles, and the hole accumulation point."""
    S = DyadicShrink.shrink(j)

    def d(v) -> DyadicShrink:
        return _delta_member(j, DyadicShrink.of(j, v))

    comps = []
    vals = [d(1), d(-1)]
    comps.append(("outer", exact_min(vals), exact_max(vals)))
    for l in range(1, levels + 1):
        vals = [d(_x(l) - _r(l)), d(_x(l) + _r(l))]
        comps.append((f"hole_{l}", exact_min(vals), exact_max(vals)))
    v0 = d(0)
    comps.append(("accumulation", v0, v0))
    return comps, S


def _tube_boundary_samples(j: int, levels: int, sqrt_k: Fraction):
    """Exact tube boundary points (x, y) with |y| = delta_D(x)/sqrt(k):
    base boundary points at y = 0 plus interior dyadic x."""
    xs_boundary = [Fraction(1), Fraction(-1),
                   _x(1) - _r(1), _x(1) + _r(1),
                   _x(j) - _r(j), _x(j) + _r(j)]
    samples = [(x, Fraction(0)) for x in xs_boundary]
    for x in (Fraction(3, 4), Fraction(11, 32), Fraction(-1, 2)):
        samples.append((x, _delta_base(x, levels) / sqrt_k))
    return samples


def _tube_steps(
    j: int, k: int, levels: int, lam: DyadicShrink, Lam: DyadicShrink, memo: dict
) -> dict:
    """Witness and box steps at exact tube boundary samples."""
    sqrt_k = _SQRT_K[k]

    def _delta_member_memo(x: DyadicShrink) -> DyadicShrink:
        key = (x.frac, x.c1, x.c2)
        if key not in memo:
            memo[key] = _delta_member(j, x)
        return memo[key]

    witness_ok = True
    box_ok = True
    worst_gap = None
    for x, y in _tube_boundary_samples(j, levels, sqrt_k):
        dD = DyadicShrink.of(j, _delta_base(x, levels))
        dDt = _delta_member_memo(DyadicShrink.of(j, x))
        gap = dDt - dD
        # witness point x + i (dDt/dD) y certifies distance <= gap / sqrt(k)
        if not (gap.sign() >= 0 and gap <= Lam):
            witness_ok = False
        worst_gap = gap if worst_gap is None or gap > worst_gap else worst_gap
        # box step: the member clearance grows by at least the full gap floor
        if not dDt >= dD + lam:
            box_ok = False
            continue
        quarter = lam * Fraction(1, 4)
        for sx in (-1, 1):
            xp = DyadicShrink.of(j, x) + quarter * sx
            dtp = _delta_member_memo(xp)  # raises if xp left the member
            for sy in (-1, 1):
                yp = DyadicShrink.of(j, y) + (quarter * sy) * (1 / sqrt_k)
                if not (yp.square() * k) < dtp.square():
                    box_ok = False
    return {
        "witness": witness_ok,
        "box": box_ok,
        "pass": witness_ok and box_ok,
        "max_gap_over_sqrt_k": float(worst_gap) / float(sqrt_k),
    }


def appendix_verifier(j_lo: int = J_MIN, j_hi: int = J_MAX, ks=(1, 4)) -> list[dict]:
    """One row per j: boundary-gap extremes, the analytic lower bound, the
    per-component sandwich, the simplified-formula cross-checks, and the tube
    steps for each k."""
    if not (J_MIN <= j_lo <= j_hi <= J_MAX):
        raise ValueError(
            f"scale underflow outside {J_MIN} <= j <= {J_MAX}: the shrink is "
            "not representable/meaningful in binary64 there"
        )
    for k in ks:
        if k not in _SQRT_K:
            raise ValueError("tube factor k must be in {1, 4} (exact square roots)")
    rows = []
    for j in range(j_lo, j_hi + 1):
        levels = j + 2
        t = Fraction(1, 2**j)
        comps, S = _planar_components(j, levels)
        lam = exact_min(c[1] for c in comps)
        Lam = exact_max(c[2] for c in comps)
        # transcription cross-checks against the simplified end formulas
        if not Lam.equals(DyadicShrink.of(j, t - _r(j)) + S):
            raise AssertionError(f"j={j}: sup formula mismatch")
        if not lam.equals(S):
            raise AssertionError(f"j={j}: inf formula mismatch")
        lower = S  # e^(-log2 / t^(1/3)) == 2^(-2^(j/3)) exactly
        sandwich = all(c[1] >= lower and c[2] <= t for c in comps)
        pass_planar = sandwich and lower <= lam and Lam <= t
        memo: dict = {}
        tube = {k: _tube_steps(j, k, levels, lam, Lam, memo) for k in ks}
        rows.append(
            {
                "j": j,
                "t_j": float(t),
                "Lambda_j": float(Lam),
                "lambda_j": float(lam),
                "lower_bound": math.exp(-math.log(2.0) / float(t) ** (1.0 / 3.0)),
                "pass_planar": bool(pass_planar),
                "pass_tube": all(tube[k]["pass"] for k in ks),
                "tube_detail": tube,
            }
        )
    return rows
