"""Hartogs-domain Bergman kernels from one-dimensional fiber models.

The two-dimensional kernel over {(z,w): z in D, |w| < delta(z)^alpha} is the
fiber series sum_j (j+1)/pi * K_j(z,t) (w conj(s))^j, where K_j is the base
kernel with the fiber-scaled weight of index j. A direct 2D Gram over the
monomials z^n w^j, built by the same product quadrature, serves as an
independent oracle for the series route (it is deliberately coarser: it
exists to catch structural errors, not to set precision records).
"""

from __future__ import annotations

import math
import os
from concurrent.futures import ThreadPoolExecutor
from dataclasses import dataclass
from typing import Sequence

import numpy as np

from .domains import HartogsDomain, signed_distance
from .kernels import (
    BasisSpec,
    DomainError,
    KernelModel,
    _cholesky_with_jitter,
    build_kernel,
    default_basis,
)
from .quadrature import hartogs_monomial_gram, integrate_hartogs, integrate_planar
from .weights import Weight


def worker_count() -> int:
    """Worker cap from BERGMAN_LAB_THREADS (default 1)."""
    raw = os.environ.get("BERGMAN_LAB_THREADS", "1")
    try:
        return max(1, int(raw))
    except ValueError:
        raise ValueError(f"BERGMAN_LAB_THREADS must be an integer, got {raw!r}")


@dataclass(frozen=True)
class HartogsKernel:
    """Truncated fiber series; fiber_models[j] carries weight index j."""

    hartogs: HartogsDomain
    fiber_models: tuple[KernelModel, ...]

    @property
    def alpha(self) -> float:
        return self.hartogs.alpha

    @property
    def j_max(self) -> int:
        return len(self.fiber_models) - 1

    def _require_member(self, z: complex, w: complex):
        if not self.hartogs.contains(z, w):
            raise DomainError(f"point ({z}, {w}) outside the Hartogs domain")


@dataclass(frozen=True)
class HartogsEval:
    value: complex
    tail_bound: float
    tail_flag: bool
    terms_used: int


def build_hartogs_kernel(
    h: HartogsDomain,
    j_max: int,
    poly_degree: int = 12,
    laurent_order: int = 8,
    max_depth: int = 11,
) -> HartogsKernel:
    """Build fiber models j = 0..j_max (in parallel when BERGMAN_LAB_THREADS
    allows; assembly order is fixed regardless)."""
    if j_max < 0:
        raise ValueError("j_max must be >= 0")

    def one(j: int) -> KernelModel:
        w = Weight.fiber_scaled(h.alpha, j)
        basis = default_basis(h.base, w, poly_degree, laurent_order)
        return build_kernel(h.base, w, basis, max_depth)

    workers = min(worker_count(), j_max + 1)
    if workers > 1:
        with ThreadPoolExecutor(max_workers=workers) as pool:
            models = tuple(pool.map(one, range(j_max + 1)))
    else:
        models = tuple(one(j) for j in range(j_max + 1))
    return HartogsKernel(h, models)


def hartogs_kernel_eval(
    hk: HartogsKernel,
    p: tuple[complex, complex],
    q: tuple[complex, complex],
    tail_target: float = 1e-8,
    j_cap: int = 60,
) -> HartogsEval:
    """Truncated series with a geometric tail bound.

    The term ratio approaches rho = |w conj(s)| / (delta(z) delta(t))^alpha
    (< 1 on member points), so the tail after the last term T_J is bounded by
    |T_J| rho / (1 - rho). Truncation stops once that meets tail_target
    relative to the partial sum, at j_cap, or at the built fiber range,
    whichever is first; tail_flag reports bounds above 1e-6 |value|.
    """
    z, w = complex(p[0]), complex(p[1])
    t, s = complex(q[0]), complex(q[1])
    hk._require_member(z, w)
    hk._require_member(t, s)
    ws = w * np.conj(s)
    dz = signed_distance(hk.hartogs.base, z).value
    dt = signed_distance(hk.hartogs.base, t).value
    rho = abs(ws) / ((dz * dt) ** hk.alpha)
    limit = min(hk.j_max, j_cap)
    value = 0.0 + 0.0j
    tail = math.inf
    used = 0
    ws_pow = 1.0 + 0.0j
    for j in range(limit + 1):
        kj = hk.fiber_models[j].kernel(z, t)
        term = (j + 1) / math.pi * kj * ws_pow
        value += term
        used = j + 1
        if ws == 0:
            tail = 0.0  # series terminates exactly
            break
        tail = abs(term) * rho / (1.0 - rho) if rho < 1.0 else math.inf
        if tail <= tail_target * max(abs(value), 1e-300):
            break
        ws_pow = ws_pow * ws
    flag = tail > 1e-6 * abs(value)
    return HartogsEval(complex(value), float(tail), bool(flag), used)


def hartogs_diag(hk: HartogsKernel, z: complex, w: complex, **kw) -> HartogsEval:
    return hartogs_kernel_eval(hk, (z, w), (z, w), **kw)


# ---------------------------------------------------------------------------
# Direct 2D oracle
# ---------------------------------------------------------------------------


@dataclass(frozen=True, repr=False)
class HartogsOracleModel:
    """Kernel model over the Hartogs domain itself: monomials z^n w^j
    orthonormalized against the direct product-rule Gram (weight 1)."""

    hartogs: HartogsDomain
    order: tuple[tuple[int, int], ...]  # (n, j) per basis index
    raw_gram: np.ndarray
    scales: np.ndarray
    chol_inv: np.ndarray
    jitter_used: float
    cond_estimate: float
    max_depth: int

    def __repr__(self):
        return f"HartogsOracleModel(dim={len(self.order)}, depth={self.max_depth})"

    def _vec(self, z: complex, w: complex) -> np.ndarray:
        return np.array([z**n * w**j for n, j in self.order], dtype=complex)

    def ortho_vec(self, z: complex, w: complex) -> np.ndarray:
        return self.chol_inv @ (self.scales * self._vec(z, w))

    def kernel(self, p: tuple[complex, complex], q: tuple[complex, complex]) -> complex:
        if not self.hartogs.contains(complex(p[0]), complex(p[1])):
            raise DomainError(f"point {p} outside the Hartogs domain")
        if not self.hartogs.contains(complex(q[0]), complex(q[1])):
            raise DomainError(f"point {q} outside the Hartogs domain")
        ep = self.ortho_vec(complex(p[0]), complex(p[1]))
        eq = self.ortho_vec(complex(q[0]), complex(q[1]))
        return complex(np.vdot(eq, ep))


def hartogs_direct_oracle(
    h: HartogsDomain,
    degree_z: int = 8,
    degree_w: int = 5,
    max_depth: int = 8,
    n_r: int = 64,
    n_theta: int = 64,
) -> HartogsOracleModel:
    """Gram-orthonormalize z^n w^j over the Hartogs domain with weight 1."""
    if degree_z > 10 or degree_w > 6 or max_depth > 8:
        raise ValueError("oracle runs at desk scale: degree_z<=10, degree_w<=6, depth<=8")
    G_raw, order = hartogs_monomial_gram(h, degree_z, degree_w, max_depth, n_r, n_theta)
    diag = np.diag(G_raw).real
    if np.any(diag <= 0):
        raise ValueError("degenerate monomial norms in the oracle Gram")
    scales = 1.0 / np.sqrt(diag)
    G = (scales[:, None] * G_raw) * scales[None, :]
    G = 0.5 * (G + G.conj().T)
    L, jitter = _cholesky_with_jitter(G)
    d = np.abs(np.diag(L)) ** 2
    return HartogsOracleModel(
        hartogs=h,
        order=tuple(order),
        raw_gram=G_raw,
        scales=scales,
        chol_inv=np.linalg.inv(L),
        jitter_used=jitter,
        cond_estimate=float(d.max() / d.min()),
        max_depth=max_depth,
    )


# ---------------------------------------------------------------------------
# Norm decomposition and exhaustion checks
# ---------------------------------------------------------------------------


def norm_decomposition_check(
    h: HartogsDomain,
    slices: dict[int, Sequence[complex]],
    basis: BasisSpec,
    max_depth: int = 8,
    rel_tol: float = 1e-3,
) -> dict:
    """Compare the direct squared norm of f(z,w) = sum_j f_j(z) w^j with the
    fiber decomposition sum_j pi/(j+1) ||f_j||^2 against delta^(2 alpha (j+1)).
    """
    if not slices:
        return {"lhs": 0.0, "rhs": 0.0, "rel_gap": 0.0, "pass": True}
    coeffs = {int(j): np.asarray(c, dtype=complex) for j, c in slices.items()}
    for j, c in coeffs.items():
        if j < 0:
            raise ValueError("slice indices must be >= 0")
        if c.shape != (basis.dim,):
            raise ValueError(f"slice {j}: expected {basis.dim} coefficients")

    def f(z, w):
        zf = z.ravel()
        B = basis.eval_matrix(zf)
        out = np.zeros(zf.shape, dtype=complex)
        wf = w.ravel()
        for j, c in coeffs.items():
            out += (B.T @ c) * wf**j
        return out.reshape(z.shape)

    lhs = integrate_hartogs(h, lambda z, w: np.abs(f(z, w)) ** 2, max_depth).value.real

    rhs_terms = []
    for j, c in sorted(coeffs.items()):
        wgt = Weight.fiber_scaled(h.alpha, j)
        est = integrate_planar(
            h.base,
            lambda z: np.abs(basis.eval_matrix(z).T @ c) ** 2,
            wgt,
            max_depth,
        )
        rhs_terms.append(math.pi / (j + 1) * est.value.real)
    rhs = sum(rhs_terms)
    scale = max(abs(lhs), abs(rhs), 1e-300)
    rel_gap = abs(lhs - rhs) / scale
    return {"lhs": lhs, "rhs": rhs, "rel_gap": rel_gap, "pass": rel_gap <= rel_tol}


def exhaustion_lower_bound_check(
    hk: HartogsKernel, probes: Sequence[tuple[complex, complex]]
) -> list[dict]:
    """Diagonal series value against its j=0 term (1/pi) K_{2 phi}(z,z); the
    inequality holds term by term since every diagonal term is >= 0."""
    rows = []
    for z, w in probes:
        ev = hartogs_diag(hk, complex(z), complex(w))
        k0 = hk.fiber_models[0].kernel(complex(z), complex(z)).real
        lower = k0 / math.pi
        rows.append(
            {
                "z": complex(z),
                "w": complex(w),
                "K_omega": ev.value.real,
                "j0_lower": lower,
                "pass": ev.value.real >= lower - 1e-9,
            }
        )
    return rows
