"""Weighted Bergman kernel models.

A model is an explicit basis (monomials plus Laurent terms at hole centers or
punctures) orthonormalized against the quadrature inner product of the
domain: G = L L^H with the pre-normalized Gram, and the kernel is the
orthonormal expansion K(z, w) = sum_i psi_i(z) conj(psi_i(w)) with
psi = L^-1 v. Models are immutable and evaluation is pure.
"""

from __future__ import annotations

import math
from dataclasses import dataclass, field
from typing import Callable, Sequence

import numpy as np
from scipy.linalg.blas import zherk

from .domains import (
    NeighborhoodFamily,
    PlanarDomain,
    boundary_samples,
    signed_distance,
    signed_distance_batch,
)
from .quadrature import CellDecomposition, decompose, pairwise_total
from .weights import Weight

LOG_SKIP = math.log(1e-17)  # pairwise row-product cutoff in the Gram
LOG_UNDERFLOW = math.log(1e-170)  # per-row cutoff for raw norms


class IllConditionedBasisError(RuntimeError):
    def __init__(self, message, diagnostics=None):
        super().__init__(message)
        self.diagnostics = diagnostics or {}


class DomainError(ValueError):
    """Evaluation point outside the open domain."""


@dataclass(frozen=True)
class BasisSpec:
    """Monomials up to poly_degree, then Laurent groups (pole, order) in the
    given order with orders 1..max_order each."""

    poly_degree: int
    laurent: tuple[tuple[complex, int], ...] = ()

    def __post_init__(self):
        if self.poly_degree < 0:
            raise ValueError("poly_degree must be >= 0")
        object.__setattr__(
            self, "laurent", tuple((complex(p), int(m)) for p, m in self.laurent)
        )
        for _, m in self.laurent:
            if m < 1:
                raise ValueError("laurent max_order must be >= 1")

    @property
    def dim(self) -> int:
        return self.poly_degree + 1 + sum(m for _, m in self.laurent)

    def describe(self) -> dict:
        return {
            "poly_degree": self.poly_degree,
            "laurent": [
                {"pole": [p.real, p.imag], "max_order": m} for p, m in self.laurent
            ],
        }

    def validate_for(self, domain: PlanarDomain, weight: Weight):
        """Poles must sit in hole closures or at punctures and be
        square-integrable against the weight density."""
        for p, m in self.laurent:
            in_hole = any(abs(p - c) <= r for c, r in domain.holes)
            at_puncture = any(p == q for q in domain.punctures)
            if not (in_hole or at_puncture):
                raise ValueError(f"pole {p} lies in no hole closure or puncture")
            if at_puncture:
                # |z-p|^-2m delta^p_w integrable at the puncture iff 2m < p_w + 2
                if 2 * m >= weight.exponent + 2:
                    raise ValueError(
                        "non-integrable basis: pole order "
                        f"{m} at puncture {p} needs 2m < {weight.exponent} + 2"
                    )

    # -- evaluation ---------------------------------------------------------
    def eval_matrix(self, z: np.ndarray, rows: np.ndarray | None = None) -> np.ndarray:
        """(dim, n) values of the raw basis at z; rows restricts to a mask."""
        z = np.asarray(z, dtype=complex)
        n = z.shape[0]
        mask = np.ones(self.dim, dtype=bool) if rows is None else rows
        out = np.zeros((int(mask.sum()), n), dtype=complex)
        write = 0
        poly_mask = mask[: self.poly_degree + 1]
        if poly_mask.any():
            kmax = int(np.nonzero(poly_mask)[0][-1])
            power = np.ones(n, dtype=complex)
            for k in range(kmax + 1):
                if k > 0:
                    np.multiply(power, z, out=power)
                if mask[k]:
                    out[write] = power
                    write += 1
        idx = self.poly_degree + 1
        for p, m_max in self.laurent:
            group = mask[idx : idx + m_max]
            if group.any():
                mmax_active = int(np.nonzero(group)[0][-1]) + 1
                u = 1.0 / (z - p)
                power = np.ones(n, dtype=complex)
                for m in range(1, mmax_active + 1):
                    np.multiply(power, u, out=power)
                    if mask[idx + m - 1]:
                        out[write] = power
                        write += 1
            idx += m_max
        return out

    def abs2_matrix(self, z: np.ndarray, rows: np.ndarray | None = None) -> np.ndarray:
        """|b_row(z)|^2 via real power recurrences (norms pass)."""
        z = np.asarray(z, dtype=complex)
        n = z.shape[0]
        mask = np.ones(self.dim, dtype=bool) if rows is None else rows
        out = np.zeros((int(mask.sum()), n), dtype=np.float64)
        write = 0
        poly_mask = mask[: self.poly_degree + 1]
        if poly_mask.any():
            kmax = int(np.nonzero(poly_mask)[0][-1])
            r2 = (z * z.conj()).real
            power = np.ones(n, dtype=np.float64)
            for k in range(kmax + 1):
                if k > 0:
                    np.multiply(power, r2, out=power)
                if mask[k]:
                    out[write] = power
                    write += 1
        idx = self.poly_degree + 1
        for p, m_max in self.laurent:
            group = mask[idx : idx + m_max]
            if group.any():
                mmax_active = int(np.nonzero(group)[0][-1]) + 1
                d = z - p
                u2 = 1.0 / (d * d.conj()).real
                power = np.ones(n, dtype=np.float64)
                for m in range(1, mmax_active + 1):
                    np.multiply(power, u2, out=power)
                    if mask[idx + m - 1]:
                        out[write] = power
                        write += 1
            idx += m_max
        return out

    def deriv_matrix(self, z: np.ndarray) -> np.ndarray:
        """(dim, n) values of d/dz of the raw basis (exact)."""
        z = np.asarray(z, dtype=complex)
        n = z.shape[0]
        out = np.zeros((self.dim, n), dtype=complex)
        power = np.ones(n, dtype=complex)
        for k in range(1, self.poly_degree + 1):
            out[k] = k * power
            power = power * z
        idx = self.poly_degree + 1
        for p, m_max in self.laurent:
            u = 1.0 / (z - p)
            power = u
            for m in range(1, m_max + 1):
                power = power * u
                out[idx] = -m * power
                idx += 1
        return out

    def row_log_bounds(self, rmax: float, pole_dmin: Sequence[float]) -> np.ndarray:
        """Upper bounds of log |b_row| over a chunk with max |z| = rmax and
        min |z - pole| = pole_dmin[i] per Laurent group."""
        logs = np.empty(self.dim)
        lr = math.log(rmax) if rmax > 0 else -math.inf
        logs[: self.poly_degree + 1] = np.arange(self.poly_degree + 1) * lr
        idx = self.poly_degree + 1
        for (p, m_max), dmin in zip(self.laurent, pole_dmin):
            ld = -math.log(dmin) if dmin > 0 else math.inf
            logs[idx : idx + m_max] = np.arange(1, m_max + 1) * ld
            idx += m_max
        return logs


def max_integrable_pole_order(weight: Weight) -> int:
    """Largest m with 2m < weight exponent + 2 (puncture poles only)."""
    return max(0, math.ceil((weight.exponent + 2.0) / 2.0 - 1e-12) - 1)


def default_basis(
    domain: PlanarDomain,
    weight: Weight,
    poly_degree: int = 12,
    laurent_order: int = 8,
) -> BasisSpec:
    """Monomials plus one Laurent group per hole; puncture groups are clamped
    to the integrable order range (possibly empty)."""
    groups = [(c, laurent_order) for c, _ in domain.holes]
    m_punct = min(laurent_order, max_integrable_pole_order(weight))
    groups += [(p, m_punct) for p in domain.punctures if m_punct >= 1]
    return BasisSpec(poly_degree, tuple(groups))


class _PairwiseAccumulator:
    """Binary-counter pairwise reduction: the combine tree is a fixed function
    of the number of pushed terms, independent of any parallel schedule."""

    def __init__(self):
        self._stack = []  # (rank, value)

    def push(self, value):
        rank = 0
        while self._stack and self._stack[-1][0] == rank:
            _, prev = self._stack.pop()
            value = prev + value
            rank += 1
        self._stack.append((rank, value))

    def total(self):
        if not self._stack:
            return 0.0
        acc = self._stack[0][1]
        for _, v in self._stack[1:]:
            acc = acc + v
        return acc


@dataclass(frozen=True, repr=False)
class KernelModel:
    domain: PlanarDomain
    weight: Weight
    basis: BasisSpec
    scales: np.ndarray
    gram: np.ndarray
    chol: np.ndarray
    chol_inv: np.ndarray
    jitter_used: float
    cond_estimate: float
    max_depth: int
    decomp: CellDecomposition = field(compare=False)

    def __repr__(self):
        return (
            f"KernelModel(dim={self.basis.dim}, weight={self.weight.kind}, "
            f"depth={self.max_depth}, jitter={self.jitter_used:g})"
        )

    @property
    def dim(self) -> int:
        return self.basis.dim

    def _require_member(self, z: complex):
        if not signed_distance(self.domain, z).value > 0:
            raise DomainError(f"point {z} outside the open domain")

    def basis_eval(self, z: np.ndarray) -> np.ndarray:
        """Scaled (pre-normalized) basis values, (dim, n)."""
        return self.scales[:, None] * self.basis.eval_matrix(np.asarray(z, dtype=complex))

    def ortho_eval(self, z: np.ndarray) -> np.ndarray:
        """Orthonormal-basis values psi_i(z), (dim, n)."""
        return self.chol_inv @ self.basis_eval(z)

    def ortho_deriv(self, z: np.ndarray) -> np.ndarray:
        return self.chol_inv @ (
            self.scales[:, None] * self.basis.deriv_matrix(np.asarray(z, dtype=complex))
        )

    def kernel(self, z: complex, w: complex) -> complex:
        self._require_member(z)
        self._require_member(w)
        ez = self.ortho_eval(np.array([z]))[:, 0]
        ew = self.ortho_eval(np.array([w]))[:, 0]
        return complex(np.vdot(ew, ez))

    def kernel_diag(self, points: np.ndarray) -> np.ndarray:
        e = self.ortho_eval(np.asarray(points, dtype=complex))
        return np.sum(np.abs(e) ** 2, axis=0)

    def kernel_column(self, z_nodes: np.ndarray, w: complex) -> np.ndarray:
        """K(z_nodes, w) for a fixed second argument."""
        ew = self.ortho_eval(np.array([w]))[:, 0]
        return self.ortho_eval(z_nodes).T @ np.conj(ew)

    def eval_coeffs(self, coeffs: Sequence[complex], z: np.ndarray) -> np.ndarray:
        """Evaluate sum_m coeffs[m] b_m(z) in the raw (unscaled) basis."""
        c = np.asarray(coeffs, dtype=complex)
        if c.shape != (self.dim,):
            raise ValueError(f"expected {self.dim} coefficients")
        return self.basis.eval_matrix(np.asarray(z, dtype=complex)).T @ c

    def summary(self, probes: Sequence[complex] = ()) -> dict:
        out = {
            "basis": self.basis.describe(),
            "weight": {"kind": self.weight.kind, "alpha": self.weight.alpha,
                       "fiber_index": self.weight.fiber_index},
            "jitter_used": self.jitter_used,
            "gram_condition": self.cond_estimate,
            "quadrature_depth": self.max_depth,
            "diagonal": [
                {"z": [complex(p).real, complex(p).imag], "K": float(self.kernel_diag(np.array([p]))[0])}
                for p in probes
            ],
        }
        return out


def _gram_and_norms(decomp, basis: BasisSpec, weight: Weight):
    """Raw norms then the pre-normalized Gram, chunked with support cutoffs."""
    dim = basis.dim
    poles = [p for p, _ in basis.laurent]
    # cap the basis-values block at ~128 MB per chunk
    chunk = max(4096, int(8e6 // dim))

    def chunk_stats(z):
        rmax = float(np.max(np.abs(z))) if len(z) else 0.0
        dmin = [float(np.min(np.abs(z - p))) if len(z) else math.inf for p in poles]
        return rmax, dmin

    norm_acc = _PairwiseAccumulator()
    for z, delta, node_w in decomp.node_chunks(chunk):
        dens = weight.density_from_delta(delta) * node_w
        rmax, dmin = chunk_stats(z)
        logs = basis.row_log_bounds(rmax, dmin)
        active = 2.0 * logs > LOG_UNDERFLOW
        part = np.zeros(dim)
        if active.any():
            A2 = basis.abs2_matrix(z, rows=active)
            part[active] = A2 @ dens
        norm_acc.push(part)
    norms2 = norm_acc.total()
    if np.any(norms2 <= 0):
        bad = int(np.argmin(norms2))
        raise IllConditionedBasisError(
            f"basis function {bad} has nonpositive quadrature norm {norms2[bad]:g}"
        )
    scales = 1.0 / np.sqrt(norms2)

    gram_acc = _PairwiseAccumulator()
    log_scales = np.log(scales)
    mass = abs(decomp.cell_area) * max(decomp.n_inside, 1) * 4.0
    log_mass = math.log(mass)
    for z, delta, node_w in decomp.node_chunks(chunk):
        dens = weight.density_from_delta(delta) * node_w
        rmax, dmin = chunk_stats(z)
        logs = basis.row_log_bounds(rmax, dmin) + log_scales
        best = float(np.max(logs))
        active = logs + best + log_mass > LOG_SKIP
        part = np.zeros((dim, dim), dtype=complex)
        if active.any():
            B = basis.eval_matrix(z, rows=active)
            B *= scales[active][:, None]
            B *= np.sqrt(dens)[None, :]
            # rank-k Hermitian update on the F-contiguous transposed view:
            # zherk(trans=2) yields the lower triangle of conj(B B^H)
            C = zherk(1.0, B.T, trans=2, lower=1)
            part[np.ix_(active, active)] = C
        gram_acc.push(part)
    lower = gram_acc.total()
    G = np.conj(np.tril(lower) + np.tril(lower, -1).conj().T)
    return G, scales


def _cholesky_with_jitter(G):
    dim = G.shape[0]
    base_jitter = 1e-12 * float(np.trace(G).real) / dim
    jitter = 0.0
    for attempt in range(8):
        try:
            L = np.linalg.cholesky(G + jitter * np.eye(dim))
            return L, jitter
        except np.linalg.LinAlgError:
            jitter = base_jitter if jitter == 0.0 else jitter * 10.0
            if attempt >= 7:
                break
    eigs = np.linalg.eigvalsh(G)
    raise IllConditionedBasisError(
        "ill-conditioned basis: Gram not positive definite after max jitter",
        diagnostics={
            "dim": dim,
            "min_eig": float(eigs[0]),
            "max_eig": float(eigs[-1]),
            "jitter_tried": jitter,
        },
    )


def build_kernel(
    domain: PlanarDomain,
    weight: Weight,
    basis: BasisSpec,
    max_depth: int = 11,
) -> KernelModel:
    """Assemble the Gram by quadrature (basis pre-normalized by its quadrature
    norms), factor with escalating diagonal jitter, and wrap the model."""
    basis.validate_for(domain, weight)
    decomp = decompose(domain, max_depth)
    G, scales = _gram_and_norms(decomp, basis, weight)
    asym = float(np.max(np.abs(G - G.conj().T)))
    gmax = float(np.max(np.abs(G)))
    if asym > 1e-10 * max(gmax, 1.0):
        raise IllConditionedBasisError(
            f"Gram asymmetry {asym:g} exceeds tolerance (max entry {gmax:g})"
        )
    G = 0.5 * (G + G.conj().T)
    L, jitter = _cholesky_with_jitter(G)
    diag = np.abs(np.diag(L)) ** 2
    cond = float(diag.max() / diag.min())
    return KernelModel(
        domain=domain,
        weight=weight,
        basis=basis,
        scales=scales,
        gram=G,
        chol=L,
        chol_inv=np.linalg.inv(L),
        jitter_used=jitter,
        cond_estimate=cond,
        max_depth=max_depth,
        decomp=decomp,
    )


def kernel_eval(model: KernelModel, z: complex, w: complex) -> complex:
    return model.kernel(z, w)


def reproducing_check(model: KernelModel, coeffs: Sequence[complex], w: complex) -> float:
    """| integral of f conj(K(.,w)) e^-phi - f(w) | with the model quadrature."""
    model._require_member(w)
    parts = []
    for z, delta, node_w in model.decomp.node_chunks():
        f = model.eval_coeffs(coeffs, z)
        kz = model.kernel_column(z, w)
        dens = model.weight.density_from_delta(delta) * node_w
        parts.append(np.sum(f * np.conj(kz) * dens))
    lhs = pairwise_total(parts)
    rhs = complex(model.eval_coeffs(coeffs, np.array([w]))[0])
    return abs(lhs - rhs)


def diagonal_convergence_table(
    family: NeighborhoodFamily,
    weight: Weight,
    basis_rule: Callable[[PlanarDomain], BasisSpec],
    probes: Sequence[complex],
    max_depth: int = 10,
) -> dict:
    """Per scheduled t: diagonal kernel values of the member model at the
    probes, next to the base model's. Build failures mark the row and the
    table continues."""
    for p in probes:
        if not signed_distance(family.base, p).value > 0:
            raise DomainError(f"probe {p} not interior to the base")
    base_model = build_kernel(family.base, weight, basis_rule(family.base), max_depth)
    base_diag = base_model.kernel_diag(np.asarray(probes, dtype=complex))
    rows = []
    models = {}
    for t in family.schedule:
        member = family.member(t)
        try:
            m = build_kernel(member, weight, basis_rule(member), max_depth)
            models[t] = m
            diag = m.kernel_diag(np.asarray(probes, dtype=complex))
            for p, kt, kb in zip(probes, diag, base_diag):
                rows.append(
                    {"t": t, "probe": complex(p), "K_member": float(kt),
                     "K_base": float(kb), "failed": False, "error": ""}
                )
        except (IllConditionedBasisError, ValueError) as exc:
            rows.append(
                {"t": t, "probe": None, "K_member": math.nan,
                 "K_base": math.nan, "failed": True, "error": str(exc)}
            )
    return {"rows": rows, "base_model": base_model, "member_models": models}


def difference_norm_check(
    base_model: KernelModel, t_model: KernelModel, w: complex
) -> tuple[float, float, bool]:
    """lhs = ||K_t(.,w) - K_base(.,w)||^2 in the base inner product,
    rhs = K_base(w,w) - K_t(w,w); PASS iff lhs <= rhs + 1e-6 (1 + rhs)."""
    rim = boundary_samples(base_model.domain, 64)
    vals_t, _ = signed_distance_batch(t_model.domain, rim.real, rim.imag)
    if not np.all(vals_t > 0):
        raise ValueError("t_model domain does not contain the base closure")
    base_model._require_member(w)
    ew_b = np.conj(base_model.ortho_eval(np.array([w]))[:, 0])
    ew_t = np.conj(t_model.ortho_eval(np.array([w]))[:, 0])
    parts = []
    for z, delta, node_w in base_model.decomp.node_chunks():
        kb = base_model.ortho_eval(z).T @ ew_b
        kt = t_model.ortho_eval(z).T @ ew_t
        dens = base_model.weight.density_from_delta(delta) * node_w
        parts.append(np.sum(np.abs(kt - kb) ** 2 * dens))
    lhs = float(pairwise_total(parts).real)
    rhs = float(
        base_model.kernel_diag(np.array([w]))[0] - t_model.kernel_diag(np.array([w]))[0]
    )
    passed = lhs <= rhs + 1e-6 * (1.0 + abs(rhs))
    return lhs, rhs, passed


def density_profile(
    f: Callable[[np.ndarray], np.ndarray],
    family: NeighborhoodFamily,
    weight: Weight,
    basis_rule: Callable[[PlanarDomain], BasisSpec],
    max_depth: int = 10,
) -> list[dict]:
    """Best approximation error of f from each member's basis span, measured
    in the base L2(weight) inner product (residual integrated explicitly)."""
    decomp = decompose(family.base, max_depth)
    rows = []
    for t in family.schedule:
        member = family.member(t)
        basis = basis_rule(member)
        dim = basis.dim
        # pre-normalized Gram on the base: Laurent terms at small holes span
        # many orders of magnitude raw, which would wreck the solve
        G, scales = _gram_and_norms(decomp, basis, weight)
        r_acc = _PairwiseAccumulator()
        for z, delta, node_w in decomp.node_chunks():
            B = scales[:, None] * basis.eval_matrix(z)
            dens = weight.density_from_delta(delta) * node_w
            r_acc.push((B * dens) @ np.conj(np.asarray(f(z))))
        rhs = r_acc.total()
        coeffs = np.linalg.lstsq(G, rhs, rcond=None)[0]
        err_parts = []
        for z, delta, node_w in decomp.node_chunks():
            approx = (scales[:, None] * basis.eval_matrix(z)).T @ np.conj(coeffs)
            dens = weight.density_from_delta(delta) * node_w
            err_parts.append(np.sum(np.abs(np.asarray(f(z)) - approx) ** 2 * dens))
        err2 = float(pairwise_total(err_parts).real)
        rows.append({"t": t, "error": math.sqrt(max(err2, 0.0)), "basis_dim": dim,
                     "n_poles": len(basis.laurent)})
    return rows
