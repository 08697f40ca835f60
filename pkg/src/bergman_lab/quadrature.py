"""Deterministic adaptive integration over planar and Hartogs domains.

Cells are dyadic squares; fully-outside subtrees are pruned, everything else
refines to max_depth where cells are tagged inside (center distance exceeds
half the diagonal) or boundary. Boundary cells are resolved by 4x4
subsampling: each subcell contributes the coverage fraction of the half-plane
model cut at its center's signed distance along the nearest-component normal
(exact for straight boundaries, so only curvature at subcell scale remains).
Node traversal is chunked in a fixed order and partial sums combine in a
fixed pairwise tree, so any parallel schedule over chunks reproduces the
sequential result bit for bit.
"""

from __future__ import annotations

import math
from dataclasses import dataclass
from functools import lru_cache

import numpy as np

from .domains import HartogsDomain, PlanarDomain, signed_distance_batch
from .weights import Weight


def _component_normals(domain: PlanarDomain, re, im, comps):
    """|n_x|, |n_y| of the boundary normal of each point's nearest component,
    and a mask of points whose nearest component is a puncture."""
    nh = len(domain.holes)
    cx = np.empty_like(re)
    cy = np.empty_like(im)
    cx.fill(domain.outer_center.real)
    cy.fill(domain.outer_center.imag)
    for i, (c, _) in enumerate(domain.holes):
        m = comps == i + 1
        cx[m] = c.real
        cy[m] = c.imag
    punct = comps > nh
    for i, p in enumerate(domain.punctures):
        m = comps == nh + 1 + i
        cx[m] = p.real
        cy[m] = p.imag
    dx = re - cx
    dy = im - cy
    norm = np.hypot(dx, dy)
    safe = norm > 0
    nx = np.where(safe, np.abs(dx) / np.where(safe, norm, 1.0), 1.0)
    ny = np.where(safe, np.abs(dy) / np.where(safe, norm, 1.0), 0.0)
    return nx, ny, punct


def _halfplane_fraction(d, nx, ny, s):
    """Area fraction of an axis-aligned square of side s on the domain side of
    a straight boundary at signed distance d from the square center with
    outward normal (|n_x|, |n_y|)."""
    a = np.maximum(nx, ny) * s
    b = np.minimum(nx, ny) * s
    c = d + 0.5 * (a + b)
    a = np.maximum(a, 1e-300)
    frac_lin = np.clip(c / a, 0.0, 1.0)
    with np.errstate(divide="ignore", invalid="ignore"):
        lo = c * c / (2.0 * a * b)
        hi = 1.0 - (a + b - c) ** 2 / (2.0 * a * b)
        mid = (c - 0.5 * b) / a
    f = np.where(c <= b, lo, np.where(c <= a, mid, hi))
    f = np.where(b <= 0.0, frac_lin, f)
    return np.clip(np.where(c <= 0.0, 0.0, np.where(c >= a + b, 1.0, f)), 0.0, 1.0)

MAX_DEPTH_LIMIT = 14
NSUB = 4  # boundary cells are subsampled on an NSUB x NSUB grid
CHUNK = 1 << 17

_SQRT2 = math.sqrt(2.0)


def pairwise_total(parts):
    """Reduce a list of partial sums in a fixed pairwise tree."""
    parts = list(parts)
    if not parts:
        return 0.0
    while len(parts) > 1:
        parts = [
            parts[i] + parts[i + 1] if i + 1 < len(parts) else parts[i]
            for i in range(0, len(parts), 2)
        ]
    return parts[0]


@dataclass(frozen=True)
class CellDecomposition:
    """Dyadic cell cover of a planar domain at a fixed maximum depth."""

    domain: PlanarDomain
    max_depth: int
    origin: complex  # lower-left corner of the root square
    h: float  # cell side at max_depth
    inside_ix: np.ndarray
    inside_iy: np.ndarray
    inside_delta: np.ndarray
    boundary_ix: np.ndarray
    boundary_iy: np.ndarray
    boundary_delta: np.ndarray
    sub_re: np.ndarray
    sub_im: np.ndarray
    sub_delta: np.ndarray
    sub_parent: np.ndarray
    sub_w: np.ndarray  # half-plane coverage fraction per subcell
    outside_levels: tuple  # (depth, ix, iy) arrays of pruned cells

    @property
    def cell_area(self) -> float:
        return self.h * self.h

    @property
    def sub_area(self) -> float:
        return self.cell_area / (NSUB * NSUB)

    @property
    def n_inside(self) -> int:
        return len(self.inside_ix)

    @property
    def n_boundary(self) -> int:
        return len(self.boundary_ix)

    def cell_centers(self, ix, iy) -> np.ndarray:
        return (
            self.origin
            + (ix.astype(np.float64) + 0.5) * self.h
            + 1j * (iy.astype(np.float64) + 0.5) * self.h
        )

    def inside_z(self, sl=slice(None)) -> np.ndarray:
        return self.cell_centers(self.inside_ix[sl], self.inside_iy[sl])

    def boundary_z(self) -> np.ndarray:
        return self.cell_centers(self.boundary_ix, self.boundary_iy)

    def node_chunks(self, chunk: int = CHUNK):
        """Yield (z, delta, node_weight) blocks: inside cells then boundary
        subcells, in storage order. node_weight is the area measure carried
        by each node (scalar for inside cells, per-node for subcells)."""
        n = self.n_inside
        for lo in range(0, n, chunk):
            sl = slice(lo, min(lo + chunk, n))
            yield self.inside_z(sl), self.inside_delta[sl], self.cell_area
        m = len(self.sub_re)
        for lo in range(0, m, chunk):
            sl = slice(lo, min(lo + chunk, m))
            yield (
                self.sub_re[sl] + 1j * self.sub_im[sl],
                self.sub_delta[sl],
                self.sub_w[sl] * self.sub_area,
            )


def _subsample_boundary(domain, origin, h, ix, iy):
    """Subcell centers of boundary cells on the NSUB grid, with half-plane
    coverage fractions; subcells with zero coverage are dropped."""
    if len(ix) == 0:
        empty = np.empty(0, dtype=np.float64)
        return empty, empty.copy(), empty.copy(), np.empty(0, dtype=np.int64), empty.copy()
    offs = (np.arange(NSUB) + 0.5) / NSUB
    gx, gy = np.meshgrid(offs, offs, indexing="ij")
    gx, gy = gx.ravel(), gy.ravel()
    re = (origin.real + (ix[:, None] + gx[None, :]) * h).ravel()
    im = (origin.imag + (iy[:, None] + gy[None, :]) * h).ravel()
    parent = np.repeat(np.arange(len(ix), dtype=np.int64), NSUB * NSUB)
    vals, comps = signed_distance_batch(domain, re, im)
    nx, ny, punct = _component_normals(domain, re, im, comps)
    w = _halfplane_fraction(vals, nx, ny, h / NSUB)
    # a puncture is a point, not a cut: full coverage wherever distance > 0
    w = np.where(punct, (vals > 0.0).astype(np.float64), w)
    keep = w > 0.0
    return re[keep], im[keep], vals[keep], parent[keep], w[keep]


def _decompose_impl(domain: PlanarDomain, max_depth: int) -> CellDecomposition:
    radius = domain.outer_radius
    origin = domain.outer_center - radius * (1 + 1j)
    side = 2.0 * radius

    ix = np.zeros(1, dtype=np.int64)
    iy = np.zeros(1, dtype=np.int64)
    outside_levels = []
    for depth in range(max_depth + 1):
        h = side / (1 << depth)
        half_diag = h / _SQRT2
        re = origin.real + (ix.astype(np.float64) + 0.5) * h
        im = origin.imag + (iy.astype(np.float64) + 0.5) * h
        vals, _ = signed_distance_batch(domain, re, im)
        outside = vals < -half_diag
        if outside.any():
            outside_levels.append((depth, ix[outside], iy[outside]))
        if depth == max_depth:
            inside = vals > half_diag
            boundary = ~inside & ~outside
            sub = _subsample_boundary(domain, origin, h, ix[boundary], iy[boundary])
            return CellDecomposition(
                domain=domain,
                max_depth=max_depth,
                origin=origin,
                h=h,
                inside_ix=ix[inside],
                inside_iy=iy[inside],
                inside_delta=vals[inside],
                boundary_ix=ix[boundary],
                boundary_iy=iy[boundary],
                boundary_delta=vals[boundary],
                sub_re=sub[0],
                sub_im=sub[1],
                sub_delta=sub[2],
                sub_parent=sub[3],
                sub_w=sub[4],
                outside_levels=tuple(outside_levels),
            )
        keep = ~outside
        kx, ky = ix[keep], iy[keep]
        # children stay adjacent to their parent (Z-order): node chunks are
        # spatially local, which basis assembly exploits for support cutoffs
        n = len(kx)
        ix = np.empty(4 * n, dtype=np.int64)
        iy = np.empty(4 * n, dtype=np.int64)
        for k, (dx, dy) in enumerate(((0, 0), (1, 0), (0, 1), (1, 1))):
            ix[k::4] = 2 * kx + dx
            iy[k::4] = 2 * ky + dy
    raise AssertionError("unreachable")


@lru_cache(maxsize=6)
def _decompose_cached(domain: PlanarDomain, max_depth: int) -> CellDecomposition:
    return _decompose_impl(domain, max_depth)


def decompose(domain: PlanarDomain, max_depth: int) -> CellDecomposition:
    if not 0 <= max_depth <= MAX_DEPTH_LIMIT:
        raise ValueError(f"max_depth must be in 0..{MAX_DEPTH_LIMIT}")
    return _decompose_cached(domain, max_depth)


def clear_decomposition_cache():
    _decompose_cached.cache_clear()


@dataclass(frozen=True)
class IntegralEstimate:
    value: complex
    boundary_mass_bound: float
    max_depth: int
    flagged: bool = False


def integrate_on(
    decomp: CellDecomposition,
    integrand,
    weight: Weight = Weight.zero(),
    tolerance: float | None = None,
) -> IntegralEstimate:
    """Midpoint rule over the decomposition against the weight density.

    integrand must accept a complex ndarray and return an ndarray.
    """
    parts = []
    local = np.zeros(decomp.n_boundary, dtype=np.float64)
    for z, delta, node_w in decomp.node_chunks():
        fw = np.asarray(integrand(z)) * weight.density_from_delta(delta)
        parts.append(np.sum(fw * node_w))
    # second pass over boundary members for the per-cell bound (cheap: few cells)
    m = len(decomp.sub_re)
    for lo in range(0, m, CHUNK):
        sl = slice(lo, min(lo + CHUNK, m))
        z = decomp.sub_re[sl] + 1j * decomp.sub_im[sl]
        fw = np.abs(np.asarray(integrand(z)) * weight.density_from_delta(decomp.sub_delta[sl]))
        np.maximum.at(local, decomp.sub_parent[sl], fw)
    if decomp.n_boundary:
        # cells with no member samples inherit the global bound
        gmax = local.max() if local.size else 0.0
        covered = np.zeros(decomp.n_boundary, dtype=bool)
        covered[np.unique(decomp.sub_parent)] = True
        local[~covered] = gmax
        bound = float(np.sum(local) * decomp.cell_area)
    else:
        bound = 0.0
    value = pairwise_total(parts)
    flagged = tolerance is not None and bound > tolerance
    return IntegralEstimate(value, bound, decomp.max_depth, flagged)


def integrate_planar(
    domain: PlanarDomain,
    integrand,
    weight: Weight = Weight.zero(),
    max_depth: int = 11,
    tolerance: float | None = None,
) -> IntegralEstimate:
    return integrate_on(decompose(domain, max_depth), integrand, weight, tolerance)


def collar_nodes(decomp: CellDecomposition, t: float):
    """Quadrature nodes of the collar {0 < delta < t}: fully-inside cells at
    full weight, interface cells refined by NSUB subsampling with half-plane
    fractions against the delta = t level set (whose normal is the nearest
    component's). Returns (z, delta, weights, ambiguous_measure)."""
    half_diag = decomp.h / _SQRT2
    d = decomp.inside_delta
    full = d < t - half_diag
    straddle = ~full & (d < t + half_diag)
    zs, ds, ws = [], [], []
    zs.append(decomp.inside_z(np.nonzero(full)[0]))
    ds.append(d[full])
    ws.append(np.full(int(full.sum()), decomp.cell_area))
    n_straddle = int(straddle.sum())
    if n_straddle:
        sx, sy = decomp.inside_ix[straddle], decomp.inside_iy[straddle]
        offs = (np.arange(NSUB) + 0.5) / NSUB
        gx, gy = np.meshgrid(offs, offs, indexing="ij")
        gx, gy = gx.ravel(), gy.ravel()
        re = (decomp.origin.real + (sx[:, None] + gx[None, :]) * decomp.h).ravel()
        im = (decomp.origin.imag + (sy[:, None] + gy[None, :]) * decomp.h).ravel()
        vals, comps = signed_distance_batch(decomp.domain, re, im)
        nx, ny, _ = _component_normals(decomp.domain, re, im, comps)
        w = _halfplane_fraction(t - vals, nx, ny, decomp.h / NSUB)
        keep = w > 0.0
        zs.append(re[keep] + 1j * im[keep])
        ds.append(vals[keep])
        ws.append(w[keep] * decomp.sub_area)
    keep_b = decomp.sub_delta < t
    zs.append(decomp.sub_re[keep_b] + 1j * decomp.sub_im[keep_b])
    ds.append(decomp.sub_delta[keep_b])
    ws.append(decomp.sub_w[keep_b] * decomp.sub_area)
    ambiguous = (n_straddle + decomp.n_boundary) * decomp.cell_area / NSUB
    return np.concatenate(zs), np.concatenate(ds), np.concatenate(ws), ambiguous


# ---------------------------------------------------------------------------
# Hartogs domains: planar cells x polar fiber rule scaled to |w| < delta^alpha
# ---------------------------------------------------------------------------


@lru_cache(maxsize=8)
def fiber_rule(n_r: int = 64, n_theta: int = 64):
    """Midpoint-radial x uniform-angular rule on the unit disc.

    Returns (u, uw) with sum(g(u) * uw) ~ integral of g over |u| < 1; the
    angular rule is exact for harmonics e^(i m theta), |m| < n_theta.
    """
    rho = (np.arange(n_r) + 0.5) / n_r
    theta = 2.0 * np.pi * np.arange(n_theta) / n_theta
    u = (rho[:, None] * np.exp(1j * theta)[None, :]).ravel()
    uw = np.repeat(rho * (1.0 / n_r) * (2.0 * np.pi / n_theta), n_theta)
    return u, uw


def integrate_hartogs(
    h: HartogsDomain,
    integrand,
    max_depth: int = 8,
    n_r: int = 64,
    n_theta: int = 64,
    tolerance: float | None = None,
) -> IntegralEstimate:
    """4D integral over {z in base, |w| < delta(z)^alpha}.

    integrand(z, w) must broadcast over equal-shaped complex arrays. Per
    planar node the fiber disc is the reference rule scaled by R = delta^alpha
    (measure factor R^2).
    """
    decomp = decompose(h.base, max_depth)
    u, uw = fiber_rule(n_r, n_theta)
    nf = len(u)
    cells_per_chunk = max(1, CHUNK // nf)

    parts = []
    sub_local = np.zeros(decomp.n_boundary, dtype=np.float64)

    def fiber_block(z, delta, node_w, parent=None):
        R = np.maximum(delta, 0.0) ** h.alpha
        W = R[:, None] * u[None, :]
        Z = np.broadcast_to(z[:, None], W.shape)
        F = np.asarray(integrand(Z, W))
        per_cell = F @ uw  # fiber reduction
        parts.append(np.sum(per_cell * (R * R * node_w)))
        if parent is not None:
            absint = (np.abs(F) @ uw) * R * R
            np.maximum.at(sub_local, parent, absint)

    n = decomp.n_inside
    for lo in range(0, n, cells_per_chunk):
        sl = slice(lo, min(lo + cells_per_chunk, n))
        fiber_block(decomp.inside_z(sl), decomp.inside_delta[sl], decomp.cell_area)
    m = len(decomp.sub_re)
    for lo in range(0, m, cells_per_chunk):
        sl = slice(lo, min(lo + cells_per_chunk, m))
        fiber_block(
            decomp.sub_re[sl] + 1j * decomp.sub_im[sl],
            decomp.sub_delta[sl],
            decomp.sub_w[sl] * decomp.sub_area,
            parent=decomp.sub_parent[sl],
        )
    if decomp.n_boundary:
        gmax = sub_local.max() if sub_local.size else 0.0
        covered = np.zeros(decomp.n_boundary, dtype=bool)
        covered[np.unique(decomp.sub_parent)] = True
        sub_local[~covered] = gmax
        bound = float(np.sum(sub_local) * decomp.cell_area)
    else:
        bound = 0.0
    value = pairwise_total(parts)
    flagged = tolerance is not None and bound > tolerance
    return IntegralEstimate(value, bound, max_depth, flagged)


def hartogs_monomial_gram(
    h: HartogsDomain,
    n_deg: int,
    j_deg: int,
    max_depth: int = 8,
    n_r: int = 64,
    n_theta: int = 64,
):
    """Gram of the monomials z^n w^j (n <= n_deg, j <= j_deg) over the Hartogs
    domain with weight 1, using the same product rule as integrate_hartogs.

    The product rule factors exactly: fiber moments F[j,i] on the reference
    disc times planar moments of z^n conj(z)^m R^(j+i+2). Returns (G, order)
    with order[k] = (n, j) and k = j*(n_deg+1) + n.
    """
    decomp = decompose(h.base, max_depth)
    u, uw = fiber_rule(n_r, n_theta)
    U = u[None, :] ** np.arange(j_deg + 1)[:, None]
    F = (U * uw) @ U.conj().T

    npoly = n_deg + 1
    moments = np.zeros((2 * j_deg + 1, npoly, npoly), dtype=complex)
    for z, delta, area in decomp.node_chunks():
        R = delta**h.alpha
        V = z[None, :] ** np.arange(npoly)[:, None]
        Rp = R * R * area
        for p in range(2 * j_deg + 1):
            moments[p] += (V * Rp) @ V.conj().T
            Rp = Rp * R

    dim = npoly * (j_deg + 1)
    G = np.zeros((dim, dim), dtype=complex)
    order = []
    for j in range(j_deg + 1):
        for n in range(npoly):
            order.append((n, j))
    for j in range(j_deg + 1):
        for i in range(j_deg + 1):
            block = F[j, i] * moments[j + i]
            G[
                j * npoly : (j + 1) * npoly,
                i * npoly : (i + 1) * npoly,
            ] = block
    return G, order
