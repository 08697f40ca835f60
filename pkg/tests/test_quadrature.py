"""Quadrature oracles: closed-form areas, moments and fiber integrals."""

import math

import numpy as np
import pytest

from bergman_lab.domains import HartogsDomain, PlanarDomain
from bergman_lab.quadrature import (
    collar_nodes,
    decompose,
    fiber_rule,
    integrate_hartogs,
    integrate_on,
    integrate_planar,
    pairwise_total,
)
from bergman_lab.weights import Weight

DISC = PlanarDomain()


def ones(z):
    return np.ones_like(z, dtype=np.float64)


def test_disc_area_depth11():
    est = integrate_planar(DISC, ones, Weight.zero(), 11)
    assert est.value == pytest.approx(math.pi, abs=1e-6)


def test_disc_weighted_area_is_beta_integral():
    # density (1 - |z|): 2*pi*B(2,2) = pi/3
    est = integrate_planar(DISC, ones, Weight.neg_log_distance(1.0), 11)
    assert est.value == pytest.approx(math.pi / 3, abs=1e-5)


def test_disc_second_moment():
    est = integrate_planar(DISC, lambda z: np.abs(z) ** 2, Weight.zero(), 11)
    assert est.value == pytest.approx(math.pi / 2, abs=1e-6)


def test_depth_cap_enforced():
    with pytest.raises(ValueError):
        integrate_planar(DISC, ones, Weight.zero(), 15)


def test_tolerance_flagging():
    est = integrate_planar(DISC, ones, Weight.zero(), 6, tolerance=1e-9)
    assert est.flagged
    est2 = integrate_planar(DISC, ones, Weight.zero(), 6, tolerance=1.0)
    assert not est2.flagged


def test_refinement_changes_less_than_previous_bound():
    for depth in (7, 8, 9):
        a = integrate_planar(DISC, lambda z: np.exp(z.real), Weight.zero(), depth)
        b = integrate_planar(DISC, lambda z: np.exp(z.real), Weight.zero(), depth + 1)
        assert abs(b.value - a.value) <= a.boundary_mass_bound


def test_linearity_same_decomposition():
    f = lambda z: z**2
    g = lambda z: np.conj(z) + 1.0
    a, b = 2.3, -1.7j
    dec = decompose(DISC, 9)
    w = Weight.neg_log_distance(1.0)
    lhs = integrate_on(dec, lambda z: a * f(z) + b * g(z), w).value
    rhs = a * integrate_on(dec, f, w).value + b * integrate_on(dec, g, w).value
    assert abs(lhs - rhs) < 1e-13 * (1 + abs(lhs))


def test_conjugate_symmetry():
    f = lambda z: z**3 + 0.5j * z
    est = integrate_planar(DISC, f, Weight.zero(), 9)
    est_conj = integrate_planar(DISC, lambda z: np.conj(f(z)), Weight.zero(), 9)
    assert est_conj.value == pytest.approx(np.conj(est.value), abs=1e-14)


def test_cell_tags_respect_distance():
    dec = decompose(PlanarDomain(holes=((0.5 + 0j, 0.125),)), 8)
    half_diag = dec.h / math.sqrt(2)
    assert np.all(dec.inside_delta > half_diag)
    assert np.all(np.abs(dec.boundary_delta) <= half_diag + 1e-15)
    for depth, ix, iy in dec.outside_levels:
        h = 2.0 * dec.domain.outer_radius / (1 << depth)
        z = dec.domain.outer_center + (ix + 0.5) * h + 1j * (iy + 0.5) * h - dec.domain.outer_radius * (1 + 1j)
        # recorded outside cells were strictly outside at their depth
        from bergman_lab.domains import signed_distance_batch

        vals, _ = signed_distance_batch(dec.domain, z.real, z.imag)
        assert np.all(vals < -h / math.sqrt(2) + 1e-15)


def test_inside_and_boundary_cover_domain():
    dec = decompose(DISC, 7)
    rng = np.random.default_rng(5)
    from bergman_lab.domains import random_interior_points

    pts = random_interior_points(DISC, 3000, rng)
    ix = np.floor((pts.real - dec.origin.real) / dec.h).astype(np.int64)
    iy = np.floor((pts.imag - dec.origin.imag) / dec.h).astype(np.int64)
    retained = set(zip(dec.inside_ix.tolist(), dec.inside_iy.tolist()))
    retained.update(zip(dec.boundary_ix.tolist(), dec.boundary_iy.tolist()))
    for a, b in zip(ix.tolist(), iy.tolist()):
        assert (a, b) in retained


def test_pairwise_total_matches_sum():
    rng = np.random.default_rng(0)
    xs = list(rng.normal(size=37))
    assert pairwise_total(xs) == pytest.approx(sum(xs), abs=1e-12)
    assert pairwise_total([]) == 0.0


# ---------------------------------------------------------------------------
# Hartogs integrals
# ---------------------------------------------------------------------------


def test_hartogs_volume():
    h = HartogsDomain(DISC, 1.0)
    est = integrate_hartogs(h, lambda z, w: np.ones_like(z, dtype=np.float64), 8)
    assert est.value == pytest.approx(math.pi**2 / 6, abs=1e-4)


def test_hartogs_odd_integrand_vanishes():
    h = HartogsDomain(DISC, 1.0)
    est = integrate_hartogs(h, lambda z, w: w, 7)
    assert abs(est.value) < 1e-8


def test_hartogs_fiber_second_moment():
    # (pi/2) * integral of delta^4 = (pi/2) * 2*pi*B(2,5) = pi^2/30
    h = HartogsDomain(DISC, 1.0)
    est = integrate_hartogs(h, lambda z, w: np.abs(w) ** 2, 8)
    assert est.value == pytest.approx(math.pi**2 / 30, abs=1e-4)


def test_hartogs_slice_norm_with_poly_factor():
    # |z w|^2: (pi/2) * integral |z|^2 delta^4 = (pi/2)*2*pi*B(4,5) = pi^2/280
    h = HartogsDomain(DISC, 1.0)
    est = integrate_hartogs(h, lambda z, w: np.abs(z * w) ** 2, 8)
    assert est.value == pytest.approx(math.pi**2 / 280, abs=1e-5)


def test_fiber_rule_moments():
    u, uw = fiber_rule(64, 64)
    assert np.sum(uw) == pytest.approx(math.pi, rel=1e-12)  # radial midpoint exact for r dr
    assert abs(np.sum(u * uw)) < 1e-14  # angular exactness
    assert np.sum(np.abs(u) ** 2 * uw) == pytest.approx(math.pi / 2, rel=1e-3)


# ---------------------------------------------------------------------------
# Collar restriction
# ---------------------------------------------------------------------------


def test_collar_annulus_area():
    dec = decompose(DISC, 10)
    for t in (0.3, 0.1, 0.05):
        z, d, w, ambiguous = collar_nodes(dec, t)
        area = np.sum(w)
        exact = math.pi * (1 - (1 - t) ** 2)
        assert area == pytest.approx(exact, rel=2e-3)
        # interface subcells carry fractional weight; centers sit within a
        # subcell diagonal of the level set
        assert np.all(d < t + dec.h)
