"""Geometry: signed distance, families, attachment bound, tube membership."""

import json
import math

import numpy as np
import pytest

from bergman_lab.domains import (
    DegenerateAnnulusError,
    HartogsDomain,
    NeighborhoodFamily,
    PlanarDomain,
    ScaleUnderflowError,
    TubeDomain,
    boundary_samples,
    dk_bound_check,
    neighborhood_gap_profile,
    project_to_boundary,
    random_interior_points,
    scaled_zalcman,
    signed_distance,
    signed_distance_batch,
    tube_membership,
    zalcman_paper_family,
)

UNIT_DISC = PlanarDomain()
ZALCMAN2 = PlanarDomain(holes=((0.5 + 0j, 0.125), (0.25 + 0j, 1 / 64)))


def test_signed_distance_disc_center():
    sd = signed_distance(UNIT_DISC, 0)
    assert sd.value == 1.0
    assert sd.nearest_component.kind == "outer"


def test_signed_distance_outside_is_negative():
    assert signed_distance(UNIT_DISC, 1.5).value == -0.5


def test_signed_distance_two_hole_zalcman():
    # candidates: outer 0.3, hole 1: 0.2 - 0.125 = 0.075, hole 2: 0.45 - 1/64
    sd = signed_distance(ZALCMAN2, 0.7)
    assert sd.value == pytest.approx(0.075, abs=1e-15)
    assert sd.nearest_component == ("hole", 0)


def test_membership_iff_positive_distance():
    rng = np.random.default_rng(7)
    dom = PlanarDomain(holes=((0.5 + 0j, 0.1),), punctures=(-0.3 + 0.2j,))
    z = rng.uniform(-1.2, 1.2, 2000) + 1j * rng.uniform(-1.2, 1.2, 2000)
    vals, _ = signed_distance_batch(dom, z.real, z.imag)
    for zi, vi in zip(z, vals):
        inside = (
            abs(zi) < 1.0
            and abs(zi - 0.5) > 0.1
            and zi != -0.3 + 0.2j
        )
        assert inside == (vi > 0) or abs(vi) < 1e-15


def test_lipschitz_property_random_pairs():
    rng = np.random.default_rng(11)
    dom = PlanarDomain(holes=((0.5 + 0j, 0.1), (-0.4 + 0.3j, 0.05)), punctures=(0.1 - 0.6j,))
    z1 = rng.uniform(-1.5, 1.5, 10_000) + 1j * rng.uniform(-1.5, 1.5, 10_000)
    z2 = rng.uniform(-1.5, 1.5, 10_000) + 1j * rng.uniform(-1.5, 1.5, 10_000)
    v1, _ = signed_distance_batch(dom, z1.real, z1.imag)
    v2, _ = signed_distance_batch(dom, z2.real, z2.imag)
    assert np.all(np.abs(v1 - v2) <= np.abs(z1 - z2) + 1e-12)


def test_invalid_domains_rejected():
    with pytest.raises(ValueError):
        PlanarDomain(holes=((0.95 + 0j, 0.1),))  # pokes through the outer circle
    with pytest.raises(ValueError):
        PlanarDomain(holes=((0.3 + 0j, 0.1), (0.45 + 0j, 0.1)))  # overlapping
    with pytest.raises(ValueError):
        PlanarDomain(holes=((0.5 + 0j, 0.0),))  # radius-0 hole: use punctures
    with pytest.raises(ValueError):
        PlanarDomain(punctures=(0.5 + 0j,), holes=((0.5 + 0j, 0.1),))


def test_json_round_trip():
    dom = PlanarDomain(
        outer_center=0.1 + 0.2j,
        outer_radius=2.0,
        holes=((0.5 + 0j, 0.125),),
        punctures=(-0.5 + 0.5j,),
    )
    doc = json.loads(dom.to_json())
    assert set(doc) == {"outer", "holes", "punctures"}
    assert doc["outer"] == {"center": [0.1, 0.2], "radius": 2.0}
    assert doc["holes"] == [{"center": [0.5, 0.0], "radius": 0.125}]
    assert doc["punctures"] == [[-0.5, 0.5]]
    assert PlanarDomain.from_json(dom.to_json()) == dom


# ---------------------------------------------------------------------------
# Paper family and neighborhood profiles
# ---------------------------------------------------------------------------


def test_zalcman_paper_family_base_holes():
    base, _ = zalcman_paper_family(4)
    assert base.holes[0] == (0.5 + 0j, 0.125)
    assert base.holes[1] == (0.25 + 0j, 2.0**-6)


def test_zalcman_member_j3_is_pure_disc():
    # shrink at j=3 is 2^-2 = 0.25 which kills all three hole radii
    _, fam = zalcman_paper_family(3)
    member = fam.member(2.0**-3)
    assert member.outer_radius == 1.25
    assert member.holes == ()


def test_zalcman_member_j18_keeps_smallest_hole():
    _, fam = zalcman_paper_family(18)
    member = fam.member(2.0**-18)
    radii = dict((c.real, r) for c, r in member.holes)
    r18 = radii[2.0**-18]
    assert r18 == 2.0**-54 - 2.0**-64 > 0


def test_zalcman_underflow_rejected():
    with pytest.raises(ScaleUnderflowError):
        zalcman_paper_family(33)


def test_family_monotone_nesting():
    fam = NeighborhoodFamily(scaled_zalcman(3), (0.1, 0.05, 0.02, 0.008))
    rng = np.random.default_rng(3)
    prev = None
    for t, member in fam.members():
        if prev is not None:
            pts = random_interior_points(member, 400, rng)
            vals, _ = signed_distance_batch(prev, pts.real, pts.imag)
            assert np.all(vals > 0)  # member(t') subset of member(t), t' < t
        prev = member
    # every member contains the closure of the base
    base_pts = boundary_samples(fam.base, 128)
    for t, member in fam.members():
        vals, _ = signed_distance_batch(member, base_pts.real, base_pts.imag)
        assert np.all(vals > 0)


def test_gap_profile_outer_circle_only():
    fam = NeighborhoodFamily(UNIT_DISC, (0.2, 0.1, 0.05))
    samples = np.exp(1j * np.linspace(0, 2 * math.pi, 33)[:-1])
    rows = neighborhood_gap_profile(fam, samples)
    for row, t in zip(rows, (0.2, 0.1, 0.05)):
        assert row["lambda_hat"] == pytest.approx(t, rel=1e-12)
        assert row["Lambda_hat"] == pytest.approx(t, rel=1e-12)


@pytest.mark.parametrize("j", [12, 15])
def test_gap_profile_paper_lambda_formula_float_regime(j):
    # shrunk radii are float-exact here; at j >= 19 binary64 rounds them away
    base, fam = zalcman_paper_family(j)
    samples = boundary_samples(base, 16)
    rows = neighborhood_gap_profile(fam, samples)
    lam = rows[j - 1]["lambda_hat"]
    assert lam == pytest.approx(2.0 ** (-(2.0 ** (j / 3))), rel=1e-12)


def test_gap_profile_requires_boundary_samples():
    fam = NeighborhoodFamily(UNIT_DISC, (0.1,))
    with pytest.raises(ValueError):
        neighborhood_gap_profile(fam, [])
    with pytest.raises(ValueError):
        neighborhood_gap_profile(fam, [0.5 + 0j])


def test_project_to_boundary():
    dom = ZALCMAN2
    z = 0.52 + 0.01j
    p = project_to_boundary(dom, z)
    assert abs(signed_distance(dom, p).value) < 1e-15


# ---------------------------------------------------------------------------
# Disc attachment bound
# ---------------------------------------------------------------------------


def test_dk_bound_punctured_disc():
    dom = PlanarDomain(punctures=(0j,))
    for r_k in (1e-2, 1e-3):
        report = dk_bound_check(dom, 0j, r_k, samples=512)
        assert report["pass"]
        assert report["max_ratio"] <= 3.0 + 1e-9


def test_dk_bound_case1_ratio_exactly_one():
    # attach at the outer circle; points much closer to a hole are case 1
    dom = PlanarDomain(holes=((0.0j + 0.0, 0.2),))
    report = dk_bound_check(dom, 1.0 + 0j, 0.05, samples=600)
    case1 = [r for r in report["rows"] if r["case"] == 1]
    assert case1, "expected case-1 samples"
    for r in case1:
        assert r["ratio"] == pytest.approx(1.0, abs=1e-12)
    assert report["pass"]


def test_dk_bound_degenerate_annulus():
    with pytest.raises(DegenerateAnnulusError):
        dk_bound_check(PlanarDomain(punctures=(0j,)), 0j, 0.6)


def test_dk_bound_rejects_interior_z0():
    with pytest.raises(ValueError):
        dk_bound_check(UNIT_DISC, 0.5 + 0j, 0.01)


# ---------------------------------------------------------------------------
# Hartogs and tube membership
# ---------------------------------------------------------------------------


def test_hartogs_membership():
    h = HartogsDomain(UNIT_DISC, 1.0)
    assert h.contains(0, 0.5)
    assert not h.contains(0, 1.0)
    assert h.contains(0.5, 0.49)
    assert not h.contains(0.5, 0.51)
    assert not h.contains(1.5, 0.0)


def test_tube_membership_basic():
    tube = TubeDomain(PlanarDomain(punctures=(0j,)), 1.0)
    x_in = (0.8, 0.0)  # delta = 0.2
    assert tube_membership(tube, x_in, (0.1, 0.0))
    assert not tube_membership(tube, x_in, (0.2, 0.0))
    assert tube_membership(tube, x_in, (0.0, 0.0))  # y = 0 slice
    assert not tube_membership(tube, (1.5, 0.0), (0.0, 0.0))


def test_tube_membership_scaling_in_k():
    tube4 = TubeDomain(PlanarDomain(), 4.0)
    assert tube_membership(tube4, (0.0, 0.0), (0.49, 0.0))
    assert not tube_membership(tube4, (0.0, 0.0), (0.51, 0.0))
