import numpy as np
import pytest
from hypothesis import given
from hypothesis import strategies as st

from awrelax.model import ModelConfig
from awrelax.region import (Region, RegionError, audit_hypotheses, boundary_condition_check,
                            boundary_dot, boundary_gradient, contains, equilibrium_slack,
                            sample_boundary, sigma_violation, source_inward_check,
                            source_inward_margin)

MODEL = ModelConfig()
REGION = Region(2.0, 0.7)


def test_contains_examples():
    inside, s = contains(MODEL, REGION, 1.0, 2.0)
    assert inside and s[0] == 0.0 and s[1] == pytest.approx(0.3)
    inside, _ = contains(MODEL, REGION, 1.0, 2.5)
    assert not inside
    # Z = 0.75 exactly at (0.5, 0.625)
    inside, s = contains(MODEL, Region(2.0, 0.75), 0.5, 0.625)
    assert inside and s[1] == 0.0


def test_contains_at_vacuum_uses_multiplied_form():
    assert contains(MODEL, REGION, 0.0, 0.0)[0]
    assert not contains(MODEL, REGION, 0.0, 1e-3)[0]


def test_region_requires_c1_above_c2():
    with pytest.raises(RegionError):
        Region(2.0, 2.0)
    with pytest.raises(RegionError):
        Region(1.0, 2.0)


@pytest.mark.parametrize("c1, c2, gamma, corner", [
    (2.0, 0.7, 1.0, (1.3, 2.6)),
    (2.0, 1.0, 2.0, (1.0, 2.0)),
])
def test_corner(c1, c2, gamma, corner):
    cfg = ModelConfig(gamma=gamma)
    c = Region(c1, c2).corner(cfg)
    assert (c.rho, c.m) == pytest.approx(corner, abs=1e-12)
    inv = cfg.riemann_invariants(c.rho, c.m)
    assert float(inv.W) == pytest.approx(c1, abs=1e-12)
    assert float(inv.Z) == pytest.approx(c2, abs=1e-12)


@given(rho=st.floats(0.01, 1.5), m=st.floats(-1, 4), dm=st.floats(0, 1))
def test_membership_is_monotone_in_momentum(rho, m, dm):
    _, s = contains(MODEL, REGION, rho, m)
    _, lower = contains(MODEL, REGION, rho, m - dm)
    _, upper = contains(MODEL, REGION, rho, m + dm)
    if s[0] >= 0:
        assert lower[0] >= 0
    if s[1] >= 0:
        assert upper[1] >= 0


@given(rho=st.floats(0.01, 2.0))
def test_fixed_density_section_is_an_interval(rho):
    lo, hi = REGION.momentum_bounds(MODEL, rho)
    rho1 = REGION.corner(MODEL).rho
    assert (lo <= hi + 1e-15) == (rho <= rho1 + 1e-12)
    if lo <= hi:
        for m in np.linspace(lo, hi, 7):
            assert np.all(contains(MODEL, REGION, rho, m)[1][:2] >= -1e-12)


def test_boundary_dot_example():
    assert float(boundary_dot(MODEL, (1.0, 2.0), (1.0, 1.0), curve=1)) == pytest.approx(1.0)
    assert float(boundary_dot(MODEL, (1.0, 2.0), (1.0, 2.0), curve=1)) == 0.0


def test_gradients_match_finite_differences():
    rho, m, h = 0.6, 1.0, 1e-6
    inv = lambda r, q: MODEL.riemann_invariants(r, q)
    g_w = [(inv(rho + h, m).W - inv(rho - h, m).W) / (2 * h), (inv(rho, m + h).W - inv(rho, m - h).W) / (2 * h)]
    g_z = [(inv(rho + h, m).Z - inv(rho - h, m).Z) / (2 * h), (inv(rho, m + h).Z - inv(rho, m - h).Z) / (2 * h)]
    np.testing.assert_allclose(boundary_gradient(MODEL, rho, m, 1), g_w, rtol=1e-7)
    np.testing.assert_allclose(boundary_gradient(MODEL, rho, m, 2), -np.array(g_z), rtol=1e-7)


def test_boundary_condition_positive_on_default_region():
    assert boundary_condition_check(MODEL, REGION, 100, 100, seed=0) > 0
    assert boundary_condition_check(ModelConfig(gamma=2.0), Region(2.0, 1.0), 50, 50, seed=1) > 0


def test_boundary_condition_sign_invariant_under_gradient_scaling():
    u = sample_boundary(MODEL, REGION, 20, 1)
    y = (0.5, 0.8)
    d = boundary_dot(MODEL, (u.rho, u.m), y, 1)
    g = boundary_gradient(MODEL, u.rho, u.m, 1) * 3.7
    scaled = (u.rho - y[0]) * g[0] + (u.m - y[1]) * g[1]
    np.testing.assert_array_equal(np.sign(d), np.sign(scaled))


def test_boundary_condition_rejects_empty_sample():
    with pytest.raises(RegionError):
        boundary_condition_check(MODEL, REGION, 0, 10)


def test_source_inward_on_upper_curve_when_equilibrium_below():
    rho = np.array([0.3])
    m = REGION.c1 * rho
    assert MODEL.h(rho) < m
    assert source_inward_margin(MODEL, REGION, rho, m, curve=1) > 0


def test_source_inward_vanishes_on_equilibrium():
    # region whose upper curve passes through (rho, h(rho)) at rho = 0.4
    rho = 0.4
    r = Region(float(MODEL.h(rho) / rho), 0.7)
    assert float(source_inward_margin(MODEL, r, rho, MODEL.h(rho), curve=1)) == pytest.approx(0.0, abs=1e-15)


def test_source_inward_on_data_hull():
    assert source_inward_check(MODEL, REGION, 1000, rho_range=(0.1, 0.5)) >= 0
    # beyond rho = 0.52 the equilibrium curve leaves the region through Z = c2
    assert source_inward_check(MODEL, REGION, 1000, rho_range=(0.1, 1.2)) < 0


def test_audit_default_configuration():
    rep = audit_hypotheses(MODEL, REGION, (0.1, 0.5))
    assert rep.equilibrium_in_hull and rep.subcharacteristic_in_hull
    assert not rep.literal_containment
    lit = [v for v in rep.violations if v[0] == "literal_containment"]
    assert len(lit) == 1
    assert lit[0][1] == pytest.approx(0.52, abs=1e-9)
    assert lit[0][2] == pytest.approx(1.3, abs=1e-9)
    assert rep.hull_ok


def test_audit_reports_equilibrium_outside_region():
    # max of Z along h on the hull is 1.75 at rho = 0.1
    rep = audit_hypotheses(MODEL, Region(2.0, 1.0), (0.1, 0.5))
    assert not rep.equilibrium_in_hull
    (name, lo, hi), = [v for v in rep.violations if v[0] == "equilibrium_outside_region"]
    assert (lo, hi) == pytest.approx((0.4, 0.5), abs=1e-9)
    rep = audit_hypotheses(MODEL, Region(2.0, 1.8), (0.1, 0.5))
    bad = [v for v in rep.violations if v[0] == "equilibrium_outside_region"]
    assert bad[0][1:] == pytest.approx((0.1, 0.5))


def test_audit_empty_hull_passes_vacuously():
    rep = audit_hypotheses(MODEL, Region(2.0, 1.8), (0.5, 0.1))
    assert rep.equilibrium_in_hull and rep.subcharacteristic_in_hull


def test_audit_subcharacteristic_violation_interval():
    rep = audit_hypotheses(ModelConfig(b=0.5), REGION, (0.2, 0.5))
    assert not rep.subcharacteristic_in_hull
    assert ("subcharacteristic", 0.2, 0.5) in rep.violations


def test_audit_is_reproducible_and_serializes():
    data = (np.array([0.2, 0.5]), MODEL.h(np.array([0.2, 0.5])))
    a = audit_hypotheses(MODEL, REGION, (0.2, 0.5), data).to_text()
    b = audit_hypotheses(MODEL, REGION, (0.2, 0.5), data).to_text()
    assert a == b
    assert "initial_data_inside: True" in a
    for line in a.splitlines():
        key, _, value = line.partition(": ")
        assert key and value


def test_equilibrium_slack_limit_at_vacuum():
    assert float(equilibrium_slack(MODEL, REGION, 0.0)) == pytest.approx(0.0)


def test_sigma_violation_examples():
    rho = np.array([0.3, 0.4])
    assert sigma_violation(MODEL, REGION, rho, MODEL.h(rho)) > 0
    rho = np.array([0.3, 1.0])
    assert sigma_violation(MODEL, REGION, rho, np.array([float(MODEL.h(0.3)), 2.0])) == 0.0
