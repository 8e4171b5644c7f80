import numpy as np
import pytest
from hypothesis import given, settings
from hypothesis import strategies as st

from awrelax.model import DomainError, ModelConfig, VacuumError

DEFAULT = ModelConfig()
densities = st.floats(min_value=0.05, max_value=1.0)
momenta = st.floats(min_value=0.0, max_value=2.0)


def fd_jacobian(cfg, rho, m, h=1e-6):
    """Central-difference Jacobian of the flux, independent of the analytic one."""
    fr = (cfg.flux(rho + h, m) - cfg.flux(rho - h, m)) / (2 * h)
    fm = (cfg.flux(rho, m + h) - cfg.flux(rho, m - h)) / (2 * h)
    return np.column_stack([fr, fm])


@pytest.mark.parametrize("rho, gamma, expected", [
    (0.0, 1.0, (0.0, 1.0, 0.0)),
    (1.0, 1.0, (1.0, 1.0, 0.0)),
    (0.5, 2.0, (0.25, 1.0, 2.0)),
])
def test_pressure_values(rho, gamma, expected):
    got = ModelConfig(gamma=gamma).pressure(rho)
    np.testing.assert_allclose(got, expected, rtol=0, atol=1e-15)


def test_pressure_rejects_negative_density():
    with pytest.raises(DomainError):
        DEFAULT.pressure(-0.1)


@given(rho=st.floats(0.1, 2.0), gamma=st.floats(0.5, 3.0), kappa=st.floats(0.5, 2.0))
def test_pressure_derivatives_match_finite_differences(rho, gamma, kappa):
    cfg = ModelConfig(gamma=gamma, kappa=kappa)
    h = 1e-5
    p, dp, d2p = cfg.pressure(rho)
    fd1 = (cfg.pressure(rho + h)[0] - cfg.pressure(rho - h)[0]) / (2 * h)
    fd2 = (cfg.pressure(rho + h)[1] - cfg.pressure(rho - h)[1]) / (2 * h)
    assert dp == pytest.approx(fd1, rel=1e-6, abs=1e-8)
    assert d2p == pytest.approx(fd2, rel=1e-6, abs=1e-7)


@given(rho=st.floats(0.01, 1.0))
def test_pressure_increasing_and_theta_convex(rho):
    p, dp, d2p = DEFAULT.pressure(rho)
    assert dp > 0
    # (rho P)'' = 2P' + rho P''
    assert 2 * dp + rho * d2p > 0


def test_equilibrium_momentum_values():
    cfg = ModelConfig(a=2.0, b=1.5)
    assert cfg.h(0.0) == 0.0
    h, dh, d2h = cfg.equilibrium_momentum(0.5)
    assert (h, dh, d2h) == pytest.approx((0.625, 0.5, -3.0), abs=1e-15)
    assert cfg.h(0.4) == pytest.approx(0.56, abs=1e-15)


def test_tabulated_equilibrium_law_reproduces_quadratic():
    nodes = np.linspace(0, 1, 41)
    tab = ModelConfig(h_table=(tuple(nodes), tuple(DEFAULT.h(nodes))))
    r = np.linspace(0.1, 0.9, 17)
    np.testing.assert_allclose(tab.h(r), DEFAULT.h(r), atol=1e-5)
    np.testing.assert_allclose(tab.equilibrium_momentum(r)[1], DEFAULT.equilibrium_momentum(r)[1],
                               atol=1e-3)


@pytest.mark.parametrize("rho, m, expected", [
    (1.0, 2.0, (1.0, 2.0)),
    (0.5, 1.0, (0.75, 1.5)),
])
def test_flux_values(rho, m, expected):
    np.testing.assert_allclose(DEFAULT.flux(rho, m), expected, atol=1e-15)
    assert DEFAULT.velocity(0.5, 1.0) == pytest.approx(1.5)


@given(rho=densities)
def test_flux_density_component_vanishes_at_zero_velocity(rho):
    m = rho * DEFAULT.pressure(rho)[0]
    assert DEFAULT.flux(rho, m)[0] == pytest.approx(0.0, abs=1e-15)


@given(rho=densities, m=momenta)
def test_flux_first_component_is_algebraic_identity(rho, m):
    assert DEFAULT.flux(rho, m)[0] == pytest.approx(m - rho * DEFAULT.pressure(rho)[0], abs=1e-15)


def test_vacuum_proximity_raises():
    for fn in (DEFAULT.flux, DEFAULT.eigensystem, DEFAULT.riemann_invariants):
        with pytest.raises(VacuumError):
            fn(1e-10, 0.0)


@pytest.mark.parametrize("rho, m, lam", [((1.0), 2.0, (0.0, 1.0)), (0.5, 1.0, (1.0, 1.5))])
def test_eigenvalues(rho, m, lam):
    e = DEFAULT.eigensystem(rho, m)
    assert (float(e.lam1), float(e.lam2)) == pytest.approx(lam, abs=1e-15)


@settings(max_examples=200)
@given(rho=densities, m=momenta, gamma=st.sampled_from([1.0, 1.5, 2.0]))
def test_eigen_residuals_and_speed_gap(rho, m, gamma):
    cfg = ModelConfig(gamma=gamma)
    e = cfg.eigensystem(rho, m)
    assert e.lam2 - e.lam1 == pytest.approx(rho * cfg.pressure(rho)[1], abs=1e-12)
    jac = cfg.jacobian(rho, m)
    for lam, r in ((e.lam1, e.r1), (e.lam2, e.r2)):
        assert np.linalg.norm(jac @ r - lam * r) <= 1e-8


@given(rho=densities, m=momenta)
def test_analytic_jacobian_matches_finite_differences(rho, m):
    np.testing.assert_allclose(DEFAULT.jacobian(rho, m), fd_jacobian(DEFAULT, rho, m),
                               rtol=1e-6, atol=1e-5)


def test_eigenvalues_match_numerical_eigensolver():
    rng = np.random.default_rng(3)
    for rho, m in zip(rng.uniform(0.1, 1, 50), rng.uniform(0, 2, 50)):
        num = np.sort(np.linalg.eigvals(fd_jacobian(DEFAULT, rho, m)).real)
        e = DEFAULT.eigensystem(rho, m)
        np.testing.assert_allclose(num, [e.lam1, e.lam2], atol=1e-6)


@given(rho=densities, m=momenta)
def test_second_field_linearly_degenerate_by_finite_differences(rho, m):
    e = DEFAULT.eigensystem(rho, m)
    h = 1e-6
    r = e.r2
    up = DEFAULT.eigensystem(rho + h * r[0], m + h * r[1]).lam2
    dn = DEFAULT.eigensystem(rho - h * r[0], m - h * r[1]).lam2
    assert abs((up - dn) / (2 * h)) <= 1e-6


@given(rho=densities, m=momenta)
def test_first_field_indicator_matches_finite_differences(rho, m):
    cfg = ModelConfig(gamma=2.0)
    e = cfg.eigensystem(rho, m)
    h = 1e-6
    up = cfg.eigensystem(rho + h * e.r1[0], m + h * e.r1[1]).lam1
    dn = cfg.eigensystem(rho - h * e.r1[0], m - h * e.r1[1]).lam1
    assert (up - dn) / (2 * h) == pytest.approx(float(cfg.nonlinearity_indicators(rho)[0]), abs=1e-5)


def test_nonlinearity_indicator_values():
    rho = np.linspace(0.1, 1, 10)
    first, second = DEFAULT.nonlinearity_indicators(rho)
    np.testing.assert_allclose(first, -2.0)
    np.testing.assert_array_equal(second, 0.0)
    assert float(ModelConfig(gamma=2.0).nonlinearity_indicators(1.0)[0]) == pytest.approx(-6.0)


def test_riemann_invariants_values():
    assert tuple(map(float, DEFAULT.riemann_invariants(1.0, 2.0))) == (2.0, 1.0)
    assert tuple(map(float, DEFAULT.riemann_invariants(0.5, 1.0))) == (2.0, 1.5)
    rho = 0.3
    assert float(DEFAULT.riemann_invariants(rho, rho * DEFAULT.pressure(rho)[0]).Z) == 0.0


@given(rho=densities, m=momenta)
def test_invariant_pair_relations(rho, m):
    inv = DEFAULT.riemann_invariants(rho, m)
    assert inv.W - inv.Z == pytest.approx(float(DEFAULT.pressure(rho)[0]), abs=1e-12)
    assert inv.Z == pytest.approx(float(DEFAULT.eigensystem(rho, m).lam2), abs=1e-15)


def test_invert_invariants_examples():
    s = DEFAULT.invert_invariants(2.0, 1.0)
    assert (float(s.rho), float(s.m)) == (1.0, 2.0)
    s = DEFAULT.invert_invariants(2.0, 1.5)
    assert (float(s.rho), float(s.m)) == pytest.approx((0.5, 1.0), abs=1e-15)
    with pytest.raises(DomainError):
        DEFAULT.invert_invariants(1.3, 1.3)


@given(rho=densities, m=momenta, gamma=st.sampled_from([1.0, 2.0, 0.7]))
def test_invert_invariants_round_trip(rho, m, gamma):
    cfg = ModelConfig(gamma=gamma)
    back = cfg.invert_invariants(*cfg.riemann_invariants(rho, m))
    assert float(back.rho) == pytest.approx(rho, abs=1e-12)
    assert float(back.m) == pytest.approx(m, abs=1e-12)


def test_subcharacteristic_margin_values():
    lam1, dh, lam2, margin = DEFAULT.subcharacteristic_margin(0.5)
    assert (lam1, dh, lam2, margin) == pytest.approx((0.25, 0.5, 0.75, 0.25), abs=1e-15)
    lam1, dh, lam2, margin = DEFAULT.subcharacteristic_margin(0.0)
    assert (lam1, dh, lam2, margin) == pytest.approx((2.0, 2.0, 2.0, 0.0))


def test_subcharacteristic_margin_positive_on_default_hull():
    assert DEFAULT.subcharacteristic_margin(np.linspace(0.05, 0.6, 2001))[3].min() > 0


def test_subcharacteristic_fails_for_weak_density_dependence():
    rho = np.linspace(0.05, 0.6, 101)
    assert np.all(ModelConfig(b=0.5).subcharacteristic_margin(rho)[3] < 0)
