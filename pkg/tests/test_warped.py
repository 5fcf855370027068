import numpy as np
import pytest

from spinstab.warped import (
    AdmissibilityReport,
    COND_BOUND,
    ConformalSphereFamily,
    ConstantMass,
    ConstructionError,
    FlatTorusConformalFamily,
    HorizonError,
    InverseTail,
    ReparametrizedFamily,
    StabilityMassProfile,
    WarpedMetric,
    ZeroMass,
    admissibility_check,
    construct_from_positive_path,
    construct_negative_mass,
    fd_curvature_oracle,
    mass_and_order,
    scalar_curvature_fd,
    scalar_lower_bound,
    scan_scalar_positivity,
    warped_ricci,
    warped_scalar,
)

RADIUS = 0.2
BUMP = 1e-4


def desk_family():
    return ConformalSphereFamily.smooth_radius_path(RADIUS, RADIUS * (1 + BUMP))


# ---------------------------------------------------------------------------
# mass profiles
# ---------------------------------------------------------------------------

def test_profile_core_conditions():
    prof = StabilityMassProfile(a0=50.0)
    eps = 1e-6
    assert prof.m(0.0) == 0.0
    assert abs(prof.m(eps)) < 1e-17          # cubic core: O(r^3)
    assert abs(prof.dm(eps)) < 1e-10         # O(r^2)
    assert prof.r2 == prof.r1 + 1.0
    assert abs(prof.r3 - (prof.r2 + prof.r1 / 7.0)) < 1e-12


def test_profile_values_match_closed_forms():
    a0 = 50.0
    prof = StabilityMassProfile(a0=a0)
    r1 = prof.r1
    assert abs(prof.m_r3 - (-(1.0 / 84.0) * a0 * r1**3)) < 1e-9 * abs(prof.m_r3)
    assert prof.m_inf == -(1.0 / 168.0) * a0 * r1**3
    assert prof.m_inf > prof.m_r3  # monotone tail upward to the limit


def test_profile_transition_slope_bound():
    # m'(r) >= -(a0/4) r^2 throughout the transition
    a0 = 50.0
    prof = StabilityMassProfile(a0=a0)
    r = np.linspace(prof.r1, prof.r2, 2001)
    assert np.all(prof.dm(r) >= -(a0 / 4.0) * r**2 - 1e-9)


def test_profile_derivative_continuity():
    prof = StabilityMassProfile(a0=50.0)
    for b in prof.breakpoints:
        left = prof.dm(b - 1e-9)
        right = prof.dm(b + 1e-9)
        assert abs(left - right) < 1e-3 * max(1.0, abs(left))
    # tail is increasing toward a negative limit
    r = np.geomspace(prof.r3 * 1.01, prof.r3 * 100, 200)
    assert np.all(prof.dm(r) > 0)
    assert prof.m(1e9) < 0


def test_profile_horizon_clear():
    prof = StabilityMassProfile(a0=50.0)
    r = np.linspace(1e-3, 4 * prof.r3, 4000)
    assert np.all(2 * prof.m(r) < r)


def test_profile_rejects_bad_a0():
    with pytest.raises(ValueError):
        StabilityMassProfile(a0=-1.0)


# ---------------------------------------------------------------------------
# scalar curvature formula vs oracle
# ---------------------------------------------------------------------------

def test_fd_oracle_recovers_unit_sphere():
    def fn(x):
        rho = 2.0 / (1.0 + x @ x)
        return rho**2 * np.eye(2)

    s = scalar_curvature_fd(fn, np.array([0.3, -0.4]), np.array([1e-3, 1e-3]))
    assert abs(s - 2.0) < 1e-7


def test_product_metric_scalar():
    fam = ConformalSphereFamily.constant(2.0)
    w = WarpedMetric(profile=ZeroMass(), family=fam, s_frozen=0.5)
    q = np.array([0.2, 0.1])
    assert warped_scalar(w, 5.0, q) == fam.scalar(0.5, q) == 0.5
    out = fd_curvature_oracle(w, 5.0, q)
    assert abs(out["estimate"] - 0.5) <= max(1e-6, 3 * out["error_bar"])


def test_schwarzschild_slice_is_scalar_flat():
    fam = FlatTorusConformalFamily(2, lambda s: 1.0, lambda s: 0.0, lambda s: 0.0)
    w = WarpedMetric(profile=ConstantMass(1.0), family=fam)
    q = np.zeros(2)
    for r in (3.0, 5.0, 11.0):
        assert warped_scalar(w, r, q) == 0.0
        out = fd_curvature_oracle(w, r, q)
        assert abs(out["estimate"]) <= max(1e-6, 3 * out["error_bar"])


def test_horizon_error_raised():
    fam = FlatTorusConformalFamily(2, lambda s: 1.0, lambda s: 0.0, lambda s: 0.0)
    w = WarpedMetric(profile=ConstantMass(1.0), family=fam)
    with pytest.raises(HorizonError):
        warped_scalar(w, 1.5, np.zeros(2))


def test_ricci_components_constant_mass():
    # fixed flat fiber: R00 = -2 m0 / r^3, Rii = m0 / r (display with g' = 0)
    fam = FlatTorusConformalFamily(2, lambda s: 1.0, lambda s: 0.0, lambda s: 0.0)
    w = WarpedMetric(profile=ConstantMass(1.0), family=fam)
    out = warped_ricci(w, 5.0, np.zeros(2))
    assert abs(out["R00"] + 2.0 / 125.0) < 1e-15
    assert abs(out["Rii"] - 1.0 / 5.0) < 1e-15
    assert np.abs(out["Rab"]).max() == 0.0
    assert abs(out["trace"] - warped_scalar(w, 5.0, np.zeros(2))) < 1e-12


def test_ricci_trace_identity_on_construction():
    fam = desk_family()
    metric, _ = construct_negative_mass(fam, scan_points=800)
    rng = np.random.default_rng(3)
    for _ in range(10):
        r = float(rng.uniform(metric.profile.r2 * 1.03, metric.profile.r3 * 0.97))
        q = fam.sample_points()[int(rng.integers(0, 4))]
        out = warped_ricci(metric, r, q)
        assert abs(out["trace"] - warped_scalar(metric, r, q)) <= 1e-12


def test_sphere_family_formula_vs_oracle():
    fam = desk_family()
    metric, _ = construct_negative_mass(fam, scan_points=800)
    rng = np.random.default_rng(1)
    for _ in range(5):
        r = float(rng.uniform(metric.profile.r2 * 1.05, metric.profile.r3 * 0.95))
        q = fam.sample_points()[int(rng.integers(0, 4))]
        formula = warped_scalar(metric, r, q)
        out = fd_curvature_oracle(metric, r, q)
        assert abs(formula - out["estimate"]) <= max(1e-6, 3 * out["error_bar"])


def test_oracle_guards_breakpoints():
    fam = desk_family()
    metric, _ = construct_negative_mass(fam, scan_points=800)
    with pytest.raises(ValueError):
        fd_curvature_oracle(metric, metric.profile.r2, fam.sample_points()[0])


# ---------------------------------------------------------------------------
# admissibility, construction, bounds
# ---------------------------------------------------------------------------

def test_admissibility_constant_family():
    fam = ConformalSphereFamily.constant(1.0)
    rep = admissibility_check(fam)
    assert rep.passed
    assert rep.c1 == rep.c2 == rep.c3 == 0.0
    assert rep.a0 == 2.0


def test_admissibility_closed_form_sphere():
    # C2 = max |4 f'/f|, C3 = max |4 (f'' f - f'^2)/f^2|, C1 = C2^2/2
    fam = desk_family()
    rep = admissibility_check(fam)
    s = np.linspace(0, 1, 2001)
    f = RADIUS * (1 + BUMP * s**2 * (3 - 2 * s))
    df = RADIUS * BUMP * 6 * s * (1 - s)
    d2f = RADIUS * BUMP * (6 - 12 * s)
    c2 = np.abs(4 * df / f).max()
    c3 = np.abs(4 * (d2f * f - df**2) / f**2).max()
    c1 = np.abs(2 * (2 * df / f) ** 2).max()
    assert abs(rep.c2 - c2) < 1e-6 * c2
    assert abs(rep.c3 - c3) < 1e-4 * c3
    assert abs(rep.c1 - c1) < 1e-4 * c1
    assert rep.passed


def test_admissibility_rejects_steep_family():
    steep = ConformalSphereFamily.smooth_radius_path(1.0, 0.9)
    rep = admissibility_check(steep)
    assert not rep.passed
    assert any("C2" in v or "C1" in v or "C3" in v for v in rep.violations)


def test_construction_certificate():
    fam = desk_family()
    metric, cert = construct_negative_mass(fam, scan_points=2000)
    assert cert.passed
    assert cert.min_scalar >= -1e-9
    assert cert.min_lapse_margin > 0.0
    prof = metric.profile
    adm = admissibility_check(fam)
    assert abs(prof.m_r3 + (1.0 / 84.0) * adm.a0 * prof.r1**3) <= 1e-12 * abs(prof.m_r3)
    assert abs(prof.m_inf + (1.0 / 168.0) * adm.a0 * prof.r1**3) <= 1e-12 * abs(prof.m_inf)
    assert prof.m_inf < 0


def test_construction_requires_admissibility():
    steep = ConformalSphereFamily.smooth_radius_path(1.0, 0.9)
    with pytest.raises(ConstructionError):
        construct_negative_mass(steep)


def test_scan_on_product_metric():
    fam = ConformalSphereFamily.constant(1.0)
    w = WarpedMetric(profile=ZeroMass(), family=fam, s_frozen=0.0)
    cert = scan_scalar_positivity(w, scan_points=500)
    assert cert.passed
    assert abs(cert.min_scalar - 2.0) < 1e-12  # S = S_M = 2 everywhere


def test_lower_bound_zero_constants():
    # C1 = C2 = C3 = 0: A = B = 0 and bound = -S^- + a0 r1^2 / r^2
    fam = desk_family()
    metric, _ = construct_negative_mass(fam, scan_points=800)
    prof = metric.profile
    rep0 = AdmissibilityReport(0.0, 0.0, 0.0, 0.0, 50.0, True, [])
    r = 0.5 * (prof.r2 + prof.r3)
    out = scalar_lower_bound(rep0, metric, r)
    assert out["A"] == 0.0
    assert out["B"] == 0.0
    assert abs(out["bound"] - 50.0 * prof.r1**2 / r**2) < 1e-12


def test_lower_bound_boundary_constants():
    fam = desk_family()
    metric, _ = construct_negative_mass(fam, scan_points=800)
    prof = metric.profile
    rep = AdmissibilityReport(COND_BOUND, COND_BOUND, COND_BOUND, 0.0,
                              50.0, True, [])
    for r in np.linspace(prof.r2, prof.r3, 21):
        out = scalar_lower_bound(rep, metric, float(r))
        assert abs(out["A"]) <= 3.0
        assert abs(out["B"]) <= 1.0


def test_lower_bound_is_sound():
    fam = desk_family()
    adm = admissibility_check(fam)
    metric, _ = construct_negative_mass(fam, scan_points=800)
    rng = np.random.default_rng(9)
    for _ in range(25):
        r = float(rng.uniform(metric.profile.r2, metric.profile.r3))
        out = scalar_lower_bound(adm, metric, r)
        for q in fam.sample_points():
            assert out["bound"] <= warped_scalar(metric, r, q) + 1e-12


def test_lower_bound_domain_guard():
    fam = desk_family()
    metric, _ = construct_negative_mass(fam, scan_points=800)
    adm = admissibility_check(fam)
    with pytest.raises(ValueError):
        scalar_lower_bound(adm, metric, metric.profile.r1)


# ---------------------------------------------------------------------------
# mass and asymptotics
# ---------------------------------------------------------------------------

def test_mass_zero_profile():
    fam = ConformalSphereFamily.constant(1.0)
    w = WarpedMetric(profile=ZeroMass(), family=fam, s_frozen=0.0)
    out = mass_and_order(w)
    assert out["mass"] == 0.0
    assert np.all(out["deviations"] == 0.0)


def test_mass_inverse_tail_order_one():
    fam = FlatTorusConformalFamily(2, lambda s: 1.0, lambda s: 0.0, lambda s: 0.0)
    w = WarpedMetric(profile=InverseTail(-2.0, 5.0), family=fam)
    out = mass_and_order(w)
    assert out["mass"] == -2.0
    assert abs(out["order"] - 1.0) <= 0.05


def test_mass_of_construction():
    fam = desk_family()
    metric, _ = construct_negative_mass(fam, scan_points=800)
    out = mass_and_order(metric)
    assert out["mass"] == metric.profile.m_inf
    assert abs(out["order"] - 1.0) <= 0.05


# ---------------------------------------------------------------------------
# the shrinking path
# ---------------------------------------------------------------------------

def test_shrink_path_succeeds_on_steep_family():
    steep = ConformalSphereFamily.smooth_radius_path(1.0, 0.9)
    out = construct_from_positive_path(steep, scan_points=800)
    assert out["certificate"].passed
    assert 0 < out["eps"] < 1
    rep = admissibility_check(ReparametrizedFamily(steep, out["eps"]))
    assert rep.passed


def test_shrink_path_rejects_zero_scalar_family():
    flat = FlatTorusConformalFamily(2, lambda s: 1.0 + 0.001 * s,
                                    lambda s: 0.001, lambda s: 0.0)
    with pytest.raises(ConstructionError):
        construct_from_positive_path(flat)


def test_reparametrized_family_scaling():
    fam = desk_family()
    rep = ReparametrizedFamily(fam, 0.5)
    q = fam.sample_points()[0]
    assert np.allclose(rep.metric(1.0, q), fam.metric(0.5, q))
    assert np.allclose(rep.dmetric(1.0, q), 0.5 * fam.dmetric(0.5, q))
    assert np.allclose(rep.d2metric(1.0, q), 0.25 * fam.d2metric(0.5, q))
