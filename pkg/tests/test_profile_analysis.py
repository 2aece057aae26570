import numpy as np
import pytest

from geoprofile import (kappa, phi0_curve, f0_curve, analyze, phi_inverse,
                        twelve_point_configurations, finiteness_check)
from geoprofile.profiles import DistanceProfile
from geoprofile.surfaces import (flat_profile, spherical_profile,
                                 hyperbolic_profile, offset_hyperbola_profile,
                                 perturbed_cone_profile, checker_suite)

F0_RECORDS = ("f0_size", "f0_slope", "f0_slope_pair", "f0_cross_scale")


def test_kappa_flat_exactly_zero():
    p = flat_profile(0.01, (-0.2, 0.2))
    k = kappa(p, p.t_nodes)
    assert np.max(np.abs(k)) < 1e-10
    # the zero is forced exactly when the ratio is exactly 1
    assert phi_inverse(1.0) == 0.0


def test_kappa_constant_curvature_recovery():
    p = spherical_profile(1.0, 0.1, (-0.2, 0.2))
    assert np.max(np.abs(kappa(p, p.t_nodes) - 1.0)) < 1e-6
    q = hyperbolic_profile(-1.0, 0.1, (-0.2, 0.2))
    assert np.max(np.abs(kappa(q, q.t_nodes) + 1.0)) < 1e-6


@pytest.mark.parametrize("c", [0.0, 0.5, 0.9, 0.99])
def test_kappa_offset_profile(c):
    p = offset_hyperbola_profile(c)
    expected = phi_inverse(1.0 - c) / (1.0 - c) ** 2
    assert abs(kappa(p, 0.0) - expected) <= 1e-6 * max(1.0, abs(expected))


def test_phi0_flat_closed_form():
    m = 0.01
    p = flat_profile(m, (-0.2, 0.2))
    s = analyze(p)
    assert np.max(np.abs(s.phi0 - np.arctan(p.t_nodes / m))) < 1e-8
    i0 = p.argmin_node()
    assert s.phi0[i0] == 0.0
    assert np.all(np.diff(s.phi0) > 0)


def test_phi0_spherical_closed_form():
    m = 0.1
    p = spherical_profile(1.0, m, (-0.2, 0.2))
    phi0 = phi0_curve(p, 1.0)
    oracle = np.arctan(np.tan(p.t_nodes) / np.sin(m))
    assert np.max(np.abs(phi0 - oracle)) < 1e-8
    assert np.max(np.abs(phi0)) < 3 * np.pi / 4


def test_f0_identically_zero_cases():
    p = flat_profile(0.02, (-0.2, 0.2))
    assert np.max(np.abs(f0_curve(p, 0.0))) < 1e-10
    q = spherical_profile(1.0, 0.1, (-0.2, 0.2))
    assert np.max(np.abs(f0_curve(q, 1.0))) < 1e-8


def test_f0_spherical_with_flat_reference():
    q = spherical_profile(1.0, 0.1, (-0.2, 0.2))
    got = f0_curve(q, 0.0)
    oracle = 1.0 / np.tan(q.rho) - 1.0 / q.rho
    assert np.max(np.abs(got - oracle)) < 1e-10


def test_summary_fields():
    p = spherical_profile(0.5, 0.05, (-0.2, 0.2))
    s = analyze(p)
    assert s.t0 == 0.0
    assert abs(s.m - 0.05) < 1e-12
    assert abs(s.K0 - 0.5) < 1e-8
    assert abs(s.kappa[len(p) // 2] - 0.5) < 1e-8


def test_configurations_deterministic_and_symmetric():
    cfgs = twelve_point_configurations((-1.0, 1.0), 1, seed=0)
    assert len(cfgs) == 1
    pts = cfgs[0].points
    assert pts.size == 12
    assert np.allclose(np.sort(pts), np.sort(-pts), atol=1e-15)
    again = twelve_point_configurations((-1.0, 1.0), 1, seed=0)
    assert np.array_equal(again[0].points, pts)


@pytest.mark.parametrize("budget", [1, 7, 96, 200])
def test_configuration_count(budget):
    cfgs = twelve_point_configurations((0.0, 2.0), budget, seed=3)
    assert len(cfgs) == budget


def test_configuration_points_property(rng):
    for seed in range(100):
        cfgs = twelve_point_configurations((-0.3, 0.5), 5, seed=seed)
        for cfg in cfgs:
            pts = cfg.points
            assert pts[0] >= -0.3 and pts[-1] <= 0.5
            assert np.min(np.diff(pts)) >= 1e-9 * 0.8


def test_checker_passes_flat(consts):
    p = flat_profile(0.01, (-0.2, 0.2))
    rep = finiteness_check(p, consts,
                           twelve_point_configurations(p.interval, 240))
    assert rep.verdict, [(r.name, r.margin) for r in rep.records if not r.passed]


def test_checker_fails_offset_on_kappa(consts):
    p = offset_hyperbola_profile(0.99)
    rep = finiteness_check(p, consts,
                           twelve_point_configurations(p.interval, 240))
    assert not rep.verdict
    rec = rep.record("curvature_bound")
    assert not rec.passed
    assert rec.margin > 1e3


def test_checker_fails_perturbed_cone(consts):
    p = perturbed_cone_profile(1e-2, 0.25)
    rep = finiteness_check(p, consts,
                           twelve_point_configurations(p.interval, 240))
    assert not rep.verdict
    worst = max(max(rep.record(n).margin for n in F0_RECORDS),
                rep.record("kappa_holder").margin)
    assert worst > 1.0
    # the Euclidean-flavored records stay clean
    assert rep.record("lipschitz_triangle").passed
    assert rep.record("angle_bound").passed


def test_checker_rejects_points_outside_interval(consts):
    p = flat_profile(0.01, (-0.1, 0.1))
    cfgs = twelve_point_configurations((-0.2, 0.2), 4)
    with pytest.raises(ValueError):
        finiteness_check(p, consts, cfgs)


def test_checker_necessity_smoke(consts):
    for entry in checker_suite(4, seed=9):
        p = entry["profile"]
        rep = finiteness_check(
            p, consts, twelve_point_configurations(p.interval, 240))
        assert rep.verdict, entry["label"]


def test_report_json_roundtrip(consts, tmp_path):
    p = flat_profile(0.01, (-0.2, 0.2))
    rep = finiteness_check(p, consts,
                           twelve_point_configurations(p.interval, 24))
    text = rep.to_json()
    assert '"verdict": true' in text
    assert text == rep.to_json()


def test_scaling_of_kappa():
    """Scaling the profile by lam rescales kappa by lam^-2."""
    lam = 0.5
    m = 0.02
    p = spherical_profile(0.8, m, (-0.1, 0.1))

    def rho_s(t):
        return lam * p._rho_fn(np.asarray(t) / lam)

    def d1_s(t):
        return p.deriv(np.asarray(t) / lam)

    def d2_s(t):
        return p.second_deriv(np.asarray(t) / lam) / lam

    ps = DistanceProfile.from_callable(rho_s, (-0.1 * lam, 0.1 * lam),
                                       n=1501, d1=d1_s, d2=d2_s)
    t = 0.03
    k_orig = kappa(p, t)
    k_scaled = kappa(ps, lam * t)
    assert abs(k_scaled - k_orig / lam ** 2) <= 1e-8 * abs(k_orig / lam ** 2)
