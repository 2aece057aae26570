import itertools

import numpy as np
import pytest

from geoprofile import (MetricGrid, PolarPoint, geodesic_integrate, distance,
                        distance_profile, save_metric_json, load_metric_json,
                        phi)
from geoprofile.geodesy import GeodesicDomainError
from geoprofile.surfaces import constant_curvature_grid


@pytest.fixture(scope="module")
def flat_big():
    return constant_curvature_grid(0.0, 2.0, H=0.5)


@pytest.fixture(scope="module")
def sphere():
    return constant_curvature_grid(1.0, 1.5, H=1.0)


@pytest.fixture(scope="module")
def small_sphere():
    return constant_curvature_grid(0.3, 0.052, H=1.0)


def test_flat_line(flat_big):
    path = geodesic_integrate(flat_big, PolarPoint(1.0, 0.0), 0.0, +1, 0.8,
                              step=1e-3)
    t = path.t_nodes
    assert np.max(np.abs(path.rho - np.sqrt(1 + t * t))) < 1e-9
    assert np.max(np.abs(path.phi - np.arctan(t))) < 1e-9
    assert path.unit_speed_residual <= 1e-7


def test_sphere_law_of_cosines(sphere):
    m = 0.3
    path = geodesic_integrate(sphere, PolarPoint(m, 0.0), 0.0, +1, 0.5,
                              step=1e-3)
    oracle = np.arccos(np.cos(m) * np.cos(path.t_nodes))
    assert np.max(np.abs(path.rho - oracle)) < 1e-6
    assert path.unit_speed_residual <= 1e-6


def test_zero_length_path(sphere):
    path = geodesic_integrate(sphere, PolarPoint(0.4, 0.1), 0.3, +1, 0.0)
    assert path.t_nodes.size == 1
    assert path.unit_speed_residual == 0.0


def test_path_exits_domain(flat_big):
    with pytest.raises(GeodesicDomainError):
        geodesic_integrate(flat_big, PolarPoint(1.9, 0.0), 0.9, +1, 1.0,
                           step=1e-3)


def test_flat_distance(flat_big):
    d = distance(flat_big, PolarPoint(1.0, 0.0), PolarPoint(1.0, np.pi / 2))
    assert abs(d - np.sqrt(2)) < 1e-6


def test_sphere_distance(sphere):
    p, q = PolarPoint(0.3, 0.0), PolarPoint(0.4, 0.5)
    oracle = np.arccos(np.cos(0.3) * np.cos(0.4)
                       + np.sin(0.3) * np.sin(0.4) * np.cos(0.5))
    assert abs(distance(sphere, p, q) - oracle) < 1e-5


def test_distance_same_point(sphere):
    p = PolarPoint(0.35, 1.2)
    assert distance(sphere, p, p) == 0.0


def test_distance_same_ray(sphere):
    assert abs(distance(sphere, PolarPoint(0.5, 0.3),
                        PolarPoint(0.2, 0.3)) - 0.3) < 1e-12


def test_triangle_inequality(small_sphere, rng):
    pts = [PolarPoint(rng.uniform(0.004, 0.048), rng.uniform(-np.pi, np.pi))
           for _ in range(9)]
    d = {}
    for i, j in itertools.combinations(range(len(pts)), 2):
        d[i, j] = d[j, i] = distance(small_sphere, pts[i], pts[j])
    checked = 0
    for i, j, k in itertools.permutations(range(len(pts)), 3):
        assert d[i, j] <= d[i, k] + d[k, j] + 1e-6
        checked += 1
    assert checked >= 100


def test_profile_extraction_matches_radius(sphere):
    m = 0.25
    path = geodesic_integrate(sphere, PolarPoint(m, 0.0), 0.0, +1, 0.4,
                              step=1e-3)
    prof = distance_profile(sphere, path)
    assert np.array_equal(prof.rho, path.rho)
    oracle = np.arccos(np.cos(m) * np.cos(prof.t_nodes))
    assert np.max(np.abs(prof.rho - oracle)) < 1e-6


def test_profile_metric_conditions(sphere):
    path = geodesic_integrate(sphere, PolarPoint(0.25, 0.0), 0.0, +1, 0.4,
                              step=1e-3)
    prof = distance_profile(sphere, path)
    t, r = prof.t_nodes[::40], prof.rho[::40]
    dt = np.abs(t[:, None] - t[None, :])
    dr = np.abs(r[:, None] - r[None, :])
    sr = r[:, None] + r[None, :]
    mask = dt > 0
    assert np.all(dr[mask] <= dt[mask] * (1 + 1e-9))
    assert np.all(dt[mask] <= sr[mask] * (1 + 1e-9))


def test_geodesic_equation_residual(sphere):
    """rho'' = h(gamma) (1 - rho'^2) along integrated paths, with h read
    back through the interpolant."""
    path = geodesic_integrate(sphere, PolarPoint(0.3, 0.2), 0.15, +1, 0.4,
                              step=5e-4)
    g, h = sphere.value_and_h(path.rho, path.phi)
    resid = np.abs(path.rho_ddot - h * (1 - path.rho_dot ** 2))
    assert np.max(resid) <= 1e-5


def test_convexity_surrogate(sphere):
    """Second divided differences positive and rho rho''/(1 - rho'^2)
    inside the constant-curvature envelope."""
    path = geodesic_integrate(sphere, PolarPoint(0.3, 0.0), 0.0, +1, 0.5,
                              step=1e-3)
    r, rd, rdd = path.rho, path.rho_dot, path.rho_ddot
    dd2 = np.diff(path.rho, 2)
    assert np.all(dd2 > 0)
    v = r * rdd / (1 - rd ** 2)
    H = 1.0
    assert np.all(v >= phi(H * r ** 2) - 1e-7)
    assert np.all(v <= phi(-H * r ** 2) + 1e-7)


def test_ddot_sup_bound(small_sphere, consts):
    m = 0.01
    path = geodesic_integrate(small_sphere, PolarPoint(m, 0.0), 0.0, +1,
                              0.03, step=5e-5)
    sup = np.max(np.abs(path.rho_ddot))
    assert sup <= consts.c_rhoddot / m


def test_grid_json_roundtrip(tmp_path, small_sphere):
    path = tmp_path / "grid.json"
    save_metric_json(small_sphere, path)
    loaded = load_metric_json(path)
    assert np.allclose(loaded.G, small_sphere.G)
    assert np.allclose(loaded.r_nodes, small_sphere.r_nodes)
    assert loaded.H == small_sphere.H
    # byte-identical re-save
    path2 = tmp_path / "grid2.json"
    save_metric_json(loaded, path2)
    assert path.read_bytes() == path2.read_bytes()


def test_grid_validation_rejects_bad_G():
    r = np.linspace(1e-4, 0.05, 100)
    theta = -np.pi + 2 * np.pi * np.arange(8) / 8
    G = np.tile(r, (8, 1)) * 3.0   # badly off the envelope
    with pytest.raises(ValueError):
        MetricGrid(r, theta, G, H=1.0)
