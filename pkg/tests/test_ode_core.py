import numpy as np
import pytest

from geoprofile import (RadialCurvature, solve_jacobi, solve_riccati,
                        riccati_stability_check, OdeBlowupError,
                        sin_k, cot_k)
from geoprofile.calibration import random_riccati_pair


def const_field(K, R=1.0, H=None):
    return RadialCurvature(
        K=lambda r, K=K: K * np.ones_like(np.asarray(r, dtype=float)),
        R=R, H=H if H is not None else max(abs(K), 1e-6), alpha=0.5)


def test_jacobi_flat_is_identity():
    sol = solve_jacobi(const_field(0.0), step=1e-3)
    assert np.max(np.abs(sol.G - sol.r_nodes)) <= 1e-9


@pytest.mark.parametrize("K", [1.0, -1.0, 0.5, -0.5])
def test_jacobi_constant_curvature(K):
    sol = solve_jacobi(const_field(K), step=1 / 400)
    assert np.max(np.abs(sol.G - sin_k(K, sol.r_nodes))) <= 1e-8


def test_riccati_flat_is_reciprocal():
    sol = solve_riccati(const_field(0.0), step=1e-3)
    rel = np.abs(sol.h - 1.0 / sol.r_nodes) * sol.r_nodes
    assert np.max(rel) <= 1e-9


@pytest.mark.parametrize("K", [1.0, -1.0, 0.7])
def test_riccati_constant_curvature(K):
    sol = solve_riccati(const_field(K), step=1 / 400)
    assert np.max(np.abs(sol.h - cot_k(K, sol.r_nodes))) <= 1e-8


def test_riccati_sandwich_wiggly_field():
    k = RadialCurvature(
        K=lambda r: 0.5 + 0.4 * np.sin(5 * np.asarray(r, dtype=float)),
        R=1.0, H=0.9, alpha=0.5)
    sol = solve_riccati(k, step=1 / 800)
    lo = cot_k(0.9, sol.r_nodes)
    hi = cot_k(-0.9, sol.r_nodes)
    assert np.all(sol.h >= lo - 1e-9)
    assert np.all(sol.h <= hi + 1e-9)
    # cross-check against the independent Jacobi route
    jac = solve_jacobi(k, step=1 / 800)
    sel = sol.r_nodes >= 0.01
    assert np.max(np.abs(sol.h[sel] - jac.h[sel])) <= 1e-7


def test_grid_refinement_order():
    k = const_field(1.0)
    errs = []
    for n in (100, 200):
        sol = solve_jacobi(k, step=1.0 / n)
        errs.append(np.max(np.abs(sol.G - sin_k(1.0, sol.r_nodes))))
    order = np.log2(errs[0] / errs[1])
    assert order >= 3.9


def test_blowup_reported_with_node():
    k = RadialCurvature(
        K=lambda r: 4.0 * np.ones_like(np.asarray(r, dtype=float)),
        R=2.0, H=4.0, alpha=0.5, validate=False)
    with pytest.raises(OdeBlowupError) as err:
        solve_jacobi(k, step=1e-3)
    assert 0 < err.value.r_bad <= 2.0


def test_field_validation():
    with pytest.raises(ValueError):
        RadialCurvature(K=lambda r: 3.0 * np.ones_like(np.asarray(r)),
                        R=1.0, H=1.0)   # sup violates H
    with pytest.raises(ValueError):
        RadialCurvature(K=lambda r: np.zeros_like(np.asarray(r)),
                        R=4.0, H=1.0)   # H R^2 too large


def test_stability_identical_fields(consts):
    k = const_field(0.3)
    rep = riccati_stability_check(k, k, r_min=0.05, consts=consts)
    assert rep.verdict
    assert all(r.margin == 0.0 for r in rep.records)


def test_stability_constant_difference(consts):
    """K1 = 0.2, K2 = 0: f = cot_{0.2} - 1/r has a closed form."""
    k1 = const_field(0.2)
    k2 = const_field(0.0, H=1e-6)
    rep = riccati_stability_check(k1, k2, r_min=0.05, consts=consts,
                                  step=1e-3)
    assert rep.verdict
    # measured sup|f| matches the closed-form difference at the endpoint
    f_true = abs(cot_k(0.2, 1.0) - 1.0)
    sup_rec = rep.record("riccati_a_sup_f")
    measured = sup_rec.margin * consts.c_riccati_a * rep.meta["T"] * 1.0
    assert abs(measured - f_true) < 1e-6


def test_stability_sine_field(consts):
    k1 = RadialCurvature(
        K=lambda r: 0.3 * np.sin(3 * np.asarray(r, dtype=float)),
        R=1.0, H=0.3, alpha=0.5)
    k2 = const_field(0.0, H=1e-6)
    rep = riccati_stability_check(k1, k2, r_min=0.05, consts=consts)
    assert rep.verdict


def test_stability_random_pairs(consts, rng):
    for _ in range(10):
        k1, k2, r_min = random_riccati_pair(rng)
        rep = riccati_stability_check(k1, k2, r_min, consts, step=k1.R / 1200)
        assert rep.verdict, [f"{r.name}:{r.margin:.3g}" for r in rep.records]


def test_sandwich_random_fields(consts, rng):
    for _ in range(15):
        k1, _, _ = random_riccati_pair(rng)
        sol = solve_riccati(k1, step=k1.R / 1000)
        g_m, h_m = sol.sandwich_margins(k1.H)
        assert g_m <= 1.0 + 1e-9
        assert h_m <= 1.0 + 1e-9
