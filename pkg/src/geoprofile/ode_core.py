"""Radial Jacobi and Riccati initial-value problems.

Both equations are singular at r = 0: the Jacobi coefficient starts as
G ~ r and the Riccati solution as h ~ 1/r.  The Jacobi solve starts a
fixed-step classical 4th-order integrator from a series expansion at a
small r0; the Riccati solve integrates the regularized variable
g(x) = x^2 (h(x) - 1/x), which is C^1 through 0, giving a second route
to h that is independent of the Jacobi one.
"""

from dataclasses import dataclass, field
from typing import Callable

import numpy as np

from .special_functions import cot_k, sin_k
from .report import CheckerRecord, CheckerReport

PI_SQ_QUARTER = np.pi ** 2 / 4.0


class OdeBlowupError(ArithmeticError):
    """Jacobi solution reached G <= 0: curvature inconsistent with radius."""

    def __init__(self, message, r_bad):
        super().__init__(message)
        self.r_bad = r_bad


@dataclass(frozen=True)
class RadialCurvature:
    """Curvature profile K(r) on (0, R] with sup bound H and Hölder data.

    ``L`` is the alpha-Hölder bound; if omitted it is measured from
    samples (exact on the sample, a lower bound on the true seminorm).
    """

    K: Callable
    R: float
    H: float
    alpha: float = 1.0
    L: float = None
    validate: bool = True
    _samples: tuple = field(default=None, repr=False)

    def __post_init__(self):
        if self.R <= 0 or self.H <= 0:
            raise ValueError("R and H must be positive")
        if not 0 < self.alpha <= 1:
            raise ValueError("alpha must lie in (0, 1]")
        r = np.linspace(self.R / 256.0, self.R, 256)
        k = np.asarray(self.K(r), dtype=float)
        if k.shape != r.shape:
            k = np.full_like(r, float(self.K(self.R / 2)))
        if self.validate:
            if self.H * self.R ** 2 > PI_SQ_QUARTER * (1 + 1e-12):
                raise ValueError(
                    f"H*R^2 = {self.H * self.R**2:.6g} exceeds pi^2/4")
            if np.max(np.abs(k)) > self.H * (1 + 1e-9):
                raise ValueError(
                    f"sampled |K| = {np.max(np.abs(k)):.6g} exceeds H = {self.H}")
        dr = np.abs(r[:, None] - r[None, :])
        dk = np.abs(k[:, None] - k[None, :])
        mask = dr > 0
        l_meas = float(np.max(dk[mask] / dr[mask] ** self.alpha, initial=0.0))
        if self.L is None:
            object.__setattr__(self, "L", l_meas)
        elif self.validate and l_meas > self.L * (1 + 1e-9) + 1e-12:
            raise ValueError(
                f"sampled Hölder seminorm {l_meas:.6g} exceeds L = {self.L}")
        object.__setattr__(self, "_samples", (r, k))

    def __call__(self, r):
        return self.K(r)


@dataclass(frozen=True)
class RadialSolution:
    r_nodes: np.ndarray
    G: np.ndarray
    h: np.ndarray

    def sandwich_margins(self, H):
        """Worst deviation ratios against the constant-curvature envelopes.

        For each of G and h the deviation from the envelope midline is
        divided by the envelope half-width; <= 1 node-wise means
        sin_k(H,r) <= G <= sin_k(-H,r) and cot_k(H,r) <= h <= cot_k(-H,r).
        """
        r = self.r_nodes
        g_lo, g_hi = sin_k(H, r), sin_k(-H, r)
        h_lo, h_hi = cot_k(H, r), cot_k(-H, r)
        g_margin = np.max(np.abs(self.G - 0.5 * (g_lo + g_hi))
                          / (0.5 * (g_hi - g_lo)))
        h_margin = np.max(np.abs(self.h - 0.5 * (h_lo + h_hi))
                          / (0.5 * (h_hi - h_lo)))
        return float(g_margin), float(h_margin)


def _rk4(f, y0, x0, x1, n_steps):
    """Classical fixed-step RK4 from x0 to x1; returns (xs, ys)."""
    xs = np.linspace(x0, x1, n_steps + 1)
    h = (x1 - x0) / n_steps
    ys = np.empty((n_steps + 1,) + np.shape(y0))
    y = np.asarray(y0, dtype=float)
    ys[0] = y
    for i in range(n_steps):
        x = xs[i]
        k1 = f(x, y)
        k2 = f(x + 0.5 * h, y + 0.5 * h * k1)
        k3 = f(x + 0.5 * h, y + 0.5 * h * k2)
        k4 = f(x + h, y + h * k3)
        y = y + (h / 6.0) * (k1 + 2 * k2 + 2 * k3 + k4)
        ys[i + 1] = y
    return xs, ys


def solve_jacobi(k, step):
    """Integrate G'' + K G = 0 with G ~ r at 0; returns r, G and h = G'/G.

    Starts at r0 = max(step, R*1e-4) from the series
    G = r0 - K(r0) r0^3/6, G' = 1 - K(r0) r0^2/2, correct to O(r0^(3+alpha)).
    """
    R = k.R
    if step > R / 100.0:
        raise ValueError(f"step {step} too coarse; need step <= R/100")
    r0 = max(step, R * 1e-4)
    k0 = float(k.K(r0))
    y0 = np.array([r0 - k0 * r0 ** 3 / 6.0, 1.0 - k0 * r0 ** 2 / 2.0])

    def rhs(r, y):
        return np.array([y[1], -float(k.K(r)) * y[0]])

    n = max(2, int(np.ceil((R - r0) / step)))
    rs, ys = _rk4(rhs, y0, r0, R, n)
    G = ys[:, 0]
    if np.any(G <= 0):
        bad = int(np.argmax(G <= 0))
        raise OdeBlowupError(
            f"G <= 0 at r = {rs[bad]:.6g}: H*R^2 precondition violated "
            "or curvature inconsistent", rs[bad])
    return RadialSolution(r_nodes=rs, G=G, h=ys[:, 1] / G)


def solve_riccati(k, step):
    """Integrate h' + h^2 + K = 0 with h = 1/r + O(r), via g = r^2 (h - 1/r).

    The deviation f = h - 1/r satisfies f' = -2f/r - f^2 - K, so
    g' = -g^2/r^2 - K r^2 with g(0) = 0; g is C^1 through the origin.
    G is reconstructed as r * exp(cumulative integral of g/r^2).
    """
    R = k.R
    if step > R / 100.0:
        raise ValueError(f"step {step} too coarse; need step <= R/100")
    r0 = max(step, R * 1e-4)
    k0 = float(k.K(r0))
    g0 = -k0 * r0 ** 3 / 3.0

    def rhs(r, g):
        return -(g * g) / (r * r) - float(k.K(r)) * r * r

    n = max(2, int(np.ceil((R - r0) / step)))
    rs, gs = _rk4(rhs, g0, r0, R, n)
    f = gs / rs ** 2
    h = 1.0 / rs + f
    # log(G/r)' = f; trapezoid is adequate since f is C^1 and small.
    log_ratio = np.concatenate(
        ([0.0], np.cumsum(0.5 * (f[1:] + f[:-1]) * np.diff(rs))))
    log_ratio += f[0] * r0 * 0.5  # series tail below r0: f ~ -K(0) r / 3
    G = rs * np.exp(log_ratio)
    if np.any(~np.isfinite(h)):
        bad = int(np.argmax(~np.isfinite(h)))
        raise OdeBlowupError(f"Riccati solution blew up at r = {rs[bad]:.6g}",
                             rs[bad])
    return RadialSolution(r_nodes=rs, G=G, h=h)


def _holder_on_nodes(r, v, alpha, max_nodes=700):
    if r.size > max_nodes:
        stride = int(np.ceil(r.size / max_nodes))
        r, v = r[::stride], v[::stride]
    dr = np.abs(r[:, None] - r[None, :])
    dv = np.abs(v[:, None] - v[None, :])
    mask = dr > 0
    return float(np.max(dv[mask] / dr[mask] ** alpha, initial=0.0))


def riccati_stability_check(k1, k2, r_min, consts, step=None, T=None):
    """Check the four stability conclusions for f = h1 - h2 on [r_min, R].

    With T = sup|K1 - K2|, L = max Hölder bound and R the common radius:

        (a) sup|f|      <= c_a * T * R
        (b) sup|f'|     <= c_b * T
        (c) [f]_alpha   <= c_c * T * R^(1-alpha)
        (d) [f']_alpha  <= c_d * (L + T * R^(-alpha) * (1 + R/r_min))

    f' is evaluated from the Riccati equation itself (h' = -h^2 - K), not
    by numerical differentiation.  Margins are actual/allowed ratios.
    """
    if abs(k1.R - k2.R) > 1e-12 * max(k1.R, k2.R):
        raise ValueError("curvature fields must share the same radius")
    R = k1.R
    if not 0 < r_min < R:
        raise ValueError("need 0 < r_min < R")
    H = max(k1.H, k2.H)
    if H * R ** 2 > PI_SQ_QUARTER * (1 + 1e-12):
        raise ValueError("H*R^2 exceeds pi^2/4")
    if step is None:
        step = R / 2000.0
    s1 = solve_riccati(k1, step)
    s2 = solve_riccati(k2, step)
    r = s1.r_nodes
    sel = r >= r_min * (1 - 1e-12)
    r = r[sel]
    h1, h2 = s1.h[sel], s2.h[sel]
    kv1 = np.asarray(k1.K(r), dtype=float) * np.ones_like(r)
    kv2 = np.asarray(k2.K(r), dtype=float) * np.ones_like(r)
    if T is None:
        T = float(np.max(np.abs(kv1 - kv2)))
    L = max(k1.L, k2.L)
    alpha = k1.alpha
    f = h1 - h2
    fp = (h2 * h2 + kv2) - (h1 * h1 + kv1)

    if T == 0.0:
        records = [CheckerRecord.from_margin(f"riccati_{t}", 0.0)
                   for t in ("a_sup_f", "b_sup_fprime", "c_holder_f",
                             "d_holder_fprime")]
        return CheckerReport(records=records, meta={"T": 0.0, "R": R})

    sup_f = float(np.max(np.abs(f)))
    sup_fp = float(np.max(np.abs(fp)))
    hol_f = _holder_on_nodes(r, f, alpha)
    hol_fp = _holder_on_nodes(r, fp, alpha)

    records = [
        CheckerRecord.from_margin(
            "riccati_a_sup_f", sup_f / (consts.c_riccati_a * T * R),
            witness=[r[int(np.argmax(np.abs(f)))]]),
        CheckerRecord.from_margin(
            "riccati_b_sup_fprime", sup_fp / (consts.c_riccati_b * T),
            witness=[r[int(np.argmax(np.abs(fp)))]]),
        CheckerRecord.from_margin(
            "riccati_c_holder_f",
            hol_f / (consts.c_riccati_c * T * R ** (1 - alpha))),
        CheckerRecord.from_margin(
            "riccati_d_holder_fprime",
            hol_fp / (consts.c_riccati_d
                      * (L + T * R ** (-alpha) * (1 + R / r_min)))),
    ]
    return CheckerReport(records=records, constants_version=consts.version,
                         meta={"T": T, "L": L, "R": R, "r_min": r_min})
