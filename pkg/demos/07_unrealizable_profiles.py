"""Two near-Euclidean profiles that no small-curvature surface realizes.

sqrt(1 + t^2) - c is a genuine distance profile for c = 0; as c -> 1 the
curvature needed at the closest point blows up like 1/(1-c)^2 (times
pi^2/4 in the limit).  sqrt(eps^2 + t^2) + eps^(3+beta) looks harmless
at every fixed scale, but realizing it forces the curvature's Hölder
seminorm to grow like eps^(beta-alpha), so for beta < alpha no uniform
bound survives eps -> 0; the checker margins reproduce that rate.
"""

import numpy as np

from geoprofile import (default_constants, kappa, phi_inverse,
                        twelve_point_configurations, finiteness_check)
from geoprofile.surfaces import offset_hyperbola_profile, perturbed_cone_profile

consts = default_constants()

print("offset hyperbola: curvature needed at the minimum")
print("  c        kappa(0)       limit pi^2/(4(1-c)^2)")
for c in (0.0, 0.5, 0.9, 0.99, 0.999):
    p = offset_hyperbola_profile(c)
    k0 = float(kappa(p, 0.0))
    lim = np.pi ** 2 / 4 / (1 - c) ** 2
    print(f"  {c:<8g} {k0:<14.6g} {lim:<14.6g}")
print("  (identity: kappa(0) = phi_inverse(1-c)/(1-c)^2; e.g. "
      f"c=0.99 -> {phi_inverse(0.01) / 0.01 ** 2:.1f})")

print("\nperturbed cone: failing margins across tip scales")
f0_records = ("f0_size", "f0_slope", "f0_slope_pair", "f0_cross_scale")
beta, alpha = 0.25, 0.5
margins = []
for eps in (1e-2, 3e-3, 1e-3):
    p = perturbed_cone_profile(eps, beta)
    rep = finiteness_check(
        p, consts, twelve_point_configurations(p.interval, 240, seed=0))
    worst_f0 = max(rep.record(n).margin for n in f0_records)
    margins.append(worst_f0)
    print(f"  eps = {eps:<8g} verdict {'PASS' if rep.verdict else 'FAIL':<5s}"
          f" worst f0 margin {worst_f0:8.3f}")
print(f"  margin growth eps 1e-2 -> 1e-3: x{margins[-1] / margins[0]:.2f} "
      f"(rate eps^(beta-alpha) predicts x{(1e-1) ** (beta - alpha):.2f})")
