"""The finiteness checker on realizable and unrealizable profiles.

A distance profile of a genuine bounded-curvature surface passes every
inequality; the two classic counterexamples fail in characteristic ways:
an offset hyperbola needs enormous curvature at its minimum, and a
slightly lifted cone needs unbounded curvature Hölder seminorm as the
tip scale shrinks.
"""

import numpy as np

from geoprofile import (default_constants, twelve_point_configurations,
                        finiteness_check, kappa)
from geoprofile.surfaces import (spherical_profile, offset_hyperbola_profile,
                                 perturbed_cone_profile)

consts = default_constants()


def run(name, profile, budget=240):
    cfgs = twelve_point_configurations(profile.interval, budget, seed=0)
    rep = finiteness_check(profile, consts, cfgs)
    print(f"\n{name}:")
    print("\n".join(rep.summary_lines()))
    return rep


run("sphere profile (K = 0.7, m = 0.01)",
    spherical_profile(0.7, 0.01, (-0.0387, 0.0387)))

p = offset_hyperbola_profile(0.99)
print(f"\noffset hyperbola sqrt(1+t^2) - 0.99: kappa(0) = "
      f"{float(kappa(p, 0.0)):.1f}")
run("offset hyperbola (c = 0.99)", p)

for eps in (1e-2, 1e-3):
    rep = run(f"perturbed cone (eps = {eps}, beta = 1/4)",
              perturbed_cone_profile(eps, 0.25))
    worst = max(rep.records, key=lambda r: r.margin)
    print(f"  -> worst failing margin {worst.margin:.3g} ({worst.name}); "
          "shrinking eps makes it grow like eps^(beta - alpha)")
