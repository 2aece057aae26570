"""Comparison functions of constant-curvature geometry.

The radial Jacobi/Riccati solutions sin_k and cot_k, their dimensionless
forms phi and psi, and the monotone inverse of phi.  Prints a small
table and checks the defining identities on a grid.
"""

import numpy as np

from geoprofile import phi, psi, sin_k, cot_k, phi_inverse

print("x          phi(x)        psi(x)")
for x in (-4.0, -1.0, 0.0, 1.0, np.pi ** 2 / 4, 8.0):
    print(f"{x:9.4f}  {phi(x):12.8f}  {psi(x):12.8f}")

print("\nidentities r*cot_k = phi(K r^2) and sin_k/r = psi(K r^2):")
for K in (-1.0, 0.0, 0.5, 2.0):
    r = np.linspace(1e-3, 1.0, 2000)
    if K > 0:
        r = r * 0.95 * np.pi / np.sqrt(K)
    e1 = np.max(np.abs(r * cot_k(K, r) - phi(K * r * r)))
    e2 = np.max(np.abs(sin_k(K, r) / r - psi(K * r * r)))
    print(f"  K={K:+.1f}: max errors {e1:.2e}, {e2:.2e}")

print("\nmonotone inversion of phi:")
for y in (0.9, 1.0, 1.5, -3.0, 50.0):
    x = phi_inverse(y)
    print(f"  phi_inverse({y:6.2f}) = {x:14.8f}   residual "
          f"{abs(phi(x) - y):.2e}")
