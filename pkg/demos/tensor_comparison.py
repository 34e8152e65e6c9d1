"""Symmetrized versus canonical angular-momentum flux for circular motion.

The two tensors distribute the flux differently over angles (the
symmetrized one vanishes on the axis, the canonical spin part does not) but
their solid-angle integrals agree harmonic by harmonic.
"""

import math

from vortex_sr import ClassicalParams, canonical_densities, canonical_total, symmetrized_density, symmetrized_total

BETA = 0.6
p = ClassicalParams(BETA)

print("first harmonic, per steradian")
print(f"{'theta':>8} {'symmetrized':>13} {'orbital':>13} {'spin':>13}")
for theta in (0.0, 0.2, 0.6, 1.0, math.pi / 2):
    d = canonical_densities(p, 1, theta)
    print(f"{theta:8.3f} {symmetrized_density(p, 1, theta):13.6e} {d.orbital:13.6e} {d.spin:13.6e}")

sym = symmetrized_total(BETA, tol=1e-12)
can = canonical_total(BETA, tol=1e-12)
print(f"\nintegrated over the sphere, {len(sym.harmonics)} harmonics")
for k in range(5):
    print(f"  nu={k + 1}: {sym.flux[k, 0]:.15f}  {can.flux[k, 0]:.15f}")
print(f"  total: {sym.total_flux:.15f}  {can.total_flux:.15f}")
