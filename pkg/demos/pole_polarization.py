"""Photons emitted along the field carry exactly one unit of angular momentum.

On the axis only the transition n -> n-1 with unchanged s radiates, so every
photon there is circularly polarized: right-handed forward, left-handed
backward.  Off the axis higher harmonics and mixed polarizations appear.
"""

import math

import numpy as np

from vortex_sr import ElectronState, FieldConfig, spectrum_table

cfg = FieldConfig(b=0.05)
ini = ElectronState(8, 3, 0.2, 1)
spec = spectrum_table(ini, cfg, theta=np.array([0.0, math.pi / 4, math.pi / 2, 3 * math.pi / 4, math.pi]),
                      harmonics=range(1, 4))

print(f"{'theta':>7} {'nu':>3} {'emission +':>12} {'emission -':>12} {'flux/emission':>14}")
for i, nu in enumerate(spec.harmonics):
    for j, theta in enumerate(spec.theta):
        em = spec.emission[i, :, j]
        total = em.sum()
        per = f"{spec.flux[i, :, j].sum() / total:14.6f}" if total > 0 else f"{'-':>14}"
        print(f"{theta:7.3f} {nu:3d} {em[0]:12.4e} {em[1]:12.4e} {per}")
