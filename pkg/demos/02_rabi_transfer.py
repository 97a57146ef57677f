"""
Rabi-like transfer through a uniform channel
============================================

Weakly coupled end spins exchange the excitation like a two-level system
with period ``2 tau``. The exact amplitude is compared with ``C |sin|``.
"""

import math

import numpy as np
import spinqst as qst

N = 30
for a in (0.1, 0.01, 0.005):
    H = qst.build_full_hamiltonian(qst.make_uniform(N), qst.EndCouplings.symmetric(a))
    d = qst.diagonalize(H)
    tau = math.pi / (2 * a * a)
    t_star, F = qst.peak_fidelity(d, tau)
    print(f"a={a:<6} tau={tau:10.1f}  best t={t_star:10.1f}  F={F:.6f}")

# the full time series at a = 0.005
d = qst.diagonalize(qst.build_full_hamiltonian(qst.make_uniform(N), qst.EndCouplings.symmetric(0.005)))
s = qst.evolve_series(d, np.linspace(0, 2 * math.pi / (2 * 0.005**2), 4001), {"N": N, "a": 0.005})
print(s.metadata)
print("sup |exact - rabi| =", np.abs(s.abs_f - s.rabi_abs_f).max())

# every 400th point, to see the oscillation
for t, f, F in zip(s.times[::400], s.abs_f[::400], s.fidelity[::400]):
    print(f"{t:12.1f} {f:.4f} {F:.4f}")
