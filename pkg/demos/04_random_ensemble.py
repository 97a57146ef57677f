"""
Random paired channels never beat the uniform one
=================================================

Every realization has ``Lambda = 1``, so they all share the uniform
channel's transfer time, but their correlation amplitude is lower.
A reduced ensemble keeps this quick; use the CLI for the full 1000.
"""

import numpy as np
import spinqst as qst

cfg = qst.SweepConfig(N=30, W_values=(0.5, 0.99), samples=50, seed=0)
res = qst.sweep_random_paired(cfg)
uniform = {r.xi: r.C for r in res.select("uniform")}

for W in cfg.W_values:
    rows = res.select("random_paired", W)
    excess = max(r.C - uniform[r.xi] for r in rows)
    lam = max(abs(r.lam - 1) for r in rows)
    print(f"W={W}: max(C_sample - C_uniform) = {excess:.3e}, max |Lambda - 1| = {lam:.1e}")

# ensemble mean and spread at a few xi
for x in cfg.xi_grid[::10]:
    for W in cfg.W_values:
        C = np.array([r.C for r in res.select("random_paired", W) if r.xi == x])
        print(f"xi={x:.4g} W={W}: uniform {uniform[x]:.5f}  mean {C.mean():.5f}  min {C.min():.5f}")
