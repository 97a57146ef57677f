"""
Correlation amplitude of staggered channels
===========================================

Sweep ``xi`` for the uniform channel and weak-first staggered channels at
equal transfer time. In the weak-coupling regime the uniform channel keeps
the largest ``C``; near ``xi ~ 0.2`` and above the ordering breaks down.
"""

import numpy as np
import spinqst as qst

res = qst.sweep_staggered(qst.SweepConfig(N=30))
xi = np.array([r.xi for r in res.select("uniform")])
table = {"uniform": np.array([r.C for r in res.select("uniform")])}
for b in (0.9, 0.7, 0.5):
    table[f"b={b}"] = np.array([r.C for r in res.select("staggered", b)])

print("xi        " + "".join(f"{k:>10}" for k in table))
for i in range(0, len(xi), 4):
    print(f"{xi[i]:<10.4g}" + "".join(f"{v[i]:10.6f}" for v in table.values()))

bad = xi[table["uniform"] < np.max([table[k] for k in table if k != "uniform"], axis=0) - 1e-6]
print("xi where some staggered channel beats uniform:", np.round(bad, 4))
