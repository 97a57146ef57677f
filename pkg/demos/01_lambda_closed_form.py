"""
The channel coupling factor Lambda
==================================

For an even channel the sender and receiver only see each other through
one number, ``Lambda_N``. Here it is computed four ways on a few channels.
"""

import numpy as np
import spinqst as qst

# a short channel where the closed form is easy to check by hand
p = qst.validate((1.0, 0.5, 1.0))
print(qst.lambda_all(p))

# staggered channels: the weak-first phase makes Lambda grow like b**-M,
# the strong-first phase makes it shrink like b**(M-1)
for phase in ("weak-first", "strong-first"):
    q = qst.make_staggered(30, 0.7, phase)
    print(phase, qst.lambda_closed_form(q))

# random channels, couplings in [0.05, 1]
rng = np.random.default_rng(0)
worst = 0.0
for _ in range(200):
    N = 2 * int(rng.integers(1, 51))
    worst = max(worst, qst.lambda_all(rng.uniform(0.05, 1, N - 1))["max_rel_dev"])
print("worst relative disagreement over 200 random channels:", worst)

# paired random channels always give Lambda = 1
print(qst.lambda_closed_form(qst.make_random_paired(30, 0.99, seed=4)))
