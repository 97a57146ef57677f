"""
Same transfer time, different fidelity
======================================

Scale the end couplings of a staggered channel so its transfer time matches
the uniform channel at ``a = xi``, then compare the best fidelity near that
time.
"""

import spinqst as qst

for b in (1.0, 0.9, 0.7, 0.5):
    c = qst.equal_time_compare(30, b, 0.02)
    print(f"b={b}: a={c.a_staggered:.3e} F_uniform={c.F_uniform:.5f} "
          f"F_staggered={c.F_staggered:.5f} deficit={c.deficit:.2e}")

# b = 0.9 comes out marginally ahead of uniform here. At b = 0.5 the
# weak-first channel carries near-zero edge modes, the end spins go resonant
# with them and the fidelity collapses to the classical 1/2.
