"""
Spotting a hidden Markov series
===============================

A Markov chain on a few states has a law whose order equals its number of
states. Coarse-graining a 4-state chain to a single bit hides states, and
the two-term law of a genuine binary chain no longer fits. The third
normalized Gram eigenvalue measures the misfit.
"""

# %%
import numpy as np

from markovlaws import EmbeddingConfig, LEFT_BIT, project, series_spectrum, simulate
from markovlaws.fixtures import X0, Y0, binary_demo_matrix, hidden_demo_matrix

Tx = binary_demo_matrix()
Ty = hidden_demo_matrix()
print("Ty =\n", Ty.entries)

# %%
# x is binary, y has four states, z keeps only the left bit of y
# (states 0, 2 map to 0 and states 1, 3 map to 1).
rng = np.random.SeedSequence(42).spawn(2)
x = simulate(Tx, X0, 1_000_000, rng[0])
y = simulate(Ty, Y0, 1_000_000, rng[1])
z = project(y, LEFT_BIT)

# %%
# Normalized Gram spectra with 20 lags and 5 columns.
cfg = EmbeddingConfig(lags=20, order=5)
np.set_printoptions(precision=3)
for name, s in (("x", x), ("y", y), ("z", z)):
    print(name, series_spectrum(s, cfg).normalized)

# %%
# lambda_3 of x sits at the noise floor. For z it is clearly larger, even
# though z is as binary as x.
lam3 = {n: series_spectrum(s, cfg).normalized[2] for n, s in (("x", x), ("y", y), ("z", z))}
print("z / x:", lam3["z"] / lam3["x"])
print("y / x:", lam3["y"] / lam3["x"])
