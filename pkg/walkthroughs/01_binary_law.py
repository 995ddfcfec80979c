"""
The linear law of a two-state chain
===================================

A two-state chain with switching probabilities p and q has autocorrelation
C_k = P(x_t = x_{t+k}) that obeys a fixed second-order recursion. Here we
recover that recursion from the exact C_k, then from a simulated series.
"""

# %%
# The chain. Columns hold outgoing probabilities, so T[x, y] = P(y -> x).
import numpy as np

from markovlaws import (
    EmbeddingConfig,
    analytic_autocorr,
    binary_transfer,
    equilibrium,
    estimate_autocorr,
    extract_law,
    law_spectrum,
    simulate,
    spectrum,
)

p, q = 0.6232, 0.6335
T = binary_transfer(p, q)
print("T =\n", T.entries)
print("equilibrium:", equilibrium(T))
print("spectrum:", spectrum(T))

# %%
# Exact autocorrelation, embedded as a 20 x 3 Hankel matrix. The Gram matrix
# has a one-dimensional null space spanned by the law coefficients.
cfg = EmbeddingConfig(lags=20, order=3)
c = analytic_autocorr(T, cfg.k_max)
spec = law_spectrum(c, cfg)
law = extract_law(spec)
print("Gram eigenvalues:", spec.eigenvalues)
print("law coefficients:", law.coeffs)

expected = np.array([1 - p - q, -(2 - p - q), 1.0])
print("expected (scaled):", expected / np.linalg.norm(expected))

# %%
# The roots of the law polynomial are the eigenvalues of T.
print("law roots:", law.roots.real)
print("1 - p - q =", 1 - p - q)

# %%
# The same pipeline on a simulated series. Sampling noise lifts the smallest
# eigenvalue off zero, but the coefficients stay close.
series = simulate(T, 0, 1_000_000, seed=1)
c_hat = estimate_autocorr(series, cfg.k_max)
print("max |C_hat - C|:", np.max(np.abs(c_hat.values - c.values)))
law_hat = extract_law(law_spectrum(c_hat, cfg))
print("estimated coefficients:", law_hat.coeffs)
print("residual of the exact law on C_hat:", np.abs(law.apply(c_hat)).max())
