"""The pairwise dependence coefficient, and why it is asymmetric.

The coefficient xi(x, y) estimates how close y is to a measurable function
of x: near 0 for independent pairs, near 1 when y = f(x), and generally
xi(x, y) != xi(y, x).  That asymmetry is what the skeleton step exploits.
"""

import numpy as np

from polytree import SeedPolicy, xi_coefficient

rng = np.random.default_rng(1)
n = 4000

# Independent variables: the coefficient hovers near zero.
x = rng.standard_normal(n)
noise = rng.standard_normal(n)
print(f"independent pair:        xi = {xi_coefficient(x, noise):+.3f}")

# y a noisy linear function of x: moderate dependence, roughly symmetric.
y_lin = (x + noise) / np.sqrt(2)
print(f"noisy linear, xi(x, y) = {xi_coefficient(x, y_lin):+.3f},"
      f"  xi(y, x) = {xi_coefficient(y_lin, x):+.3f}")

# y = x^2 is a *function* of x, but x is not a function of y (sign lost):
# the coefficient sees the difference, Pearson correlation would see ~0.
y_sq = x**2
print(f"y = x^2,      xi(x, y) = {xi_coefficient(x, y_sq):+.3f},"
      f"  xi(y, x) = {xi_coefficient(y_sq, x):+.3f}")
print(f"              Pearson corr = {np.corrcoef(x, y_sq)[0, 1]:+.3f}")

# Conventions: a constant y returns exactly 0, and ties in x are broken by
# a seeded random sorting permutation so reruns are reproducible.
print(f"constant y:              xi = {xi_coefficient(x, np.full(n, 2.0)):+.3f}")
tied_x = rng.integers(0, 3, 100).astype(float)
tied_y = rng.integers(0, 3, 100).astype(float)
stream = SeedPolicy(7).stream("demo")
print(f"tied sample (seeded):    xi = {xi_coefficient(tied_x, tied_y, rng=stream):+.3f}")
