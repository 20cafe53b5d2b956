"""Fourier spectrum of a set indicator on the hypercube.

Run: python demos/01_fourier_spectrum.py
"""
import numpy as np

from changcube import fourier as fr

# A Hamming ball of radius 1 around the all-(+1) point in {-1,1}^5:
# mask 0 plus the five masks with a single bit set.
n = 5
ball = fr.indicator_from_points(n, [0] + [1 << i for i in range(n)])
print("density:", fr.density(ball))

spec = fr.walsh_hadamard_transform(ball)

# The fast transform and the definitional sum agree coefficient by coefficient.
naive = [fr.naive_fourier_coefficient(ball, s) for s in range(1 << n)]
print("max |fast - naive|:", np.max(np.abs(spec.coeffs - naive)))

# Weight by level. Parseval: the levels sum to the density.
for k in range(n + 1):
    print(f"W^{k} = {fr.level_weight(spec, k):.6f}")
print("sum of levels:", sum(fr.level_weight(spec, k) for k in range(n + 1)))

# Coordinate marginals of the uniform distribution on the ball.
for i, m in enumerate(fr.conditional_marginals(ball), start=1):
    print(f"Pr[x_{i} = +1 | x in A] = {m.p_plus:.4f}")
