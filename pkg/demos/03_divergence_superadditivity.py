"""Superadditivity of KL divergence, and where it fails.

Run: python demos/03_divergence_superadditivity.py
"""
import numpy as np

from changcube import info

rng = np.random.default_rng(0)

# For a product reference distribution q, the joint divergence dominates the
# sum of marginal divergences. With two factors the gap is I(X;Y) under p.
p = info.random_distribution((3, 4), rng)
q = info.product_of([info.random_distribution((3,), rng), info.random_distribution((4,), rng)])
bd = info.superadditivity_breakdown(p, q)
print(bd)
print("mutual information of p:", info.mutual_information(p))

# Chain rule: D(p||q) = D(p_X||q_X) + D(p(Y|X)||q(Y|X)).
print(
    info.kl_divergence(p, q),
    info.kl_divergence(info.marginal(p, 0), info.marginal(q, 0)) + info.conditional_divergence(p, q),
)

# Non-product q: the 2x2 family. The sign of the gap depends on eps.
for eps in (0.01, -0.2):
    p, q = info.counterexample_pair(eps)
    bd = info.raw_breakdown(p, q)
    print(f"eps={eps:+.2f}: joint={bd.joint:.4f} marginal_sum={bd.marginal_sum:.4f} gap={bd.gap:+.4f}")

for eps in np.linspace(-0.24, 0.08, 9):
    p, q = info.counterexample_pair(float(eps))
    print(f"eps={eps:+.3f}  gap={info.raw_breakdown(p, q).gap:+.5f}")
