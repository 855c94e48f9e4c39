"""
Upper bounds from symmetric constructions
=========================================

Giving every vector of Hamming weight i the same column share w_i makes all
strands equally hard, and the expectation depends only on the census.
Optimizing the shares gives an upper bound that holds for every large n.
"""

# %%
from fractions import Fraction

from coverage_depth import SymmetricWeights, eval_k3, optimize_asymptotic, optimize_upper_bound, symmetric_tmax

# only unit vectors: coupon collection, k draws per strand
print(symmetric_tmax(SymmetricWeights(2, 3, (Fraction(1, 3), 0, 0))))

# %%
for q in (2, 3, 4, 5, 7, 8):
    cert = optimize_upper_bound(q, 3)
    w = ", ".join(f"{x:.4f}" for x in cert.witness.w)
    print(f"q={q}: {cert.value:.5f} = {cert.value / 3:.5f} * 3   weights ({w})   closed form {eval_k3(q, *cert.witness.w):.5f}")

# %%
# the large-q limit of the k = 3 construction is a two-variable problem
cert = optimize_asymptotic()
lam, mu = cert.witness
print(f"limit: {cert.value:.5f} = {cert.value / 3:.5f} * 3 at lam={lam:.5f}, mu={mu:.5f}")

# %%
# k = 4 improves as the field grows
for q in (4, 8):
    print(q, optimize_upper_bound(q, 4).value / 4)
