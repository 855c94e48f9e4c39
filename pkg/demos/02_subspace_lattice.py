"""
The subspace lattice
====================

The expectation formula sums over every proper subspace of F_q^k.  Only a
subspace's dimension, weight distribution and the number of standard basis
vectors it misses matter, so the lattice can be summarised by a census.
"""

# %%
from coverage_depth import enumerate_subspaces, field_new, gaussian_binomial, weight_distribution_census
from coverage_depth.lattice import dimension_coefficient

for q in (2, 3, 4):
    print(f"q={q}: subspaces of F_q^3 by dimension", [gaussian_binomial(3, t, q) for t in range(4)])

# %%
# the 2-dimensional subspaces of F_2^3 in canonical (RREF) order
for U in enumerate_subspaces(field_new(2), 3, 2):
    print(U.basis, "weight distribution", U.wd, "misses", U.h, "basis vectors")

# %%
# census of F_q^3: (dimension, weight distribution, h) -> number of subspaces
for q in (2, 3, 5):
    print(f"\nq = {q}")
    for (t, wd, h), count in sorted(weight_distribution_census(field_new(q), 3).items()):
        print(f"  dim {t}  wd {wd}  h {h}  count {count}")

# %%
# each t-dimensional subspace missing e_i enters the sum with a fixed integer weight
print("\ndimension coefficients for q = 2, k = 3:", [dimension_coefficient(2, 3, t) for t in (1, 2)])
