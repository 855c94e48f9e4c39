"""
Expected number of draws
========================

Columns of a generator matrix are drawn uniformly with replacement until a
chosen standard basis vector is in their span.  The lattice sum gives the
exact expectation; subset enumeration and simulation confirm it.
"""

# %%
from coverage_depth import (
    GeneratorMatrix,
    all_expected_samples,
    expected_samples_oracle,
    field_new,
    g_r_matrix,
    simulate,
    t_ave,
    zeta,
)

G = GeneratorMatrix.from_rows(field_new(2), [[1, 0, 1, 0, 1], [0, 1, 0, 1, 1]])
exact = all_expected_samples(G)
print("lattice sum:      ", exact, [float(v) for v in exact])
print("subset enumeration:", [expected_samples_oracle(G, i) for i in (1, 2)])

# %%
mean, stderr = simulate(G, 1, trials=20_000, seed=7)
print(f"simulation: {mean:.4f} +/- {stderr:.4f}  (z = {(mean - float(exact[0])) / stderr:.2f})")

# %%
# zeta^s counts s-subsets whose span is not a standard subspace of the right size
print("zeta^1..4:", [zeta(G, s) for s in range(1, 5)])

# %%
# [e_1, ..., e_k, e_1 + ... + e_k] averages exactly k draws per strand
for k in range(2, 7):
    print(k, t_ave(g_r_matrix(field_new(2), k, k)))
