"""
Searching for the best matrix
=============================

Up to column order and scaling, a matrix is a vector of counts over the
projective points of F_q^k.  For small parameters all count vectors can be
scored exactly.
"""

# %%
from coverage_depth import monotonicity_check, optimal_search
from coverage_depth.lattice import incidence

points = incidence(2, 3).points
print("projective points of F_2^3:", points)

# %%
for n in range(4, 9):
    best_max = optimal_search(2, n, 3, "max")
    best_ave = optimal_search(2, n, 3, "ave")
    print(f"n={n}: T_max {str(best_max.value):>8} counts {best_max.counts}   T_ave {str(best_ave.value):>8} counts {best_ave.counts}")

# %%
# values never get worse when n is multiplied: repeat every column
for row in monotonicity_check(2, 3, 8, "ave"):
    print(row.n, row.value, row.checks)

# %%
# more columns than k by one: the average is always exactly k
for q, k in [(2, 2), (3, 2), (2, 3), (3, 3)]:
    print(q, k, optimal_search(q, k + 1, k, "ave").value)
