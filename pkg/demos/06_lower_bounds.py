"""
Lower bounds for every field
============================

The new bound adds a correction S(r), minimized over r, to the
coupon-collector style base term.  It is tight at n = k + 1 and keeps a
gap of at least ln 3 - ln 2 over the base when n - k is fixed.
"""

# %%
from coverage_depth import constant_gap_check, prior_bound, simple_bound, theorem2_bound
from coverage_depth.cli import round_half_up

rep = theorem2_bound(4, 3)
print("per r:", rep.per_r, "minimum", rep.value)
print("prior:", prior_bound(4, 3), " simple:", simple_bound(4, 3))

# %%
k = 100
print(" n   bound   prior   argmin r")
for n in range(k + 1, k + 6):
    rep = theorem2_bound(n, k)
    print(n, round_half_up(rep.value, 2), round_half_up(prior_bound(n, k), 2), rep.argmin_r)

# %%
# tight at n = k + 1
print(all(theorem2_bound(k + 1, k).value == k for k in range(2, 60)))

# %%
for kk in (100, 300, 1000):
    gap, target = constant_gap_check(kk, 2)
    print(f"k={kk}: gap over the base {float(gap):.4f}  (floor ln 3 - ln 2 = {target:.4f})")
