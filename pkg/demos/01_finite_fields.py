"""
Finite fields and spans
=======================

Everything downstream works over GF(q).  Elements are the integers
0 .. q-1; for q = p^m they encode polynomials in base p, constant term in
the lowest digit.
"""

# %%
from coverage_depth import FqVector, field_new, rank, span_contains

# GF(4) is built on the smallest monic irreducible quadratic, x^2 + x + 1
f4 = field_new(4)
print("GF(4) modulus (constant term first):", f4.modulus)
print("multiplication table of GF(4):")
print(f4.mul_table)

# %%
# x * x = x + 1, i.e. 2 * 2 = 3 in the integer encoding
print("2 * 2 =", f4.mul(2, 2), " inverse of 2 =", f4.inv(2))

# %%
# Rank and span membership use exact Gaussian elimination.
f2 = field_new(2)
cols = [FqVector(f2, c) for c in [(1, 0), (0, 1), (1, 0), (0, 1), (1, 1)]]
print("rank of the five columns:", rank(cols))
print("e1 in span{e2, e1+e2}:", span_contains([cols[1], cols[4]], FqVector(f2, (1, 0))))
print("e1 in span{e2}:", span_contains([cols[1]], FqVector(f2, (1, 0))))
