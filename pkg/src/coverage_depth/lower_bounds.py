"""Lower bounds on T_ave(q, n, k) that hold for every field size.

All values are exact rationals.  Binomials with a negative lower index are 0,
which the sums below rely on.
"""

from __future__ import annotations

import math
from dataclasses import dataclass
from fractions import Fraction
from functools import lru_cache

from .errors import InvalidParams


def binom(a: int, b: int) -> int:
    return math.comb(a, b) if 0 <= b <= a else 0


@lru_cache(maxsize=None)
def harmonic(n: int) -> Fraction:
    if n <= 0:
        return Fraction(0)
    return harmonic(n - 1) + Fraction(1, n) if n < 64 else _harmonic_direct(n)


def _harmonic_direct(n: int) -> Fraction:
    f = math.factorial(n)
    return Fraction(sum(f // j for j in range(1, n + 1)), f)


def base_bound(n: int, k: int) -> Fraction:
    """n - (n(n-k)/k)(H_n - H_{n-k})."""
    return n - Fraction(n * (n - k), k) * (harmonic(n) - harmonic(n - k))


@dataclass(frozen=True)
class LowerBoundReport:
    n: int
    k: int
    per_r: dict
    value: Fraction
    argmin_r: int


def inner_sum(k: int, r: int, s: int) -> int:
    """sum_{t=1}^{r-1} C(r, t-1) C(k-r, s-t), term by term."""
    return sum(binom(r, t - 1) * binom(k - r, s - t) for t in range(1, r))


def zeta_lower_bound(n: int, k: int, r: int, s: int) -> int:
    """Floor on zeta^s(G) when r is the smallest dimension holding r+1 columns."""
    if r < 1 or not r + 1 <= s <= k:
        raise InvalidParams(f"need r >= 1 and r+1 <= s <= k, got r={r}, s={s}, k={k}")
    return binom(n - (r + 1), s - (r + 1)) + inner_sum(k, r, s)


def zeta_g_r(k: int, r: int, s: int) -> int:
    """zeta^s of [e_1, ..., e_k, e_1 + ... + e_r]: C(k, s-1) - r C(k-r, s-r)."""
    return binom(k, s - 1) - r * binom(k - r, s - r)


def _beta(a: int, b: int) -> Fraction:
    """Beta(a, b) = (a-1)! (b-1)! / (a+b-1)! for positive integers."""
    f = math.factorial
    return Fraction(f(a - 1) * f(b - 1), f(a + b - 1))


def _s_table(n: int, k: int) -> dict[int, Fraction]:
    """S(r) for every r in [1, k].

    With 1 / C(n-1, s) = n Beta(s+1, n-s), the r-dependent sums over s
    collapse to Beta values and harmonic differences, leaving O(min(k, n-k))
    work per r; the r-independent prefix and suffix sums are accumulated as
    integers over the common denominator (n-1)!.
    """
    fact = [0] * n
    fact[0] = math.factorial(n - 1)
    for s in range(n - 1):
        fact[s + 1] = fact[s] * (s + 1) // (n - 1 - s)
    # fact[s] / fact[0] == 1 / C(n-1, s)
    prefix = [0] * (k + 2)
    for s in range(1, k + 1):
        prefix[s + 1] = prefix[s] + (math.comb(n, s) - math.comb(k, s)) * fact[s]
    suffix = [0] * (k + 2)
    for s in range(k, 0, -1):
        suffix[s] = suffix[s + 1] + math.comb(k, s - 1) * fact[s]
    h_n = harmonic(n)
    table = {}
    for r in range(1, k + 1):
        m = k - r
        # sum_{s=r}^{k} C(k-r, s-r) / C(n-1, s)
        p_full = n * _beta(r + 1, n - k)
        # sum_{s=r+1}^{k} C(k-r, s-r-1) / C(n-1, s)
        if n == k + 1:
            p_short = n * (harmonic(k + 1) - harmonic(r + 1))
        else:
            p_short = n * (_beta(r + 2, n - k - 1) - _beta(k + 2, n - k - 1))
        # sum_{s=r+1}^{k} C(n-r-1, s-r-1) / C(n-1, s)
        if n - 1 - k < m:
            tail = sum(binom(n - r - 1, s - r - 1) * fact[s] for s in range(k + 1, n))
            p_chain = n * (h_n - harmonic(r + 1)) - Fraction(tail, fact[0])
        else:
            p_chain = Fraction(sum(binom(n - r - 1, s - r - 1) * fact[s] for s in range(r + 1, k + 1)), fact[0])
        total = Fraction(prefix[r] + suffix[r], fact[0]) + p_chain - r * p_full - p_short
        table[r] = total / k
    return table


def theorem2_bound(n: int, k: int) -> LowerBoundReport:
    """Minimum over r in [1, k] of base_bound(n, k) + S(r)."""
    if not n >= k + 1 >= 2:
        raise InvalidParams(f"need n >= k + 1 >= 2, got n={n}, k={k}")
    base = base_bound(n, k)
    per_r = {r: base + v for r, v in _s_table(n, k).items()}
    argmin = min(per_r, key=lambda r: (per_r[r], r))
    return LowerBoundReport(n, k, per_r, per_r[argmin], argmin)


def s_term(n: int, k: int, r: int) -> Fraction:
    """S(r) summed term by term from its definition (slow; for checking)."""
    total = Fraction(0)
    for s in range(1, r):
        total += Fraction(math.comb(n, s) - math.comb(k, s), k * math.comb(n - 1, s))
    for s in range(r, k + 1):
        total += Fraction(binom(n - (r + 1), s - (r + 1)) + inner_sum(k, r, s), k * math.comb(n - 1, s))
    return total


def s_closed_form_parity(k: int, r: int) -> Fraction:
    """S(r) at n = k + 1: (k+1)/k H_k - 1 - r(k+1)/(k(r+1))."""
    return Fraction(k + 1, k) * harmonic(k) - 1 - Fraction(r * (k + 1), k * (r + 1))


def prior_bound(n: int, k: int) -> Fraction:
    """max{(k+1)/2, base_bound(n, k)}."""
    if k < 1 or n < k:
        raise InvalidParams(f"need n >= k >= 1, got n={n}, k={k}")
    return max(Fraction(k + 1, 2), base_bound(n, k))


def simple_bound(n: int, k: int) -> Fraction:
    """base_bound + min{(k^2-1)/(3(n-1)(n-2)), (n-k)/(k(n-1))}."""
    if not n >= k + 1 >= 2:
        raise InvalidParams(f"need n >= k + 1 >= 2, got n={n}, k={k}")
    second = Fraction(n - k, k * (n - 1))
    # n == 2 forces k == 1, where the first numerator k^2 - 1 vanishes
    first = Fraction(k * k - 1, 3 * (n - 1) * (n - 2)) if n > 2 else Fraction(0)
    return base_bound(n, k) + min(first, second)


def constant_gap_check(k: int, c: int) -> tuple[Fraction, float]:
    """theorem2_bound(k + c, k) minus base_bound, next to the guaranteed floor ln 3 - ln 2."""
    if c < 1 or k < 1:
        raise InvalidParams(f"need k >= 1 and c >= 1, got k={k}, c={c}")
    n = k + c
    return theorem2_bound(n, k).value - base_bound(n, k), math.log(3) - math.log(2)
