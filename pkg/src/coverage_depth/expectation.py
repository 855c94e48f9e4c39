"""Expected number of uniform column draws needed to recover an information strand.

A generator matrix ``G`` (k x n over GF(q)) is sampled column by column,
uniformly with replacement.  ``tau_i`` is the number of draws until the
standard basis vector ``e_i`` lies in the span of what has been drawn.

Two independent routes to ``E[tau_i]`` live here:

* :func:`expected_samples` sums over the subspace lattice.  Only the
  fraction of columns falling in each subspace matters, so the work is
  independent of ``n`` once the lattice of ``(q, k)`` is built.
* :func:`expected_samples_oracle` enumerates every subset of columns and
  counts recovery sets; it is exponential in ``n`` and exists to check the
  first route.

Strand indices ``i`` are 1-based throughout (``e_1 .. e_k``).
"""

from __future__ import annotations

import math
from dataclasses import dataclass, field as dc_field
from fractions import Fraction
from typing import Mapping, Sequence

import numpy as np

from .errors import (
    DimensionOutOfRange,
    EnumerationTooLarge,
    IndexOutOfRange,
    MaxSamplesExceeded,
    RankDeficient,
    TooLarge,
    ZeroColumn,
)
from .gf import EchelonBasis, Field, annihilator, normalize, unit_vector
from .lattice import MEMBER_LIMIT, count_members, incidence

ORACLE_MAX_N = 20
MAX_DRAWS = 10**6


@dataclass(frozen=True)
class GeneratorMatrix:
    field: Field
    columns: tuple[tuple[int, ...], ...]

    def __post_init__(self) -> None:
        cols = tuple(tuple(int(x) for x in c) for c in self.columns)
        object.__setattr__(self, "columns", cols)
        if not cols or not cols[0]:
            raise DimensionOutOfRange("a generator matrix needs k >= 1 rows and n >= 1 columns")
        k = len(cols[0])
        for c in cols:
            if len(c) != k:
                raise ValueError("columns have different lengths")
            if any(not 0 <= x < self.field.q for x in c):
                raise ValueError(f"entries must lie in [0, {self.field.q - 1}]")

    @classmethod
    def from_rows(cls, field: Field, rows: Sequence[Sequence[int]]) -> "GeneratorMatrix":
        return cls(field, tuple(zip(*rows)))

    @property
    def k(self) -> int:
        return len(self.columns[0])

    @property
    def n(self) -> int:
        return len(self.columns)

    @property
    def rows(self) -> list[tuple[int, ...]]:
        return [tuple(c[j] for c in self.columns) for j in range(self.k)]

    def rank(self) -> int:
        eb = EchelonBasis(self.field, self.k)
        for c in self.columns:
            eb.add(c)
        return eb.rank

    def permute_rows(self, perm: Sequence[int]) -> "GeneratorMatrix":
        """Row ``perm[j]`` of the result is row ``j`` of ``self`` (0-based)."""
        cols = []
        for c in self.columns:
            new = [0] * self.k
            for j, x in enumerate(c):
                new[perm[j]] = x
            cols.append(tuple(new))
        return GeneratorMatrix(self.field, tuple(cols))

    def scale_column(self, j: int, s: int) -> "GeneratorMatrix":
        f = self.field
        cols = list(self.columns)
        cols[j] = tuple(f.mul(s, x) for x in cols[j])
        return GeneratorMatrix(f, tuple(cols))


@dataclass(frozen=True)
class WeightProfile:
    """Fraction of columns in each projective class of nonzero vectors.

    Keys are canonical representatives (first nonzero coordinate 1); keys
    given in another scaling are merged into their class.  ``n`` records the
    column count when the profile came from a concrete matrix.
    """

    field: Field
    k: int
    weights: Mapping[tuple[int, ...], Fraction]
    n: int | None = None
    _denominator: int = dc_field(init=False, repr=False, compare=False)

    def __post_init__(self) -> None:
        merged: dict[tuple[int, ...], Fraction] = {}
        for u, w in self.weights.items():
            u = tuple(int(x) for x in u)
            if len(u) != self.k:
                raise ValueError(f"class {u} does not have length {self.k}")
            if not any(u):
                raise ZeroColumn("the zero vector cannot carry weight", column=u)
            w = Fraction(w)
            if w < 0:
                raise ValueError(f"negative weight for {u}")
            if w:
                key = normalize(self.field, u)
                merged[key] = merged.get(key, Fraction(0)) + w
        if sum(merged.values()) != 1:
            raise ValueError(f"weights sum to {sum(merged.values())}, not 1")
        object.__setattr__(self, "weights", dict(sorted(merged.items())))
        object.__setattr__(self, "_denominator", math.lcm(*(w.denominator for w in merged.values())))

    @classmethod
    def from_counts(cls, field: Field, k: int, counts: Mapping[tuple[int, ...], int]) -> "WeightProfile":
        n = sum(counts.values())
        return cls(field, k, {u: Fraction(c, n) for u, c in counts.items() if c}, n=n)

    @property
    def q(self) -> int:
        return self.field.q

    def scaled_counts(self) -> tuple[np.ndarray, int]:
        """Integer class loads ``c`` and denominator ``D`` with ``w = c / D``.

        The vector is indexed by the lattice's projective point order.
        """
        inc = incidence(self.q, self.k)
        d = self._denominator
        dtype = np.int64 if d < 2**62 // max(len(inc.points), 1) else object
        counts = np.zeros(len(inc.points), dtype=dtype)
        for u, w in self.weights.items():
            counts[inc.point_index(u)] = w.numerator * (d // w.denominator)
        return counts, d


def _require_full_rank(G: GeneratorMatrix) -> None:
    r = G.rank()
    if r < G.k:
        y = annihilator(G.field, G.columns, G.k)
        raise RankDeficient(
            f"rank {r} < k = {G.k}: every column lies in the hyperplane y.x = 0 with y = {list(y)}",
            hyperplane=y,
        )


def weight_profile(G: GeneratorMatrix) -> WeightProfile:
    """Projective weight profile of ``G``; rejects zero columns and rank deficiency."""
    for j, c in enumerate(G.columns):
        if not any(c):
            raise ZeroColumn(f"column {j + 1} is zero", column=j + 1)
    _require_full_rank(G)
    counts: dict[tuple[int, ...], int] = {}
    for c in G.columns:
        key = normalize(G.field, c)
        counts[key] = counts.get(key, 0) + 1
    return WeightProfile.from_counts(G.field, G.k, counts)


def _as_profile(obj) -> WeightProfile:
    return weight_profile(obj) if isinstance(obj, GeneratorMatrix) else obj


def subspace_loads(counts: np.ndarray, q: int, k: int) -> dict[int, np.ndarray]:
    """Scaled weight of every t-dimensional subspace, keyed by t."""
    inc = incidence(q, k)
    return {t: counts[m].sum(axis=1) for t, m in inc.members.items()}


def _check_hyperplanes(loads: dict[int, np.ndarray], d: int, q: int, k: int) -> None:
    if k < 2:
        return
    full = np.flatnonzero(loads[k - 1] == d)
    if len(full):
        inc = incidence(q, k)
        pts = [inc.points[p] for p in inc.members[k - 1][full[0]]]
        raise RankDeficient(
            f"every column lies in the hyperplane spanned by {pts}", hyperplane=pts
        )


def _odds_sum(values: np.ndarray, d: int) -> Fraction:
    """Exact sum of c / (d - c) over ``values``."""
    total = Fraction(0)
    uniq, mult = np.unique(values, return_counts=True)
    for c, m in zip(uniq.tolist(), mult.tolist()):
        if c:
            total += m * Fraction(c, d - c)
    return total


def _index(i: int, k: int) -> int:
    if not 1 <= i <= k:
        raise IndexOutOfRange(f"index {i} outside [1, {k}]")
    return i - 1


def expectations_from_loads(loads: dict[int, np.ndarray], d: int, q: int, k: int) -> list[Fraction]:
    """E[tau_i] for every i from precomputed subspace loads."""
    inc = incidence(q, k)
    out = []
    for i in range(k):
        e = Fraction(1)
        for t, c in loads.items():
            e += inc.coefficient[t] * _odds_sum(c[~inc.contains[t][:, i]], d)
        out.append(e)
    return out


METHODS = ("auto", "lattice", "subsets")


def _route(obj, method: str) -> str:
    """Pick the lattice sum or subset enumeration for ``obj``.

    ``auto`` uses the lattice whenever its enumeration fits
    :data:`~coverage_depth.lattice.MEMBER_LIMIT`, and otherwise falls back to
    subset enumeration for concrete matrices with at most ``ORACLE_MAX_N``
    columns.  Both routes are exact.
    """
    if method not in METHODS:
        raise ValueError(f"method must be one of {METHODS}")
    if method != "auto":
        if method == "subsets" and not isinstance(obj, GeneratorMatrix):
            raise TypeError("the subset route needs a GeneratorMatrix")
        return method
    q, k = obj.field.q, obj.k
    if count_members(q, k, range(1, k)) <= MEMBER_LIMIT:
        return "lattice"
    if isinstance(obj, GeneratorMatrix) and obj.n <= ORACLE_MAX_N:
        return "subsets"
    raise EnumerationTooLarge(
        f"the subspace lattice of F_{q}^{k} exceeds the enumeration limit and n is too large for subsets"
    )


def _subset_expectations(G: GeneratorMatrix) -> list[Fraction]:
    for j, c in enumerate(G.columns):
        if not any(c):
            raise ZeroColumn(f"column {j + 1} is zero", column=j + 1)
    return [expected_samples_oracle(G, i) for i in range(1, G.k + 1)]


def expected_samples(profile: WeightProfile | GeneratorMatrix, i: int, method: str = "auto") -> Fraction:
    """Exact E[tau_i] by the subspace-lattice sum (see :func:`_route` for ``method``)."""
    if _route(profile, method) == "subsets":
        _index(i, profile.k)
        return _subset_expectations(profile)[i - 1]
    profile = _as_profile(profile)
    i0 = _index(i, profile.k)
    counts, d = profile.scaled_counts()
    loads = subspace_loads(counts, profile.q, profile.k)
    _check_hyperplanes(loads, d, profile.q, profile.k)
    inc = incidence(profile.q, profile.k)
    e = Fraction(1)
    for t, c in loads.items():
        e += inc.coefficient[t] * _odds_sum(c[~inc.contains[t][:, i0]], d)
    return e


def all_expected_samples(profile: WeightProfile | GeneratorMatrix, method: str = "auto") -> list[Fraction]:
    if _route(profile, method) == "subsets":
        return _subset_expectations(profile)
    profile = _as_profile(profile)
    counts, d = profile.scaled_counts()
    loads = subspace_loads(counts, profile.q, profile.k)
    _check_hyperplanes(loads, d, profile.q, profile.k)
    return expectations_from_loads(loads, d, profile.q, profile.k)


def t_max(profile: WeightProfile | GeneratorMatrix, method: str = "auto") -> Fraction:
    return max(all_expected_samples(profile, method))


def average_from_loads(loads: dict[int, np.ndarray], d: int, q: int, k: int) -> Fraction:
    """T_ave in one pass, weighting each subspace by how many e_i it misses."""
    inc = incidence(q, k)
    total = Fraction(0)
    for t, c in loads.items():
        h = k - inc.contains[t].sum(axis=1)
        part = Fraction(0)
        for hv in np.unique(h).tolist():
            if hv:
                part += hv * _odds_sum(c[h == hv], d)
        total += inc.coefficient[t] * part
    return 1 + total / k


def t_ave(profile: WeightProfile | GeneratorMatrix, method: str = "auto") -> Fraction:
    if _route(profile, method) == "subsets":
        return sum(_subset_expectations(profile), Fraction(0)) / profile.k
    profile = _as_profile(profile)
    counts, d = profile.scaled_counts()
    loads = subspace_loads(counts, profile.q, profile.k)
    _check_hyperplanes(loads, d, profile.q, profile.k)
    return average_from_loads(loads, d, profile.q, profile.k)


# --------------------------------------------------------------------------
# brute-force subset enumeration


@dataclass(frozen=True)
class SubsetCensus:
    """Per-size counts over all column subsets of a matrix.

    ``alpha[i][s]`` counts s-subsets whose span holds ``e_{i+1}``;
    ``zeta[s]`` counts s-subsets whose span is not a standard space of
    dimension ``min(s, k)``.
    """

    n: int
    k: int
    alpha: tuple[tuple[int, ...], ...]
    zeta: tuple[int, ...]


def subset_census(G: GeneratorMatrix) -> SubsetCensus:
    if G.n > ORACLE_MAX_N:
        raise TooLarge(f"n = {G.n} > {ORACLE_MAX_N}: 2^n subsets is too many")
    n, k = G.n, G.k
    alpha = [[0] * (n + 1) for _ in range(k)]
    zeta = [0] * (n + 1)
    cols = G.columns

    def visit(basis: EchelonBasis, size: int, start: int) -> None:
        units = 0
        for i in range(k):
            if basis.contains_unit(i):
                alpha[i][size] += 1
                units += 1
        if not (basis.rank == min(size, k) and units == basis.rank):
            zeta[size] += 1
        for j in range(start, n):
            if basis.contains(cols[j]):
                visit(basis, size + 1, j + 1)
            else:
                nxt = basis.copy()
                nxt.add(cols[j])
                visit(nxt, size + 1, j + 1)

    visit(EchelonBasis(G.field, k), 0, 0)
    return SubsetCensus(n, k, tuple(map(tuple, alpha)), tuple(zeta))


def alpha_oracle(G: GeneratorMatrix, i: int, s: int) -> int:
    """Number of s-subsets of columns whose span contains e_i."""
    i0 = _index(i, G.k)
    if not 1 <= s <= G.n:
        raise DimensionOutOfRange(f"subset size {s} outside [1, {G.n}]")
    return subset_census(G).alpha[i0][s]


def harmonic(n: int) -> Fraction:
    return sum((Fraction(1, j) for j in range(1, n + 1)), Fraction(0))


def expected_samples_oracle(G: GeneratorMatrix, i: int) -> Fraction:
    """E[tau_i] = n H_n - sum_s alpha_i^s / C(n-1, s), by subset enumeration."""
    i0 = _index(i, G.k)
    _require_full_rank(G)
    census = subset_census(G)
    n = G.n
    e = n * harmonic(n)
    for s in range(1, n):
        e -= Fraction(census.alpha[i0][s], math.comb(n - 1, s))
    return e


def zeta(G: GeneratorMatrix, s: int) -> int:
    """Number of s-subsets of columns whose span is not a min(s, k)-dim standard space."""
    if not 1 <= s <= G.n - 1:
        raise DimensionOutOfRange(f"subset size {s} outside [1, {G.n - 1}]")
    return subset_census(G).zeta[s]


# --------------------------------------------------------------------------
# Monte Carlo


def simulate(G: GeneratorMatrix, i: int, trials: int, seed: int) -> tuple[float, float]:
    """Sample mean and standard error of tau_i over ``trials`` episodes.

    Episode ``e`` (0-based) draws from ``numpy.random.PCG64(seed ^ e)``:
    column indices come in blocks of ``max(16, 2n)`` via
    ``Generator.integers(0, n, size=block)``, consumed in order.  Results
    are therefore a pure function of ``(G, i, trials, seed)``.  Two seeds that
    agree above the low ``trials.bit_length()`` bits share their episode
    streams, so pick seeds that differ in higher bits for independent runs.
    """
    i0 = _index(i, G.k)
    if trials < 1:
        raise ValueError("trials must be at least 1")
    if seed < 0:
        raise ValueError("seed must be nonnegative")
    n, k, f = G.n, G.k, G.field
    target = unit_vector(k, i0)
    full_rank = G.rank()
    block = max(16, 2 * n)
    draws = np.empty(trials, dtype=np.float64)
    for ep in range(trials):
        rng = np.random.Generator(np.random.PCG64(seed ^ ep))
        basis = EchelonBasis(f, k)
        seen: set[int] = set()
        count = 0
        done = False
        while not done:
            for j in rng.integers(0, n, size=block).tolist():
                count += 1
                if j not in seen:
                    seen.add(j)
                    if basis.add(G.columns[j]) and basis.contains(target):
                        done = True
                        break
                if count >= MAX_DRAWS or (basis.rank == full_rank and not basis.contains(target)):
                    raise MaxSamplesExceeded(f"e_{i} not recovered after {count} draws")
        draws[ep] = count
    mean = float(draws.mean())
    stderr = float(draws.std(ddof=1) / math.sqrt(trials)) if trials > 1 else 0.0
    return mean, stderr


def g_r_matrix(field: Field, k: int, r: int) -> GeneratorMatrix:
    """``[e_1, ..., e_k, e_1 + ... + e_r]``."""
    if not 1 <= r <= k:
        raise DimensionOutOfRange(f"need 1 <= r <= k, got r={r}, k={k}")
    cols = [unit_vector(k, j) for j in range(k)]
    cols.append(tuple(1 if j < r else 0 for j in range(k)))
    return GeneratorMatrix(field, tuple(cols))
