"""The lattice of subspaces of F_q^k.

Subspaces are represented by their reduced row-echelon basis, which is
canonical.  Enumeration walks pivot-column sets in lexicographic order and,
inside each, the free entries in lexicographic order, so the stream order is
a fixed total order.

The heavy lifting (spanning every member vector of every subspace) is done in
numpy blocks; :func:`enumerate_subspaces` wraps those blocks into
:class:`Subspace` records, while :func:`weight_distribution_census` and
:func:`incidence` aggregate them directly.
"""

from __future__ import annotations

from collections import Counter
from dataclasses import dataclass
from functools import lru_cache
from itertools import combinations, product
from math import comb
from typing import Iterator

import numpy as np

from .errors import DimensionOutOfRange, EnumerationTooLarge
from .gf import Field, field_new

#: Refuse enumerations that would span more member vectors than this.
MEMBER_LIMIT = 10**7
#: Looser limit for the census, which only aggregates counts.
CENSUS_MEMBER_LIMIT = 10**8

_CHUNK = 1 << 14


def gaussian_binomial(k: int, r: int, q: int) -> int:
    """Number of r-dimensional subspaces of F_q^k (0 outside ``0 <= r <= k``)."""
    if r < 0 or r > k:
        return 0
    num = den = 1
    for j in range(r):
        num *= q ** (k - j) - 1
        den *= q ** (j + 1) - 1
    return num // den


def mobius_coeff(r: int, t: int, q: int) -> int:
    """Moebius function of the subspace lattice between dimensions t <= r."""
    if r < t or t < 0:
        raise DimensionOutOfRange(f"need r >= t >= 0, got r={r}, t={t}")
    d = r - t
    return (-1) ** d * q ** comb(d, 2)


def chi(q: int, k: int, t: int, r: int) -> int:
    """Count r-dim spaces containing a fixed t-dim U that avoid a fixed e_i not in U."""
    if not 1 <= t <= r <= k - 1:
        raise DimensionOutOfRange(f"need 1 <= t <= r <= k-1, got t={t}, r={r}, k={k}")
    return gaussian_binomial(k - t, r - t, q) - gaussian_binomial(k - t - 1, r - t - 1, q)


def dimension_coefficient(q: int, k: int, t: int) -> int:
    """Sum over r of mobius_coeff(r, t, q) * chi(q, k, t, r).

    Every t-dimensional subspace avoiding e_i enters the expected-sample sum
    with this weight, so it is computed once per dimension.
    """
    return sum(mobius_coeff(r, t, q) * chi(q, k, t, r) for r in range(t, k))


def count_members(q: int, k: int, dims=None) -> int:
    """Member vectors visited when enumerating the given dimensions."""
    dims = range(k + 1) if dims is None else dims
    return sum(gaussian_binomial(k, t, q) * q**t for t in dims)


@dataclass(frozen=True)
class Subspace:
    field: Field
    ambient_dim: int
    dim: int
    basis: tuple[tuple[int, ...], ...]
    contains_ei: tuple[bool, ...]
    wd: tuple[int, ...]

    @property
    def h(self) -> int:
        """Number of standard basis vectors outside the subspace."""
        return self.ambient_dim - sum(self.contains_ei)


# --------------------------------------------------------------------------
# vectorized kernels


def _free_positions(pivots: tuple[int, ...], k: int) -> list[tuple[int, int]]:
    piv = set(pivots)
    return [(row, col) for row, p in enumerate(pivots) for col in range(p + 1, k) if col not in piv]


def _rref_blocks(field: Field, k: int, t: int) -> Iterator[np.ndarray]:
    """Yield arrays of shape (N, t, k) holding RREF bases in canonical order."""
    q = field.q
    for pivots in combinations(range(k), t):
        free = _free_positions(pivots, k)
        f = len(free)
        template = np.zeros((t, k), dtype=np.int32)
        for row, p in enumerate(pivots):
            template[row, p] = 1
        total = q**f
        weights = q ** np.arange(f - 1, -1, -1, dtype=np.int64)
        rows = np.array([r for r, _ in free], dtype=np.intp)
        cols = np.array([c for _, c in free], dtype=np.intp)
        for start in range(0, total, _CHUNK):
            idx = np.arange(start, min(start + _CHUNK, total), dtype=np.int64)
            block = np.broadcast_to(template, (len(idx), t, k)).copy()
            if f:
                block[:, rows, cols] = (idx[:, None] // weights) % q
            yield block


@lru_cache(maxsize=None)
def _coefficients(q: int, t: int) -> np.ndarray:
    """All q^t coefficient tuples, lexicographic, shape (q^t, t)."""
    return np.array(list(product(range(q), repeat=t)), dtype=np.int32).reshape(q**t, t)


def _span_members(field: Field, bases: np.ndarray) -> np.ndarray:
    """All member vectors of each span; shape (N, q^t, k)."""
    n_sub, t, k = bases.shape
    coeffs = _coefficients(field.q, t)
    acc = np.zeros((n_sub, len(coeffs), k), dtype=np.int32)
    for j in range(t):
        c = coeffs[None, :, j, None]
        b = bases[:, None, j, :]
        if field.q == 2:
            acc ^= c & b
        elif field.m == 1:
            acc += c * b
        else:
            term = field.mul_table[c, b]
            acc = acc ^ term if field.p == 2 else field.add_table[acc, term]
    if field.m == 1 and field.q > 2:
        acc %= field.p
    return acc


def _block_metadata(bases: np.ndarray, members: np.ndarray) -> tuple[np.ndarray, np.ndarray]:
    """Return (contains_ei, wd) for a block.

    ``e_i`` lies in a subspace exactly when it is a row of the RREF basis.
    ``wd[:, i-1]`` counts members of Hamming weight ``i``.
    """
    n_sub, t, k = bases.shape
    unit_rows = (bases != 0).sum(axis=2) == 1
    contains = np.zeros((n_sub, k), dtype=bool)
    if t:
        lead = np.argmax(bases != 0, axis=2)
        np.logical_or.at(contains, (np.repeat(np.arange(n_sub), t)[unit_rows.ravel()], lead.ravel()[unit_rows.ravel()]), True)
    weights = (members != 0).sum(axis=2)
    wd = np.zeros((n_sub, k + 1), dtype=np.int64)
    np.add.at(wd, (np.repeat(np.arange(n_sub), weights.shape[1]), weights.ravel()), 1)
    return contains, wd[:, 1:]


def _check(field: Field, k: int, t: int) -> None:
    if not 0 <= t <= k:
        raise DimensionOutOfRange(f"dimension {t} outside [0, {k}]")


def enumerate_subspaces(field: Field, k: int, t: int, limit: int = MEMBER_LIMIT) -> Iterator[Subspace]:
    """Yield every t-dimensional subspace of F_q^k once, in canonical order."""
    _check(field, k, t)
    work = count_members(field.q, k, [t])
    if work > limit:
        raise EnumerationTooLarge(f"{work} member evaluations exceed the limit {limit}")
    for bases in _rref_blocks(field, k, t):
        members = _span_members(field, bases)
        contains, wd = _block_metadata(bases, members)
        for b, c, w in zip(bases.tolist(), contains.tolist(), wd.tolist()):
            yield Subspace(field, k, t, tuple(map(tuple, b)), tuple(c), tuple(w))


@lru_cache(maxsize=None)
def _census(q: int, k: int) -> tuple[tuple[tuple[int, tuple[int, ...], int], int], ...]:
    field = field_new(q)
    census: Counter = Counter()
    for t in range(1, k):
        for bases in _rref_blocks(field, k, t):
            contains, wd = _block_metadata(bases, _span_members(field, bases))
            h = k - contains.sum(axis=1)
            keys = np.column_stack([wd, h])
            uniq, counts = np.unique(keys, axis=0, return_counts=True)
            for row, c in zip(uniq.tolist(), counts.tolist()):
                census[(t, tuple(row[:-1]), row[-1])] += c
    return tuple(sorted(census.items()))


def weight_distribution_census(field: Field, k: int, limit: int = CENSUS_MEMBER_LIMIT) -> dict:
    """Group the proper nonzero subspaces of F_q^k by ``(dim, wd, h)``.

    Returns a dict mapping ``(t, wd, h)`` to the number of subspaces in that
    class.  Results are memoized per ``(q, k)``.
    """
    if k < 1:
        raise DimensionOutOfRange("k must be positive")
    work = count_members(field.q, k, range(1, k))
    if work > limit:
        raise EnumerationTooLarge(f"{work} member evaluations exceed the limit {limit}")
    return dict(_census(field.q, k))


# --------------------------------------------------------------------------
# projective points and subspace incidence, used by the exact expectation


@dataclass(frozen=True)
class Incidence:
    """Projective points of F_q^k and, per dimension t, the points of each t-space.

    ``points`` are the canonical representatives (first nonzero coordinate 1)
    in lexicographic order.  ``members[t]`` has shape ``(S_t, P_t)`` listing
    point indices of every t-dimensional subspace; ``contains[t]`` has shape
    ``(S_t, k)``; ``coefficient[t]`` is :func:`dimension_coefficient`.
    """

    q: int
    k: int
    points: tuple[tuple[int, ...], ...]
    index: dict
    members: dict
    contains: dict
    coefficient: dict

    def point_index(self, v) -> int:
        return self.index[tuple(v)]


def projective_points(field: Field, k: int) -> list[tuple[int, ...]]:
    q = field.q
    pts = []
    for lead in range(k):
        for tail in product(range(q), repeat=k - lead - 1):
            pts.append((0,) * lead + (1,) + tail)
    return sorted(pts)


@lru_cache(maxsize=None)
def incidence(q: int, k: int, limit: int = MEMBER_LIMIT) -> Incidence:
    field = field_new(q)
    work = count_members(q, k, range(1, k))
    if work > limit:
        raise EnumerationTooLarge(f"{work} member evaluations exceed the limit {limit}")
    pts = projective_points(field, k)
    code_weights = q ** np.arange(k - 1, -1, -1, dtype=np.int64)
    lookup = np.full(q**k, -1, dtype=np.int64)
    lookup[np.array(pts, dtype=np.int64).reshape(-1, k) @ code_weights] = np.arange(len(pts))
    members, contains, coefficient = {}, {}, {}
    for t in range(1, k):
        n_pts = (q**t - 1) // (q - 1)
        mem_blocks, con_blocks = [], []
        for bases in _rref_blocks(field, k, t):
            span = _span_members(field, bases)
            nonzero = span != 0
            lead = np.take_along_axis(span, np.argmax(nonzero, axis=2)[..., None], axis=2)[..., 0]
            canon = nonzero.any(axis=2) & (lead == 1)
            codes = span @ code_weights
            mem_blocks.append(lookup[codes[canon]].reshape(len(bases), n_pts))
            con_blocks.append(_block_metadata(bases, span)[0])
        members[t] = np.concatenate(mem_blocks)
        contains[t] = np.concatenate(con_blocks)
        coefficient[t] = dimension_coefficient(q, k, t)
    return Incidence(q, k, tuple(pts), {p: i for i, p in enumerate(pts)}, members, contains, coefficient)
