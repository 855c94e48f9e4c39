"""Exhaustive search for the best weight profile at fixed (q, n, k).

A matrix is determined, up to column order and column scaling, by how many
of its n columns fall in each projective class of F_q^k.  The search walks
every such count vector (a composition of n into as many parts as there are
classes), keeps those whose columns span F_q^k, and scores them exactly.

Scoring uses integer arithmetic: with ``L = lcm(1..n)`` every odds ratio
``c / (n - c)`` is an integer multiple of ``1/L``, so whole batches of
candidates are scored with numpy integer matrix products and compared
without rounding.
"""

from __future__ import annotations

import math
import os
from concurrent.futures import ProcessPoolExecutor
from dataclasses import dataclass
from fractions import Fraction
from itertools import combinations, islice

import numpy as np

from .errors import InvalidParams, SearchTooLarge
from .expectation import WeightProfile, all_expected_samples, t_ave
from .gf import field_new
from .lattice import incidence

SEARCH_LIMIT = 10**8
OBJECTIVES = ("max", "ave")
_BATCH = 1 << 15


@dataclass(frozen=True)
class SearchResult:
    objective: str
    value: Fraction
    profile: WeightProfile
    counts: tuple[int, ...]
    candidates_examined: int

    def reevaluate(self) -> Fraction:
        if self.objective == "max":
            return max(all_expected_samples(self.profile))
        return t_ave(self.profile)


def composition_count(n: int, parts: int) -> int:
    return math.comb(n + parts - 1, parts - 1)


def _compositions(n: int, parts: int):
    """Compositions of n into ``parts`` nonnegative parts, lexicographic."""
    if parts == 1:
        yield (n,)
        return
    top = n + parts - 1
    for bars in combinations(range(top), parts - 1):
        prev = -1
        out = []
        for b in bars:
            out.append(b - prev - 1)
            prev = b
        out.append(top - prev - 1)
        yield tuple(out)


def default_jobs() -> int:
    return int(os.environ.get("COVERAGE_DEPTH_JOBS", "1"))


class _Scorer:
    """Integer-valued objective on batches of count vectors."""

    def __init__(self, q: int, n: int, k: int, objective: str) -> None:
        inc = incidence(q, k)
        self.n, self.k, self.objective = n, k, objective
        self.scale = math.lcm(*range(1, n + 1))
        big = self.scale * n * sum(len(m) for m in inc.members.values()) * max(
            [abs(c) for c in inc.coefficient.values()] + [1]
        )
        dtype = np.int64 if big < 2**62 else object
        self.odds = np.array([0] + [c * self.scale // (n - c) for c in range(1, n)] + [0], dtype=dtype)
        self.members = inc.members
        self.coef = inc.coefficient
        if objective == "max":
            self.weights = {t: (~inc.contains[t]).astype(dtype) for t in inc.members}
        else:
            self.weights = {t: (k - inc.contains[t].sum(axis=1)).astype(dtype) for t in inc.members}
        self.dtype = dtype

    def __call__(self, counts: np.ndarray) -> tuple[np.ndarray, np.ndarray]:
        """Return (feasible mask, scaled objective) for a (B, P) batch."""
        b = len(counts)
        feasible = np.ones(b, dtype=bool)
        shape = (b, self.k) if self.objective == "max" else (b,)
        total = np.full(shape, self.scale if self.objective == "max" else self.scale * self.k, dtype=self.dtype)
        for t, m in self.members.items():
            loads = counts[:, m].sum(axis=2)
            if t == self.k - 1:
                feasible &= (loads < self.n).all(axis=1)
            loads = np.minimum(loads, self.n)
            total = total + self.coef[t] * (self.odds[loads] @ self.weights[t])
        if self.objective == "max":
            total = total.max(axis=1)
        return feasible, total

    def to_fraction(self, score) -> Fraction:
        den = self.scale if self.objective == "max" else self.scale * self.k
        return Fraction(int(score), den)


def _search_partition(args):
    """Best candidate among count vectors whose first entry is ``first``."""
    q, n, k, objective, first = args
    scorer = _Scorer(q, n, k, objective)
    parts = len(incidence(q, k).points)
    it = ((first,) + rest for rest in _compositions(n - first, parts - 1))
    best = None
    examined = 0
    while True:
        chunk = list(islice(it, _BATCH))
        if not chunk:
            break
        examined += len(chunk)
        arr = np.array(chunk, dtype=np.int64)
        feasible, score = scorer(arr)
        if not feasible.any():
            continue
        idx = np.flatnonzero(feasible)
        j = idx[int(np.argmin(score[idx]))] if score.dtype != object else idx[min(range(len(idx)), key=lambda x: score[idx[x]])]
        cand = (scorer.to_fraction(score[j]), chunk[j])
        if best is None or cand[0] < best[0]:
            best = cand
    return best, examined


def optimal_search(q: int, n: int, k: int, objective: str = "max", jobs: int | None = None) -> SearchResult:
    """Exact T_max(q, n, k) or T_ave(q, n, k) with a witness profile.

    Ties go to the lexicographically smallest count vector (classes in the
    order of ``incidence(q, k).points``), independent of ``jobs``.
    """
    if objective not in OBJECTIVES:
        raise InvalidParams(f"objective must be one of {OBJECTIVES}")
    if k < 1 or n < k:
        raise InvalidParams(f"need n >= k >= 1, got n={n}, k={k}")
    field = field_new(q)
    inc = incidence(q, k)
    parts = len(inc.points)
    total = composition_count(n, parts)
    if total > SEARCH_LIMIT:
        raise SearchTooLarge(f"{total} count vectors exceed the limit {SEARCH_LIMIT}")
    jobs = default_jobs() if jobs is None else jobs
    tasks = [(q, n, k, objective, a) for a in range(n + 1)]
    if jobs > 1:
        with ProcessPoolExecutor(max_workers=jobs) as pool:
            results = list(pool.map(_search_partition, tasks))
    else:
        results = [_search_partition(t) for t in tasks]
    best = None
    for cand, _ in results:
        if cand is not None and (best is None or cand < best):
            best = cand
    examined = sum(e for _, e in results)
    value, counts = best
    profile = WeightProfile.from_counts(field, k, {u: c for u, c in zip(inc.points, counts) if c})
    return SearchResult(objective, value, profile, tuple(counts), examined)


@dataclass(frozen=True)
class MonotonicityRow:
    n: int
    value: Fraction
    checks: tuple[tuple[int, bool], ...]


def monotonicity_check(q: int, k: int, n_max: int, objective: str = "max", jobs: int | None = None) -> list[MonotonicityRow]:
    """Optimal values for n in [k, n_max] and, for each divisor n' >= k of n,
    whether value(n) <= value(n')."""
    values = {n: optimal_search(q, n, k, objective, jobs).value for n in range(k, n_max + 1)}
    rows = []
    for n, v in values.items():
        checks = tuple((d, v <= values[d]) for d in range(k, n) if n % d == 0)
        rows.append(MonotonicityRow(n, v, checks))
    return rows
