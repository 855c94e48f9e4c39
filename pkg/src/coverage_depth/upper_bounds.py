"""Upper bounds from symmetric constructions.

A symmetric construction gives every nonzero vector of Hamming weight ``i``
the same column fraction ``w_i``.  All strands are then equally hard to
recover, so T_max equals T_ave, and the lattice sum only depends on how many
subspaces share a weight distribution.  :func:`symmetric_tmax` evaluates that
sum from the census; :func:`eval_k3` is the closed form for ``k = 3``; the
two are independent routes to the same number.
"""

from __future__ import annotations

from dataclasses import dataclass
from fractions import Fraction
from functools import lru_cache
from math import comb
from numbers import Rational
from typing import Sequence

import numpy as np
from scipy.optimize import minimize

from .errors import ConstraintViolation, InvalidParams, SingularDenominator
from .gf import field_new
from .lattice import dimension_coefficient, weight_distribution_census

RENORMALIZE_TOL = 1e-3
_FEASIBLE_TOL = 1e-12
_INFEASIBLE = 1e6


def _is_exact(values) -> bool:
    return all(isinstance(v, Rational) for v in values)


def constraint_sum(q: int, k: int, w: Sequence) -> float | Fraction:
    """sum_i (q-1)^i C(k, i) w_i, which a valid construction makes equal to 1."""
    return sum((q - 1) ** i * comb(k, i) * wi for i, wi in enumerate(w, start=1))


def renormalize(q: int, k: int, w: Sequence, tol: float = RENORMALIZE_TOL) -> tuple:
    """Scale all weights uniformly so the construction constraint holds.

    Weights rounded to four decimals miss the constraint slightly, by more
    as q grows because ``w_3`` is multiplied by ``(q-1)^3``.  Anything
    further than ``tol`` from 1 is rejected.
    """
    total = constraint_sum(q, k, w)
    if abs(total - 1) > tol:
        raise ConstraintViolation(f"constraint sum {float(total):.6g} is more than {tol} from 1")
    if _is_exact(w):
        return tuple(Fraction(x) / total for x in w)
    return tuple(float(x) / float(total) for x in w)


@dataclass(frozen=True)
class SymmetricWeights:
    q: int
    k: int
    w: tuple

    def __post_init__(self) -> None:
        w = tuple(self.w)
        object.__setattr__(self, "w", w)
        if len(w) != self.k:
            raise InvalidParams(f"need {self.k} weights, got {len(w)}")
        if any(x < 0 or x > 1 for x in w):
            raise ConstraintViolation("weights must lie in [0, 1]")
        total = constraint_sum(self.q, self.k, w)
        off = total - 1
        if (off != 0) if _is_exact(w) else abs(off) > _FEASIBLE_TOL:
            raise ConstraintViolation(f"constraint sum is {total}, not 1")

    @classmethod
    def from_masses(cls, q: int, k: int, masses: Sequence[float]) -> "SymmetricWeights":
        """Build from the share of columns at each weight (must sum to 1)."""
        w = tuple(m / ((q - 1) ** i * comb(k, i)) for i, m in enumerate(masses, start=1))
        return cls(q, k, w)


@dataclass(frozen=True)
class BoundCertificate:
    kind: str
    value: float | Fraction
    witness: object
    provenance: str

    def reevaluate(self):
        if self.provenance == "symmetric-construction":
            return symmetric_tmax(self.witness)
        if self.provenance == "k3-closed-form":
            return eval_k3(self.witness.q, *self.witness.w)
        if self.provenance == "asymptotic-k3":
            return asymptotic_F(*self.witness)
        raise ValueError(f"unknown provenance {self.provenance!r}")

    def verify(self, tol: float = 1e-9) -> bool:
        again = self.reevaluate()
        if isinstance(self.value, Fraction) and isinstance(again, Fraction):
            return again == self.value
        return abs(float(again) - float(self.value)) <= tol


def _odds(den):
    if den <= 0:
        raise SingularDenominator(f"denominator {den} is not positive")
    return 1 / den


def eval_k3(q: int, w1, w2, w3, tol: float = RENORMALIZE_TOL):
    """Closed-form T_max of the symmetric k = 3 construction over GF(q).

    Inputs are renormalized first (see :func:`renormalize`, which applies
    ``tol``).  Exact rational inputs give an exact
    :class:`~fractions.Fraction`.
    """
    w1, w2, w3 = renormalize(q, 3, (w1, w2, w3), tol)
    if _is_exact((w1, w2, w3)):
        one = Fraction(1)
        inv = lambda d: one / d if d > 0 else _odds(d)  # noqa: E731
    else:
        inv = _odds
    a = q - 1
    return (
        -2 * a * inv(1 - a * w1)
        - 3 * a**2 * inv(1 - a * w2)
        - a**3 * inv(1 - a * w3)
        + 2 * a * inv(1 - a * w1 - a * w2 - a**2 * w3)
        + a**2 * inv(1 - 3 * a * w2 - a * (q - 2) * w3)
        + inv(1 - 2 * a * w1 - a**2 * w2)
        + a**3
        + 2 * a**2
    )


@lru_cache(maxsize=None)
def _class_arrays(q: int, k: int):
    census = weight_distribution_census(field_new(q), k)
    keys = sorted(census)
    wd = np.array([key[1] for key in keys], dtype=np.float64).reshape(len(keys), k)
    factor = [census[key] * key[2] * dimension_coefficient(q, k, key[0]) for key in keys]
    return keys, wd, np.array(factor, dtype=np.float64), factor


def symmetric_tmax(weights: SymmetricWeights):
    """T_max (= T_ave) of the symmetric construction, summed over census classes."""
    q, k, w = weights.q, weights.k, weights.w
    keys, wd, factor, factor_int = _class_arrays(q, k)
    if _is_exact(w):
        total = Fraction(0)
        for key, f in zip(keys, factor_int):
            load = sum(a * Fraction(x) for a, x in zip(key[1], w))
            if load >= 1:
                raise SingularDenominator(f"subspace class {key} carries weight {load}")
            total += f * (load / (1 - load))
        return 1 + total / k
    load = wd @ np.asarray(w, dtype=np.float64)
    rest = 1.0 - load
    if (rest <= 0).any():
        raise SingularDenominator("some subspace class carries all the weight")
    return float(1.0 + (factor @ (load / rest)) / k)


def _project(x: np.ndarray) -> np.ndarray:
    x = np.clip(x, 0.0, 1.0)
    s = x.sum()
    return x / s if s > 1.0 else x


def _mass_objective(q: int, k: int):
    keys, wd, factor, _ = _class_arrays(q, k)
    scale = np.array([(q - 1) ** i * comb(k, i) for i in range(1, k + 1)], dtype=np.float64)
    # load of each class as a linear map of the masses
    load_map = wd / scale

    def value(masses: np.ndarray) -> float:
        load = load_map @ masses
        rest = 1.0 - load
        if (rest <= 0).any():
            return _INFEASIBLE
        return float(1.0 + (factor @ (load / rest)) / k)

    def objective(x: np.ndarray) -> float:
        p = _project(x)
        masses = np.concatenate([[1.0 - p.sum()], p])
        return value(masses) + float(((x - p) ** 2).sum())

    return objective


def optimize_upper_bound(q: int, k: int, restarts: int = 32, seed: int = 0) -> BoundCertificate:
    """Best symmetric construction found by multi-start Nelder-Mead.

    The variables are the column shares at weights 2..k; the weight-1 share
    is whatever remains, which eliminates the linear constraint.  Starts are
    the uniform share followed by Dirichlet draws from ``default_rng(seed)``.
    """
    if k not in (3, 4):
        raise InvalidParams("optimize_upper_bound supports k in {3, 4}")
    objective = _mass_objective(q, k)
    rng = np.random.default_rng(seed)
    starts = [np.full(k, 1.0 / k)] + [rng.dirichlet(np.ones(k)) for _ in range(restarts - 1)]
    best = None
    for start in starts:
        res = minimize(
            objective,
            start[1:],
            method="Nelder-Mead",
            options={"xatol": 1e-12, "fatol": 1e-13, "maxiter": 20000, "maxfev": 40000},
        )
        p = _project(res.x)
        masses = np.concatenate([[1.0 - p.sum()], p])
        witness = SymmetricWeights.from_masses(q, k, masses.tolist())
        try:
            value = symmetric_tmax(witness)
        except SingularDenominator:
            continue
        cand = (value, witness.w)
        if best is None or cand < best:
            best = cand
    value, w = best
    return BoundCertificate("upper", value, SymmetricWeights(q, k, w), "symmetric-construction")


def asymptotic_F(lam: float, mu: float) -> float:
    """Large-q limit of the k = 3 construction with weight-3 share ``lam`` and weight-2 share ``mu``."""
    a = 2 / 3 + lam / 3 + mu
    b = 1 / 3 + 2 * lam / 3 + mu
    if a <= 0 or b <= 0:
        raise SingularDenominator("denominators must be positive")
    return -lam + 6 * mu**2 + 6 * lam * mu + lam**2 + 2 * (lam + mu) / a**2 + 1 / b


def optimize_asymptotic(restarts: int = 8, seed: int = 0) -> BoundCertificate:
    """Minimize :func:`asymptotic_F` over ``lam, mu >= 0`` with ``lam/3 + mu <= 1/3``."""

    def objective(x):
        lam, mu = np.clip(x, 0.0, None)
        pen = float(((x - np.clip(x, 0.0, None)) ** 2).sum())
        if lam / 3 + mu > 1 / 3:
            return _INFEASIBLE
        return asymptotic_F(lam, mu) + pen

    rng = np.random.default_rng(seed)
    starts = [np.array([0.05, 0.15])] + [rng.uniform(0, 1 / 3, size=2) for _ in range(restarts - 1)]
    best = None
    for s in starts:
        res = minimize(objective, s, method="Nelder-Mead", options={"xatol": 1e-12, "fatol": 1e-14})
        lam, mu = (float(v) for v in np.clip(res.x, 0.0, None))
        cand = (asymptotic_F(lam, mu), (lam, mu))
        if best is None or cand < best:
            best = cand
    return BoundCertificate("upper", best[0], best[1], "asymptotic-k3")
