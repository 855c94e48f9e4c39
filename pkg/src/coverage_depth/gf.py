"""Finite fields GF(q) and exact linear algebra over them.

Elements of GF(p^m) are the integers ``0 .. q-1``.  The base-p digits of an
element are the coefficients of a polynomial over GF(p), constant term in the
least significant digit; multiplication is polynomial multiplication modulo a
fixed monic irreducible polynomial of degree ``m``.  For ``m > 1`` that
polynomial is the smallest monic irreducible one when its coefficients are
read the same way (as a base-p integer), so ``GF(4)`` uses ``x^2 + x + 1`` and
``GF(8)`` uses ``x^3 + x + 1``.

Vectors are plain tuples of elements in the fast internal helpers; the public
functions :func:`rank` and :func:`span_contains` take :class:`FqVector`.
"""

from __future__ import annotations

from dataclasses import dataclass
from functools import cached_property, lru_cache
from typing import Iterable, Sequence

import numpy as np

from .errors import MixedFields, NotPrimePower

MAX_Q = 1 << 16
_TABLE_LIMIT = 1024


def prime_power(q: int) -> tuple[int, int]:
    """Return ``(p, m)`` with ``q == p**m`` and ``p`` prime.

    Raises :class:`NotPrimePower` otherwise.
    """
    if q < 2:
        raise NotPrimePower(f"q={q} is not a prime power")
    p = next((d for d in range(2, int(q**0.5) + 1) if q % d == 0), q)
    m, rest = 0, q
    while rest % p == 0:
        rest //= p
        m += 1
    if rest != 1:
        raise NotPrimePower(f"q={q} is not a prime power")
    return p, m


def _digits(a: int, p: int, m: int) -> list[int]:
    out = []
    for _ in range(m):
        a, d = divmod(a, p)
        out.append(d)
    return out


def _undigits(ds: Sequence[int], p: int) -> int:
    a = 0
    for d in reversed(ds):
        a = a * p + d
    return a


def _poly_mod(num: list[int], den: list[int], p: int) -> list[int]:
    """Remainder of ``num`` modulo monic ``den`` over GF(p) (constant first)."""
    num = num[:]
    dd = len(den) - 1
    for deg in range(len(num) - 1, dd - 1, -1):
        c = num[deg] % p
        if c:
            for j in range(dd + 1):
                num[deg - dd + j] = (num[deg - dd + j] - c * den[j]) % p
    rem = [c % p for c in num[:dd]]
    return rem + [0] * (dd - len(rem))


def _is_irreducible(poly: list[int], p: int) -> bool:
    """Trial division by every monic polynomial of degree 1 .. deg/2."""
    m = len(poly) - 1
    for d in range(1, m // 2 + 1):
        for low in range(p**d):
            divisor = _digits(low, p, d) + [1]
            if not any(_poly_mod(poly, divisor, p)):
                return False
    return True


def _smallest_irreducible(p: int, m: int) -> tuple[int, ...]:
    for low in range(p**m):
        poly = _digits(low, p, m) + [1]
        if _is_irreducible(poly, p):
            return tuple(poly)
    raise AssertionError("an irreducible polynomial exists in every degree")


def _factor(n: int) -> list[int]:
    fs, d = [], 2
    while d * d <= n:
        if n % d == 0:
            fs.append(d)
            while n % d == 0:
                n //= d
        d += 1
    if n > 1:
        fs.append(n)
    return fs


class Field:
    """The finite field GF(q) on the integer encoding ``0 .. q-1``.

    Use :func:`field_new` rather than calling the constructor directly; it
    caches instances so each ``q`` maps to one object.
    """

    def __init__(self, q: int) -> None:
        p, m = prime_power(q)
        if q > MAX_Q:
            raise ValueError(f"q={q} exceeds the supported maximum {MAX_Q}")
        self.q, self.p, self.m = q, p, m
        self.modulus: tuple[int, ...] = () if m == 1 else _smallest_irreducible(p, m)
        self._exp, self._log = self._build_log_tables()
        self._inv = [0] * q
        for a in range(1, q):
            self._inv[a] = self._exp[(q - 1 - self._log[a]) % (q - 1)]

    def _poly_mul(self, a: int, b: int) -> int:
        p, m = self.p, self.m
        da, db = _digits(a, p, m), _digits(b, p, m)
        prod = [0] * (2 * m - 1)
        for i, x in enumerate(da):
            if x:
                for j, y in enumerate(db):
                    prod[i + j] += x * y
        return _undigits(_poly_mod(prod, list(self.modulus), p), p)

    def _slow_mul(self, a: int, b: int) -> int:
        return a * b % self.p if self.m == 1 else self._poly_mul(a, b)

    def _slow_pow(self, a: int, e: int) -> int:
        result = 1
        while e:
            if e & 1:
                result = self._slow_mul(result, a)
            a = self._slow_mul(a, a)
            e >>= 1
        return result

    def _build_log_tables(self) -> tuple[list[int], list[int]]:
        q = self.q
        order = q - 1
        primes = _factor(order)
        gen = 1
        if q > 2:
            gen = next(
                g for g in range(2, q)
                if all(self._slow_pow(g, order // f) != 1 for f in primes)
            )
        exp = [0] * (2 * order)
        log = [0] * q
        x = 1
        for i in range(order):
            exp[i] = x
            log[x] = i
            x = self._slow_mul(x, gen)
        exp[order:] = exp[:order]
        return exp, log

    # element arithmetic -------------------------------------------------

    def add(self, a: int, b: int) -> int:
        if self.p == 2:
            return a ^ b
        if self.m == 1:
            return (a + b) % self.p
        p, m = self.p, self.m
        return _undigits([(x + y) % p for x, y in zip(_digits(a, p, m), _digits(b, p, m))], p)

    def neg(self, a: int) -> int:
        if self.p == 2:
            return a
        if self.m == 1:
            return (-a) % self.p
        p, m = self.p, self.m
        return _undigits([(-x) % p for x in _digits(a, p, m)], p)

    def sub(self, a: int, b: int) -> int:
        return self.add(a, self.neg(b))

    def mul(self, a: int, b: int) -> int:
        if a == 0 or b == 0:
            return 0
        return self._exp[self._log[a] + self._log[b]]

    def inv(self, a: int) -> int:
        if a == 0:
            raise ZeroDivisionError("0 has no inverse")
        return self._inv[a]

    def div(self, a: int, b: int) -> int:
        return self.mul(a, self.inv(b))

    @property
    def elements(self) -> range:
        return range(self.q)

    # numpy lookup tables for vectorized kernels --------------------------

    @cached_property
    def add_table(self) -> np.ndarray:
        self._check_table_size()
        return np.array([[self.add(a, b) for b in range(self.q)] for a in range(self.q)], dtype=np.int32)

    @cached_property
    def mul_table(self) -> np.ndarray:
        self._check_table_size()
        return np.array([[self.mul(a, b) for b in range(self.q)] for a in range(self.q)], dtype=np.int32)

    @cached_property
    def inv_table(self) -> np.ndarray:
        return np.array([0] + self._inv[1:], dtype=np.int32)

    def _check_table_size(self) -> None:
        if self.q > _TABLE_LIMIT:
            raise ValueError(f"dense tables are limited to q <= {_TABLE_LIMIT}")

    def __repr__(self) -> str:
        return f"GF({self.q})"

    def __eq__(self, other: object) -> bool:
        return isinstance(other, Field) and other.q == self.q

    def __hash__(self) -> int:
        return hash(("GF", self.q))

    def __reduce__(self):
        return field_new, (self.q,)


@lru_cache(maxsize=None)
def field_new(q: int) -> Field:
    """Return GF(q); raises :class:`NotPrimePower` unless q is a prime power."""
    return Field(q)


@dataclass(frozen=True)
class FqVector:
    field: Field
    coords: tuple[int, ...]

    def __post_init__(self) -> None:
        object.__setattr__(self, "coords", tuple(int(c) for c in self.coords))
        if any(not 0 <= c < self.field.q for c in self.coords):
            raise ValueError(f"coordinates must lie in [0, {self.field.q - 1}]")

    def __len__(self) -> int:
        return len(self.coords)

    @property
    def weight(self) -> int:
        """Hamming weight."""
        return sum(1 for c in self.coords if c)


def unit_vector(k: int, i: int) -> tuple[int, ...]:
    """The standard basis vector e_i of length k, 0-based ``i``."""
    return tuple(1 if j == i else 0 for j in range(k))


def normalize(field: Field, v: Sequence[int]) -> tuple[int, ...]:
    """Scale a nonzero vector so its first nonzero coordinate is 1."""
    lead = next(c for c in v if c)
    if lead == 1:
        return tuple(v)
    s = field.inv(lead)
    return tuple(field.mul(s, c) for c in v)


class EchelonBasis:
    """Incrementally maintained reduced row-echelon basis of a span.

    Pivots are chosen as the first nonzero coordinate.  The basis is kept
    fully reduced, so a standard basis vector lies in the span exactly when
    it is one of the rows.
    """

    __slots__ = ("field", "dim", "rows")

    def __init__(self, field: Field, dim: int, rows: dict[int, list[int]] | None = None) -> None:
        self.field = field
        self.dim = dim
        self.rows: dict[int, list[int]] = rows if rows is not None else {}

    def copy(self) -> "EchelonBasis":
        return EchelonBasis(self.field, self.dim, {p: r[:] for p, r in self.rows.items()})

    @property
    def rank(self) -> int:
        return len(self.rows)

    def reduce(self, v: Sequence[int]) -> list[int]:
        f = self.field
        w = list(v)
        for piv, row in self.rows.items():
            c = w[piv]
            if c:
                for j in range(piv, self.dim):
                    if row[j]:
                        w[j] = f.sub(w[j], f.mul(c, row[j]))
        return w

    def add(self, v: Sequence[int]) -> bool:
        """Insert ``v``; return True when the span grew."""
        f = self.field
        w = self.reduce(v)
        piv = next((j for j, c in enumerate(w) if c), None)
        if piv is None:
            return False
        if w[piv] != 1:
            s = f.inv(w[piv])
            w = [f.mul(s, c) for c in w]
        for row in self.rows.values():
            c = row[piv]
            if c:
                for j in range(piv, self.dim):
                    if w[j]:
                        row[j] = f.sub(row[j], f.mul(c, w[j]))
        self.rows[piv] = w
        return True

    def contains(self, v: Sequence[int]) -> bool:
        return not any(self.reduce(v))

    def contains_unit(self, i: int) -> bool:
        row = self.rows.get(i)
        return row is not None and sum(1 for c in row if c) == 1

    def unit_count(self) -> int:
        return sum(1 for row in self.rows.values() if sum(1 for c in row if c) == 1)

    def basis(self) -> list[tuple[int, ...]]:
        """Rows in increasing pivot order (the canonical RREF)."""
        return [tuple(self.rows[p]) for p in sorted(self.rows)]


def rref(field: Field, vectors: Iterable[Sequence[int]], dim: int) -> list[tuple[int, ...]]:
    eb = EchelonBasis(field, dim)
    for v in vectors:
        eb.add(v)
    return eb.basis()


def _common_field(vectors: Sequence[FqVector]) -> tuple[Field | None, int | None]:
    if not vectors:
        return None, None
    field, dim = vectors[0].field, len(vectors[0])
    for v in vectors[1:]:
        if v.field != field:
            raise MixedFields(f"vectors over {field} and {v.field}")
        if len(v) != dim:
            raise ValueError("vectors have different lengths")
    return field, dim


def rank(vectors: Sequence[FqVector]) -> int:
    """Dimension of the span of ``vectors`` (0 for an empty list)."""
    field, dim = _common_field(list(vectors))
    if field is None:
        return 0
    return len(rref(field, (v.coords for v in vectors), dim))


def span_contains(vectors: Sequence[FqVector], target: FqVector) -> bool:
    """True iff ``target`` lies in the span of ``vectors``."""
    vectors = list(vectors)
    field, dim = _common_field(vectors + [target])
    eb = EchelonBasis(field, dim)
    for v in vectors:
        eb.add(v.coords)
    return eb.contains(target.coords)


def annihilator(field: Field, vectors: Iterable[Sequence[int]], dim: int) -> tuple[int, ...] | None:
    """A nonzero ``y`` with ``sum_j y_j v_j = 0`` for every ``v``, or None at full rank.

    ``y`` is read off the first non-pivot column of the RREF, so it describes
    a hyperplane ``{x : y . x = 0}`` that holds all the vectors.
    """
    rows = rref(field, vectors, dim)
    pivots = [next(j for j, c in enumerate(r) if c) for r in rows]
    free = next((j for j in range(dim) if j not in pivots), None)
    if free is None:
        return None
    y = [0] * dim
    y[free] = 1
    for p, r in zip(pivots, rows):
        y[p] = field.neg(r[free])
    return tuple(y)
