"""Exact r-Stirling and r-Lah numbers for rational r >= 0.

Tables of both kinds are filled row by row from the recurrences

    first kind:  c(n,k) = (n+r-1) * c(n-1,k) + c(n-1,k-1)
    second kind: S(n,k) = (k+r)   * S(n-1,k) + S(n-1,k-1)

with c(0,0) = S(0,0) = 1 and value 0 outside 0 <= k <= n.  Entries are exact
Fractions; tables are memoized per (kind, r) and immutable once a row is
filled.  The polynomial-in-r formulas over ordinary Stirling numbers are kept
as an independent cross-validation path, not as the production fill.

For large n the full triangle is prohibitive, but two cheap exact slices are
enough for every statistic this package needs: the first-kind row n is the
coefficient list of (x+r)(x+r+1)...(x+r+n-1), so a prefix of it can be grown
in O(prefix * n) big-integer operations, and a single second-kind column is a
linear recurrence in n.  Both are computed over scaled integers (clearing the
denominator q of r) and returned as exact Fractions.
"""

from __future__ import annotations

import enum
import math
import os
import threading
from fractions import Fraction
from functools import lru_cache
from typing import Dict, List, Tuple

from .errors import CapacityExceeded, InadmissibleParameters, InvalidParameter
from .rational import RationalLike, as_rational

DEFAULT_N_MAX = 4096
_N_MAX_ENV = "RLAH_N_MAX"

factorial = lru_cache(maxsize=None)(math.factorial)


class StirlingKind(enum.Enum):
    FIRST = "first"
    SECOND = "second"


def effective_n_max(override: int | None = None) -> int:
    """Row cap for exact tables: explicit override, else $RLAH_N_MAX, else 4096."""
    if override is not None:
        return override
    env = os.environ.get(_N_MAX_ENV)
    return int(env) if env else DEFAULT_N_MAX


def _check_r(r: Fraction) -> Fraction:
    if r < 0:
        raise InvalidParameter(f"r must be >= 0, got {r}")
    return r


class RStirlingTable:
    """Memoized triangle of r-Stirling numbers of one kind, for one fixed r.

    Rows are immutable tuples once appended; growing the table is
    single-writer (guarded by a per-table lock), concurrent reads of filled
    rows are safe.
    """

    def __init__(self, kind: StirlingKind, r: Fraction):
        self.kind = kind
        self.r = _check_r(as_rational(r))
        self._rows: List[Tuple[Fraction, ...]] = [(Fraction(1),)]
        self._lock = threading.Lock()

    @property
    def max_filled(self) -> int:
        return len(self._rows) - 1

    def ensure(self, n: int) -> None:
        if n <= self.max_filled:
            return
        with self._lock:
            r = self.r
            first = self.kind is StirlingKind.FIRST
            zero = Fraction(0)
            while self.max_filled < n:
                m = self.max_filled + 1
                prev = self._rows[-1]
                factor = m + r - 1 if first else None
                row = []
                for k in range(m + 1):
                    above = prev[k] if k < m else zero
                    diag = prev[k - 1] if k >= 1 else zero
                    coeff = factor if first else k + r
                    row.append(coeff * above + diag)
                self._rows.append(tuple(row))

    def value(self, n: int, k: int) -> Fraction:
        """Entry (n, k); 0 when k < 0 or k > n."""
        if n < 0:
            raise InvalidParameter(f"n must be >= 0, got {n}")
        if k < 0 or k > n:
            return Fraction(0)
        self.ensure(n)
        return self._rows[n][k]


_registry: Dict[Tuple[StirlingKind, Fraction], RStirlingTable] = {}
_registry_lock = threading.Lock()


def table_for(kind: StirlingKind, r: RationalLike) -> RStirlingTable:
    """Shared table for (kind, canonical r); created on first use."""
    key = (kind, _check_r(as_rational(r)))
    table = _registry.get(key)
    if table is None:
        with _registry_lock:
            table = _registry.setdefault(key, RStirlingTable(*key))
    return table


def stirling_r(
    kind: StirlingKind,
    n: int,
    k: int,
    r: RationalLike,
    *,
    n_max: int | None = None,
) -> Fraction:
    """r-Stirling number of the given kind, from the memoized recurrence table."""
    cap = effective_n_max(n_max)
    if n > cap:
        raise CapacityExceeded(f"n={n} exceeds n_max={cap}")
    return table_for(kind, r).value(n, k)


def stirling_r_poly(
    kind: StirlingKind,
    n: int,
    k: int,
    r: RationalLike,
    *,
    n_max: int | None = None,
) -> Fraction:
    """Same value via the polynomial-in-r formula over ordinary Stirling numbers.

    first kind:  sum_j c(n,j) * C(j,k) * r^(j-k)
    second kind: sum_j C(n,j) * S(j,k) * r^(n-j)

    Exists as an independent oracle for cross-validating the recurrence path.
    """
    cap = effective_n_max(n_max)
    if n > cap:
        raise CapacityExceeded(f"n={n} exceeds n_max={cap}")
    r = _check_r(as_rational(r))
    if n < 0:
        raise InvalidParameter(f"n must be >= 0, got {n}")
    if k < 0 or k > n:
        return Fraction(0)
    plain = table_for(kind, Fraction(0))
    if kind is StirlingKind.FIRST:
        return sum(
            (plain.value(n, j) * math.comb(j, k) * r ** (j - k) for j in range(k, n + 1)),
            Fraction(0),
        )
    return sum(
        (math.comb(n, j) * plain.value(j, k) * r ** (n - j) for j in range(k, n + 1)),
        Fraction(0),
    )


def gen_binomial(top_offset: RationalLike, gap: int) -> Fraction:
    """Generalized binomial binom(x, x-gap) as the product over j=1..gap of (x-gap+j)/j.

    The empty product (gap=0) is 1.  A zero factor in numerator position is
    rejected: it cannot occur for admissible callers and signals a misuse.
    """
    if gap < 0:
        raise InvalidParameter(f"gap must be >= 0, got {gap}")
    x = as_rational(top_offset)
    out = Fraction(1)
    for j in range(1, gap + 1):
        num = x - gap + j
        if num == 0:
            raise InvalidParameter(
                f"gen_binomial({x}, {gap}): zero factor at j={j}; parameters inadmissible"
            )
        out = out * num / j
    return out


def _check_admissible(n: int, k: int, r: Fraction) -> None:
    if n < 1 or k < 0 or k > n or r < 0 or max(k, r) <= 0:
        raise InadmissibleParameters(
            f"(n={n}, k={k}, r={r}) is not admissible: need n >= 1, 0 <= k <= n, "
            f"r >= 0 and max(k, r) > 0"
        )


def lah_r(n: int, k: int, r: RationalLike, *, n_max: int | None = None) -> Fraction:
    """r-Lah number via the closed form binom(n+2r-1, k+2r-1) * n!/k!."""
    r = as_rational(r)
    _check_admissible(n, k, r)
    cap = effective_n_max(n_max)
    if n > cap:
        raise CapacityExceeded(f"n={n} exceeds n_max={cap}")
    return gen_binomial(n + 2 * r - 1, n - k) * factorial(n) / factorial(k)


def harmonic_diff(alpha: RationalLike, m: int) -> Fraction:
    """Exact sum of 1/(alpha+j) for j=1..m (a difference of harmonic numbers)."""
    alpha = as_rational(alpha)
    if alpha <= -1:
        raise InvalidParameter(f"alpha must be > -1, got {alpha}")
    if m < 0:
        raise InvalidParameter(f"m must be >= 0, got {m}")
    return sum((Fraction(1) / (alpha + j) for j in range(1, m + 1)), Fraction(0))


# -- exact row/column slices for large n ------------------------------------

def _first_kind_prefix_scaled(n: int, r: Fraction, j_max: int) -> List[int]:
    """Integer coefficients b with c(n,j)_r = b[j] * q^(j-n), q = r.denominator.

    b is the prefix [0..j_max] of the coefficient list of the monic integer
    polynomial prod_{i=0}^{n-1} (y + p + q*i); the prefix is closed under the
    one-factor-at-a-time update, so only j_max+1 columns are carried.
    """
    p, q = r.numerator, r.denominator
    j_max = min(j_max, n)
    b = [0] * (j_max + 1)
    b[0] = 1
    deg = 0
    for i in range(n):
        c = p + q * i
        for j in range(min(deg + 1, j_max), 0, -1):
            b[j] = b[j - 1] + c * b[j]
        b[0] = c * b[0]
        deg += 1
    return b


def _second_kind_column_scaled(k: int, r: Fraction, j_max: int) -> List[int]:
    """Integers T with S(j,k)_r = T[j] * q^(-j), from the scaled column recurrence

    T[j, kk] = (kk*q + p) * T[j-1, kk] + q * T[j-1, kk-1],  T[0, 0] = 1.
    """
    p, q = r.numerator, r.denominator
    cols = [[0] * (j_max + 1) for _ in range(k + 1)]
    cols[0][0] = 1
    for j in range(1, j_max + 1):
        cols[0][j] = cols[0][j - 1] * p
        for kk in range(1, k + 1):
            cols[kk][j] = (kk * q + p) * cols[kk][j - 1] + q * cols[kk - 1][j - 1]
    return cols[k]


def first_kind_prefix(n: int, r: RationalLike, j_max: int) -> List[Fraction]:
    """Exact c(n,j)_r for j = 0..min(j_max, n), without filling the triangle.

    Cost is O(j_max * n) big-integer operations, so rows far beyond the
    table cap are reachable when only a prefix is needed.
    """
    r = _check_r(as_rational(r))
    if n < 0 or j_max < 0:
        raise InvalidParameter("n and j_max must be >= 0")
    q = r.denominator
    b = _first_kind_prefix_scaled(n, r, j_max)
    return [Fraction(bj, q ** (n - j)) for j, bj in enumerate(b)]


def second_kind_column(k: int, r: RationalLike, j_max: int) -> List[Fraction]:
    """Exact S(j,k)_r for j = 0..j_max (one column of the second-kind triangle)."""
    r = _check_r(as_rational(r))
    if k < 0 or j_max < 0:
        raise InvalidParameter("k and j_max must be >= 0")
    q = r.denominator
    col = _second_kind_column_scaled(k, r, j_max)
    return [Fraction(tj, q ** j) for j, tj in enumerate(col)]
