"""The r-Lah distribution, materialized exactly.

For an admissible triple (n, k, r) the law lives on {k, ..., n} with

    P[X = j] = c(n,j)_r * S(j,k)_r / L(n,k)_r,

where c and S are the r-Stirling numbers of the first and second kind and
L(n,k)_r the r-Lah number.  Everything in this module is exact rational
arithmetic: PMF, CDF, moments, parity split, mode, and the probability
generating function.  Sampling is the only place a float appears, and there
only in the final comparison of a 53-bit uniform against once-rounded exact
CDF thresholds.

``pmf_head`` is the large-n workhorse: it materializes the exact PMF on a
prefix {k, ..., j_hi} of the support in O(j_hi * n) big-integer work, which
is what makes exact tail sums, CDF heads and modes reachable at n = 10^4
where the full triangle is out of the question.
"""

from __future__ import annotations

import csv
import io
import math
from dataclasses import dataclass
from fractions import Fraction
from functools import lru_cache
from typing import IO, List, Sequence, Set, Tuple

import numpy as np

from .errors import CapacityExceeded, InadmissibleParameters, InvalidParameter
from .rational import RationalLike, as_rational, format_rational
from .stirling import (
    StirlingKind,
    _first_kind_prefix_scaled,
    _second_kind_column_scaled,
    effective_n_max,
    factorial,
    gen_binomial,
    harmonic_diff,
    lah_r,
    stirling_r,
)


@dataclass(frozen=True)
class AdmissibleTriple:
    """Parameters (n, k, r) of an r-Lah distribution; max(k, r) > 0 required."""

    n: int
    k: int
    r: Fraction

    def __post_init__(self):
        object.__setattr__(self, "r", as_rational(self.r))
        if self.n < 1 or not isinstance(self.n, int):
            raise InadmissibleParameters(f"n must be a positive integer, got {self.n}")
        if not 0 <= self.k <= self.n:
            raise InadmissibleParameters(f"k must lie in [0, n], got k={self.k}, n={self.n}")
        if self.r < 0:
            raise InadmissibleParameters(f"r must be >= 0, got {self.r}")
        if max(self.k, self.r) <= 0:
            raise InadmissibleParameters("k = r = 0 is excluded (L(n,0)_0 = 0)")

    @classmethod
    def of(cls, n: int, k: int, r: RationalLike) -> "AdmissibleTriple":
        return cls(n, k, as_rational(r))


class LahDistribution:
    """Fully materialized r-Lah distribution: exact PMF/CDF over {k, ..., n}.

    Immutable after construction; safe for concurrent reads.  Use
    :func:`build_distribution` to construct.
    """

    def __init__(self, params: AdmissibleTriple, pmf: Sequence[Fraction], normalizer: Fraction):
        self.params = params
        self._pmf = tuple(pmf)
        self.normalizer = normalizer
        cdf = []
        acc = Fraction(0)
        for p in self._pmf:
            acc += p
            cdf.append(acc)
        self._cdf = tuple(cdf)
        if self._cdf[-1] != 1:
            raise AssertionError("PMF does not sum to 1: table fill is broken")

    @property
    def support(self) -> range:
        return range(self.params.k, self.params.n + 1)

    def pmf(self, j: int) -> Fraction:
        """P[X = j]; 0 outside the support."""
        if j < self.params.k or j > self.params.n:
            return Fraction(0)
        return self._pmf[j - self.params.k]

    def cdf(self, j: int) -> Fraction:
        """P[X <= j]."""
        if j < self.params.k:
            return Fraction(0)
        if j >= self.params.n:
            return Fraction(1)
        return self._cdf[j - self.params.k]

    def pmf_items(self) -> List[Tuple[int, Fraction]]:
        return list(zip(self.support, self._pmf))

    # -- moments -------------------------------------------------------------

    def expectation(self) -> Fraction:
        """E[X] by the closed form

            (k + [k(n+r) + r(n+1)] * [H_{n+2r-1} - H_{k+2r-1}]) / (n - (k-1)).

        Equal (exactly) to :meth:`expectation_alt` and :meth:`mean_via_pmf`.
        """
        return expectation_exact(self.params.n, self.params.k, self.params.r)

    def expectation_alt(self) -> Fraction:
        """E[X] by the other closed form, split into the k-part and the r-part."""
        n, k, r = self.params.n, self.params.k, self.params.r
        h_top = harmonic_diff(k + 2 * r - 1, n - k + 1)  # H_{n+2r}   - H_{k+2r-1}
        h_low = harmonic_diff(k + 2 * r - 1, n - k)      # H_{n+2r-1} - H_{k+2r-1}
        return Fraction(k) * (n + 2 * r) / (n - (k - 1)) * h_top + r * h_low

    def mean_via_pmf(self) -> Fraction:
        return sum((j * p for j, p in zip(self.support, self._pmf)), Fraction(0))

    def variance(self) -> Fraction:
        # no closed form exists; summation only
        mean = self.mean_via_pmf()
        second = sum((j * j * p for j, p in zip(self.support, self._pmf)), Fraction(0))
        return second - mean * mean

    # -- shape ---------------------------------------------------------------

    def parity_probabilities(self) -> Tuple[Fraction, Fraction]:
        """(P[X even], P[X odd]); both equal 1/2 whenever n > k."""
        even = sum((p for j, p in zip(self.support, self._pmf) if j % 2 == 0), Fraction(0))
        return even, 1 - even

    def mode(self) -> Set[int]:
        """All maximizers of the PMF; log-concavity makes them 1 or 2 adjacent ints."""
        best = max(self._pmf)
        return {j for j, p in zip(self.support, self._pmf) if p == best}

    def certify_log_concavity(self) -> Tuple[bool, int | None]:
        """Check pmf[i]^2 >= pmf[i-1]*pmf[i+1] on the interior; returns
        (True, None) or (False, first violating index)."""
        p = self._pmf
        for i in range(1, len(p) - 1):
            if p[i] * p[i] < p[i - 1] * p[i + 1]:
                return False, i + self.params.k
        return True, None

    # -- generating function and sampling -------------------------------------

    def pgf(self, t: RationalLike) -> Fraction:
        """E[t^X] summed directly over the PMF (the oracle path for pgf_eval)."""
        t = as_rational(t)
        return sum((t ** j * p for j, p in zip(self.support, self._pmf)), Fraction(0))

    def sample(self, rng: np.random.Generator, count: int) -> np.ndarray:
        """Inverse-CDF draws against once-rounded binary64 thresholds.

        Each exact CDF value is rounded to the nearest double once; ties of
        the uniform against a threshold resolve upward.  Per-draw distortion
        is at most 2^-53.  Deterministic given the generator state.
        """
        if count < 0:
            raise InvalidParameter(f"count must be >= 0, got {count}")
        thresholds = np.array([float(c) for c in self._cdf])
        u = rng.random(count)
        idx = np.searchsorted(thresholds, u, side="right")
        return idx + self.params.k

    # -- export ---------------------------------------------------------------

    def to_rows(self, *, include_cdf: bool = False) -> List[dict]:
        rows = []
        for j, p, c in zip(self.support, self._pmf, self._cdf):
            row = {
                "j": j,
                "pmf_num": p.numerator,
                "pmf_den": p.denominator,
                "pmf_float": float(p),
            }
            if include_cdf:
                row["cdf_num"] = c.numerator
                row["cdf_den"] = c.denominator
            rows.append(row)
        return rows

    def to_csv(self, out: IO[str], *, include_cdf: bool = False) -> None:
        fields = ["j", "pmf_num", "pmf_den", "pmf_float"]
        if include_cdf:
            fields += ["cdf_num", "cdf_den"]
        writer = csv.DictWriter(out, fieldnames=fields)
        writer.writeheader()
        for row in self.to_rows(include_cdf=include_cdf):
            writer.writerow(row)

    def to_json_dict(self) -> dict:
        return {
            "n": self.params.n,
            "k": self.params.k,
            "r": format_rational(self.params.r),
            "normalizer": format_rational(self.normalizer),
            "pmf": {str(j): format_rational(p) for j, p in zip(self.support, self._pmf)},
            "cdf": {str(j): format_rational(c) for j, c in zip(self.support, self._cdf)},
        }

    def csv_text(self, *, include_cdf: bool = False) -> str:
        buf = io.StringIO()
        self.to_csv(buf, include_cdf=include_cdf)
        return buf.getvalue()


def build_distribution(params: AdmissibleTriple, *, n_max: int | None = None) -> LahDistribution:
    """Materialize the exact r-Lah distribution for an admissible triple."""
    n, k, r = params.n, params.k, params.r
    cap = effective_n_max(n_max)
    if n > cap:
        raise CapacityExceeded(f"n={n} exceeds n_max={cap}")
    normalizer = lah_r(n, k, r, n_max=n_max)
    pmf = [
        stirling_r(StirlingKind.FIRST, n, j, r, n_max=n_max)
        * stirling_r(StirlingKind.SECOND, j, k, r, n_max=n_max)
        / normalizer
        for j in range(k, n + 1)
    ]
    return LahDistribution(params, pmf, normalizer)


def expectation_exact(n: int, k: int, r: RationalLike) -> Fraction:
    """E[Lah(n,k)_r] by closed form, without materializing the distribution.

    Cost is one harmonic difference (O(n) rational terms), so this reaches n
    far beyond the table cap.
    """
    params = AdmissibleTriple(n, k, as_rational(r))
    n, k, r = params.n, params.k, params.r
    h = harmonic_diff(k + 2 * r - 1, n - k)
    return (k + (k * (n + r) + r * (n + 1)) * h) / (n - (k - 1))


def pgf_eval(params: AdmissibleTriple, t: RationalLike) -> Fraction:
    """P_{n,k,r}(t) = E[t^X] via the finite alternating sum

        (1/binom(n+2r-1, k+2r-1)) * sum_{m=0}^{k} (-1)^{k-m} C(k,m)
            * (a)(a+1)...(a+n-1) / n!,    a = r(t+1) + t*m,

    the gamma-quotient factor expanded as an exact rising factorial.  For
    r = 0 the m = 0 term vanishes on its own: its rising factorial starts
    at a = 0.  Exact for rational t; equals the PMF sum.
    """
    t = as_rational(t)
    n, k, r = params.n, params.k, params.r
    binom = gen_binomial(n + 2 * r - 1, n - k)
    total = Fraction(0)
    for m in range(k + 1):
        a = r * (t + 1) + t * m
        rising = Fraction(1)
        for i in range(n):
            rising *= a + i
        total += (-1) ** (k - m) * math.comb(k, m) * rising / factorial(n)
    return total / binom


# -- exact prefix of the PMF for large n --------------------------------------

@dataclass(frozen=True)
class PmfHead:
    """Exact PMF values on the support prefix {k, ..., j_hi}.

    ``values[i]`` is P[X = k+i] as a Fraction.  ``head_cdf(j)`` is the exact
    P[X <= j] for j <= j_hi; the complement gives exact upper tails without
    ever touching the (astronomical) right end of the row.
    """

    params: AdmissibleTriple
    j_hi: int
    values: Tuple[Fraction, ...]

    def pmf(self, j: int) -> Fraction:
        if j < self.params.k or j > self.params.n:
            return Fraction(0)
        if j > self.j_hi:
            raise InvalidParameter(f"j={j} beyond computed head j_hi={self.j_hi}")
        return self.values[j - self.params.k]

    def head_cdf(self, j: int) -> Fraction:
        """Exact P[X <= j] for j <= j_hi (or any j when the head covers n)."""
        if j < self.params.k:
            return Fraction(0)
        if j > self.j_hi:
            if self.j_hi >= self.params.n:
                j = self.params.n
            else:
                raise InvalidParameter(f"j={j} beyond computed head j_hi={self.j_hi}")
        return sum(self.values[: j - self.params.k + 1], Fraction(0))

    def upper_tail(self, j: int) -> Fraction:
        """Exact P[X >= j], via 1 - P[X <= j-1]."""
        return 1 - self.head_cdf(j - 1)

    def lower_tail(self, j: int) -> Fraction:
        """Exact P[X <= j]."""
        return self.head_cdf(j)


@lru_cache(maxsize=32)
def _pmf_head_cached(n: int, k: int, r: Fraction, j_hi: int) -> PmfHead:
    params = AdmissibleTriple(n, k, r)
    q = r.denominator
    b = _first_kind_prefix_scaled(n, r, j_hi)
    t = _second_kind_column_scaled(k, r, j_hi)
    # pmf[j] = b[j]*t[j] / (q^n * L); the scale q^n*L is integer-valued
    scale = q ** n * lah_r(n, k, r, n_max=max(n, effective_n_max()))
    values = tuple(Fraction(b[j] * t[j], 1) / scale for j in range(k, j_hi + 1))
    return PmfHead(params, j_hi, values)


def pmf_head(n: int, k: int, r: RationalLike, j_hi: int) -> PmfHead:
    """Exact PMF prefix on {k, ..., j_hi}; j_hi is clamped to n.

    Unlike :func:`build_distribution` this does not fill (or cap at) the
    triangle: cost is O(j_hi * n) big-integer operations, fine at n = 10^4
    for the j_hi ~ 100 these distributions concentrate under.
    """
    r = as_rational(r)
    params = AdmissibleTriple(n, k, r)  # validate eagerly
    j_hi = min(j_hi, n)
    if j_hi < k:
        raise InvalidParameter(f"j_hi={j_hi} is below the support start k={k}")
    return _pmf_head_cached(params.n, params.k, params.r, j_hi)


def mode_exact(n: int, k: int, r: RationalLike, *, window: int | None = None) -> Set[int]:
    """Exact argmax set of the PMF, computed on a certified prefix.

    The head is grown until the (strictly log-concave) weight sequence is
    decreasing at the right edge, which certifies that no maximizer lies
    beyond the window.  Works at n far past the exact-table cap.
    """
    r = as_rational(r)
    params = AdmissibleTriple(n, k, r)
    lam = (k + float(r)) * math.log(max(n, 2))
    j_hi = window if window is not None else min(n, int(math.ceil(lam + 8 * math.sqrt(lam + 4))) + 16)
    j_hi = max(j_hi, k + 2)
    while True:
        head = pmf_head(n, k, r, j_hi)
        w = head.values
        if j_hi >= n or (len(w) >= 2 and w[-1] < w[-2]):
            break
        j_hi = min(n, 2 * j_hi)
    best = max(w)
    return {j + params.k for j, v in enumerate(w) if v == best}
