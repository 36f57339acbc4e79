"""Floating-point path and limit-theorem approximants.

Two kinds of machinery live here.  The first is the binary64 counterpart of
the exact tables: log-space r-Stirling triangles filled by the same
recurrences through log-sum-exp, usable far beyond the exact-table cap.  The
second is the collection of asymptotic predictions for the r-Lah
distribution with k, r fixed and n large: the Poisson-scale parameter
lambda_n = (k+r) log n, the mod-Poisson limit

    Psi(z) = Gamma(k+2r) / Gamma((k+r) e^z + r),

the Gaussian central/local approximants, the two-candidate mode prediction,
and the precise large-deviation formulas for the point mass and both tails.

Convergence statistics (Kolmogorov distance, local-limit sup gap,
mod-Poisson residual, tail ratios) compare those predictions against the
*exact* distribution.  For large n the exact side is evaluated on a
certified prefix of the support (see :func:`rlah.distribution.pmf_head`):
the distributions concentrate around lambda_n ~ log n, so a window of a
hundred-odd support points carries all mass that matters, and exact upper
tails come from complementing the head CDF.
"""

from __future__ import annotations

import math
from dataclasses import dataclass, field
from fractions import Fraction
from typing import Iterable, List, Sequence, Tuple

import numpy as np

from .distribution import AdmissibleTriple, PmfHead, pgf_eval, pmf_head
from .errors import CapacityExceeded, DomainError, InvalidParameter
from .rational import RationalLike, as_rational
from .stirling import StirlingKind

DEFAULT_N_MAX_FLOAT = 20_000
_PGF_METHOD_N_CAP = 512
_HEAD_COST_CAP = 40_000_000  # j_hi * n guard for the exact-window path


# -- real special functions ---------------------------------------------------

def gamma_real(x: float) -> float:
    """Gamma(x) for 0 < x <= 170; relative error well under 1e-12 on [0.5, 50]."""
    if x <= 0:
        raise DomainError(f"gamma_real requires x > 0, got {x}")
    if x > 170:
        raise DomainError(f"gamma_real overflows for x > 170 (got {x}); use log_gamma_real")
    return math.gamma(x)


def log_gamma_real(x: float) -> float:
    """log Gamma(x) for x > 0 (no overflow guard needed)."""
    if x <= 0:
        raise DomainError(f"log_gamma_real requires x > 0, got {x}")
    return math.lgamma(x)


def digamma(x: float) -> float:
    """Gamma'(x)/Gamma(x) for x > 0: recurrence shift to x >= 10, then the
    asymptotic series; absolute error below 1e-12 on the shifted range."""
    if x <= 0:
        raise DomainError(f"digamma requires x > 0, got {x}")
    acc = 0.0
    while x < 10.0:
        acc -= 1.0 / x
        x += 1.0
    inv2 = 1.0 / (x * x)
    series = (
        math.log(x)
        - 0.5 / x
        - inv2
        * (
            1.0 / 12
            - inv2
            * (1.0 / 120 - inv2 * (1.0 / 252 - inv2 * (1.0 / 240 - inv2 * (1.0 / 132 - inv2 * 691.0 / 32760))))
        )
    )
    return acc + series


def normal_cdf(x: float) -> float:
    """Standard normal CDF via erfc; Phi(0) = 1/2 exactly."""
    return 0.5 * math.erfc(-x / math.sqrt(2.0))


# -- log-space tables ---------------------------------------------------------

class LogSpaceTable:
    """Triangle of log r-Stirling numbers (natural log, -inf for zero).

    Filled row by row by the exact recurrences, carried through
    ``logaddexp``; immutable once a row exists.  Validated against the exact
    tables to 1e-9 relative error on the log scale for n <= 64.
    """

    def __init__(self, kind: StirlingKind, r: float, n_max: int = DEFAULT_N_MAX_FLOAT):
        if r < 0:
            raise InvalidParameter(f"r must be >= 0, got {r}")
        self.kind = kind
        self.r = float(r)
        self.n_max = n_max
        self._rows: List[np.ndarray] = [np.zeros(1)]

    @property
    def max_filled(self) -> int:
        return len(self._rows) - 1

    def ensure(self, n: int) -> None:
        if n > self.n_max:
            raise CapacityExceeded(f"n={n} exceeds n_max_float={self.n_max}")
        r = self.r
        first = self.kind is StirlingKind.FIRST
        while self.max_filled < n:
            m = self.max_filled + 1
            prev = self._rows[-1]
            row = np.empty(m + 1)
            with np.errstate(divide="ignore"):
                if first:
                    coeff = math.log(m + r - 1) if m + r - 1 > 0 else -math.inf
                    row[: m] = prev + coeff
                else:
                    row[: m] = prev + np.log(np.arange(m, dtype=float) + r)
            row[1: m] = np.logaddexp(row[1: m], prev[: m - 1])
            row[m] = prev[m - 1]
            self._rows.append(row)

    def value(self, n: int, k: int) -> float:
        """log of entry (n, k); -inf when k < 0 or k > n."""
        if n < 0:
            raise InvalidParameter(f"n must be >= 0, got {n}")
        if k < 0 or k > n:
            return -math.inf
        self.ensure(n)
        return float(self._rows[n][k])

    def row(self, n: int) -> np.ndarray:
        self.ensure(n)
        return self._rows[n].copy()


def log_pmf_row(n: int, k: int, r: float, *, n_max: int = DEFAULT_N_MAX_FLOAT) -> np.ndarray:
    """log P[X = j] for j = 0..n in binary64, O(n^2) flops and O(n) memory.

    The first-kind row is rolled forward without storing the triangle; the
    second-kind column for the fixed k is a linear recurrence.  Normalized by
    the log-sum-exp of the products, so the float PMF sums to 1.
    """
    if n > n_max:
        raise CapacityExceeded(f"n={n} exceeds n_max_float={n_max}")
    if n < 1 or not 0 <= k <= n:
        raise InvalidParameter(f"need n >= 1 and 0 <= k <= n, got n={n}, k={k}")
    if r < 0 or (k == 0 and r == 0):
        raise InvalidParameter("need r >= 0 and max(k, r) > 0")
    r = float(r)
    # first kind, rolling row
    fir = np.full(n + 1, -math.inf)
    fir[0] = 0.0
    buf = np.empty(n + 1)
    for m in range(1, n + 1):
        coeff = math.log(m + r - 1) if m + r - 1 > 0 else -math.inf
        np.add(fir[: m], coeff, out=buf[: m])
        buf[1: m] = np.logaddexp(buf[1: m], fir[: m - 1])
        buf[m] = fir[m - 1]
        fir[: m + 1] = buf[: m + 1]
    # second kind, one column; S(j,0)_r = r^j with S(0,0) = 1 for every r
    sec = np.full(n + 1, -math.inf)
    prev_col = np.full(n + 1, -math.inf)
    prev_col[0] = 0.0
    if r > 0:
        prev_col[1:] = np.arange(1, n + 1) * math.log(r)
    if k == 0:
        sec = prev_col
    for kk in range(1, k + 1):
        col = np.full(n + 1, -math.inf)
        lc = math.log(kk + r)
        for j in range(1, n + 1):
            col[j] = np.logaddexp(col[j - 1] + lc, prev_col[j - 1])
        prev_col = col
        if kk == k:
            sec = col
    out = fir + sec
    finite = out[np.isfinite(out)]
    top = finite.max()
    out -= top + math.log(np.exp(finite - top).sum())
    return out


# -- approximants --------------------------------------------------------------

def lambda_n(n: int, k: int, r: float) -> float:
    """Poisson-scale parameter (k+r) log n."""
    if n < 2:
        raise InvalidParameter(f"n must be >= 2 for the asymptotic scale, got {n}")
    return (k + float(r)) * math.log(n)


def psi_limit(k: int, r: float, z: float) -> float:
    """Mod-Poisson limit Gamma(k+2r)/Gamma((k+r) e^z + r); Psi(0) = 1 exactly."""
    kr = k + float(r)

    def arg(u: float) -> float:
        return kr * math.exp(u) + float(r)

    return math.gamma(arg(0.0)) / math.gamma(arg(z))


@dataclass(frozen=True)
class LimitApproximant:
    """Asymptotic predictions for Lah(n,k)_r at fixed (k, r), large n."""

    n: int
    k: int
    r: float
    lambda_n: float = field(init=False)

    def __post_init__(self):
        object.__setattr__(self, "lambda_n", lambda_n(self.n, self.k, self.r))

    def psi_limit(self, z: float) -> float:
        return psi_limit(self.k, self.r, z)

    def clt_normalize(self, x: float) -> float:
        return clt_normalize(x, self.n, self.k, self.r)

    def llt_gaussian_pmf(self, j: float) -> float:
        return llt_gaussian_pmf(j, self.n, self.k, self.r)

    def mode_prediction(self) -> Tuple[int, int]:
        return mode_prediction(self.n, self.k, self.r)


def expectation_asymptotic(
    n: int,
    r: float,
    *,
    k: int | None = None,
    alpha: float | None = None,
    linear: bool = False,
) -> float:
    """Leading-order E[Lah(n,k)_r] in the three growth regimes of k(n).

    Exactly one of ``k`` (sublinear regime, evaluated as (k+r) log(n/k)),
    ``alpha`` (k ~ alpha*n, giving n*alpha*log(1/alpha)/(1-alpha)) or
    ``linear`` (k ~ n, giving n) must be selected.
    """
    if n < 2:
        raise InvalidParameter(f"n must be >= 2, got {n}")
    chosen = sum((k is not None, alpha is not None, bool(linear)))
    if chosen != 1:
        raise InvalidParameter("select exactly one regime: k=, alpha= or linear=True")
    if linear:
        return float(n)
    if alpha is not None:
        if not 0 < alpha < 1:
            raise InvalidParameter(f"alpha must lie in (0, 1), got {alpha}")
        return n * alpha * math.log(1.0 / alpha) / (1.0 - alpha)
    if k < 1:
        raise InvalidParameter(f"fixed-k regime needs k >= 1, got {k}")
    return (k + float(r)) * math.log(n / k)


def clt_normalize(x: float, n: int, k: int, r: float) -> float:
    """Standardize: (x - lambda_n) / sqrt(lambda_n)."""
    lam = lambda_n(n, k, r)
    return (x - lam) / math.sqrt(lam)


def llt_gaussian_pmf(j: float, n: int, k: int, r: float) -> float:
    """Gaussian local approximant exp(-(j-lam)^2/(2 lam)) / sqrt(2 pi lam)."""
    lam = lambda_n(n, k, r)
    return math.exp(-((j - lam) ** 2) / (2.0 * lam)) / math.sqrt(2.0 * math.pi * lam)


def mode_prediction(n: int, k: int, r: float) -> Tuple[int, int]:
    """Floor/ceil candidate pair around (k+r) log n - (k+r) psi(k+2r) - 1/2."""
    if k + 2 * float(r) <= 0:
        raise DomainError(f"mode prediction needs k + 2r > 0, got k={k}, r={r}")
    v = lambda_n(n, k, r) - (k + float(r)) * digamma(k + 2 * float(r)) - 0.5
    return math.floor(v), math.ceil(v)


def ldp_lattice_point(n: int, k: int, r: float, x: float) -> Tuple[int, float]:
    """The integer j nearest (k+r) x log n, and x_n = j / ((k+r) log n).

    Recomputing x_n from j makes (k+r) x_n log n an integer by construction,
    which is the lattice condition the large-deviation formulas assume.
    """
    if x <= 0:
        raise DomainError(f"x must be > 0, got {x}")
    lam = lambda_n(n, k, r)
    j = round(x * lam)
    if j < 1:
        raise DomainError(f"x={x} is too small: nearest lattice point is j={j}")
    return j, j / lam


def _ldp_common(n: int, k: int, r: float, x: float) -> float:
    j, x_n = ldp_lattice_point(n, k, r, x)
    kr = k + float(r)
    exponent = -kr * (x_n * math.log(x_n) - x_n + 1.0) * math.log(n)
    gamma_ratio = math.gamma(k + 2 * float(r)) / math.gamma(kr * x + float(r))
    return math.exp(exponent) / math.sqrt(2.0 * math.pi * kr * x * math.log(n)) * gamma_ratio


def ldp_point(n: int, k: int, r: float, x: float) -> float:
    """Asymptotic P[X = (k+r) x_n log n] for x_n -> x > 0."""
    return _ldp_common(n, k, r, x)


def ldp_upper_tail(n: int, k: int, r: float, x: float) -> float:
    """Asymptotic P[X >= (k+r) x_n log n]; only valid for x > 1."""
    if x <= 1:
        raise DomainError(f"upper tail requires x > 1, got {x}")
    return _ldp_common(n, k, r, x) * x / (x - 1.0)


def ldp_lower_tail(n: int, k: int, r: float, x: float) -> float:
    """Asymptotic P[X <= (k+r) x_n log n]; only valid for 0 < x < 1."""
    if not 0 < x < 1:
        raise DomainError(f"lower tail requires 0 < x < 1, got {x}")
    return _ldp_common(n, k, r, x) / (1.0 - x)


# -- exact-window convergence statistics ---------------------------------------

def _head_for(n: int, k: int, r: Fraction, z_max: float = 0.0) -> PmfHead:
    """Exact PMF head sized to carry all mass of e^{z X} weights up to z_max.

    The tilted distribution concentrates near e^z * lambda_n, so the window
    end is pushed 14 standard deviations past that and rounded up for cache
    reuse.  Guarded by a work cap, since cost is O(j_hi * n) big-int ops.
    """
    lam = lambda_n(max(n, 2), k, float(r))
    center = math.exp(max(z_max, 0.0)) * lam
    j_hi = int(math.ceil(center + 14.0 * math.sqrt(center + 4.0))) + 16
    j_hi = min(n, ((j_hi // 32) + 1) * 32)
    if j_hi * n > _HEAD_COST_CAP:
        raise CapacityExceeded(
            f"exact head window {j_hi} x n={n} exceeds the work cap; reduce n or z"
        )
    return pmf_head(n, k, r, j_hi)


def _log_fraction(v: Fraction) -> float:
    if v == 0:
        return -math.inf
    return math.log(v.numerator) - math.log(v.denominator)


def kolmogorov_distance(
    n: int, k: int, r: RationalLike, *, continuity_correction: bool = True
) -> float:
    """Kolmogorov distance between the standardized exact CDF and N(0, 1).

    With ``continuity_correction`` (default) the lattice CDF at j is compared
    against Phi at the standardized half-integer j + 1/2, the usual
    convention when a lattice law is measured against a continuous limit.
    Without it, the raw two-sided sup over the step function is returned
    (left limits included), which is larger by roughly half the mode mass.
    """
    r = as_rational(r)
    head = _head_for(n, k, r)
    shift = 0.5 if continuity_correction else 0.0
    best = 0.0
    cdf = 0.0
    for j in range(k, head.j_hi + 1):
        z = clt_normalize(j + shift, n, k, float(r))
        p = float(head.pmf(j))
        if not continuity_correction:
            best = max(best, abs(cdf - normal_cdf(z)))
        cdf += p
        best = max(best, abs(cdf - normal_cdf(z)))
    # beyond the window both CDFs sit within these exact tails of 1
    tail_exact = float(head.upper_tail(head.j_hi + 1))
    tail_normal = 1.0 - normal_cdf(clt_normalize(head.j_hi + shift, n, k, float(r)))
    return max(best, tail_exact, tail_normal)


def llt_sup_gap(n: int, k: int, r: RationalLike) -> float:
    """sqrt(log n) * sup_j |P[X = j] - Gaussian local approximant(j)|."""
    r = as_rational(r)
    head = _head_for(n, k, r)
    best = 0.0
    for j in range(k, head.j_hi + 1):
        gap = abs(float(head.pmf(j)) - llt_gaussian_pmf(j, n, k, float(r)))
        best = max(best, gap)
    # beyond the window both terms are below their decreasing edge values
    edge = max(float(head.pmf(head.j_hi)), llt_gaussian_pmf(head.j_hi + 1, n, k, float(r)))
    return math.sqrt(math.log(n)) * max(best, edge)


def _log_mgf_exact(n: int, k: int, r: Fraction, z: float) -> float:
    """log E[e^{z X}] from the exact head, with a certified truncation bound.

    The summand e^{z j} P[X = j] is log-concave in j, so once it decreases at
    the window edge the remainder is dominated by a geometric series; the
    window is grown until that bound is 1e-12-negligible.
    """
    z_size = max(z, 0.0)
    head = _head_for(n, k, r, z_size)
    while True:
        terms = [z * j + _log_fraction(head.pmf(j)) for j in range(k, head.j_hi + 1)]
        top = max(terms)
        log_sum = top + math.log(sum(math.exp(t - top) for t in terms))
        if head.j_hi >= n:
            return log_sum
        u_last, u_prev = terms[-1], terms[-2]
        if u_last < u_prev:
            ratio = math.exp(u_last - u_prev)
            log_tail_bound = u_last + math.log(ratio / (1.0 - ratio))
            if log_tail_bound < log_sum - 27.7:  # tail below 1e-12 of the sum
                return log_sum
        head = pmf_head(n, k, r, min(n, head.j_hi * 2))


def mod_poisson_residual(
    n: int, k: int, r: RationalLike, z: float, *, method: str = "exact"
) -> float:
    """E[e^{z X}] / e^{lambda_n (e^z - 1)}, the quantity converging to Psi(z).

    Methods: "exact" (default) sums e^{z j} against the exact head PMF with a
    certified truncation; "pgf" evaluates the exact generating function at
    e^z rounded once to its 53-bit dyadic (small n only); "logspace" uses the
    binary64 log-space row.
    """
    r = as_rational(r)
    AdmissibleTriple(n, k, r)
    if z == 0.0:
        return 1.0  # numerator and denominator coincide identically
    lam = lambda_n(n, k, float(r))
    scale = lam * (math.exp(z) - 1.0)
    if method == "exact":
        return math.exp(_log_mgf_exact(n, k, r, z) - scale)
    if method == "pgf":
        if n > _PGF_METHOD_N_CAP:
            raise CapacityExceeded(f"pgf method is exact-rational in n={n}; capped at {_PGF_METHOD_N_CAP}")
        t = Fraction(math.exp(z))  # nearest 53-bit dyadic; error propagates linearly
        value = pgf_eval(AdmissibleTriple(n, k, r), t)
        return math.exp(_log_fraction(value) - scale)
    if method == "logspace":
        row = log_pmf_row(n, k, float(r))
        js = np.arange(n + 1, dtype=float)
        terms = row + z * js
        top = terms[np.isfinite(terms)].max()
        log_sum = top + math.log(np.exp(terms[np.isfinite(terms)] - top).sum())
        return math.exp(log_sum - scale)
    raise InvalidParameter(f"unknown method {method!r}")


def ldp_tail_ratio(n: int, k: int, r: RationalLike, x: float) -> Tuple[float, float, float]:
    """(exact tail, asymptotic tail, ratio) at the lattice point nearest
    (k+r) x log n; upper tail for x > 1, lower tail for x < 1."""
    r = as_rational(r)
    j, _ = ldp_lattice_point(n, k, float(r), x)
    head = _head_for(n, k, r, math.log(max(x, 1.0)) + 0.1)
    if x > 1:
        exact = float(head.upper_tail(j))
        approx = ldp_upper_tail(n, k, float(r), x)
    elif 0 < x < 1:
        exact = float(head.lower_tail(j))
        approx = ldp_lower_tail(n, k, float(r), x)
    else:
        raise DomainError("x must differ from 1 for a tail ratio")
    return exact, approx, exact / approx


def convergence_table(
    ns: Sequence[int],
    k: int,
    r: RationalLike,
    *,
    zs: Iterable[float] = (-0.5, 0.3, 1.0),
    ldp_xs: Iterable[float] = (2.0, 0.5),
) -> List[dict]:
    """Rows (n, statistic, exact, approximant, gap) for convergence studies."""
    r = as_rational(r)
    rows: List[dict] = []

    def add(n, statistic, exact, approximant):
        rows.append(
            {
                "n": n,
                "statistic": statistic,
                "exact": exact,
                "approximant": approximant,
                "gap": abs(exact - approximant),
            }
        )

    from .distribution import mode_exact  # local import to keep module load light

    for n in ns:
        add(n, "clt_kolmogorov", kolmogorov_distance(n, k, r), 0.0)
        add(n, "llt_sup_gap", llt_sup_gap(n, k, r), 0.0)
        for z in zs:
            add(n, f"mod_poisson_residual[z={z:g}]", mod_poisson_residual(n, k, r, z), psi_limit(k, float(r), z))
        lo, hi = mode_prediction(n, k, float(r))
        exact_mode = min(mode_exact(n, k, r))
        add(n, "mode", float(exact_mode), (lo + hi) / 2.0)
        for x in ldp_xs:
            try:
                exact, approx, _ = ldp_tail_ratio(n, k, r, x)
            except DomainError:
                continue
            add(n, f"ldp_tail[x={x:g}]", exact, approx)
    return rows
