"""Monte Carlo ground truth for the cone and recovery formulas.

Walk increments and measurement matrices are drawn as binary64 Gaussians and
promoted to exact dyadic rationals; every geometric decision after that point
is exact (rank checks by rational elimination, face and uniqueness tests by
the exact simplex of :mod:`rlah.simplex`).  There are no tolerances to tune,
and genericity violations are detectable as exact rank deficiencies, which
are rejected, redrawn and counted.

A subset A of generators spans a k-face of the cone iff it is independent
and some functional vanishes on A while being strictly negative on the rest;
strictness is encoded conically as <= -1.  Uniqueness of monotone-signal
recovery is decided on the kernel polytope K = {w : x + N w in B^(n)}: K
contains 0 always, and equals {0} iff each kernel coordinate has maximum and
minimum 0 over K (unboundedness counting as failure).
"""

from __future__ import annotations

import enum
import itertools
import math
import time
from dataclasses import dataclass
from fractions import Fraction
from typing import Iterable, List, Optional, Sequence, Tuple

import numpy as np

from .errors import CapacityExceeded, DegenerateSample, InvalidParameter
from .simplex import OPTIMAL, UNBOUNDED, solve_lp

_ENUMERATION_CAP = 10 ** 6
_MAX_WALK_N = 24
_MAX_REDRAWS = 16

Vector = Tuple[Fraction, ...]


def _rank(rows: Sequence[Sequence[Fraction]]) -> int:
    """Exact rank by fraction Gaussian elimination."""
    mat = [list(row) for row in rows]
    if not mat:
        return 0
    m, n = len(mat), len(mat[0])
    rank = 0
    for col in range(n):
        piv = next((i for i in range(rank, m) if mat[i][col] != 0), None)
        if piv is None:
            continue
        mat[rank], mat[piv] = mat[piv], mat[rank]
        inv = Fraction(1) / mat[rank][col]
        mat[rank] = [v * inv for v in mat[rank]]
        for i in range(m):
            if i != rank and mat[i][col] != 0:
                f = mat[i][col]
                mat[i] = [a - f * b for a, b in zip(mat[i], mat[rank])]
        rank += 1
        if rank == m:
            break
    return rank


class ConeClass(enum.Enum):
    POINTED = "pointed"
    PROPER_NOT_POINTED = "proper_not_pointed"
    FULL_SPACE = "full_space"


@dataclass(frozen=True)
class WalkSample:
    """An n-step walk in R^d: dyadic-rational increments and partial sums."""

    d: int
    n: int
    increments: Tuple[Vector, ...]
    sums: Tuple[Vector, ...]
    redraws: int = 0


def generate_walk(d: int, n: int, rng: np.random.Generator) -> WalkSample:
    """Draw Gaussian increments, promote to exact dyadics, form partial sums.

    Samples whose partial-sum matrix is rank deficient (an exact-rational
    event of essentially zero probability) are redrawn and counted.
    """
    if d < 1 or n < 1:
        raise InvalidParameter(f"need d >= 1 and n >= 1, got d={d}, n={n}")
    if n > _MAX_WALK_N:
        raise CapacityExceeded(f"n={n} exceeds the Monte Carlo walk cap {_MAX_WALK_N}")
    redraws = 0
    while True:
        steps = rng.standard_normal((n, d))
        increments = tuple(tuple(Fraction(float(v)) for v in row) for row in steps)
        sums: List[Vector] = []
        acc = [Fraction(0)] * d
        for inc in increments:
            acc = [a + b for a, b in zip(acc, inc)]
            sums.append(tuple(acc))
        if _rank(sums) == min(n, d):
            return WalkSample(d, n, increments, tuple(sums), redraws)
        redraws += 1
        if redraws > _MAX_REDRAWS:
            raise DegenerateSample("persistent rank deficiency in walk generation")


def face_certificate(sample: WalkSample, subset: Iterable[int]) -> Optional[List[Fraction]]:
    """Supporting functional for the candidate face, or None.

    When pos{S_i : i in A} is a face, returns an exact u with u.S_i = 0 for
    i in A and u.S_j <= -1 off A; callers can re-verify those constraints in
    rational arithmetic.  None when the subset is dependent (dimension
    condition fails) or no supporting hyperplane exists.
    """
    a = sorted(set(subset))
    k = len(a)
    if not 1 <= k <= sample.d - 1:
        raise InvalidParameter(f"face dimension must lie in [1, d-1], got {k}")
    if any(i < 0 or i >= sample.n for i in a):
        raise InvalidParameter(f"subset {a} out of range for n={sample.n}")
    chosen = [sample.sums[i] for i in a]
    if _rank(chosen) < k:
        return None
    rest = [sample.sums[j] for j in range(sample.n) if j not in set(a)]
    result = solve_lp(
        [0] * sample.d,
        a_ub=rest,
        b_ub=[-1] * len(rest),
        a_eq=chosen,
        b_eq=[0] * k,
    )
    return result.x if result.status == OPTIMAL else None


def is_k_face(sample: WalkSample, subset: Iterable[int]) -> bool:
    """Does pos{S_i : i in A} span a k-dimensional face of the cone?

    True iff the subset is linearly independent (else the dimension condition
    fails) and some u satisfies u.S_i = 0 on A and u.S_j <= -1 off A.
    """
    return face_certificate(sample, subset) is not None


def is_pointed(sample: WalkSample) -> bool:
    """Pointedness: some u has u.S_i <= -1 for every generator."""
    result = solve_lp(
        [0] * sample.d, a_ub=list(sample.sums), b_ub=[-1] * sample.n
    )
    return result.status == OPTIMAL


def classify_cone(sample: WalkSample) -> ConeClass:
    """Three-way classification: pointed / proper but not pointed / all of R^d.

    The cone is all of R^d iff its dual {u : u.S_i <= 0} is {0}, decided by
    maximizing each +-coordinate of u over the dual intersected with a box.
    """
    if is_pointed(sample):
        return ConeClass.POINTED
    box = []
    rhs = []
    for j in range(sample.d):
        e = [Fraction(0)] * sample.d
        e[j] = Fraction(1)
        box.append(list(e)); rhs.append(Fraction(1))
        box.append([-v for v in e]); rhs.append(Fraction(1))
    a_ub = list(sample.sums) + box
    b_ub = [Fraction(0)] * sample.n + rhs
    for j in range(sample.d):
        for sign in (1, -1):
            c = [0] * sample.d
            c[j] = sign
            res = solve_lp(c, a_ub=a_ub, b_ub=b_ub)
            assert res.status == OPTIMAL  # the box makes the dual bounded
            if res.objective != 0:
                return ConeClass.PROPER_NOT_POINTED
    return ConeClass.FULL_SPACE


def count_faces(sample: WalkSample, k: int) -> int:
    """Number of k-dimensional faces of the sample cone, by exhaustive LP.

    k = 0 is the pointedness indicator; 1 <= k <= d-1 enumerates all
    binom(n, k) generator subsets (guarded).
    """
    if k == 0:
        return 1 if is_pointed(sample) else 0
    if not 1 <= k <= sample.d - 1:
        raise InvalidParameter(f"k must lie in [0, d-1], got k={k}, d={sample.d}")
    if math.comb(sample.n, k) > _ENUMERATION_CAP:
        raise CapacityExceeded(
            f"binom({sample.n},{k}) = {math.comb(sample.n, k)} subsets exceed the cap"
        )
    return sum(
        1 for a in itertools.combinations(range(sample.n), k) if is_k_face(sample, a)
    )


@dataclass(frozen=True)
class MCEstimate:
    """Sample mean and standard error of a Monte Carlo run."""

    d: int
    n: int
    k: int
    trials: int
    seed: int
    mean: float
    stderr: float
    rejects: int
    elapsed_ms: float

    def to_json_dict(self, *, include_elapsed: bool = True) -> dict:
        record = {
            "d": self.d,
            "n": self.n,
            "k": self.k,
            "trials": self.trials,
            "seed": self.seed,
            "mean": self.mean,
            "stderr": self.stderr,
            "rejects": self.rejects,
        }
        if include_elapsed:
            record["elapsed_ms"] = self.elapsed_ms
        return record


def estimate_expected_faces(d: int, n: int, k: int, trials: int, seed: int) -> MCEstimate:
    """Mean face count over independent walks; deterministic given seed.

    Per-trial generators are derived from (seed, trial_index), so the result
    is independent of execution order and trivially parallelizable.
    """
    if trials < 1:
        raise InvalidParameter(f"trials must be >= 1, got {trials}")
    t0 = time.perf_counter()
    total = 0
    total_sq = 0
    rejects = 0
    for t in range(trials):
        sample = generate_walk(d, n, np.random.default_rng((seed, t)))
        rejects += sample.redraws
        f = count_faces(sample, k)
        total += f
        total_sq += f * f
    mean = total / trials
    var = (total_sq - trials * mean * mean) / (trials - 1) if trials > 1 else 0.0
    stderr = math.sqrt(max(var, 0.0) / trials)
    elapsed = (time.perf_counter() - t0) * 1000.0
    return MCEstimate(d, n, k, trials, seed, mean, stderr, rejects, elapsed)


# -- monotone-signal recovery ---------------------------------------------------

@dataclass(frozen=True)
class RecoveryInstance:
    """A k-jump monotone signal and a Gaussian measurement matrix.

    The signal is x_m = sum_l a_l [i_l >= m]: nonincreasing, nonnegative,
    with jumps exactly at the chosen positions.
    """

    d: int
    n: int
    k: int
    jump_positions: Tuple[int, ...]  # 1-based, strictly increasing
    amplitudes: Tuple[Fraction, ...]
    matrix: Tuple[Vector, ...]  # d rows of n dyadic rationals

    @property
    def signal(self) -> Vector:
        return tuple(
            sum(
                (a for a, i in zip(self.amplitudes, self.jump_positions) if i >= m),
                Fraction(0),
            )
            for m in range(1, self.n + 1)
        )

    def with_amplitudes(self, amplitudes: Sequence[Fraction]) -> "RecoveryInstance":
        if len(amplitudes) != self.k or any(a <= 0 for a in amplitudes):
            raise InvalidParameter("need exactly k positive amplitudes")
        return RecoveryInstance(
            self.d, self.n, self.k, self.jump_positions, tuple(amplitudes), self.matrix
        )


def make_recovery_instance(
    d: int,
    n: int,
    k: int,
    rng: np.random.Generator,
    amplitude_rule: str = "ones",
) -> RecoveryInstance:
    """Uniform jump positions, amplitudes by rule ("ones" or "uniform"),
    Gaussian measurement matrix promoted to dyadic rationals."""
    if not 0 <= k <= d <= n:
        raise InvalidParameter(f"need 0 <= k <= d <= n, got k={k}, d={d}, n={n}")
    positions = tuple(sorted(int(v) + 1 for v in rng.choice(n, size=k, replace=False)))
    if amplitude_rule == "ones":
        amplitudes = tuple(Fraction(1) for _ in range(k))
    elif amplitude_rule == "uniform":
        amplitudes = tuple(Fraction(float(1.0 - rng.random())) for _ in range(k))
    else:
        raise InvalidParameter(f"unknown amplitude rule {amplitude_rule!r}")
    matrix = tuple(
        tuple(Fraction(float(v)) for v in row) for row in rng.standard_normal((d, n))
    )
    return RecoveryInstance(d, n, k, positions, amplitudes, matrix)


def _kernel_basis(matrix: Sequence[Vector], n: int) -> Optional[List[List[Fraction]]]:
    """Basis of ker(G) for a d x n matrix of full row rank; None if deficient."""
    d = len(matrix)
    m = [list(row) for row in matrix]
    pivots: List[int] = []
    rank = 0
    for col in range(n):
        piv = next((i for i in range(rank, d) if m[i][col] != 0), None)
        if piv is None:
            continue
        m[rank], m[piv] = m[piv], m[rank]
        inv = Fraction(1) / m[rank][col]
        m[rank] = [v * inv for v in m[rank]]
        for i in range(d):
            if i != rank and m[i][col] != 0:
                f = m[i][col]
                m[i] = [a - f * b for a, b in zip(m[i], m[rank])]
        pivots.append(col)
        rank += 1
        if rank == d:
            break
    if rank < d:
        return None
    free = [c for c in range(n) if c not in pivots]
    basis = []
    for fc in free:
        v = [Fraction(0)] * n
        v[fc] = Fraction(1)
        for i, pc in enumerate(pivots):
            v[pc] = -m[i][fc]
        basis.append(v)
    return basis


def is_unique_recovery(inst: RecoveryInstance) -> bool:
    """Is x the only point of the monotone chamber in x + ker(G)?

    Decided by 2 dim(ker G) exact LPs maximizing each +-kernel coordinate
    over K = {w : x + N w stays monotone nonnegative}; K = {0} iff all these
    maxima are 0, with unboundedness counting as non-uniqueness.
    """
    basis = _kernel_basis(inst.matrix, inst.n)
    if basis is None:
        raise DegenerateSample("measurement matrix is not of full row rank")
    m = len(basis)
    if m == 0:
        return True
    x = inst.signal
    n = inst.n
    a_ub: List[List[Fraction]] = []
    b_ub: List[Fraction] = []
    for i in range(n - 1):
        a_ub.append([basis[l][i + 1] - basis[l][i] for l in range(m)])
        b_ub.append(x[i] - x[i + 1])
    a_ub.append([-basis[l][n - 1] for l in range(m)])
    b_ub.append(x[n - 1])
    for l in range(m):
        for sign in (1, -1):
            c = [0] * m
            c[l] = sign
            result = solve_lp(c, a_ub=a_ub, b_ub=b_ub)
            if result.status == UNBOUNDED:
                return False
            assert result.status == OPTIMAL  # w = 0 is always feasible
            if result.objective != 0:
                return False
    return True


def estimate_recovery_probability(
    d: int,
    n: int,
    k: int,
    trials: int,
    seed: int,
    amplitude_rule: str = "ones",
) -> MCEstimate:
    """Fraction of trials with unique recovery; deterministic given seed.

    The uniqueness event depends only on the face of the monotone chamber
    containing the signal, hence not on the amplitudes; the default rule
    draws them all equal to 1 and the invariance is covered by tests.
    """
    if trials < 1:
        raise InvalidParameter(f"trials must be >= 1, got {trials}")
    t0 = time.perf_counter()
    successes = 0
    rejects = 0
    for t in range(trials):
        rng = np.random.default_rng((seed, t))
        attempts = 0
        while True:
            try:
                inst = make_recovery_instance(d, n, k, rng, amplitude_rule)
                unique = is_unique_recovery(inst)
                break
            except DegenerateSample:
                rejects += 1
                attempts += 1
                if attempts > _MAX_REDRAWS:
                    raise
        successes += unique
    p_hat = successes / trials
    stderr = math.sqrt(p_hat * (1.0 - p_hat) / trials)
    elapsed = (time.perf_counter() - t0) * 1000.0
    return MCEstimate(d, n, k, trials, seed, p_hat, stderr, rejects, elapsed)
