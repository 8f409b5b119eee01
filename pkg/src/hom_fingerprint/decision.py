"""Minimum-error test between equal and different inputs from the number of
coincidences among the two-click events."""
from __future__ import annotations

import enum
import math
from dataclasses import dataclass

import numpy as np
from scipy import special

from .errors import DomainError
from .imperfections import HypothesisPair

DIRECT_SUM_LIMIT = 10_000


class Decision(enum.Enum):
    DIFFERENT = "Different"
    EQUAL = "Equal"


@dataclass(frozen=True)
class TestOutcome:
    decision: Decision
    n_c: int
    n2: int

    __test__ = False


def _check_counts(n_c, n2):
    if n2 < 0 or not 0 <= n_c <= n2:
        raise DomainError(f"need 0 <= n_c <= n2, got n_c={n_c}, n2={n2}")


def _check_q(q):
    if not 0.0 <= q <= 1.0:
        raise DomainError(f"probability must lie in [0, 1], got {q}")


def binomial_log_pmf(n2: int, q: float, n_c: int) -> float:
    """Log of the binomial pmf via log-gamma; ``-inf`` for impossible outcomes."""
    _check_counts(n_c, n2)
    _check_q(q)
    if q == 0.0:
        return 0.0 if n_c == 0 else -math.inf
    if q == 1.0:
        return 0.0 if n_c == n2 else -math.inf
    return (math.lgamma(n2 + 1) - math.lgamma(n_c + 1) - math.lgamma(n2 - n_c + 1)
            + n_c * math.log(q) + (n2 - n_c) * math.log1p(-q))


_LOG_FACTORIAL_CACHE = 1 << 20
_log_factorial = special.gammaln(np.arange(1, 2 + 10_000, dtype=float))


_counts = np.arange(_log_factorial.size, dtype=float)


def _factorial_table(n2: int):
    global _log_factorial, _counts
    if n2 >= _log_factorial.size and n2 < _LOG_FACTORIAL_CACHE:
        _counts = np.arange(2 * n2 + 1, dtype=float)
        _log_factorial = special.gammaln(_counts + 1.0)
    return _log_factorial if n2 < _log_factorial.size else None


def _count_range(lo: int, hi: int) -> np.ndarray:
    if hi < _counts.size:
        return _counts[lo:hi + 1]
    return np.arange(lo, hi + 1, dtype=float)


def log_binomial_coefficients(n2: int, n_c: np.ndarray) -> np.ndarray:
    """``log C(n2, n_c)`` elementwise from log-gamma values."""
    n_c = np.asarray(n_c).astype(np.int64)
    lf = _factorial_table(n2)
    if lf is not None:
        return lf[n2] - lf[n_c] - lf[n2 - n_c]
    return (special.gammaln(n2 + 1) - special.gammaln(n_c + 1)
            - special.gammaln(n2 - n_c + 1))


def _log_coefficient_range(n2: int, lo: int, hi: int) -> np.ndarray:
    """``log C(n2, k)`` for ``k = lo..hi``; same values as
    :func:`log_binomial_coefficients`, read from contiguous slices."""
    lf = _factorial_table(n2)
    if lf is None:
        return log_binomial_coefficients(n2, np.arange(lo, hi + 1))
    upper = lf[n2 - hi:n2 - lo + 1][::-1]
    return lf[n2] - lf[lo:hi + 1] - upper


def binomial_log_pmf_array(n2: int, q: float, n_c: np.ndarray,
                           log_coeff: np.ndarray | None = None) -> np.ndarray:
    """Vectorized :func:`binomial_log_pmf` over an array of counts.

    ``log_coeff`` may carry precomputed :func:`log_binomial_coefficients`.
    """
    _check_q(q)
    n_c = np.asarray(n_c)
    if log_coeff is None:
        log_coeff = log_binomial_coefficients(n2, n_c)
    if q == 0.0:
        return np.where(n_c == 0, 0.0, -np.inf)
    if q == 1.0:
        return np.where(n_c == n2, 0.0, -np.inf)
    log_fail = math.log1p(-q)
    return log_coeff + (n_c * (math.log(q) - log_fail) + n2 * log_fail)


def _logsumexp(x: np.ndarray) -> float:
    top = x.max()
    if not np.isfinite(top):
        return float(top)
    return float(top + np.log(np.exp(x - top).sum()))


def decide(n_c: int, n2: int, hp: HypothesisPair) -> TestOutcome:
    """Pick the hypothesis with the larger likelihood; ties go to Equal."""
    different = binomial_log_pmf(n2, hp.q_d, n_c) > binomial_log_pmf(n2, hp.q_e, n_c)
    return TestOutcome(Decision.DIFFERENT if different else Decision.EQUAL, n_c, n2)


def equal_region_threshold(n2: int, q_hi: float, q_lo: float) -> int:
    """Largest count at which ``Binom(n2, q_lo)`` is at least as likely as
    ``Binom(n2, q_hi)``, for ``q_lo < q_hi``; -1 if there is none.

    The log-likelihood ratio is affine and increasing in the count, so the
    two pmfs cross once.
    """
    if q_lo == 0.0:
        t = 0
    elif q_hi == 1.0:
        t = n2 - 1
    else:
        a = math.log(q_hi) - math.log(q_lo)
        b = math.log1p(-q_hi) - math.log1p(-q_lo)
        t = min(n2, max(-1, math.floor(-n2 * b / (a - b))))

    def equal_wins(k):
        return binomial_log_pmf(n2, q_hi, k) <= binomial_log_pmf(n2, q_lo, k)

    # Floating-point guard around an exact tie.
    while t >= 0 and not equal_wins(t):
        t -= 1
    while t + 1 <= n2 and equal_wins(t + 1):
        t += 1
    return t


def _log_tail(n2: int, q: float, lo: int, hi: int) -> float:
    """Log of ``P(lo <= N <= hi)`` for ``N ~ Binom(n2, q)``."""
    if lo > hi:
        return -math.inf
    if n2 > DIRECT_SUM_LIMIT and (lo == 0 or hi == n2):
        if lo == 0 and hi == n2:
            return 0.0
        # Regularized incomplete beta: P(N <= k) = I_{1-q}(n-k, k+1).
        if lo == 0:
            tail = special.betainc(n2 - hi, hi + 1, 1.0 - q)
        else:
            tail = special.betainc(lo, n2 - lo + 1, q)
        if tail > 1e-280:
            return math.log(tail)
        # Underflowed deep tail: sum in log space instead.
    k = _count_range(lo, hi)
    return _logsumexp(binomial_log_pmf_array(n2, q, k, _log_coefficient_range(n2, lo, hi)))


def log_exact_error_probability(n2: int, hp: HypothesisPair) -> float:
    """Natural log of :func:`exact_error_probability`; finite far below the
    double-precision underflow of the probability itself."""
    if n2 < 0:
        raise DomainError(f"n2 must be nonnegative, got {n2}")
    q_hi, q_lo = max(hp.q_d, hp.q_e), min(hp.q_d, hp.q_e)
    if q_hi == q_lo:
        return -math.log(2.0)
    t = equal_region_threshold(n2, q_hi, q_lo)
    # Up to t the high-q pmf is the smaller one, beyond t the low-q pmf.
    log_lower = _log_tail(n2, q_hi, 0, t)
    log_upper = _log_tail(n2, q_lo, t + 1, n2)
    return float(np.logaddexp(log_lower, log_upper)) - math.log(2.0)


def exact_error_probability(n2: int, hp: HypothesisPair) -> float:
    """Average error of the optimal rule with equiprobable hypotheses,
    ``(1/2) sum_k min(p_D(k), p_E(k))``, via the single crossing count."""
    return math.exp(log_exact_error_probability(n2, hp))


def _log_min_terms(n2, hp):
    k = _count_range(0, n2)
    lc = _log_coefficient_range(n2, 0, n2)
    return np.minimum(binomial_log_pmf_array(n2, hp.q_d, k, lc),
                      binomial_log_pmf_array(n2, hp.q_e, k, lc))


def direct_error_probability(n2: int, hp: HypothesisPair) -> float:
    """Term-by-term ``(1/2) sum_k min(p_D(k), p_E(k))``."""
    return 0.5 * float(np.exp(_log_min_terms(n2, hp)).sum())


def log_direct_error_probability(n2: int, hp: HypothesisPair) -> float:
    """Log of :func:`direct_error_probability`, summed in log space so that it
    stays exact where the probability is subnormal."""
    return _logsumexp(_log_min_terms(n2, hp)) - math.log(2.0)


def conditional_error_probabilities(n2: int, hp: HypothesisPair) -> tuple[float, float]:
    """``(P(decide Equal | D), P(decide Different | E))`` for the optimal rule."""
    if hp.q_d == hp.q_e:
        return 1.0, 0.0
    k = np.arange(n2 + 1)
    ld = binomial_log_pmf_array(n2, hp.q_d, k)
    le = binomial_log_pmf_array(n2, hp.q_e, k)
    diff = ld > le
    return float(np.exp(ld[~diff]).sum()), float(np.exp(le[diff]).sum())


def expected_two_click_count(p2: float, n_runs: float) -> int:
    """Mean number of two-click events rounded to the nearest integer."""
    return int(math.floor(p2 * n_runs + 0.5))
