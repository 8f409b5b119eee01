"""Transmittable classical information of the fingerprinting systems and the
crossover against classical fingerprinting."""
from __future__ import annotations

import math
from dataclasses import dataclass

from .codes import gv_rate, map_coherent_to_twophoton_distance, modified_gv_rate
from .errors import DomainError, NoCrossoverError

CONDITIONAL = "conditional"
AVERAGE = "average"

SEARCH_LO = 1e2
SEARCH_HI = 1e12
SEARCH_POINTS = 20

# I_class is the best known lower bound, not a proven achievable cost.
CLASSICAL_BOUND_IS_TIGHT = False


def log2_binomial(n: int, k: int) -> float:
    """``log2 C(n, k)`` via log-gamma."""
    if not 0 <= k <= n:
        raise DomainError(f"need 0 <= k <= n, got n={n}, k={k}")
    return (math.lgamma(n + 1) - math.lgamma(k + 1) - math.lgamma(n - k + 1)) / math.log(2)


def classical_bound(n: int, p_err: float) -> float:
    """Lower bound (bits) on the message length of classical fingerprinting
    without shared randomness. Not known to be achievable."""
    if n < 1:
        raise DomainError(f"n must be at least 1, got {n}")
    if not 0.0 < p_err < 0.25:
        raise DomainError(f"p_err must lie in (0, 1/4), got {p_err}")
    return (1.0 - 2.0 * math.sqrt(p_err)) * math.sqrt(n / (2.0 * math.log(2.0))) - 1.0


def two_photon_information(n2: int, m_seq: int) -> float:
    """Bits carried by at most ``n2`` photons in ``m_seq * n2`` modes.

    Equals ``log2[(n2+1)/(m n2) * C(n2 + m n2, n2 + 1)]``, which reduces to
    ``log2 C(n2 + m n2, n2)``.
    """
    if n2 < 1 or m_seq < 1:
        raise DomainError(f"need n2 >= 1 and m_seq >= 1, got {n2}, {m_seq}")
    return log2_binomial(n2 + m_seq * n2, n2)


def coherent_information(nbar: float, m_seq: int) -> float:
    """Bosonic-channel capacity for mean photon number ``nbar`` spread over
    ``m_seq`` modes."""
    if nbar < 0.0 or m_seq < 1:
        raise DomainError(f"need nbar >= 0 and m_seq >= 1, got {nbar}, {m_seq}")
    if nbar == 0.0:
        return 0.0
    # (n+m) log(n+m) - n log n - m log m, regrouped to avoid cancellation.
    return (nbar * math.log2(1.0 + m_seq / nbar)
            + m_seq * math.log2(1.0 + nbar / m_seq))


@dataclass(frozen=True)
class ProtocolOperatingPoint:
    n: int
    p_err_target: float
    delta_coh: float
    Delta_min: float
    nbar: float
    n2: int
    m: int
    M: int
    convention: str = CONDITIONAL


def _misid_target(p_err, convention):
    if convention == CONDITIONAL:
        return p_err
    if convention == AVERAGE:
        # Average error is half the conditional misidentification.
        return min(1.0, 2.0 * p_err)
    raise DomainError(f"unknown error convention {convention!r}")


def operating_point(n: int, p_err: float, delta_coh: float,
                    convention: str = CONDITIONAL) -> ProtocolOperatingPoint:
    """Photon budgets and sequence lengths meeting ``p_err`` for input length
    ``n`` with equal misidentification exponents in both protocols."""
    if n < 1:
        raise DomainError(f"n must be at least 1, got {n}")
    if not 0.0 < p_err < 1.0:
        raise DomainError(f"p_err must lie in (0, 1), got {p_err}")
    if not 0.0 < delta_coh < 0.5:
        raise DomainError(f"delta_coh must lie in (0, 1/2), got {delta_coh}")
    target = _misid_target(p_err, convention)
    Delta = map_coherent_to_twophoton_distance(delta_coh)
    neg_log = -math.log(target)
    nbar = neg_log / (2.0 * delta_coh)
    pc = 2.0 * Delta * (1.0 - Delta)
    n2 = math.ceil(neg_log / -math.log1p(-pc))
    m = int(math.floor(n / gv_rate(delta_coh) + 0.5))
    M = int(math.floor(n / modified_gv_rate(Delta) + 0.5))
    return ProtocolOperatingPoint(n, p_err, delta_coh, Delta, nbar, n2, m, M, convention)


@dataclass(frozen=True)
class InformationRow:
    n: int
    i_class: float
    i_s: float
    i_coh: float

    @property
    def ratio(self) -> float:
        return self.i_s / self.i_coh


def information_at(n: int, p_err: float, delta_coh: float,
                   convention: str = CONDITIONAL) -> InformationRow:
    op = operating_point(n, p_err, delta_coh, convention)
    return InformationRow(
        n,
        classical_bound(n, p_err),
        two_photon_information(max(op.n2, 1), op.M),
        coherent_information(op.nbar, op.m),
    )


@dataclass(frozen=True)
class Crossover:
    n_twophoton: int
    n_coherent: int


def _crossover(advantage, lo, hi, sig_figs):
    """Smallest ``n`` in ``[lo, hi]`` with ``advantage(n) < 0`` given a grid
    bracket; bisects in log space to ``sig_figs`` significant figures."""
    while hi / lo > 1.0 + 10.0 ** (-sig_figs):
        mid = math.sqrt(lo * hi)
        if advantage(int(round(mid))) < 0.0:
            hi = mid
        else:
            lo = mid
    return int(math.ceil(hi))


def crossover_length(p_err: float, delta_coh: float, convention: str = CONDITIONAL,
                     sig_figs: int = 3) -> Crossover:
    """Input lengths beyond which the quantum systems carry less information
    than the classical bound, for the two-photon and coherent protocols."""
    grid = [SEARCH_LO * (SEARCH_HI / SEARCH_LO) ** (i / (SEARCH_POINTS - 1))
            for i in range(SEARCH_POINTS)]

    def find(metric):
        def advantage(n):
            row = information_at(n, p_err, delta_coh, convention)
            return getattr(row, metric) - row.i_class

        prev = grid[0]
        if advantage(int(round(prev))) < 0.0:
            return int(round(prev))
        for x in grid[1:]:
            if advantage(int(round(x))) < 0.0:
                return _crossover(advantage, prev, x, sig_figs)
            prev = x
        raise NoCrossoverError(f"no crossover found for n <= {SEARCH_HI:.0e}")

    return Crossover(find("i_s"), find("i_coh"))
