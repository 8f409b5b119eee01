"""Ideal-protocol interference statistics."""
from __future__ import annotations

import math
from dataclasses import dataclass

import numpy as np

from .codes import Codeword, hamming_distance
from .errors import DomainError


def _check_visibility(v: float):
    if not -1.0 <= v <= 1.0:
        raise DomainError(f"visibility must lie in [-1, 1], got {v}")


def _check_nbar(nbar: float):
    if not nbar >= 0.0:
        raise DomainError(f"mean photon number must be nonnegative, got {nbar}")


def visibility(ex: Codeword, ey: Codeword) -> float:
    """Overlap of the two phase patterns, ``1 - 2 * relative distance``."""
    d = hamming_distance(ex, ey)
    return (ex.length - 2 * d) / ex.length


def visibility_direct(ex: Codeword, ey: Codeword) -> float:
    """``(1/m) sum_i (-1)**(ex_i + ey_i)`` summed term by term."""
    signs = (-1.0) ** (ex.as_array().astype(int) + ey.as_array().astype(int))
    return float(np.mean(signs))


def coincidence_probability(v: float) -> float:
    """Coincidence probability ``(1 - v**2) / 2`` for one photon per party."""
    _check_visibility(v)
    return 0.5 * (1.0 - v) * (1.0 + v)


def coherent_click_probability(nbar: float, v: float) -> float:
    """Probability of at least one count in the subtracting output port."""
    _check_nbar(nbar)
    _check_visibility(v)
    return -math.expm1(-nbar * (1.0 - v))


def misid_probability_coherent(nbar: float, delta_min: float) -> float:
    """Probability that strings at distance ``delta_min`` produce no click."""
    _check_nbar(nbar)
    if not 0.0 <= delta_min < 0.5:
        raise DomainError(f"delta_min must lie in [0, 1/2), got {delta_min}")
    return math.exp(-2.0 * nbar * delta_min)


def misid_probability_twophoton(n2: int, Delta_min: float) -> float:
    """Probability that ``n2`` detected pairs give no coincidence for strings
    at distance ``Delta_min``."""
    if n2 < 0:
        raise DomainError(f"n2 must be nonnegative, got {n2}")
    if not 0.0 <= Delta_min <= 0.5:
        raise DomainError(f"Delta_min must lie in [0, 1/2], got {Delta_min}")
    pc = 2.0 * Delta_min * (1.0 - Delta_min)
    return math.exp(n2 * math.log1p(-pc))


@dataclass(frozen=True)
class SplitDistribution:
    p_both_a: float
    p_both_b: float
    p_coincidence: float


def single_source_pair_split() -> SplitDistribution:
    """Output statistics for two photons entering one port in one mode.

    ``(a^dag)**2/sqrt(2)|0>`` maps to ``(c^dag + d^dag)**2 / (2 sqrt 2)|0>``,
    whose amplitudes for ``|2,0>``, ``|0,2>``, ``|1,1>`` are ``1/2``, ``1/2``
    and ``1/sqrt 2``.
    """
    return SplitDistribution(0.25, 0.25, 0.5)
