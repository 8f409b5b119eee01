"""Chernoff information and the per-pair rescaled exponent."""
from __future__ import annotations

import math
from dataclasses import dataclass

import numpy as np

from .errors import DomainError
from .imperfections import (HypothesisPair, SourceParams, emission_bracket,
                            hypothesis_pair)

TERNARY_MAX_ITER = 200
TERNARY_TOL = 1e-12


@dataclass(frozen=True)
class ChernoffResult:
    c: float
    alpha_star: float
    objective_min: float


def _as_distribution(p, name) -> np.ndarray:
    p = np.asarray(p, dtype=float)
    if p.ndim != 1 or p.size == 0:
        raise DomainError(f"{name} must be a nonempty 1-d probability vector")
    if np.any(p < 0.0) or abs(p.sum() - 1.0) > 1e-9:
        raise DomainError(f"{name} is not a normalized probability vector")
    return p


def alpha_objective(p_d: np.ndarray, p_e: np.ndarray, alpha):
    """``sum_k p_D(k)**alpha * p_E(k)**(1-alpha)``.

    Terms where either probability vanishes are dropped, which is the limit
    from inside ``(0, 1)``; at the endpoints this gives the one-sided limits
    rather than the ``0**0 = 1`` value.
    """
    mask = (p_d > 0.0) & (p_e > 0.0)
    ld = np.log(p_d[mask])
    le = np.log(p_e[mask])
    alpha = np.asarray(alpha, dtype=float)
    return np.exp(np.multiply.outer(alpha, ld - le) + le).sum(axis=-1)


def ternary_minimize(f, lo=0.0, hi=1.0, tol=TERNARY_TOL, max_iter=TERNARY_MAX_ITER):
    """Minimizer of a unimodal function on ``[lo, hi]``."""
    ends = (lo, hi)
    for _ in range(max_iter):
        if hi - lo < tol:
            break
        m1 = lo + (hi - lo) / 3.0
        m2 = hi - (hi - lo) / 3.0
        if f(m1) <= f(m2):
            hi = m2
        else:
            lo = m1
    a = 0.5 * (lo + hi)
    # Optima sitting on an endpoint are otherwise only approached.
    return min((a, *ends), key=f)


def chernoff_information(p_d_dist, p_e_dist) -> ChernoffResult:
    """``C = -log min_alpha sum_k p_D**alpha p_E**(1-alpha)`` in nats."""
    p_d = _as_distribution(p_d_dist, "p_D")
    p_e = _as_distribution(p_e_dist, "p_E")
    if p_d.shape != p_e.shape:
        raise DomainError("distributions must have the same length")
    if np.array_equal(p_d, p_e):
        return ChernoffResult(0.0, 0.5, 1.0)
    def g(a):
        return float(alpha_objective(p_d, p_e, a))

    # log g is convex in alpha, so g itself is unimodal.
    a = ternary_minimize(g)
    gmin = min(g(a), 1.0)
    c = -math.log(gmin) if gmin > 0.0 else math.inf
    return ChernoffResult(max(c, 0.0), a, gmin)


def bernoulli_objective_min(q_d: float, q_e: float) -> tuple[float, float]:
    """``(min_alpha [Q_D^a Q_E^(1-a) + (1-Q_D)^a (1-Q_E)^(1-a)], argmin)``."""
    r = chernoff_information([q_d, 1.0 - q_d], [q_e, 1.0 - q_e])
    return r.objective_min, r.alpha_star


def two_click_chernoff(hp: HypothesisPair) -> ChernoffResult:
    """Chernoff information per run from coincidences and double counts."""
    gmin, a = bernoulli_objective_min(hp.q_d, hp.q_e)
    c = -math.log1p(-hp.p2 * (1.0 - gmin))
    return ChernoffResult(max(c, 0.0), a, 1.0 - hp.p2 * (1.0 - gmin))


def three_outcome_distributions(hp: HypothesisPair):
    """Per-run distributions over (coincidence, double count, neither)."""
    def dist(q):
        return [q * hp.p2, (1.0 - q) * hp.p2, 1.0 - hp.p2]
    return dist(hp.q_d), dist(hp.q_e)


def rescaled_chernoff_zeta(p: SourceParams, Delta_min: float) -> float:
    """Chernoff information per detected photon pair, to first order in the
    two-click probability. Independent of ``eta_nbar``."""
    hp = hypothesis_pair(p, Delta_min)
    gmin, _ = bernoulli_objective_min(hp.q_d, hp.q_e)
    return emission_bracket(p) * (1.0 - gmin)


def exact_zeta(p: SourceParams, Delta_min: float) -> float:
    """Full two-click Chernoff information divided by ``eta_nbar**2``."""
    if p.eta_nbar == 0.0:
        raise DomainError("eta_nbar must be positive")
    return two_click_chernoff(hypothesis_pair(p, Delta_min)).c / p.eta_nbar ** 2


def asymptotic_error(n_runs: float, eta_nbar: float, zeta: float) -> float:
    """Leading exponential form ``exp(-(eta_nbar)**2 N zeta)``."""
    if n_runs < 0 or eta_nbar < 0 or zeta < 0:
        raise DomainError("n_runs, eta_nbar and zeta must be nonnegative")
    return math.exp(-eta_nbar ** 2 * n_runs * zeta)
