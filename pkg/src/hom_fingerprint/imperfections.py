"""Realistic-device model: loss, dark counts, multiphoton emission and
residual distinguishability, kept to leading order in ``(eta*nbar)**2``."""
from __future__ import annotations

import json
import warnings
from dataclasses import asdict, dataclass

from .errors import DomainError

VALIDITY_LIMIT = 0.1


class ModelValidityWarning(UserWarning):
    """Parameters outside the weak-signal regime the model assumes."""


@dataclass(frozen=True)
class SourceParams:
    """Per-party source, channel and detector parameters.

    Attributes
    ----------
    eta_nbar : float
        Probability that one photon from a party is detected in a run.
    g2 : float
        Normalized second-order correlation at zero delay.
    dark_ratio : float
        Mean dark counts per detector per run divided by ``eta_nbar``.
    w : float
        Fraction of photon pairs that interfere as indistinguishable.
    """

    eta_nbar: float
    g2: float = 0.0
    dark_ratio: float = 0.0
    w: float = 1.0

    def __post_init__(self):
        if self.eta_nbar < 0.0:
            raise DomainError(f"eta_nbar must be nonnegative, got {self.eta_nbar}")
        if self.g2 < 0.0:
            raise DomainError(f"g2 must be nonnegative, got {self.g2}")
        if self.dark_ratio < 0.0:
            raise DomainError(f"dark_ratio must be nonnegative, got {self.dark_ratio}")
        if not 0.0 <= self.w <= 1.0:
            raise DomainError(f"w must lie in [0, 1], got {self.w}")
        if self.p_one + self.p_two > 1.0:
            raise DomainError("emission probabilities exceed 1")
        for msg in self.validity_issues:
            warnings.warn(msg, ModelValidityWarning, stacklevel=3)

    @property
    def p_one(self) -> float:
        return self.eta_nbar

    @property
    def p_two(self) -> float:
        return 0.5 * self.eta_nbar ** 2 * self.g2

    @property
    def p_dark(self) -> float:
        return self.dark_ratio * self.eta_nbar

    @property
    def validity_issues(self) -> tuple[str, ...]:
        issues = []
        if self.eta_nbar * self.g2 > VALIDITY_LIMIT:
            issues.append(f"eta_nbar*g2 = {self.eta_nbar * self.g2:.3g} is not small")
        if self.dark_ratio > VALIDITY_LIMIT:
            issues.append(f"dark_ratio = {self.dark_ratio:.3g} is not small")
        return tuple(issues)

    def to_dict(self) -> dict:
        return asdict(self)

    def to_json(self) -> str:
        return json.dumps(self.to_dict())

    @classmethod
    def from_dict(cls, d: dict) -> "SourceParams":
        return cls(float(d["eta_nbar"]), float(d.get("g2", 0.0)),
                   float(d.get("dark_ratio", 0.0)), float(d.get("w", 1.0)))

    @classmethod
    def from_json(cls, text: str) -> "SourceParams":
        return cls.from_dict(json.loads(text))


@dataclass(frozen=True)
class HypothesisPair:
    """Coincidence fractions under different (D) and equal (E) inputs."""

    q_d: float
    q_e: float
    p2: float = 1.0

    def __post_init__(self):
        for name in ("q_d", "q_e", "p2"):
            val = getattr(self, name)
            if not 0.0 <= val <= 1.0:
                raise DomainError(f"{name} must lie in [0, 1], got {val}")


def emission_bracket(p: SourceParams) -> float:
    """``1 + g2 + 4 r + 2 r**2`` with ``r`` the dark ratio."""
    r = p.dark_ratio
    return 1.0 + p.g2 + 4.0 * r + 2.0 * r * r


def two_click_probability(p: SourceParams) -> float:
    return p.eta_nbar ** 2 * emission_bracket(p)


def effective_visibility(p: SourceParams, v: float) -> float:
    if not -1.0 <= v <= 1.0:
        raise DomainError(f"visibility must lie in [-1, 1], got {v}")
    return p.w * v * v / emission_bracket(p)


def coincidence_fraction(p: SourceParams, v: float) -> float:
    """Fraction of two-click events that are coincidences."""
    return 0.5 * (1.0 - effective_visibility(p, v))


def hypothesis_pair(p: SourceParams, Delta_min: float) -> HypothesisPair:
    """Worst-case different-input pair (visibility ``1 - 2 Delta``) against
    identical inputs (visibility 1)."""
    if not 0.0 <= Delta_min <= 0.5:
        raise DomainError(f"Delta_min must lie in [0, 1/2], got {Delta_min}")
    return HypothesisPair(
        q_d=coincidence_fraction(p, 1.0 - 2.0 * Delta_min),
        q_e=coincidence_fraction(p, 1.0),
        p2=two_click_probability(p),
    )
