"""Run-by-run simulation of the realistic two-photon protocol.

Each run draws from a counter-indexed SplitMix64 stream: the ``j``-th uniform
of run ``i`` is output number ``9*i + j`` of SplitMix64 seeded with the
mixed user seed. Tallies therefore depend only on ``(seed, run range)`` and
not on how runs are partitioned across workers.

Per-run routing
---------------
* one photon from each party: with probability ``w`` they interfere and give
  a coincidence with probability ``(1 - v**2)/2``, otherwise both leave by one
  random port; with probability ``1 - w`` each takes an independent random
  port.
* a lone photon takes a random port.
* two photons from one party split as ``{both a: 1/4, both b: 1/4, one each: 1/2}``.
* each detector adds Poisson(``p_d``) dark counts.
"""
from __future__ import annotations

import enum
import json
import math
import os
from concurrent.futures import ThreadPoolExecutor
from dataclasses import asdict, dataclass

import numpy as np

from . import kernels
from ._pykernels import STRIDE, uniforms
from .codes import Codeword
from .decision import TestOutcome, decide
from .errors import DomainError
from .imperfections import SourceParams, hypothesis_pair
from .interference import coincidence_probability, visibility

THREADS_ENV = "HOM_FINGERPRINT_THREADS"
PARTITION = 1 << 20
_MASK64 = (1 << 64) - 1


class Classification(enum.Enum):
    NO_TWO_CLICK = "NoTwoClick"
    COINCIDENCE = "Coincidence"
    DOUBLE_A = "DoubleA"
    DOUBLE_B = "DoubleB"


def classify(clicks_a: int, clicks_b: int) -> Classification:
    if clicks_a >= 1 and clicks_b >= 1:
        return Classification.COINCIDENCE
    if clicks_a >= 2:
        return Classification.DOUBLE_A
    if clicks_b >= 2:
        return Classification.DOUBLE_B
    return Classification.NO_TWO_CLICK


@dataclass(frozen=True)
class RunOutcome:
    clicks_a: int
    clicks_b: int
    classification: Classification


@dataclass(frozen=True)
class EventTally:
    n_runs: int
    n_coincidence: int
    n_double_a: int
    n_double_b: int

    @property
    def n_double(self) -> int:
        return self.n_double_a + self.n_double_b

    @property
    def n_two_click(self) -> int:
        return self.n_coincidence + self.n_double

    @property
    def coincidence_fraction(self) -> float:
        return self.n_coincidence / self.n_two_click if self.n_two_click else math.nan

    def __add__(self, other: "EventTally") -> "EventTally":
        return EventTally(self.n_runs + other.n_runs,
                          self.n_coincidence + other.n_coincidence,
                          self.n_double_a + other.n_double_a,
                          self.n_double_b + other.n_double_b)

    def to_dict(self) -> dict:
        d = asdict(self)
        d["n_double"] = self.n_double
        d["n_two_click"] = self.n_two_click
        return d


def stream_key(seed: int) -> int:
    """SplitMix64 state derived from a user seed."""
    if not 0 <= seed < 1 << 64:
        raise DomainError(f"seed must be a 64-bit nonnegative integer, got {seed}")
    z = (seed + 0x9E3779B97F4A7C15) & _MASK64
    z = ((z ^ (z >> 30)) * 0xBF58476D1CE4E5B9) & _MASK64
    z = ((z ^ (z >> 27)) * 0x94D049BB133111EB) & _MASK64
    return z ^ (z >> 31)


def dark_count_cdf(p_dark: float, max_terms: int = 64) -> np.ndarray:
    """Cumulative Poisson probabilities used for inversion sampling."""
    p = math.exp(-p_dark)
    cdf = [p]
    for k in range(1, max_terms):
        p *= p_dark / k
        nxt = cdf[-1] + p
        if nxt == cdf[-1]:
            break
        cdf.append(nxt)
    return np.array(cdf, dtype=np.float64)


@dataclass(frozen=True)
class _KernelArgs:
    key: int
    p1: float
    p12: float
    dark_cdf: np.ndarray
    w: float
    pc: float

    @classmethod
    def build(cls, p: SourceParams, v: float, seed: int) -> "_KernelArgs":
        return cls(stream_key(seed), p.p_one, p.p_one + p.p_two,
                   dark_count_cdf(p.p_dark), p.w, coincidence_probability(v))

    def args(self):
        return (self.p1, self.p12, self.dark_cdf, self.w, self.pc)


def _default_workers() -> int:
    env = os.environ.get(THREADS_ENV)
    return max(1, int(env)) if env else 1


def simulate_run(p: SourceParams, v: float, seed: int, index: int = 0) -> RunOutcome:
    """Outcome of run ``index`` of the stream selected by ``seed``."""
    ka_ = _KernelArgs.build(p, v, seed)
    _, _, ca, cb = kernels.mc_outcomes(ka_.key, index, 1, *ka_.args())
    a, b = int(ca[0]), int(cb[0])
    return RunOutcome(a, b, classify(a, b))


def simulate_outcomes(p: SourceParams, v: float, n_runs: int, seed: int, start: int = 0):
    """Per-run arrays ``(k_a, k_b, clicks_a, clicks_b)``, where ``k_a``/``k_b``
    are the numbers of photons detected from each party before dark counts."""
    ka_ = _KernelArgs.build(p, v, seed)
    return kernels.mc_outcomes(ka_.key, start, n_runs, *ka_.args())


def simulate_batch(p: SourceParams, v: float, n_runs: int, seed: int,
                   workers: int | None = None) -> EventTally:
    """Aggregate ``n_runs`` independent runs. The result does not depend on
    ``workers``."""
    if n_runs < 1:
        raise DomainError(f"n_runs must be at least 1, got {n_runs}")
    workers = _default_workers() if workers is None else max(1, int(workers))
    ka_ = _KernelArgs.build(p, v, seed)
    parts = [(s, min(PARTITION, n_runs - s)) for s in range(0, n_runs, PARTITION)]

    def run(part):
        c, da, db = kernels.mc_tally(ka_.key, part[0], part[1], *ka_.args())
        return EventTally(part[1], c, da, db)

    if workers == 1 or len(parts) == 1:
        results = map(run, parts)
    else:
        with ThreadPoolExecutor(max_workers=workers) as ex:
            results = list(ex.map(run, parts))
    total = EventTally(0, 0, 0, 0)
    for r in results:
        total = total + r
    return total


def batch_to_json(p: SourceParams, v: float, n_runs: int, seed: int,
                  tally: EventTally) -> str:
    return json.dumps({"params": p.to_dict(), "v": v, "n_runs": n_runs,
                       "seed": seed, "tally": tally.to_dict()}, sort_keys=True)


def simulate_protocol(code_a: Codeword, code_b: Codeword, p: SourceParams, n_runs: int,
                      seed: int, Delta_min: float, workers: int | None = None) -> TestOutcome:
    """Simulate one protocol execution and apply the optimal decision rule
    for the configured worst-case distance ``Delta_min``."""
    v = visibility(code_a, code_b)
    tally = simulate_batch(p, v, n_runs, seed, workers)
    return decide(tally.n_coincidence, tally.n_two_click, hypothesis_pair(p, Delta_min))


def reference_uniforms(seed: int, run: int) -> np.ndarray:
    """The ``STRIDE`` uniforms consumed by one run (for inspection and tests)."""
    counters = np.arange(run * STRIDE, (run + 1) * STRIDE, dtype=np.uint64)
    return uniforms(stream_key(seed), counters)
