"""Binary codewords, random linear codes and Gilbert-Varshamov rate bounds.

Bit strings are written most significant position first: position 0 is the
leftmost character of the text form. A generator row is an ``n``-bit mask in
which input position ``j`` sits at bit ``n - 1 - j``.
"""
from __future__ import annotations

import json
import math
from dataclasses import dataclass

import numpy as np

from . import kernels
from .errors import CodeConstructionError, DomainError, LengthMismatchError

MAX_CERTIFY_LENGTH = 24


@dataclass(frozen=True)
class Codeword:
    """Fixed-length binary sequence; bit ``1`` is the ``-`` phase."""

    bits: tuple[int, ...]

    def __post_init__(self):
        bits = tuple(int(b) for b in self.bits)
        if not bits:
            raise DomainError("codeword length must be at least 1")
        if any(b not in (0, 1) for b in bits):
            raise DomainError("codeword symbols must be 0 or 1")
        object.__setattr__(self, "bits", bits)

    @classmethod
    def from_string(cls, s: str) -> "Codeword":
        s = s.strip()
        if set(s) - {"0", "1"}:
            raise DomainError(f"not a binary string: {s!r}")
        return cls(tuple(int(ch) for ch in s))

    @property
    def length(self) -> int:
        return len(self.bits)

    def as_array(self) -> np.ndarray:
        return np.asarray(self.bits, dtype=np.uint8)

    def negated(self) -> "Codeword":
        return Codeword(tuple(1 - b for b in self.bits))

    def __str__(self):
        return "".join(map(str, self.bits))


def _check_lengths(a: Codeword, b: Codeword):
    if a.length != b.length:
        raise LengthMismatchError(
            f"incompatible codeword lengths: {a.length} != {b.length}")


def hamming_distance(a: Codeword, b: Codeword) -> int:
    _check_lengths(a, b)
    return int(np.count_nonzero(a.as_array() != b.as_array()))


def relative_distance(a: Codeword, b: Codeword) -> float:
    return hamming_distance(a, b) / a.length


def pad_length(m: int, delta_min: float) -> int:
    """Number of identical symbols appended by the extension, ``m*delta_min``
    rounded to nearest with ties going up."""
    return int(math.floor(m * delta_min + 0.5))


def extend_codeword(c: Codeword, delta_min: float) -> Codeword:
    """Append ``pad_length(m, delta_min)`` zeros.

    The shared block keeps bitwise-negated codewords away from relative
    distance 1, where two-photon interference cannot tell them from identical
    ones.
    """
    if not 0.0 < delta_min < 0.5:
        raise DomainError(f"delta_min must lie in (0, 1/2), got {delta_min}")
    return Codeword(c.bits + (0,) * pad_length(c.length, delta_min))


def extended_delta_min(delta_min: float) -> float:
    """Relative minimum distance after extension, ``delta/(1 + delta)``."""
    return delta_min / (1.0 + delta_min)


def binary_entropy(x: float) -> float:
    if not 0.0 <= x <= 1.0:
        raise DomainError(f"binary entropy argument must lie in [0, 1], got {x}")
    if x == 0.0 or x == 1.0:
        return 0.0
    return -x * math.log2(x) - (1.0 - x) * math.log2(1.0 - x)


def gv_rate(delta_min: float) -> float:
    """Asymptotic Gilbert-Varshamov rate ``1 - H2(delta_min)``."""
    if delta_min < 0.0:
        raise DomainError(f"delta_min must be nonnegative, got {delta_min}")
    if delta_min >= 0.5:
        raise DomainError("bound is valid for delta_min < 1/2")
    return 1.0 - binary_entropy(delta_min)


def modified_gv_rate(Delta_min: float) -> float:
    """Rate bound of the extended code as a function of its own distance."""
    if Delta_min < 0.0:
        raise DomainError(f"Delta_min must be nonnegative, got {Delta_min}")
    if Delta_min >= 1.0 / 3.0:
        raise DomainError("extended-code distance must satisfy Delta_min < 1/3")
    return (1.0 - Delta_min) * gv_rate(Delta_min / (1.0 - Delta_min))


def map_coherent_to_twophoton_distance(delta_coh: float) -> float:
    """Extended-code distance giving the same misidentification exponent
    per photon as a coherent-state code of distance ``delta_coh``.

    Evaluated as ``-x / (2 (1 + sqrt(1 + x)))`` with ``x = 2 expm1(-2 delta)``
    to avoid cancellation for small distances.
    """
    if delta_coh < 0.0:
        raise DomainError(f"delta_coh must be nonnegative, got {delta_coh}")
    x = 2.0 * math.expm1(-2.0 * delta_coh)
    if 1.0 + x < 0.0:
        raise DomainError(
            f"square-root argument negative: delta_coh={delta_coh} > ln(2)/2")
    return -x / (2.0 * (1.0 + math.sqrt(1.0 + x)))


def map_twophoton_to_coherent_distance(Delta_min: float) -> float:
    """Inverse of :func:`map_coherent_to_twophoton_distance`."""
    if not 0.0 <= Delta_min <= 0.5:
        raise DomainError(f"Delta_min must lie in [0, 1/2], got {Delta_min}")
    return -0.5 * math.log1p(-2.0 * Delta_min * (1.0 - Delta_min))


def overhead_ratio(delta_coh: float) -> float:
    """Codeword-length overhead ``M/m`` of the two-photon protocol at equal
    misidentification scaling."""
    if not 0.0 < delta_coh <= 0.25:
        raise DomainError(f"delta_coh must lie in (0, 0.25], got {delta_coh}")
    denom = modified_gv_rate(map_coherent_to_twophoton_distance(delta_coh))
    if denom <= 0.0:
        raise DomainError("rate bound vanishes")
    return gv_rate(delta_coh) / denom


@dataclass(frozen=True)
class DistanceProfile:
    delta_min: float
    Delta_min: float

    @classmethod
    def from_base(cls, delta_min: float) -> "DistanceProfile":
        return cls(delta_min, extended_delta_min(delta_min))


@dataclass(frozen=True)
class LinearCode:
    """Binary linear code ``x -> G x`` over GF(2).

    ``generator`` stores the ``m`` rows of the ``m x n`` generator matrix as
    ``n``-bit integers.
    """

    n: int
    m: int
    generator: tuple[int, ...]
    certified_min_distance: int | None = None

    def __post_init__(self):
        if not 1 <= self.n <= self.m:
            raise DomainError(f"need 1 <= n <= m, got n={self.n}, m={self.m}")
        if len(self.generator) != self.m:
            raise DomainError("generator must have m rows")
        if any(not 0 <= r < (1 << self.n) for r in self.generator):
            raise DomainError("generator rows must be n-bit masks")
        if gf2_rank(self.columns()) != self.n:
            raise CodeConstructionError("generator does not have full column rank")
        d = self.certified_min_distance
        if d is not None and self.m <= MAX_CERTIFY_LENGTH and d != minimum_distance(self):
            raise CodeConstructionError(f"certified_min_distance {d} is not the code's")

    def columns(self) -> list[int]:
        """Codeword bitmask for each unit input; position 0 is the top bit."""
        cols = []
        for j in range(self.n):
            bit = 1 << (self.n - 1 - j)
            c = 0
            for i, row in enumerate(self.generator):
                if row & bit:
                    c |= 1 << (self.m - 1 - i)
            cols.append(c)
        return cols

    def to_json(self) -> str:
        return json.dumps({
            "n": self.n,
            "m": self.m,
            "generator": list(self.generator),
            "certified_min_distance": self.certified_min_distance,
        })

    @classmethod
    def from_json(cls, text: str) -> "LinearCode":
        d = json.loads(text)
        return cls(int(d["n"]), int(d["m"]), tuple(int(r) for r in d["generator"]),
                   d.get("certified_min_distance"))

    @classmethod
    def identity(cls, n: int) -> "LinearCode":
        return certify(cls(n, n, tuple(1 << (n - 1 - i) for i in range(n))))


def gf2_rank(vectors) -> int:
    """Rank over GF(2) of integer bitmask vectors."""
    basis = []
    for v in vectors:
        for b in basis:
            v = min(v, v ^ b)
        if v:
            basis.append(v)
    return len(basis)


def minimum_distance(code: LinearCode) -> int:
    """Minimum weight over all ``2**n - 1`` nonzero codewords."""
    if code.m > MAX_CERTIFY_LENGTH:
        raise CodeConstructionError(
            f"exhaustive certification limited to m <= {MAX_CERTIFY_LENGTH}")
    return kernels.min_weight(np.array(code.columns(), dtype=np.uint64))


def certify(code: LinearCode) -> LinearCode:
    return LinearCode(code.n, code.m, code.generator, minimum_distance(code))


def generate_random_linear_code(n: int, m: int, seed: int, max_tries: int = 64) -> LinearCode:
    """Random full-rank ``m x n`` generator with an exhaustively certified
    minimum distance. Deterministic in ``seed``."""
    if not 1 <= n <= m:
        raise DomainError(f"need 1 <= n <= m, got n={n}, m={m}")
    if m > MAX_CERTIFY_LENGTH:
        raise CodeConstructionError(
            f"n={n}, m={m} too large for certification (m <= {MAX_CERTIFY_LENGTH})")
    rng = np.random.default_rng(seed)
    for _ in range(max_tries):
        rows = tuple(int(r) for r in rng.integers(0, 1 << n, size=m))
        try:
            code = LinearCode(n, m, rows)
        except CodeConstructionError:
            continue
        return certify(code)
    raise CodeConstructionError(f"no full-rank generator after {max_tries} tries")


def encode(code: LinearCode, x) -> Codeword:
    """GF(2) product of the generator with input bits ``x``."""
    if isinstance(x, str):
        x = Codeword.from_string(x).bits
    x = tuple(int(b) for b in x)
    if len(x) != code.n:
        raise LengthMismatchError(
            f"incompatible input length: {len(x)} != code.n={code.n}")
    value = int("".join(map(str, x)), 2)
    return Codeword(tuple((row & value).bit_count() & 1 for row in code.generator))


def all_codewords(code: LinearCode) -> list[Codeword]:
    """Every codeword, indexed by input value (small ``n`` only)."""
    return [encode(code, tuple(int(ch) for ch in format(v, f"0{code.n}b")))
            for v in range(1 << code.n)]


def worst_case_pair(Delta_min: float, length: int) -> tuple[Codeword, Codeword]:
    """Two codewords of the given length differing in ``round(length*Delta)``
    leading positions."""
    if not 0.0 <= Delta_min <= 0.5:
        raise DomainError(f"Delta_min must lie in [0, 1/2], got {Delta_min}")
    d = pad_length(length, Delta_min)
    a = Codeword((0,) * length)
    b = Codeword((1,) * d + (0,) * (length - d))
    return a, b
