"""Pure numpy implementations of the hot kernels.

These mirror ``_kernels.pyx`` operation for operation so that both backends
return bit-identical results for the same inputs.
"""
import numpy as np

GOLDEN = np.uint64(0x9E3779B97F4A7C15)
_M1 = np.uint64(0xBF58476D1CE4E5B9)
_M2 = np.uint64(0x94D049BB133111EB)
_S30 = np.uint64(30)
_S27 = np.uint64(27)
_S31 = np.uint64(31)
_S11 = np.uint64(11)
_TWO_M53 = 2.0 ** -53

STRIDE = 9
BLOCK = 1 << 18


def _mix(z):
    z = (z ^ (z >> _S30)) * _M1
    z = (z ^ (z >> _S27)) * _M2
    return z ^ (z >> _S31)


def uniforms(key, counters):
    """Uniform doubles in [0, 1) for the given stream positions."""
    with np.errstate(over="ignore"):
        z = np.uint64(key) + (counters.astype(np.uint64) + np.uint64(1)) * GOLDEN
        return (_mix(z) >> _S11).astype(np.float64) * _TWO_M53


def _route_block(key, start, count, p1, p12, dark_cdf, w, pc):
    idx = np.arange(start, start + count, dtype=np.uint64)
    base = idx * np.uint64(STRIDE)
    u = [uniforms(key, base + np.uint64(s)) for s in range(STRIDE)]

    ka = np.where(u[0] < p1, 1, np.where(u[0] < p12, 2, 0)).astype(np.int64)
    kb = np.where(u[1] < p1, 1, np.where(u[1] < p12, 2, 0)).astype(np.int64)
    da = np.searchsorted(dark_cdf, u[2], side="left").astype(np.int64)
    db = np.searchsorted(dark_cdf, u[3], side="left").astype(np.int64)

    na = np.zeros(count, dtype=np.int64)
    nb = np.zeros(count, dtype=np.int64)

    pair = (ka == 1) & (kb == 1)
    indist = pair & (u[4] < w)
    coinc = indist & (u[5] < pc)
    bunch = indist & ~(u[5] < pc)
    na += coinc
    nb += coinc
    na += 2 * (bunch & (u[6] < 0.5))
    nb += 2 * (bunch & ~(u[6] < 0.5))
    dist = pair & ~(u[4] < w)
    for uu in (u[5], u[6]):
        na += dist & (uu < 0.5)
        nb += dist & ~(uu < 0.5)

    for k, uu in ((ka, u[7]), (kb, u[8])):
        single = ~pair & (k == 1)
        na += single & (uu < 0.5)
        nb += single & ~(uu < 0.5)
        double = ~pair & (k == 2)
        na += 2 * (double & (uu < 0.25))
        nb += 2 * (double & (uu >= 0.25) & (uu < 0.5))
        split = double & ~(uu < 0.5)
        na += split
        nb += split

    return ka, kb, na + da, nb + db


def mc_tally(key, start, count, p1, p12, dark_cdf, w, pc):
    """Return (coincidences, doubles on a, doubles on b) over a run range."""
    coinc = da = db = 0
    for s in range(start, start + count, BLOCK):
        n = min(BLOCK, start + count - s)
        _, _, ca, cb = _route_block(key, s, n, p1, p12, dark_cdf, w, pc)
        coinc += int(np.count_nonzero((ca >= 1) & (cb >= 1)))
        da += int(np.count_nonzero((ca >= 2) & (cb == 0)))
        db += int(np.count_nonzero((cb >= 2) & (ca == 0)))
    return coinc, da, db


def mc_outcomes(key, start, count, p1, p12, dark_cdf, w, pc):
    """Per-run arrays (k_a, k_b, clicks_a, clicks_b) as int8."""
    ka, kb, ca, cb = _route_block(key, start, count, p1, p12, dark_cdf, w, pc)
    return (ka.astype(np.int8), kb.astype(np.int8),
            ca.astype(np.int8), cb.astype(np.int8))


def min_weight(columns):
    """Minimum Hamming weight over all nonzero GF(2) combinations of columns.

    ``columns`` holds one codeword bitmask per input position.
    """
    words = np.zeros(1, dtype=np.uint64)
    for c in columns:
        words = np.concatenate([words, words ^ np.uint64(c)])
    return int(np.bitwise_count(words[1:]).min())
