"""Dyadic quantile encoding of edge-weight laws by Bernoulli bits.

A finite bit string w_1...w_J addresses the dyadic cell i = sum 2^(J-l) w_l
and is decoded to the level-J value a(i, J), where a(0, J) is the infimum
of the support and a(i, J) = quantile(i / 2^J) otherwise.  Decoding a fair
i.i.d. bit string therefore pushes forward to the law itself, up to the
2^-J cell resolution; the exhaustive and statistical checks below measure
exactly that.

Levels up to 20 can be materialized as full partition arrays; deeper
evaluation (depth <= 30) computes single cells on demand.
"""

from __future__ import annotations

from dataclasses import dataclass
from typing import Sequence

import numpy as np

from .distributions import EdgeWeightLaw
from .rng import hash_u64_array

MAX_DEPTH = 30
MAX_MATERIALIZED_LEVEL = 20


@dataclass(frozen=True)
class DyadicPartition:
    """Level-j partition values [a(0,j), ..., a(2^j - 1, j)]."""

    level: int
    values: np.ndarray


def _bits_to_index(bits: Sequence[int]) -> int:
    i = 0
    for b in bits:
        if b not in (0, 1):
            raise ValueError("bits must be 0 or 1")
        i = (i << 1) | b
    return i


def partition_level(law: EdgeWeightLaw, j: int) -> DyadicPartition:
    """Materialize the level-j dyadic partition.

    a(0,j) is the support infimum; a(i,j) = min{x : F(x) >= i/2^j} for
    i >= 1.  Guarded at j <= 20 to bound memory; use encode_eval for
    deeper cells.
    """
    if not 1 <= j <= MAX_MATERIALIZED_LEVEL:
        raise ValueError(f"partition level must lie in [1, {MAX_MATERIALIZED_LEVEL}]")
    i = np.arange(1, 2**j)
    values = np.empty(2**j, dtype=np.float64)
    values[0] = law.infimum
    values[1:] = law.quantile_array(i / 2.0**j)
    return DyadicPartition(level=j, values=values)


def encode_index(law: EdgeWeightLaw, index: int, depth: int) -> float:
    """Level-`depth` value of the cell with binary address `index`."""
    if not 1 <= depth <= MAX_DEPTH:
        raise ValueError(f"depth must lie in [1, {MAX_DEPTH}]")
    if not 0 <= index < 2**depth:
        raise ValueError("index out of range for depth")
    if index == 0:
        return float(law.infimum)
    return law.quantile(index / 2.0**depth)


def encode_indices(law: EdgeWeightLaw, indices: np.ndarray, depth: int) -> np.ndarray:
    """Vectorized encode_index over an integer array."""
    if not 1 <= depth <= MAX_DEPTH:
        raise ValueError(f"depth must lie in [1, {MAX_DEPTH}]")
    indices = np.asarray(indices, dtype=np.int64)
    out = np.full(indices.shape, float(law.infimum), dtype=np.float64)
    pos = indices > 0
    if pos.any():
        out[pos] = law.quantile_array(indices[pos] / 2.0**depth)
    return out


def encode_eval(law: EdgeWeightLaw, bits: Sequence[int]) -> float:
    """Decode a bit string to its level-J approximant, J = len(bits)."""
    return encode_index(law, _bits_to_index(bits), len(bits))


def bit_flip_pair(law: EdgeWeightLaw, bits: Sequence[int], j: int) -> tuple[float, float]:
    """(decode with bit j forced to 1, decode with bit j forced to 0).

    The first component dominates the second by monotonicity of the
    encoding.  j is 1-based, matching the bit positions of the address.
    """
    depth = len(bits)
    if not 1 <= j <= depth:
        raise ValueError("flip position out of range")
    index = _bits_to_index(bits)
    mask = 1 << (depth - j)
    return (
        encode_index(law, index | mask, depth),
        encode_index(law, index & ~mask, depth),
    )


def random_indices(depth: int, n: int, seed: int) -> np.ndarray:
    """n i.i.d. uniform cell addresses of `depth` bits (counter-keyed)."""
    z = hash_u64_array(seed, np.arange(n, dtype=np.int64))
    return (z >> np.uint64(64 - depth)).astype(np.int64)


def ks_distance(law: EdgeWeightLaw, samples: np.ndarray) -> float:
    """sup_x |F_n(x) - F(x)| including the jump points of both CDFs."""
    xs = np.sort(np.asarray(samples, dtype=np.float64))
    n = xs.size
    v, counts = np.unique(xs, return_counts=True)
    ecdf = np.cumsum(counts) / n
    ecdf_below = ecdf - counts / n
    f = law.cdf_array(v)
    f_below = law.cdf_array(np.nextafter(v, -np.inf))
    return float(
        max(np.abs(ecdf - f).max(), np.abs(ecdf_below - f_below).max())
    )


def verify_pushforward(law: EdgeWeightLaw, depth: int, n: int, seed: int) -> float:
    """KS distance between n decoded random bit strings and the law's CDF."""
    if n < 1000:
        raise ValueError("need at least 10^3 samples for the KS statistic")
    samples = encode_indices(law, random_indices(depth, n, seed), depth)
    return ks_distance(law, samples)


def ks_acceptance_band(depth: int, n: int) -> float:
    """99% KS band plus the 2^-(depth-1) truncation slack."""
    return 1.63 / np.sqrt(n) + 2.0 ** -(depth - 1)


# --- exhaustive finite-depth checks ----------------------------------------


def level_values(law: EdgeWeightLaw, depth: int) -> np.ndarray:
    """Decoded values of all 2^depth addresses (depth <= 20)."""
    if depth > MAX_MATERIALIZED_LEVEL:
        raise ValueError("exhaustive checks are limited to depth <= 20")
    return encode_indices(law, np.arange(2**depth, dtype=np.int64), depth)


def exhaustive_monotonicity_violations(law: EdgeWeightLaw, depth: int) -> int:
    """Count coordinatewise-comparable address pairs that break monotonicity."""
    vals = level_values(law, depth)
    idx = np.arange(2**depth, dtype=np.int64)
    comparable = (idx[:, None] & idx[None, :]) == idx[:, None]
    return int(np.count_nonzero(comparable & (vals[:, None] > vals[None, :])))


def exhaustive_nesting_violations(law: EdgeWeightLaw, depth: int) -> int:
    """Count (address, level) pairs violating the nesting sandwich.

    For each full-depth address and level j < depth with cell index
    i < 2^j - 1, the decoded value must lie in [a(i,j), a(i+1,j)].
    """
    vals = level_values(law, depth)
    idx = np.arange(2**depth, dtype=np.int64)
    bad = 0
    for j in range(1, depth):
        part = partition_level(law, j).values
        ij = idx >> (depth - j)
        applicable = ij < 2**j - 1
        lo = part[ij[applicable]]
        hi = part[ij[applicable] + 1]
        v = vals[applicable]
        bad += int(np.count_nonzero((v < lo) | (v > hi)))
    return bad


def level_monotonicity_violations(law: EdgeWeightLaw, depth: int) -> int:
    """Count addresses whose level-j values ever decrease as j grows."""
    idx = np.arange(2**depth, dtype=np.int64)
    prev = encode_indices(law, idx >> (depth - 1), 1)
    bad = 0
    for j in range(2, depth + 1):
        cur = encode_indices(law, idx >> (depth - j), j)
        bad += int(np.count_nonzero(cur < prev))
        prev = cur
    return bad


def exhaustive_pushforward_distance(law: EdgeWeightLaw, depth: int) -> float:
    """sup-norm distance between the level-depth pushforward CDF and F."""
    vals = level_values(law, depth)
    return ks_distance(law, vals)
