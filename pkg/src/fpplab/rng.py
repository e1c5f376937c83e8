"""Counter-based deterministic random numbers.

Weights, replication seeds and bit strings are all derived by hashing
(seed, counter...) tuples with the SplitMix64 finalizer.  There is no
sequential stream state anywhere: the value attached to a key never depends
on evaluation order, which is what makes re-querying weights under edge
overrides and multi-worker runs reproducible.

The scalar and the numpy-vectorized paths implement the same arithmetic
and return bitwise-identical results.
"""

from __future__ import annotations

import numpy as np

_MASK = 0xFFFFFFFFFFFFFFFF
_GAMMA = 0x9E3779B97F4A7C15
_MIX1 = 0xBF58476D1CE4E5B9
_MIX2 = 0x94D049BB133111EB

_U_GAMMA = np.uint64(_GAMMA)
_U_MIX1 = np.uint64(_MIX1)
_U_MIX2 = np.uint64(_MIX2)
_U30 = np.uint64(30)
_U27 = np.uint64(27)
_U31 = np.uint64(31)
_U11 = np.uint64(11)


def mix64(h: int) -> int:
    """SplitMix64 finalizer on a 64-bit integer."""
    h &= _MASK
    h = ((h ^ (h >> 30)) * _MIX1) & _MASK
    h = ((h ^ (h >> 27)) * _MIX2) & _MASK
    return h ^ (h >> 31)


def hash_u64(seed: int, *counters: int) -> int:
    """Stateless hash of (seed, counters...) to a uint64.

    Counters may be negative (e.g. lattice coordinates); they are absorbed
    via their 64-bit two's complement.
    """
    h = mix64((seed & _MASK) ^ _GAMMA)
    for c in counters:
        h = mix64((h + _GAMMA + (c & _MASK)) & _MASK)
    return h


def uniform01(seed: int, *counters: int) -> float:
    """Deterministic uniform in the open interval (0, 1)."""
    z = hash_u64(seed, *counters)
    return ((z >> 11) + 0.5) * 2.0**-53


def hash_u64_array(seed: int, *counter_arrays) -> np.ndarray:
    """Vectorized hash_u64: counter arrays are broadcast together.

    Bitwise-identical to looping hash_u64 over the elements.
    """
    arrays = [np.asarray(a) for a in counter_arrays]
    shape = np.broadcast_shapes(*(a.shape for a in arrays)) if arrays else ()
    h0 = mix64((seed & _MASK) ^ _GAMMA)
    h = np.full(shape, h0, dtype=np.uint64)
    with np.errstate(over="ignore"):
        for a in arrays:
            c = a.astype(np.int64, copy=False).view(np.uint64) if a.dtype != np.uint64 else a
            h = h + _U_GAMMA + c
            h = (h ^ (h >> _U30)) * _U_MIX1
            h = (h ^ (h >> _U27)) * _U_MIX2
            h = h ^ (h >> _U31)
    return h


def uniform01_array(seed: int, *counter_arrays) -> np.ndarray:
    """Vectorized uniform01 over broadcast counter arrays."""
    z = hash_u64_array(seed, *counter_arrays)
    return ((z >> _U11).astype(np.float64) + 0.5) * 2.0**-53


def derive_seed(master_seed: int, *tags) -> int:
    """Derive a child seed from a master seed and a tag path.

    Tags may be ints or short strings (strings are absorbed bytewise), e.g.
    ``derive_seed(master, "variance", n, rep)`` for one replication.
    """
    h = mix64((master_seed & _MASK) ^ _GAMMA)
    for t in tags:
        if isinstance(t, str):
            for b in t.encode("utf-8"):
                h = mix64((h + _GAMMA + b) & _MASK)
        else:
            h = mix64((h + _GAMMA + (int(t) & _MASK)) & _MASK)
    return h
