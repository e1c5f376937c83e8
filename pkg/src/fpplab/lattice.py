"""Finite boxes of Z^d with canonical edge order and seeded weight fields.

Vertices are integer tuples in [lo, hi]; the nearest-neighbor edges with
both endpoints inside the box are enumerated in lexicographic order of
(lower endpoint, axis), which is the global edge order used by the
martingale decomposition.  Weights are derived statelessly from
(master_seed, lower endpoint coordinates, axis), so a given edge carries
the same weight in any box and under any evaluation order.
"""

from __future__ import annotations

import math
from functools import cached_property
from typing import Iterable, Mapping

import numpy as np

from .distributions import EdgeWeightLaw
from .rng import uniform01, uniform01_array

EdgeId = tuple[tuple[int, ...], int]


class BoxDomain:
    """Axis-aligned box of Z^d, d in {2, 3}."""

    def __init__(self, lo: Iterable[int], hi: Iterable[int]):
        lo = tuple(int(c) for c in lo)
        hi = tuple(int(c) for c in hi)
        if len(lo) != len(hi) or len(lo) not in (2, 3):
            raise ValueError("box dimension must be 2 or 3")
        if any(a > b for a, b in zip(lo, hi)):
            raise ValueError("box requires lo <= hi componentwise")
        self.lo = lo
        self.hi = hi
        self.d = len(lo)
        self.shape = tuple(b - a + 1 for a, b in zip(lo, hi))
        self.vertex_count = int(np.prod(self.shape))

    def __repr__(self):
        return f"BoxDomain(lo={self.lo}, hi={self.hi})"

    def __eq__(self, other):
        return isinstance(other, BoxDomain) and (self.lo, self.hi) == (other.lo, other.hi)

    def __hash__(self):
        return hash((self.lo, self.hi))

    def contains(self, v: Iterable[int]) -> bool:
        v = tuple(v)
        return len(v) == self.d and all(a <= c <= b for c, a, b in zip(v, self.lo, self.hi))

    def vertex_id(self, v: Iterable[int]) -> int:
        v = tuple(int(c) for c in v)
        if not self.contains(v):
            raise ValueError(f"vertex {v} outside {self!r}")
        return int(np.ravel_multi_index(tuple(c - a for c, a in zip(v, self.lo)), self.shape))

    def vertex_tuple(self, vid: int) -> tuple[int, ...]:
        rel = np.unravel_index(vid, self.shape)
        return tuple(int(r + a) for r, a in zip(rel, self.lo))

    @cached_property
    def _edge_arrays(self) -> tuple[np.ndarray, np.ndarray, np.ndarray]:
        """(tail vid, head vid, axis), sorted by (tail, axis)."""
        vid = np.arange(self.vertex_count, dtype=np.int64).reshape(self.shape)
        tails, heads, axes = [], [], []
        for k in range(self.d):
            if self.shape[k] < 2:
                continue
            sl_lo = [slice(None)] * self.d
            sl_hi = [slice(None)] * self.d
            sl_lo[k] = slice(0, -1)
            sl_hi[k] = slice(1, None)
            t = vid[tuple(sl_lo)].ravel()
            tails.append(t)
            heads.append(vid[tuple(sl_hi)].ravel())
            axes.append(np.full(t.size, k, dtype=np.int64))
        if not tails:
            return (np.empty(0, np.int64),) * 3
        tail = np.concatenate(tails)
        head = np.concatenate(heads)
        axis = np.concatenate(axes)
        order = np.lexsort((axis, tail))
        return tail[order], head[order], axis[order]

    @property
    def edge_tail(self) -> np.ndarray:
        return self._edge_arrays[0]

    @property
    def edge_head(self) -> np.ndarray:
        return self._edge_arrays[1]

    @property
    def edge_axis(self) -> np.ndarray:
        return self._edge_arrays[2]

    @property
    def edge_count(self) -> int:
        return self.edge_tail.size

    @cached_property
    def _edge_offset(self) -> np.ndarray:
        """Exclusive prefix sum of per-vertex outgoing-edge counts."""
        counts = np.zeros(self.vertex_count, dtype=np.int64)
        np.add.at(counts, self.edge_tail, 1)
        return np.concatenate(([0], np.cumsum(counts)))

    def edge_index(self, e: EdgeId) -> int:
        """Canonical index of edge ((v), k) meaning {v, v + unit_k}."""
        v, k = e
        v = tuple(int(c) for c in v)
        if not 0 <= k < self.d:
            raise ValueError(f"axis {k} out of range")
        head = tuple(c + (1 if i == k else 0) for i, c in enumerate(v))
        if not (self.contains(v) and self.contains(head)):
            raise ValueError(f"edge {e} outside {self!r}")
        base = self._edge_offset[self.vertex_id(v)]
        rank = sum(1 for kk in range(k) if v[kk] < self.hi[kk])
        return int(base + rank)

    def edge_id(self, idx: int) -> EdgeId:
        """Canonical (lower endpoint, axis) form of edge #idx."""
        return (self.vertex_tuple(int(self.edge_tail[idx])), int(self.edge_axis[idx]))

    def canonical_edge(self, u: Iterable[int], v: Iterable[int]) -> EdgeId:
        """Canonicalize an unordered endpoint pair into (lower vertex, axis)."""
        u, v = tuple(u), tuple(v)
        diff = [b - a for a, b in zip(u, v)]
        if sorted(abs(c) for c in diff) != [0] * (self.d - 1) + [1]:
            raise ValueError(f"{u} and {v} are not lattice neighbors")
        k = next(i for i, c in enumerate(diff) if c != 0)
        return ((u, k) if diff[k] > 0 else (v, k))

    @cached_property
    def edge_tail_coords(self) -> np.ndarray:
        """(E, d) lower-endpoint coordinates, canonical order."""
        rel = np.unravel_index(self.edge_tail, self.shape)
        return np.stack([r + a for r, a in zip(rel, self.lo)], axis=1).astype(np.int64)

    @cached_property
    def _vertex_rel(self) -> np.ndarray:
        """(V, d) coordinates relative to lo."""
        rel = np.unravel_index(np.arange(self.vertex_count), self.shape)
        return np.stack(rel, axis=1).astype(np.int64)

    @cached_property
    def _axis_rank(self) -> np.ndarray:
        """(V, d) rank of axis k among the axes available at each vertex."""
        avail = self._vertex_rel < (np.array(self.shape) - 1)
        rank = np.zeros_like(self._vertex_rel)
        rank[:, 1:] = np.cumsum(avail[:, :-1], axis=1)
        return rank

    @cached_property
    def _strides(self) -> tuple:
        strides = [1] * self.d
        for k in range(self.d - 2, -1, -1):
            strides[k] = strides[k + 1] * self.shape[k + 1]
        return tuple(strides)

    def incident_edges(self, vid: int) -> list[tuple[int, int]]:
        """Incident (edge index, neighbor vid) pairs, ascending edge index."""
        rel = self._vertex_rel[vid]
        offset = self._edge_offset
        rank = self._axis_rank
        out = []
        for k in range(self.d):
            stride = self._strides[k]
            if rel[k] > 0:
                tail = vid - stride
                out.append((int(offset[tail] + rank[tail, k]), tail))
            if rel[k] < self.shape[k] - 1:
                out.append((int(offset[vid] + rank[vid, k]), vid + stride))
        out.sort()
        return out

    @cached_property
    def boundary_vertex_mask(self) -> np.ndarray:
        rel = np.unravel_index(np.arange(self.vertex_count), self.shape)
        mask = np.zeros(self.vertex_count, dtype=bool)
        for r, size in zip(rel, self.shape):
            mask |= (r == 0) | (r == size - 1)
        return mask


class WeightField:
    """Immutable weight assignment on a box: seeded base plus overrides.

    Weights are law.quantile(u_e) with u_e hashed from
    (master_seed, tail coordinates, axis).  ``with_override`` returns a
    derived field sharing the base array.  The removal sentinel is the
    total base weight plus one, precomputed on the root field and
    inherited by derived fields so that comparisons stay consistent
    across overrides.
    """

    def __init__(self, domain: BoxDomain, law: EdgeWeightLaw, master_seed: int,
                 overrides: Mapping[int, float] | None = None, _base=None, _sentinel=None):
        self.domain = domain
        self.law = law
        self.master_seed = int(master_seed)
        self._overrides = dict(overrides) if overrides else {}
        self._base = _base
        self._sentinel = _sentinel
        self._weights = None

    @property
    def base_weights(self) -> np.ndarray:
        if self._base is None:
            dom = self.domain
            coords = dom.edge_tail_coords
            u = uniform01_array(self.master_seed, *(coords[:, j] for j in range(dom.d)),
                                dom.edge_axis)
            w = self.law.quantile_array(u)
            w.setflags(write=False)
            self._base = w
        return self._base

    @property
    def sentinel(self) -> float:
        """Finite stand-in for +inf: exceeds any achievable path weight."""
        if self._sentinel is None:
            self._sentinel = float(np.sum(self.base_weights)) + 1.0
        return self._sentinel

    def weights(self) -> np.ndarray:
        """All edge weights in canonical order, overrides applied."""
        if self._weights is None:
            w = self.base_weights.copy()
            for idx, val in self._overrides.items():
                w[idx] = val
            w.setflags(write=False)
            self._weights = w
        return self._weights

    @property
    def overrides(self) -> dict[int, float]:
        return dict(self._overrides)

    def weight_of(self, e: EdgeId) -> float:
        idx = self.domain.edge_index(e)
        if idx in self._overrides:
            return self._overrides[idx]
        v, k = e
        return self.law.quantile(uniform01(self.master_seed, *v, k))

    def with_override(self, e: EdgeId, value: float) -> "WeightField":
        if not value >= 0.0:
            raise ValueError("override weight must be nonnegative")
        idx = self.domain.edge_index(e)
        new = dict(self._overrides)
        new[idx] = float(value)
        return WeightField(self.domain, self.law, self.master_seed, new,
                           _base=self.base_weights, _sentinel=self.sentinel)

    def without_edge(self, e: EdgeId) -> "WeightField":
        """Remove an edge by overriding it with the sentinel weight."""
        return self.with_override(e, self.sentinel)

    def is_removed(self, idx: int) -> bool:
        return self._overrides.get(idx, -math.inf) >= self.sentinel
