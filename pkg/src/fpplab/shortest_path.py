"""Passage times, geodesics, Geo(x,y) and edge thresholds on weight fields.

The solver is plain label-setting (Dijkstra).  Three engines share one
interface, picked per field:

- finitely atomic laws whose dyadic-scaled integer weights keep every
  path sum below 2^52 run on scipy's compiled Dijkstra with float-exact
  integer arithmetic (ties are exact);
- other finitely atomic laws (or zero-weight edges) run a pure-Python
  Dijkstra on arbitrary-precision integers;
- continuous laws run on scipy floats, with tie tests at absolute
  tolerance 1e-12 relative to the passage time (ties have probability
  zero for continuous laws).

Geo(x,y) is the set of edges on every geodesic.  Its ground-truth test is
edge removal (removal strictly increases the passage time iff the edge is
in every geodesic); when all weights are positive the equivalent
geodesic-DAG path-counting certificate is used instead, which needs no
re-solves and keeps Monte Carlo runs within budget.
"""

from __future__ import annotations

import heapq
import math
from dataclasses import dataclass
from fractions import Fraction
from typing import Iterable, Sequence

import numpy as np
from scipy.sparse import csr_matrix
from scipy.sparse.csgraph import dijkstra as _csgraph_dijkstra

from .lattice import EdgeId, WeightField

_FLOAT_EXACT_LIMIT = 2.0**52


@dataclass
class GeodesicReport:
    tau: float
    one_path: list[EdgeId]
    candidate_edges: set[EdgeId]
    geo_intersection: set[EdgeId]


class _Solver:
    """Per-field solving context: engine choice, caches, adjacency."""

    def __init__(self, field: WeightField):
        self.field = field
        self.domain = field.domain
        self.weights = field.weights()
        self.active = self.weights < field.sentinel
        self.tail = self.domain.edge_tail
        self.head = self.domain.edge_head
        self._dist_cache: dict[int, np.ndarray | list] = {}
        self._adj = None
        self._configure()

    def _configure(self):
        law = self.field.law
        self.scale = 1
        self.int_weights = None  # per-edge python ints, int-big mode only
        self._engine_w = None
        active_w = self.weights[self.active]
        if law.is_finitely_atomic:
            # distinct weight values are few (atoms plus overrides); their
            # float denominators are powers of two, so scaling by the lcm
            # is an exact exponent shift
            values = [float(v) for v in np.unique(active_w)]
            fracs = {v: Fraction(v) for v in values}
            denom = max((f.denominator for f in fracs.values()), default=1)
            self.scale = denom
            ints = {v: int(f * denom) for v, f in fracs.items()}
            max_int = max(ints.values(), default=0)
            if max_int * max(1, active_w.size) + 1 < _FLOAT_EXACT_LIMIT:
                # every path sum stays below 2^52: float arithmetic is exact
                self.mode = "int-fast"
                self._engine_w = np.where(self.active,
                                          self.weights * float(denom), math.inf)
            else:
                self.mode = "int-big"
                self.int_weights = [
                    ints[float(w)] if a else None
                    for w, a in zip(self.weights.tolist(), self.active.tolist())
                ]
        elif active_w.size and active_w.min() == 0.0:
            # scipy csgraph cannot represent explicit zero-weight edges
            self.mode = "float-py"
        else:
            self.mode = "float"
        self.exact = self.mode in ("int-fast", "int-big")

    # tie tolerance: zero in exact modes, tau-relative in float modes
    def tol(self, tau: float) -> float:
        if self.exact:
            return 0.0
        return 1e-12 * max(1.0, abs(tau))

    def _solve_weights(self, exclude: int | None = None):
        """Edge weights in engine units, with removed edges masked out."""
        mask = self.active.copy()
        if exclude is not None:
            mask[exclude] = False
        if self.mode == "int-big":
            return self.int_weights, mask
        if self.mode == "int-fast":
            return self.engine_weights_array, mask
        return self.weights, mask

    def _graph(self, exclude: int | None):
        if exclude is None and getattr(self, "_graph_cache", None) is not None:
            return self._graph_cache
        w, mask = self._solve_weights(exclude)
        t, h, data = self.tail[mask], self.head[mask], np.asarray(w)[mask]
        n = self.domain.vertex_count
        g = csr_matrix((data, (t, h)), shape=(n, n))
        if exclude is None:
            self._graph_cache = g
        return g

    def _scipy_dist(self, source: int, exclude: int | None) -> np.ndarray:
        return _csgraph_dijkstra(self._graph(exclude), directed=False, indices=source)

    def _adjacency(self):
        if self._adj is None:
            adj = [[] for _ in range(self.domain.vertex_count)]
            for idx in range(self.domain.edge_count):
                t, h = int(self.tail[idx]), int(self.head[idx])
                adj[t].append((idx, h))
                adj[h].append((idx, t))
            self._adj = adj  # already edge-index sorted per vertex
        return self._adj

    def _python_dist(self, source: int, exclude: int | None):
        """Heap Dijkstra generic over int or float weights; inf = unreachable."""
        if self.mode == "int-big":
            wvals = self.int_weights
        else:
            wvals = self.weights
        adj = self._adjacency()
        dist = [math.inf] * self.domain.vertex_count
        dist[source] = 0
        heap = [(0, source)]
        settled = [False] * self.domain.vertex_count
        while heap:
            d, v = heapq.heappop(heap)
            if settled[v]:
                continue
            settled[v] = True
            for idx, u in adj[v]:
                if idx == exclude or not self.active[idx]:
                    continue
                w = wvals[idx]
                if w is None:
                    continue
                nd = d + w
                if nd < dist[u]:
                    dist[u] = nd
                    heapq.heappush(heap, (nd, u))
        return dist

    def dist(self, source: int, exclude: int | None = None):
        """Distance field in engine units (int mode values are scaled)."""
        if exclude is None and source in self._dist_cache:
            return self._dist_cache[source]
        if self.mode in ("int-fast", "float"):
            d = self._scipy_dist(source, exclude)
        else:
            d = self._python_dist(source, exclude)
        if exclude is None:
            self._dist_cache[source] = d
        return d

    def to_public(self, value) -> float:
        """Engine units -> weight units (divide out the dyadic scale)."""
        if value is None or (isinstance(value, float) and math.isinf(value)):
            return math.inf
        return float(value) / float(self.scale) if self.scale != 1 else float(value)

    def edge_weight_engine(self, idx: int):
        if self.mode == "int-big":
            w = self.int_weights[idx]
            return math.inf if w is None else w
        return self.engine_weights_array[idx]

    @property
    def engine_weights_array(self) -> np.ndarray:
        """Float engine weights for all edges; masked edges carry +inf."""
        if self._engine_w is None:
            if self.int_weights is not None:
                self._engine_w = np.array(
                    [float(iw) if iw is not None else math.inf for iw in self.int_weights]
                )
            else:
                self._engine_w = np.where(self.active, self.weights, math.inf)
        return self._engine_w

    @property
    def min_active_weight(self) -> float:
        m = getattr(self, "_min_w", None)
        if m is None:
            if self.mode == "int-big":
                m = float(min((iw for iw in self.int_weights if iw is not None),
                              default=math.inf))
            else:
                act = self.engine_weights_array[self.active]
                m = float(act.min()) if act.size else math.inf
            self._min_w = m
        return m


def _solver(field: WeightField) -> _Solver:
    s = getattr(field, "_solver_cache", None)
    if s is None:
        s = _Solver(field)
        field._solver_cache = s
    return s


def _vid(field: WeightField, v) -> int:
    return field.domain.vertex_id(v)


def passage_time(field: WeightField, x, y) -> float:
    """Minimal total edge weight over lattice paths from x to y.

    Exactly symmetric in (x, y): the solve always starts from the smaller
    vertex id, so both orders run the identical float computation.
    """
    s = _solver(field)
    xi, yi = sorted((_vid(field, x), _vid(field, y)))
    if xi == yi:
        return 0.0
    return s.to_public(s.dist(xi)[yi])


def passage_time_exact(field: WeightField, x, y) -> Fraction:
    """Exact passage time for finitely atomic laws."""
    s = _solver(field)
    if not s.exact:
        raise ValueError("exact passage time requires a finitely atomic law")
    xi, yi = sorted((_vid(field, x), _vid(field, y)))
    if xi == yi:
        return Fraction(0)
    d = s.dist(xi)[yi]
    if isinstance(d, float) and math.isinf(d):
        raise ValueError("no path between endpoints")
    return Fraction(int(d), s.scale)


def _tight_successors(s: _Solver, dy, v: int, tol: float):
    """Incident edges (ascending canonical index) that start a geodesic at v."""
    out = []
    dv = dy[v]
    for idx, u in s.domain.incident_edges(v):
        if not s.active[idx]:
            continue
        w = s.edge_weight_engine(idx)
        du = dy[u]
        if isinstance(du, float) and math.isinf(du):
            continue
        if abs((du + w) - dv) <= tol:
            out.append((idx, u))
    return out


def _geodesic_walk(field: WeightField, x, y) -> tuple[list[int], list[int]]:
    """Lexicographically smallest geodesic as (edge indices, vertex ids).

    Depth-first over tight edges in canonical order; the first simple
    tight path found is the lexicographic minimum.  Backtracking only
    occurs across zero-weight plateaus.
    """
    s = _solver(field)
    xi, yi = _vid(field, x), _vid(field, y)
    if xi == yi:
        return [], [xi]
    dy = s.dist(yi)
    d0 = dy[xi]
    if d0 is None or (isinstance(d0, float) and math.isinf(d0)):
        raise ValueError("no path between endpoints")
    tol = s.tol(s.to_public(d0))
    on_path = {xi}
    vertex_stack = [xi]
    edge_stack: list[int] = []
    iter_stack = [iter(_tight_successors(s, dy, xi, tol))]
    while vertex_stack[-1] != yi:
        try:
            idx, u = next(iter_stack[-1])
        except StopIteration:
            iter_stack.pop()
            on_path.discard(vertex_stack.pop())
            if not vertex_stack:
                raise RuntimeError("geodesic walk exhausted") from None
            edge_stack.pop()
            continue
        if u in on_path:
            continue
        on_path.add(u)
        vertex_stack.append(u)
        edge_stack.append(idx)
        iter_stack.append(iter(_tight_successors(s, dy, u, tol)))
    return edge_stack, vertex_stack


def some_geodesic(field: WeightField, x, y) -> list[EdgeId]:
    """One geodesic from x to y; ties resolved toward smaller edge ids."""
    edges, _ = _geodesic_walk(field, x, y)
    return [field.domain.edge_id(i) for i in edges]


def candidate_edge_indices(field: WeightField, x, y) -> np.ndarray:
    """Indices of edges lying on at least one geodesic from x to y."""
    s = _solver(field)
    xi, yi = _vid(field, x), _vid(field, y)
    dx = np.asarray(s.dist(xi), dtype=object if s.mode == "int-big" else None)
    dy = np.asarray(s.dist(yi), dtype=object if s.mode == "int-big" else None)
    if s.mode == "int-big":
        tau = s.dist(xi)[yi]
        if isinstance(tau, float) and math.isinf(tau):
            raise ValueError("no path between endpoints")
        out = []
        for idx in range(s.domain.edge_count):
            if not s.active[idx]:
                continue
            w = s.int_weights[idx]
            t, h = int(s.tail[idx]), int(s.head[idx])
            a, b, c, d = dx[t], dy[h], dx[h], dy[t]
            through = min(
                (a + w + b) if not _isinf(a) and not _isinf(b) else math.inf,
                (c + w + d) if not _isinf(c) and not _isinf(d) else math.inf,
            )
            if through == tau:
                out.append(idx)
        return np.array(out, dtype=np.int64)
    tau = float(dx[yi])
    if math.isinf(tau):
        raise ValueError("no path between endpoints")
    tol = s.tol(s.to_public(tau))
    w = s.engine_weights_array
    with np.errstate(invalid="ignore"):
        through = np.minimum(
            dx[s.tail] + w + dy[s.head],
            dx[s.head] + w + dy[s.tail],
        )
    mask = s.active & (through <= tau + tol)
    return np.flatnonzero(mask)


def _isinf(v) -> bool:
    return isinstance(v, float) and math.isinf(v)


def _geo_by_counting(s: _Solver, xi: int, yi: int, cand: Sequence[int]) -> list[int]:
    """Edges on every geodesic, by exact path counting on the geodesic DAG.

    Valid when all active weights are positive (the tight digraph is then
    acyclic).  An edge u->v is on every geodesic iff the number of
    geodesics through it, N_x(u) * N_y(v), equals the total count.
    """
    dx, dy = s.dist(xi), s.dist(yi)
    tau = dx[yi]
    tol = s.tol(s.to_public(tau))
    oriented = []
    verts = {xi, yi}
    for idx in cand:
        t, h = int(s.tail[idx]), int(s.head[idx])
        w = s.edge_weight_engine(idx)
        if not _isinf(dx[t]) and not _isinf(dy[h]) and abs((dx[t] + w + dy[h]) - tau) <= tol:
            u, v = t, h
        else:
            u, v = h, t
        oriented.append((idx, u, v))
        verts.add(u)
        verts.add(v)
    out_edges: dict[int, list] = {v: [] for v in verts}
    in_edges: dict[int, list] = {v: [] for v in verts}
    for idx, u, v in oriented:
        out_edges[u].append((idx, v))
        in_edges[v].append((idx, u))
    by_dx = sorted(verts, key=lambda v: dx[v])
    nx = {v: 0 for v in verts}
    nx[xi] = 1
    for v in by_dx:
        if v != xi:
            nx[v] = sum(nx[u] for _, u in in_edges[v])
    by_dy = sorted(verts, key=lambda v: dy[v])
    ny = {v: 0 for v in verts}
    ny[yi] = 1
    for v in by_dy:
        if v != yi:
            ny[v] = sum(ny[u] for _, u in out_edges[v])
    total = nx[yi]
    return [idx for idx, u, v in oriented if nx[u] * ny[v] == total]


def _geo_by_removal(s: _Solver, xi: int, yi: int, cand: Sequence[int]) -> list[int]:
    """Edges whose removal strictly increases the passage time."""
    tau = s.dist(xi)[yi]
    tol = s.tol(s.to_public(tau))
    out = []
    for idx in cand:
        d = s.dist(xi, exclude=int(idx))[yi]
        if _isinf(d) or d > tau + tol:
            out.append(int(idx))
    return out


def geo_intersection(field: WeightField, x, y, method: str = "auto") -> GeodesicReport:
    """Full geodesic report: tau, one geodesic, candidates, Geo(x,y)."""
    s = _solver(field)
    xi, yi = _vid(field, x), _vid(field, y)
    if xi == yi:
        return GeodesicReport(0.0, [], set(), set())
    cand = candidate_edge_indices(field, x, y)
    if method not in ("auto", "counting", "removal"):
        raise ValueError("method must be auto, counting or removal")
    if method == "auto":
        method = "counting" if s.min_active_weight > 0 else "removal"
    if method == "counting":
        geo = _geo_by_counting(s, xi, yi, cand)
    else:
        geo = _geo_by_removal(s, xi, yi, cand)
    edges, _ = _geodesic_walk(field, x, y)
    dom = field.domain
    return GeodesicReport(
        tau=s.to_public(s.dist(xi)[yi]),
        one_path=[dom.edge_id(i) for i in edges],
        candidate_edges={dom.edge_id(int(i)) for i in cand},
        geo_intersection={dom.edge_id(int(i)) for i in geo},
    )


def d_threshold(field: WeightField, z, e: EdgeId, x) -> float:
    """Weight threshold above which edge e leaves all geodesics z -> z+x.

    Returns B - A with B the z -> z+x distance avoiding e and A the best
    through-e connection cost (both endpoints' distance fields computed in
    the graph without e).  If removing e disconnects the endpoints the
    field sentinel is returned.
    """
    dom = field.domain
    z = tuple(z)
    target = tuple(c + dc for c, dc in zip(z, x))
    s = _solver(field)
    idx = dom.edge_index(e)
    zi, ti = dom.vertex_id(z), dom.vertex_id(target)
    dz = s.dist(zi, exclude=idx)
    dt = s.dist(ti, exclude=idx)
    b = dz[ti]
    if _isinf(b) or b is None:
        return field.sentinel
    u, v = int(dom.edge_tail[idx]), int(dom.edge_head[idx])
    if any(_isinf(val) for val in (dz[u], dz[v], dt[u], dt[v])):
        return field.sentinel
    a = min(dz[u] + dt[v], dz[v] + dt[u])
    return s.to_public(b - a)


def count_geo_edges_in_range(field: WeightField, x, y, lo: float, hi: float) -> int:
    """#{e in Geo(x,y) : t_e in [lo, hi)}."""
    if lo > hi:
        raise ValueError("range requires lo <= hi")
    report = geo_intersection(field, x, y)
    return sum(1 for e in report.geo_intersection if lo <= field.weight_of(e) < hi)


def count_first_geodesic_edges_in_range(field: WeightField, x, y, lo: float, hi: float) -> int:
    """Same count along the deterministic first geodesic."""
    if lo > hi:
        raise ValueError("range requires lo <= hi")
    return sum(1 for e in some_geodesic(field, x, y) if lo <= field.weight_of(e) < hi)


def max_intersection_with(field: WeightField, geodesics: Iterable[Sequence[EdgeId]],
                          edge_set: Iterable[EdgeId]) -> int:
    """max over the supplied geodesics of #(E and geodesic).

    A sampled lower-bound proxy for the maximum over all finite geodesics.
    """
    probe = set(edge_set)
    best = 0
    for path in geodesics:
        best = max(best, len(probe.intersection(path)))
    return best
