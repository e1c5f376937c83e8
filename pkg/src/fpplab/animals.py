"""Self-avoiding paths from the origin, greedy maxima, and box covers.

Exact quantities only: enumeration is budgeted (d=2 up to 14 steps, d=3 up
to 9), the maximum-open-edge count N_n uses depth-first branch and bound,
and Monte Carlo scaling runs reuse one precomputed path/edge incidence
matrix per (d, n) so each replication is a vectorized gather.
"""

from __future__ import annotations

import math
from dataclasses import dataclass
from typing import Callable, Iterable, Iterator, Mapping

import numpy as np

from .distributions import FiniteAtomic
from .lattice import BoxDomain, EdgeId, WeightField
from .rng import derive_seed, uniform01

SAW_BUDGET = {2: 14, 3: 9}
_MATRIX_PATH_LIMIT = 1_000_000


def _check_budget(d: int, n: int):
    if d not in SAW_BUDGET:
        raise ValueError("dimension must be 2 or 3")
    if not 1 <= n <= SAW_BUDGET[d]:
        raise ValueError(f"enumeration budget for d={d} is n <= {SAW_BUDGET[d]}")


def _steps(d: int):
    out = []
    for k in range(d):
        for s in (1, -1):
            out.append(tuple(s if i == k else 0 for i in range(d)))
    return out


def _edge_between(u: tuple, v: tuple) -> EdgeId:
    k = next(i for i, (a, b) in enumerate(zip(u, v)) if a != b)
    return (u, k) if v[k] > u[k] else (v, k)


def enumerate_saws(d: int, n: int) -> Iterator[tuple[EdgeId, ...]]:
    """Yield every n-step self-avoiding path from the origin exactly once.

    Paths are emitted as tuples of canonical edges (lower endpoint, axis),
    in depth-first order over the step directions.
    """
    _check_budget(d, n)
    steps = _steps(d)
    origin = (0,) * d
    path_edges: list[EdgeId] = []
    occupied = {origin}

    def rec(v: tuple) -> Iterator[tuple[EdgeId, ...]]:
        if len(path_edges) == n:
            yield tuple(path_edges)
            return
        for s in steps:
            u = tuple(a + b for a, b in zip(v, s))
            if u in occupied:
                continue
            occupied.add(u)
            path_edges.append(_edge_between(v, u))
            yield from rec(u)
            path_edges.pop()
            occupied.discard(u)

    yield from rec(origin)


def saw_count(d: int, n: int) -> int:
    return sum(1 for _ in enumerate_saws(d, n))


def _as_edge_fn(assignment) -> Callable[[EdgeId], float]:
    if isinstance(assignment, WeightField):
        return assignment.weight_of
    if isinstance(assignment, Mapping):
        return lambda e: assignment.get(e, 0)
    if callable(assignment):
        return assignment
    raise TypeError("edge assignment must be a field, mapping or callable")


def exact_Nn(d: int, n: int, bernoulli_field) -> int:
    """Maximum number of open edges over all n-step self-avoiding paths.

    Branch and bound: a branch is pruned when its open count plus the
    remaining steps cannot beat the incumbent; the search stops early once
    the incumbent reaches n (no path can exceed one open edge per step).
    """
    _check_budget(d, n)
    x_of = _as_edge_fn(bernoulli_field)
    steps = _steps(d)
    origin = (0,) * d
    occupied = {origin}
    best = 0

    def rec(v: tuple, taken: int, opened: int):
        nonlocal best
        if taken == n:
            if opened > best:
                best = opened
            return
        for s in steps:
            if best == n:
                return
            u = tuple(a + b for a, b in zip(v, s))
            if u in occupied:
                continue
            gain = 1 if x_of(_edge_between(v, u)) else 0
            if opened + gain + (n - taken - 1) < best:
                continue
            occupied.add(u)
            rec(u, taken + 1, opened + gain)
            occupied.discard(u)

    rec(origin, 0, 0)
    return best


def min_path_cost_below(d: int, n: int, weight_field, threshold: float,
                        weight_floor: float = 0.0) -> bool:
    """Whether some n-step self-avoiding path has total weight < threshold.

    Prunes branches whose current weight plus weight_floor per remaining
    step already reaches the threshold.
    """
    _check_budget(d, n)
    w_of = _as_edge_fn(weight_field)
    steps = _steps(d)
    origin = (0,) * d
    occupied = {origin}

    def rec(v: tuple, taken: int, cost: float) -> bool:
        if taken == n:
            return cost < threshold
        for s in steps:
            u = tuple(a + b for a, b in zip(v, s))
            if u in occupied:
                continue
            c = cost + w_of(_edge_between(v, u))
            if c + (n - taken - 1) * weight_floor >= threshold:
                continue
            occupied.add(u)
            hit = rec(u, taken + 1, c)
            occupied.discard(u)
            if hit:
                return True
        return False

    return rec(origin, 0, 0.0)


# --- Monte Carlo scaling of E N_n -------------------------------------------

_matrix_cache: dict[tuple[int, int], tuple[BoxDomain, np.ndarray]] = {}


def saw_edge_matrix(d: int, n: int) -> tuple[BoxDomain, np.ndarray]:
    """(box, matrix) with one row of canonical edge indices per n-step path."""
    key = (d, n)
    if key not in _matrix_cache:
        box = BoxDomain((-n,) * d, (n,) * d)
        rows = []
        for path in enumerate_saws(d, n):
            rows.append([box.edge_index(e) for e in path])
            if len(rows) > _MATRIX_PATH_LIMIT:
                raise MemoryError("path matrix would exceed the cache limit")
        _matrix_cache[key] = (box, np.asarray(rows, dtype=np.int64))
    return _matrix_cache[key]


def bernoulli_law(p: float) -> FiniteAtomic:
    if not 0.0 < p <= 1.0:
        raise ValueError("density p must lie in (0, 1]")
    if p == 1.0:
        return FiniteAtomic([1.0], [1.0])
    return FiniteAtomic([0.0, 1.0], [1.0 - p, p])


def scaling_ratio(d: int, n: int, p: float, reps: int, seed: int) -> tuple[float, float]:
    """Monte Carlo (mean, standard error) of N_n / (n p^(1/d)).

    Per-replication fields reuse the lattice counter generator with the
    two-point {0,1} law of density p, so results match exact_Nn on the
    same field.
    """
    _check_budget(d, n)
    if reps < 100:
        raise ValueError("at least 100 replications are required")
    law = bernoulli_law(p)
    box, matrix = saw_edge_matrix(d, n)
    denom = n * p ** (1.0 / d)
    values = np.empty(reps, dtype=np.float64)
    for rep in range(reps):
        field = WeightField(box, law, derive_seed(seed, "animals", d, n, rep))
        x = field.weights()
        values[rep] = x[matrix].sum(axis=1).max()
    ratios = values / denom
    se = float(ratios.std(ddof=1) / math.sqrt(reps)) if reps > 1 else 0.0
    return float(ratios.mean()), se


# --- animal covers -----------------------------------------------------------


@dataclass(frozen=True)
class AnimalCover:
    """Anchor sequence x_0 = 0, ..., x_r covering an animal by boxes.

    The animal is contained in the union of l*x_i + [-2l, 2l]^d, with
    r = floor(2n/l) and consecutive anchors at sup-distance at most 1.
    """

    l: int
    anchors: tuple


def animal_cover(animal: Iterable[tuple], l: int) -> AnimalCover:
    """Cover a lattice animal containing the origin by step-l checkpoints.

    Walks a spanning tree depth-first (each tree edge twice, a closed walk
    of exactly 2n steps for an animal of n+1 vertices) and records the
    componentwise floor of the walk position every l steps.
    """
    verts = {tuple(int(c) for c in v) for v in animal}
    if not verts:
        raise ValueError("animal must be non-empty")
    d = len(next(iter(verts)))
    origin = (0,) * d
    if origin not in verts:
        raise ValueError("animal must contain the origin")
    n = len(verts) - 1
    if not 1 <= l <= n:
        raise ValueError("require 1 <= l <= n (animal size minus one)")

    steps = _steps(d)
    children: dict[tuple, list] = {origin: []}
    order = [origin]
    seen = {origin}
    qi = 0
    while qi < len(order):
        v = order[qi]
        qi += 1
        for s in steps:
            u = tuple(a + b for a, b in zip(v, s))
            if u in verts and u not in seen:
                seen.add(u)
                children.setdefault(v, []).append(u)
                children.setdefault(u, [])
                order.append(u)
    if len(seen) != len(verts):
        raise ValueError("animal must be connected")

    walk = [origin]
    stack = [(origin, iter(children[origin]))]
    while stack:
        v, it = stack[-1]
        child = next(it, None)
        if child is None:
            stack.pop()
            if stack:
                walk.append(stack[-1][0])
        else:
            walk.append(child)
            stack.append((child, iter(children[child])))
    assert len(walk) == 2 * n + 1

    r = (2 * n) // l
    anchors = tuple(tuple(c // l for c in walk[i * l]) for i in range(r + 1))
    return AnimalCover(l=l, anchors=anchors)


def cover_invariants_ok(animal: Iterable[tuple], cover: AnimalCover) -> bool:
    """Check anchor count, unit sup-norm steps and box containment."""
    verts = {tuple(v) for v in animal}
    n = len(verts) - 1
    l = cover.l
    if len(cover.anchors) != (2 * n) // l + 1:
        return False
    if cover.anchors[0] != tuple(0 for _ in next(iter(verts))):
        return False
    for a, b in zip(cover.anchors, cover.anchors[1:]):
        if max(abs(x - y) for x, y in zip(a, b)) > 1:
            return False
    for v in verts:
        if not any(
            all(abs(c - l * a) <= 2 * l for c, a in zip(v, anchor))
            for anchor in cover.anchors
        ):
            return False
    return True


def random_animal(d: int, n_vertices: int, seed: int) -> set[tuple]:
    """Grow an animal from the origin by uniformly random edge additions."""
    if n_vertices < 1:
        raise ValueError("need at least one vertex")
    steps = _steps(d)
    verts = {(0,) * d}
    step_no = 0
    while len(verts) < n_vertices:
        frontier = sorted(
            {tuple(a + b for a, b in zip(v, s)) for v in verts for s in steps} - verts
        )
        u = uniform01(seed, step_no)
        verts.add(frontier[int(u * len(frontier))])
        step_no += 1
    return verts
