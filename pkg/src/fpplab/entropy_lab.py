"""Exact entropy, martingale and two-point inequality checks.

Everything here runs on fully enumerable finite product spaces, so the
entropy functional Ent X = E[X log X] - E[X] log E[X], its variational
characterization, tensorization, the Falik-Samorodnitsky lower bound, the
Bonami-Gross two-point inequality, the martingale-difference decomposition
of a passage time and the log-CDF partial-summation bound can all be
evaluated as exact identities, degraded only by float rounding.  Sums are
compensated (math.fsum).
"""

from __future__ import annotations

import heapq
import math
from dataclasses import dataclass, field
from typing import Callable, Sequence

import numpy as np

from .lattice import BoxDomain

CHECK_TOL = 1e-10
EXACT_TOL = 1e-12
MAX_ENV_EDGES = 16
MAX_ENV_ATOMS = 3
DEFAULT_CONFIG_BUDGET = 2**20


def _fsum(a: np.ndarray) -> float:
    return math.fsum(np.asarray(a, dtype=np.float64).ravel().tolist())


@dataclass(frozen=True)
class FiniteDist:
    """Finitely supported distribution with strictly positive weights."""

    outcomes: tuple
    probs: tuple

    def __init__(self, outcomes: Sequence[float], probs: Sequence[float]):
        outcomes = tuple(float(v) for v in outcomes)
        probs = tuple(float(p) for p in probs)
        if len(outcomes) != len(probs) or not outcomes:
            raise ValueError("outcomes and probs must be non-empty and equal length")
        if any(p <= 0.0 for p in probs):
            raise ValueError("probabilities must be positive")
        if abs(math.fsum(probs) - 1.0) > EXACT_TOL:
            raise ValueError("probabilities must sum to 1")
        object.__setattr__(self, "outcomes", outcomes)
        object.__setattr__(self, "probs", probs)

    def cdf_left(self, y: float) -> float:
        """F(y-) = total mass strictly below y."""
        return math.fsum(p for v, p in zip(self.outcomes, self.probs) if v < y)


def _xlogx(t) -> np.ndarray:
    t = np.asarray(t, dtype=np.float64)
    safe = np.where(t > 0.0, t, 1.0)
    return np.where(t > 0.0, t * np.log(safe), 0.0)


def entropy(values, probs) -> float:
    """Ent X = E[X log X] - E[X] log E[X] for X >= 0, with 0 log 0 = 0."""
    values = np.asarray(values, dtype=np.float64)
    probs = np.asarray(probs, dtype=np.float64)
    if np.any(values < 0.0):
        raise ValueError("entropy requires a nonnegative variable")
    mean = _fsum(values * probs)
    if mean <= 0.0:
        return 0.0
    return _fsum(_xlogx(values) * probs) - mean * math.log(mean)


def variational_check(x_values, y_values, probs) -> float:
    """Slack Ent(X) - E[XY] of the variational bound; feasible Y only.

    Feasibility is E e^Y <= 1 (tolerated to 1e-12).  A slack below
    -1e-10 raises: the bound is an identity-level property.
    """
    x = np.asarray(x_values, dtype=np.float64)
    y = np.asarray(y_values, dtype=np.float64)
    p = np.asarray(probs, dtype=np.float64)
    if np.any(x < 0.0):
        raise ValueError("X must be nonnegative")
    if _fsum(np.exp(y) * p) > 1.0 + EXACT_TOL:
        raise ValueError("infeasible Y: E e^Y exceeds 1")
    slack = entropy(x, p) - _fsum(x * y * p)
    if slack < -CHECK_TOL:
        raise ValueError(f"variational characterization violated: slack {slack}")
    return slack


def tensorization_check(probs_per_axis: Sequence[Sequence[float]], x: np.ndarray) -> tuple[float, float]:
    """(Ent X over the product, sum of expected coordinate entropies).

    x is a nonnegative array over the configuration grid, one axis per
    coordinate.  Raises if the subadditivity fails beyond 1e-10.
    """
    x = np.asarray(x, dtype=np.float64)
    if np.any(x < 0.0):
        raise ValueError("X must be nonnegative")
    plist = [np.asarray(p, dtype=np.float64) for p in probs_per_axis]
    if x.ndim != len(plist):
        raise ValueError("one probability vector per axis is required")
    joint = _joint_weights(plist)
    lhs = entropy(x.ravel(), joint.ravel())
    rhs = 0.0
    for i, p in enumerate(plist):
        xi = np.moveaxis(x, i, -1)
        wi = np.moveaxis(joint, i, -1)
        cond_mean = xi @ p
        ent_i = np.sum(_xlogx(xi) * p, axis=-1) - _xlogx(cond_mean)
        other_w = wi.sum(axis=-1)
        rhs += _fsum(ent_i * other_w)
    if lhs > rhs + CHECK_TOL:
        raise ValueError(f"tensorization violated: {lhs} > {rhs}")
    return lhs, rhs


def fs_lower_bound_check(x_values, probs) -> tuple[float, float]:
    """(Ent(X^2), E X^2 log(E X^2 / (E X)^2)) for X >= 0."""
    x = np.asarray(x_values, dtype=np.float64)
    p = np.asarray(probs, dtype=np.float64)
    if np.any(x < 0.0):
        raise ValueError("X must be nonnegative")
    ex = _fsum(x * p)
    ex2 = _fsum(x * x * p)
    lhs = entropy(x * x, p)
    rhs = 0.0 if ex2 <= 0.0 else ex2 * math.log(ex2 / ex**2)
    if lhs < rhs - CHECK_TOL:
        raise ValueError(f"FS lower bound violated: {lhs} < {rhs}")
    return lhs, rhs


def bonami_gross_check(f0: float, f1: float) -> tuple[float, float]:
    """(Ent f^2 under the fair two-point law, half squared increment)."""
    lhs = entropy(np.array([f0 * f0, f1 * f1]), np.array([0.5, 0.5]))
    rhs = 0.5 * (f1 - f0) ** 2
    if lhs > rhs + EXACT_TOL:
        raise ValueError(f"two-point entropy inequality violated: {lhs} > {rhs}")
    return lhs, rhs


def ibp_check(dist: FiniteDist, y: float) -> tuple[float, float]:
    """(-F(y-) log F(y-), -sum over atoms below y of log F(a) mu({a}))."""
    infimum = min(dist.outcomes)
    if not y > infimum:
        raise ValueError("threshold must exceed the support infimum")
    fm = dist.cdf_left(y)
    lhs = 0.0 if fm <= 0.0 else -fm * math.log(fm)
    cdf = 0.0
    rhs_terms = []
    for v, p in sorted(zip(dist.outcomes, dist.probs)):
        cdf = cdf + p
        if v < y:
            rhs_terms.append(-math.log(cdf) * p)
    rhs = math.fsum(rhs_terms)
    if lhs > rhs + EXACT_TOL:
        raise ValueError(f"log-CDF summation bound violated: {lhs} > {rhs}")
    return lhs, rhs


# --- enumerable FPP mini-environments ---------------------------------------


@dataclass(frozen=True)
class MiniEnvironment:
    """Fully enumerable i.i.d. environment on a tiny box."""

    domain: BoxDomain
    per_edge_dist: FiniteDist
    x: tuple
    y: tuple

    def __init__(self, domain: BoxDomain, per_edge_dist: FiniteDist, x, y):
        if domain.edge_count > MAX_ENV_EDGES:
            raise ValueError(f"environment exceeds {MAX_ENV_EDGES} edges")
        if len(per_edge_dist.outcomes) > MAX_ENV_ATOMS:
            raise ValueError(f"per-edge law exceeds {MAX_ENV_ATOMS} atoms")
        if any(v < 0.0 for v in per_edge_dist.outcomes):
            raise ValueError("edge weights must be nonnegative")
        x, y = tuple(x), tuple(y)
        if not (domain.contains(x) and domain.contains(y)):
            raise ValueError("endpoints must lie in the domain")
        object.__setattr__(self, "domain", domain)
        object.__setattr__(self, "per_edge_dist", per_edge_dist)
        object.__setattr__(self, "x", x)
        object.__setattr__(self, "y", y)

    @property
    def config_count(self) -> int:
        return len(self.per_edge_dist.outcomes) ** self.domain.edge_count

    @property
    def config_shape(self) -> tuple:
        return (len(self.per_edge_dist.outcomes),) * self.domain.edge_count


def _joint_weights(probs_list: list[np.ndarray]) -> np.ndarray:
    joint = np.array(1.0)
    for p in probs_list:
        joint = joint[..., None] * p
    return joint


def _mini_dijkstra(nv: int, adj, source: int, weights) -> list:
    dist = [math.inf] * nv
    dist[source] = 0.0
    heap = [(0.0, source)]
    while heap:
        d, v = heapq.heappop(heap)
        if d > dist[v]:
            continue
        for idx, u in adj[v]:
            nd = d + weights[idx]
            if nd < dist[u]:
                dist[u] = nd
                heapq.heappush(heap, (nd, u))
    return dist


def environment_passage_times(env: MiniEnvironment) -> np.ndarray:
    """tau(x, y) for every weight configuration, on the config grid."""
    dom = env.domain
    atoms = np.array(env.per_edge_dist.outcomes)
    adj = [[] for _ in range(dom.vertex_count)]
    for idx in range(dom.edge_count):
        t, h = int(dom.edge_tail[idx]), int(dom.edge_head[idx])
        adj[t].append((idx, h))
        adj[h].append((idx, t))
    xi, yi = dom.vertex_id(env.x), dom.vertex_id(env.y)
    out = np.empty(env.config_shape, dtype=np.float64)
    weights = [0.0] * dom.edge_count
    for conf in np.ndindex(*env.config_shape):
        for e, a in enumerate(conf):
            weights[e] = atoms[a]
        out[conf] = _mini_dijkstra(dom.vertex_count, adj, xi, weights)[yi]
    return out


@dataclass
class MartingaleTable:
    vk: list = field(repr=False)
    var_g: float = 0.0
    sum_e_vk2: float = 0.0
    sum_e_vk_abs_sq: float = 0.0
    sum_ent_vk2: float = 0.0
    fs_log_lower: float | None = None
    max_cond_residual: float = 0.0


def martingale_decompose(env: MiniEnvironment,
                         g: np.ndarray | Callable | None = None,
                         config_budget: int = DEFAULT_CONFIG_BUDGET) -> MartingaleTable:
    """Exact V_k = E[G|F_k] - E[G|F_(k-1)] along the canonical edge order.

    Verifies orthogonality (Var G = sum E V_k^2) and, when Var G > 0, the
    entropy lower bound
    sum Ent(V_k^2) >= Var G * log(Var G / sum (E|V_k|)^2).
    G defaults to the passage time tau(x, y).
    """
    if env.config_count > config_budget:
        raise ValueError(f"environment has {env.config_count} configurations, "
                         f"budget is {config_budget}")
    if g is None:
        garr = environment_passage_times(env)
    elif callable(g):
        atoms = np.array(env.per_edge_dist.outcomes)
        garr = np.empty(env.config_shape, dtype=np.float64)
        for conf in np.ndindex(*env.config_shape):
            garr[conf] = g(atoms[list(conf)])
    else:
        garr = np.asarray(g, dtype=np.float64).reshape(env.config_shape)

    n_edges = env.domain.edge_count
    p = np.array(env.per_edge_dist.probs)
    conds = [None] * (n_edges + 1)
    conds[n_edges] = garr
    cur = garr
    for k in range(n_edges, 0, -1):
        cur = np.tensordot(cur, p, axes=([k - 1], [0]))
        conds[k - 1] = cur
    mean_g = float(conds[0])

    table = MartingaleTable(vk=[])
    joint = np.array(1.0)
    e_vk2 = []
    e_vk_abs = []
    ent_vk2 = []
    for k in range(1, n_edges + 1):
        joint = joint[..., None] * p
        vk = conds[k] - conds[k - 1][..., None]
        table.vk.append(vk)
        resid = np.tensordot(vk, p, axes=([k - 1], [0]))
        table.max_cond_residual = max(table.max_cond_residual, float(np.abs(resid).max()))
        e_vk2.append(_fsum(vk * vk * joint))
        e_vk_abs.append(_fsum(np.abs(vk) * joint))
        ent_vk2.append(entropy((vk * vk).ravel(), joint.ravel()))
    full_joint = joint
    table.var_g = _fsum((garr - mean_g) ** 2 * full_joint)
    table.sum_e_vk2 = math.fsum(e_vk2)
    table.sum_e_vk_abs_sq = math.fsum(a * a for a in e_vk_abs)
    table.sum_ent_vk2 = math.fsum(ent_vk2)
    if abs(table.var_g - table.sum_e_vk2) > EXACT_TOL * max(1.0, abs(table.var_g)):
        raise ValueError("martingale orthogonality identity failed: "
                         f"{table.var_g} vs {table.sum_e_vk2}")
    if table.var_g > EXACT_TOL and table.sum_e_vk_abs_sq > 0.0:
        table.fs_log_lower = table.var_g * math.log(table.var_g / table.sum_e_vk_abs_sq)
        if table.sum_ent_vk2 < table.fs_log_lower - CHECK_TOL:
            raise ValueError("entropy lower bound violated: "
                             f"{table.sum_ent_vk2} < {table.fs_log_lower}")
    return table
