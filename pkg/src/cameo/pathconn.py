"""Graph measurements: simple-path counts, distances and essential diameter."""

from __future__ import annotations

import csv
import math
from dataclasses import dataclass
from typing import Optional

import numpy as np
from scipy.sparse import csgraph

from cameo import _random
from cameo.exceptions import BudgetExceeded, DomainError

DEFAULT_EXPANSION_BUDGET = 10**8
EXACT_DIAMETER_LIMIT = 2000

EXACT = "exact"
LOWER_BOUND = "lower_bound"
UPPER_BOUND = "upper_bound"
BUDGET_EXHAUSTED = "budget_exhausted"


def bfs_distances(g, source, max_depth=None, target=None):
    """Hop distances from ``source``; -1 for vertices not reached.

    Stops after ``max_depth`` levels, or as soon as ``target`` is labelled.
    """
    dist = np.full(g.n, -1, dtype=np.int64)
    dist[source] = 0
    frontier = np.array([source], dtype=np.int64)
    indptr, indices = g.indptr, g.indices
    depth = 0
    while frontier.size and (max_depth is None or depth < max_depth):
        if target is not None and dist[target] >= 0:
            break
        starts = indptr[frontier]
        lens = indptr[frontier + 1] - starts
        total = int(lens.sum())
        if total == 0:
            break
        offsets = np.repeat(starts - (np.cumsum(lens) - lens), lens) + np.arange(total)
        nb = indices[offsets]
        nb = np.unique(nb[dist[nb] < 0])
        depth += 1
        dist[nb] = depth
        frontier = nb
    return dist


def components(g):
    """``(labels, sizes)`` of the connected components."""
    _, labels = csgraph.connected_components(g.to_csr(), directed=False)
    return labels, np.bincount(labels)


def count_simple_paths(g, i, j, k, budget=DEFAULT_EXPANSION_BUDGET):
    """Exact number of simple paths with exactly ``k`` edges between ``i`` and ``j``.

    Depth-limited search from ``i``; a branch is dropped once the remaining
    length is shorter than its distance to ``j``.  Raises
    :class:`BudgetExceeded` after ``budget`` node expansions.
    """
    if i == j:
        raise DomainError("endpoints must differ")
    if k < 1:
        raise DomainError("k must be >= 1")
    if not (0 <= i < g.n and 0 <= j < g.n):
        raise DomainError("vertex index out of range")
    dj = bfs_distances(g, j, max_depth=k)
    if dj[i] < 0:
        return 0
    level = [d if d >= 0 else k + 1 for d in dj.tolist()]
    adj = g.adjacency
    on_path = bytearray(g.n)
    expansions = 0

    def walk(v, remaining):
        nonlocal expansions
        expansions += 1
        if expansions > budget:
            raise BudgetExceeded(f"path count exceeded {budget} expansions")
        if remaining == 1:
            return 1 if level[v] == 1 else 0
        on_path[v] = 1
        total = 0
        nxt = remaining - 1
        for w in adj[v]:
            if w != j and not on_path[w] and level[w] <= nxt:
                total += walk(w, nxt)
        on_path[v] = 0
        return total

    return walk(i, k)


@dataclass(frozen=True)
class GammaStats:
    gamma_max: int
    gamma_mean_edges: Optional[float]
    gamma_mean_pairs: float
    edges_sampled: int
    pairs_sampled: int


def sample_pairs(n, count, rng):
    """``count`` uniform ordered pairs of distinct vertices."""
    a = rng.integers(0, n, size=count)
    b = rng.integers(0, n - 1, size=count)
    b = b + (b >= a)
    return a, b


def gamma_stats(g, k, pair_budget, seed, budget=DEFAULT_EXPANSION_BUDGET):
    """Max and mean k-path counts.

    ``gamma_mean_edges`` averages over (up to ``pair_budget``) existing
    edges; ``gamma_mean_pairs`` over uniformly drawn vertex pairs.
    ``gamma_max`` is the largest count seen in either sample.
    """
    if pair_budget < 1:
        raise DomainError("pair_budget must be >= 1")
    if g.n < 2:
        raise DomainError("need at least two vertices")
    rng = _random.stream(seed, _random.PAIRS, 1)
    edges = g.edges()
    if edges.shape[0] > pair_budget:
        edges = edges[np.sort(rng.choice(edges.shape[0], size=pair_budget, replace=False))]
    on_edges = [count_simple_paths(g, int(u), int(v), k, budget) for u, v in edges]
    a, b = sample_pairs(g.n, pair_budget, rng)
    on_pairs = [count_simple_paths(g, int(u), int(v), k, budget) for u, v in zip(a, b)]
    return GammaStats(
        gamma_max=max(on_edges + on_pairs),
        gamma_mean_edges=float(np.mean(on_edges)) if on_edges else None,
        gamma_mean_pairs=float(np.mean(on_pairs)),
        edges_sampled=len(on_edges),
        pairs_sampled=len(on_pairs),
    )


@dataclass(frozen=True)
class DistanceStats:
    epl: Optional[float]
    epl_stderr: Optional[float]
    median_distance: Optional[float]
    component_diameter: int
    diameter_flag: str
    largest_component_size: int
    pair_sample_size: int


def _sources_by_component(labels, sizes, rng, count):
    weight = (sizes[labels] - 1).astype(float)
    if weight.sum() == 0:
        return None, None
    src = rng.choice(labels.size, size=count, p=weight / weight.sum())
    order = np.argsort(labels, kind="stable")
    first = np.concatenate([[0], np.cumsum(sizes)])
    rank = np.empty_like(order)
    rank[order] = np.arange(order.size)
    lab = labels[src]
    m = sizes[lab]
    pick = rng.integers(0, m - 1)
    own = rank[src] - first[lab]
    pick = pick + (pick >= own)
    return src, order[first[lab] + pick]


def pair_distances(g, sources, targets, max_depth=None):
    """Distances for each (source, target); ``inf`` when not reached."""
    out = np.full(len(sources), np.inf)
    by_source = {}
    for idx, s in enumerate(np.asarray(sources).tolist()):
        by_source.setdefault(s, []).append(idx)
    targets = np.asarray(targets)
    for s, idxs in by_source.items():
        d = bfs_distances(g, s, max_depth=max_depth)
        dt = d[targets[idxs]]
        out[idxs] = np.where(dt >= 0, dt, np.inf)
    return out


def sample_pair_distances(g, pair_budget, seed, max_depth=None):
    """Distances between ``pair_budget`` uniformly drawn distinct vertex pairs."""
    rng = _random.stream(seed, _random.PAIRS, 2)
    a, b = sample_pairs(g.n, pair_budget, rng)
    return pair_distances(g, a, b, max_depth=max_depth)


def reach_fractions(distances, k_list):
    """Fraction of pairs at distance <= k, for each k."""
    d = np.asarray(distances)
    return [float(np.mean(d <= k)) for k in k_list]


def component_diameter(g, labels=None, sizes=None, exact_limit=EXACT_DIAMETER_LIMIT, seed=0):
    """Diameter of the largest component and whether it is exact or a lower bound.

    Components up to ``exact_limit`` vertices get all-pairs BFS; larger ones
    a double-sweep BFS, which only bounds the diameter from below.
    """
    if labels is None:
        labels, sizes = components(g)
    big = int(np.argmax(sizes))
    members = np.flatnonzero(labels == big)
    if members.size <= 1:
        return 0, EXACT
    if members.size <= exact_limit:
        sub = g.to_csr()[members][:, members]
        d = csgraph.shortest_path(sub, method="D", unweighted=True, directed=False)
        return int(d.max()), EXACT
    rng = _random.stream(seed, _random.CENTERS, 1)
    start = int(rng.choice(members))
    d = bfs_distances(g, start)
    far = int(np.argmax(d))
    return int(bfs_distances(g, far).max()), LOWER_BOUND


def distance_stats(g, pair_budget, seed, exact_limit=EXACT_DIAMETER_LIMIT):
    """Mean same-component distance from sampled pairs, plus component diameter.

    Pairs are drawn uniformly among ordered pairs of distinct vertices in
    the same component.
    """
    if pair_budget < 1:
        raise DomainError("pair_budget must be >= 1")
    labels, sizes = components(g)
    largest = int(sizes.max())
    diam, flag = component_diameter(g, labels, sizes, exact_limit, seed)
    rng = _random.stream(seed, _random.PAIRS, 3)
    src, dst = _sources_by_component(labels, sizes, rng, pair_budget)
    if src is None:
        return DistanceStats(None, None, None, 0, EXACT, largest, 0)
    d = pair_distances(g, src, dst)
    epl = float(d.mean())
    stderr = float(d.std(ddof=1) / math.sqrt(d.size)) if d.size > 1 else 0.0
    return DistanceStats(epl, stderr, float(np.median(d)), diam, flag, largest, int(d.size))


@dataclass(frozen=True)
class EssentialDiameterEstimate:
    epsilon: float
    upper_bound: Optional[int]
    witness_center: Optional[int]
    witness_radius: Optional[int]
    witness_size: int
    flag: str = UPPER_BOUND


def _pick_centers(g, eligible, center_budget, rng):
    deg = g.degrees[eligible].astype(float)
    first = eligible[int(np.argmax(deg))]
    rest = eligible[eligible != first]
    count = min(center_budget - 1, rest.size)
    if count <= 0:
        return [int(first)]
    w = g.degrees[rest].astype(float) + 1.0
    picked = rng.choice(rest, size=count, replace=False, p=w / w.sum())
    return [int(first)] + [int(v) for v in picked]


def essential_diameter_upper(g, epsilon, center_budget, seed, exact_limit=EXACT_DIAMETER_LIMIT):
    """Upper bound on the epsilon-essential diameter from BFS balls.

    For each sampled center (the highest-degree vertex first, then others
    drawn proportionally to degree + 1) the first ``ceil(epsilon * n)``
    vertices in BFS order form a connected witness set.  Its induced
    diameter is computed exactly when the set has at most ``exact_limit``
    vertices, otherwise bounded by twice the ball radius.  The smallest
    value over centers is returned; ``upper_bound`` is None when no
    component is large enough.
    """
    if not 0 < epsilon <= 1:
        raise DomainError("epsilon must lie in (0, 1]")
    if center_budget < 1:
        raise DomainError("center_budget must be >= 1")
    size = math.ceil(epsilon * g.n)
    labels, sizes = components(g)
    eligible = np.flatnonzero(sizes[labels] >= size)
    if eligible.size == 0:
        return EssentialDiameterEstimate(epsilon, None, None, None, size)
    rng = _random.stream(seed, _random.CENTERS, 0)
    csr = g.to_csr() if size <= exact_limit else None
    best = None
    for center in _pick_centers(g, eligible, center_budget, rng):
        d = bfs_distances(g, center)
        reached = np.flatnonzero(d >= 0)
        ball = reached[np.argsort(d[reached], kind="stable")[:size]]
        radius = int(d[ball[-1]])
        bound = 2 * radius
        if csr is not None and size > 1:
            sub = csr[ball][:, ball]
            bound = min(bound, int(csgraph.shortest_path(sub, method="D", unweighted=True, directed=False).max()))
        if best is None or (bound, radius) < (best[0], best[2]):
            best = (bound, center, radius)
    return EssentialDiameterEstimate(epsilon, best[0], best[1], best[2], size)


MEASURE_HEADER = ["metric", "k", "value", "stderr", "budget", "flag"]


def write_measurements(rows, fh):
    """Write dict rows with the columns ``metric,k,value,stderr,budget,flag``."""
    writer = csv.DictWriter(fh, fieldnames=MEASURE_HEADER, lineterminator="\n")
    writer.writeheader()
    for row in rows:
        writer.writerow({key: ("" if row.get(key) is None else row.get(key)) for key in MEASURE_HEADER})
