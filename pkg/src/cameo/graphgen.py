"""Cameo graphs: every pair {i, j} is an edge independently with probability

    p_ij = min(c / S * (y_i + y_j), 1),   S = sum_k y_k.

Two samplers are provided.  ``exact`` flips one coin per pair.  ``envelope``
sorts vertices by visibility and walks each row with geometric skips under
the row's largest probability, thinning each proposal to the true
probability; it produces the same distribution in roughly O(n + edges)
coin flips.  Both draw row ``i`` from its own counter stream, so output
depends only on (params, sample, seed, method).
"""

from __future__ import annotations

import math
import re
from dataclasses import dataclass

import numpy as np
from scipy import sparse

from cameo import _random
from cameo.exceptions import DomainError

METHODS = ("exact", "envelope")


@dataclass(frozen=True)
class CameoParams:
    n: int
    c: float
    alpha: float

    def __post_init__(self):
        if int(self.n) != self.n or self.n < 2:
            raise DomainError("n must be an integer >= 2")
        if not self.c > 0:
            raise DomainError("c must be positive")
        object.__setattr__(self, "n", int(self.n))
        object.__setattr__(self, "c", float(self.c))
        object.__setattr__(self, "alpha", float(self.alpha))


class Graph:
    """Undirected simple graph on ``0..n-1`` stored as symmetric CSR arrays.

    Neighbor lists are sorted.  Treat instances as immutable.
    """

    def __init__(self, n, indptr, indices):
        self.n = int(n)
        self.indptr = np.asarray(indptr, dtype=np.int64)
        self.indices = np.asarray(indices, dtype=np.int64)
        self.indptr.setflags(write=False)
        self.indices.setflags(write=False)
        self._adj = None

    @classmethod
    def from_edges(cls, n, edges):
        """Build from an iterable or ``(m, 2)`` array of pairs; duplicates and loops are rejected."""
        e = np.asarray(edges, dtype=np.int64).reshape(-1, 2)
        if e.size and (e.min() < 0 or e.max() >= n):
            raise DomainError("edge endpoint out of range")
        if np.any(e[:, 0] == e[:, 1]):
            raise DomainError("self-loops are not allowed")
        lo = np.minimum(e[:, 0], e[:, 1])
        hi = np.maximum(e[:, 0], e[:, 1])
        if np.unique(lo * n + hi).size != lo.size:
            raise DomainError("duplicate edges are not allowed")
        return cls._from_pairs(n, lo, hi)

    @classmethod
    def _from_pairs(cls, n, lo, hi):
        src = np.concatenate([lo, hi])
        dst = np.concatenate([hi, lo])
        order = np.lexsort((dst, src))
        src, dst = src[order], dst[order]
        indptr = np.zeros(n + 1, dtype=np.int64)
        np.cumsum(np.bincount(src, minlength=n), out=indptr[1:])
        return cls(n, indptr, dst)

    @classmethod
    def complete(cls, n):
        i, j = np.triu_indices(n, 1)
        return cls._from_pairs(n, i.astype(np.int64), j.astype(np.int64))

    @property
    def edge_count(self):
        return self.indices.size // 2

    @property
    def degrees(self):
        return np.diff(self.indptr)

    def neighbors(self, v):
        return self.indices[self.indptr[v] : self.indptr[v + 1]]

    @property
    def adjacency(self):
        """Per-vertex sorted neighbor lists as plain Python lists (cached)."""
        if self._adj is None:
            flat = self.indices.tolist()
            ptr = self.indptr.tolist()
            self._adj = [flat[ptr[v] : ptr[v + 1]] for v in range(self.n)]
        return self._adj

    def has_edge(self, u, v):
        nb = self.neighbors(u)
        k = np.searchsorted(nb, v)
        return bool(k < nb.size and nb[k] == v)

    def edges(self):
        """``(m, 2)`` array of pairs ``u < v`` in lexicographic order."""
        src = np.repeat(np.arange(self.n, dtype=np.int64), self.degrees)
        keep = src < self.indices
        return np.column_stack([src[keep], self.indices[keep]])

    def to_csr(self):
        data = np.ones(self.indices.size, dtype=np.int8)
        return sparse.csr_matrix((data, self.indices, self.indptr), shape=(self.n, self.n))

    def __eq__(self, other):
        if not isinstance(other, Graph):
            return NotImplemented
        return (
            self.n == other.n
            and np.array_equal(self.indptr, other.indptr)
            and np.array_equal(self.indices, other.indices)
        )

    __hash__ = None

    def __repr__(self):
        return f"Graph(n={self.n}, edges={self.edge_count})"


def _check_sample(params, sample):
    if sample.n != params.n:
        raise DomainError(f"sample has {sample.n} vertices, params say {params.n}")
    if sample.alpha != params.alpha:
        raise DomainError("sample alpha differs from params alpha")


def edge_probability(params, sample, i, j):
    _check_sample(params, sample)
    if i == j:
        raise DomainError("no self-loops: i must differ from j")
    if not (0 <= i < params.n and 0 <= j < params.n):
        raise DomainError("vertex index out of range")
    ys = sample.ys
    return min(params.c / sample.normalizer * (ys[i] + ys[j]), 1.0)


def edge_probabilities(params, sample):
    """Dense ``n x n`` matrix of edge probabilities with a zero diagonal (small n only)."""
    _check_sample(params, sample)
    ys = sample.ys
    p = np.minimum(params.c / sample.normalizer * (ys[:, None] + ys[None, :]), 1.0)
    np.fill_diagonal(p, 0.0)
    return p


def clamp_count(params, sample):
    """Number of unordered pairs whose unclamped probability reaches 1."""
    _check_sample(params, sample)
    ys = np.sort(sample.ys)
    need = sample.normalizer / params.c - ys
    ordered = ys.size - np.searchsorted(ys, need, side="left")
    self_pairs = int(np.count_nonzero(2 * ys >= sample.normalizer / params.c))
    return int((ordered.sum() - self_pairs) // 2)


def generate(params, sample, seed, method="envelope"):
    """Draw one graph.  ``method`` is ``"exact"`` or ``"envelope"``."""
    _check_sample(params, sample)
    if method == "exact":
        lo, hi = _exact_pairs(params, sample, seed)
    elif method == "envelope":
        lo, hi = _envelope_pairs(params, sample, seed)
    else:
        raise DomainError(f"unknown method {method!r}, expected one of {METHODS}")
    return Graph._from_pairs(params.n, lo, hi)


def _exact_pairs(params, sample, seed):
    n = params.n
    ys = sample.ys
    scale = params.c / sample.normalizer
    rows = _random.RowStreams(seed, _random.EDGES, 0)
    lo, hi = [], []
    for i in range(n - 1):
        u = rows(i).random(n - 1 - i)
        p = np.minimum(scale * (ys[i] + ys[i + 1 :]), 1.0)
        hit = np.flatnonzero(u < p) + (i + 1)
        if hit.size:
            lo.append(np.full(hit.size, i, dtype=np.int64))
            hi.append(hit)
    return _cat(lo), _cat(hi)


def _envelope_pairs(params, sample, seed):
    n = params.n
    order = np.argsort(-sample.ys, kind="stable")
    ys = sample.ys[order]
    scale = params.c / sample.normalizer
    rows = _random.RowStreams(seed, _random.EDGES, 1)
    lo, hi = [], []
    for r in range(n - 1):
        m = n - 1 - r
        # ys is descending, so the first candidate carries the row maximum
        bound = min(scale * (ys[r] + ys[r + 1]), 1.0)
        if bound <= 0.0:
            continue
        rng = rows(order[r])
        pos = _geometric_positions(rng, bound, m)
        if pos.size == 0:
            continue
        cand = pos + (r + 1)
        p = np.minimum(scale * (ys[r] + ys[cand]), 1.0)
        keep = cand[rng.random(cand.size) * bound < p]
        if keep.size:
            a = np.full(keep.size, order[r], dtype=np.int64)
            b = order[keep]
            lo.append(np.minimum(a, b))
            hi.append(np.maximum(a, b))
    return _cat(lo), _cat(hi)


def _geometric_positions(rng, q, m):
    """0-based positions of successes among ``m`` Bernoulli(q) trials, via geometric gaps."""
    if q >= 1.0:
        return np.arange(m, dtype=np.int64)
    mean = m * q
    batch = int(mean + 5.0 * math.sqrt(mean) + 8)
    chunks = []
    last = -1
    while True:
        steps = np.cumsum(rng.geometric(q, size=batch)) + last
        inside = steps[steps < m]
        chunks.append(inside)
        if inside.size < steps.size:
            break
        last = int(steps[-1])
    return _cat(chunks)


def _cat(parts):
    if not parts:
        return np.zeros(0, dtype=np.int64)
    return np.concatenate(parts).astype(np.int64, copy=False)


def expected_degree(params, sample, i):
    """``c * (1 + (n - 2) * y_i / S)``, the unclamped expected degree of vertex i."""
    _check_sample(params, sample)
    if not 0 <= i < params.n:
        raise DomainError("vertex index out of range")
    return params.c * (1.0 + (params.n - 2) * sample.ys[i] / sample.normalizer)


def expected_edge_count(params):
    """``c * (n - 1)``; independent of the weights when no pair is clamped."""
    return params.c * (params.n - 1)


def empirical_degree_histogram(g):
    values, counts = np.unique(g.degrees, return_counts=True)
    return {int(d): int(k) for d, k in zip(values, counts)}


# -- edge-list files -----------------------------------------------------------

_HEADER = re.compile(r"#\s*cameo\b(.*)")


def write_edgelist(g, path_or_file, params=None, seed=None):
    """Write ``# cameo n=.. c=.. alpha=.. seed=..`` followed by ``u v`` lines."""
    c = params.c if params is not None else None
    alpha = params.alpha if params is not None else None
    header = f"# cameo n={g.n} c={c!r} alpha={alpha!r} seed={seed}\n"
    body = "".join(f"{u} {v}\n" for u, v in g.edges().tolist())
    if hasattr(path_or_file, "write"):
        path_or_file.write(header + body)
    else:
        with open(path_or_file, "w") as fh:
            fh.write(header + body)


def read_edgelist(path):
    """Return ``(graph, meta)``; ``meta`` holds the header fields as strings."""
    meta = {}
    pairs = []
    with open(path) as fh:
        for lineno, line in enumerate(fh, 1):
            line = line.strip()
            if not line:
                continue
            if line.startswith("#"):
                m = _HEADER.match(line)
                if m:
                    for token in m.group(1).split():
                        key, _, value = token.partition("=")
                        meta[key] = value
                continue
            parts = line.split()
            if len(parts) != 2:
                raise DomainError(f"{path}:{lineno}: expected 'u v'")
            pairs.append((int(parts[0]), int(parts[1])))
    if "n" not in meta:
        raise DomainError(f"{path}: missing '# cameo n=...' header")
    return Graph.from_edges(int(meta["n"]), pairs), meta
