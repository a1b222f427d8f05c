"""Graph representation, random-graph generators, and rewiring utilities.

Graphs are undirected and simple, on node set {0, ..., n-1}, stored in a
CSR-style layout (concatenated sorted neighbor lists) so that dense
instances such as G(16000, 0.3) stay cheap.  All generators are pure
functions of (parameters, seed).
"""

from __future__ import annotations

from dataclasses import dataclass, field
from itertools import combinations
from typing import Iterable, Sequence

import numpy as np

from lndp.rng import child_rng

__all__ = [
    "Graph",
    "DegreePMF",
    "GraphParameterError",
    "GenerationError",
    "generate_er",
    "generate_regular",
    "generate_starpartite",
    "generate_clique_plus_isolated",
    "generate_bounded",
    "degree_pmf",
    "rewire_node",
    "node_distance",
    "node_distance_upper",
    "all_graphs",
]

_EXACT_DISTANCE_LIMIT = 12


class GraphParameterError(ValueError):
    """Raised for out-of-range generator or query parameters."""


class GenerationError(RuntimeError):
    """Raised when a rejection sampler exhausts its retry budget."""


class Graph:
    """Undirected simple graph with sorted per-node neighbor lists.

    Immutable after construction; safe to share across threads.
    """

    __slots__ = ("n", "_indptr", "_indices", "_degrees")

    def __init__(self, n: int, indptr: np.ndarray, indices: np.ndarray):
        if n < 1:
            raise GraphParameterError(f"node count must be >= 1, got {n}")
        self.n = int(n)
        self._indptr = np.ascontiguousarray(indptr, dtype=np.int64)
        self._indices = np.ascontiguousarray(indices, dtype=np.int32)
        self._degrees = np.diff(self._indptr)

    # -- construction -------------------------------------------------

    @classmethod
    def from_adjacency(cls, adjacency: Sequence[Iterable[int]]) -> "Graph":
        n = len(adjacency)
        lists = [np.sort(np.asarray(list(nbrs), dtype=np.int32)) for nbrs in adjacency]
        indptr = np.zeros(n + 1, dtype=np.int64)
        indptr[1:] = np.cumsum([len(a) for a in lists])
        indices = (
            np.concatenate(lists) if indptr[-1] > 0 else np.empty(0, dtype=np.int32)
        )
        g = cls(n, indptr, indices)
        g.validate()
        return g

    @classmethod
    def from_edges(cls, n: int, edges: Iterable[tuple[int, int]]) -> "Graph":
        edges = list(edges)
        pairs = {(min(i, j), max(i, j)) for i, j in edges}
        if len(pairs) != len(edges):
            raise GraphParameterError("duplicate edge in edge list")
        if any(i == j for i, j in pairs):
            raise GraphParameterError("self-loop in edge list")
        adj: list[list[int]] = [[] for _ in range(n)]
        for i, j in pairs:
            adj[i].append(j)
            adj[j].append(i)
        return cls.from_adjacency(adj)

    @classmethod
    def empty(cls, n: int) -> "Graph":
        return cls(n, np.zeros(n + 1, dtype=np.int64), np.empty(0, dtype=np.int32))

    # -- queries ------------------------------------------------------

    def neighbors(self, i: int) -> np.ndarray:
        """Sorted neighbor ids of node i (read-only view)."""
        return self._indices[self._indptr[i] : self._indptr[i + 1]]

    @property
    def adjacency(self) -> list[np.ndarray]:
        return [self.neighbors(i) for i in range(self.n)]

    @property
    def indptr(self) -> np.ndarray:
        return self._indptr

    @property
    def indices(self) -> np.ndarray:
        return self._indices

    def degrees(self) -> np.ndarray:
        return self._degrees

    def degree(self, i: int) -> int:
        return int(self._degrees[i])

    @property
    def edge_count(self) -> int:
        return int(self._indices.size // 2)

    def has_edge(self, i: int, j: int) -> bool:
        nbrs = self.neighbors(i)
        k = np.searchsorted(nbrs, j)
        return k < nbrs.size and nbrs[k] == j

    def edge_set(self) -> set[tuple[int, int]]:
        """All edges as (i, j) with i < j.  Intended for small graphs."""
        out = set()
        for i in range(self.n):
            nbrs = self.neighbors(i)
            for j in nbrs[np.searchsorted(nbrs, i) :]:
                out.add((i, int(j)))
        return out

    def __eq__(self, other: object) -> bool:
        if not isinstance(other, Graph):
            return NotImplemented
        return (
            self.n == other.n
            and np.array_equal(self._indptr, other._indptr)
            and np.array_equal(self._indices, other._indices)
        )

    def __hash__(self) -> int:
        return hash((self.n, self._indices.tobytes(), self._indptr.tobytes()))

    def __repr__(self) -> str:
        return f"Graph(n={self.n}, m={self.edge_count})"

    def validate(self) -> None:
        """Check symmetry, no self-loops, sorted duplicate-free lists."""
        for i in range(self.n):
            nbrs = self.neighbors(i)
            if nbrs.size == 0:
                continue
            if nbrs.min() < 0 or nbrs.max() >= self.n:
                raise GraphParameterError(f"node {i}: neighbor id out of range")
            if np.any(nbrs == i):
                raise GraphParameterError(f"node {i}: self-loop")
            if np.any(np.diff(nbrs) <= 0):
                raise GraphParameterError(f"node {i}: unsorted or duplicate neighbors")
        # symmetry via sorted (i, j) multiset comparison
        src = np.repeat(np.arange(self.n, dtype=np.int64), self._degrees)
        dst = self._indices.astype(np.int64)
        fwd = src * self.n + dst
        rev = dst * self.n + src
        if not np.array_equal(np.sort(fwd), np.sort(rev)):
            raise GraphParameterError("adjacency is not symmetric")

    # -- serialization ------------------------------------------------

    def to_edgelist_text(self) -> str:
        """Plain-text edge list: first line "n m", then sorted "i j" lines."""
        lines = [f"{self.n} {self.edge_count}"]
        src = np.repeat(np.arange(self.n, dtype=np.int64), self._degrees)
        dst = self._indices.astype(np.int64)
        keep = src < dst
        for i, j in zip(src[keep], dst[keep]):
            lines.append(f"{i} {j}")
        return "\n".join(lines) + "\n"

    @classmethod
    def from_edgelist_text(cls, text: str) -> "Graph":
        rows = [ln for ln in text.splitlines() if ln.strip()]
        if not rows:
            raise GraphParameterError("empty edge-list text")
        try:
            n, m = (int(tok) for tok in rows[0].split())
            edges = [tuple(int(tok) for tok in ln.split()) for ln in rows[1:]]
        except ValueError as exc:
            raise GraphParameterError(f"malformed edge-list text: {exc}") from exc
        if any(len(e) != 2 for e in edges):
            raise GraphParameterError("malformed edge line (need exactly 'i j')")
        if len(edges) != m:
            raise GraphParameterError(f"header says {m} edges, found {len(edges)}")
        return cls.from_edges(n, edges)


def _csr_from_upper(n: int, u: np.ndarray, v: np.ndarray) -> Graph:
    """CSR adjacency from upper-triangle edge arrays sorted by (u, v).

    Uses a stable counting-sort transpose so per-node lists come out
    sorted without a comparison sort over all 2m directed entries.
    """
    deg = (np.bincount(u, minlength=n) + np.bincount(v, minlength=n)).astype(np.int64)
    indptr = np.zeros(n + 1, dtype=np.int64)
    np.cumsum(deg, out=indptr[1:])
    indices = np.empty(indptr[-1], dtype=np.int32)
    order = np.argsort(v, kind="stable")
    lo_src = v[order]  # lower-half rows, grouped by v with u ascending
    lo_dst = u[order]
    up_start = np.searchsorted(u, np.arange(n + 1))
    lo_start = np.searchsorted(lo_src, np.arange(n + 1))
    for x in range(n):
        pos = indptr[x]
        nlo = lo_start[x + 1] - lo_start[x]
        indices[pos : pos + nlo] = lo_dst[lo_start[x] : lo_start[x + 1]]
        pos += nlo
        indices[pos : indptr[x + 1]] = v[up_start[x] : up_start[x + 1]]
    return Graph(n, indptr, indices)


def generate_er(n: int, p: float, seed: int) -> Graph:
    """G(n, p): every unordered pair is an edge independently w.p. p."""
    if n < 1:
        raise GraphParameterError(f"n must be >= 1, got {n}")
    if not 0.0 <= p <= 1.0:
        raise GraphParameterError(f"p must lie in [0, 1], got {p}")
    rng = child_rng(seed, "er")
    chunk = max(1, min(n, (1 << 22) // max(n, 1)))
    cols = np.arange(n)
    us, vs = [], []
    for a in range(0, n, chunk):
        b = min(a + chunk, n)
        mask = rng.random((b - a, n)) < p
        mask &= cols[None, :] > np.arange(a, b)[:, None]
        r, c = np.nonzero(mask)
        us.append((r + a).astype(np.int32))
        vs.append(c.astype(np.int32))
    u = np.concatenate(us)
    v = np.concatenate(vs)
    return _csr_from_upper(n, u, v)


def generate_regular(n: int, d: int, seed: int) -> Graph:
    """Uniform-ish d-regular graph via the configuration model.

    Pairs d stubs per node uniformly and restarts from scratch on any
    self-loop or multi-edge, up to a budget of 1000*n attempts.  For the
    d << sqrt(n) regimes used here the acceptance probability is ample;
    the distribution is approximately (not exactly) uniform.
    """
    if d < 0 or d > n - 1:
        raise GraphParameterError(f"degree {d} out of range for n={n}")
    if (n * d) % 2 != 0:
        raise GraphParameterError(f"n*d must be even, got n={n}, d={d}")
    if d == 0:
        return Graph.empty(n)
    rng = child_rng(seed, "regular")
    stubs = np.repeat(np.arange(n, dtype=np.int32), d)
    budget = 1000 * n
    for _ in range(budget):
        perm = rng.permutation(stubs)
        a, b = perm[0::2], perm[1::2]
        if np.any(a == b):
            continue
        lo, hi = np.minimum(a, b), np.maximum(a, b)
        key = lo.astype(np.int64) * n + hi
        if np.unique(key).size != key.size:
            continue
        order = np.argsort(key)
        return _csr_from_upper(n, lo[order], hi[order])
    raise GenerationError(
        f"configuration model failed after {budget} attempts (n={n}, d={d})"
    )


def generate_starpartite(n: int, t: int, seed: int) -> Graph:
    """Starpartite graph: a uniform t-subset of centers adjacent to all nodes."""
    if t < 0 or t > n:
        raise GraphParameterError(f"center count {t} out of range for n={n}")
    rng = child_rng(seed, "starpartite")
    centers = np.sort(rng.choice(n, size=t, replace=False)).astype(np.int32)
    is_center = np.zeros(n, dtype=bool)
    is_center[centers] = True
    others = np.arange(n, dtype=np.int32)
    adj = []
    for i in range(n):
        if is_center[i]:
            adj.append(others[others != i])
        else:
            adj.append(centers)
    indptr = np.zeros(n + 1, dtype=np.int64)
    indptr[1:] = np.cumsum([a.size for a in adj])
    indices = np.concatenate(adj) if indptr[-1] else np.empty(0, dtype=np.int32)
    return Graph(n, indptr, indices)


def generate_clique_plus_isolated(n: int, k: int, seed: int) -> Graph:
    """A uniform k-subset forming a clique; every other node isolated."""
    if k < 0 or k > n:
        raise GraphParameterError(f"clique size {k} out of range for n={n}")
    rng = child_rng(seed, "clique")
    members = np.sort(rng.choice(n, size=k, replace=False)).astype(np.int32)
    in_clique = np.zeros(n, dtype=bool)
    in_clique[members] = True
    indptr = np.zeros(n + 1, dtype=np.int64)
    indptr[1:] = np.cumsum(np.where(in_clique, k - 1, 0).astype(np.int64))
    indices = np.empty(indptr[-1], dtype=np.int32)
    for i in members:
        indices[indptr[i] : indptr[i + 1]] = members[members != i]
    return Graph(n, indptr, indices)


def generate_bounded(n: int, D: int, density: float, seed: int) -> Graph:
    """A random graph with maximum degree at most D.

    Samples G(n, min(density, D/(2n))) and then deterministically deletes
    edges until no degree exceeds D: repeatedly take the highest-degree
    over-bound node (ties: lowest id) and drop its edge to its
    highest-degree neighbor (ties: lowest id).
    """
    if D < 0 or D > n - 1:
        raise GraphParameterError(f"degree bound {D} out of range for n={n}")
    if not 0.0 <= density <= 1.0:
        raise GraphParameterError(f"density must lie in [0, 1], got {density}")
    if D == 0:
        return Graph.empty(n)
    g = generate_er(n, min(density, D / (2 * n)), seed)
    deg = g.degrees().copy()
    if deg.max() <= D:
        return g
    adj = [set(map(int, g.neighbors(i))) for i in range(n)]
    while True:
        worst = int(np.argmax(deg))  # argmax takes the lowest id on ties
        if deg[worst] <= D:
            break
        nbr = max(adj[worst], key=lambda j: (deg[j], -j))
        adj[worst].discard(nbr)
        adj[nbr].discard(worst)
        deg[worst] -= 1
        deg[nbr] -= 1
    return Graph.from_adjacency([sorted(a) for a in adj])


@dataclass(frozen=True)
class DegreePMF:
    """Empirical degree distribution: probs[d] = #{i : deg(i) = d} / n."""

    probs: np.ndarray = field(repr=False)

    def __post_init__(self) -> None:
        p = np.asarray(self.probs, dtype=np.float64)
        object.__setattr__(self, "probs", p)
        if p.ndim != 1 or p.size == 0:
            raise GraphParameterError("degree pmf must be a nonempty vector")
        if np.any(p < 0) or abs(p.sum() - 1.0) > 1e-9:
            raise GraphParameterError("degree pmf entries must be >= 0 and sum to 1")

    @property
    def n(self) -> int:
        return self.probs.size

    def mean(self) -> float:
        return float(np.arange(self.n) @ self.probs)


def degree_pmf(G: Graph) -> DegreePMF:
    counts = np.bincount(G.degrees(), minlength=G.n)
    return DegreePMF(counts / G.n)


def rewire_node(G: Graph, i: int, new_neighbors: Iterable[int]) -> Graph:
    """The node neighbor of G in which node i's neighborhood is exactly
    new_neighbors and everything away from i is untouched."""
    target = np.sort(np.asarray(sorted(set(int(x) for x in new_neighbors)), dtype=np.int32))
    if not 0 <= i < G.n:
        raise GraphParameterError(f"node id {i} out of range")
    if target.size and (target.min() < 0 or target.max() >= G.n):
        raise GraphParameterError("neighbor id out of range")
    if np.any(target == i):
        raise GraphParameterError("a node cannot neighbor itself")
    in_new = np.zeros(G.n, dtype=bool)
    in_new[target] = True
    adj: list[np.ndarray] = []
    for j in range(G.n):
        if j == i:
            adj.append(target)
            continue
        nbrs = G.neighbors(j)
        has = bool(nbrs.size) and bool(np.any(nbrs == i))
        if in_new[j] and not has:
            nbrs = np.sort(np.append(nbrs, np.int32(i)))
        elif not in_new[j] and has:
            nbrs = nbrs[nbrs != i]
        adj.append(nbrs)
    indptr = np.zeros(G.n + 1, dtype=np.int64)
    indptr[1:] = np.cumsum([a.size for a in adj])
    indices = np.concatenate(adj) if indptr[-1] else np.empty(0, dtype=np.int32)
    return Graph(G.n, indptr, indices)


def node_distance_upper(G: Graph, H: Graph) -> int:
    """Number of nodes whose neighborhoods differ: an upper bound on the
    rewiring distance, valid at any scale."""
    if G.n != H.n:
        raise GraphParameterError("graphs must share a node count")
    return sum(
        1
        for i in range(G.n)
        if not np.array_equal(G.neighbors(i), H.neighbors(i))
    )


def node_distance(G: Graph, H: Graph) -> int:
    """Minimum number of nodes whose rewiring transforms G into H.

    Equals the minimum vertex cover of the symmetric-difference edge set
    (every differing edge must touch a rewired node, and rewiring a
    cover fixes all of them).  Exact exponential search; restricted to
    n <= 12 because minimum vertex cover is NP-hard in general.
    """
    if G.n != H.n:
        raise GraphParameterError("graphs must share a node count")
    if G.n > _EXACT_DISTANCE_LIMIT:
        raise GraphParameterError(
            f"exact node distance supports n <= {_EXACT_DISTANCE_LIMIT}; "
            "use node_distance_upper"
        )
    diff = G.edge_set() ^ H.edge_set()
    if not diff:
        return 0
    involved = sorted({v for e in diff for v in e})
    for size in range(1, len(involved) + 1):
        for cover in combinations(involved, size):
            chosen = set(cover)
            if all(i in chosen or j in chosen for i, j in diff):
                return size
    return len(involved)  # unreachable: the involved set is always a cover


def all_graphs(n: int):
    """Yield every simple graph on n nodes (2^C(n,2) of them); n <= 6."""
    if n > 6:
        raise GraphParameterError("exhaustive enumeration supports n <= 6")
    pairs = list(combinations(range(n), 2))
    for mask in range(1 << len(pairs)):
        yield Graph.from_edges(n, (pairs[b] for b in range(len(pairs)) if mask >> b & 1))
