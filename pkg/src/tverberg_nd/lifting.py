"""Graph-derived lifting vectors, kept implicit.

A connected simple graph on k nodes induces one integer vector per node,
with one coordinate per edge: an edge contributes +1 to its lower-indexed
endpoint's vector and -1 to the higher-indexed one. Consequences used all
over the package:

* <q_i, q_i> equals the degree of node i,
* <q_i, q_j> is -1 for an edge ij and 0 otherwise,
* sum_i q_i = 0 exactly,
* || sum_i u_i (x) q_i ||^2 = sum over edges ij of ||u_i - u_j||^2.

Nothing here materializes the vectors; dot products come straight from
the adjacency structure. The brute-force oracle module builds them
explicitly for cross-checking.

Nodes are 0-indexed. Rooted families use node 0 as the root and place
children in breadth-first, left-to-right order.
"""

from __future__ import annotations

from collections import deque
from dataclasses import dataclass

import numpy as np

__all__ = [
    "GraphStats",
    "LiftingGraph",
    "heap_children",
    "heap_parent",
    "lifted_dot",
    "make_custom_graph",
    "make_graph",
    "q_dot",
    "quadratic_form",
    "stats",
]

KINDS = ("star", "balanced_ary", "path", "custom")


def heap_parent(x: int, arity: int) -> int:
    return (x - 1) // arity


def heap_children(x: int, arity: int, k: int) -> range:
    """Children of node x in a breadth-first arity-ary tree on k nodes."""
    lo = arity * x + 1
    return range(min(lo, k), min(lo + arity, k))


@dataclass(frozen=True)
class LiftingGraph:
    """Connected simple graph whose nodes carry the implicit lifting vectors."""

    k: int
    adjacency: tuple[tuple[int, ...], ...]  # sorted neighbor tuples
    kind: str
    arity: int | None = None

    def __post_init__(self) -> None:
        if self.k < 1:
            raise ValueError("graph needs at least one node")
        if self.kind not in KINDS:
            raise ValueError(f"unknown graph kind {self.kind!r}")
        if len(self.adjacency) != self.k:
            raise ValueError("adjacency list length must equal k")
        seen_edges = set()
        for i, nbrs in enumerate(self.adjacency):
            if list(nbrs) != sorted(set(nbrs)):
                raise ValueError("neighbor lists must be sorted and duplicate-free")
            for j in nbrs:
                if j == i:
                    raise ValueError("self loops are not allowed")
                if not 0 <= j < self.k:
                    raise ValueError("neighbor index out of range")
                if i not in self.adjacency[j]:
                    raise ValueError("adjacency must be symmetric")
                seen_edges.add((min(i, j), max(i, j)))
        if self.k > 1:
            # connectivity via BFS from node 0
            seen = {0}
            queue = deque([0])
            while queue:
                x = queue.popleft()
                for j in self.adjacency[x]:
                    if j not in seen:
                        seen.add(j)
                        queue.append(j)
            if len(seen) != self.k:
                raise ValueError("graph must be connected")

    def degree(self, i: int) -> int:
        return len(self.adjacency[i])

    @property
    def degrees(self) -> np.ndarray:
        return np.array([len(a) for a in self.adjacency], dtype=np.int64)

    @property
    def edges(self) -> tuple[tuple[int, int], ...]:
        """Edges as (low, high) pairs in lexicographic order."""
        out = []
        for i, nbrs in enumerate(self.adjacency):
            for j in nbrs:
                if j > i:
                    out.append((i, j))
        return tuple(out)

    @property
    def edge_count(self) -> int:
        return sum(len(a) for a in self.adjacency) // 2

    @property
    def is_tree(self) -> bool:
        return self.edge_count == self.k - 1


@dataclass(frozen=True)
class GraphStats:
    edge_count: int
    max_degree: int
    diameter_or_height: int


def _check_index(g: LiftingGraph, i: int) -> None:
    if not 0 <= i < g.k:
        raise ValueError("node index out of range")


def make_graph(kind: str, k: int, arity: int | None = None) -> LiftingGraph:
    """Build one of the stock graph families on k nodes.

    kind one of "star" (node 0 is the hub), "balanced_ary" (breadth-first
    arity-ary tree, requires arity >= 2), "path" (0-1-...-(k-1)).
    """
    if k < 1:
        raise ValueError("graph needs at least one node")
    if kind == "star":
        adj = [tuple(range(1, k))] + [(0,) for _ in range(k - 1)]
        return LiftingGraph(k, tuple(adj), "star")
    if kind == "balanced_ary":
        if arity is None or arity < 2:
            raise ValueError("balanced_ary graphs need arity >= 2")
        adj = []
        for x in range(k):
            nbrs = [] if x == 0 else [heap_parent(x, arity)]
            nbrs.extend(heap_children(x, arity, k))
            adj.append(tuple(sorted(nbrs)))
        return LiftingGraph(k, tuple(adj), "balanced_ary", arity)
    if kind == "path":
        adj = [
            tuple(j for j in (x - 1, x + 1) if 0 <= j < k)
            for x in range(k)
        ]
        return LiftingGraph(k, tuple(adj), "path")
    raise ValueError(f"unknown graph kind {kind!r}")


def make_custom_graph(k: int, edges) -> LiftingGraph:
    """Graph from an explicit edge list (must be simple and connected)."""
    nbrs: list[set[int]] = [set() for _ in range(k)]
    for i, j in edges:
        if i == j:
            raise ValueError("self loops are not allowed")
        nbrs[i].add(j)
        nbrs[j].add(i)
    return LiftingGraph(k, tuple(tuple(sorted(s)) for s in nbrs), "custom")


def q_dot(g: LiftingGraph, i: int, j: int) -> int:
    """Dot product of the implicit vectors of nodes i and j."""
    _check_index(g, i)
    _check_index(g, j)
    if i == j:
        return g.degree(i)
    return -1 if j in g.adjacency[i] else 0


def lifted_dot(g: LiftingGraph, p, i: int, q, j: int) -> float:
    """Dot product of the lifted points p (x) q_i and q (x) q_j."""
    p = np.asarray(p, dtype=np.float64)
    q = np.asarray(q, dtype=np.float64)
    return float(p @ q) * q_dot(g, i, j)


def quadratic_form(g: LiftingGraph, vectors) -> float:
    """|| sum_i vectors[i] (x) q_i ||^2, evaluated edge-wise.

    vectors is a (k, d) array; the value equals the sum over edges ij of
    ||vectors[i] - vectors[j]||^2 and never goes negative.
    """
    arr = np.asarray(vectors, dtype=np.float64)
    if arr.ndim != 2 or arr.shape[0] != g.k:
        raise ValueError("need one row vector per graph node")
    edges = g.edges
    if not edges:
        return 0.0
    ei = np.fromiter((e[0] for e in edges), dtype=np.intp, count=len(edges))
    ej = np.fromiter((e[1] for e in edges), dtype=np.intp, count=len(edges))
    diff = arr[ei] - arr[ej]
    return float(np.einsum("ij,ij->", diff, diff))


def _height_from_root(g: LiftingGraph) -> int:
    depth = {0: 0}
    queue = deque([0])
    best = 0
    while queue:
        x = queue.popleft()
        for j in g.adjacency[x]:
            if j not in depth:
                depth[j] = depth[x] + 1
                best = max(best, depth[j])
                queue.append(j)
    return best


def _bfs_ecc(g: LiftingGraph, src: int) -> int:
    depth = {src: 0}
    queue = deque([src])
    best = 0
    while queue:
        x = queue.popleft()
        for j in g.adjacency[x]:
            if j not in depth:
                depth[j] = depth[x] + 1
                best = max(best, depth[j])
                queue.append(j)
    return best


def stats(g: LiftingGraph) -> GraphStats:
    """Edge count, max degree, and height (trees) or diameter (otherwise).

    Rooted tree families report the height from node 0, which is the
    quantity the radius guarantees depend on; non-tree customs report the
    graph diameter.
    """
    max_deg = max(len(a) for a in g.adjacency) if g.k > 0 else 0
    if g.is_tree and g.kind != "custom":
        dh = _height_from_root(g)
    else:
        dh = max(_bfs_ecc(g, s) for s in range(g.k))
    return GraphStats(g.edge_count, max_deg, dh)
