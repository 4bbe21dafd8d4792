"""Brute-force reference implementations.

Everything in this module is deliberately slow and explicit: tensors are
materialized, traversals enumerated, distances certified by duality
gaps. The fast code paths are tested against these.
"""

from __future__ import annotations

import itertools
import math
from dataclasses import dataclass

import numpy as np

from .geom import PointSet, as_point, centroid, diameter_bound
from .lifting import LiftingGraph, make_graph

__all__ = [
    "ENUMERATION_GUARD",
    "ConvergenceError",
    "EnumerationReport",
    "ExplicitLift",
    "depth_2d_exact",
    "dist_to_hull",
    "enumerate_colorful",
    "enumerate_traversals",
    "explicit_q_vectors",
    "explicit_tensor",
]

ENUMERATION_GUARD = 1_000_000

MAX_HULL_ITERATIONS = 100_000


class ConvergenceError(RuntimeError):
    """Raised when the hull-distance iteration exhausts its budget."""

    def __init__(self, lower: float, upper: float, iterations: int):
        super().__init__(
            f"hull distance did not converge after {iterations} iterations; "
            f"distance lies in [{lower!r}, {upper!r}]"
        )
        self.lower = lower
        self.upper = upper


@dataclass(frozen=True, eq=False)
class ExplicitLift:
    """Materialized lifting vectors: one row per node, one column per edge."""

    vectors: np.ndarray  # (k, edge_count) int64
    edges: tuple[tuple[int, int], ...]


@dataclass(frozen=True)
class EnumerationReport:
    count: int
    mean_sq_norm: float
    min_sq_norm: float
    argmin: tuple[int, ...]


def explicit_tensor(x, y) -> np.ndarray:
    """Tensor product laid out as the blocks x*y_1, x*y_2, ..., x*y_m."""
    x = as_point(x)
    y = as_point(y)
    return np.outer(y, x).ravel()


def explicit_q_vectors(g: LiftingGraph) -> ExplicitLift:
    """Build the +-1 edge-incidence vectors of the graph.

    Edge columns follow lexicographic (low, high) order; each column holds
    +1 at the lower-indexed endpoint and -1 at the higher-indexed one.
    """
    edges = g.edges
    vecs = np.zeros((g.k, len(edges)), dtype=np.int64)
    for col, (i, j) in enumerate(edges):
        vecs[i, col] = 1
        vecs[j, col] = -1
    return ExplicitLift(vecs, edges)


def _assignments(n: int, sizes: tuple[int, ...]):
    """Yield every class assignment with the prescribed class sizes.

    Generation picks index sets class by class (lowest class first), each
    in lexicographic order, so the stream order is deterministic.
    """
    assign = np.empty(n, dtype=np.int64)

    def rec(remaining: tuple[int, ...], cls: int):
        if cls == len(sizes) - 1:
            for i in remaining:
                assign[i] = cls
            yield assign
            return
        for chosen in itertools.combinations(remaining, sizes[cls]):
            for i in chosen:
                assign[i] = cls
            rest = tuple(i for i in remaining if i not in set(chosen))
            yield from rec(rest, cls + 1)

    yield from rec(tuple(range(n)), 0)


def _multinomial(n: int, sizes: tuple[int, ...]) -> int:
    total = 1
    rem = n
    for r in sizes:
        total *= math.comb(rem, r)
        rem -= r
    return total


def enumerate_traversals(points, sizes, graph: LiftingGraph) -> EnumerationReport:
    """Exhaust every size-respecting assignment and score its lifted centroid.

    For assignment X the score is ||c(X)||^2 where c(X) is the mean of the
    points lifted, via explicit tensors, by their assigned node vectors.
    Points are used as given (no centering). The argmin is the first
    minimizer in generation order.
    """
    arr = points.coords if isinstance(points, PointSet) else PointSet(points).coords
    n = arr.shape[0]
    sizes = tuple(int(r) for r in sizes)
    if sum(sizes) != n:
        raise ValueError("class sizes must sum to the number of points")
    if any(r < 1 for r in sizes):
        raise ValueError("class sizes must be positive")
    if len(sizes) != graph.k:
        raise ValueError("need one class per graph node")
    count = _multinomial(n, sizes)
    if count > ENUMERATION_GUARD:
        raise ValueError("instance too large for oracle")

    lift = explicit_q_vectors(graph)
    # lifted[a, i] is point a tensored with node i's vector
    lifted = np.stack(
        [[explicit_tensor(arr[a], lift.vectors[i]) for i in range(graph.k)] for a in range(n)]
    ) if lift.vectors.shape[1] > 0 else np.zeros((n, graph.k, 0))

    rows = np.arange(n)
    total = 0.0
    best = math.inf
    best_assign: tuple[int, ...] = ()
    for assign in _assignments(n, sizes):
        v = lifted[rows, assign].sum(axis=0) / n
        sq = float(v @ v)
        total += sq
        if sq < best:
            best = sq
            best_assign = tuple(int(c) for c in assign)
    return EnumerationReport(count, total / count, best, best_assign)


def enumerate_colorful(classes, graph: LiftingGraph | None = None) -> EnumerationReport:
    """Exhaust every per-class cyclic shift choice.

    classes is a sequence of equally sized point sets (k points each).
    Shift t routes member i of a class to graph node (i + t) mod k. The
    score of a shift tuple is ||c(X)||^2 for the mean of the lifted class
    points, built with explicit tensors.
    """
    mats = [c.coords if isinstance(c, PointSet) else PointSet(c).coords for c in classes]
    n = len(mats)
    if n == 0:
        raise ValueError("need at least one class")
    k = mats[0].shape[0]
    if any(m.shape != mats[0].shape for m in mats):
        raise ValueError("classes must share size and dimension")
    if graph is None:
        graph = make_graph("star", k)
    if graph.k != k:
        raise ValueError("graph order must equal the class size")
    count = k ** n
    if count > ENUMERATION_GUARD:
        raise ValueError("instance too large for oracle")

    lift = explicit_q_vectors(graph)
    width = lift.vectors.shape[1]
    # lifted[s, t] is class s lifted under shift t
    lifted = np.zeros((n, k, width * mats[0].shape[1]))
    for s in range(n):
        for t in range(k):
            if width:
                lifted[s, t] = sum(
                    explicit_tensor(mats[s][i], lift.vectors[(i + t) % k]) for i in range(k)
                )

    total = 0.0
    best = math.inf
    best_assign: tuple[int, ...] = ()
    rows = np.arange(n)
    # a traversal picks one shifted class lift per class, so the centroid
    # divides by the class count
    for shifts in itertools.product(range(k), repeat=n):
        v = lifted[rows, shifts].sum(axis=0) / n
        sq = float(v @ v)
        total += sq
        if sq < best:
            best = sq
            best_assign = shifts
    return EnumerationReport(count, total / count, best, best_assign)


def dist_to_hull(x, points, tol: float | None = None) -> float:
    """Euclidean distance from x to the convex hull of the points.

    Conditional-gradient iteration over the vertex set with exact line
    search; stops once the duality gap pins the distance to an interval
    of width tol (default 1e-7 times the diameter). Returns the upper end
    of that interval.

    Raises:
        ConvergenceError: if the interval is still too wide after the
            iteration budget; the error carries the bracketing interval.
    """
    x = as_point(x)
    arr = points.coords if isinstance(points, PointSet) else PointSet(points).coords
    if arr.shape[0] == 0:
        raise ValueError("empty point set")
    if arr.shape[1] != x.shape[0]:
        raise ValueError("dimension mismatch")
    if tol is None:
        diam, _ = diameter_bound(arr)
        tol = 1e-7 * diam
    tol = max(float(tol), 0.0)

    # start at the vertex closest to x
    diff = arr - x
    sq0 = np.einsum("ij,ij->i", diff, diff)
    y = arr[int(np.argmin(sq0))].astype(np.float64).copy()

    lower = 0.0
    upper = math.sqrt(float(np.min(sq0)))
    for it in range(MAX_HULL_ITERATIONS):
        g = y - x
        f = float(g @ g)
        scores = arr @ g
        v = arr[int(np.argmin(scores))]
        gap = float(g @ (y - v))
        upper = math.sqrt(f)
        lower = math.sqrt(max(f - 2.0 * gap, 0.0))
        if upper - lower <= tol:
            return upper
        vy = v - y
        denom = float(vy @ vy)
        if denom == 0.0:
            return upper
        step = min(1.0, max(0.0, float((x - y) @ vy) / denom))
        if step == 0.0:
            return upper
        y += step * vy
    raise ConvergenceError(lower, upper, MAX_HULL_ITERATIONS)


def depth_2d_exact(x, points) -> int:
    """Exact closed-halfplane (Tukey) depth of x in the plane.

    Evaluates the point count of every closed halfplane whose boundary
    passes through x, sweeping the perpendiculars of all point offsets
    plus the midpoints of consecutive critical angles. Only d = 2 and at
    most 1000 points are supported.
    """
    x = as_point(x)
    arr = points.coords if isinstance(points, PointSet) else PointSet(points).coords
    if x.shape[0] != 2 or arr.shape[1] != 2:
        raise ValueError("depth oracle only supports dimension 2")
    if arr.shape[0] > 1000:
        raise ValueError("instance too large for oracle")
    if arr.shape[0] == 0:
        raise ValueError("empty point set")

    offsets = arr - x
    nz = offsets[np.einsum("ij,ij->i", offsets, offsets) > 0.0]
    if nz.shape[0] == 0:
        return arr.shape[0]

    perps = np.concatenate([np.stack([-nz[:, 1], nz[:, 0]], axis=1), np.stack([nz[:, 1], -nz[:, 0]], axis=1)])
    angles = np.sort(np.arctan2(perps[:, 1], perps[:, 0]))
    mids = (angles + np.diff(np.concatenate([angles, [angles[0] + 2 * math.pi]])) / 2.0)
    cand = np.concatenate([angles, mids])
    dirs = np.stack([np.cos(cand), np.sin(cand)], axis=1)
    dirs = np.concatenate([perps, dirs])  # exact perpendiculars keep boundary cases exact

    counts = (offsets @ dirs.T >= 0.0).sum(axis=0)
    return int(counts.min())
