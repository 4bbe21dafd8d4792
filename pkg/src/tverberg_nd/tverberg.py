"""Prescribed-size point partitioning with dimension-free radius guarantees.

The partitioners assign points to k classes one at a time, processing the
rows in reverse input order on centered coordinates. Over a uniformly
random size-respecting assignment of the rows not yet placed, the
conditional expectation of the final squared lifted-centroid norm depends
on the class i chosen for the current point only through

    coef_n * deg[i] + coef_r * quota_bal[i] + <w, sum_bal[i]>

where the two per-class arrays are read off the lifting graph,

    quota_bal[i] = 2 * (quota[i] * deg[i] - sum of neighbor quotas)
    sum_bal[i]   = 2 * (deg[i] * assigned[i] - sum of neighbor assigned)

with quota[i] the remaining capacity of class i and assigned[i] the sum
of centered points placed in it so far, and the step scalars are built
from prefix aggregates of the t rows still unplaced after this one:

    coef_n = ||p||^2 - 2<p, cp> - Q2/t + 2*corr
    coef_r = <p, cp> - corr            w = p - cp
    corr   = (||S||^2 - Q2) / (t(t-1))

with S and Q2 the prefix sums of the unplaced rows and their squared
norms, cp = S/t their centroid (the corr term exists for t >= 2, the
Q2 and cp terms for t >= 1). Choosing a class whose value does not
exceed the quota-weighted class average, which equals the conditional
expectation before the choice, can never increase that expectation, so
the finished traversal is at most the average over all assignments; the
emitted radius guarantees rest on that dominance.

A heap-shaped search tree over the classes caches subtree totals of the
objective ingredients, so a qualifying class is usually found by descent
instead of a scan: when a node does not qualify, the search recurses
into the child subtree with the smallest mean. Exhausted classes are
skipped; if the descent dead-ends (subtree means weight classes
uniformly, so a low mean can hide behind exhausted entries), a linear
scan over feasible classes picks the smallest objective, lowest index
winning ties. Both paths return a class at or below the weighted
average, which always exists because that average runs over feasible
classes only.

Two state layouts implement the bookkeeping:

* general sizes lift through a balanced arity-ary tree, which then doubles
  as the search tree, so every update touches one node and its tree
  neighborhood;
* equal sizes lift through a star. There the hub neighbors every leaf, so
  hub assignments shift all leaf entries at once by the same amount; the
  leaf entries are therefore stored relative to a shared scalar/vector
  offset, the search tree is a separate balanced ternary heap over the
  classes (class index = heap position), and every update stays O(d).
"""

from __future__ import annotations

import math
from dataclasses import dataclass

import numpy as np

from .geom import (
    DIAMETER_EXACT_DEFAULT_THRESHOLD,
    Ball,
    PointSet,
    centroid,
    diameter_bound,
)
from .lifting import LiftingGraph, heap_children, heap_parent, make_graph, quadratic_form

__all__ = [
    "CertificateError",
    "CheckResult",
    "InfeasibleError",
    "SizeSpec",
    "TverbergCertificate",
    "apply_selection",
    "check_certificate",
    "partition_balanced",
    "partition_general",
    "partition_nearly_balanced",
    "radius_bound",
    "select_class",
    "step_coefficients",
    "step_objective",
    "traversal_norm_bound",
]

ABS_GUARD = 1e-15  # absolute slack so zero-diameter inputs compare cleanly
REL_SLACK = 1e-9


class InfeasibleError(ValueError):
    """Parameters that cannot produce a partition."""


class CertificateError(RuntimeError):
    """A produced certificate failed its own recomputation checks."""

    def __init__(self, failures):
        super().__init__("certificate checks failed: " + "; ".join(f.name for f in failures))
        self.failures = list(failures)


@dataclass(frozen=True)
class SizeSpec:
    """Prescribed class sizes, one positive entry per class."""

    sizes: tuple[int, ...]

    def __post_init__(self) -> None:
        sizes = tuple(int(r) for r in self.sizes)
        if len(sizes) == 0:
            raise InfeasibleError("need at least one class")
        if any(r < 1 for r in sizes):
            raise InfeasibleError("class sizes must be positive")
        object.__setattr__(self, "sizes", sizes)

    @property
    def k(self) -> int:
        return len(self.sizes)

    @property
    def total(self) -> int:
        return sum(self.sizes)


def _as_sizes(sizes) -> tuple[int, ...]:
    if isinstance(sizes, SizeSpec):
        return sizes.sizes
    return SizeSpec(tuple(sizes)).sizes


def _tree_height(k: int, arity: int) -> int:
    h = 0
    x = k - 1
    while x > 0:
        x = heap_parent(x, arity)
        h += 1
    return h


class _GeneralState:
    """Objective bookkeeping when the lifting tree is the search tree."""

    def __init__(self, graph: LiftingGraph, sizes: tuple[int, ...], dim: int):
        if graph.arity is None:
            raise ValueError("general state needs a balanced arity-ary lifting tree")
        k = graph.k
        self.graph = graph
        self.k = k
        self.tree_arity = graph.arity
        self.height = _tree_height(k, graph.arity)
        self.quota = np.asarray(sizes, dtype=np.int64).copy()
        self.deg = graph.degrees.astype(np.float64)
        nbr_quota = np.array(
            [sum(int(self.quota[j]) for j in graph.adjacency[i]) for i in range(k)],
            dtype=np.float64,
        )
        self.quota_bal = 2.0 * (self.quota * self.deg - nbr_quota)
        self.sum_bal = np.zeros((k, dim))
        self.size = np.ones(k, dtype=np.int64)
        self.deg_sub = self.deg.copy()
        self.quota_bal_sub = self.quota_bal.copy()
        self.sum_bal_sub = np.zeros((k, dim))
        for x in range(k - 1, 0, -1):
            pa = heap_parent(x, self.tree_arity)
            self.size[pa] += self.size[x]
            self.deg_sub[pa] += self.deg_sub[x]
            self.quota_bal_sub[pa] += self.quota_bal_sub[x]

    def children(self, x: int) -> range:
        return heap_children(x, self.tree_arity, self.k)

    def objective(self, i: int, coef_n: float, coef_r: float, w: np.ndarray) -> float:
        return coef_n * self.deg[i] + coef_r * self.quota_bal[i] + float(self.sum_bal[i] @ w)

    def subtree_average(self, x: int, coef_n: float, coef_r: float, w: np.ndarray) -> float:
        tot = (
            coef_n * self.deg_sub[x]
            + coef_r * self.quota_bal_sub[x]
            + float(self.sum_bal_sub[x] @ w)
        )
        return tot / self.size[x]

    def root_average(self, coef_n: float, coef_r: float, w: np.ndarray) -> float:
        return self.subtree_average(0, coef_n, coef_r, w)

    def weighted_average(self, coef_n: float, coef_r: float, w: np.ndarray) -> float:
        """Quota-weighted class average; equals the pre-choice expectation."""
        s = int(self.quota.sum())
        q = self.quota.astype(np.float64)
        tot = (
            coef_n * float(q @ self.deg)
            + coef_r * float(q @ self.quota_bal)
            + float((q @ self.sum_bal) @ w)
        )
        return tot / s

    def feasible_argmin(self, coef_n: float, coef_r: float, w: np.ndarray) -> int:
        vals = coef_n * self.deg + coef_r * self.quota_bal + self.sum_bal @ w
        vals = np.where(self.quota > 0, vals, np.inf)
        best = int(np.argmin(vals))
        if not math.isfinite(vals[best]):
            raise InfeasibleError("size spec exhausted")
        return best

    def apply(self, i: int, p: np.ndarray) -> None:
        self.quota[i] -= 1
        two_p = 2.0 * p
        self.quota_bal[i] -= 2.0 * self.deg[i]
        self.sum_bal[i] += self.deg[i] * two_p
        for j in self.graph.adjacency[i]:
            self.quota_bal[j] += 2.0
            self.sum_bal[j] -= two_p
        # Subtree totals: node i's subtree nets (-2, +2p) unless i is the
        # root (then 0); each child subtree nets (+2, -2p); every ancestor
        # subtree contains i, its children, and its parent, netting 0.
        if i != 0:
            self.quota_bal_sub[i] -= 2.0
            self.sum_bal_sub[i] += two_p
        for c in self.children(i):
            self.quota_bal_sub[c] += 2.0
            self.sum_bal_sub[c] -= two_p

    # -- introspection used by the recomputation tests --

    def quota_balance(self) -> np.ndarray:
        return self.quota_bal.copy()

    def sum_balance(self) -> np.ndarray:
        return self.sum_bal.copy()


class _StarState:
    """Objective bookkeeping for the star lifting with equal class sizes.

    Class 0 is the hub. Leaf entries are stored relative to shared
    offsets (q_off, s_off) so a hub assignment, which moves every leaf by
    the same amount, costs O(d) instead of O(k d):

        true quota_bal[leaf i] = qb[i] + q_off      qb[i] = 2 * quota[i]
        true sum_bal[leaf i]   = sb[i] + s_off      sb[i] = 2 * assigned[i]

    and the hub row qb[0], sb[0] is stored outright. Subtree totals over
    the ternary search heap track only the stored parts; reads add
    leafcnt[x] times the offsets back in.
    """

    def __init__(self, k: int, per_class: int, dim: int):
        self.k = k
        self.tree_arity = 3
        self.height = _tree_height(k, 3)
        self.quota = np.full(k, per_class, dtype=np.int64)
        deg = np.ones(k)
        deg[0] = k - 1
        self.deg = deg
        self.qb = np.full(k, 2.0 * per_class)
        self.qb[0] = 0.0
        self.q_off = -2.0 * per_class
        self.sb = np.zeros((k, dim))
        self.s_off = np.zeros(dim)
        self._leafmask = np.ones(k)
        self._leafmask[0] = 0.0
        self.size = np.ones(k, dtype=np.int64)
        self.deg_sub = self.deg.copy()
        self.qb_sub = self.qb.copy()
        self.sb_sub = np.zeros((k, dim))
        for x in range(k - 1, 0, -1):
            pa = heap_parent(x, 3)
            self.size[pa] += self.size[x]
            self.deg_sub[pa] += self.deg_sub[x]
            self.qb_sub[pa] += self.qb_sub[x]
        self.leafcnt = self.size.astype(np.float64)
        self.leafcnt[0] -= 1.0  # the hub sits at the heap root

    def children(self, x: int) -> range:
        return heap_children(x, 3, self.k)

    def objective(self, i: int, coef_n: float, coef_r: float, w: np.ndarray) -> float:
        if i == 0:
            return coef_n * self.deg[0] + coef_r * self.qb[0] + float(self.sb[0] @ w)
        return (
            coef_n
            + coef_r * (self.qb[i] + self.q_off)
            + float(self.sb[i] @ w)
            + float(self.s_off @ w)
        )

    def subtree_average(self, x: int, coef_n: float, coef_r: float, w: np.ndarray) -> float:
        lc = self.leafcnt[x]
        tot = (
            coef_n * self.deg_sub[x]
            + coef_r * (self.qb_sub[x] + lc * self.q_off)
            + float(self.sb_sub[x] @ w)
            + lc * float(self.s_off @ w)
        )
        return tot / self.size[x]

    def root_average(self, coef_n: float, coef_r: float, w: np.ndarray) -> float:
        return self.subtree_average(0, coef_n, coef_r, w)

    def weighted_average(self, coef_n: float, coef_r: float, w: np.ndarray) -> float:
        """Quota-weighted class average; equals the pre-choice expectation."""
        s = int(self.quota.sum())
        q = self.quota.astype(np.float64)
        leaf_q = float(q.sum() - q[0])
        tot = (
            coef_n * float(q @ self.deg)
            + coef_r * (float(q @ self.qb) + leaf_q * self.q_off)
            + float((q @ self.sb) @ w)
            + leaf_q * float(self.s_off @ w)
        )
        return tot / s

    def feasible_argmin(self, coef_n: float, coef_r: float, w: np.ndarray) -> int:
        vals = (
            coef_n * self.deg
            + coef_r * (self.qb + self.q_off * self._leafmask)
            + self.sb @ w
            + float(self.s_off @ w) * self._leafmask
        )
        vals = np.where(self.quota > 0, vals, np.inf)
        best = int(np.argmin(vals))
        if not math.isfinite(vals[best]):
            raise InfeasibleError("size spec exhausted")
        return best

    def apply(self, i: int, p: np.ndarray) -> None:
        self.quota[i] -= 1
        two_p = 2.0 * p
        if i == 0:
            km1 = float(self.k - 1)
            self.qb[0] -= 2.0 * km1
            self.q_off += 2.0
            self.sb[0] += km1 * two_p
            self.s_off -= two_p
            self.qb_sub[0] -= 2.0 * km1
            self.sb_sub[0] += km1 * two_p
        else:
            self.qb[i] -= 2.0
            self.sb[i] += two_p
            self.qb[0] += 2.0
            self.sb[0] -= two_p
            # Stored path totals change below the root only: the root's
            # subtree nets the leaf's (-2, +2p) against the hub's (+2, -2p).
            x = i
            while x != 0:
                self.qb_sub[x] -= 2.0
                self.sb_sub[x] += two_p
                x = heap_parent(x, 3)

    def quota_balance(self) -> np.ndarray:
        return self.qb + self.q_off * self._leafmask

    def sum_balance(self) -> np.ndarray:
        return self.sb + np.outer(self._leafmask, self.s_off)


def step_objective(state, class_index: int, coef_n: float, coef_r: float, w) -> float:
    """Class-dependent part of the conditional expectation for one choice."""
    if not 0 <= class_index < state.k:
        raise ValueError("class index out of range")
    return state.objective(
        class_index, float(coef_n), float(coef_r), np.asarray(w, dtype=np.float64)
    )


def step_coefficients(point, t: int, prefix_sum, prefix_sq: float):
    """Per-step scalars (coef_n, coef_r, w) from the unplaced-prefix aggregates.

    t is the number of rows still unplaced after the current one,
    prefix_sum their coordinate sum, prefix_sq the sum of their squared
    norms. Dropping class-independent constants, the conditional
    expectation of the squared lifted-sum norm after assigning `point`
    to class i is coef_n*deg[i] + coef_r*quota_bal[i] + <w, sum_bal[i]>.
    """
    p = np.asarray(point, dtype=np.float64)
    alpha = float(p @ p)
    if t == 0:
        return alpha, 0.0, p
    s = np.asarray(prefix_sum, dtype=np.float64)
    cp = s / t
    beta = float(p @ cp)
    corr = (float(s @ s) - prefix_sq) / (t * (t - 1)) if t >= 2 else 0.0
    coef_n = alpha - 2.0 * beta - prefix_sq / t + 2.0 * corr
    coef_r = beta - corr
    return coef_n, coef_r, p - cp


def select_class(state, coef_n: float, coef_r: float, w) -> int:
    """Pick a feasible class at or below the quota-weighted class average.

    Descends the search tree toward small subtree means; a dead end falls
    back to a linear scan over feasible classes that takes the smallest
    objective (lowest index on ties). The returned class always has
    remaining quota, and its objective never exceeds the weighted average,
    so the running conditional expectation cannot grow.
    """
    w = np.asarray(w, dtype=np.float64)
    coef_n = float(coef_n)
    coef_r = float(coef_r)
    target = state.weighted_average(coef_n, coef_r, w)
    x = 0
    for _ in range(state.height + 2):
        if state.quota[x] > 0 and state.objective(x, coef_n, coef_r, w) <= target:
            return x
        nxt = -1
        best = math.inf
        for c in state.children(x):
            avg = state.subtree_average(c, coef_n, coef_r, w)
            if avg < best:
                best = avg
                nxt = c
        if nxt < 0 or best >= target:
            break
        x = nxt
    return state.feasible_argmin(coef_n, coef_r, w)


def apply_selection(state, class_index: int, point) -> None:
    """Commit the assignment, updating per-class and subtree bookkeeping."""
    if not 0 <= class_index < state.k:
        raise ValueError("class index out of range")
    if state.quota[class_index] <= 0:
        raise InfeasibleError("size spec exhausted")
    state.apply(class_index, np.asarray(point, dtype=np.float64))


def _traverse(centered: np.ndarray, state) -> np.ndarray:
    """Assign every row to a class, scanning rows in reverse order."""
    n = centered.shape[0]
    prefix = np.cumsum(centered, axis=0)
    sq = np.einsum("ij,ij->i", centered, centered)
    sq_prefix = np.cumsum(sq)
    assign = np.empty(n, dtype=np.int64)
    for t in range(n - 1, -1, -1):
        p = centered[t]
        if t > 0:
            coef_n, coef_r, w = step_coefficients(p, t, prefix[t - 1], float(sq_prefix[t - 1]))
        else:
            coef_n, coef_r, w = step_coefficients(p, 0, None, 0.0)
        i = select_class(state, coef_n, coef_r, w)
        apply_selection(state, i, p)
        assign[t] = i
    return assign


def _ceil_log(k: int, base: int) -> int:
    """Smallest h with base**h >= k, computed in integers."""
    h = 0
    v = 1
    while v < k:
        v *= base
        h += 1
    return h


def radius_bound(
    mode: str,
    n: int,
    k: int,
    sizes=None,
    diam: float = 1.0,
    graph_stats=None,
    arity: int = 4,
) -> float:
    """Guaranteed covering radius for the given partition mode.

    general:         (n / min size) * sqrt(10 * ceil(log4 k) / (n-1)) * diam
                     for the default arity 4; other arities use the tree
                     stats as (n / min size) * sqrt(2*height*maxdeg/(n-1)) * diam
    balanced:        sqrt(k(k-1) / (n-1)) * diam
    nearly_balanced: sqrt((k+2)(k-1) / (n-1)) * diam
    """
    if k < 1:
        raise InfeasibleError("need at least one class")
    if k == 1 or n <= 1:
        return 0.0
    if mode == "balanced":
        return math.sqrt(k * (k - 1) / (n - 1)) * diam
    if mode == "nearly_balanced":
        return math.sqrt((k + 2) * (k - 1) / (n - 1)) * diam
    if mode == "general":
        if sizes is None:
            raise ValueError("general mode needs the size spec")
        min_size = min(_as_sizes(sizes))
        if arity == 4:
            return (n / min_size) * math.sqrt(10.0 * _ceil_log(k, 4) / (n - 1)) * diam
        if graph_stats is None:
            raise ValueError("non-default arity needs graph stats")
        return (
            (n / min_size)
            * math.sqrt(2.0 * graph_stats.diameter_or_height * graph_stats.max_degree / (n - 1))
            * diam
        )
    raise ValueError(f"unknown mode {mode!r}")


def traversal_norm_bound(mode: str, n: int, k: int, diam: float, max_degree: int | None = None) -> float:
    """Averaging bound that the produced lifted centroid must stay under.

    general graphs: sqrt(maxdeg / (2(n-1))) * diam; stars with equal
    class sizes: sqrt((k-1) / (k(n-1))) * diam.
    """
    if n <= 1 or k <= 1:
        return 0.0
    if mode == "general":
        if max_degree is None:
            raise ValueError("general mode needs the graph max degree")
        return math.sqrt(max_degree / (2.0 * (n - 1))) * diam
    if mode in ("balanced", "nearly_balanced"):
        return math.sqrt((k - 1) / (k * (n - 1))) * diam
    raise ValueError(f"unknown mode {mode!r}")


@dataclass(frozen=True, eq=False)
class TverbergCertificate:
    """Partition plus the measured and guaranteed covering radii.

    parts hold 0-based input row indices; part_centroids and the ball
    live in the original input coordinates. The ball radius equals
    radius_guaranteed; radius_achieved is the measured distance from the
    ball center to the farthest part centroid. traversal_centroid_norm is
    the norm of the mean lifted point of the run that produced the
    partition (for the nearly balanced mode: of its balanced sub-run),
    and must stay below traversal_norm_bound.
    """

    mode: str
    sizes: tuple[int, ...]
    arity: int | None
    parts: tuple[tuple[int, ...], ...]
    part_centroids: np.ndarray
    ball: Ball
    radius_guaranteed: float
    radius_achieved: float
    traversal_centroid_norm: float
    traversal_norm_bound: float
    diameter_used: float
    diameter_exact: bool

    @property
    def k(self) -> int:
        return len(self.parts)

    @property
    def n(self) -> int:
        return sum(self.sizes)


@dataclass(frozen=True)
class CheckResult:
    name: str
    ok: bool
    detail: str


def _parts_from_assign(assign: np.ndarray, k: int) -> tuple[tuple[int, ...], ...]:
    return tuple(tuple(int(i) for i in np.flatnonzero(assign == c)) for c in range(k))


def _assign_from_parts(parts, n: int) -> np.ndarray:
    assign = np.full(n, -1, dtype=np.int64)
    for c, part in enumerate(parts):
        for i in part:
            assign[i] = c
    return assign


def _part_centroids(coords: np.ndarray, parts) -> np.ndarray:
    return np.stack([coords[list(part)].mean(axis=0) for part in parts])


def _traversal_norm(coords: np.ndarray, assign: np.ndarray, graph: LiftingGraph) -> float:
    """Norm of the mean lifted point for the given assignment.

    Works on coordinates centered over the rows that took part in the
    run, so callers pass exactly those rows.
    """
    n = coords.shape[0]
    centered = coords - coords.mean(axis=0)
    sums = np.zeros((graph.k, coords.shape[1]))
    np.add.at(sums, assign, centered)
    return math.sqrt(max(quadratic_form(graph, sums), 0.0)) / n


def _graph_for_mode(mode: str, k: int, arity: int | None) -> LiftingGraph:
    if mode == "general":
        return make_graph("balanced_ary", k, arity if arity is not None else 4)
    return make_graph("star", k)


def _expected_center(mode: str, coords: np.ndarray, cents: np.ndarray) -> np.ndarray:
    if mode == "general":
        return coords.mean(axis=0)
    return cents[0]


def check_certificate(cert: TverbergCertificate, points: PointSet) -> list[CheckResult]:
    """Recompute every certificate claim from the raw input.

    Returns one CheckResult per claim; callers decide whether failures
    are fatal. The partition constructors run this and raise.
    """
    coords = _as_point_set(points).coords
    n, _ = coords.shape
    k = cert.k
    checks: list[CheckResult] = []
    scale = max(cert.diameter_used, 1.0)

    def add(name: str, ok: bool, detail: str = "") -> None:
        checks.append(CheckResult(name, bool(ok), detail))

    flat = sorted(i for part in cert.parts for i in part)
    add("partition_covers_input", flat == list(range(n)), f"{len(flat)} of {n} rows")
    add(
        "part_sizes_match",
        tuple(len(p) for p in cert.parts) == cert.sizes and sum(cert.sizes) == n,
        f"sizes={tuple(len(p) for p in cert.parts)}",
    )
    if cert.mode == "nearly_balanced":
        m = n // k
        expected = tuple(m + 1 if j < n - m * k else m for j in range(k))
        add("nearly_balanced_size_pattern", cert.sizes == expected, f"expected {expected}")
    if flat != list(range(n)):
        return checks  # nothing else is well defined

    cents = _part_centroids(coords, cert.parts)
    cent_err = float(np.abs(cents - cert.part_centroids).max())
    add("part_centroids_match", cent_err <= REL_SLACK * scale + ABS_GUARD, f"max err {cent_err:.3e}")

    expected_center = _expected_center(cert.mode, coords, cents)
    center_err = float(np.linalg.norm(expected_center - cert.ball.center))
    add("ball_center_matches_mode", center_err <= REL_SLACK * scale + ABS_GUARD, f"err {center_err:.3e}")

    achieved = float(np.sqrt(((cents - cert.ball.center) ** 2).sum(axis=1)).max())
    add(
        "radius_achieved_matches",
        abs(achieved - cert.radius_achieved) <= REL_SLACK * scale + ABS_GUARD,
        f"measured {achieved!r} stored {cert.radius_achieved!r}",
    )
    slack = REL_SLACK * cert.diameter_used + ABS_GUARD
    add(
        "radius_within_guarantee",
        achieved <= cert.radius_guaranteed + slack,
        f"achieved {achieved!r} guaranteed {cert.radius_guaranteed!r}",
    )

    diam_recomputed, _ = diameter_bound(points, n if cert.diameter_exact else 0)
    diam_err = abs(diam_recomputed - cert.diameter_used)
    add("diameter_matches", diam_err <= REL_SLACK * scale + ABS_GUARD, f"err {diam_err:.3e}")

    if cert.mode == "general":
        use_arity = cert.arity if cert.arity else 4
        gstats = None
        if use_arity != 4:
            from .lifting import stats

            gstats = stats(_graph_for_mode("general", k, use_arity))
        guar = radius_bound(
            "general", n, k, cert.sizes, cert.diameter_used, graph_stats=gstats, arity=use_arity
        )
    else:
        guar = radius_bound(cert.mode, n, k, diam=cert.diameter_used)
    add(
        "guarantee_formula",
        abs(guar - cert.radius_guaranteed) <= REL_SLACK * max(guar, 1.0) + ABS_GUARD,
        f"recomputed {guar!r} stored {cert.radius_guaranteed!r}",
    )

    graph = _graph_for_mode(cert.mode, k, cert.arity)
    if cert.mode == "nearly_balanced":
        n0 = (n // k) * k
        assign = _assign_from_parts(cert.parts, n)[:n0]
        norm = _traversal_norm(coords[:n0], assign, graph)
        bound = traversal_norm_bound(cert.mode, n0, k, cert.diameter_used)
    else:
        assign = _assign_from_parts(cert.parts, n)
        norm = _traversal_norm(coords, assign, graph)
        if cert.mode == "general":
            maxdeg = max(graph.degree(i) for i in range(k))
            bound = traversal_norm_bound("general", n, k, cert.diameter_used, maxdeg)
        else:
            bound = traversal_norm_bound("balanced", n, k, cert.diameter_used)
    add(
        "traversal_norm_matches",
        abs(norm - cert.traversal_centroid_norm) <= REL_SLACK * scale + ABS_GUARD,
        f"recomputed {norm!r} stored {cert.traversal_centroid_norm!r}",
    )
    add(
        "traversal_norm_within_bound",
        cert.traversal_centroid_norm <= cert.traversal_norm_bound + slack,
        f"norm {cert.traversal_centroid_norm!r} bound {cert.traversal_norm_bound!r}",
    )
    add(
        "traversal_bound_formula",
        abs(bound - cert.traversal_norm_bound) <= REL_SLACK * max(bound, 1.0) + ABS_GUARD,
        f"recomputed {bound!r} stored {cert.traversal_norm_bound!r}",
    )
    return checks


def _raise_on_failure(cert: TverbergCertificate, points: PointSet) -> TverbergCertificate:
    failures = [c for c in check_certificate(cert, points) if not c.ok]
    if failures:
        raise CertificateError(failures)
    return cert


def _as_point_set(points) -> PointSet:
    return points if isinstance(points, PointSet) else PointSet(points)


def partition_general(
    points,
    sizes,
    arity: int = 4,
    diameter_exact_threshold: int = DIAMETER_EXACT_DEFAULT_THRESHOLD,
) -> TverbergCertificate:
    """Partition into classes of the prescribed sizes.

    The lifting graph is a balanced arity-ary tree; the ball is centered
    at the input centroid. Raises InfeasibleError when the sizes do not
    sum to n or there are more classes than points.
    """
    pts = _as_point_set(points)
    sizes = _as_sizes(sizes)
    n, d = pts.n, pts.dim
    k = len(sizes)
    if k > n:
        raise InfeasibleError("more classes than points")
    if sum(sizes) != n:
        raise InfeasibleError("class sizes must sum to the number of points")
    if arity < 2:
        raise InfeasibleError("tree arity must be at least 2")

    graph = make_graph("balanced_ary", k, arity)
    center = centroid(pts)
    centered = pts.coords - center
    assign = _traverse(centered, _GeneralState(graph, sizes, d))

    parts = _parts_from_assign(assign, k)
    cents = _part_centroids(pts.coords, parts)
    diam, diam_exact = diameter_bound(pts, diameter_exact_threshold)
    gstats = None
    if arity != 4:
        from .lifting import stats

        gstats = stats(graph)
    guaranteed = radius_bound("general", n, k, sizes, diam, graph_stats=gstats, arity=arity)
    achieved = float(np.sqrt(((cents - center) ** 2).sum(axis=1)).max())
    norm = _traversal_norm(pts.coords, assign, graph)
    maxdeg = max(graph.degree(i) for i in range(k))
    bound = traversal_norm_bound("general", n, k, diam, maxdeg)

    cert = TverbergCertificate(
        mode="general",
        sizes=sizes,
        arity=arity,
        parts=parts,
        part_centroids=cents,
        ball=Ball(center, guaranteed),
        radius_guaranteed=guaranteed,
        radius_achieved=achieved,
        traversal_centroid_norm=norm,
        traversal_norm_bound=bound,
        diameter_used=diam,
        diameter_exact=diam_exact,
    )
    return _raise_on_failure(cert, pts)


def partition_balanced(
    points,
    k: int,
    diameter_exact_threshold: int = DIAMETER_EXACT_DEFAULT_THRESHOLD,
) -> TverbergCertificate:
    """Partition into k equal classes (k must divide n).

    Uses the star lifting; the ball is centered at the first part's
    centroid with guarantee sqrt(k(k-1)/(n-1)) * diam.
    """
    pts = _as_point_set(points)
    n, d = pts.n, pts.dim
    if k < 1:
        raise InfeasibleError("need at least one class")
    if k > n:
        raise InfeasibleError("more classes than points")
    if n % k != 0:
        raise InfeasibleError(
            "class count must divide the point count; use partition_nearly_balanced otherwise"
        )

    center = centroid(pts)
    centered = pts.coords - center
    assign = _traverse(centered, _StarState(k, n // k, d))

    parts = _parts_from_assign(assign, k)
    cents = _part_centroids(pts.coords, parts)
    diam, diam_exact = diameter_bound(pts, diameter_exact_threshold)
    guaranteed = radius_bound("balanced", n, k, diam=diam)
    achieved = float(np.sqrt(((cents - cents[0]) ** 2).sum(axis=1)).max())
    graph = make_graph("star", k)
    norm = _traversal_norm(pts.coords, assign, graph)
    bound = traversal_norm_bound("balanced", n, k, diam)

    cert = TverbergCertificate(
        mode="balanced",
        sizes=(n // k,) * k,
        arity=None,
        parts=parts,
        part_centroids=cents,
        ball=Ball(cents[0], guaranteed),
        radius_guaranteed=guaranteed,
        radius_achieved=achieved,
        traversal_centroid_norm=norm,
        traversal_norm_bound=bound,
        diameter_used=diam,
        diameter_exact=diam_exact,
    )
    return _raise_on_failure(cert, pts)


def partition_nearly_balanced(
    points,
    k: int,
    diameter_exact_threshold: int = DIAMETER_EXACT_DEFAULT_THRESHOLD,
) -> TverbergCertificate:
    """Partition into k classes whose sizes differ by at most one.

    Runs the balanced partitioner on the first k*floor(n/k) rows, then
    hands the trailing leftovers to parts 0, 1, ... round-robin. The
    guarantee widens to sqrt((k+2)(k-1)/(n-1)) * diam.
    """
    pts = _as_point_set(points)
    n, d = pts.n, pts.dim
    if k < 1:
        raise InfeasibleError("need at least one class")
    if k > n:
        raise InfeasibleError("more classes than points")
    if n % k == 0:
        return partition_balanced(pts, k, diameter_exact_threshold)

    m = n // k
    n0 = m * k
    sub = pts.coords[:n0]
    centered = sub - sub.mean(axis=0)
    assign = _traverse(centered, _StarState(k, m, d))

    parts = [list(np.flatnonzero(assign == c)) for c in range(k)]
    for j in range(n - n0):
        parts[j].append(n0 + j)
    parts = tuple(tuple(int(i) for i in part) for part in parts)

    cents = _part_centroids(pts.coords, parts)
    diam, diam_exact = diameter_bound(pts, diameter_exact_threshold)
    guaranteed = radius_bound("nearly_balanced", n, k, diam=diam)
    achieved = float(np.sqrt(((cents - cents[0]) ** 2).sum(axis=1)).max())
    graph = make_graph("star", k)
    norm = _traversal_norm(sub, assign, graph)
    bound = traversal_norm_bound("nearly_balanced", n0, k, diam)

    cert = TverbergCertificate(
        mode="nearly_balanced",
        sizes=tuple(len(p) for p in parts),
        arity=None,
        parts=parts,
        part_centroids=cents,
        ball=Ball(cents[0], guaranteed),
        radius_guaranteed=guaranteed,
        radius_achieved=achieved,
        traversal_centroid_norm=norm,
        traversal_norm_bound=bound,
        diameter_used=diam,
        diameter_exact=diam_exact,
    )
    return _raise_on_failure(cert, pts)
