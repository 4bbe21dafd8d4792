"""Point-set primitives shared by the partitioning algorithms.

Everything runs on float64 numpy arrays. A point is a 1-d array; a point
set wraps an (n, d) array whose row order is significant, because every
certificate refers to points by row index. Arrays inside the frozen
containers are marked read-only.
"""

from __future__ import annotations

import math
from dataclasses import dataclass

import numpy as np

__all__ = [
    "DEGENERATE_DIRECTION_TOL",
    "Ball",
    "LineThroughOrigin",
    "PointSet",
    "as_point",
    "centroid",
    "diameter_bound",
    "diameter_exact",
    "diameter_upper",
    "project_orthogonal",
    "translate",
]

DEGENERATE_DIRECTION_TOL = 1e-12

# Largest n for which the exact O(n^2 d) diameter is computed by default;
# beyond it the 2-approximation around the centroid is used instead.
DIAMETER_EXACT_DEFAULT_THRESHOLD = 4096

_PAIR_BLOCK = 64  # rows per block in the pairwise diameter scan


def as_point(p) -> np.ndarray:
    """Coerce to a finite 1-d float64 coordinate array."""
    arr = np.asarray(p, dtype=np.float64)
    if arr.ndim != 1 or arr.size == 0:
        raise ValueError("a point must be a non-empty 1-d coordinate sequence")
    if not np.all(np.isfinite(arr)):
        raise ValueError("point coordinates must be finite")
    return arr


@dataclass(frozen=True, eq=False)
class PointSet:
    """Ordered point set in R^d stored as an (n, d) float64 array."""

    coords: np.ndarray

    def __post_init__(self) -> None:
        arr = np.ascontiguousarray(np.asarray(self.coords, dtype=np.float64))
        if arr.ndim != 2:
            raise ValueError("coordinates must form an (n, d) array")
        if arr.shape[1] < 1:
            raise ValueError("dimension must be at least 1")
        if not np.all(np.isfinite(arr)):
            raise ValueError("coordinates must be finite")
        arr.setflags(write=False)
        object.__setattr__(self, "coords", arr)

    @property
    def n(self) -> int:
        return self.coords.shape[0]

    @property
    def dim(self) -> int:
        return self.coords.shape[1]

    def __len__(self) -> int:
        return self.n

    def subset(self, indices) -> "PointSet":
        """New PointSet holding the given rows, in the given order."""
        return PointSet(self.coords[np.asarray(indices, dtype=np.intp)])


@dataclass(frozen=True, eq=False)
class Ball:
    """Closed Euclidean ball."""

    center: np.ndarray
    radius: float

    def __post_init__(self) -> None:
        c = as_point(self.center)
        c.setflags(write=False)
        object.__setattr__(self, "center", c)
        r = float(self.radius)
        if not (math.isfinite(r) and r >= 0.0):
            raise ValueError("ball radius must be finite and non-negative")
        object.__setattr__(self, "radius", r)

    def contains(self, p, tol: float = 0.0) -> bool:
        return float(np.linalg.norm(as_point(p) - self.center)) <= self.radius + tol


@dataclass(frozen=True, eq=False)
class LineThroughOrigin:
    """Line through the origin, stored as a unit direction vector."""

    direction: np.ndarray

    def __post_init__(self) -> None:
        d = as_point(self.direction)
        nrm = float(np.linalg.norm(d))
        if abs(nrm - 1.0) > DEGENERATE_DIRECTION_TOL:
            raise ValueError("line direction must be a unit vector")
        d.setflags(write=False)
        object.__setattr__(self, "direction", d)

    @classmethod
    def through(cls, v) -> "LineThroughOrigin":
        """Normalize v and build the line it spans."""
        v = as_point(v)
        nrm = float(np.linalg.norm(v))
        if nrm <= DEGENERATE_DIRECTION_TOL:
            raise ValueError("degenerate projection direction")
        return cls(v / nrm)


def _coords(points) -> np.ndarray:
    if isinstance(points, PointSet):
        return points.coords
    return PointSet(points).coords


def centroid(points, compensated: bool = False) -> np.ndarray:
    """Arithmetic mean of the rows.

    With compensated=True each coordinate is accumulated with exact
    (fsum) summation; the default sums in input order via numpy.
    """
    arr = _coords(points)
    if arr.shape[0] == 0:
        raise ValueError("empty point set")
    if compensated:
        return np.array([math.fsum(arr[:, j]) for j in range(arr.shape[1])]) / arr.shape[0]
    return arr.sum(axis=0) / arr.shape[0]


def diameter_exact(points) -> float:
    """Largest pairwise distance, by blocked O(n^2 d) scan."""
    arr = _coords(points)
    n = arr.shape[0]
    if n == 0:
        raise ValueError("empty point set")
    if n == 1:
        return 0.0
    best = 0.0
    for lo in range(0, n, _PAIR_BLOCK):
        block = arr[lo : lo + _PAIR_BLOCK]
        diff = block[:, None, :] - arr[None, lo:, :]
        sq = np.einsum("ijk,ijk->ij", diff, diff)
        m = float(sq.max())
        if m > best:
            best = m
    return math.sqrt(best)


def diameter_upper(points) -> float:
    """2 * max distance to the centroid; always within [diam, 2 diam]."""
    arr = _coords(points)
    if arr.shape[0] == 0:
        raise ValueError("empty point set")
    c = centroid(arr)
    diff = arr - c
    return 2.0 * math.sqrt(float(np.einsum("ij,ij->i", diff, diff).max()))


def diameter_bound(points, exact_threshold: int = DIAMETER_EXACT_DEFAULT_THRESHOLD) -> tuple[float, bool]:
    """Diameter value plus a flag telling whether it is exact.

    Sets with at most exact_threshold points get the exact pairwise
    diameter; larger ones get the centroid-based upper bound.
    """
    arr = _coords(points)
    if arr.shape[0] <= exact_threshold:
        return diameter_exact(arr), True
    return diameter_upper(arr), False


def translate(points: PointSet, v) -> PointSet:
    """Shift every point by v."""
    arr = _coords(points)
    v = as_point(v)
    if v.shape[0] != arr.shape[1]:
        raise ValueError("dimension mismatch between point set and translation")
    return PointSet(arr + v)


def project_orthogonal(p, v, tol: float = DEGENERATE_DIRECTION_TOL) -> np.ndarray:
    """Project p onto the hyperplane through the origin orthogonal to v.

    Raises:
        ValueError: if ``norm(v) <= tol`` ("degenerate projection direction").
    """
    p = as_point(p)
    v = as_point(v)
    if p.shape != v.shape:
        raise ValueError("dimension mismatch between point and direction")
    vv = float(v @ v)
    if math.sqrt(vv) <= tol:
        raise ValueError("degenerate projection direction")
    return p - (float(p @ v) / vv) * v
