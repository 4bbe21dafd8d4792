"""Rainbow partitioning of equally sized point classes.

Input: n classes of k points each. Output: k parts, each containing
exactly one point from every class, such that a ball of dimension-free
radius meets the convex hull of every part (it contains every part
centroid).

Parts are the nodes of a star lifting graph, node 0 the hub. Classes are
processed in reverse input order; class members are never split up
arbitrarily, instead the whole class is rotated onto the nodes by a
cyclic shift t (member i lands on node (i + t) mod k) and t is chosen to
exactly minimize the squared norm of the summed lifted points so far. The
average of that objective over all k shifts telescopes, which caps the
final spread of the per-node sums and yields the radius guarantee
sqrt(2 k (k-1) / N) * max class diameter, with N = n*k the total point
count.

Shift selection is translation invariant: moving all classes by a fixed
vector shifts every per-node sum equally, changing each shift's
objective by the same amount.
"""

from __future__ import annotations

import math
from dataclasses import dataclass

import numpy as np

from .geom import Ball, diameter_exact
from .lifting import make_graph, quadratic_form
from .tverberg import ABS_GUARD, REL_SLACK, CertificateError, CheckResult, InfeasibleError

__all__ = [
    "ColorInstance",
    "ColorfulCertificate",
    "check_colorful_certificate",
    "colorful_radius_bound",
    "partition_colorful",
    "shift_objective",
    "shift_objectives",
]


@dataclass(frozen=True, eq=False)
class ColorInstance:
    """n classes of k points each, stored as one (n, k, d) float array."""

    classes: np.ndarray

    def __post_init__(self) -> None:
        arr = np.asarray(self.classes, dtype=np.float64)
        if arr.ndim != 3:
            raise ValueError("classes must stack to an (n, k, d) array")
        if arr.shape[0] < 1 or arr.shape[1] < 1 or arr.shape[2] < 1:
            raise ValueError("need at least one class, one point per class, one coordinate")
        if not np.isfinite(arr).all():
            raise ValueError("coordinates must be finite")
        arr = np.ascontiguousarray(arr)
        arr.setflags(write=False)
        object.__setattr__(self, "classes", arr)

    @classmethod
    def from_arrays(cls, arrays) -> "ColorInstance":
        mats = [np.asarray(a, dtype=np.float64) for a in arrays]
        if not mats:
            raise ValueError("need at least one class")
        if any(m.ndim != 2 for m in mats):
            raise ValueError("every class must be a 2-d point array")
        if len({m.shape for m in mats}) != 1:
            raise ValueError("every class needs the same number of points and dimension")
        return cls(np.stack(mats))

    @property
    def n_classes(self) -> int:
        return self.classes.shape[0]

    @property
    def k(self) -> int:
        return self.classes.shape[1]

    @property
    def dim(self) -> int:
        return self.classes.shape[2]


def shift_objective(members: np.ndarray, running: np.ndarray, t: int) -> float:
    """Objective increment of routing the class by cyclic shift t.

    members is the (k, d) class, running the (k, d) per-node sums so
    far. Spelled as explicit loops; the vectorized shift_objectives must
    agree with this to within rounding.
    """
    k = members.shape[0]
    a = members[(k - t) % k]
    q_cls = float(np.einsum("ij,ij->", members, members))
    s_cls = members.sum(axis=0)
    first = k * float(a @ a) - 2.0 * float(a @ s_cls) + q_cls
    third = float((k * a - s_cls) @ running[0])
    for m in range(1, k):
        w = members[(m - t) % k]
        third += float((w - a) @ running[m])
    return first + 2.0 * third


def shift_objectives(members: np.ndarray, running: np.ndarray) -> np.ndarray:
    """Objective increments of all k cyclic shifts at once."""
    k = members.shape[0]
    idx = np.arange(k)
    a_idx = (-idx) % k
    gram = members @ running.T
    norms = np.einsum("ij,ij->i", members, members)
    s_cls = members.sum(axis=0)
    s_tot = running.sum(axis=0)
    q_cls = float(norms.sum())
    first = k * norms[a_idx] - 2.0 * (members @ s_cls)[a_idx] + q_cls
    rows = (idx[None, :] - idx[:, None]) % k  # rows[t, m] = (m - t) mod k
    diagshift = gram[rows, idx[None, :]].sum(axis=1)
    third = k * gram[a_idx, 0] - float(s_cls @ running[0]) + diagshift - (members @ s_tot)[a_idx]
    return first + 2.0 * third


def colorful_radius_bound(n_classes: int, k: int, max_diam: float) -> float:
    """sqrt(2 k (k-1) / N) * max class diameter, N = n*k points in all."""
    if n_classes < 1 or k < 1:
        raise InfeasibleError("need at least one class and one point per class")
    total = n_classes * k
    return math.sqrt(2.0 * k * (k - 1) / total) * max_diam


@dataclass(frozen=True, eq=False)
class ColorfulCertificate:
    """Rainbow partition plus measured and guaranteed covering radii.

    parts[m] lists (class_index, member_index) pairs, one per class.
    shifts[c] is the cyclic shift chosen for class c, enough to replay
    the whole routing. The ball sits at the hub part's centroid.
    lifted_sum_norm is sqrt(sum over leaves m of ||S_0 - S_m||^2) for the
    final per-node sums S.
    """

    n_classes: int
    k: int
    shifts: tuple[int, ...]
    parts: tuple[tuple[tuple[int, int], ...], ...]
    part_centroids: np.ndarray
    ball: Ball
    radius_guaranteed: float
    radius_achieved: float
    lifted_sum_norm: float
    max_class_diameter: float


def _parts_from_shifts(n: int, k: int, shifts) -> tuple[tuple[tuple[int, int], ...], ...]:
    parts = [[] for _ in range(k)]
    for c, t in enumerate(shifts):
        for i in range(k):
            parts[(i + t) % k].append((c, i))
    return tuple(tuple(part) for part in parts)


def _node_sums(instance: ColorInstance, shifts) -> np.ndarray:
    n, k, d = instance.classes.shape
    sums = np.zeros((k, d))
    idx = np.arange(k)
    for c, t in enumerate(shifts):
        sums += instance.classes[c][(idx - t) % k]
    return sums


def partition_colorful(classes) -> ColorfulCertificate:
    """Route every class onto the k parts by its best cyclic shift."""
    inst = classes if isinstance(classes, ColorInstance) else ColorInstance.from_arrays(classes)
    n, k, d = inst.classes.shape
    idx = np.arange(k)
    running = np.zeros((k, d))
    shifts = np.empty(n, dtype=np.int64)
    for c in range(n - 1, -1, -1):
        members = inst.classes[c]
        t = int(np.argmin(shift_objectives(members, running)))
        shifts[c] = t
        running += members[(idx - t) % k]

    parts = _parts_from_shifts(n, k, shifts)
    cents = running / n
    max_diam = max(diameter_exact(inst.classes[c]) for c in range(n))
    guaranteed = colorful_radius_bound(n, k, max_diam)
    achieved = float(np.sqrt(((cents - cents[0]) ** 2).sum(axis=1)).max())
    norm = math.sqrt(max(quadratic_form(make_graph("star", k), running), 0.0))

    cert = ColorfulCertificate(
        n_classes=n,
        k=k,
        shifts=tuple(int(t) for t in shifts),
        parts=parts,
        part_centroids=cents,
        ball=Ball(cents[0], guaranteed),
        radius_guaranteed=guaranteed,
        radius_achieved=achieved,
        lifted_sum_norm=norm,
        max_class_diameter=max_diam,
    )
    failures = [c for c in check_colorful_certificate(cert, inst) if not c.ok]
    if failures:
        raise CertificateError(failures)
    return cert


def check_colorful_certificate(cert: ColorfulCertificate, classes) -> list[CheckResult]:
    """Recompute every claim of a colorful certificate from the input."""
    inst = classes if isinstance(classes, ColorInstance) else ColorInstance.from_arrays(classes)
    n, k, _ = inst.classes.shape
    checks: list[CheckResult] = []
    scale = max(cert.max_class_diameter, 1.0)

    def add(name: str, ok: bool, detail: str = "") -> None:
        checks.append(CheckResult(name, bool(ok), detail))

    add("shape_matches", cert.n_classes == n and cert.k == k, f"stored ({cert.n_classes}, {cert.k})")
    add(
        "shifts_in_range",
        len(cert.shifts) == n and all(0 <= t < k for t in cert.shifts),
        f"{len(cert.shifts)} shifts",
    )
    if len(cert.shifts) != n or not all(0 <= t < k for t in cert.shifts):
        return checks

    expected_parts = _parts_from_shifts(n, k, cert.shifts)
    add("parts_match_shifts", cert.parts == expected_parts)
    rainbow = all(
        len(part) == n and sorted(c for c, _ in part) == list(range(n)) for part in cert.parts
    )
    add("one_point_per_class_per_part", rainbow)

    sums = _node_sums(inst, cert.shifts)
    cents = sums / n
    cent_err = float(np.abs(cents - cert.part_centroids).max())
    add("part_centroids_match", cent_err <= REL_SLACK * scale + ABS_GUARD, f"max err {cent_err:.3e}")

    center_err = float(np.linalg.norm(cents[0] - cert.ball.center))
    add("ball_center_is_hub_centroid", center_err <= REL_SLACK * scale + ABS_GUARD, f"err {center_err:.3e}")

    achieved = float(np.sqrt(((cents - cents[0]) ** 2).sum(axis=1)).max())
    add(
        "radius_achieved_matches",
        abs(achieved - cert.radius_achieved) <= REL_SLACK * scale + ABS_GUARD,
        f"measured {achieved!r} stored {cert.radius_achieved!r}",
    )
    slack = REL_SLACK * scale + ABS_GUARD
    add(
        "radius_within_guarantee",
        achieved <= cert.radius_guaranteed + slack,
        f"achieved {achieved!r} guaranteed {cert.radius_guaranteed!r}",
    )

    max_diam = max(diameter_exact(inst.classes[c]) for c in range(n))
    add(
        "max_class_diameter_matches",
        abs(max_diam - cert.max_class_diameter) <= REL_SLACK * scale + ABS_GUARD,
        f"measured {max_diam!r}",
    )
    guar = colorful_radius_bound(n, k, cert.max_class_diameter)
    add(
        "guarantee_formula",
        abs(guar - cert.radius_guaranteed) <= REL_SLACK * max(guar, 1.0) + ABS_GUARD,
        f"recomputed {guar!r} stored {cert.radius_guaranteed!r}",
    )

    norm = math.sqrt(max(quadratic_form(make_graph("star", k), sums), 0.0))
    add(
        "lifted_sum_norm_matches",
        abs(norm - cert.lifted_sum_norm) <= REL_SLACK * max(norm, scale) + ABS_GUARD,
        f"recomputed {norm!r} stored {cert.lifted_sum_norm!r}",
    )
    # norm / n is the full lifted centroid norm, an upper bound on every
    # hub-to-part distance, so it must clear the guarantee too
    add(
        "traversal_norm_within_bound",
        norm / n <= cert.radius_guaranteed + slack,
        f"lifted centroid norm {norm / n!r} guaranteed {cert.radius_guaranteed!r}",
    )
    return checks
