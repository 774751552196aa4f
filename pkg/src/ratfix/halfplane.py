"""Two-variable linear feasibility by exact vertex enumeration.

Constraints are closed half-planes cx*x + cy*y >= rhs.  Candidate
vertices are the pairwise boundary-line intersections; a candidate
survives if it satisfies every constraint within a small tolerance.
O(m^2) in the constraint count, which is intended: callers reduce
their systems first, and exactness plus determinism beat an iterative
solver at this scale.
"""

from __future__ import annotations

import math
from dataclasses import dataclass

FEAS_TOL = 1e-11
DEDUP_TOL = 1e-10


@dataclass(frozen=True)
class HalfPlane:
    """The closed half-plane cx*x + cy*y >= rhs."""

    cx: float
    cy: float
    rhs: float

    def slack(self, x: float, y: float) -> float:
        return self.cx * x + self.cy * y - self.rhs


def intersect(h1: HalfPlane, h2: HalfPlane):
    """Intersection of two boundary lines, or None if near-parallel."""
    det = h1.cx * h2.cy - h1.cy * h2.cx
    scale = max(abs(h1.cx), abs(h1.cy), abs(h2.cx), abs(h2.cy), 1.0)
    if abs(det) <= 1e-14 * scale * scale:
        return None
    x = (h1.rhs * h2.cy - h2.rhs * h1.cy) / det
    y = (h1.cx * h2.rhs - h2.cx * h1.rhs) / det
    if not (math.isfinite(x) and math.isfinite(y)):
        return None
    return (x + 0.0, y + 0.0)  # +0.0 folds -0.0 into 0.0


def enumerate_vertices(planes, feas_tol: float = FEAS_TOL,
                       dedup_tol: float = DEDUP_TOL) -> list:
    """Vertices of the (bounded) intersection of closed half-planes.

    Returns the polygon corners sorted counterclockwise starting from
    the lexicographically smallest one; an empty list means the
    intersection is empty.  Degenerate intersections (a segment or a
    single point) come back as their distinct corners.  Callers must
    make the region bounded (e.g. by box constraints), otherwise
    unbounded directions are silently missed.
    """
    planes = list(planes)
    candidates = []
    for i in range(len(planes)):
        for j in range(i + 1, len(planes)):
            pt = intersect(planes[i], planes[j])
            if pt is None:
                continue
            x, y = pt
            if all(h.slack(x, y) >= -feas_tol for h in planes):
                candidates.append((x, y))
    if not candidates:
        return []
    candidates.sort()
    kept: list = []
    for pt in candidates:
        if all(max(abs(pt[0] - q[0]), abs(pt[1] - q[1])) > dedup_tol for q in kept):
            kept.append(pt)
    if len(kept) <= 2:
        return kept
    cx = sum(p[0] for p in kept) / len(kept)
    cy = sum(p[1] for p in kept) / len(kept)
    kept.sort(key=lambda p: math.atan2(p[1] - cy, p[0] - cx))
    start = min(range(len(kept)), key=lambda i: kept[i])
    return kept[start:] + kept[:start]
