"""Contractive-inequality checking and constant certification.

Given a space, a self-map and a control function, every ordered point
pair yields one linear constraint on the constants (a, b): the control
of the image distance must not exceed a * control(pair distance) +
b * control(rational term).  Certification intersects those half-planes
with the constant box {a >= margin, b >= 0, a + b <= 1 - margin} and
reports either witness constants plus per-pair slacks, or the pairs
that make the system infeasible.

A certificate computed over all ordered pairs of a finite space is
labeled "exhaustive" and licenses the theorem-level consequences
(unique fixed point, global convergence, no nontrivial periodic
points); anything sampled is labeled "sampled" and is evidence only.
"""

from __future__ import annotations

from dataclasses import dataclass

import numpy as np

from . import sampling
from .altering import AlteringFunction
from .halfplane import HalfPlane, enumerate_vertices
from .spaces import RealBoxSpace

NUM_TOL = 1e-12
CONDITION_KINDS = ("banach_khan", "das_gupta", "generalized", "integral")


def rational_term(space, mapping, x, y) -> float:
    """d(y, Sy) * (1 + d(x, Sx)) / (1 + d(x, y)).

    The mixing term of the rational-type conditions; zero exactly when
    y is a fixed point of the map.
    """
    sy = mapping.apply(y)
    sx = mapping.apply(x)
    dxy = space.distance(x, y)
    return space.distance(y, sy) * (1.0 + space.distance(x, sx)) / (1.0 + dxy)


@dataclass(frozen=True)
class ContractionCondition:
    """One of the four condition families with its constants.

    ``banach_khan`` drops the mixing term (b is forced to 0);
    ``das_gupta`` is the identity-control rational condition;
    ``generalized`` allows any control; ``integral`` is the generalized
    condition with a prefix-integral control.
    """

    kind: str
    control: AlteringFunction
    a: float
    b: float = 0.0

    def __post_init__(self):
        if self.kind not in CONDITION_KINDS:
            raise ValueError(f"unknown condition kind: {self.kind!r}")
        if not self.a > 0:
            raise ValueError("need a > 0")
        if self.b < 0:
            raise ValueError("need b >= 0")
        if not self.a + self.b < 1:
            raise ValueError("need a + b < 1")
        if self.kind == "banach_khan" and self.b != 0:
            raise ValueError("banach_khan fixes b = 0")
        if self.kind == "das_gupta" and self.control.kind != "identity":
            raise ValueError("das_gupta uses the identity control")
        if self.kind == "integral" and self.control.kind != "integral":
            raise ValueError("integral condition needs an integral-kind control")

    @property
    def basis(self) -> str:
        """Which condition family the constants actually invoke.

        b = 0 collapses the mixing term, so such constants only ever
        use the plain control contraction.
        """
        if self.b == 0:
            return "altering_contraction"
        if self.control.kind == "identity":
            return "rational_contraction"
        return "generalized_rational"


@dataclass(frozen=True)
class InequalityCheck:
    satisfied: bool
    lhs: float
    rhs: float
    slack: float


def check_inequality(cond: ContractionCondition, space, mapping, x, y,
                     tol: float = NUM_TOL) -> InequalityCheck:
    """Evaluate the condition at one ordered pair.

    lhs is the control of the image distance; rhs combines the pair
    distance and the rational term according to the kind.  ``satisfied``
    allows a -tol slack for float rounding.
    """
    sx = mapping.apply(x)
    sy = mapping.apply(y)
    d_pair = space.distance(x, y)
    d_image = space.distance(sx, sy)
    fn = cond.control
    lhs = fn(d_image)
    if cond.kind == "banach_khan":
        rhs = cond.a * fn(d_pair)
    else:
        mix = space.distance(y, sy) * (1.0 + space.distance(x, sx)) / (1.0 + d_pair)
        rhs = cond.a * fn(d_pair) + cond.b * fn(mix)
    slack = rhs - lhs
    return InequalityCheck(bool(slack >= -tol), float(lhs), float(rhs), float(slack))


@dataclass(frozen=True)
class ContractionCertificate:
    """Machine-checkable evidence for (or against) a condition holding
    with some constants over a stated pair sample."""

    kind: str
    feasible: bool
    a: float | None
    b: float | None
    margin: float
    scope: str            # "exhaustive" | "sampled"
    pair_count: int
    seed: int | None
    basis: str | None     # family the chosen constants invoke
    vertices: tuple       # corners of the feasible constant polygon
    slacks: tuple         # per-pair slack at (a, b), aligned with the input pairs
    violations: tuple = ()  # offending pairs when infeasible

    @property
    def min_slack(self):
        return min(self.slacks) if self.slacks else None


def all_ordered_pairs(space) -> list:
    """Every ordered pair of distinct points of a finite space."""
    pts = space.points
    return [(x, y) for x in pts for y in pts if x != y]


def sample_box_pairs(space, grid_per_dim: int, random_count: int, seed) -> list:
    """Ordered pairs over a lattice-plus-random point sample of a box."""
    pts = sampling.sample_points(space, grid_per_dim, random_count, seed)
    n = len(pts)
    return [(pts[i], pts[j]) for i in range(n) for j in range(n) if i != j]


def _row_norm(rows: np.ndarray) -> np.ndarray:
    return np.sqrt((rows * rows).sum(axis=1))


def _apply_rows(mapping, rows: np.ndarray) -> np.ndarray:
    batch = getattr(mapping, "apply_batch", None)
    if batch is not None:
        return np.asarray(batch(rows), dtype=float)
    return np.array([mapping.apply(r) for r in rows], dtype=float)


def _pair_stats(space, mapping, pairs):
    """Arrays (pair distance, image distance, rational term) per pair."""
    if isinstance(space, RealBoxSpace):
        xs = np.array([space.as_point(p) for p, _ in pairs], dtype=float)
        ys = np.array([space.as_point(q) for _, q in pairs], dtype=float)
        sx = _apply_rows(mapping, xs)
        sy = _apply_rows(mapping, ys)
        d = _row_norm(xs - ys)
        d_img = _row_norm(sx - sy)
        mix = _row_norm(ys - sy) * (1.0 + _row_norm(xs - sx)) / (1.0 + d)
        return d, d_img, mix
    images = {p: mapping.apply(p) for pair in pairs for p in pair}
    self_d = {p: space.distance(p, images[p]) for p in images}
    d = np.empty(len(pairs))
    d_img = np.empty(len(pairs))
    mix = np.empty(len(pairs))
    for i, (x, y) in enumerate(pairs):
        dxy = space.distance(x, y)
        d[i] = dxy
        d_img[i] = space.distance(images[x], images[y])
        mix[i] = self_d[y] * (1.0 + self_d[x]) / (1.0 + dxy)
    return d, d_img, mix


def _control_values(fn: AlteringFunction, arr: np.ndarray) -> np.ndarray:
    if fn.kind == "integral":
        # quadrature per distinct argument only; distances repeat a lot
        memo: dict = {}
        out = np.empty(arr.size)
        for i, t in enumerate(arr):
            t = float(t)
            v = memo.get(t)
            if v is None:
                v = fn(t)
                memo[t] = v
            out[i] = v
        return out
    return np.asarray(fn(arr), dtype=float)


def _pareto_minimal(vectors) -> list:
    """Componentwise-minimal vectors of a set with nonnegative entries.

    For constraints u1*a + u2*b >= 1 with a, b >= 0, a vector dominated
    componentwise is implied by the dominating one and can be dropped.
    ``vectors`` must be sorted ascending.
    """
    best: list = []
    min_y = np.inf
    for x, y in vectors:
        if y < min_y:
            best.append((x, y))
            min_y = y
    return best


def _assemble(space, mapping, control, kind, pairs, margin):
    """Shared constraint assembly for certify / feasible_region_vertices.

    Returns (c1, c2, lhs, planes, hard) where hard flags pairs whose
    constraint is unsatisfiable outright (zero coefficients, positive
    left side).
    """
    if not pairs:
        raise ValueError("need a nonempty pair sample")
    if not 0.0 < margin < 0.5:
        raise ValueError("margin must lie in (0, 0.5)")
    if kind not in CONDITION_KINDS:
        raise ValueError(f"unknown condition kind: {kind!r}")
    if kind == "das_gupta" and control.kind != "identity":
        raise ValueError("das_gupta uses the identity control")
    if kind == "integral" and control.kind != "integral":
        raise ValueError("integral condition needs an integral-kind control")
    force_b_zero = kind == "banach_khan"

    d, d_img, mix = _pair_stats(space, mapping, pairs)
    c1 = _control_values(control, d)
    lhs = _control_values(control, d_img)
    if force_b_zero:
        c2 = np.zeros_like(c1)
    else:
        c2 = _control_values(control, mix)

    hard = (lhs > 0.0) & (c1 == 0.0) & (c2 == 0.0)

    planes = [
        HalfPlane(1.0, 0.0, margin),                  # a >= margin
        HalfPlane(0.0, 1.0, 0.0),                     # b >= 0
        HalfPlane(-1.0, -1.0, -(1.0 - margin)),       # a + b <= 1 - margin
    ]
    if force_b_zero:
        planes.append(HalfPlane(0.0, -1.0, 0.0))      # b <= 0
    active = np.flatnonzero(lhs > 0.0)
    normalized = sorted({(float(c1[i] / lhs[i]), float(c2[i] / lhs[i]))
                         for i in active})
    for u, v in _pareto_minimal(normalized):
        planes.append(HalfPlane(u, v, 1.0))
    return c1, c2, lhs, planes, hard


def _least_violating_corner(c1, c2, lhs, margin, force_b_zero):
    corners = [(margin, 0.0), (1.0 - margin, 0.0)]
    if not force_b_zero:
        corners.append((margin, 1.0 - 2.0 * margin))

    def total(corner):
        s = corner[0] * c1 + corner[1] * c2 - lhs
        return float(np.clip(-s, 0.0, None).sum())

    return min(corners, key=total)


def certify(space, mapping, control, kind, pairs, margin: float = 1e-6, *,
            scope: str = "sampled", seed=None,
            tol: float = NUM_TOL) -> ContractionCertificate:
    """Search for constants making the condition hold over the sample.

    Each pair contributes the half-plane a*c1 + b*c2 >= L with
    c1 = control(d(x, y)), c2 = control(rational term) and L the control
    of the image distance; the searched box is {a >= margin, b >= 0,
    a + b <= 1 - margin}.  When feasible, the chosen constants minimize
    a + b (ties broken toward smaller a) over the polygon corners, and
    every pair's slack is re-checked at the choice.  When infeasible,
    the certificate lists the pairs still violated at the least-
    violating corner of the constant box.  The result does not depend
    on pair order.
    """
    pairs = list(pairs)
    c1, c2, lhs, planes, hard = _assemble(space, mapping, control, kind, pairs, margin)
    meta = dict(kind=kind, margin=float(margin), scope=scope,
                pair_count=len(pairs), seed=seed)

    if hard.any():
        return ContractionCertificate(
            feasible=False, a=None, b=None, basis=None, vertices=(), slacks=(),
            violations=tuple(pairs[i] for i in np.flatnonzero(hard)), **meta)

    vertices = enumerate_vertices(planes)
    chosen = None
    chosen_slacks = None
    for aa, bb in sorted(vertices, key=lambda p: (p[0] + p[1], p[0])):
        s = aa * c1 + bb * c2 - lhs
        if s.min() >= -tol:
            chosen = (aa, bb)
            chosen_slacks = s
            break

    if chosen is None:
        corner = _least_violating_corner(c1, c2, lhs, margin,
                                         kind == "banach_khan")
        s = corner[0] * c1 + corner[1] * c2 - lhs
        bad = np.flatnonzero(s < -tol)
        return ContractionCertificate(
            feasible=False, a=None, b=None, basis=None,
            vertices=tuple(vertices), slacks=(),
            violations=tuple(pairs[i] for i in bad), **meta)

    cond = ContractionCondition(kind, control, chosen[0], chosen[1])
    return ContractionCertificate(
        feasible=True, a=float(chosen[0]), b=float(chosen[1]), basis=cond.basis,
        vertices=tuple(vertices),
        slacks=tuple(float(v) for v in chosen_slacks), **meta)


def certify_exhaustive(space, mapping, control, kind, margin: float = 1e-6,
                       tol: float = NUM_TOL) -> ContractionCertificate:
    """Certificate over all ordered pairs of a finite space."""
    return certify(space, mapping, control, kind, all_ordered_pairs(space),
                   margin, scope="exhaustive", tol=tol)


def feasible_region_vertices(space, mapping, control, kind, pairs,
                             margin: float = 1e-6) -> list:
    """Corners of the feasible constant polygon, counterclockwise.

    Empty iff the constraint system is infeasible.  Diagnostic view of
    the same half-plane intersection :func:`certify` solves.
    """
    pairs = list(pairs)
    _, _, _, planes, hard = _assemble(space, mapping, control, kind, pairs, margin)
    if hard.any():
        return []
    return enumerate_vertices(planes)
