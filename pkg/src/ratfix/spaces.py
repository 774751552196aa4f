"""Concrete metric spaces and self-maps.

Two flavors of space cover every distance expression the library needs:
finite point sets carrying an explicit distance matrix, and closed
axis-aligned boxes in R^d under the Euclidean metric.  Self-maps are
lookup tables on finite spaces and members of small parametric families
on boxes; the families are deliberately closed-form so that "maps the
space into itself" can be certified analytically at construction time
instead of trusted.

Everything here is immutable after construction and every operation is
a pure function, so values can be shared freely across threads.
"""

from __future__ import annotations

from dataclasses import dataclass

import numpy as np

DEFAULT_POINT_TOL = 1e-9  # Euclidean point-identity tolerance on boxes
_BOX_SLACK = 1e-9         # membership slack absorbing float drift of images
_TRIANGLE_SLACK = 1e-12   # relative slack for rounding in user-built matrices


@dataclass(frozen=True)
class AxiomViolation:
    """A failed metric axiom together with the indices witnessing it."""

    axiom: str  # "identity" | "symmetry" | "triangle"
    indices: tuple
    detail: str


class MetricAxiomError(ValueError):
    """Raised when a distance matrix fails one of the metric axioms."""

    def __init__(self, violations):
        self.violations = tuple(violations)
        head = "; ".join(v.detail for v in self.violations[:3])
        more = len(self.violations) - 3
        if more > 0:
            head += f" (+{more} more)"
        super().__init__(f"not a metric: {head}")


def validate_distance_matrix(dist) -> list[AxiomViolation]:
    """Check a square matrix against the three metric axioms.

    Reported violations: diagonal entries must be zero and off-diagonal
    entries positive ("identity"), the matrix must be symmetric
    ("symmetry"), and d(i,k) <= d(i,j) + d(j,k) for every triple
    ("triangle", with a 1e-12 relative slack so matrices derived from
    float embeddings do not trip on rounding).
    """
    arr = np.asarray(dist, dtype=float)
    if arr.ndim != 2 or arr.shape[0] != arr.shape[1]:
        raise ValueError(f"distance matrix must be square, got shape {arr.shape}")
    if not np.isfinite(arr).all():
        raise ValueError("distance matrix entries must be finite")
    n = arr.shape[0]
    found: list[AxiomViolation] = []
    for i in range(n):
        if arr[i, i] != 0.0:
            found.append(AxiomViolation(
                "identity", (i, i), f"dist[{i}][{i}]={arr[i, i]:.6g} must be 0"))
    for i in range(n):
        for j in range(n):
            if i != j and not arr[i, j] > 0.0:
                found.append(AxiomViolation(
                    "identity", (i, j),
                    f"dist[{i}][{j}]={arr[i, j]:.6g} must be positive"))
    for i in range(n):
        for j in range(i + 1, n):
            if arr[i, j] != arr[j, i]:
                found.append(AxiomViolation(
                    "symmetry", (i, j),
                    f"dist[{i}][{j}]={arr[i, j]:.6g} != dist[{j}][{i}]={arr[j, i]:.6g}"))
    for i in range(n):
        for k in range(i + 1, n):
            for j in range(n):
                if j == i or j == k:
                    continue
                lhs = arr[i, k]
                rhs = arr[i, j] + arr[j, k]
                if lhs - rhs > _TRIANGLE_SLACK * max(1.0, lhs):
                    found.append(AxiomViolation(
                        "triangle", (i, j, k),
                        f"dist[{i}][{k}]={lhs:.6g} > "
                        f"dist[{i}][{j}]+dist[{j}][{k}]={rhs:.6g}"))
    return found


class FiniteMetricSpace:
    """Finite point set with an explicit, validated distance matrix.

    Point identifiers may be any hashable values.  The matrix is checked
    against all three metric axioms at construction, so every instance
    is a genuine (complete) metric space.
    """

    def __init__(self, points, dist):
        pts = tuple(points)
        if not pts:
            raise ValueError("need at least one point")
        if len(set(pts)) != len(pts):
            raise ValueError("duplicate point identifiers")
        arr = np.array(dist, dtype=float)
        if arr.shape != (len(pts), len(pts)):
            raise ValueError(
                f"distance matrix shape {arr.shape} does not match {len(pts)} points")
        violations = validate_distance_matrix(arr)
        if violations:
            raise MetricAxiomError(violations)
        arr.flags.writeable = False
        self.points = pts
        self.dist = arr
        self._index = {p: i for i, p in enumerate(pts)}

    def __len__(self) -> int:
        return len(self.points)

    def __contains__(self, x) -> bool:
        return x in self._index

    def __repr__(self) -> str:
        return f"FiniteMetricSpace({len(self.points)} points)"

    def index(self, x) -> int:
        try:
            return self._index[x]
        except (KeyError, TypeError):
            raise ValueError(f"unknown point identifier: {x!r}") from None

    def distance(self, x, y) -> float:
        return float(self.dist[self.index(x), self.index(y)])

    def same_point(self, x, y, tol=None) -> bool:
        # identity on finite spaces is exact; tol accepted for API symmetry
        self.index(x)
        self.index(y)
        return x == y


class RealBoxSpace:
    """Nonempty closed box [lower, upper] in R^d with the Euclidean metric."""

    def __init__(self, lower, upper, point_tol: float = DEFAULT_POINT_TOL):
        lo = np.atleast_1d(np.asarray(lower, dtype=float)).copy()
        hi = np.atleast_1d(np.asarray(upper, dtype=float)).copy()
        if lo.ndim != 1 or hi.shape != lo.shape:
            raise ValueError("lower and upper must be vectors of equal length")
        if not (np.isfinite(lo).all() and np.isfinite(hi).all()):
            raise ValueError("box bounds must be finite")
        if not (lo <= hi).all():
            raise ValueError("need lower <= upper componentwise")
        if not point_tol > 0:
            raise ValueError("point_tol must be positive")
        lo.flags.writeable = False
        hi.flags.writeable = False
        self.lower = lo
        self.upper = hi
        self.point_tol = float(point_tol)

    @property
    def dimension(self) -> int:
        return self.lower.size

    def __repr__(self) -> str:
        return f"RealBoxSpace({self.lower.tolist()}, {self.upper.tolist()})"

    def as_point(self, x) -> np.ndarray:
        arr = np.atleast_1d(np.asarray(x, dtype=float))
        if arr.shape != (self.dimension,):
            raise ValueError(
                f"point of dimension {arr.size} in a {self.dimension}-d box")
        return arr

    def contains(self, x, slack: float = _BOX_SLACK) -> bool:
        arr = self.as_point(x)
        return bool((arr >= self.lower - slack).all()
                    and (arr <= self.upper + slack).all())

    def require_member(self, x) -> np.ndarray:
        arr = self.as_point(x)
        if not self.contains(arr):
            raise ValueError(f"point {arr.tolist()} lies outside the box")
        return arr

    def distance(self, x, y) -> float:
        a = self.require_member(x)
        b = self.require_member(y)
        return float(np.sqrt(((a - b) ** 2).sum()))

    def same_point(self, x, y, tol=None) -> bool:
        t = self.point_tol if tol is None else tol
        return self.distance(x, y) <= t


class SelfMap:
    """A map from a metric space into itself."""

    def __init__(self, space):
        self.space = space

    def apply(self, x):
        raise NotImplementedError

    def __call__(self, x):
        return self.apply(x)


class TableMap(SelfMap):
    """Self-map of a finite space given by an explicit lookup table.

    ``table`` is either a dict from point id to point id covering every
    point, or a sequence of target ids aligned with the space's point
    order.
    """

    def __init__(self, space: FiniteMetricSpace, table):
        if not isinstance(space, FiniteMetricSpace):
            raise TypeError("TableMap needs a FiniteMetricSpace")
        super().__init__(space)
        if isinstance(table, dict):
            missing = [p for p in space.points if p not in table]
            if missing:
                raise ValueError(f"table missing entries for {missing[:5]}")
            extra = [k for k in table if k not in space]
            if extra:
                raise ValueError(f"table keys not in space: {extra[:5]}")
            targets = [table[p] for p in space.points]
        else:
            targets = list(table)
            if len(targets) != len(space):
                raise ValueError(
                    f"table length {len(targets)} != point count {len(space)}")
        self._targets = tuple(space.index(t) for t in targets)

    def apply(self, x):
        return self.space.points[self._targets[self.space.index(x)]]

    def target_indices(self) -> tuple:
        return self._targets


def _verification_sample(space: RealBoxSpace, count: int = 16):
    """Deterministic spot-check sample: corners, midpoint, seeded fill."""
    rng = np.random.default_rng(0)
    pts = [space.lower, space.upper, (space.lower + space.upper) / 2.0]
    width = space.upper - space.lower
    for _ in range(count):
        pts.append(space.lower + rng.random(space.dimension) * width)
    return pts


class BoxMap(SelfMap):
    """Base for parametric self-maps of a box.

    Subclasses supply exact componentwise image bounds; construction
    fails unless those bounds sit inside the box, and a deterministic
    point sample re-checks the claim numerically.
    """

    family = "abstract"

    def __init__(self, space: RealBoxSpace):
        if not isinstance(space, RealBoxSpace):
            raise TypeError(f"{type(self).__name__} needs a RealBoxSpace")
        super().__init__(space)

    def _image_bounds(self):
        raise NotImplementedError

    def _check_into(self):
        lo_img, hi_img = self._image_bounds()
        if (lo_img < self.space.lower).any() or (hi_img > self.space.upper).any():
            raise ValueError(
                f"{self.family} map does not send the box into itself: image "
                f"bounds [{np.asarray(lo_img).tolist()}, "
                f"{np.asarray(hi_img).tolist()}] exceed "
                f"[{self.space.lower.tolist()}, {self.space.upper.tolist()}]")
        for p in _verification_sample(self.space):
            if not self.space.contains(self.apply(p)):
                raise ValueError(
                    f"{self.family} map sends sample point {p.tolist()} "
                    "outside the box")

    def apply_batch(self, xs: np.ndarray) -> np.ndarray:
        return np.array([self.apply(x) for x in xs])


class AffineMap(BoxMap):
    """x -> A x + c on a box.

    The exact interval image of the box under an affine map is computed
    componentwise, which makes the into-the-box check analytic.
    """

    family = "affine"

    def __init__(self, space: RealBoxSpace, matrix, offset):
        super().__init__(space)
        d = space.dimension
        A = np.asarray(matrix, dtype=float)
        if A.ndim == 0:
            A = np.eye(d) * float(A)
        if A.shape != (d, d):
            raise ValueError(f"matrix must be {d}x{d}, got {A.shape}")
        c = np.atleast_1d(np.asarray(offset, dtype=float))
        if c.shape != (d,):
            raise ValueError(f"offset must have length {d}")
        if not (np.isfinite(A).all() and np.isfinite(c).all()):
            raise ValueError("affine parameters must be finite")
        A = A.copy()
        c = c.copy()
        A.flags.writeable = False
        c.flags.writeable = False
        self.matrix = A
        self.offset = c
        self._check_into()

    def _image_bounds(self):
        lo = self.space.lower
        hi = self.space.upper
        low = self.offset + np.minimum(self.matrix * lo, self.matrix * hi).sum(axis=1)
        high = self.offset + np.maximum(self.matrix * lo, self.matrix * hi).sum(axis=1)
        return low, high

    def apply(self, x):
        arr = self.space.as_point(x)
        return self.matrix @ arr + self.offset

    def apply_batch(self, xs: np.ndarray) -> np.ndarray:
        return xs @ self.matrix.T + self.offset


class RationalMap(BoxMap):
    """Componentwise x -> x/(1+x).

    Monotone on the nonnegative orthant, so the image of the box is the
    exact interval [f(lower), f(upper)]; in practice the check requires
    lower = 0 because f pulls every positive value strictly down.
    """

    family = "rational"

    def __init__(self, space: RealBoxSpace):
        super().__init__(space)
        if (space.lower < 0).any():
            raise ValueError("rational map needs a box in the nonnegative orthant")
        self._check_into()

    def _image_bounds(self):
        lo = self.space.lower
        hi = self.space.upper
        return lo / (1.0 + lo), hi / (1.0 + hi)

    def apply(self, x):
        arr = self.space.as_point(x)
        return arr / (1.0 + arr)

    def apply_batch(self, xs: np.ndarray) -> np.ndarray:
        return xs / (1.0 + xs)


class ConstantMap(BoxMap):
    """x -> c for a fixed point c of the box."""

    family = "constant"

    def __init__(self, space: RealBoxSpace, value):
        super().__init__(space)
        v = space.require_member(value).copy()
        v.flags.writeable = False
        self.value = v
        self._check_into()

    def _image_bounds(self):
        return self.value, self.value

    def apply(self, x):
        self.space.as_point(x)
        return self.value

    def apply_batch(self, xs: np.ndarray) -> np.ndarray:
        return np.broadcast_to(self.value, xs.shape)


class IteratedMap(SelfMap):
    """n-fold composition of a base map, evaluated by repeated application.

    Used for box maps so that the composed map is float-identical to
    applying the base map n times.
    """

    def __init__(self, base: SelfMap, times: int):
        super().__init__(base.space)
        if times < 1:
            raise ValueError("composition power must be >= 1")
        self.base = base
        self.times = int(times)

    def apply(self, x):
        y = x
        for _ in range(self.times):
            y = self.base.apply(y)
        return y

    def apply_batch(self, xs: np.ndarray) -> np.ndarray:
        batch = getattr(self.base, "apply_batch", None)
        if batch is None:
            return np.array([self.apply(x) for x in xs])
        for _ in range(self.times):
            xs = batch(xs)
        return xs


def compose(mapping: SelfMap, times) -> SelfMap:
    """n-fold composition of a self-map.

    Table maps compose into exact tables; box maps come back wrapped so
    that applying the result equals applying the base map n times.
    """
    if isinstance(times, bool) or not isinstance(times, (int, np.integer)):
        raise ValueError("composition power must be an integer")
    times = int(times)
    if times < 1:
        raise ValueError("composition power must be >= 1")
    if times == 1:
        return mapping
    if isinstance(mapping, TableMap):
        base = mapping.target_indices()
        out = base
        for _ in range(times - 1):
            out = tuple(base[i] for i in out)
        pts = mapping.space.points
        return TableMap(mapping.space, [pts[i] for i in out])
    if isinstance(mapping, ConstantMap):
        return mapping
    if isinstance(mapping, IteratedMap):
        return IteratedMap(mapping.base, mapping.times * times)
    return IteratedMap(mapping, times)


def distance(space, x, y) -> float:
    """d(x, y) in the given space; symmetric, zero exactly on the diagonal."""
    return space.distance(x, y)


def apply(mapping: SelfMap, x):
    """Image of x under the self-map."""
    return mapping.apply(x)


def points_equal(space, x, y, tol=None) -> bool:
    """Point identity: exact on finite spaces, within tolerance on boxes."""
    return space.same_point(x, y, tol)


def validate_space(space_or_matrix) -> list[AxiomViolation]:
    """Metric-axiom violations of a space's matrix (or a raw matrix).

    Constructed spaces always come back clean because construction
    rejects invalid matrices; pass a raw matrix to pre-check input.
    """
    if isinstance(space_or_matrix, FiniteMetricSpace):
        return validate_distance_matrix(space_or_matrix.dist)
    return validate_distance_matrix(space_or_matrix)
