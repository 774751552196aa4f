"""Fixed-point sets of a map and its iterates.

On finite spaces everything is exact enumeration.  On boxes, fixed
points are located by multi-start orbit iteration over a deterministic
start sample and deduplicated at the space's point tolerance, so
continuous results are sampled evidence rather than exhaustive truth.
"""

from __future__ import annotations

from dataclasses import dataclass

from . import sampling
from .contraction import NUM_TOL
from .picard import _validate_constants, iterate
from .spaces import FiniteMetricSpace, compose

DEFAULT_GRID_STARTS = 5
DEFAULT_RANDOM_STARTS = 8
DEFAULT_SEARCH_FIX_TOL = 1e-10
DEFAULT_SEARCH_MAX_ITERS = 10 ** 5


def fixed_points(space, mapping, point_tol=None, *,
                 fix_tol: float = DEFAULT_SEARCH_FIX_TOL,
                 grid_per_dim: int = DEFAULT_GRID_STARTS,
                 random_starts: int = DEFAULT_RANDOM_STARTS,
                 seed=0, max_iters: int = DEFAULT_SEARCH_MAX_ITERS) -> list:
    """All fixed points of the map.

    Finite spaces: exact table scan.  Boxes: orbits from a lattice plus
    a seeded random sample, every converged candidate re-verified by
    d(z, Sz) <= fix_tol and deduplicated within the point tolerance.
    """
    if isinstance(space, FiniteMetricSpace):
        return [p for p in space.points if mapping.apply(p) == p]
    tol = space.point_tol if point_tol is None else point_tol
    starts = sampling.sample_points(space, grid_per_dim, random_starts, seed)
    found: list = []
    for s in starts:
        trace = iterate(space, mapping, s, fix_tol=fix_tol, max_iters=max_iters)
        if trace.status != "converged" or trace.residual > fix_tol:
            continue
        z = trace.fixed_point
        if all(space.distance(z, q) > tol for q in found):
            found.append(z)
    found.sort(key=lambda p: tuple(p))
    return found


@dataclass(frozen=True)
class PropertyPRow:
    power: int
    fixed_set: tuple
    equal: bool


@dataclass(frozen=True)
class PropertyPReport:
    """Fixed sets of the map and its powers, with periodic witnesses.

    ``witnesses`` holds (point, power) pairs fixed by the power-fold
    composition but not by the map itself — nontrivial periodic points.
    A "fails" verdict means some power has extra fixed points; "holds"
    needs a nonempty base fixed set and equality at every power;
    "undefined" flags an empty base fixed set with no extra points at
    any power, where the property's premise is missing.
    """

    n_max: int
    scope: str            # "exhaustive" | "sampled"
    fixed_set: tuple
    rows: tuple
    witnesses: tuple

    @property
    def verdict(self) -> str:
        if any(not row.equal for row in self.rows):
            return "fails"
        if not self.fixed_set:
            return "undefined"
        return "holds"

    @property
    def holds(self) -> bool:
        return self.verdict == "holds"


def check_property_p(space, mapping, n_max: int, point_tol=None,
                     **search) -> PropertyPReport:
    """Compare the fixed sets of the map and its powers up to n_max.

    Extra keyword arguments forward to :func:`fixed_points` for box
    searches.
    """
    if n_max < 2:
        raise ValueError("n_max must be >= 2")
    finite = isinstance(space, FiniteMetricSpace)
    scope = "exhaustive" if finite else "sampled"
    base = fixed_points(space, mapping, point_tol, **search)

    def member(z, coll):
        if finite:
            return z in coll
        return any(space.same_point(z, q, point_tol) for q in coll)

    rows = []
    witnesses = []
    for n in range(2, n_max + 1):
        fs = fixed_points(space, compose(mapping, n), point_tol, **search)
        equal = (all(member(z, base) for z in fs)
                 and all(member(z, fs) for z in base))
        rows.append(PropertyPRow(power=n, fixed_set=tuple(fs), equal=equal))
        for z in fs:
            if not member(z, base):
                witnesses.append((z, n))
    return PropertyPReport(n_max=n_max, scope=scope, fixed_set=tuple(base),
                           rows=tuple(rows), witnesses=tuple(witnesses))


@dataclass(frozen=True)
class PeriodicChainReport:
    """Quantitative form of the no-nontrivial-periodic-points argument.

    For a point fixed by the power-fold composition, the control of its
    one-step displacement must satisfy lhs <= (a/(1-b))^power * lhs.
    With contraction constants the factor is < 1, so the chain can only
    hold when the displacement is at noise level; a violation displays
    the contradiction that rules the periodic point out.
    """

    point: object
    power: int
    displacement: float
    lhs: float
    rhs: float
    ratio: float
    holds: bool


def refute_periodic_chain(space, mapping, z, power: int, a: float, b: float,
                          control, point_tol=None,
                          tol: float = NUM_TOL) -> PeriodicChainReport:
    """Evaluate the periodic-point contradiction chain at z.

    Requires z to be fixed by the power-fold composition (exactly on
    finite spaces, within the point tolerance on boxes).
    """
    _validate_constants(a, b)
    if power < 1:
        raise ValueError("power must be >= 1")
    zn = compose(mapping, power).apply(z)
    if isinstance(space, FiniteMetricSpace):
        if zn != z:
            raise ValueError("z is not fixed by the composed map")
    else:
        tolp = space.point_tol if point_tol is None else point_tol
        if space.distance(zn, z) > tolp:
            raise ValueError("z is not fixed by the composed map")
    displacement = space.distance(z, mapping.apply(z))
    lhs = float(control(displacement))
    ratio = a / (1.0 - b)
    rhs = lhs
    for _ in range(int(power)):
        rhs *= ratio
    return PeriodicChainReport(point=z, power=int(power),
                               displacement=displacement, lhs=lhs, rhs=rhs,
                               ratio=ratio, holds=bool(lhs <= rhs + tol))
