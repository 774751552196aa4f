"""Orbit iteration with geometric error bounds, and Cauchy-failure
witnesses for sequences with vanishing steps.

The iteration x_{n+1} = S x_n stops on a small consecutive step (the
observable stand-in for convergence), on an exact revisit in finite
spaces, or at the iteration cap.  When constants (a, b, control) are
supplied, the geometric envelope (a/(1-b))^n * control(first step) is
recorded next to each step: for a certified map the control of every
step must stay below it.
"""

from __future__ import annotations

import math
from dataclasses import dataclass

import numpy as np

from .spaces import FiniteMetricSpace

DEFAULT_FIX_TOL = 1e-10
DEFAULT_MAX_ITERS = 10 ** 6


def _validate_constants(a: float, b: float) -> None:
    if not a > 0:
        raise ValueError("need a > 0")
    if b < 0:
        raise ValueError("need b >= 0")
    if not a + b < 1:
        raise ValueError("need a + b < 1")


def _unpack_constants(constants):
    if constants is None:
        return None
    if isinstance(constants, (tuple, list)):
        a, b, control = constants
    else:
        a, b, control = constants.a, constants.b, constants.control
    _validate_constants(a, b)
    return float(a), float(b), control


@dataclass(frozen=True)
class IterationTrace:
    """One orbit with its consecutive step distances.

    ``bounds[n]`` is the geometric envelope for step n when constants
    were supplied, else None.  Status is "converged" (with the fixed
    point candidate and its residual d(z, Sz)), "cycle" (finite spaces,
    with the period), or "max_iters".
    """

    points: tuple
    step_d: np.ndarray
    bounds: np.ndarray | None
    status: str
    fixed_point: object | None = None
    residual: float | None = None
    period: int | None = None

    @property
    def converged(self) -> bool:
        return self.status == "converged"

    @property
    def steps(self) -> int:
        return len(self.step_d)


def iterate(space, mapping, start, fix_tol: float = DEFAULT_FIX_TOL,
            max_iters: int = DEFAULT_MAX_ITERS, constants=None) -> IterationTrace:
    """Run the orbit of ``start`` under the map.

    Stops at the first n with d(x_n, x_{n+1}) <= fix_tol (status
    "converged", fixed point x_{n+1}, residual evaluated by one extra
    application), on revisiting a point of a finite space ("cycle"),
    or after ``max_iters`` steps.
    """
    if max_iters < 1:
        raise ValueError("max_iters must be >= 1")
    if not fix_tol > 0:
        raise ValueError("fix_tol must be positive")
    unpacked = _unpack_constants(constants)
    ratio = None
    control = None
    if unpacked is not None:
        a, b, control = unpacked
        ratio = a / (1.0 - b)

    finite = isinstance(space, FiniteMetricSpace)
    if finite:
        space.index(start)
        x = start
    else:
        x = space.require_member(start)

    points = [x]
    steps: list = []
    bounds: list | None = [] if ratio is not None else None
    visited = {x: 0} if finite else None
    envelope = None
    status = "max_iters"
    fixed = None
    residual = None
    period = None

    for n in range(max_iters):
        nxt = mapping.apply(x)
        d = space.distance(x, nxt)
        points.append(nxt)
        steps.append(d)
        if bounds is not None:
            if n == 0:
                envelope = float(control(d))
            bounds.append(envelope)
            envelope *= ratio
        if d <= fix_tol:
            status = "converged"
            fixed = nxt
            residual = space.distance(nxt, mapping.apply(nxt))
            break
        if finite:
            if nxt in visited:
                status = "cycle"
                period = n + 1 - visited[nxt]
                break
            visited[nxt] = n + 1
        x = nxt

    return IterationTrace(
        points=tuple(points),
        step_d=np.asarray(steps, dtype=float),
        bounds=None if bounds is None else np.asarray(bounds, dtype=float),
        status=status, fixed_point=fixed, residual=residual, period=period)


def a_priori_bound(n: int, a: float, b: float, control, first_step: float) -> float:
    """Geometric envelope value (a/(1-b))^n * control(first step).

    Computed by repeated multiplication so that the value at n+1 equals
    exactly (a/(1-b)) times the value at n.
    """
    if isinstance(n, bool) or not isinstance(n, (int, np.integer)):
        raise ValueError("n must be an integer")
    if n < 0:
        raise ValueError("n must be >= 0")
    _validate_constants(a, b)
    if first_step < 0:
        raise ValueError("first_step must be >= 0")
    out = float(control(first_step))
    ratio = a / (1.0 - b)
    for _ in range(int(n)):
        out *= ratio
    return out


def iters_to_tolerance(a: float, b: float, control, first_step: float,
                       tol: float) -> int:
    """Smallest n whose envelope value is <= control(tol).

    For a certified orbit this is the step count after which the
    envelope guarantees consecutive steps below the tolerance.
    """
    _validate_constants(a, b)
    if tol <= 0:
        raise ValueError("tol must be positive")
    if first_step < 0:
        raise ValueError("first_step must be >= 0")
    if first_step == 0:
        return 0
    start = float(control(first_step))
    target = float(control(tol))
    if start <= target:
        return 0
    if target <= 0:
        raise ValueError("control vanishes at the tolerance; no finite step count")
    ratio = a / (1.0 - b)
    n = max(0, math.ceil(math.log(target / start) / math.log(ratio)))
    while n > 0 and a_priori_bound(n - 1, a, b, control, first_step) <= target:
        n -= 1
    while a_priori_bound(n, a, b, control, first_step) > target:
        n += 1
    return n


@dataclass(frozen=True)
class CauchyWitness:
    """Index pattern showing a sequence fails to be Cauchy at eps0.

    For each k (1-based, up to the horizon), ``n_idx[k-1]`` is k+1 and
    ``m_idx[k-1]`` is the least later index whose distance back to
    x_{n(k)} reaches eps0; minimality gives d(x_{m-1}, x_n) < eps0.
    The estimate arrays hold the distances that all converge to eps0
    when consecutive steps vanish:

    - ``est_gap``   : d(x_m,     x_n)
    - ``est_inner`` : d(x_{m-1}, x_n)
    - ``est_outer`` : d(x_{m-1}, x_{n+1})
    - ``est_shift`` : d(x_{m+1}, x_{n+1})
    """

    eps0: float
    n_idx: np.ndarray
    m_idx: np.ndarray
    est_gap: np.ndarray
    est_inner: np.ndarray
    est_outer: np.ndarray
    est_shift: np.ndarray

    @property
    def horizon(self) -> int:
        return len(self.n_idx)


def find_cauchy_witness(space, sequence, eps0: float, horizon: int):
    """Search a sequence for the non-Cauchy index pattern at eps0.

    For each k = 1..horizon the anchor index is n(k) = k+1 and m(k) is
    the least index above it with d(x_{m(k)}, x_{n(k)}) >= eps0.
    Returns None when some k admits no such m with m+1 still inside the
    sequence — in particular for Cauchy-looking sequences whose tail
    spread never reaches eps0.
    """
    if eps0 <= 0:
        raise ValueError("eps0 must be positive")
    if horizon < 1:
        raise ValueError("horizon must be >= 1")
    seq = list(sequence)
    if len(seq) <= horizon:
        raise ValueError("sequence must be longer than the horizon")

    n_idx = []
    m_idx = []
    for k in range(1, horizon + 1):
        n = k + 1
        m = None
        for cand in range(n + 1, len(seq) - 1):  # cand+1 must stay in range
            if space.distance(seq[cand], seq[n]) >= eps0:
                m = cand
                break
        if m is None:
            return None
        n_idx.append(n)
        m_idx.append(m)

    gap = [space.distance(seq[m], seq[n]) for n, m in zip(n_idx, m_idx)]
    inner = [space.distance(seq[m - 1], seq[n]) for n, m in zip(n_idx, m_idx)]
    outer = [space.distance(seq[m - 1], seq[n + 1]) for n, m in zip(n_idx, m_idx)]
    shift = [space.distance(seq[m + 1], seq[n + 1]) for n, m in zip(n_idx, m_idx)]
    return CauchyWitness(
        eps0=float(eps0),
        n_idx=np.asarray(n_idx), m_idx=np.asarray(m_idx),
        est_gap=np.asarray(gap), est_inner=np.asarray(inner),
        est_outer=np.asarray(outer), est_shift=np.asarray(shift))
