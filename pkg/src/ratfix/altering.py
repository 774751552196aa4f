"""Altering distance control functions and their grid-level verification.

A control function wraps distances inside contraction inequalities.  It
must vanish at zero and only there, never decrease, and be continuous.
The first two requirements are checkable on a grid; continuity can only
be falsified by sampling, so reports say "no violation found" rather
than claiming it holds.
"""

from __future__ import annotations

from dataclasses import dataclass

import numpy as np

from .quadrature import DEFAULT_TOL, integrate

DENSITY_FAMILIES = ("constant", "linear", "power")
CONTROL_KINDS = ("identity", "power", "integral", "table")


@dataclass(frozen=True)
class Density:
    """Nonnegative integrand on R+ from a named family.

    ``constant`` is k, ``linear`` is k*t and ``power`` is k*t**p, with
    k > 0 and p > 0 so that every prefix integral over (0, eps) is
    positive.
    """

    family: str
    scale: float = 1.0
    exponent: float = 1.0

    def __post_init__(self):
        if self.family not in DENSITY_FAMILIES:
            raise ValueError(f"unknown density family: {self.family!r}")
        if not self.scale > 0:
            raise ValueError("density scale must be positive")
        if self.family == "power" and not self.exponent > 0:
            raise ValueError("density exponent must be positive")

    def __call__(self, t):
        arr = np.asarray(t, dtype=float)
        if self.family == "constant":
            out = np.full_like(arr, self.scale)
        elif self.family == "linear":
            out = self.scale * arr
        else:
            out = self.scale * np.power(arr, self.exponent)
        return out if out.ndim else float(out)


@dataclass(frozen=True)
class AlteringFunction:
    """A control function on R+ given by kind and parameters.

    Kinds: ``identity``; ``power`` (t**p with p >= 1); ``integral``
    (prefix integral of a density, evaluated by composite Simpson);
    ``table`` (linear interpolation through sample pairs, clamped to the
    end values beyond the sampled range).  Table functions may encode
    invalid candidates on purpose; run :func:`check_control_properties`
    to verify them.
    """

    kind: str
    power: float = 1.0
    density: Density | None = None
    quad_rule: str = "simpson"
    quad_tol: float = DEFAULT_TOL
    quad_panels: int | None = None
    sample_t: tuple = ()
    sample_v: tuple = ()

    def __post_init__(self):
        if self.kind not in CONTROL_KINDS:
            raise ValueError(f"unknown control kind: {self.kind!r}")
        if self.kind == "power" and not self.power >= 1:
            raise ValueError("power kind needs exponent >= 1")
        if self.kind == "integral":
            if self.density is None:
                raise ValueError("integral kind needs a density")
            if self.quad_rule != "simpson":
                raise ValueError(f"unknown quadrature rule: {self.quad_rule!r}")
            if not self.quad_tol > 0:
                raise ValueError("quadrature tolerance must be positive")
        if self.kind == "table":
            ts = np.asarray(self.sample_t, dtype=float)
            vs = np.asarray(self.sample_v, dtype=float)
            if ts.size < 2 or ts.shape != vs.shape:
                raise ValueError("table kind needs >= 2 aligned sample pairs")
            if (ts < 0).any():
                raise ValueError("table sample points must be >= 0")
            if not (np.diff(ts) > 0).all():
                raise ValueError("table sample points must increase strictly")
            if not np.isfinite(vs).all() or (vs < 0).any():
                raise ValueError("table sample values must be finite and >= 0")

    @classmethod
    def identity(cls) -> "AlteringFunction":
        return cls("identity")

    @classmethod
    def power_law(cls, exponent: float) -> "AlteringFunction":
        return cls("power", power=float(exponent))

    @classmethod
    def from_table(cls, pairs) -> "AlteringFunction":
        ts, vs = zip(*((float(t), float(v)) for t, v in pairs))
        return cls("table", sample_t=ts, sample_v=vs)

    def _eval_scalar(self, t: float) -> float:
        if self.kind == "identity":
            return t
        if self.kind == "power":
            return t ** self.power
        if self.kind == "table":
            return float(np.interp(t, self.sample_t, self.sample_v))
        if t == 0.0:
            return 0.0
        return integrate(self.density, 0.0, t,
                         tol=self.quad_tol, panels=self.quad_panels)

    def __call__(self, t):
        if np.ndim(t) == 0:
            tv = float(t)
            if tv < 0:
                raise ValueError("control functions are defined on t >= 0")
            return self._eval_scalar(tv)
        arr = np.asarray(t, dtype=float)
        if (arr < 0).any():
            raise ValueError("control functions are defined on t >= 0")
        if self.kind == "identity":
            return arr.copy()
        if self.kind == "power":
            return arr ** self.power
        if self.kind == "table":
            return np.interp(arr, self.sample_t, self.sample_v)
        return np.array([self._eval_scalar(float(v)) for v in arr])


def integral_control(density: Density, tol: float = DEFAULT_TOL,
                     panels: int | None = None) -> AlteringFunction:
    """Build the prefix-integral control function of a density.

    The result vanishes exactly at zero, inherits monotonicity from the
    nonnegative integrand, and evaluates by composite Simpson within
    ``tol`` (exactly, up to rounding, for the polynomial families).
    """
    if not isinstance(density, Density):
        raise TypeError("integral_control needs a Density")
    return AlteringFunction("integral", density=density,
                            quad_tol=tol, quad_panels=panels)


@dataclass(frozen=True)
class ControlPropertyReport:
    """Grid-level verdicts for the three control-function requirements.

    ``no_jump_violation`` only means no jump above the bound was found
    at this grid resolution; it is not a continuity proof.
    """

    zero_iff_zero: bool
    zero_witness: float | None
    nondecreasing: bool
    decrease_witness: tuple | None
    max_jump: float
    jump_bound: float
    no_jump_violation: bool
    jump_witness: tuple | None

    @property
    def all_pass(self) -> bool:
        return self.zero_iff_zero and self.nondecreasing and self.no_jump_violation

    def summary(self) -> str:
        lines = [
            f"zero only at zero: {'pass' if self.zero_iff_zero else f'FAIL at t={self.zero_witness:g}'}",
            f"non-decreasing on grid: {'pass' if self.nondecreasing else f'FAIL between t={self.decrease_witness[0]:g} and t={self.decrease_witness[1]:g}'}",
        ]
        if self.no_jump_violation:
            lines.append(
                f"continuity: no violation found (max adjacent jump "
                f"{self.max_jump:g} <= bound {self.jump_bound:g})")
        else:
            lines.append(
                f"continuity: violation found between t={self.jump_witness[0]:g} "
                f"and t={self.jump_witness[1]:g} (jump {self.max_jump:g} > "
                f"bound {self.jump_bound:g})")
        return "\n".join(lines)


def check_control_properties(fn: AlteringFunction, grid,
                             jump_bound: float) -> ControlPropertyReport:
    """Verify a control function on a sampling grid.

    The grid must start at 0 and increase strictly.  Checks performed:
    value exactly 0 at t=0 and strictly positive at every other grid
    point; non-decreasing between consecutive grid points; adjacent
    jumps within ``jump_bound``.  Failures carry the witnessing grid
    points.
    """
    ts = np.asarray(grid, dtype=float)
    if ts.size == 0:
        raise ValueError("grid must be nonempty")
    if ts[0] != 0.0:
        raise ValueError("grid must start at 0")
    if ts.size > 1 and not (np.diff(ts) > 0).all():
        raise ValueError("grid must be strictly increasing")

    vals = np.asarray(fn(ts), dtype=float)

    zero_ok = bool(vals[0] == 0.0)
    zero_witness = None if zero_ok else 0.0
    if zero_ok and ts.size > 1:
        pos = vals[1:] > 0
        if not pos.all():
            zero_ok = False
            zero_witness = float(ts[1 + int(np.argmin(pos))])

    diffs = np.diff(vals)
    mono_ok = bool((diffs >= 0).all()) if diffs.size else True
    decrease_witness = None
    if not mono_ok:
        i = int(np.argmax(diffs < 0))
        decrease_witness = (float(ts[i]), float(ts[i + 1]))

    jumps = np.abs(diffs)
    max_jump = float(jumps.max()) if jumps.size else 0.0
    jump_ok = max_jump <= jump_bound
    jump_witness = None
    if not jump_ok:
        i = int(np.argmax(jumps))
        jump_witness = (float(ts[i]), float(ts[i + 1]))

    return ControlPropertyReport(
        zero_iff_zero=zero_ok, zero_witness=zero_witness,
        nondecreasing=mono_ok, decrease_witness=decrease_witness,
        max_jump=max_jump, jump_bound=float(jump_bound),
        no_jump_violation=jump_ok, jump_witness=jump_witness)
