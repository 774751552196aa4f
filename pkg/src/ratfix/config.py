"""Run configuration: parsing, validation and canonical serialization.

Configs are YAML documents with up to six blocks: ``space`` (required),
``control``, ``condition``, ``iteration``, ``property_p`` and
``witness``.  Parsing is strict — unknown keys are rejected and every
diagnostic is addressed by field path — and the parsed form is
canonical, so parse -> serialize -> parse is the identity.
"""

from __future__ import annotations

import hashlib
from dataclasses import dataclass

import numpy as np
import yaml

from .altering import CONTROL_KINDS, DENSITY_FAMILIES, AlteringFunction, Density, integral_control
from .contraction import CONDITION_KINDS
from .spaces import (AffineMap, ConstantMap, FiniteMetricSpace, MetricAxiomError,
                     RationalMap, RealBoxSpace, TableMap, validate_distance_matrix)

BOX_FAMILIES = ("affine", "rational", "constant")


class ConfigError(ValueError):
    """Config diagnostic addressed by field path."""

    def __init__(self, field: str, message: str):
        self.field = field
        super().__init__(f"{field}: {message}")


@dataclass(frozen=True)
class FiniteSpaceConfig:
    points: tuple
    dist: tuple          # rows as tuples of floats
    table: tuple         # target ids aligned with points


@dataclass(frozen=True)
class BoxSpaceConfig:
    dimension: int
    lower: tuple
    upper: tuple
    family: str
    matrix: tuple | None = None
    offset: tuple | None = None
    value: tuple | None = None


@dataclass(frozen=True)
class DensityConfig:
    family: str
    scale: float = 1.0
    exponent: float = 1.0


@dataclass(frozen=True)
class ControlConfig:
    kind: str = "identity"
    power: float = 2.0
    density: DensityConfig | None = None
    tolerance: float = 1e-9
    samples: tuple | None = None


@dataclass(frozen=True)
class ConditionConfig:
    kind: str = "generalized"
    margin: float = 1e-6
    a: float | None = None
    b: float | None = None
    grid_points: int = 33
    random_points: int = 32
    seed: int = 0


@dataclass(frozen=True)
class IterationConfig:
    start: object
    tol: float = 1e-10
    max_iters: int = 10 ** 6


@dataclass(frozen=True)
class PropertyPConfig:
    n_max: int = 8


@dataclass(frozen=True)
class WitnessConfig:
    eps0: float
    horizon: int


@dataclass(frozen=True)
class RunConfig:
    space: FiniteSpaceConfig | BoxSpaceConfig
    control: ControlConfig
    condition: ConditionConfig
    iteration: IterationConfig | None
    property_p: PropertyPConfig
    witness: WitnessConfig | None


def _mapping(node, path):
    if not isinstance(node, dict):
        raise ConfigError(path, "must be a mapping")
    return node


def _check_keys(node, path, required, optional=()):
    for key in required:
        if key not in node:
            raise ConfigError(path, f"missing required key {key!r}")
    allowed = set(required) | set(optional)
    unknown = [k for k in node if k not in allowed]
    if unknown:
        raise ConfigError(path, f"unknown keys {sorted(map(str, unknown))!r}")


def _number(node, path, key, default=None, minimum=None, maximum=None,
            strict_min=False, strict_max=False):
    if key not in node:
        if default is None:
            raise ConfigError(path, f"missing required key {key!r}")
        return default
    value = node[key]
    if isinstance(value, bool) or not isinstance(value, (int, float)):
        raise ConfigError(f"{path}.{key}", "must be a number")
    value = float(value)
    if not np.isfinite(value):
        raise ConfigError(f"{path}.{key}", "must be finite")
    if minimum is not None and (value <= minimum if strict_min else value < minimum):
        op = ">" if strict_min else ">="
        raise ConfigError(f"{path}.{key}", f"must be {op} {minimum:g}")
    if maximum is not None and (value >= maximum if strict_max else value > maximum):
        op = "<" if strict_max else "<="
        raise ConfigError(f"{path}.{key}", f"must be {op} {maximum:g}")
    return value


def _integer(node, path, key, default=None, minimum=None):
    if key not in node:
        if default is None:
            raise ConfigError(path, f"missing required key {key!r}")
        return default
    value = node[key]
    if isinstance(value, bool) or not isinstance(value, int):
        raise ConfigError(f"{path}.{key}", "must be an integer")
    if minimum is not None and value < minimum:
        raise ConfigError(f"{path}.{key}", f"must be >= {minimum}")
    return int(value)


def _vector(node, path, key, length=None):
    value = node.get(key)
    if not isinstance(value, list) or not value:
        raise ConfigError(f"{path}.{key}", "must be a nonempty list of numbers")
    out = []
    for i, v in enumerate(value):
        if isinstance(v, bool) or not isinstance(v, (int, float)):
            raise ConfigError(f"{path}.{key}[{i}]", "must be a number")
        out.append(float(v))
    if length is not None and len(out) != length:
        raise ConfigError(f"{path}.{key}", f"must have length {length}")
    return tuple(out)


def _parse_finite_space(node, path):
    _check_keys(node, path, required=("kind", "points", "dist", "map"))
    points = node["points"]
    if not isinstance(points, list) or not points:
        raise ConfigError(f"{path}.points", "must be a nonempty list")
    points = tuple(points)
    if len(set(points)) != len(points):
        raise ConfigError(f"{path}.points", "identifiers must be unique")
    n = len(points)

    dist = node["dist"]
    if (not isinstance(dist, list) or len(dist) != n
            or any(not isinstance(row, list) or len(row) != n for row in dist)):
        raise ConfigError(f"{path}.dist", f"must be a {n}x{n} matrix")
    rows = []
    for i, row in enumerate(dist):
        vals = []
        for j, v in enumerate(row):
            if isinstance(v, bool) or not isinstance(v, (int, float)):
                raise ConfigError(f"{path}.dist[{i}][{j}]", "must be a number")
            vals.append(float(v))
        rows.append(tuple(vals))
    try:
        violations = validate_distance_matrix([list(r) for r in rows])
    except ValueError as exc:
        raise ConfigError(f"{path}.dist", str(exc)) from None
    if violations:
        first = violations[0]
        raise ConfigError(
            f"{path}.dist",
            f"{first.axiom} axiom violated at {first.indices}: {first.detail}")

    table_node = node["map"]
    if isinstance(table_node, dict):
        missing = [p for p in points if p not in table_node]
        if missing:
            raise ConfigError(f"{path}.map", f"missing entries for {missing[:5]!r}")
        extra = [k for k in table_node if k not in set(points)]
        if extra:
            raise ConfigError(f"{path}.map", f"keys not in points: {extra[:5]!r}")
        targets = [table_node[p] for p in points]
    elif isinstance(table_node, list):
        if len(table_node) != n:
            raise ConfigError(f"{path}.map", f"must list {n} targets")
        targets = list(table_node)
    else:
        raise ConfigError(f"{path}.map", "must be a mapping or a list of targets")
    known = set(points)
    for i, t in enumerate(targets):
        if t not in known:
            raise ConfigError(f"{path}.map", f"target {t!r} (entry {i}) not in points")
    return FiniteSpaceConfig(points=points, dist=tuple(rows), table=tuple(targets))


def _parse_box_space(node, path):
    _check_keys(node, path,
                required=("kind", "dimension", "lower", "upper", "family"),
                optional=("matrix", "offset", "value"))
    dim = _integer(node, path, "dimension", minimum=1)
    lower = _vector(node, path, "lower", length=dim)
    upper = _vector(node, path, "upper", length=dim)
    if any(lo > hi for lo, hi in zip(lower, upper)):
        raise ConfigError(f"{path}.lower", "must be <= upper componentwise")
    family = node["family"]
    if family not in BOX_FAMILIES:
        raise ConfigError(f"{path}.family",
                          f"unknown map family {family!r}; known: {list(BOX_FAMILIES)}")
    matrix = offset = value = None
    if family == "affine":
        raw = node.get("matrix")
        if (not isinstance(raw, list) or len(raw) != dim
                or any(not isinstance(r, list) or len(r) != dim for r in raw)):
            raise ConfigError(f"{path}.matrix", f"must be a {dim}x{dim} matrix")
        matrix = tuple(tuple(float(v) for v in r) for r in raw)
        offset = _vector(node, path, "offset", length=dim)
    elif family == "constant":
        value = _vector(node, path, "value", length=dim)
    else:
        for key in ("matrix", "offset", "value"):
            if key in node:
                raise ConfigError(f"{path}.{key}",
                                  f"not a parameter of the {family} family")
    return BoxSpaceConfig(dimension=dim, lower=lower, upper=upper,
                          family=family, matrix=matrix, offset=offset, value=value)


def _parse_space(node, path="space"):
    node = _mapping(node, path)
    kind = node.get("kind")
    if kind == "finite":
        return _parse_finite_space(node, path)
    if kind == "box":
        return _parse_box_space(node, path)
    raise ConfigError(f"{path}.kind", f"must be 'finite' or 'box', got {kind!r}")


def _parse_control(node, path="control"):
    if node is None:
        return ControlConfig()
    node = _mapping(node, path)
    _check_keys(node, path, required=("kind",),
                optional=("power", "density", "tolerance", "samples"))
    kind = node["kind"]
    if kind not in CONTROL_KINDS:
        raise ConfigError(f"{path}.kind",
                          f"unknown control kind {kind!r}; known: {list(CONTROL_KINDS)}")
    power = _number(node, path, "power", default=2.0, minimum=1.0)
    tolerance = _number(node, path, "tolerance", default=1e-9,
                        minimum=0.0, strict_min=True)
    density = None
    if kind == "integral":
        if "density" not in node:
            raise ConfigError(path, "integral control references a density block")
        dnode = _mapping(node["density"], f"{path}.density")
        _check_keys(dnode, f"{path}.density", required=("family",),
                    optional=("scale", "exponent"))
        family = dnode["family"]
        if family not in DENSITY_FAMILIES:
            raise ConfigError(f"{path}.density.family",
                              f"unknown density family {family!r}")
        density = DensityConfig(
            family=family,
            scale=_number(dnode, f"{path}.density", "scale", default=1.0,
                          minimum=0.0, strict_min=True),
            exponent=_number(dnode, f"{path}.density", "exponent", default=1.0,
                             minimum=0.0, strict_min=True))
    elif "density" in node:
        raise ConfigError(f"{path}.density", "only the integral kind takes a density")
    samples = None
    if kind == "table":
        raw = node.get("samples")
        if not isinstance(raw, list) or len(raw) < 2:
            raise ConfigError(f"{path}.samples", "must list >= 2 [t, value] pairs")
        pairs = []
        for i, item in enumerate(raw):
            if (not isinstance(item, list) or len(item) != 2
                    or any(isinstance(v, bool) or not isinstance(v, (int, float))
                           for v in item)):
                raise ConfigError(f"{path}.samples[{i}]", "must be a [t, value] pair")
            pairs.append((float(item[0]), float(item[1])))
        try:
            AlteringFunction.from_table(pairs)
        except ValueError as exc:
            raise ConfigError(f"{path}.samples", str(exc)) from None
        samples = tuple(pairs)
    elif "samples" in node:
        raise ConfigError(f"{path}.samples", "only the table kind takes samples")
    return ControlConfig(kind=kind, power=power, density=density,
                         tolerance=tolerance, samples=samples)


def _parse_condition(node, path="condition"):
    if node is None:
        return ConditionConfig()
    node = _mapping(node, path)
    _check_keys(node, path, required=(),
                optional=("kind", "margin", "a", "b",
                          "grid_points", "random_points", "seed"))
    kind = node.get("kind", "generalized")
    if kind not in CONDITION_KINDS:
        raise ConfigError(f"{path}.kind",
                          f"unknown condition kind {kind!r}; known: {list(CONDITION_KINDS)}")
    margin = _number(node, path, "margin", default=1e-6,
                     minimum=0.0, maximum=0.5, strict_min=True, strict_max=True)
    a = b = None
    if "a" in node or "b" in node:
        a = _number(node, path, "a", minimum=0.0, strict_min=True)
        b = _number(node, path, "b", default=0.0, minimum=0.0)
        if not a + b < 1:
            raise ConfigError(path, f"need a + b < 1, got {a:g} + {b:g}")
        if kind == "banach_khan" and b != 0:
            raise ConfigError(f"{path}.b", "banach_khan fixes b = 0")
    return ConditionConfig(
        kind=kind, margin=margin, a=a, b=b,
        grid_points=_integer(node, path, "grid_points", default=33, minimum=0),
        random_points=_integer(node, path, "random_points", default=32, minimum=0),
        seed=_integer(node, path, "seed", default=0))


def _parse_iteration(node, space_cfg, path="iteration"):
    if node is None:
        return None
    node = _mapping(node, path)
    _check_keys(node, path, required=("start",), optional=("tol", "max_iters"))
    start = node["start"]
    if isinstance(space_cfg, BoxSpaceConfig):
        if isinstance(start, (int, float)) and not isinstance(start, bool):
            start = (float(start),)
        elif isinstance(start, list):
            start = _vector({"start": start}, path, "start",
                            length=space_cfg.dimension)
        else:
            raise ConfigError(f"{path}.start", "must be a number or list of numbers")
        if len(start) != space_cfg.dimension:
            raise ConfigError(f"{path}.start",
                              f"must have length {space_cfg.dimension}")
        if any(s < lo or s > hi for s, lo, hi
               in zip(start, space_cfg.lower, space_cfg.upper)):
            raise ConfigError(f"{path}.start", "must lie inside the box")
    else:
        if start not in set(space_cfg.points):
            raise ConfigError(f"{path}.start", f"unknown point {start!r}")
    return IterationConfig(
        start=start,
        tol=_number(node, path, "tol", default=1e-10, minimum=0.0, strict_min=True),
        max_iters=_integer(node, path, "max_iters", default=10 ** 6, minimum=1))


def _parse_property_p(node, path="property_p"):
    if node is None:
        return PropertyPConfig()
    node = _mapping(node, path)
    _check_keys(node, path, required=(), optional=("n_max",))
    return PropertyPConfig(n_max=_integer(node, path, "n_max", default=8, minimum=2))


def _parse_witness(node, path="witness"):
    if node is None:
        return None
    node = _mapping(node, path)
    _check_keys(node, path, required=("eps0", "horizon"))
    return WitnessConfig(
        eps0=_number(node, path, "eps0", minimum=0.0, strict_min=True),
        horizon=_integer(node, path, "horizon", minimum=1))


def parse_config(document: str) -> RunConfig:
    """Parse and validate a YAML config document.

    Raises :class:`ConfigError` with a field-addressed message on any
    problem; YAML syntax errors keep their line information.
    """
    try:
        raw = yaml.safe_load(document)
    except yaml.YAMLError as exc:
        mark = getattr(exc, "problem_mark", None)
        where = f"line {mark.line + 1}" if mark is not None else "document"
        raise ConfigError("document", f"invalid YAML at {where}: {exc}") from None
    if not isinstance(raw, dict):
        raise ConfigError("document", "top level must be a mapping")
    _check_keys(raw, "document", required=("space",),
                optional=("control", "condition", "iteration",
                          "property_p", "witness"))
    space = _parse_space(raw["space"])
    control = _parse_control(raw.get("control"))
    condition = _parse_condition(raw.get("condition"))
    if condition.kind == "das_gupta" and control.kind != "identity":
        raise ConfigError("condition.kind",
                          "das_gupta requires the identity control")
    if condition.kind == "integral" and control.kind != "integral":
        raise ConfigError("condition.kind",
                          "integral condition requires an integral control")
    return RunConfig(
        space=space,
        control=control,
        condition=condition,
        iteration=_parse_iteration(raw.get("iteration"), space),
        property_p=_parse_property_p(raw.get("property_p")),
        witness=_parse_witness(raw.get("witness")))


def _space_dict(cfg) -> dict:
    if isinstance(cfg, FiniteSpaceConfig):
        return {
            "kind": "finite",
            "points": list(cfg.points),
            "dist": [list(row) for row in cfg.dist],
            "map": list(cfg.table),
        }
    out = {
        "kind": "box",
        "dimension": cfg.dimension,
        "lower": list(cfg.lower),
        "upper": list(cfg.upper),
        "family": cfg.family,
    }
    if cfg.matrix is not None:
        out["matrix"] = [list(row) for row in cfg.matrix]
    if cfg.offset is not None:
        out["offset"] = list(cfg.offset)
    if cfg.value is not None:
        out["value"] = list(cfg.value)
    return out


def config_to_dict(cfg: RunConfig) -> dict:
    """Canonical plain-dict form of a config (stable key order)."""
    out: dict = {"space": _space_dict(cfg.space)}
    control: dict = {"kind": cfg.control.kind}
    if cfg.control.kind == "power":
        control["power"] = cfg.control.power
    if cfg.control.kind == "integral":
        control["density"] = {
            "family": cfg.control.density.family,
            "scale": cfg.control.density.scale,
            "exponent": cfg.control.density.exponent,
        }
        control["tolerance"] = cfg.control.tolerance
    if cfg.control.kind == "table":
        control["samples"] = [list(p) for p in cfg.control.samples]
    out["control"] = control
    cond: dict = {
        "kind": cfg.condition.kind,
        "margin": cfg.condition.margin,
        "grid_points": cfg.condition.grid_points,
        "random_points": cfg.condition.random_points,
        "seed": cfg.condition.seed,
    }
    if cfg.condition.a is not None:
        cond["a"] = cfg.condition.a
        cond["b"] = cfg.condition.b
    out["condition"] = cond
    if cfg.iteration is not None:
        start = cfg.iteration.start
        out["iteration"] = {
            "start": list(start) if isinstance(start, tuple) else start,
            "tol": cfg.iteration.tol,
            "max_iters": cfg.iteration.max_iters,
        }
    out["property_p"] = {"n_max": cfg.property_p.n_max}
    if cfg.witness is not None:
        out["witness"] = {"eps0": cfg.witness.eps0,
                          "horizon": cfg.witness.horizon}
    return out


def serialize_config(cfg: RunConfig) -> str:
    """Canonical YAML text; parse(serialize(cfg)) == cfg."""
    return yaml.safe_dump(config_to_dict(cfg), sort_keys=False)


def config_digest(cfg: RunConfig) -> str:
    """SHA-256 of the canonical serialization."""
    return hashlib.sha256(serialize_config(cfg).encode("utf-8")).hexdigest()


def build_space_and_map(cfg: RunConfig):
    """Instantiate the configured space and self-map."""
    sc = cfg.space
    if isinstance(sc, FiniteSpaceConfig):
        try:
            space = FiniteMetricSpace(sc.points, [list(r) for r in sc.dist])
            return space, TableMap(space, list(sc.table))
        except (MetricAxiomError, ValueError) as exc:
            raise ConfigError("space", str(exc)) from None
    space = RealBoxSpace(list(sc.lower), list(sc.upper))
    try:
        if sc.family == "affine":
            mapping = AffineMap(space, [list(r) for r in sc.matrix], list(sc.offset))
        elif sc.family == "rational":
            mapping = RationalMap(space)
        else:
            mapping = ConstantMap(space, list(sc.value))
    except ValueError as exc:
        raise ConfigError("space", str(exc)) from None
    return space, mapping


def build_control(cfg: RunConfig) -> AlteringFunction:
    """Instantiate the configured control function."""
    cc = cfg.control
    if cc.kind == "identity":
        return AlteringFunction.identity()
    if cc.kind == "power":
        return AlteringFunction.power_law(cc.power)
    if cc.kind == "table":
        return AlteringFunction.from_table(cc.samples)
    density = Density(cc.density.family, cc.density.scale, cc.density.exponent)
    return integral_control(density, tol=cc.tolerance)
