"""Shared generators: random embedded finite spaces and self-map families."""

from __future__ import annotations

import numpy as np

from ratfix import AlteringFunction, Density, FiniteMetricSpace, TableMap, integral_control


def embedded_space(rng, n_min=2, n_max=12, box=10.0):
    """Random finite metric space with distances from a planar embedding.

    Euclidean distances of distinct points satisfy all three axioms, so
    construction never fails.  Returns (space, embedding).
    """
    n = int(rng.integers(n_min, n_max + 1))
    while True:
        pts = rng.uniform(0.0, box, size=(n, 2))
        dist = np.zeros((n, n))
        ok = True
        for i in range(n):
            for j in range(i + 1, n):
                dij = float(np.hypot(*(pts[i] - pts[j])))
                if dij < 1e-3:
                    ok = False
                    break
                dist[i, j] = dist[j, i] = dij
            if not ok:
                break
        if ok:
            return FiniteMetricSpace(range(n), dist), pts


def hub_pull_map(space, pts, rng, gamma=None):
    """Table map snapping each point toward a random hub.

    Frequently (not always) contractive; useful for populations where
    certification succeeds often but not trivially.
    """
    n = len(space)
    hub = int(rng.integers(n))
    g = float(rng.uniform(0.2, 0.6)) if gamma is None else gamma
    targets = []
    for i in range(n):
        goal = pts[hub] + g * (pts[i] - pts[hub])
        targets.append(int(np.argmin(((pts - goal) ** 2).sum(axis=1))))
    return TableMap(space, targets)


def constant_table_map(space, rng):
    target = int(rng.integers(len(space)))
    return TableMap(space, [target] * len(space))


def random_table_map(space, rng):
    return TableMap(space, [int(t) for t in rng.integers(len(space), size=len(space))])


def mixed_map(space, pts, rng, style):
    if style == 0:
        return constant_table_map(space, rng)
    if style == 1:
        return hub_pull_map(space, pts, rng)
    return random_table_map(space, rng)


_SQRT_TABLE = AlteringFunction.from_table(
    [(t, float(np.sqrt(t))) for t in np.linspace(0.0, 40.0, 161)])


def shipped_controls():
    """One representative control function per shipped kind."""
    return [
        AlteringFunction.identity(),
        AlteringFunction.power_law(2.0),
        integral_control(Density("constant", 1.0)),
        integral_control(Density("linear", 2.0)),
        _SQRT_TABLE,
    ]


def brute_force_ratio_sup(space, mapping):
    """max over pairs x != y of d(Sx, Sy) / d(x, y), by direct loops."""
    best = 0.0
    for x in space.points:
        for y in space.points:
            if x == y:
                continue
            r = space.distance(mapping.apply(x), mapping.apply(y)) / space.distance(x, y)
            if r > best:
                best = r
    return best
