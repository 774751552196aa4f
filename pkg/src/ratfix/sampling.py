"""Deterministic point samples on box spaces."""

from __future__ import annotations

import numpy as np


def grid_points(space, per_dim: int) -> np.ndarray:
    """Axis-aligned lattice with ``per_dim`` points per coordinate."""
    if per_dim < 1:
        raise ValueError("need at least one grid point per dimension")
    axes = [np.linspace(space.lower[i], space.upper[i], per_dim)
            for i in range(space.dimension)]
    if space.dimension == 1:
        return axes[0].reshape(-1, 1)
    mesh = np.meshgrid(*axes, indexing="ij")
    return np.stack([m.ravel() for m in mesh], axis=1)


def random_points(space, count: int, rng: np.random.Generator) -> np.ndarray:
    """Uniform sample of the box from the given generator."""
    width = space.upper - space.lower
    return space.lower + rng.random((count, space.dimension)) * width


def sample_points(space, grid_per_dim: int, random_count: int, seed) -> np.ndarray:
    """Deterministic lattice plus a seeded uniform sample, stacked."""
    parts = []
    if grid_per_dim > 0:
        parts.append(grid_points(space, grid_per_dim))
    if random_count > 0:
        parts.append(random_points(space, random_count, np.random.default_rng(seed)))
    if not parts:
        raise ValueError("sample must contain at least one point")
    return np.concatenate(parts, axis=0)
