"""Random instance builders shared by the test modules."""
from fractions import Fraction

import numpy as np
from scipy.sparse.csgraph import shortest_path

from modvar import MetricSpace, SampledFunction
from modvar.functions import Grid

TOL = 1e-12


def random_finite_space(rng, size):
    """Shortest-path closure of random positive weights: always a metric."""
    w = rng.uniform(0.1, 2.0, size=(size, size))
    w = np.triu(w, 1)
    w = w + w.T
    d = shortest_path(w, method="FW", directed=False)
    return MetricSpace.finite([f"p{i}" for i in range(size)], d)


def cyclic_space(k, scale=1.0):
    """Z_k with the circular distance and its addition table (translation invariant)."""
    idx = np.arange(k)
    diff = np.abs(idx[:, None] - idx[None, :])
    d = scale * np.minimum(diff, k - diff)
    add = (idx[:, None] + idx[None, :]) % k
    return MetricSpace.finite([str(i) for i in range(k)], d, add.tolist())


def random_grid(rng, m, classes=False):
    pts = sorted(set(int(v) for v in rng.choice(1000, size=m, replace=False)))
    tags = None
    if classes:
        tags = ["irrational" if c else "rational" for c in rng.integers(0, 2, size=m)]
    return Grid.from_points([Fraction(p, 1000) for p in pts], tags)


def random_values(rng, space, m):
    if space.is_finite:
        return rng.integers(0, space.size, size=m)
    return rng.normal(size=(m, space.dim))


def random_function(rng, grid, space):
    return SampledFunction(grid, space, random_values(rng, space, len(grid)))


def random_space(rng, kinds=("finite", "real")):
    kind = kinds[rng.integers(len(kinds))]
    if kind == "finite":
        return random_finite_space(rng, int(rng.integers(2, 6)))
    if kind == "cyclic":
        return cyclic_space(int(rng.integers(2, 7)))
    if kind == "plane":
        return MetricSpace.euclidean(2)
    return MetricSpace.real()


def perturb(rng, f, size):
    """A function uniformly within ``size`` of f (Euclidean spaces)."""
    noise = rng.uniform(-1, 1, size=f.values.shape)
    norms = np.linalg.norm(noise, axis=1, keepdims=True)
    noise = noise / np.maximum(norms, 1.0) * size
    return SampledFunction(f.grid, f.space, f.values + noise)
