"""Sampled domains and metric-space valued functions on them."""
from __future__ import annotations

from dataclasses import dataclass
from fractions import Fraction

import numpy as np

from .errors import DomainError
from .metric import MetricSpace

RATIONAL = "rational"
IRRATIONAL = "irrational"


def _fraction(t):
    if isinstance(t, Fraction):
        return t
    if isinstance(t, float):
        # exact binary value; callers wanting decimals should pass strings
        return Fraction(t)
    return Fraction(t)


@dataclass(frozen=True, eq=False)
class Grid:
    """Strictly increasing sample abscissas stored as exact rationals.

    Every point carries an arithmetic-class tag ("rational" or
    "irrational").  Tags are metadata supplied by the caller; an
    "irrational" point is a rational stand-in for an irrational abscissa.
    """

    points: tuple
    classes: tuple

    def __post_init__(self):
        pts = tuple(_fraction(t) for t in self.points)
        if len(pts) < 2:
            raise DomainError("a grid needs at least 2 points")
        if any(b <= a for a, b in zip(pts, pts[1:])):
            raise DomainError("grid abscissas must be strictly increasing")
        classes = tuple(self.classes) if self.classes else (RATIONAL,) * len(pts)
        if len(classes) != len(pts):
            raise DomainError("one class tag per grid point required")
        bad = set(classes) - {RATIONAL, IRRATIONAL}
        if bad:
            raise DomainError(f"unknown class tags {sorted(bad)}")
        object.__setattr__(self, "points", pts)
        object.__setattr__(self, "classes", classes)

    @classmethod
    def from_points(cls, points, classes=None):
        return cls(tuple(points), tuple(classes) if classes else ())

    def __len__(self):
        return len(self.points)

    def __eq__(self, other):
        return isinstance(other, Grid) and self.points == other.points and self.classes == other.classes

    __hash__ = object.__hash__

    @property
    def a(self):
        return self.points[0]

    @property
    def b(self):
        return self.points[-1]

    @property
    def length(self):
        return self.b - self.a

    def as_float(self):
        return np.array([float(t) for t in self.points])

    def is_irrational(self):
        return np.array([c == IRRATIONAL for c in self.classes])

    def to_list(self):
        return [{"t": f"{t.numerator}/{t.denominator}", "class": c}
                for t, c in zip(self.points, self.classes)]

    @classmethod
    def from_list(cls, items):
        return cls(tuple(Fraction(it["t"]) for it in items),
                   tuple(it.get("class", RATIONAL) for it in items))


class SampledFunction:
    """A map from grid indices to points of a metric space.

    ``values`` is an int array of point indices for finite spaces and an
    ``(m, N)`` float array for Euclidean spaces.
    """

    def __init__(self, grid, space, values):
        self.grid = grid
        self.space = space
        vals = space.points(values)
        if len(vals) != len(grid):
            raise DomainError(f"{len(vals)} values for a grid of {len(grid)} points")
        vals.setflags(write=False)
        self.values = vals

    def __len__(self):
        return len(self.grid)

    def __repr__(self):
        return f"SampledFunction(m={len(self)}, space={self.space.kind})"

    @classmethod
    def constant(cls, grid, space, value):
        p = space.point(value)
        if space.is_finite:
            return cls(grid, space, [p] * len(grid))
        return cls(grid, space, np.tile(p, (len(grid), 1)))

    def compatible(self, other):
        return self.grid == other.grid and self.space.same_as(other.space)

    def restrict(self, stop):
        """Restriction to the first ``stop`` grid points."""
        grid = Grid(self.grid.points[:stop], self.grid.classes[:stop])
        return SampledFunction(grid, self.space, self.values[:stop])

    def refs(self):
        """JSON value references: point labels or coordinate lists."""
        if self.space.is_finite:
            return [self.space.labels[i] for i in self.values]
        if self.space.dim == 1:
            return [float(v) for v in self.values[:, 0]]
        return self.values.tolist()


def check_compatible(*funcs):
    first = funcs[0]
    for h in funcs[1:]:
        if not first.compatible(h):
            raise DomainError("functions must share the same grid and metric space")


class FunctionSequence:
    """A finite family f_0, ..., f_{J-1} of functions on one grid and space."""

    def __init__(self, functions):
        functions = list(functions)
        if len(functions) < 2:
            raise DomainError("a function sequence needs at least 2 members")
        check_compatible(*functions)
        self.functions = functions

    @classmethod
    def from_values(cls, grid, space, rows):
        return cls(SampledFunction(grid, space, r) for r in rows)

    @property
    def grid(self):
        return self.functions[0].grid

    @property
    def space(self):
        return self.functions[0].space

    def __len__(self):
        return len(self.functions)

    def __getitem__(self, j):
        return self.functions[j]

    def __iter__(self):
        return iter(self.functions)

    def stack(self):
        """All values as one array of shape (J, m) or (J, m, N)."""
        return np.stack([f.values for f in self.functions])


# JSON function families ----------------------------------------------------
def family_to_dict(space, grid, functions):
    return {
        "space": space.to_dict(),
        "grid": grid.to_list(),
        "functions": {name: f.refs() for name, f in functions.items()},
    }


def family_from_dict(data):
    """Parse a function-family document into ``(space, grid, {name: SampledFunction})``."""
    try:
        space = MetricSpace.from_dict(data["space"])
        grid = Grid.from_list(data["grid"])
        funcs = {name: SampledFunction(grid, space, vals) for name, vals in data["functions"].items()}
    except KeyError as exc:
        raise DomainError(f"function family is missing key {exc}") from None
    return space, grid, funcs
