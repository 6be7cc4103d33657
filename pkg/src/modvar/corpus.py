"""Generators for the worked examples: Dirichlet-type functions, factorial steps,
converging Dirichlet sequences, and two small real-valued functions.

Irrational abscissas are represented by rationals tagged "irrational".  The
examples only ever look at the tag, so stand-in coordinates are built from a
convergent of sqrt(2) - 1 to keep them visibly off the rational lattice.
"""
from __future__ import annotations

import math
from dataclasses import dataclass, field
from fractions import Fraction

import numpy as np

from .errors import DomainError, RefusalError
from .functions import IRRATIONAL, RATIONAL, FunctionSequence, Grid, SampledFunction, family_to_dict
from .metric import MetricSpace, distance

# convergent 408/985 of sqrt(2) - 1
IRRATIONAL_OFFSET = Fraction(408, 985)
MAX_FACTORIAL_J = 8


# spaces and grids ----------------------------------------------------------
def two_point_space(d=1.0):
    """M = {x, y} with d(x, y) = d: no midpoint exists."""
    return MetricSpace.finite(["x", "y"], [[0, d], [d, 0]])


def midpoint_space(d=1.0):
    """M = {x, m, y} with m a metric midpoint of x and y."""
    h = d / 2
    return MetricSpace.finite(["x", "m", "y"], [[0, h, d], [h, 0, h], [d, h, 0]])


def alternating_grid(m, a=0, b=1):
    """m points on [a, b], rational at even and irrational-tagged at odd positions."""
    if m < 2:
        raise DomainError("need at least 2 points")
    a, b = Fraction(a), Fraction(b)
    step = (b - a) / (m - 1)
    pts, cls = [], []
    for k in range(m):
        if k % 2:
            pts.append(a + (k - 1 + IRRATIONAL_OFFSET) * step)
            cls.append(IRRATIONAL)
        else:
            pts.append(a + k * step)
            cls.append(RATIONAL)
    return Grid(tuple(pts), tuple(cls))


def factorial_grid(j, refine=2):
    """The rational grid k / (refine * j!) on [0, 1]; it resolves every step of 1/j!."""
    _factorial_guard(j)
    q = refine * math.factorial(j)
    return Grid(tuple(Fraction(k, q) for k in range(q + 1)), ())


def sharpness_grid(j, pairs):
    """{0} plus 2*pairs alternating points inside (0, 1/j!) plus {1}.

    Fine points are i / (j! (2 pairs + 1)), i = 1..2 pairs, rational for odd i
    and irrational-tagged for even i.
    """
    _factorial_guard(j)
    q = math.factorial(j) * (2 * pairs + 1)
    pts, cls = [Fraction(0)], [RATIONAL]
    for i in range(1, 2 * pairs + 1):
        pts.append(Fraction(i, q))
        cls.append(RATIONAL if i % 2 else IRRATIONAL)
    pts.append(Fraction(1))
    cls.append(RATIONAL)
    return Grid(tuple(pts), tuple(cls))


def _factorial_guard(j):
    if not 1 <= j <= MAX_FACTORIAL_J:
        raise RefusalError(f"factorial examples are limited to 1 <= j <= {MAX_FACTORIAL_J}", j=j)


# generators ----------------------------------------------------------------
def _dirichlet_values(space, x, y, grid):
    x, y = space.point(x), space.point(y)
    irr = grid.is_irrational()
    if space.is_finite:
        return np.where(irr, y, x)
    return np.where(irr[:, None], y[None, :], x[None, :])


def gen_dirichlet(space, x, y, grid):
    """D_{x,y}: x at rational-tagged points, y at irrational-tagged points."""
    if distance(space, x, y) == 0:
        raise DomainError("Dirichlet-type function needs x != y")
    return SampledFunction(grid, space, _dirichlet_values(space, x, y, grid))


def gen_factorial_step(space, x, y, j, grid):
    """f_j(t) = x if j! t is an integer, else y (exact rational test).

    Irrational-tagged points always take y, as j! t is never an integer there.
    """
    _factorial_guard(j)
    jf = math.factorial(j)
    xp, yp = space.point(x), space.point(y)
    vals = [xp if c == RATIONAL and (jf * t).denominator == 1 else yp
            for t, c in zip(grid.points, grid.classes)]
    return SampledFunction(grid, space, vals)


@dataclass
class ConvergingDirichlet:
    f: FunctionSequence
    g: FunctionSequence
    eps: np.ndarray
    limit: SampledFunction


def gen_converging_dirichlet(space, x_seq, y_seq, grid, x, y):
    """f_j = D_{x_j, y_j} with the companion g_j = D_{x, y} for every j.

    ``eps[j] = max(d(x_j, x), d(y_j, y))`` bounds the uniform distance of
    f_j to the limit.  The limit points may coincide (x = y), in which case
    D_{x,y} is constant.
    """
    x_seq, y_seq = list(x_seq), list(y_seq)
    if len(x_seq) != len(y_seq):
        raise DomainError("x and y sequences must have equal length")
    fs = [gen_dirichlet(space, xj, yj, grid) for xj, yj in zip(x_seq, y_seq)]
    limit = SampledFunction(grid, space, _dirichlet_values(space, x, y, grid))
    eps = np.array([max(distance(space, xj, x), distance(space, yj, y))
                    for xj, yj in zip(x_seq, y_seq)])
    return ConvergingDirichlet(FunctionSequence(fs), FunctionSequence([limit] * len(fs)), eps, limit)


def real_converging_dirichlet(J, x=0.0, y=1.0, scale=1.0, grid=None, m=21, settle=None):
    """Real-line instance: x_j = x + r_j, y_j = y - r_j with r_j = scale/(j+3), j = 0..J-1.

    With ``settle`` given, r_j = 0 from index ``settle`` on, so the sequence
    reaches its limit after finitely many steps.
    """
    grid = alternating_grid(m) if grid is None else grid
    r = scale / (np.arange(J) + 3.0)
    if settle is not None:
        r[int(settle):] = 0.0
    return gen_converging_dirichlet(MetricSpace.real(), x + r, y - r, grid, x, y)


def single_jump():
    """f = [0, 1, 1] on {0, 1/2, 1}, real valued."""
    grid = Grid.from_points([0, Fraction(1, 2), 1])
    return SampledFunction(grid, MetricSpace.real(), [0.0, 1.0, 1.0])


def alternating_real():
    """f = [0, 1, 0, 1] on {0, 1/3, 2/3, 1}, real valued."""
    grid = Grid.from_points([0, Fraction(1, 3), Fraction(2, 3), 1])
    return SampledFunction(grid, MetricSpace.real(), [0.0, 1.0, 0.0, 1.0])


# descriptors ---------------------------------------------------------------
EXAMPLE_IDS = ("dirichlet", "factorial-step", "converging-dirichlet", "single-jump", "alternating-real")


@dataclass
class ExampleDescriptor:
    """An example id plus the parameters that rebuild it deterministically.

    Parameters: ``dirichlet`` takes m (grid size), d (distance) and midpoint
    (add a midpoint to M); ``factorial-step`` takes j, refine, d;
    ``converging-dirichlet`` takes J, m, x, y, scale, settle.
    """

    id: str
    params: dict = field(default_factory=dict)

    def __post_init__(self):
        if self.id not in EXAMPLE_IDS:
            raise DomainError(f"unknown example {self.id!r}; choose from {', '.join(EXAMPLE_IDS)}")

    def build(self):
        """Function-family document for this example."""
        p = self.params
        if self.id == "dirichlet":
            d = float(p.get("d", 1.0))
            space = midpoint_space(d) if _truthy(p.get("midpoint", False)) else two_point_space(d)
            grid = alternating_grid(int(p.get("m", 21)))
            return family_to_dict(space, grid, {"f": gen_dirichlet(space, "x", "y", grid)})
        if self.id == "factorial-step":
            space = two_point_space(float(p.get("d", 1.0)))
            j = int(p.get("j", 3))
            grid = factorial_grid(j, int(p.get("refine", 2)))
            return family_to_dict(space, grid, {"f": gen_factorial_step(space, "x", "y", j, grid)})
        if self.id == "converging-dirichlet":
            inst = real_converging_dirichlet(int(p.get("J", 20)), float(p.get("x", 0.0)),
                                             float(p.get("y", 1.0)), float(p.get("scale", 1.0)),
                                             m=int(p.get("m", 21)),
                                             settle=int(p["settle"]) if "settle" in p else None)
            funcs = {f"f_{j}": f for j, f in enumerate(inst.f)}
            funcs["g"] = inst.limit
            return family_to_dict(inst.limit.space, inst.limit.grid, funcs)
        f = single_jump() if self.id == "single-jump" else alternating_real()
        return family_to_dict(f.space, f.grid, {"f": f})


def _truthy(v):
    return v if isinstance(v, bool) else str(v).lower() in ("1", "true", "yes")
