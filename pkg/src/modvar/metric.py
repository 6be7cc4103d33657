"""Metric-space backends and joint increments.

Three backends are supported:

* ``finite``: labelled points with an explicit distance matrix, optionally
  carrying an addition table that turns it into a metric semigroup;
* ``euclidean``: R^N with the Euclidean norm;
* ``real``: the real line (Euclidean with N = 1).

Points of a finite space are integer indices; Euclidean points are
coordinate vectors.

The joint increment of two functions f, g on a pair {s, t} is

    sup_z | d(f(s), z) + d(g(t), z) - d(f(t), z) - d(g(s), z) |

(``GeneralSup``).  Two alternative closed forms are available:
``d(f(s) + g(t), f(t) + g(s))`` on metric semigroups (``Semigroup``) and
``|| (f - g)(s) - (f - g)(t) ||`` on normed spaces (``Norm``).
"""
from __future__ import annotations

import itertools
from dataclasses import dataclass, field

import numpy as np
from scipy.spatial.distance import cdist

from .errors import DomainError

FINITE = "finite"
EUCLIDEAN = "euclidean"
REAL = "real"

# absolute tolerance used when checking metric axioms
AXIOM_TOL = 1e-12


@dataclass(frozen=True, eq=False)
class MetricSpace:
    kind: str
    labels: tuple = ()
    dist: np.ndarray | None = None
    add: np.ndarray | None = None
    dim: int = 1

    def __post_init__(self):
        if self.kind == FINITE:
            d = np.asarray(self.dist, dtype=float)
            if d.ndim != 2 or d.shape[0] != d.shape[1] or d.shape[0] == 0:
                raise DomainError("finite space needs a non-empty square distance matrix")
            if len(self.labels) != d.shape[0]:
                raise DomainError("one label per point required")
            if len(set(self.labels)) != len(self.labels):
                raise DomainError("point labels must be unique")
            d.setflags(write=False)
            object.__setattr__(self, "dist", d)
            if self.add is not None:
                a = np.asarray(self.add, dtype=int)
                if a.shape != d.shape or a.min() < 0 or a.max() >= d.shape[0]:
                    raise DomainError("addition table must be an n x n table of point indices")
                a.setflags(write=False)
                object.__setattr__(self, "add", a)
            object.__setattr__(self, "dim", 0)
        elif self.kind in (EUCLIDEAN, REAL):
            if self.kind == REAL:
                object.__setattr__(self, "dim", 1)
            if int(self.dim) < 1:
                raise DomainError("Euclidean dimension must be >= 1")
            object.__setattr__(self, "dim", int(self.dim))
        else:
            raise DomainError(f"unknown space kind {self.kind!r}")

    # constructors -----------------------------------------------------
    @classmethod
    def finite(cls, labels, dist, add=None):
        labels = tuple(str(p) for p in labels)
        if add is not None:
            index = {p: i for i, p in enumerate(labels)}
            add = [[index[v] if isinstance(v, str) else int(v) for v in row] for row in add]
        return cls(FINITE, labels=labels, dist=dist, add=add)

    @classmethod
    def euclidean(cls, dim):
        return cls(EUCLIDEAN, dim=dim)

    @classmethod
    def real(cls):
        return cls(REAL)

    # properties -------------------------------------------------------
    @property
    def is_finite(self):
        return self.kind == FINITE

    @property
    def is_real(self):
        """True for one-dimensional Euclidean spaces (the real line)."""
        return self.kind in (EUCLIDEAN, REAL) and self.dim == 1

    @property
    def size(self):
        return len(self.labels) if self.is_finite else None

    def index(self, label):
        try:
            return self.labels.index(str(label))
        except ValueError:
            raise DomainError(f"unknown point label {label!r}") from None

    def point(self, value):
        """Normalize ``value`` into a point of this space.

        Finite spaces accept an index or a label; Euclidean spaces accept a
        scalar (when N = 1) or a coordinate sequence of length N.
        """
        if self.is_finite:
            if isinstance(value, str):
                return self.index(value)
            if isinstance(value, (int, np.integer)) and 0 <= value < len(self.labels):
                return int(value)
            raise DomainError(f"{value!r} is not a point of this finite space")
        x = np.atleast_1d(np.asarray(value, dtype=float))
        if x.shape != (self.dim,):
            raise DomainError(f"expected a point with {self.dim} coordinates, got shape {x.shape}")
        return x

    def points(self, values):
        """Vectorized :meth:`point`; returns an int array (finite) or an (m, N) array."""
        if self.is_finite:
            return np.array([self.point(v) for v in values], dtype=int)
        arr = np.asarray(values, dtype=float)
        if arr.ndim == 1 and self.dim == 1:
            arr = arr[:, None]
        if arr.ndim != 2 or arr.shape[1] != self.dim:
            raise DomainError(f"expected values of shape (m, {self.dim}), got {arr.shape}")
        return arr

    def same_as(self, other):
        if self is other:
            return True
        if self.kind != other.kind or self.dim != other.dim:
            return False
        if self.is_finite:
            return (
                self.labels == other.labels
                and np.array_equal(self.dist, other.dist)
                and ((self.add is None and other.add is None)
                     or (self.add is not None and other.add is not None
                         and np.array_equal(self.add, other.add)))
            )
        return True

    def pairwise(self, a, b):
        """Distance matrix between two point arrays (as returned by :meth:`points`)."""
        if self.is_finite:
            return self.dist[np.ix_(np.asarray(a, dtype=int), np.asarray(b, dtype=int))]
        return cdist(np.asarray(a, dtype=float), np.asarray(b, dtype=float))

    def to_dict(self):
        if self.is_finite:
            out = {"kind": FINITE, "points": list(self.labels), "dist": self.dist.tolist()}
            if self.add is not None:
                out["add"] = [[self.labels[v] for v in row] for row in self.add]
            return out
        if self.kind == REAL:
            return {"kind": REAL}
        return {"kind": EUCLIDEAN, "dim": self.dim}

    @classmethod
    def from_dict(cls, data):
        kind = data.get("kind")
        if kind == FINITE:
            return cls.finite(data["points"], data["dist"], data.get("add"))
        if kind == EUCLIDEAN:
            return cls.euclidean(int(data["dim"]))
        if kind == REAL:
            return cls.real()
        raise DomainError(f"unknown space kind {kind!r}")


def distance(space, x, y):
    x, y = space.point(x), space.point(y)
    if space.is_finite:
        return float(space.dist[x, y])
    return float(np.linalg.norm(x - y))


def validate_space(space):
    """Return the list of metric-axiom violations (empty when valid).

    Each violation is a tuple ``(axiom, indices)``.  Euclidean spaces are
    always valid.  When a finite space carries an addition table it is
    checked for commutativity, associativity and translation invariance
    ``d(x+z, y+z) = d(x, y)``.
    """
    if not space.is_finite:
        return []
    d = space.dist
    n = d.shape[0]
    out = []
    if not np.all(np.isfinite(d)):
        out += [("finite", (int(i), int(j))) for i, j in zip(*np.nonzero(~np.isfinite(d)))]
    for i in range(n):
        if abs(d[i, i]) > AXIOM_TOL:
            out.append(("identity", (i, i)))
    for i, j in itertools.combinations(range(n), 2):
        if abs(d[i, j] - d[j, i]) > AXIOM_TOL:
            out.append(("symmetry", (i, j)))
        if d[i, j] <= AXIOM_TOL or d[j, i] <= AXIOM_TOL:
            out.append(("positivity", (i, j)))
        if d[i, j] < -AXIOM_TOL or d[j, i] < -AXIOM_TOL:
            out.append(("nonnegativity", (i, j)))
    for i, j, k in itertools.product(range(n), repeat=3):
        if len({i, j, k}) == 3 and i < k and (d[i, k] > d[i, j] + d[j, k] + AXIOM_TOL
                                              or d[k, i] > d[k, j] + d[j, i] + AXIOM_TOL):
            out.append(("triangle", (i, j, k)))
    if space.add is not None:
        out += _semigroup_violations(space)
    return out


def _semigroup_violations(space):
    d, a = space.dist, space.add
    n = d.shape[0]
    out = []
    for x, y in itertools.combinations(range(n), 2):
        if a[x, y] != a[y, x]:
            out.append(("commutativity", (x, y)))
    for x, y, z in itertools.product(range(n), repeat=3):
        if a[a[x, y], z] != a[x, a[y, z]]:
            out.append(("associativity", (x, y, z)))
        if abs(d[a[x, z], a[y, z]] - d[x, y]) > AXIOM_TOL:
            out.append(("translation", (x, y, z)))
    return out


def is_valid(space):
    return not validate_space(space)


# increment modes -----------------------------------------------------------
GENERAL_SUP = "sup"
SEMIGROUP = "semigroup"
NORM = "norm"

_MODE_ALIASES = {
    "sup": GENERAL_SUP, "general": GENERAL_SUP, "generalsup": GENERAL_SUP, "general_sup": GENERAL_SUP,
    "semigroup": SEMIGROUP, "norm": NORM,
}


@dataclass(frozen=True)
class IncrementMode:
    kind: str = GENERAL_SUP
    # extra witness points z for GeneralSup on Euclidean spaces
    witnesses: tuple = field(default=())

    @classmethod
    def parse(cls, mode, space):
        """Coerce ``None``, a string or an IncrementMode into a mode valid for ``space``."""
        if mode is None:
            mode = cls(GENERAL_SUP) if space.is_finite else cls(NORM)
        elif isinstance(mode, str):
            try:
                mode = cls(_MODE_ALIASES[mode.lower().replace("-", "")])
            except KeyError:
                raise DomainError(f"unknown increment mode {mode!r}") from None
        mode.check(space)
        return mode

    def check(self, space):
        if self.kind == SEMIGROUP:
            if not space.is_finite or space.add is None:
                raise DomainError("semigroup mode needs a finite space with an addition table")
            bad = [v for v in _semigroup_violations(space) if v[0] == "translation"]
            if bad:
                raise DomainError(f"addition table is not translation invariant at {bad[0][1]}")
        elif self.kind == NORM:
            if space.is_finite:
                raise DomainError("norm mode is only defined on Euclidean spaces")
        elif self.kind != GENERAL_SUP:
            raise DomainError(f"unknown increment mode {self.kind!r}")
        if self.witnesses and space.is_finite:
            raise DomainError("extra witnesses only apply to Euclidean spaces")

    def is_exact(self, space):
        """Whether GeneralSup evaluation is the true supremum on ``space``.

        On the real line the objective is piecewise linear in z with kinks at
        the four sample values and constant beyond them, so the four values
        already attain the supremum.
        """
        if self.kind != GENERAL_SUP:
            return True
        return space.is_finite or space.is_real

    def witness_array(self, space):
        if not self.witnesses:
            return np.empty((0, space.dim))
        return space.points(self.witnesses)


def increment_objective(space, fs, ft, gs, gt, z):
    """The quantity under the supremum in the joint increment, at witness ``z``."""
    return (distance(space, fs, z) + distance(space, gt, z)
            - distance(space, ft, z) - distance(space, gs, z))


def joint_increment(mode, space, fs, ft, gs, gt):
    """Joint increment of a pair of functions on a two-point set.

    ``fs, ft`` are f(s), f(t) and ``gs, gt`` are g(s), g(t).  Returns
    ``(value, exact)``; ``exact`` is False only for GeneralSup on Euclidean
    spaces of dimension >= 2, where the value is the maximum over the finite
    witness set {fs, ft, gs, gt} plus any extra witnesses carried by the mode
    (a lower bound of the true supremum).
    """
    mode = IncrementMode.parse(mode, space)
    fs, ft, gs, gt = (space.point(v) for v in (fs, ft, gs, gt))
    if mode.kind == NORM:
        return float(np.linalg.norm((fs - gs) - (ft - gt))), True
    if mode.kind == SEMIGROUP:
        a = space.add
        return float(space.dist[a[fs, gt], a[ft, gs]]), True
    if space.is_finite:
        witnesses = range(space.size)
    else:
        witnesses = [fs, ft, gs, gt, *mode.witness_array(space)]
    best = max(abs(increment_objective(space, fs, ft, gs, gt, z)) for z in witnesses)
    return float(best), mode.is_exact(space)


def midpoint_witness(space, x, y):
    """A point z0 with max{d(x, z0), d(y, z0)} = d(x, y) / 2, or None.

    Finite spaces are searched exhaustively (first hit in index order);
    Euclidean spaces return the coordinate midpoint.
    """
    x, y = space.point(x), space.point(y)
    dxy = distance(space, x, y)
    if dxy == 0:
        raise DomainError("midpoint witness needs two distinct points")
    if not space.is_finite:
        return (x + y) / 2
    half = dxy / 2
    radius = np.maximum(space.dist[x], space.dist[y])
    hits = np.nonzero(np.abs(radius - half) <= AXIOM_TOL)[0]
    return int(hits[0]) if hits.size else None
