"""Joint kappa-variation and the Korenblum kappa-variation.

For a partition a = t_0 < ... < t_n = b of the grid,

    ratio = sum_i |(f, g)({t_{i-1}, t_i})| / sum_i kappa((t_i - t_{i-1}) / (b - a))

and V_kappa(f, g) is the largest ratio.  It is found by Dinkelbach's
iteration: for a parameter lam solve

    max over partitions of sum_i (w_i - lam * kappa_i)

by dynamic programming over breakpoints, then move lam to the ratio of the
maximizing partition, until the parametric optimum vanishes.
"""
from __future__ import annotations

import itertools
from dataclasses import dataclass

import numpy as np

from .errors import DomainError, RefusalError
from .modulus import increment_matrix, nu_profile

MESH_SIZE = 1000
CONCAVITY_TOL = 1e-9
DINKELBACH_TOL = 1e-9
MAX_ITER = 100


@dataclass(frozen=True)
class KappaSpec:
    """A concave modulus kappa: [0, 1] -> [0, 1].

    Families: ``entropy`` tau (1 - log tau); ``power`` tau^alpha (0 < alpha < 1);
    ``logrec`` 1 / (1 - log(tau) / 2); ``table`` piecewise-linear through the
    given nodes.  The defining properties are checked on a uniform mesh at
    construction and a :class:`DomainError` is raised when one fails.
    """

    family: str
    alpha: float | None = None
    tau: tuple = ()
    kappa: tuple = ()

    def __post_init__(self):
        if self.family == "power":
            if self.alpha is None or not 0 < self.alpha < 1:
                raise DomainError("power kappa needs 0 < alpha < 1")
        elif self.family == "table":
            tau = tuple(float(v) for v in self.tau)
            kap = tuple(float(v) for v in self.kappa)
            if len(tau) != len(kap) or len(tau) < 2:
                raise DomainError("table kappa needs matching tau/kappa lists of length >= 2")
            if tau[0] != 0 or tau[-1] != 1 or any(b <= a for a, b in zip(tau, tau[1:])):
                raise DomainError("table tau must increase strictly from 0 to 1")
            object.__setattr__(self, "tau", tau)
            object.__setattr__(self, "kappa", kap)
        elif self.family not in ("entropy", "logrec"):
            raise DomainError(f"unknown kappa family {self.family!r}")
        problems = self.check()
        if problems:
            raise DomainError("invalid kappa: " + "; ".join(problems))

    @classmethod
    def from_dict(cls, data):
        fam = data.get("family")
        if fam == "power":
            return cls("power", alpha=float(data["alpha"]))
        if fam == "table":
            return cls("table", tau=tuple(data["tau"]), kappa=tuple(data["kappa"]))
        return cls(fam)

    def to_dict(self):
        if self.family == "power":
            return {"family": "power", "alpha": self.alpha}
        if self.family == "table":
            return {"family": "table", "tau": list(self.tau), "kappa": list(self.kappa)}
        return {"family": self.family}

    def __call__(self, tau):
        tau = np.asarray(tau, dtype=float)
        if np.any((tau < 0) | (tau > 1)):
            raise DomainError("kappa is defined on [0, 1]")
        pos = tau > 0
        safe = np.where(pos, tau, 1.0)
        if self.family == "entropy":
            out = safe * (1 - np.log(safe))
        elif self.family == "power":
            out = safe ** self.alpha
        elif self.family == "logrec":
            out = 1 / (1 - 0.5 * np.log(safe))
        else:
            return np.interp(tau, self.tau, self.kappa)
        out = np.where(pos, out, 0.0)
        return np.where(tau == 1, 1.0, out)

    def check(self):
        """Properties that fail on the mesh (empty when the modulus is valid)."""
        mesh = np.linspace(0, 1, MESH_SIZE + 1)
        k = self(mesh)
        out = []
        if k[0] != 0 or abs(k[-1] - 1) > 1e-12:
            out.append("kappa(0) = 0 and kappa(1) = 1 required")
        if np.any(np.diff(k) <= 0):
            out.append("kappa must be strictly increasing")
        if np.any(np.diff(k, 2) > CONCAVITY_TOL):
            out.append("kappa must be concave")
        # kappa(tau) / tau must blow up at 0: demand strict decrease of the
        # ratio across the first mesh cells
        ratio = k[1:4] / mesh[1:4]
        if not np.all(np.diff(ratio) < 0):
            out.append("kappa(tau)/tau must increase without bound as tau -> 0")
        return out


def kappa_eval(spec, tau):
    """kappa(tau) for a scalar tau in [0, 1]."""
    return float(spec(float(tau)))


@dataclass
class KappaVarResult:
    value: float
    partition: list
    iterations: int
    residual: float
    converged: bool = True
    lambdas: tuple = ()

    def to_dict(self):
        return {"value": self.value, "partition": self.partition, "iterations": self.iterations,
                "residual": self.residual, "converged": self.converged}


def _length_matrix(grid, spec):
    t = grid.as_float()
    span = float(grid.length)
    if span <= 0:
        raise DomainError("grid must span an interval of positive length")
    tau = np.clip((t[None, :] - t[:, None]) / span, 0, 1)
    k = spec(np.triu(tau, 1))
    return k


def _ratio(w, k, part):
    num = sum(w[a, b] for a, b in zip(part, part[1:]))
    den = sum(k[a, b] for a, b in zip(part, part[1:]))
    return float(num / den)


def _parametric(w, k, lam):
    """Best partition for sum (w - lam * k); ties go to fewer intervals, then lexicographic."""
    m = len(w)
    c = w - lam * k
    best = np.full(m, -np.inf)
    best[0] = 0.0
    paths = [(0,)] + [None] * (m - 1)
    for j in range(1, m):
        vals = best[:j] + c[:j, j]
        top = vals.max()
        tol = 1e-12 * max(1.0, abs(top))
        cands = np.flatnonzero(vals >= top - tol)
        path = min((paths[i] + (j,) for i in cands), key=lambda p: (len(p), p))
        best[j] = top
        paths[j] = path
    return float(best[-1]), list(paths[-1])


def kappa_variation(f, g=None, spec=None, mode=None):
    """V_kappa(f, g) over partitions drawn from grid breakpoints.

    ``g=None`` gives the Korenblum kappa-variation of f.
    """
    if spec is None:
        raise DomainError("a KappaSpec is required")
    w, _ = increment_matrix(f, g, mode)
    m = len(w)
    trivial = [0, m - 1]
    if np.all(w[np.triu_indices(m, 1)] == 0):
        return KappaVarResult(0.0, trivial, 0, 0.0)
    k = _length_matrix(f.grid, spec)
    part = trivial
    lam = _ratio(w, k, part)
    lambdas = [lam]
    for it in range(1, MAX_ITER + 1):
        value, cand = _parametric(w, k, lam)
        if value <= DINKELBACH_TOL:
            return KappaVarResult(lam, part, it, value, True, tuple(lambdas))
        part = cand
        lam = _ratio(w, k, part)
        lambdas.append(lam)
    value, _ = _parametric(w, k, lam)
    return KappaVarResult(lam, part, MAX_ITER, value, False, tuple(lambdas))


MAX_BRUTE_GRID = 12


def kappa_variation_bruteforce(f, g=None, spec=None, mode=None):
    """Exhaustive maximum ratio over all 2^(m-2) partitions; a test oracle."""
    m = len(f)
    if m > MAX_BRUTE_GRID:
        raise RefusalError(f"brute force limited to m <= {MAX_BRUTE_GRID}", m=m)
    w, _ = increment_matrix(f, g, mode)
    t = [float(v) for v in f.grid.points]
    span = t[-1] - t[0]
    best = 0.0
    for r in range(m - 1):
        for inner in itertools.combinations(range(1, m - 1), r):
            part = (0, *inner, m - 1)
            num = sum(w[a, b] for a, b in zip(part, part[1:]))
            den = sum(kappa_eval(spec, (t[b] - t[a]) / span) for a, b in zip(part, part[1:]))
            best = max(best, num / den)
    return best


def kappa_nu_bound_check(f, g=None, spec=None, n_max=10, mode=None):
    """Check nu_n(f, g) / n <= (2 + 1/n) kappa(1/(2n+1)) V_kappa(f, g) for n = 1..n_max.

    Returns a dict with both sides and the margins (bound minus observed).
    """
    vk = kappa_variation(f, g, spec, mode).value
    prof = nu_profile(f, g, n_max, mode)
    n = np.arange(1, n_max + 1)
    lhs = prof.values / n
    rhs = (2 + 1 / n) * spec(1 / (2 * n + 1)) * vk
    margin = rhs - lhs
    return {"kappa_variation": vk, "lhs": lhs.tolist(), "rhs": rhs.tolist(),
            "margin": margin.tolist(), "holds": bool(np.all(margin >= -1e-12))}
