"""Regularity classification and epsilon-variation.

Two functions are equivalent (f ~ g) when nu_n(f, g) = o(n).  On a finite
grid every profile eventually saturates, so the classification here only
describes the growth shape up to ``n_max`` with an explicit threshold.

The epsilon-variation V_eps(f) is the least Jordan variation of a function
staying uniformly within eps of f.  It is solved exactly on the real line by
a taut-string walk through the tube [f - eps, f + eps], and on finite metric
spaces by a shortest-path recursion over the admissible points.
"""
from __future__ import annotations

import csv
import io
from dataclasses import dataclass

import numpy as np

from .errors import DomainError, RefusalError
from .functions import SampledFunction
from .modulus import ModulusProfile, jordan_variation, nu_profile

EQUIVALENT = "equivalent"
NOT_EQUIVALENT = "not-equivalent"
INCONCLUSIVE = "inconclusive"

DEFAULT_THETA = 1e-3


@dataclass
class RegularityReport:
    profile: ModulusProfile
    normalized: np.ndarray
    terminal_slope: float
    verdict: str
    theta: float

    def to_dict(self):
        return {
            "verdict": self.verdict,
            "theta": self.theta,
            "terminal_slope": self.terminal_slope,
            "normalized": [float(v) for v in self.normalized],
            "nu": [float(v) for v in self.profile.values],
            "mode": self.profile.mode,
        }

    def to_csv(self):
        buf = io.StringIO()
        w = csv.writer(buf, lineterminator="\n")
        w.writerow(["n", "nu", "nu_over_n", "normalized", "verdict"])
        per_n = self.profile.normalized()
        for n in range(1, self.profile.n_max + 1):
            w.writerow([n, f"{self.profile.values[n - 1]:.17g}", f"{per_n[n - 1]:.17g}",
                        f"{self.normalized[n - 1]:.17g}", self.verdict])
        return buf.getvalue()


def classify_growth(values, theta=DEFAULT_THETA):
    """Classify a nondecreasing sequence v_1..v_N by how close it is to linear growth.

    Returns ``(normalized, terminal_slope, verdict)`` where ``normalized`` is
    v_n / (n v_1) (or v_n / n when v_1 = 0).  The verdict is "equivalent"
    when v_N / N <= theta * v_1, "not-equivalent" when the normalized profile
    stays >= 1 - theta throughout, and "inconclusive" otherwise.
    """
    values = np.asarray(values, dtype=float)
    n = np.arange(1, len(values) + 1)
    first = values[0]
    slope = float(values[-1] / len(values))
    if first <= 0:
        return values / n, slope, EQUIVALENT
    normalized = values / (n * first)
    if slope <= theta * first:
        verdict = EQUIVALENT
    elif np.all(normalized >= 1 - theta):
        verdict = NOT_EQUIVALENT
    else:
        verdict = INCONCLUSIVE
    return normalized, slope, verdict


def regularity_profile(f, g=None, n_max=None, mode=None, theta=DEFAULT_THETA):
    """Evidence for or against f ~ g from the profile nu_1..nu_{n_max}.

    ``g=None`` tests ordinary regulatedness (equivalence with a constant).
    """
    if not theta > 0:
        raise DomainError("theta must be positive")
    profile = nu_profile(f, g, n_max, mode)
    normalized, slope, verdict = classify_growth(profile.values, theta)
    return RegularityReport(profile, normalized, slope, verdict, theta)


# epsilon-variation --------------------------------------------------------
@dataclass
class EpsVarResult:
    eps: float
    value: float
    witness: SampledFunction
    solver: str

    def to_dict(self):
        return {"eps": self.eps, "value": self.value, "solver": self.solver,
                "witness": self.witness.refs()}


def _check_eps(eps):
    eps = float(eps)
    if not eps > 0:
        raise DomainError(f"eps must be positive, got {eps}")
    return eps


def taut_string(lower, upper):
    """Least-variation sequence g with lower <= g <= upper.

    Returns ``(variation, g)``.  The walk keeps the interval of values that
    are reachable at minimal cost; when the next tube slice misses it, the
    path is forced to the nearest slice endpoint and pays the gap.
    """
    lower = np.asarray(lower, dtype=float)
    upper = np.asarray(upper, dtype=float)
    if np.any(lower > upper):
        raise DomainError("empty tube slice")
    m = len(lower)
    lo = np.empty(m)
    hi = np.empty(m)
    lo[0], hi[0] = lower[0], upper[0]
    cost = 0.0
    for i in range(1, m):
        if upper[i] < lo[i - 1]:
            cost += lo[i - 1] - upper[i]
            lo[i] = hi[i] = upper[i]
        elif lower[i] > hi[i - 1]:
            cost += lower[i] - hi[i - 1]
            lo[i] = hi[i] = lower[i]
        else:
            lo[i] = max(lo[i - 1], lower[i])
            hi[i] = min(hi[i - 1], upper[i])
    g = np.empty(m)
    g[-1] = (lo[-1] + hi[-1]) / 2
    for i in range(m - 2, -1, -1):
        g[i] = min(max(g[i + 1], lo[i]), hi[i])
    return cost, g


def epsilon_variation_real(f, eps):
    """Exact V_eps(f) for a real-valued sampled function (taut string)."""
    eps = _check_eps(eps)
    if not f.space.is_real:
        raise DomainError("epsilon_variation_real needs a real-line space")
    y = f.values[:, 0]
    _, g = taut_string(y - eps, y + eps)
    witness = SampledFunction(f.grid, f.space, g[:, None])
    # report the variation of the witness itself so value and witness agree
    return EpsVarResult(eps, jordan_variation(witness), witness, "taut-string")


def epsilon_variation_finite(f, eps):
    """Exact V_eps(f) on a finite space by a shortest path over admissible points."""
    eps = _check_eps(eps)
    space = f.space
    if not space.is_finite:
        raise DomainError("epsilon_variation_finite needs a finite space")
    d = space.dist
    allowed = d[f.values] <= eps + 1e-12  # (m, |M|); f(t_i) itself is always allowed
    m = len(f)
    cost = np.where(allowed[0], 0.0, np.inf)
    back = np.zeros((m, d.shape[0]), dtype=int)
    for i in range(1, m):
        total = cost[:, None] + d
        back[i] = np.argmin(total, axis=0)
        cost = np.where(allowed[i], total[back[i], np.arange(d.shape[0])], np.inf)
    path = np.empty(m, dtype=int)
    path[-1] = int(np.argmin(cost))
    for i in range(m - 1, 0, -1):
        path[i - 1] = back[i, path[i]]
    witness = SampledFunction(f.grid, space, path)
    return EpsVarResult(eps, float(cost[path[-1]]), witness, "value-dp")


def epsilon_variation(f, eps):
    if f.space.is_finite:
        return epsilon_variation_finite(f, eps)
    if f.space.is_real:
        return epsilon_variation_real(f, eps)
    raise RefusalError("epsilon-variation is only supported on finite spaces and the real line",
                       dim=f.space.dim)


def evar_profile(f, eps_list):
    """V_eps(f) for each eps of a positive increasing list."""
    eps_list = [_check_eps(e) for e in eps_list]
    if any(b < a for a, b in zip(eps_list, eps_list[1:])):
        raise DomainError("eps list must be sorted increasingly")
    return [epsilon_variation(f, e) for e in eps_list]


def evar_csv(results):
    buf = io.StringIO()
    w = csv.writer(buf, lineterminator="\n")
    w.writerow(["eps", "value", "solver"])
    for r in results:
        w.writerow([f"{r.eps:.17g}", f"{r.value:.17g}", r.solver])
    return buf.getvalue()
