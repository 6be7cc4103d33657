"""Pointwise selection on finite function sequences.

Given f_0, ..., f_{J-1} and a companion sequence g_j converging pointwise to
g, the selection principle asks for a pointwise convergent subsequence of
(f_j) whose limit f satisfies nu_n(f, g) <= mu_n, where mu_n is the limit
superior of nu_n(f_j, g_j).  On finite data:

* mu_n is a tail maximum over a window j >= J0 (:func:`estimate_mu`);
* the subsequence is found by refining the index set one grid point at a
  time, by pigeonhole on finite spaces and by bisection of bounding boxes on
  Euclidean spaces (:func:`extract_subsequence`);
* the postcondition is checked on the extracted limit
  (:func:`verify_postcondition`).

Window choices are always surfaced: no finite data determines a limit
superior.
"""
from __future__ import annotations

import os
from concurrent.futures import ThreadPoolExecutor
from dataclasses import dataclass, field

import numpy as np

from .errors import DomainError, RefusalError
from .functions import FunctionSequence, SampledFunction
from .modulus import nu_prefix_table, nu_profile, uniform_distance
from .regularity import DEFAULT_THETA, classify_growth, epsilon_variation

POSTCONDITION_TOL = 1e-9


def _workers():
    try:
        return max(1, int(os.environ.get("MODVAR_THREADS", "1")))
    except ValueError:
        return 1


def _map(fn, items):
    items = list(items)
    workers = _workers()
    if workers == 1 or len(items) < 2:
        return [fn(x) for x in items]
    with ThreadPoolExecutor(max_workers=workers) as pool:
        return list(pool.map(fn, items))


def _check_pair(seq_f, seq_g):
    if seq_g is None:
        return
    if len(seq_f) != len(seq_g):
        raise DomainError("f and g sequences must have the same length")
    if not seq_f[0].compatible(seq_g[0]):
        raise DomainError("f and g sequences must share grid and space")


def _window(J, J0):
    J0 = int(J0)
    if not 0 <= J0 < J:
        raise DomainError(f"window start J0={J0} must lie in 0..{J - 1}")
    return J0


# mu estimation -------------------------------------------------------------
@dataclass
class MuEstimate:
    J0: int
    values: np.ndarray
    J0_alt: int
    values_alt: np.ndarray
    verdict: str
    theta: float
    per_j: np.ndarray = field(repr=False, default=None)

    def to_dict(self):
        return {"J0": self.J0, "mu": self.values.tolist(), "J0_alt": self.J0_alt,
                "mu_alt": self.values_alt.tolist(), "verdict": self.verdict, "theta": self.theta}


def modulus_table(seq_f, seq_g=None, n_max=1, mode=None, indices=None):
    """Array ``T[k, n - 1] = nu_n(f_{j_k}, g_{j_k})`` over the given indices."""
    indices = range(len(seq_f)) if indices is None else indices
    rows = _map(lambda j: nu_profile(seq_f[j], None if seq_g is None else seq_g[j], n_max, mode).values,
                indices)
    return np.array(rows).reshape(len(rows), n_max)


def estimate_mu(seq_f, seq_g=None, n_max=10, J0=0, mode=None, theta=DEFAULT_THETA):
    """Tail-maximum estimate of mu_n = limsup_j nu_n(f_j, g_j), n = 1..n_max.

    The estimate is also reported for the window starting at 2 * J0 (clamped
    to the last index) so that sensitivity to the window can be judged.
    ``seq_g=None`` pairs every f_j with a constant function.
    """
    _check_pair(seq_f, seq_g)
    J = len(seq_f)
    J0 = _window(J, J0)
    table = modulus_table(seq_f, seq_g, n_max, mode, range(J0, J))
    mu = table.max(axis=0)
    alt = min(2 * J0, J - 1) if J0 else min(J // 2, J - 1)
    mu_alt = table[alt - J0:].max(axis=0)
    _, _, verdict = classify_growth(mu, theta)
    return MuEstimate(J0, mu, alt, mu_alt, verdict, theta, table)


# precompactness ------------------------------------------------------------
@dataclass
class PrecompactReport:
    precompact: bool
    radii: np.ndarray | None
    escaping: list

    def to_dict(self):
        return {"precompact": self.precompact,
                "radii": None if self.radii is None else self.radii.tolist(),
                "escaping": self.escaping}


def check_precompactness(seq_f, radius=None):
    """Desk-scale pointwise precompactness check.

    Finite spaces are always precompact.  For Euclidean spaces the maximal
    norm over j is reported per grid point.  With an explicit ``radius`` a
    point fails when some value leaves the ball of that radius; otherwise a
    point fails when the second half of the sequence lies entirely beyond the
    norms reached by the first half while still spreading at least half as
    much (a sequence running off to infinity).
    """
    if seq_f.space.is_finite:
        return PrecompactReport(True, None, [])
    norms = np.linalg.norm(seq_f.stack(), axis=2)  # (J, m)
    radii = norms.max(axis=0)
    if radius is not None:
        escaping = [int(t) for t in np.flatnonzero(radii > radius)]
    else:
        half = len(seq_f) // 2
        head, tail = norms[:half], norms[half:]
        head_spread = head.max(axis=0) - head.min(axis=0)
        tail_spread = tail.max(axis=0) - tail.min(axis=0)
        runaway = (tail.min(axis=0) > head.max(axis=0)) & (tail_spread >= 0.5 * head_spread)
        escaping = [int(t) for t in np.flatnonzero(runaway)]
    return PrecompactReport(not escaping, radii, escaping)


def cauchy_tail(seq, J0, delta):
    """Grid points where the tail j >= J0 spreads more than ``delta`` (empty = Cauchy within delta)."""
    vals = seq.stack()[J0:]
    space = seq.space
    bad = []
    for t in range(len(seq.grid)):
        col = vals[:, t]
        if space.is_finite:
            diam = space.dist[np.ix_(col, col)].max()
        else:
            diam = space.pairwise(col, col).max()
        if diam > delta:
            bad.append(t)
    return bad


# extraction ----------------------------------------------------------------
@dataclass
class ExtractionResult:
    indices: list
    limit: SampledFunction
    radii: np.ndarray
    stabilization: int
    delta: float
    alpha_hat: np.ndarray
    beta_hat: np.ndarray
    nu_table: np.ndarray
    companion: str

    def to_dict(self):
        return {
            "indices": self.indices,
            "limit": self.limit.refs(),
            "radii": self.radii.tolist(),
            "stabilization": self.stabilization,
            "delta": self.delta,
            "alpha_hat": self.alpha_hat.tolist(),
            "beta_hat": self.beta_hat.tolist(),
            "nu_table": self.nu_table.tolist(),
            "companion": self.companion,
        }


def _pigeonhole(values, members):
    """Members sharing the most frequent value (ties: the group of the earliest member)."""
    groups = {}
    for j in members:
        groups.setdefault(int(values[j]), []).append(j)
    return max(groups.values(), key=lambda grp: (len(grp), -grp[0]))


def _bisect(values, members, delta):
    """Shrink bounding boxes of ``values[members]`` until their diameter is <= delta.

    The more populated half is kept; on a tie the half holding the latest
    index wins, since the limit is taken as j grows.
    """
    members = list(members)
    while True:
        pts = values[members]
        lo, hi = pts.min(axis=0), pts.max(axis=0)
        if np.linalg.norm(hi - lo) <= delta:
            return members
        axis = int(np.argmax(hi - lo))
        mid = (lo[axis] + hi[axis]) / 2
        lower = [j for j in members if values[j, axis] <= mid]
        upper = [j for j in members if values[j, axis] > mid]
        if len(lower) != len(upper):
            members = lower if len(lower) > len(upper) else upper
        else:
            members = lower if lower[-1] > upper[-1] else upper


def _tail(a):
    return a[len(a) // 2:]


def extract_subsequence(seq_f, seq_g=None, delta=1e-3, mode=None, J0=None, n_max=None,
                        limit="last", radius=None):
    """Select indices j_0 < j_1 < ... along which every f_j(t) stays within ``delta``.

    The limit function is the last selected member (``limit="last"``) or the
    centre of the final bounding boxes (``limit="center"``, Euclidean only).
    When ``seq_g`` is given it must be Cauchy within ``delta`` over the
    window j >= J0 (default J // 2); otherwise a :class:`RefusalError` is
    raised.  Diagnostics (tail maxima of nu_n and of the prefix moduli over
    the selected indices) use ``seq_g`` or, when absent, a constant companion.
    """
    if not delta > 0:
        raise DomainError("delta must be positive")
    _check_pair(seq_f, seq_g)
    J, m = len(seq_f), len(seq_f.grid)
    pre = check_precompactness(seq_f, radius)
    if not pre.precompact:
        raise RefusalError("sequence is not pointwise precompact", grid_points=pre.escaping)
    if seq_g is not None:
        J0 = J // 2 if J0 is None else _window(J, J0)
        bad = cauchy_tail(seq_g, J0, delta)
        if bad:
            raise RefusalError("companion sequence is not Cauchy within delta", grid_points=bad)
    space = seq_f.space
    stack = seq_f.stack()
    survivors = list(range(J))
    for t in range(m):
        col = stack[:, t]
        survivors = _pigeonhole(col, survivors) if space.is_finite else _bisect(col, survivors, delta)
        if len(survivors) < 2:
            raise RefusalError("fewer than 2 indices survive", grid_point=t)
    chosen = stack[survivors]
    if limit == "last" or space.is_finite:
        lim_vals = chosen[-1]
    elif limit == "center":
        lim_vals = (chosen.min(axis=0) + chosen.max(axis=0)) / 2
    else:
        raise DomainError(f"unknown limit rule {limit!r}")
    f_lim = SampledFunction(seq_f.grid, space, lim_vals)
    dist = np.array([[_pointwise(space, chosen[k, t], lim_vals[t]) for t in range(m)]
                     for k in range(len(survivors))])
    radii = dist.max(axis=0)
    # first position in the selection from which every member is within delta
    bad = np.flatnonzero(~np.all(dist <= delta + 1e-12, axis=1))
    stabilization = int(bad[-1] + 1) if bad.size else 0
    n_max = min(m - 1, 10) if n_max is None else int(n_max)
    table = modulus_table(seq_f, seq_g, n_max, mode, survivors)
    prefixes = np.array(_map(
        lambda j: nu_prefix_table(seq_f[j], None if seq_g is None else seq_g[j], n_max, mode),
        survivors))
    return ExtractionResult(
        indices=survivors,
        limit=f_lim,
        radii=radii,
        stabilization=stabilization,
        delta=float(delta),
        alpha_hat=_tail(table).max(axis=0),
        beta_hat=_tail(prefixes).max(axis=0),
        nu_table=table,
        companion="g" if seq_g is not None else "constant",
    )


def _pointwise(space, x, y):
    if space.is_finite:
        return float(space.dist[x, y])
    return float(np.linalg.norm(x - y))


def verify_postcondition(result, g=None, mu=None, mode=None, seq_g=None):
    """Check nu_n(f, g) <= mu_n for the extracted limit f, n = 1..len(mu).

    Also evaluates the lower-semicontinuity inequality
    nu_n(f, g) <= liminf_k nu_n(f_{j_k}, g_{j_k}), the liminf being the
    minimum over the second half of the selected indices.  Because the limit
    is only known within the recorded radii, that comparison carries the
    slack 2 n (max radius + sup_k d_inf(g_{j_k}, g)) and is reported, not
    enforced.
    """
    if mu is None:
        raise DomainError("a MuEstimate is required")
    n_max = min(len(mu.values), result.nu_table.shape[1])
    prof = nu_profile(result.limit, g, n_max, mode).values
    margin = mu.values[:n_max] - prof
    liminf = _tail(result.nu_table).min(axis=0)[:n_max]
    g_gap = 0.0
    if seq_g is not None and g is not None:
        g_gap = max(uniform_distance(seq_g[j], g) for j in _tail(result.indices))
    n = np.arange(1, n_max + 1)
    slack = 2 * n * (float(result.radii.max()) + g_gap)
    lsc_margin = liminf + slack - prof
    return {
        "nu_limit": prof.tolist(),
        "mu": mu.values[:n_max].tolist(),
        "margin": margin.tolist(),
        "holds": bool(np.all(margin >= -POSTCONDITION_TOL)),
        "liminf": liminf.tolist(),
        "lsc_margin": lsc_margin.tolist(),
        "lsc_holds": bool(np.all(lsc_margin >= -POSTCONDITION_TOL)),
    }


# driver conditions ---------------------------------------------------------
def check_evar_condition(seq_f, eps_list, J0=0, n_max=None):
    """Desk-scale test of limsup_j V_eps(f_j) < infinity for the listed eps.

    C(eps) is the maximum of V_eps(f_j) over j >= J0.  The condition is
    judged satisfied for eps when V_eps does not grow from the window
    [J0, J1) to [J1, J) with J1 = 2 J0 (or the midpoint when 2 J0 runs past
    the end).  The implied modulus bound
    nu_n(f_j) / n <= 2 eps + (C(eps) + 1) / n is checked for every j >= J0.
    """
    space = seq_f.space
    if not (space.is_finite or space.is_real):
        raise RefusalError("epsilon-variation needs a finite space or the real line")
    J = len(seq_f)
    J0 = _window(J, J0)
    J1 = 2 * J0 if 0 < 2 * J0 < J else (J0 + J + 1) // 2
    eps_list = [float(e) for e in eps_list]
    m = len(seq_f.grid)
    n_max = m - 1 if n_max is None else int(n_max)
    table = modulus_table(seq_f, None, n_max, None, range(J0, J))
    n = np.arange(1, n_max + 1)
    per_eps = []
    for eps in eps_list:
        v = np.array(_map(lambda j: epsilon_variation(seq_f[j], eps).value, range(J0, J)))
        C = float(v.max())
        head, tail = v[: J1 - J0], v[J1 - J0:]
        stable = bool(tail.size == 0 or tail.max() <= head.max() + 1e-12)
        bound = 2 * eps + (C + 1) / n
        margin = float((bound[None, :] - table / n[None, :]).min())
        per_eps.append({"eps": eps, "C": C, "values": v.tolist(), "stable": stable,
                        "bound_margin": margin, "bound_holds": margin >= -1e-12})
    return {"J0": J0, "J1": J1, "per_eps": per_eps,
            "satisfied": all(p["stable"] for p in per_eps),
            "bound_holds": all(p["bound_holds"] for p in per_eps)}


def check_cauchy_condition(seq_f, n_max=10, N_list=(0,), mode=None, theta=DEFAULT_THETA):
    """s_N(n) = max over j, k >= N of nu_n(f_j, f_k), for each N in ``N_list``.

    The growth verdict is taken on n -> min_N s_N(n).  When the condition
    holds, :func:`extract_subsequence` can be run without a companion
    sequence.
    """
    J = len(seq_f)
    N_list = sorted(_window(J, N) for N in N_list)
    start = N_list[0]
    pairs = [(j, k) for j in range(start, J) for k in range(j + 1, J)]
    profiles = dict(zip(pairs, _map(lambda p: nu_profile(seq_f[p[0]], seq_f[p[1]], n_max, mode).values,
                                    pairs)))
    s = {}
    for N in N_list:
        rows = [v for (j, k), v in profiles.items() if j >= N]
        s[N] = np.max(rows, axis=0) if rows else np.zeros(n_max)
    best = np.min(np.stack(list(s.values())), axis=0)
    _, _, verdict = classify_growth(best, theta)
    return {"s": {int(N): v.tolist() for N, v in s.items()}, "min_s": best.tolist(),
            "verdict": verdict, "theta": theta}


__all__ = [
    "FunctionSequence", "MuEstimate", "PrecompactReport", "ExtractionResult", "estimate_mu",
    "modulus_table", "check_precompactness", "cauchy_tail", "extract_subsequence",
    "verify_postcondition", "check_evar_condition", "check_cauchy_condition",
]
