"""Joint modulus of variation and related quantities on sampled functions.

For a grid with m points, ``nu(f, g, n)`` is the largest total joint
increment over n index pairs (s_1, t_1), ..., (s_n, t_n) with
s_1 < t_1 <= s_2 < t_2 <= ... <= s_n < t_n.  A grid admits at most m - 1
such pairs, and for n > m - 1 the value at m - 1 is returned.

The maximum is computed by dynamic programming over an m x m cache of
pair increments, O(n m^2) for a whole profile n = 1..n_max.
"""
from __future__ import annotations

import csv
import io
from dataclasses import dataclass

import numpy as np
from scipy.spatial.distance import cdist

from .errors import DomainError, RefusalError
from .functions import check_compatible
from .metric import NORM, SEMIGROUP, IncrementMode, joint_increment

# rows per block in the DP sweeps; caps scratch memory at about 32 MB
_BLOCK_ELEMS = 4_000_000


def _mode_for(f, g, mode):
    return IncrementMode.parse(mode, f.space)


def increment_matrix(f, g=None, mode=None):
    """Pair-increment cache ``W[s, t]`` for all grid index pairs.

    ``g=None`` stands for a constant function, in which case ``W`` holds the
    plain increments d(f(s), f(t)) whatever the mode.  Returns ``(W, exact)``.
    """
    space = f.space
    if g is None:
        return space.pairwise(f.values, f.values), True
    check_compatible(f, g)
    mode = _mode_for(f, g, mode)
    fv, gv = f.values, g.values
    if mode.kind == NORM:
        h = fv - gv
        return space.pairwise(h, h), True
    if mode.kind == SEMIGROUP:
        a = space.add
        left = a[fv[:, None], gv[None, :]]  # f(s) + g(t)
        return space.dist[left, left.T], True
    if space.is_finite:
        # F(z) = H[s, z] - H[t, z] with H[u, z] = d(f(u), z) - d(g(u), z),
        # so the increment is a Chebyshev distance between rows of H
        h = space.dist[fv] - space.dist[gv]
        return _chebyshev(h), True
    dff = space.pairwise(fv, fv)
    dfg = space.pairwise(fv, gv)  # dfg[a, b] = d(f(a), g(b))
    dgg = space.pairwise(gv, gv)
    diag = np.diag(dfg)
    cands = [
        dfg - dff - diag[:, None],           # z = f(s)
        dff + diag[None, :] - dfg.T,         # z = f(t)
        diag[:, None] + dgg.T - dfg.T,       # z = g(s)
        dfg - diag[None, :] - dgg,           # z = g(t)
    ]
    w = np.max(np.abs(np.stack(cands)), axis=0)
    extra = mode.witness_array(space)
    if len(extra):
        h = space.pairwise(fv, extra) - space.pairwise(gv, extra)
        w = np.maximum(w, _chebyshev(h))
    np.fill_diagonal(w, 0.0)
    return w, mode.is_exact(space)


def _chebyshev(h):
    return cdist(h, h, metric="chebyshev")


def _upper(w):
    """Copy of ``w`` with -inf on and below the diagonal."""
    m = len(w)
    out = np.array(w, dtype=float)
    out[np.tril_indices(m)] = -np.inf
    return out


def _prefix_table(wu, kmax):
    """D[k, j]: best total of exactly k pairs using grid points 0..j."""
    m = len(wu)
    table = np.full((kmax + 1, m), -np.inf)
    table[0] = 0.0
    block = max(1, _BLOCK_ELEMS // m)
    for k in range(1, kmax + 1):
        prev = table[k - 1]
        colmax = np.full(m, -np.inf)
        for lo in range(0, m, block):
            hi = min(m, lo + block)
            np.maximum(colmax, (prev[lo:hi, None] + wu[lo:hi]).max(axis=0), out=colmax)
        table[k] = np.maximum.accumulate(colmax)
    return table


def _suffix_table(wu, kmax):
    """S[k, i]: best total of exactly k pairs using grid points i..m-1."""
    m = len(wu)
    table = np.full((kmax + 1, m), -np.inf)
    table[0] = 0.0
    block = max(1, _BLOCK_ELEMS // m)
    for k in range(1, kmax + 1):
        nxt = table[k - 1]
        rowmax = np.empty(m)
        for lo in range(0, m, block):
            hi = min(m, lo + block)
            rowmax[lo:hi] = (wu[lo:hi] + nxt[None, :]).max(axis=1)
        table[k] = np.maximum.accumulate(rowmax[::-1])[::-1]
    return table


def _witness(w, suffix, k):
    """Lexicographically smallest pair collection attaining ``suffix[k, 0]``."""
    m = len(w)
    target = suffix[k, 0]
    tol = 1e-10 * max(1.0, abs(target))
    pairs, cur, acc = [], 0, 0.0
    for left in range(k, 0, -1):
        need = target - acc - tol
        for s in range(cur, m - 1):
            vals = w[s, s + 1:] + suffix[left - 1, s + 1:]
            hit = np.flatnonzero(vals >= need)
            if hit.size:
                t = s + 1 + int(hit[0])
                pairs.append((s, t))
                acc += w[s, t]
                cur = t
                break
        else:  # pragma: no cover - guarded by the DP optimum
            raise RuntimeError("witness reconstruction failed")
    return pairs


@dataclass
class ModulusProfile:
    """The sequence n -> nu_n(f, g) for n = 1..n_max with attaining collections."""

    values: np.ndarray
    witnesses: list
    mode: str
    exact: bool
    grid_size: int
    constant_g: bool = False

    @property
    def n_max(self):
        return len(self.values)

    def nu(self, n):
        return float(self.values[n - 1])

    def normalized(self):
        """nu_n / n."""
        return self.values / np.arange(1, self.n_max + 1)

    def rows(self):
        per_n = self.normalized()
        for n in range(1, self.n_max + 1):
            yield {
                "n": n,
                "nu": float(self.values[n - 1]),
                "nu_over_n": float(per_n[n - 1]),
                "witness": ";".join(f"{s}-{t}" for s, t in self.witnesses[n - 1]),
            }

    def to_csv(self):
        buf = io.StringIO()
        writer = csv.DictWriter(buf, fieldnames=["n", "nu", "nu_over_n", "witness"], lineterminator="\n")
        writer.writeheader()
        for row in self.rows():
            row = dict(row, nu=f"{row['nu']:.17g}", nu_over_n=f"{row['nu_over_n']:.17g}")
            writer.writerow(row)
        return buf.getvalue()

    def to_dict(self):
        return {
            "mode": self.mode,
            "exact": self.exact,
            "grid_size": self.grid_size,
            "constant_g": self.constant_g,
            "nu": [float(v) for v in self.values],
            "witnesses": [[list(p) for p in w] for w in self.witnesses],
        }


def _check_n(n):
    if int(n) != n or n < 1:
        raise DomainError(f"n must be a positive integer, got {n!r}")
    return int(n)


def _mode_name(f, g, mode):
    if g is None:
        return "constant"
    return _mode_for(f, g, mode).kind


def nu(f, g=None, n=1, mode=None):
    """Joint modulus of variation nu_n(f, g) and an attaining pair collection.

    ``g=None`` gives the ordinary modulus of variation nu_n(f).
    Returns ``(value, [(s_1, t_1), ...])`` with grid indices.
    """
    n = _check_n(n)
    w, _ = increment_matrix(f, g, mode)
    k = min(n, len(w) - 1)
    suffix = _suffix_table(_upper(w), k)
    return float(suffix[k, 0]), _witness(w, suffix, k)


def nu_profile(f, g=None, n_max=None, mode=None):
    """nu_1..nu_{n_max} from one DP sweep (``n_max`` defaults to m - 1)."""
    m = len(f)
    n_max = m - 1 if n_max is None else _check_n(n_max)
    w, exact = increment_matrix(f, g, mode)
    kmax = min(n_max, m - 1)
    suffix = _suffix_table(_upper(w), kmax)
    values = np.empty(n_max)
    witnesses = []
    for n in range(1, n_max + 1):
        k = min(n, kmax)
        values[n - 1] = suffix[k, 0]
        witnesses.append(_witness(w, suffix, k) if n <= kmax else witnesses[kmax - 1])
    return ModulusProfile(values, witnesses, _mode_name(f, g, mode), exact, m, constant_g=g is None)


def nu_prefix_table(f, g=None, n_max=1, mode=None):
    """Array ``P[n - 1, t] = nu_n(f, g; points 0..t)`` for n = 1..n_max.

    A prefix with t + 1 points admits at most t pairs; larger n use the
    value at t (zero for the one-point prefix).
    """
    n_max = _check_n(n_max)
    w, _ = increment_matrix(f, g, mode)
    m = len(w)
    kmax = min(n_max, m - 1)
    prefix = _prefix_table(_upper(w), kmax)
    out = np.empty((n_max, m))
    t = np.arange(m)
    for n in range(1, n_max + 1):
        k = np.minimum(min(n, kmax), t)
        out[n - 1] = prefix[k, t]
    return out


def nu_prefix(f, g=None, n=1, t_index=None, mode=None):
    """nu_n restricted to the grid points with index <= ``t_index``."""
    n = _check_n(n)
    m = len(f)
    t_index = m - 1 if t_index is None else int(t_index)
    if not 0 <= t_index < m:
        raise DomainError(f"t_index {t_index} outside 0..{m - 1}")
    return float(nu_prefix_table(f, g, n, mode)[n - 1, t_index])


# brute-force oracle -------------------------------------------------------
MAX_BRUTE_GRID = 14
MAX_BRUTE_N = 5


def pair_collections(m, n):
    """All collections of n non-overlapping index pairs on m points."""
    def extend(start, left):
        if left == 0:
            yield ()
            return
        for s in range(start, m - 1):
            for t in range(s + 1, m):
                for rest in extend(t, left - 1):
                    yield ((s, t),) + rest
    yield from extend(0, n)


def nu_bruteforce(f, g=None, n=1, mode=None):
    """Exhaustive maximum over all pair collections; a test oracle for :func:`nu`.

    Increments are evaluated one quadruple at a time through
    :func:`modvar.metric.joint_increment`, independently of the DP cache.
    """
    n = _check_n(n)
    m = len(f)
    if m > MAX_BRUTE_GRID or n > MAX_BRUTE_N:
        raise RefusalError(f"brute force limited to m <= {MAX_BRUTE_GRID}, n <= {MAX_BRUTE_N}",
                           m=m, n=n)
    space = f.space
    if g is not None:
        check_compatible(f, g)
        mode = _mode_for(f, g, mode)
    else:
        mode = IncrementMode.parse(None, space)
    fv = f.values
    gv = g.values if g is not None else None
    cache = {}

    def inc(s, t):
        if (s, t) not in cache:
            if gv is None:
                # constant g: any fixed point works
                c = fv[0]
                cache[s, t] = joint_increment(mode, space, fv[s], fv[t], c, c)[0]
            else:
                cache[s, t] = joint_increment(mode, space, fv[s], fv[t], gv[s], gv[t])[0]
        return cache[s, t]

    k = min(n, m - 1)
    return max(sum(inc(s, t) for s, t in coll) for coll in pair_collections(m, k))


# variations, oscillations, uniform distance -------------------------------
def consecutive_increments(f, g=None, mode=None):
    """Increments over consecutive grid pairs (i, i + 1)."""
    space = f.space
    if g is None:
        fv = f.values
        if space.is_finite:
            return space.dist[fv[:-1], fv[1:]]
        return np.linalg.norm(fv[1:] - fv[:-1], axis=1)
    check_compatible(f, g)
    mode = _mode_for(f, g, mode)
    fv, gv = f.values, g.values
    if mode.kind == NORM:
        h = fv - gv
        return np.linalg.norm(h[1:] - h[:-1], axis=1)
    return np.array([joint_increment(mode, space, fv[i], fv[i + 1], gv[i], gv[i + 1])[0]
                     for i in range(len(fv) - 1)])


def jordan_variation(f):
    """Jordan variation V(f): the sum of consecutive distances."""
    return float(consecutive_increments(f).sum())


def joint_variation(f, g, mode=None):
    """Joint variation V(f, g) = sup_n nu_n(f, g).

    On an m-point grid the only collection of m - 1 pairs is the chain of
    consecutive pairs, and the modulus is constant from there on.
    """
    return float(consecutive_increments(f, g, mode).sum())


def oscillation(f):
    """Diameter of the image f(T)."""
    return float(f.space.pairwise(f.values, f.values).max())


def joint_oscillation(f, g=None, mode=None):
    """|(f, g)(T)| = nu_1(f, g)."""
    w, _ = increment_matrix(f, g, mode)
    return float(w.max())


def uniform_distance(f, g):
    """sup_t d(f(t), g(t))."""
    check_compatible(f, g)
    space = f.space
    if space.is_finite:
        return float(space.dist[f.values, g.values].max())
    return float(np.linalg.norm(f.values - g.values, axis=1).max())


__all__ = [
    "ModulusProfile", "increment_matrix", "nu", "nu_profile", "nu_prefix", "nu_prefix_table",
    "nu_bruteforce", "pair_collections", "consecutive_increments", "jordan_variation",
    "joint_variation", "oscillation", "joint_oscillation", "uniform_distance",
]
