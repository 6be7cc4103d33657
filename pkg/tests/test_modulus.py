from fractions import Fraction

import numpy as np
import pytest
from hypothesis import given, settings
from hypothesis import strategies as st

from modvar import (DomainError, MetricSpace, RefusalError, SampledFunction, joint_oscillation,
                    joint_variation, jordan_variation, nu, nu_bruteforce, nu_prefix, nu_profile,
                    oscillation, uniform_distance)
from modvar.corpus import alternating_grid, gen_dirichlet, two_point_space
from modvar.functions import Grid
from modvar.modulus import increment_matrix, nu_prefix_table, pair_collections

from helpers import TOL, cyclic_space, random_finite_space, random_function, random_grid, random_space


def quarter_grid():
    return Grid.from_points([0, Fraction(1, 3), Fraction(2, 3), 1])


def real_function(values, grid=None):
    grid = quarter_grid() if grid is None else grid
    return SampledFunction(grid, MetricSpace.real(), values)


def test_alternating_example_with_witness():
    f = real_function([0.0, 1.0, 0.0, 1.0])
    g = real_function([0.0] * 4)
    value, pairs = nu(f, g, 2, "norm")
    assert value == 2
    assert pairs == [(0, 1), (1, 2)]
    assert nu_bruteforce(f, g, 2, "norm") == 2


def test_large_n_uses_saturated_value():
    f = real_function([0.0, 1.0, 0.0, 1.0])
    assert nu(f, None, 10)[0] == nu(f, None, 3)[0] == 3


def test_bad_arguments():
    f = real_function([0.0, 1.0, 0.0, 1.0])
    with pytest.raises(DomainError):
        nu(f, None, 0)
    other = SampledFunction(Grid.from_points([0, 1]), MetricSpace.real(), [0.0, 1.0])
    with pytest.raises(DomainError):
        nu(f, other, 1)
    big = real_function(np.zeros(15), Grid.from_points(range(15)))
    with pytest.raises(RefusalError):
        nu_bruteforce(big, None, 2)


def test_two_point_grid_is_single_increment():
    sp = two_point_space(0.7)
    grid = Grid.from_points([0, 1])
    f = SampledFunction(grid, sp, ["x", "y"])
    g = SampledFunction(grid, sp, ["x", "x"])
    assert nu_bruteforce(f, g, 1) == pytest.approx(0.7)
    assert nu(f, g, 3)[0] == pytest.approx(0.7)


def test_pair_collections_are_non_overlapping():
    for coll in pair_collections(6, 3):
        flat = [i for p in coll for i in p]
        assert all(s < t for s, t in coll)
        assert flat == sorted(flat)


@pytest.mark.parametrize("n", [1, 3, 7])
def test_dirichlet_alternating_grid(n):
    sp = two_point_space(1.5)
    f = gen_dirichlet(sp, "x", "y", alternating_grid(2 * n + 1))
    assert nu(f, None, n)[0] == n * 1.5


def test_identical_functions_have_zero_modulus(rng):
    for _ in range(20):
        sp = random_space(rng)
        f = random_function(rng, random_grid(rng, 7), sp)
        assert np.all(nu_profile(f, f, 6).values == 0)


def test_witness_attains_value_and_is_lexicographic(rng):
    for _ in range(40):
        sp = random_space(rng)
        grid = random_grid(rng, int(rng.integers(2, 8)))
        f, g = random_function(rng, grid, sp), random_function(rng, grid, sp)
        w = nu_profile(f, g, 4)
        for n in range(1, 5):
            pairs = w.witnesses[n - 1]
            mat, _ = increment_matrix(f, g)
            total = sum(mat[s, t] for s, t in pairs)
            assert total == pytest.approx(w.nu(n), abs=1e-10)
            best = min((c for c in pair_collections(len(grid), min(n, len(grid) - 1))
                        if abs(sum(mat[s, t] for s, t in c) - w.nu(n)) <= 1e-10),
                       key=lambda c: [i for p in c for i in p])
            assert [tuple(p) for p in pairs] == list(best)


def test_profile_invariants(rng):
    for _ in range(60):
        sp = random_space(rng, ("finite", "real", "plane", "cyclic"))
        grid = random_grid(rng, int(rng.integers(2, 12)))
        f, g = random_function(rng, grid, sp), random_function(rng, grid, sp)
        v = nu_profile(f, g, 12).values
        n = np.arange(1, 13)
        assert np.all(np.diff(v) >= -TOL)
        assert np.all(v <= n * v[0] + TOL)
        for a in range(1, 7):
            for b in range(1, 13 - a):
                assert v[a + b - 1] <= v[a - 1] + v[b - 1] + TOL
        assert np.all(np.diff(v / n) <= TOL)


def test_pseudometric_in_functions(rng):
    for _ in range(40):
        sp = random_space(rng, ("finite", "real", "plane"))
        grid = random_grid(rng, 6)
        f, g, h = (random_function(rng, grid, sp) for _ in range(3))
        for n in (1, 2, 4):
            fg = nu(f, g, n)[0]
            assert fg == pytest.approx(nu(g, f, n)[0], abs=TOL)
            assert fg <= nu(f, h, n)[0] + nu(h, g, n)[0] + TOL


def test_prefix_examples():
    sp = two_point_space(1.0)
    f = gen_dirichlet(sp, "x", "y", alternating_grid(11))
    assert nu_prefix(f, None, 3, 10) == nu(f, None, 3)[0]
    assert nu_prefix(f, None, 3, 0) == 0
    for k in range(1, 6):
        assert nu_prefix(f, None, k, 2 * k) == k
        for n in (k, k + 1, 2 * k + 1):
            expected = nu_bruteforce(f.restrict(2 * k + 1), None, min(n, 5))
            assert nu_prefix(f, None, n, 2 * k) == (expected if n <= 5 else min(n, 2 * k))


def test_prefix_monotone_and_bounded(rng):
    sp = random_finite_space(rng, 4)
    for _ in range(20):
        f, g = random_function(rng, random_grid(rng, 9), sp), None
        table = nu_prefix_table(f, g, 5)
        assert np.all(np.diff(table, axis=1) >= 0)
        assert np.allclose(table[:, -1], nu_profile(f, g, 5).values)


def test_variation_examples():
    f = real_function([0.0, 1.0, 0.0, 1.0])
    assert jordan_variation(f) == 3
    assert joint_variation(f, f) == 0
    assert oscillation(real_function([2.0] * 4)) == 0
    sp = two_point_space(0.4)
    assert oscillation(gen_dirichlet(sp, "x", "y", alternating_grid(5))) == 0.4


def test_joint_variation_is_saturated_modulus(rng):
    for _ in range(30):
        sp = random_space(rng)
        grid = random_grid(rng, int(rng.integers(2, 9)))
        f, g = random_function(rng, grid, sp), random_function(rng, grid, sp)
        m = len(grid)
        assert joint_variation(f, g) == pytest.approx(nu(f, g, m - 1)[0], abs=1e-10)
        assert jordan_variation(f) == pytest.approx(nu(f, None, m - 1)[0], abs=1e-10)


def test_oscillation_bounds(rng):
    for _ in range(50):
        sp = random_space(rng, ("finite", "real", "plane"))
        grid = random_grid(rng, 6)
        f, g = random_function(rng, grid, sp), random_function(rng, grid, sp)
        jo, du = joint_oscillation(f, g), uniform_distance(f, g)
        assert jo <= 2 * du + TOL
        pointwise = [np.linalg.norm(np.atleast_1d(sp.pairwise(f.values[[i]], g.values[[i]])))
                     for i in range(len(grid))]
        for d in pointwise:
            assert du <= d + jo + TOL


def test_semigroup_mode_on_cyclic_group(rng):
    sp = cyclic_space(5)
    grid = random_grid(rng, 6)
    for _ in range(10):
        f, g = random_function(rng, grid, sp), random_function(rng, grid, sp)
        for n in (1, 2, 3):
            assert nu(f, g, n, "semigroup")[0] == pytest.approx(nu_bruteforce(f, g, n, "semigroup"), abs=TOL)


def test_csv_and_dict_export():
    f = real_function([0.0, 1.0, 0.0, 1.0])
    prof = nu_profile(f, None, 4)
    lines = prof.to_csv().strip().splitlines()
    assert lines[0] == "n,nu,nu_over_n,witness"
    assert lines[2] == "2,2,1,0-1;1-2"
    assert prof.to_dict()["nu"] == [1.0, 2.0, 3.0, 3.0]


@settings(max_examples=60, deadline=None)
@given(st.lists(st.floats(-5, 5, allow_nan=False), min_size=2, max_size=8),
       st.integers(1, 4))
def test_dp_matches_bruteforce_hypothesis(vals, n):
    grid = Grid.from_points(range(len(vals)))
    f = SampledFunction(grid, MetricSpace.real(), vals)
    g = SampledFunction(grid, MetricSpace.real(), vals[::-1])
    assert nu(f, g, n)[0] == pytest.approx(nu_bruteforce(f, g, n), abs=1e-12)
