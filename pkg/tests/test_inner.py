import numpy as np
import pytest
from hypothesis import given, settings, strategies as st

from ridgeapprox.dictionary import RidgeAtom, SparseCombo, SpectralAtom, eval_atom, eval_combo, ridge_combo
from ridgeapprox.errors import InvalidArgument
from ridgeapprox.inner import (RidgeFunction, atom_norm, combo_distance, combo_norm_sq, dictionary_bound,
                               reduced_ridge_inner_product)
from ridgeapprox.numerics.montecarlo import ball_monte_carlo
from ridgeapprox.piecewise import PiecewisePoly

WEIGHTS = ["lebesgue", "bochner_riesz"]


def _unit(rng, d):
    w = rng.standard_normal(d)
    return w / np.linalg.norm(w)


def _atom(rng, d, k):
    return RidgeAtom(tuple(_unit(rng, d)), float(rng.uniform(-1.5, 1.5)), k)


@pytest.mark.parametrize("weight", WEIGHTS)
def test_constant_atom_gives_ball_mass(weight):
    one = RidgeAtom((1.0, 0.0), 2.0, 0)
    expect = np.pi if weight == "lebesgue" else np.pi / 2
    assert abs(reduced_ridge_inner_product(one, one, weight) - expect) < 1e-12


def test_ramp_closed_form():
    # int over the half disc x1 > 0 of x1^2 = pi / 8
    a = RidgeAtom((1.0, 0.0), 0.0, 1)
    assert abs(reduced_ridge_inner_product(a, a, "lebesgue") - np.pi / 8) < 1e-12


def test_d3_constant_atom():
    one = RidgeAtom((0.0, 0.0, 1.0), 2.0, 0)
    assert abs(reduced_ridge_inner_product(one, one, "lebesgue") - 4 * np.pi / 3) < 1e-12


@pytest.mark.parametrize("weight", WEIGHTS)
def test_parallel_disjoint_supports(weight):
    f = RidgeFunction(np.array([0.6, 0.8]), PiecewisePoly.from_pieces([-1.0, -0.2, 1.0], [[1.0, 2.0], [0.0]]))
    g = RidgeFunction(np.array([0.6, 0.8]), PiecewisePoly.from_pieces([-1.0, 0.1, 1.0], [[0.0], [3.0, -1.0]]))
    assert reduced_ridge_inner_product(f, g, weight) == 0.0
    g_anti = RidgeFunction(np.array([-0.6, -0.8]), PiecewisePoly.from_pieces([-1.0, -0.1, 1.0], [[3.0], [0.0]]))
    assert reduced_ridge_inner_product(f, g_anti, weight) == 0.0


def test_non_unit_direction_rejected():
    f = RidgeFunction(np.array([1.0, 1.0]), PiecewisePoly.ramp(0.0, 1))
    with pytest.raises(InvalidArgument):
        reduced_ridge_inner_product(f, f)


@pytest.mark.parametrize("weight", WEIGHTS)
@pytest.mark.parametrize("d", [2, 3])
@pytest.mark.parametrize("seed", range(3))
def test_inner_product_vs_monte_carlo(weight, d, seed):
    rng = np.random.default_rng(100 * d + seed)
    k1, k2 = rng.integers(0, 3, 2)
    a, b = _atom(rng, d, int(k1)), _atom(rng, d, int(k2))
    est, se = ball_monte_carlo(d, lambda x: eval_atom(a, x) * eval_atom(b, x), weight, 10 ** 6, seed)
    val = reduced_ridge_inner_product(a, b, weight)
    assert abs(val - est) <= 3 * se + 1e-12


@pytest.mark.parametrize("weight", WEIGHTS)
def test_combo_distance_vs_monte_carlo(weight):
    rng = np.random.default_rng(7)
    c1 = SparseCombo((_atom(rng, 2, 1), _atom(rng, 2, 1)), rng.standard_normal(2))
    c2 = SparseCombo((_atom(rng, 2, 1), _atom(rng, 2, 1)), rng.standard_normal(2))
    est, se = ball_monte_carlo(2, lambda x: (eval_combo(c1, x) - eval_combo(c2, x)) ** 2, weight, 10 ** 6, 3)
    assert abs(combo_distance(c1, c2, weight) ** 2 - est) <= 3 * se


def test_mixed_power_combo_vs_monte_carlo():
    rng = np.random.default_rng(8)
    c = SparseCombo((_atom(rng, 2, 0), _atom(rng, 2, 1), _atom(rng, 2, 2)), rng.standard_normal(3))
    est, se = ball_monte_carlo(2, lambda x: eval_combo(c, x) ** 2, "lebesgue", 10 ** 6, 4)
    assert abs(combo_norm_sq(c, "lebesgue") - est) <= 3 * se


def test_spectral_distance_vs_monte_carlo():
    rng = np.random.default_rng(9)
    atoms = tuple(SpectralAtom(tuple(rng.uniform(-2, 2, 2)), 1.0) for _ in range(3))
    c = SparseCombo(atoms, rng.standard_normal(3) + 1j * rng.standard_normal(3))
    est, se = ball_monte_carlo(2, lambda x: np.abs(eval_combo(c, x)) ** 2, "bochner_riesz", 10 ** 6, 5)
    assert abs(combo_norm_sq(c, "bochner_riesz") - est) <= 3 * se


def test_spectral_zero_frequency_norm():
    c = SparseCombo((SpectralAtom((0.0, 0.0), 0.0),), np.array([1.0 + 0j]))
    assert abs(combo_norm_sq(c, "lebesgue") - np.pi) < 1e-12


def test_distance_identity_and_symmetry():
    rng = np.random.default_rng(2)
    c1 = ridge_combo(np.array([_unit(rng, 2) for _ in range(4)]), rng.uniform(-2, 2, 4), rng.standard_normal(4), 1)
    c2 = ridge_combo(np.array([_unit(rng, 2) for _ in range(3)]), rng.uniform(-2, 2, 3), rng.standard_normal(3), 1)
    assert combo_distance(c1, c1) <= 1e-10
    assert combo_distance(c1, c2) == pytest.approx(combo_distance(c2, c1), abs=1e-12)


def test_mixed_kind_distance_rejected():
    r = SparseCombo((RidgeAtom((1.0, 0.0), 0.0, 1),), [1.0])
    s = SparseCombo((SpectralAtom((1.0, 0.0), 0.0),), [1.0])
    with pytest.raises(InvalidArgument):
        combo_distance(r, s)


def _small_combo(seed):
    rng = np.random.default_rng(seed)
    n = int(rng.integers(1, 4))
    return ridge_combo(np.array([_unit(rng, 2) for _ in range(n)]), rng.uniform(-2, 2, n), rng.standard_normal(n), 1)


@settings(max_examples=25)
@given(st.integers(0, 10 ** 6), st.integers(0, 10 ** 6), st.integers(0, 10 ** 6))
def test_triangle_inequality(s1, s2, s3):
    a, b, c = _small_combo(s1), _small_combo(s2), _small_combo(s3)
    assert combo_distance(a, c) <= combo_distance(a, b) + combo_distance(b, c) + 1e-9


@given(st.floats(-4, 4), st.integers(0, 10 ** 6))
def test_bilinearity(alpha, seed):
    rng = np.random.default_rng(seed)
    a, b = _atom(rng, 2, 1), _atom(rng, 2, 2)
    fa = RidgeFunction(a.omega, PiecewisePoly.ramp(a.offset, 1).scale(alpha))
    ref = reduced_ridge_inner_product(a, b)
    assert abs(reduced_ridge_inner_product(fa, b) - alpha * ref) <= 1e-10 * max(1.0, abs(alpha * ref))


@given(st.integers(0, 10 ** 6))
def test_self_inner_product_nonnegative(seed):
    rng = np.random.default_rng(seed)
    a = _atom(rng, 2, int(rng.integers(0, 3)))
    assert reduced_ridge_inner_product(a, a) >= 0.0


@pytest.mark.parametrize("k", [0, 1, 2])
@pytest.mark.parametrize("weight", WEIGHTS)
def test_atom_norms_below_dictionary_bound(k, weight):
    KD = dictionary_bound(2, k, weight)
    rng = np.random.default_rng(k)
    for _ in range(50):
        a = RidgeAtom(tuple(_unit(rng, 2)), float(rng.uniform(-2, 2)), k)
        assert atom_norm(a, weight) <= KD * (1 + 1e-12)
    # the bound is attained at b = 2 where the atom is 3^k-ish on the whole ball
    assert atom_norm(RidgeAtom((1.0, 0.0), 2.0, k), weight) == pytest.approx(KD, rel=1e-12)


@given(st.integers(0, 10 ** 6))
def test_bochner_riesz_below_lebesgue_for_nonnegative(seed):
    rng = np.random.default_rng(seed)
    a, b = _atom(rng, 2, int(rng.integers(0, 3))), _atom(rng, 2, int(rng.integers(0, 3)))
    br = reduced_ridge_inner_product(a, b, "bochner_riesz")
    leb = reduced_ridge_inner_product(a, b, "lebesgue")
    assert abs(br) <= abs(leb) + 1e-12
