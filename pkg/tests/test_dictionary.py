import json

import numpy as np
import pytest
from hypothesis import given, strategies as st

from ridgeapprox.dictionary import (RidgeAtom, SparseCombo, SpectralAtom, empty_combo, eval_atom,
                                    eval_combo, ridge_combo)
from ridgeapprox.errors import InvalidArgument, SupportViolation


def test_eval_atom_examples():
    assert eval_atom(RidgeAtom((1.0, 0.0), 0.0, 1), [0.5, 0.0]) == 0.5
    assert eval_atom(RidgeAtom((1.0, 0.0), -0.8, 2), [0.5, 0.0]) == 0.0
    v = eval_atom(SpectralAtom((0.0, 0.0), 1.0), [0.3, -0.2])
    assert v == 1.0


def test_heaviside_is_right_continuous():
    assert eval_atom(RidgeAtom((1.0,), -0.25, 0), [0.25]) == 1.0
    assert eval_atom(RidgeAtom((1.0,), -0.25, 0), [0.2499]) == 0.0


def test_spectral_atom_value():
    a = SpectralAtom((1.0, 0.0), 2.0)
    x = np.array([0.25, 0.5])
    np.testing.assert_allclose(eval_atom(a, x), np.exp(2j * np.pi * 0.25) / 4.0, atol=1e-15)


def test_atom_validation():
    with pytest.raises(InvalidArgument):
        RidgeAtom((1.0, 1.0), 0.0, 1)
    with pytest.raises(InvalidArgument):
        RidgeAtom((1.0, 0.0), 2.5, 1)
    with pytest.raises(InvalidArgument):
        RidgeAtom((1.0, 0.0), 0.0, -1)
    with pytest.raises(InvalidArgument):
        SpectralAtom((1.0,), -0.5)


def test_points_outside_ball_rejected():
    with pytest.raises(SupportViolation):
        eval_atom(RidgeAtom((1.0, 0.0), 0.0, 1), [1.0, 0.5])


def test_combo_examples():
    x = np.random.default_rng(0).uniform(-0.7, 0.7, (20, 2))
    np.testing.assert_array_equal(eval_combo(empty_combo(), x), 0.0)
    a = RidgeAtom((0.6, 0.8), 0.3, 2)
    one = SparseCombo((a,), [1.0])
    np.testing.assert_array_equal(eval_combo(one, x), eval_atom(a, x))
    two = SparseCombo((a, a), [1.0, -1.0])
    np.testing.assert_array_equal(eval_combo(two, x), 0.0)


def test_l1_budget_enforced():
    a = RidgeAtom((1.0, 0.0), 0.0, 1)
    with pytest.raises(InvalidArgument):
        SparseCombo((a, a), [0.7, -0.6], l1_budget=1.0)
    c = SparseCombo((a, a), [0.5, -0.5], l1_budget=1.0)
    assert c.l1_norm == 1.0 and c.l1_budget == 1.0


def test_mixed_kinds_rejected():
    with pytest.raises(InvalidArgument):
        SparseCombo((RidgeAtom((1.0, 0.0), 0.0, 1), SpectralAtom((0.0, 1.0), 0.0)), [1.0, 1.0])


def test_mixed_dimensions_rejected():
    with pytest.raises(InvalidArgument):
        SparseCombo((RidgeAtom((1.0, 0.0), 0.0, 1), RidgeAtom((1.0,), 0.0, 1)), [1.0, 1.0])


def _random_combo(seed, n=6, d=2, k=1):
    rng = np.random.default_rng(seed)
    D = rng.standard_normal((n, d))
    D /= np.linalg.norm(D, axis=1, keepdims=True)
    return ridge_combo(D, rng.uniform(-2, 2, n), rng.standard_normal(n), k)


@given(st.integers(0, 2 ** 32 - 1), st.integers(1, 8), st.integers(1, 3), st.integers(0, 3))
def test_json_round_trip_bit_exact(seed, n, d, k):
    c = _random_combo(seed, n, d, k)
    back = SparseCombo.from_json(c.to_json())
    np.testing.assert_array_equal(back.coeffs, c.coeffs)
    np.testing.assert_array_equal(back.directions(), c.directions())
    np.testing.assert_array_equal(back.offsets(), c.offsets())
    assert back.l1_budget == c.l1_budget
    assert back.to_json() == c.to_json()


def test_json_schema_fields():
    doc = json.loads(_random_combo(1).to_json())
    assert {"kind", "d", "k", "atoms", "coeffs", "l1_budget"} <= set(doc)
    assert set(doc["atoms"][0]) == {"omega", "b"}


def test_spectral_json_round_trip():
    rng = np.random.default_rng(3)
    atoms = tuple(SpectralAtom(tuple(rng.standard_normal(2)), 1.5) for _ in range(4))
    c = SparseCombo(atoms, rng.standard_normal(4) + 1j * rng.standard_normal(4))
    back = SparseCombo.from_json(c.to_json())
    np.testing.assert_array_equal(back.coeffs, c.coeffs)
    assert back.kind == "spectral"
    assert all(a.decay == 1.5 for a in back.atoms)


def test_merged_sums_duplicates():
    a = RidgeAtom((1.0, 0.0), 0.1, 1)
    b = RidgeAtom((0.0, 1.0), 0.1, 1)
    m = SparseCombo((a, b, a), [1.0, 2.0, 0.5]).merged()
    assert len(m) == 2
    x = np.random.default_rng(0).uniform(-0.6, 0.6, (10, 2))
    np.testing.assert_allclose(eval_combo(m, x), eval_combo(SparseCombo((a, b, a), [1.0, 2.0, 0.5]), x))


@given(st.floats(-3, 3))
def test_scaled_is_linear(alpha):
    c = _random_combo(5)
    x = np.random.default_rng(1).uniform(-0.6, 0.6, (10, 2))
    np.testing.assert_allclose(eval_combo(c.scaled(alpha), x), alpha * eval_combo(c, x), atol=1e-12)
