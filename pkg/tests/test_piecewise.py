import numpy as np
import pytest
from hypothesis import given, strategies as st
from scipy.integrate import quad

from ridgeapprox.errors import InvalidArgument
from ridgeapprox.piecewise import PiecewisePoly, taylor_shift


def _random_pp(seed, pieces=4, deg=3):
    rng = np.random.default_rng(seed)
    br = np.sort(rng.uniform(-1, 1, pieces - 1))
    br = np.concatenate([[-1.0], br, [1.0]])
    return PiecewisePoly(br, rng.standard_normal((deg + 1, pieces)))


def test_taylor_shift_matches_polyval():
    desc = np.array([2.0, -1.0, 0.5, 3.0])
    u = np.linspace(-1, 1, 7)
    np.testing.assert_allclose(np.polyval(taylor_shift(desc, 0.3), u), np.polyval(desc, u + 0.3), atol=1e-13)


def test_from_pieces_uses_global_variable():
    f = PiecewisePoly.from_pieces([-1.0, 0.0, 1.0], [[1.0, 2.0], [0.0, 0.0, 3.0]])
    np.testing.assert_allclose(f([-0.5, 0.5]), [1.0 - 1.0, 0.75])


@pytest.mark.parametrize("k", [0, 1, 2, 3])
@pytest.mark.parametrize("b", [-1.5, -0.3, 0.0, 0.7, 1.4])
def test_ramp_values(k, b):
    t = np.linspace(-1, 1, 41)
    expect = np.where(t + b >= 0, 1.0, 0.0) if k == 0 else np.maximum(t + b, 0.0) ** k
    np.testing.assert_allclose(PiecewisePoly.ramp(b, k)(t), expect, atol=1e-13)


def test_zero_outside_domain():
    f = PiecewisePoly.from_pieces([-1.0, 1.0], [[1.0]])
    assert f(1.5) == 0.0 and f(-1.01) == 0.0


def test_bad_breaks_rejected():
    with pytest.raises(InvalidArgument):
        PiecewisePoly([0.0, 0.0, 1.0], np.ones((1, 2)))
    with pytest.raises(InvalidArgument):
        PiecewisePoly([0.0, 1.0], np.ones((1, 2)))


@pytest.mark.parametrize("seed", range(4))
def test_integrate_vs_quad(seed):
    f = _random_pp(seed)
    ref = sum(quad(lambda t: float(f(t)), a, b)[0] for a, b in zip(f.breaks[:-1], f.breaks[1:]))
    assert abs(f.integrate() - ref) < 1e-12


def test_moments_of_legendre_p3():
    # P3 is orthogonal to 1, t, t^2
    f = PiecewisePoly.from_pieces([-1.0, 1.0], [[0.0, -1.5, 0.0, 2.5]])
    m = f.moments(3)
    np.testing.assert_allclose(m[:3], 0.0, atol=1e-15)
    assert abs(m[3] - 2 * 2.5 / 7 + 2 * 1.5 / 5) < 1e-14


def test_total_variation_examples():
    # |t| on [-1, 1] has variation 2; a unit step has variation 1
    assert abs(PiecewisePoly.from_pieces([-1.0, 0.0, 1.0], [[0, -1], [0, 1]]).total_variation() - 2.0) < 1e-14
    assert abs(PiecewisePoly.ramp(0.2, 0).total_variation() - 1.0) < 1e-14


@pytest.mark.parametrize("seed", range(3))
def test_l1_norm_vs_quad(seed):
    f = _random_pp(seed)
    ref = 0.0
    for i, (a, b) in enumerate(zip(f.breaks[:-1], f.breaks[1:])):
        r = np.roots(f.coefs[:, i])
        kinks = [float(z.real) + a for z in r if abs(z.imag) < 1e-12 and 0 < z.real < b - a]
        ref += quad(lambda t: abs(float(f(t))), a, b, points=kinks or None, epsabs=1e-14, limit=200)[0]
    assert abs(f.l1_norm() - ref) < 1e-12


def test_box_convolve_vs_quad():
    f = _random_pp(7)
    h = 0.3
    g = f.box_convolve(h)
    for t in np.linspace(-1.1, 1.1, 9):
        ref = quad(lambda s: float(f(s)), t - h / 2, t + h / 2, points=list(f.breaks), limit=100)[0] / h
        assert abs(float(g(t)) - ref) < 1e-12


@given(st.floats(0.05, 0.5), st.integers(0, 3))
def test_box_convolve_preserves_moments(h, seed):
    f = _random_pp(seed)
    # convolving with a symmetric unit-mass kernel keeps moments 0 and 1
    np.testing.assert_allclose(f.box_convolve(h).moments(1), f.moments(1), atol=1e-12)


@given(st.floats(0.2, 3.0), st.floats(-1.0, 1.0))
def test_compose_affine(alpha, beta):
    f = _random_pp(3)
    g = f.compose_affine(alpha, beta)
    t = np.linspace(*g.domain, 13)[1:-1]
    np.testing.assert_allclose(g(t), f(alpha * t + beta), atol=1e-10)


def test_derivative_and_one_sided():
    f = PiecewisePoly.ramp(0.0, 1)
    assert f.one_sided(0.0, 1, 1) == 1.0
    assert f.one_sided(0.0, -1, 1) == 0.0
    np.testing.assert_allclose(f.derivative()(np.array([-0.5, 0.5])), [0.0, 1.0])


def test_support():
    f = PiecewisePoly.ramp(-0.5, 1)
    assert f.support() == (0.5, 1.0)
    assert PiecewisePoly.zero().support() is None
