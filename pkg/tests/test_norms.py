
import numpy as np
import pytest
from hypothesis import given, strategies as st
from scipy.integrate import quad, quad_vec

from ridgeapprox.dictionary import eval_combo
from ridgeapprox.errors import InvalidArgument
from ridgeapprox.norms import (FourierDensity, Profile1D, exponential_density, gaussian_density, k1_norm_1d,
                               peano_constant, peano_decompose, polynomial_shifts, ridge_superposition_bound,
                               spectral_barron_norm)
from ridgeapprox.piecewise import PiecewisePoly

X = np.linspace(-1, 1, 4001)[:, None]


def _cos_profile(w, k):
    """t -> cos(w t) with derivatives up to order k+1."""
    return Profile1D.analytic([lambda t, j=j: w ** j * np.cos(w * np.asarray(t) + j * np.pi / 2)
                               for j in range(k + 2)])


# K_1 norm ----------------------------------------------------------------------

def test_k1_examples():
    assert k1_norm_1d(PiecewisePoly.ramp(0.0, 1), 1) == pytest.approx(1.0, abs=1e-14)
    assert k1_norm_1d(PiecewisePoly.from_pieces([-1.0, 1.0], [[0.0, 1.0]]), 1) == pytest.approx(2.0, abs=1e-14)
    assert k1_norm_1d(_cos_profile(np.pi, 0), 0) == pytest.approx(5.0, abs=1e-12)


def test_k1_piecewise_cos_agrees_with_analytic():
    # a dense piecewise interpolant of cos(pi t) has nearly the same norm
    t = np.linspace(-1, 1, 401)
    from scipy.interpolate import CubicSpline
    cs = CubicSpline(t, np.cos(np.pi * t))
    pp = PiecewisePoly(cs.x, cs.c)
    assert k1_norm_1d(pp, 0) == pytest.approx(5.0, abs=1e-6)


def test_k1_missing_derivative():
    with pytest.raises(InvalidArgument):
        k1_norm_1d(Profile1D.analytic([np.cos]), 1)


def test_k1_rejects_jumps_below_order():
    with pytest.raises(InvalidArgument):
        k1_norm_1d(PiecewisePoly.ramp(0.0, 0), 1)


def _random_spline(seed, k):
    rng = np.random.default_rng(seed)
    pp = PiecewisePoly.from_pieces([-1.0, 1.0], [rng.standard_normal(k + 1)])
    for b in rng.uniform(-0.9, 0.9, 3):
        r = PiecewisePoly.ramp(-b, k).restrict_breaks(np.array([-1.0, b, 1.0]))
        pp = _add(pp, r.scale(rng.standard_normal()))
    return pp


def _add(f, g):
    br = np.union1d(f.breaks, g.breaks)
    deg = max(f.degree, g.degree)
    F = f.restrict_breaks(br)
    G = g.restrict_breaks(br)
    c = np.zeros((deg + 1, len(br) - 1))
    c[deg - F.degree:] += F.coefs
    c[deg - G.degree:] += G.coefs
    return PiecewisePoly(br, c)


@given(st.integers(0, 10 ** 6), st.integers(0, 3), st.floats(-5, 5))
def test_k1_homogeneous(seed, k, alpha):
    f = _random_spline(seed, k)
    assert k1_norm_1d(f.scale(alpha), k) == pytest.approx(abs(alpha) * k1_norm_1d(f, k), rel=1e-10, abs=1e-12)


@given(st.integers(0, 10 ** 6), st.integers(0, 10 ** 6), st.integers(0, 3))
def test_k1_triangle(s1, s2, k):
    f, g = _random_spline(s1, k), _random_spline(s2, k)
    assert k1_norm_1d(_add(f, g), k) <= k1_norm_1d(f, k) + k1_norm_1d(g, k) + 1e-10


@pytest.mark.parametrize("k", [0, 1, 2])
def test_exponential_profile_growth(k):
    ratios = []
    for w in (1, 2, 4, 8, 16):
        ratios.append(k1_norm_1d(_cos_profile(2 * np.pi * w, k), k) / (1 + w) ** (k + 1))
    # |f^(j)(-1)| <= (2 pi w)^j and TV <= int |f^(k+1)| <= 2 (2 pi w)^(k+1)
    assert max(ratios) <= (k + 3) * (2 * np.pi) ** (k + 1)
    assert min(ratios) > 0.1 * max(ratios)


# Peano synthesis ---------------------------------------------------------------

@pytest.mark.parametrize("k", [0, 1, 2, 3])
def test_peano_polynomials_exact(k):
    rng = np.random.default_rng(k)
    c = rng.standard_normal(k + 1)
    pp = PiecewisePoly.from_pieces([-1.0, 1.0], [c])
    combo = peano_decompose(pp, k, m=16)
    np.testing.assert_allclose(combo.coeffs[k + 1:], 0.0, atol=0)
    np.testing.assert_allclose(eval_combo(combo, X), np.polynomial.polynomial.polyval(X[:, 0], c), atol=1e-10)


@pytest.mark.parametrize("k", [1, 2, 3])
def test_peano_reproduces_own_atom(k):
    f = PiecewisePoly.ramp(-0.3, k)
    combo = peano_decompose(f, k, m=64)
    err = np.sqrt(np.mean((eval_combo(combo, X) - f(X[:, 0])) ** 2) * 2)
    assert err <= 1e-10


def test_peano_cos():
    combo = peano_decompose(_cos_profile(np.pi, 1), 1, m=1024)
    err = np.sqrt(np.mean((eval_combo(combo, X) - np.cos(np.pi * X[:, 0])) ** 2) * 2)
    assert err <= 1e-4


def test_peano_error_decreases_with_m():
    f = _cos_profile(np.pi, 1)
    errs = [np.sqrt(np.mean((eval_combo(peano_decompose(f, 1, m=m), X) - np.cos(np.pi * X[:, 0])) ** 2))
            for m in (32, 64, 128, 256)]
    assert all(b < a for a, b in zip(errs, errs[1:]))


@pytest.mark.parametrize("k", [0, 1, 2])
def test_peano_l1_budget(k):
    C = max(peano_constant(k), 1.0)
    f = _cos_profile(np.pi, k)
    combo = peano_decompose(f, k, m=512)
    assert combo.l1_budget <= C * k1_norm_1d(f, k) * (1 + 1e-3)
    g = _random_spline(5, k)
    assert peano_decompose(g, k, m=512).l1_budget <= C * k1_norm_1d(g, k) * (1 + 1e-3)


def test_peano_shifts():
    np.testing.assert_allclose(polynomial_shifts(1), [1.5, 2.0])
    assert peano_constant(0) == 1.0


def test_peano_direction():
    combo = peano_decompose(PiecewisePoly.ramp(0.0, 1), 1, direction=(0.6, 0.8), m=8)
    x = np.random.default_rng(0).uniform(-0.7, 0.7, (20, 2))
    np.testing.assert_allclose(eval_combo(combo, x), np.maximum(x @ [0.6, 0.8], 0), atol=1e-12)


# spectral Barron integral ------------------------------------------------------

def test_discrete_single_frequency():
    F = FourierDensity.discrete([[3.0, 4.0]], [1.0])
    assert spectral_barron_norm(F, 2.0) == 36.0


@given(st.integers(0, 10 ** 6))
def test_discrete_s0_is_total_mass(seed):
    rng = np.random.default_rng(seed)
    m = rng.standard_normal(5) + 1j * rng.standard_normal(5)
    F = FourierDensity.discrete(rng.standard_normal((5, 2)), m)
    assert spectral_barron_norm(F, 0.0) == pytest.approx(np.abs(m).sum(), rel=1e-15)


@pytest.mark.parametrize("width", [1.0, 10.0, 100.0])
def test_gaussian_mass_one(width):
    assert abs(spectral_barron_norm(gaussian_density(width), 0.0, R=10.0) - 1.0) <= 1e-6


def test_gaussian_moment_decreases_with_width():
    vals = [spectral_barron_norm(gaussian_density(w), 1.0, R=10.0) for w in (1.0, 10.0, 100.0, 1000.0)]
    assert all(b < a for a, b in zip(vals, vals[1:]))
    assert vals[-1] - 1.0 < 0.02


def test_gaussian_2d_mass_one():
    assert abs(spectral_barron_norm(gaussian_density(1.0, 2), 0.0, R=10.0) - 1.0) <= 1e-6


def test_exponential_density_closed_form():
    val = spectral_barron_norm(exponential_density(), 1.0, R=10.0)
    assert val == pytest.approx(2 * (1 / (2 * np.pi) + 1 / (4 * np.pi ** 2)), rel=1e-10)


def test_tail_required():
    F = FourierDensity.density(lambda x: np.exp(-np.abs(x).ravel()), 1)
    with pytest.raises(InvalidArgument):
        spectral_barron_norm(F, 0.0)


def test_non_radial_2d_density():
    # product of two 1-D Gaussians is radial; integrate it through the generic path
    F = FourierDensity.density(lambda xi: np.exp(-np.pi * np.sum(xi * xi, axis=1)), 2, tail_bound=0.0)
    assert spectral_barron_norm(F, 0.0, R=8.0) == pytest.approx(1.0, abs=1e-9)


# ridge superposition -------------------------------------------------------------

def test_superposition_single_ray():
    F = gaussian_density(1.0, 2)
    th, wt, R = 0.7, 0.25, 8.0
    val = ridge_superposition_bound(F, 0, ([th], [wt]), R=R)
    # oracle: g'(t) = int_0^R 2 pi i s e^{2 pi i t s} fhat(s) s ds by adaptive quadrature
    t = np.linspace(-1, 1, 2001)

    def gp(s):
        z = 2j * np.pi * s * np.exp(2j * np.pi * t * s) * F.radial_values(s) * s
        return np.concatenate([z.real, z.imag])
    v, _ = quad_vec(gp, 0, R, epsabs=1e-12)
    dg = np.abs(v[:len(t)] + 1j * v[len(t):])
    tv = np.sum(0.5 * (dg[1:] + dg[:-1]) * np.diff(t))
    g0 = quad(lambda s: np.cos(-2 * np.pi * s) * F.radial_values(s) * s, 0, R)[0], \
        quad(lambda s: np.sin(-2 * np.pi * s) * F.radial_values(s) * s, 0, R)[0]
    ref = wt * (abs(complex(*g0)) + tv)
    assert val == pytest.approx(ref, rel=1e-5)


def test_superposition_angular_stability():
    F = gaussian_density(1.0, 2)
    a = ridge_superposition_bound(F, 0, 32)
    b = ridge_superposition_bound(F, 0, 64)
    assert abs(a - b) <= 0.01 * b
    assert np.isfinite(a) and a > 0


def test_superposition_linear():
    F = gaussian_density(1.0, 2)
    a = ridge_superposition_bound(F, 1, 8)
    assert ridge_superposition_bound(F.scaled(2.0), 1, 8) == pytest.approx(2 * a, rel=1e-10)


def test_superposition_needs_2d_density():
    with pytest.raises(InvalidArgument):
        ridge_superposition_bound(gaussian_density(1.0, 1), 0, 8)
