import json

import numpy as np
import pytest
from hypothesis import given, strategies as st

from ridgeapprox.entropy import (assemble_gram, build_covering_net, build_ridge_packing,
                                 build_vanishing_moment_profile, certify_gram, certify_lower_bound,
                                 diagonal_lower_bound, interacting_pairs, k1_profile_norm, lattice_points)
from ridgeapprox.entropy import certificate as certmod
from ridgeapprox.errors import InvalidArgument, NumericalInconsistency, SupportViolation, TooLarge
from ridgeapprox.inner import dictionary_bound
from ridgeapprox.numerics.montecarlo import ball_monte_carlo
from ridgeapprox.numerics.quadrature import gauss_legendre_rule
from ridgeapprox.stratified import default_chart


# profile -----------------------------------------------------------------------

def _exact_moments(pp, rmax):
    """Moments by Gauss-Legendre of exact degree on every piece (independent of PiecewisePoly.moments)."""
    rule = gauss_legendre_rule((pp.degree + rmax) // 2 + 1)
    out = np.zeros(rmax + 1)
    for a, b in zip(pp.breaks[:-1], pp.breaks[1:]):
        t, w = rule.scaled(a, b)
        v = pp(t)
        out += [np.sum(w * t ** r * v) for r in range(rmax + 1)]
    return out


@pytest.mark.parametrize("d", [2, 3])
@pytest.mark.parametrize("k", [0, 1, 2])
def test_profile_moments_vanish(d, k):
    psi = build_vanishing_moment_profile(d, k)
    assert psi.moment_order == 2 * d - 2
    np.testing.assert_allclose(_exact_moments(psi.pieces, 2 * d - 2), 0.0, atol=1e-10)
    # the first non-vanishing moment really is nonzero
    assert abs(_exact_moments(psi.pieces, 2 * d - 1)[-1]) > 1e-6


@pytest.mark.parametrize("d", [2, 3])
@pytest.mark.parametrize("k", [0, 1])
def test_profile_normalisation_and_support(d, k):
    psi = build_vanishing_moment_profile(d, k)
    assert abs(psi.norm_k1 - 1.0) <= 1e-12
    assert abs(k1_profile_norm(psi.pieces, k) - 1.0) <= 1e-12
    lo, hi = psi.pieces.support()
    assert -1.0 <= lo and hi <= 1.0
    assert lo >= -(psi.core_width + psi.mollifier_width) - 1e-12
    assert hi <= psi.core_width + psi.mollifier_width + 1e-12
    assert psi(np.array([-1.0, 1.0])).tolist() == [0.0, 0.0]
    assert psi.l2_norm_sq() > 0


@pytest.mark.parametrize("k", [0, 1, 2])
def test_profile_smoothness(k):
    psi = build_vanishing_moment_profile(2, k)
    assert psi.smoothness == k + 2
    for nu in range(psi.smoothness + 1):
        jumps = psi.pieces.derivative(nu).jumps() if nu else psi.pieces.jumps()
        scale = max(1.0, np.abs(psi.pieces.derivative(nu).coefs).max())
        assert np.max(np.abs(jumps)) <= 1e-8 * scale, nu


@pytest.mark.parametrize("d", [2, 3])
def test_convolution_preserves_moments(d):
    psi = build_vanishing_moment_profile(d, 1)
    np.testing.assert_allclose(psi.moments(), psi.raw_moments, atol=1e-10)


def test_profile_support_violation():
    with pytest.raises(SupportViolation):
        build_vanishing_moment_profile(2, 0, 0.9, 0.2)
    with pytest.raises(InvalidArgument):
        build_vanishing_moment_profile(2, 0, -0.1, 0.2)


# packing -----------------------------------------------------------------------

def test_packing_counts():
    pk = build_ridge_packing(2, 0, 4, 0.25)
    assert pk.n_count == 20
    pk3 = build_ridge_packing(3, 0, 4, 0.25)
    assert pk3.n_count == 16 * 5


@pytest.mark.parametrize("N", [4, 8, 16])
@pytest.mark.parametrize("a", [0.05, 0.25])
def test_packing_fits_half_ball(N, a):
    pk = build_ridge_packing(2, 0, N, a)
    assert pk.delta * (N + 1) <= 0.5
    for l in pk.shifts:
        lo, hi = pk.member_profile(int(l)).support()
        assert -0.5 <= lo and hi <= 0.5


def test_packing_validation():
    with pytest.raises(InvalidArgument):
        build_ridge_packing(2, 0, 5, 0.25)
    with pytest.raises(InvalidArgument):
        build_ridge_packing(2, 0, 8, 0.3)


@pytest.fixture(scope="module")
def gram8():
    pk = build_ridge_packing(2, 0, 8, 0.25)
    return pk, assemble_gram(pk).to_array()


def test_same_direction_blocks_are_diagonal(gram8):
    pk, G = gram8
    nl = len(pk.shifts)
    for p in range(pk.directions.count):
        B = G[p * nl:(p + 1) * nl, p * nl:(p + 1) * nl]
        np.testing.assert_array_equal(B - np.diag(np.diag(B)), 0.0)


def test_diagonal_lower_bound(gram8):
    pk, G = gram8
    assert np.all(np.diag(G) >= diagonal_lower_bound(pk))


def test_gram_psd(gram8):
    _, G = gram8
    assert np.linalg.eigvalsh(G).min() >= -1e-8 * np.diag(G).max()


def test_gram_entries_vs_monte_carlo(gram8):
    pk, G = gram8
    rng = np.random.default_rng(0)
    off = np.argwhere(np.triu(G, 1) != 0)
    picks = off[rng.choice(len(off), 5, replace=False)]
    for t, (i, j) in enumerate(picks):
        (p, l), (q, m) = pk.members()[i], pk.members()[j]
        est, se = ball_monte_carlo(2, lambda x: pk.member_value(p, l, x) * pk.member_value(q, m, x),
                                   "bochner_riesz", 10 ** 7, t)
        assert abs(G[i, j] - est) <= 3 * se, (i, j)


def test_skipped_entries_vanish(gram8):
    # an entry dropped by the moment argument integrates to zero numerically
    pk, G = gram8
    nl = len(pk.shifts)
    dirs = pk.directions.dirs
    c = float(dirs[0] @ dirs[1])
    s = float(np.linalg.norm(dirs[1] - c * dirs[0]))
    kept = {tuple(t) for t in interacting_pairs(pk, c, s).tolist()}
    skipped = [(a, b) for a in range(nl) for b in range(nl) if (a, b) not in kept]
    a, b = skipped[len(skipped) // 2]
    la, lb = int(pk.shifts[a]), int(pk.shifts[b])
    est, se = ball_monte_carlo(2, lambda x: pk.member_value(0, la, x) * pk.member_value(1, lb, x),
                               "bochner_riesz", 10 ** 6, 9)
    assert G[a, nl + b] == 0.0
    assert abs(est) <= 3 * se + 1e-15


# certificates ------------------------------------------------------------------

@pytest.mark.parametrize("n", [1, 4, 25])
def test_identity_certificate(n):
    c = certify_gram(np.eye(n))
    assert c.bound_lemma == pytest.approx(1 / (2 * np.sqrt(n)), rel=1e-12)
    assert c.diag_dominant and c.mode == "corollary"
    assert c.bound_corollary == pytest.approx(1 / np.sqrt(8 * n), rel=1e-12)


def test_non_dominant_still_emits_lemma():
    G = np.array([[1.0, 0.6, 0.0], [0.6, 1.0, 0.0], [0.0, 0.0, 1.0]])
    c = certify_gram(G)
    assert not c.diag_dominant and c.mode == "lemma"
    assert c.bound_corollary is None
    assert c.bound_lemma == pytest.approx(0.5 * np.sqrt(0.4 / 3), rel=1e-12)
    assert c.bound == c.bound_lemma


def test_negative_eigenvalue_rejected():
    with pytest.raises(NumericalInconsistency):
        certify_gram(np.array([[1.0, 2.0], [2.0, 1.0]]))


def test_tiny_negative_eigenvalue_clamped():
    G = np.array([[1.0, 1.0], [1.0, 1.0]])
    G[0, 0] += 0.0
    G[1, 1] -= 1e-12
    c = certify_gram(G)
    assert c.lambda_min == 0.0 and c.lambda_clamped
    assert c.bound_lemma == 0.0


@given(st.integers(0, 10 ** 6), st.integers(2, 12))
def test_lemma_bound_below_half_min_norm(seed, n):
    rng = np.random.default_rng(seed)
    A = rng.standard_normal((n, n + 2))
    c = certify_gram(A @ A.T)
    assert c.bound_lemma <= 0.5 * np.sqrt(c.min_norm_sq / n) * (1 + 1e-12)
    if c.diag_dominant:
        assert c.lambda_min >= 0.5 * c.min_norm_sq * (1 - 1e-12)


@pytest.mark.parametrize("t", [0.5, 2.0])
def test_certificate_homogeneity(t):
    pk = build_ridge_packing(2, 0, 8, 0.25)
    pk_t = build_ridge_packing(2, 0, 8, 0.25, profile=pk.profile.scaled(t))
    c, ct = certify_lower_bound(pk), certify_lower_bound(pk_t)
    assert ct.bound_corollary == pytest.approx(t * c.bound_corollary, rel=1e-10)


def test_certificate_json():
    c = certify_lower_bound(build_ridge_packing(2, 0, 4, 0.25))
    doc = json.loads(c.to_json())
    for key in ("d", "k", "N", "a", "delta", "n_count", "min_norm_sq", "lambda_min", "diag_dominant",
                "bound_corollary", "bound_lemma"):
        assert key in doc
    assert doc["n_count"] == 20


def test_bisection_logic(monkeypatch):
    # stub the certifier so that dominance holds exactly for a <= 0.1
    def fake(packing, rule=None):
        G = np.eye(3)
        if packing.a > 0.1:
            G[0, 1] = G[1, 0] = 0.9
        return certmod.certify_gram(G, a=packing.a)
    monkeypatch.setattr(certmod, "certify_lower_bound", fake)
    a, certs = certmod.find_admissible_a(2, 0, [4, 6], steps=8)
    assert 0.1 - 0.125 / 2 ** 8 <= a <= 0.1
    assert all(c.diag_dominant for c in certs)


def test_admissible_a_real():
    a, certs = certmod.find_admissible_a(2, 0, [4, 8])
    assert a == 0.25
    assert all(c.diag_dominant for c in certs)


# covering nets -----------------------------------------------------------------

def test_lattice_points():
    L = lattice_points(1, 1.0, 0.1)
    assert len(L) == 21
    L2 = lattice_points(2, 1.0, 0.5)
    assert np.all(np.abs(L2).sum(axis=1) <= 1.5 + 1e-12)
    assert len(L2) == 2 * 3 ** 2 + 2 * 3 + 1   # |i| + |j| <= 3


@pytest.fixture(scope="module")
def nets():
    ch = default_chart(1, 0)
    return {e: build_covering_net(ch, 1, 1.0, e, seed=0) for e in (0.2, 0.1)}


def test_covering_radius_bound(nets):
    KD = dictionary_bound(1, 0, "lebesgue")
    for e, net in nets.items():
        assert net.radius <= KD * e + net.lattice_spacing
        assert net.radius <= net.radius_bound
        assert net.size <= net.dict_size * net.lattice_size


def test_covering_refinement(nets):
    assert nets[0.1].radius <= nets[0.2].radius / 0.99


def test_covering_two_terms():
    net = build_covering_net(default_chart(1, 1), 2, 1.0, 0.4, seed=1)
    assert net.size <= net.dict_size ** 2 * net.lattice_size
    assert net.radius <= net.radius_bound


def test_covering_guards():
    ch = default_chart(1, 0)
    with pytest.raises(TooLarge):
        build_covering_net(ch, 4, 1.0, 0.5)
    with pytest.raises(TooLarge):
        build_covering_net(ch, 3, 1.0, 0.05)
