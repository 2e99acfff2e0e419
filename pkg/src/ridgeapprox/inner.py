"""L2 inner products and distances over the unit ball.

All ridge integrals are reduced to at most two dimensions: with
c = omega1.omega2 and s = sqrt(1 - c^2),

    <f(omega1.x), g(omega2.x)> = int f(y) int g(c y + s v) W(1 - y^2 - v^2) dv dy,

where W(r) = C r^p is the weight integrated over the remaining d-2 directions
(see ``numerics.weights.cross_slice_factor``).  For parallel directions the
inner integral collapses to the slice weight par_const (1-y^2)^{p+1/2}.
"""
from __future__ import annotations

from dataclasses import dataclass
from functools import lru_cache
from math import gamma, pi, sqrt

import numpy as np

from . import kernels
from .dictionary import SPECTRAL, RidgeAtom, SparseCombo
from .errors import AccuracyFailure, InvalidArgument
from .numerics.quadrature import QuadratureRule, gauss_legendre_rule
from .numerics.weights import BOCHNER_RIESZ, LEBESGUE, check_weight, cross_slice_factor
from .piecewise import PiecewisePoly

DEFAULT_OUTER_NODES = 24


@dataclass(frozen=True)
class MeasureWeight:
    tag: str = BOCHNER_RIESZ

    def __post_init__(self):
        check_weight(self.tag)


def weight_tag(weight) -> str:
    if weight is None:
        return BOCHNER_RIESZ
    return check_weight(weight)


@lru_cache(maxsize=None)
def weight_params(d: int, tag: str):
    """(C, p, par_const): cross weight C r^p and parallel slice constant."""
    if d == 1:
        # the "ball" is [-1, 1]; only parallel pairs exist
        p = -0.5 if tag == LEBESGUE else 0.0
        return 1.0, p, 1.0
    C, p = cross_slice_factor(d, tag)
    # int_{-1}^{1} (1 - t^2)^p dt = B(1/2, p+1)
    par_const = C * sqrt(pi) * gamma(p + 1.0) / gamma(p + 1.5)
    return C, p, par_const


@dataclass(frozen=True)
class RidgeFunction:
    """x -> profile(direction . x) for a piecewise polynomial profile."""

    direction: np.ndarray
    profile: PiecewisePoly

    @property
    def d(self):
        return len(self.direction)


def as_ridge_function(obj) -> RidgeFunction:
    if isinstance(obj, RidgeFunction):
        return obj
    if isinstance(obj, RidgeAtom):
        return RidgeFunction(obj.omega, PiecewisePoly.ramp(obj.offset, obj.power))
    raise InvalidArgument(f"expected a ridge atom or ridge function, got {type(obj).__name__}")


def _check_unit(w):
    if abs(np.linalg.norm(w) - 1.0) > 1e-12:
        raise InvalidArgument("ridge directions must be unit vectors")


def _cs(w1, w2):
    c = float(np.dot(w1, w2))
    s = float(np.linalg.norm(w2 - c * w1))
    return float(np.clip(c, -1.0, 1.0)), s


def _inner_rule(deg: int, p: float, outer: QuadratureRule):
    """Inner rule: exact Gauss-Legendre for polynomial integrands, otherwise the
    outer rule (used with the sine map)."""
    if float(p).is_integer():
        return gauss_legendre_rule(max(1, (deg + 2 * int(p)) // 2 + 1)), False
    return outer, True


def reduced_ridge_inner_product(a1, a2, weight=BOCHNER_RIESZ, rule: QuadratureRule | None = None) -> float:
    """Weighted L2 inner product of two ridge functions over the unit ball."""
    f = as_ridge_function(a1)
    g = as_ridge_function(a2)
    if f.d != g.d:
        raise InvalidArgument("ridge functions must share the ambient dimension")
    _check_unit(f.direction)
    _check_unit(g.direction)
    tag = weight_tag(weight)
    rule = rule or gauss_legendre_rule(DEFAULT_OUTER_NODES)
    C, p, par_const = weight_params(f.d, tag)
    c, s = _cs(np.asarray(f.direction, float), np.asarray(g.direction, float))
    inner, sine = _inner_rule(g.profile.degree, p, rule)
    fb, fc = f.profile.kernel_arrays()
    gb, gc = g.profile.kernel_arrays()
    return float(kernels.pair_integral(fb, fc, gb, gc, c, s, C, p, par_const,
                                       rule.nodes, rule.weights, inner.nodes, inner.weights, sine))


def atom_gram(dirs1, b1, k: int, weight=BOCHNER_RIESZ, dirs2=None, b2=None,
              n_outer: int = DEFAULT_OUTER_NODES) -> np.ndarray:
    """Gram (or cross-Gram) matrix of ReLU^k ridge atoms given as arrays."""
    dirs1 = np.atleast_2d(np.asarray(dirs1, dtype=float))
    d = dirs1.shape[1]
    tag = weight_tag(weight)
    C, p, par_const = weight_params(d, tag)
    outer = gauss_legendre_rule(n_outer)
    inner, sine = _inner_rule(k, p, outer)
    symmetric = dirs2 is None
    if symmetric:
        dirs2, b2 = dirs1, b1
    return kernels.ridge_atom_gram(dirs1, np.asarray(b1, float), np.atleast_2d(np.asarray(dirs2, float)),
                                   np.asarray(b2, float), int(k), C, p, par_const,
                                   outer.nodes, outer.weights, inner.nodes, inner.weights, sine, symmetric)


def combo_atom_gram(c: SparseCombo, weight=BOCHNER_RIESZ, n_outer: int = DEFAULT_OUTER_NODES) -> np.ndarray:
    ks = {a.power for a in c.atoms}
    if len(ks) != 1:
        raise InvalidArgument("atom Gram needs a single power k")
    return atom_gram(c.directions(), c.offsets(), ks.pop(), weight, n_outer=n_outer)


# spectral kind ---------------------------------------------------------------

def exponential_ball_integral(xi_norm, d: int, weight=BOCHNER_RIESZ, nodes: int = 32) -> np.ndarray:
    """int_B exp(2 pi i xi.x) W(x) dx as a function of |xi| (real by symmetry).

    Evaluated as int_{-1}^{1} cos(2 pi |xi| y) slice(y) dy with panels small
    enough to resolve the oscillation.
    """
    tag = weight_tag(weight)
    C, p, par_const = weight_params(d, tag)
    xi = np.atleast_1d(np.asarray(xi_norm, dtype=float))
    rule = gauss_legendre_rule(nodes)
    out = np.empty_like(xi)
    for i, r in enumerate(xi):
        panels = max(2, int(np.ceil(4.0 * r)) + 2)
        br = np.linspace(-1.0, 1.0, panels + 1)
        m = 0.5 * (br[:-1] + br[1:])[:, None]
        h = 0.5 * np.diff(br)[:, None]
        # sine map on the two end panels tames the (1-y^2)^{p+1/2} endpoints
        phi = 0.5 * pi * rule.nodes
        y = m + h * np.sin(phi)
        w = 0.5 * pi * rule.weights * h * np.cos(phi)
        vals = np.cos(2 * pi * r * y) * par_const * np.clip(1.0 - y * y, 0.0, None) ** (p + 0.5)
        out[i] = np.sum(vals * w)
    return out


def spectral_gram(freqs1, freqs2, d: int, weight=BOCHNER_RIESZ) -> np.ndarray:
    f1 = np.atleast_2d(freqs1)
    f2 = np.atleast_2d(freqs2)
    diff = np.linalg.norm(f1[:, None, :] - f2[None, :, :], axis=-1)
    uniq, inv = np.unique(np.round(diff, 15), return_inverse=True)
    vals = exponential_ball_integral(uniq, d, weight)
    return vals[inv].reshape(diff.shape)


# distances -------------------------------------------------------------------

def _joint(c1: SparseCombo, c2: SparseCombo):
    if c1.kind is not None and c2.kind is not None and c1.kind != c2.kind:
        raise InvalidArgument("cannot compare combos of different atom kinds")
    kind = c1.kind or c2.kind
    joint = SparseCombo(c1.atoms + c2.atoms, np.concatenate([c1.coeffs, -np.asarray(c2.coeffs)]),
                        _kind=kind)
    return joint.merged()


def combo_norm_sq(c: SparseCombo, weight=BOCHNER_RIESZ, rule: QuadratureRule | None = None) -> float:
    c = c.merged()
    keep = np.asarray(c.coeffs) != 0
    if not np.any(keep):
        return 0.0
    atoms = [a for a, k in zip(c.atoms, keep) if k]
    coeffs = np.asarray(c.coeffs)[keep]
    n_outer = rule.size if rule is not None else DEFAULT_OUTER_NODES
    if c.kind == SPECTRAL:
        freqs = np.array([a.frequency for a in atoms])
        amps = np.array([a.amplitude for a in atoms])
        G = spectral_gram(freqs, freqs, atoms[0].d, weight)
        v = amps * coeffs
        return float(np.real(np.conj(v) @ G @ v))
    by_k: dict = {}
    for i, a in enumerate(atoms):
        by_k.setdefault(a.power, []).append(i)
    dirs = np.array([a.direction for a in atoms])
    offs = np.array([a.offset for a in atoms])
    total = 0.0
    groups = sorted(by_k)
    for gi, ka in enumerate(groups):
        ia = by_k[ka]
        G = atom_gram(dirs[ia], offs[ia], ka, weight, n_outer=n_outer)
        total += coeffs[ia] @ G @ coeffs[ia]
        for kb in groups[gi + 1:]:
            ib = by_k[kb]
            total += 2.0 * _mixed_power(dirs[ia], offs[ia], ka, dirs[ib], offs[ib], kb,
                                        coeffs[ia], coeffs[ib], weight, rule)
    return float(total)


def _mixed_power(d1, o1, k1, d2, o2, k2, c1, c2, weight, rule):
    acc = 0.0
    for w, b, a in zip(d1, o1, c1):
        f = RidgeAtom(tuple(w), b, k1)
        for w2, b2, a2 in zip(d2, o2, c2):
            acc += a * a2 * reduced_ridge_inner_product(f, RidgeAtom(tuple(w2), b2, k2), weight, rule)
    return acc


def combo_distance(c1: SparseCombo, c2: SparseCombo, weight=BOCHNER_RIESZ,
                   rule: QuadratureRule | None = None) -> float:
    """L2(weight) distance between two combos over the unit ball."""
    if c1.kind is not None and c2.kind is not None and c1.kind != c2.kind:
        raise InvalidArgument("cannot compare combos of different atom kinds")
    if c1.d is not None and c2.d is not None and c1.d != c2.d:
        raise InvalidArgument("combos live in different dimensions")
    return sqrt(max(combo_norm_sq(_joint(c1, c2), weight, rule), 0.0))


def quadratic_distance(G: np.ndarray, coeff_a, coeff_b) -> float:
    """sqrt((a-b)^T G (a-b)) for coefficient vectors on a common atom list."""
    diff = np.asarray(coeff_a, dtype=float) - np.asarray(coeff_b, dtype=float)
    return sqrt(max(float(diff @ G @ diff), 0.0))


def atom_norm(atom: RidgeAtom, weight=BOCHNER_RIESZ) -> float:
    return sqrt(max(atom_gram(atom.omega[None, :], [atom.offset], atom.power, weight)[0, 0], 0.0))


@lru_cache(maxsize=None)
def dictionary_bound(d: int, k: int, weight=BOCHNER_RIESZ, grid: int = 401) -> float:
    """K_D = sup over unit omega and b in [-2, 2] of the atom norm.

    The norm does not depend on omega (rotation invariance of the weight), so
    the supremum is a maximum over a dense offset grid.
    """
    tag = weight_tag(weight)
    w = np.zeros((grid, d))
    w[:, 0] = 1.0
    b = np.linspace(-2.0, 2.0, grid)
    C, p, par_const = weight_params(d, tag)
    outer = gauss_legendre_rule(DEFAULT_OUTER_NODES)
    inner, sine = _inner_rule(k, p, outer)
    diag = np.array([
        kernels.ridge_atom_gram(w[i:i + 1], b[i:i + 1], w[i:i + 1], b[i:i + 1], k, C, p, par_const,
                                outer.nodes, outer.weights, inner.nodes, inner.weights, sine, True)[0, 0]
        for i in range(grid)])
    return float(np.sqrt(diag.max()))


def check_convergence(a, b, scale, tol=1e-9, what="quadrature"):
    if not np.all(np.abs(np.asarray(a) - np.asarray(b)) <= tol * max(scale, 1e-300)):
        raise AccuracyFailure(f"{what} did not converge to {tol:g} relative accuracy")
