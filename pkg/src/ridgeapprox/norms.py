"""K_1 norms in one dimension, Peano synthesis, and spectral Barron integrals."""
from __future__ import annotations

from dataclasses import dataclass
from math import comb, factorial, gamma, pi
from typing import Callable, Sequence

import numpy as np
from scipy.optimize import brentq
from scipy.special import gammaincc

from .dictionary import RidgeAtom, SparseCombo, SpectralAtom
from .errors import AccuracyFailure, BasisFailure, InvalidArgument
from .numerics.quadrature import QuadratureRule, gauss_legendre_rule
from .numerics.weights import sphere_area
from .piecewise import PiecewisePoly

TV_PANELS = 4096
JUMP_TOL = 1e-10


@dataclass(frozen=True)
class Profile1D:
    """A profile on [-1, 1]: exact piecewise polynomial, or evaluators of
    f, f', ..., f^{(r)} (``derivs[j]`` maps an array of t to f^{(j)}(t))."""

    pieces: PiecewisePoly | None = None
    derivs: tuple | None = None

    @classmethod
    def piecewise(cls, pp: PiecewisePoly) -> "Profile1D":
        return cls(pieces=_clip_unit(pp))

    @classmethod
    def analytic(cls, derivs: Sequence[Callable]) -> "Profile1D":
        if len(derivs) < 1:
            raise InvalidArgument("need at least the function itself")
        return cls(derivs=tuple(derivs))

    @property
    def is_piecewise(self) -> bool:
        return self.pieces is not None

    def __call__(self, t, nu: int = 0):
        if self.is_piecewise:
            return self.pieces(t, nu)
        self._require(nu)
        return np.asarray(self.derivs[nu](np.asarray(t, dtype=float)))

    def _require(self, order: int):
        if not self.is_piecewise and len(self.derivs) <= order:
            raise InvalidArgument(f"profile supplies derivatives up to order {len(self.derivs) - 1}, "
                                  f"order {order} is needed")

    def at_left(self, nu: int):
        if self.is_piecewise:
            return self.pieces.one_sided(-1.0, 1, nu)
        return complex(np.asarray(self.derivs[nu](np.array([-1.0])))[0])


def as_profile(f) -> Profile1D:
    if isinstance(f, Profile1D):
        return f
    if isinstance(f, PiecewisePoly):
        return Profile1D.piecewise(f)
    if callable(f):
        return Profile1D.analytic([f])
    return Profile1D.analytic(list(f))


def _clip_unit(pp: PiecewisePoly) -> PiecewisePoly:
    inner = pp.breaks[(pp.breaks > -1.0) & (pp.breaks < 1.0)]
    return pp.restrict_breaks(np.concatenate([[-1.0], inner, [1.0]]))


def _check_lower_continuity(pp: PiecewisePoly, k: int):
    for j in range(k):
        jumps = pp.derivative(j).jumps()
        scale = max(1.0, float(np.max(np.abs(pp.coefs))))
        if jumps.size and np.max(np.abs(jumps)) > JUMP_TOL * scale:
            raise InvalidArgument(f"derivative of order {j} < k={k} jumps; profile is not in K_1")


def _analytic_tv(fk: Callable, fk1: Callable, panels: int) -> float:
    """Variation of f^{(k)} on [-1, 1] given f^{(k+1)}.

    Real profiles: sum of |increments| between sign changes of f^{(k+1)}
    (located by Brent's method).  Complex profiles: int |f^{(k+1)}|.
    """
    x = np.linspace(-1.0, 1.0, panels + 1)
    dv = np.asarray(fk1(x))
    if np.iscomplexobj(dv) and np.any(np.imag(dv) != 0):
        rule = gauss_legendre_rule(8)
        mid = 0.5 * (x[:-1] + x[1:])[:, None]
        h = 0.5 * np.diff(x)[:, None]
        t = mid + h * rule.nodes[None, :]
        return float(np.sum(np.abs(np.asarray(fk1(t.ravel())).reshape(t.shape)) * h * rule.weights))
    dv = np.real(dv)
    g = lambda t: float(np.real(np.asarray(fk1(np.array([t])))[0]))
    pts = [-1.0]
    for i in range(panels):
        a, b = dv[i], dv[i + 1]
        if a == 0.0 and 0 < i:
            pts.append(x[i])
        elif a * b < 0:
            pts.append(brentq(g, x[i], x[i + 1], xtol=1e-15))
    pts.append(1.0)
    vals = np.real(np.asarray(fk(np.unique(pts))))
    return float(np.sum(np.abs(np.diff(vals))))


def k1_norm_1d(f, k: int, tv_panels: int = TV_PANELS) -> float:
    """sum_{j<k} |f^{(j)}(-1)| + |f^{(k)}(-1)| + TV(f^{(k)}; [-1, 1])."""
    if int(k) != k or k < 0:
        raise InvalidArgument(f"k must be a nonnegative integer, got {k!r}")
    f = as_profile(f)
    if f.is_piecewise:
        pp = f.pieces
        _check_lower_continuity(pp, k)
        boundary = sum(abs(pp.one_sided(-1.0, 1, j)) for j in range(k + 1))
        return float(boundary + pp.derivative(k).total_variation())
    f._require(k + 1)
    boundary = sum(abs(f.at_left(j)) for j in range(k + 1))
    return float(boundary + _analytic_tv(f.derivs[k], f.derivs[k + 1], tv_panels))


# Peano synthesis -----------------------------------------------------------------

def polynomial_shifts(k: int) -> np.ndarray:
    """b_i = 1 + i/(k+1), i = 1..k+1: distinct points of (1, 2]."""
    return 1.0 + np.arange(1, k + 2) / (k + 1.0)


def boundary_basis_matrix(k: int) -> np.ndarray:
    """A[j, i] = coefficient of (t+1)^j in (t + b_i)^k = ((t+1) + (b_i - 1))^k."""
    b = polynomial_shifts(k)
    A = np.zeros((k + 1, k + 1))
    for i, bi in enumerate(b):
        for j in range(k + 1):
            A[j, i] = comb(k, j) * (bi - 1.0) ** (k - j)
    return A


def peano_constant(k: int) -> float:
    """Max column l1 norm of the boundary change of basis, scaled by the
    Taylor factors: l1 of the boundary atoms <= this * sum_j |f^{(j)}(-1)|."""
    Ainv = np.linalg.inv(boundary_basis_matrix(k))
    D = np.diag([1.0 / factorial(j) for j in range(k + 1)])
    return float(np.max(np.sum(np.abs(Ainv @ D), axis=0)))


def _panel_nodes(breaks: np.ndarray, m: int):
    """Midpoint rule with m nodes spread over the pieces in proportion to length."""
    lengths = np.diff(breaks)
    counts = np.maximum(1, np.round(m * lengths / lengths.sum()).astype(int))
    while counts.sum() > max(m, len(lengths)):
        counts[np.argmax(counts)] -= 1
    xs, ws = [], []
    for a, L, c in zip(breaks[:-1], lengths, counts):
        h = L / c
        xs.append(a + h * (np.arange(c) + 0.5))
        ws.append(np.full(c, h))
    return np.concatenate(xs), np.concatenate(ws)


def peano_decompose(f, k: int, direction=(1.0,), m: int = 256) -> SparseCombo:
    """Ridge combo x -> f(omega.x) from the Peano kernel formula:

        f(t) = sum_{j<=k} f^{(j)}(-1)/j! (t+1)^j + int f^{(k+1)}(b)/k! sigma_k(t - b) db,

    with the polynomial written in the atoms sigma_k(t + b_i) and the integral
    discretised by m midpoint atoms (plus exact atoms at jumps of f^{(k)} for
    piecewise profiles).
    """
    if int(k) != k or k < 0:
        raise InvalidArgument(f"k must be a nonnegative integer, got {k!r}")
    if int(m) != m or m < 1:
        raise InvalidArgument(f"m must be a positive integer, got {m!r}")
    omega = tuple(float(t) for t in np.ravel(direction))
    f = as_profile(f)
    A = boundary_basis_matrix(k)
    if np.linalg.cond(A) > 1e12:
        raise BasisFailure("boundary polynomial basis is numerically singular")
    taylor = np.array([np.real(f.at_left(j)) / factorial(j) for j in range(k + 1)])
    poly_coef = np.linalg.solve(A, taylor)
    atoms = [RidgeAtom(omega, float(b), k) for b in polynomial_shifts(k)]
    coeffs = list(poly_coef)
    kf = factorial(k)
    if f.is_piecewise:
        pp = f.pieces
        _check_lower_continuity(pp, k)
        x, w = _panel_nodes(pp.breaks, m)
        dens = pp.derivative(k + 1)(x)
        jumps = pp.derivative(k).jumps()
        for b, J in zip(pp.breaks[1:-1], jumps):
            if J != 0.0:
                atoms.append(RidgeAtom(omega, -float(b), k))
                coeffs.append(J / kf)
    else:
        f._require(k + 1)
        x, w = _panel_nodes(np.array([-1.0, 1.0]), m)
        dens = np.real(np.asarray(f.derivs[k + 1](x)))
    for b, wi, di in zip(x, w, dens):
        atoms.append(RidgeAtom(omega, -float(b), k))
        coeffs.append(wi * di / kf)
    coeffs = np.asarray(coeffs, dtype=float)
    return SparseCombo(tuple(atoms), coeffs, float(np.sum(np.abs(coeffs))), _kind="ridge")


# spectral norms --------------------------------------------------------------

@dataclass(frozen=True)
class FourierDensity:
    """Fourier transform data of an extension f_e.

    Density variant: ``fn`` maps an (n, d) array of frequencies (or an array
    of radii when ``radial``) to fhat values; ``tail_bound`` bounds
    int_{|xi| > R} (1+|xi|)^s |fhat| and is either a number or a callable
    (R, s) -> number.  Discrete variant: point masses at ``freqs``.
    """

    d: int
    fn: Callable | None = None
    tail_bound: float | Callable | None = None
    radial: bool = False
    freqs: np.ndarray | None = None
    masses: np.ndarray | None = None

    @classmethod
    def density(cls, fn, d: int, tail_bound=None, radial: bool = False) -> "FourierDensity":
        return cls(int(d), fn, tail_bound, bool(radial))

    @classmethod
    def discrete(cls, freqs, masses) -> "FourierDensity":
        fr = np.atleast_2d(np.asarray(freqs, dtype=float))
        ms = np.atleast_1d(np.asarray(masses, dtype=complex))
        if len(fr) != len(ms):
            raise InvalidArgument("one mass per frequency")
        return cls(fr.shape[1], freqs=fr, masses=ms)

    @property
    def is_discrete(self) -> bool:
        return self.freqs is not None

    def scaled(self, t: float) -> "FourierDensity":
        if self.is_discrete:
            return FourierDensity.discrete(self.freqs, t * self.masses)
        tb = self.tail_bound
        tail = (lambda R, s: abs(t) * tb(R, s)) if callable(tb) else (None if tb is None else abs(t) * tb)
        return FourierDensity(self.d, lambda x: t * np.asarray(self.fn(x)), tail, self.radial)

    def radial_values(self, r) -> np.ndarray:
        """fhat along the ray r * e_1 (radial densities)."""
        r = np.asarray(r, dtype=float)
        return np.asarray(self.fn(r))

    def values(self, xi) -> np.ndarray:
        xi = np.atleast_2d(np.asarray(xi, dtype=float))
        if self.radial:
            return np.asarray(self.fn(np.linalg.norm(xi, axis=1)))
        return np.asarray(self.fn(xi))

    def tail(self, R: float, s: float) -> float:
        if self.tail_bound is None:
            raise InvalidArgument("density needs a declared tail bound beyond the truncation radius")
        return float(self.tail_bound(R, s) if callable(self.tail_bound) else self.tail_bound)

    def to_atoms(self, s: float) -> SparseCombo:
        """Discrete variant as a combo of F^d_s atoms: mass_j = coeff_j (1+|xi_j|)^{-s}."""
        if not self.is_discrete:
            raise InvalidArgument("only discrete densities are finite combos")
        atoms = tuple(SpectralAtom(tuple(w), s) for w in self.freqs)
        amps = np.array([a.amplitude for a in atoms])
        return SparseCombo(atoms, self.masses / amps, _kind="spectral")


def gaussian_density(width: float, d: int = 1) -> FourierDensity:
    """Transform of g(x) = exp(-|x|^2 / (2 width)) under fhat(xi) = int f e^{-2 pi i xi.x}:
    (2 pi width)^{d/2} exp(-2 pi^2 width |xi|^2), integrating to g(0) = 1."""
    from scipy.integrate import quad
    amp = (2 * pi * width) ** (d / 2.0)
    fn = lambda r: amp * np.exp(-2 * pi * pi * width * np.asarray(r, dtype=float) ** 2)
    area = sphere_area(d)

    def tail(R, s):
        val, _ = quad(lambda r: (1 + r) ** s * fn(r) * r ** (d - 1), R, np.inf, epsabs=1e-300)
        return area * val

    return FourierDensity.density(fn, d, tail, radial=True)


def exponential_density(rate: float = 2 * pi) -> FourierDensity:
    """1-D density exp(-rate |xi|) with its exact tail beyond R."""
    fn = lambda x: np.exp(-rate * np.abs(np.asarray(x, dtype=float)).reshape(-1))

    def tail(R, s):
        # 2 int_R^inf (1+r)^s e^{-rate r} dr = 2 e^{rate} rate^{-(s+1)} Gamma(s+1, rate (1+R))
        return 2 * np.exp(rate) * rate ** (-(s + 1)) * gamma(s + 1) * gammaincc(s + 1, rate * (1 + R))

    return FourierDensity.density(fn, 1, tail)


def _composite(lo, hi, panels, rule):
    br = np.linspace(lo, hi, panels + 1)
    mid = 0.5 * (br[:-1] + br[1:])[:, None]
    h = 0.5 * np.diff(br)[:, None]
    return (mid + h * rule.nodes[None, :]).ravel(), (h * rule.weights[None, :]).ravel()


def _truncated_integral(F: FourierDensity, s: float, R: float, rule: QuadratureRule, panels: int):
    if F.d == 1:
        x, w = _composite(-R, R, panels, rule)
        vals = np.abs(F.values(x[:, None]) if not F.radial else F.radial_values(np.abs(x)))
        return float(np.sum(w * (1 + np.abs(x)) ** s * vals))
    r, wr = _composite(0.0, R, panels, rule)
    if F.radial:
        return float(sphere_area(F.d) * np.sum(wr * (1 + r) ** s * np.abs(F.radial_values(r)) * r ** (F.d - 1)))
    if F.d != 2:
        raise InvalidArgument("non-radial densities are integrated for d <= 2")
    n_ang = 8 * panels
    th = 2 * pi * np.arange(n_ang) / n_ang
    xi = np.stack([np.outer(r, np.cos(th)).ravel(), np.outer(r, np.sin(th)).ravel()], axis=1)
    vals = np.abs(F.values(xi)).reshape(len(r), n_ang)
    return float(np.sum(wr[:, None] * ((1 + r) ** s * r)[:, None] * vals) * 2 * pi / n_ang)


def spectral_barron_norm(F: FourierDensity, s: float, R: float = 10.0, rule: QuadratureRule | None = None,
                         tol: float = 1e-12, max_panels: int = 2 ** 14) -> float:
    """int_{|xi| <= R} (1+|xi|)^s |fhat| + tail bound, an upper bound on the
    F^d_s norm; discrete densities give sum (1+|xi_j|)^s |mass_j| exactly."""
    if s < 0:
        raise InvalidArgument(f"s must be >= 0, got {s!r}")
    if F.is_discrete:
        return float(np.sum((1 + np.linalg.norm(F.freqs, axis=1)) ** s * np.abs(F.masses)))
    if R <= 0:
        raise InvalidArgument("truncation radius must be positive")
    tail = F.tail(R, s)
    rule = rule or gauss_legendre_rule(16)
    panels = max(8, int(np.ceil(4 * R)))
    prev = _truncated_integral(F, s, R, rule, panels)
    while True:
        panels *= 2
        cur = _truncated_integral(F, s, R, rule, panels)
        if abs(cur - prev) <= tol * max(abs(cur), 1e-300):
            return cur + tail
        if panels >= max_panels:
            raise AccuracyFailure("spectral integral did not converge under panel doubling")
        prev = cur


# ridge superposition -------------------------------------------------------------

def _ray_profile(F: FourierDensity, omega, R: float, rule: QuadratureRule, panels: int, order: int):
    """Evaluators of g^{(j)}(t) = int_0^R (2 pi i s)^j e^{2 pi i t s} fhat(omega s) s^{d-1} ds."""
    s, w = _composite(0.0, R, panels, rule)
    fh = F.values(np.outer(s, omega))
    base = w * fh * s ** (F.d - 1)

    def make(j):
        coef = base * (2j * pi * s) ** j
        return lambda t: np.exp(2j * pi * np.outer(np.atleast_1d(t), s)) @ coef

    return [make(j) for j in range(order + 1)]


def ridge_superposition_bound(F: FourierDensity, k: int, angular_nodes=64, radial_rule: QuadratureRule | None = None,
                              R: float = 8.0, tol: float = 1e-6) -> float:
    """int over S^1 of the 1-D K_1 norm of t -> g_omega(t), with g_omega the
    half-line radial integral of fhat along omega (constant omitted).

    ``angular_nodes`` is a count (equispaced, trapezoid weights) or a pair
    (angles, weights).
    """
    if F.is_discrete or F.d != 2:
        raise InvalidArgument("superposition bound needs a d=2 density")
    if isinstance(angular_nodes, (int, np.integer)):
        if angular_nodes < 1:
            raise InvalidArgument("need at least one angular node")
        th = 2 * pi * np.arange(angular_nodes) / angular_nodes
        aw = np.full(angular_nodes, 2 * pi / angular_nodes)
    else:
        th, aw = (np.atleast_1d(np.asarray(v, dtype=float)) for v in angular_nodes)
    rule = radial_rule or gauss_legendre_rule(16)
    panels = max(8, int(np.ceil(4 * R)))
    tv_panels = max(64, int(np.ceil(8 * R)))

    def norm_at(omega, p):
        ders = _ray_profile(F, omega, R, rule, p, k + 1)
        return k1_norm_1d(Profile1D.analytic(ders), k, tv_panels=tv_panels)

    total = 0.0
    for t, wt in zip(th, aw):
        omega = np.array([np.cos(t), np.sin(t)])
        a = norm_at(omega, panels)
        b = norm_at(omega, 2 * panels)
        if abs(a - b) > tol * max(abs(b), 1e-300):
            raise AccuracyFailure(f"radial integral at angle {t:.4g} changed by {abs(a - b):.3g} under refinement")
        total += wt * b
    return float(total)
