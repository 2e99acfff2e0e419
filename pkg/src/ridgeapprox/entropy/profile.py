"""Compactly supported profiles with vanishing low-order moments."""
from __future__ import annotations

from dataclasses import dataclass
from math import factorial

import numpy as np
from numpy.polynomial import legendre as npleg

from ..errors import InvalidArgument, SupportViolation
from ..piecewise import PiecewisePoly

DEFAULT_CORE = 0.8
DEFAULT_MOLLIFIER = 0.15


@dataclass(frozen=True)
class VanishingMomentProfile:
    """psi on [-1, 1]: a rescaled Legendre polynomial smoothed by a B-spline.

    ``moment_order`` is the largest r with int t^r psi = 0, ``smoothness`` the
    number of continuous derivatives and ``norm_k1`` = ||psi^{(k+1)}||_1 / k!.
    """

    pieces: PiecewisePoly
    d: int
    k: int
    core_width: float
    mollifier_width: float
    moment_order: int
    smoothness: int
    norm_k1: float
    raw_moments: np.ndarray

    def __call__(self, t, nu: int = 0):
        return self.pieces(t, nu)

    def moments(self, rmax: int | None = None) -> np.ndarray:
        return self.pieces.moments(self.moment_order if rmax is None else rmax)

    def scaled(self, t: float) -> "VanishingMomentProfile":
        return VanishingMomentProfile(self.pieces.scale(t), self.d, self.k, self.core_width,
                                      self.mollifier_width, self.moment_order, self.smoothness,
                                      abs(t) * self.norm_k1, self.raw_moments)

    def l2_norm_sq(self) -> float:
        return self.pieces.l2_norm_sq()


def k1_profile_norm(pp: PiecewisePoly, k: int) -> float:
    """||f^{(k+1)}||_{L1} / k! for f with k+1 continuous derivatives."""
    return pp.derivative(k + 1).l1_norm() / factorial(k)


def build_vanishing_moment_profile(d: int, k: int, core_width: float = DEFAULT_CORE,
                                   mollifier_width: float = DEFAULT_MOLLIFIER) -> VanishingMomentProfile:
    """Legendre P_{2d-1}(t/c) on [-c, c], convolved with a centred B-spline of
    order k+3 and total width eps, normalised to ||psi^{(k+1)}||_1 / k! = 1.

    Each of the k+3 box convolutions adds one continuous derivative to the
    jump at +-c, so psi has k+2 continuous derivatives.
    """
    if d < 1 or int(d) != d:
        raise InvalidArgument(f"dimension must be a positive integer, got {d!r}")
    if k < 0 or int(k) != k:
        raise InvalidArgument(f"power must be a nonnegative integer, got {k!r}")
    c, eps = float(core_width), float(mollifier_width)
    if c <= 0 or eps <= 0:
        raise InvalidArgument("core and mollifier widths must be positive")
    if c + eps > 1.0 + 1e-15:
        raise SupportViolation(f"core + mollifier width {c + eps!r} exceeds 1")
    n = 2 * d - 1
    leg = np.zeros(n + 1)
    leg[n] = 1.0
    # ascending power coefficients of P_n(t / c)
    asc = npleg.leg2poly(leg) / c ** np.arange(n + 1)
    core = PiecewisePoly.from_pieces([-c, c], [asc])
    raw = core.moments(2 * d - 2)
    psi = core
    order = k + 3
    h = eps / order
    for _ in range(order):
        psi = psi.box_convolve(h)
    psi = psi.pad(-1.0, 1.0)
    norm = k1_profile_norm(psi, k)
    psi = psi.scale(1.0 / norm)
    return VanishingMomentProfile(
        pieces=psi, d=d, k=k, core_width=c, mollifier_width=eps,
        moment_order=2 * d - 2, smoothness=k + 2,
        norm_k1=k1_profile_norm(psi, k), raw_moments=raw / norm,
    )
