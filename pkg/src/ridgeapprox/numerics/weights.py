"""Radial weight reductions for ridge integrals over the unit ball.

Writing x = y*omega + z with z orthogonal to omega, the Bochner-Riesz weight
(1-|x|^2)_+^{d/2} integrates out to a one-dimensional weight in y, and with two
independent directions to a weight of the two projections.  ``rho_weight`` and
``gamma_weight`` keep only the radial integrals; the angular measure of the
integrated-out sphere is applied by the ``*_slice_*`` helpers.
"""
from __future__ import annotations

from functools import lru_cache
from math import gamma, pi

import numpy as np
from scipy import special

from ..errors import InvalidArgument
from .quadrature import gauss_legendre_rule

LEBESGUE = "lebesgue"
BOCHNER_RIESZ = "bochner_riesz"
WEIGHTS = (LEBESGUE, BOCHNER_RIESZ)


def check_weight(weight) -> str:
    tag = getattr(weight, "tag", weight)
    if tag not in WEIGHTS:
        raise InvalidArgument(f"unknown measure weight {weight!r}")
    return tag


def sphere_area(m: int) -> float:
    """Surface measure of S^{m-1} in R^m (|S^0| = 2)."""
    return 2.0 * pi ** (m / 2) / gamma(m / 2)


def ball_volume(m: int) -> float:
    """Volume of the unit ball in R^m (1 for m = 0)."""
    return pi ** (m / 2) / gamma(m / 2 + 1)


@lru_cache(maxsize=None)
def _radial_constant(d: int, extra: int) -> float:
    # int_0^1 (1-r^2)^{d/2} r^{d-2-extra} dr = B((d-1-extra)/2, d/2+1) / 2
    return float(0.5 * special.beta(0.5 * (d - 1 - extra), 0.5 * d + 1.0))


def rho_constant(d: int) -> float:
    if d < 2:
        raise InvalidArgument("rho weight needs d >= 2")
    return _radial_constant(d, 0)


def gamma_constant(d: int) -> float:
    if d < 2:
        raise InvalidArgument("gamma weight needs d >= 2")
    if d == 2:
        return 1.0
    return _radial_constant(d, 1)


def rho_weight(d: int, y):
    """K_d (1-y^2)_+^{d-1/2}."""
    y = np.asarray(y, dtype=float)
    base = np.clip(1.0 - y * y, 0.0, None)
    out = rho_constant(d) * base ** (d - 0.5)
    return float(out) if out.ndim == 0 else out


def gamma_weight(d: int, y):
    """K'_d (1-y^2)_+^{d-1}, with K'_2 = 1."""
    y = np.asarray(y, dtype=float)
    base = np.clip(1.0 - y * y, 0.0, None)
    out = gamma_constant(d) * base ** (d - 1)
    return float(out) if out.ndim == 0 else out


def parallel_slice_weight(d: int, y, weight=BOCHNER_RIESZ):
    """Measure of the hyperplane slice {omega.x = y} of the ball under ``weight``."""
    tag = check_weight(weight)
    y = np.asarray(y, dtype=float)
    base = np.clip(1.0 - y * y, 0.0, None)
    if d == 1:
        # the ball is [-1, 1]; the slice is a point
        out = np.where(np.abs(y) <= 1.0, 1.0, 0.0)
        if tag == BOCHNER_RIESZ:
            out = base ** 0.5
    elif tag == BOCHNER_RIESZ:
        out = sphere_area(d - 1) * rho_weight(d, y)
    else:
        out = ball_volume(d - 1) * base ** ((d - 1) / 2)
    out = np.asarray(out, dtype=float)
    return float(out) if out.ndim == 0 else out


def cross_slice_factor(d: int, weight=BOCHNER_RIESZ):
    """(C, p) such that the weight integrated over the (d-2) orthogonal
    directions equals C * r^p, where r = 1 - |projection onto the plane|^2."""
    tag = check_weight(weight)
    if d < 2:
        raise InvalidArgument("two independent directions need d >= 2")
    if tag == BOCHNER_RIESZ:
        if d == 2:
            return 1.0, 1.0
        return sphere_area(d - 2) * gamma_constant(d), float(d - 1)
    return ball_volume(d - 2), (d - 2) / 2.0


def ball_measure(d: int, weight=BOCHNER_RIESZ) -> float:
    """Total mass of the unit ball under ``weight``."""
    tag = check_weight(weight)
    if tag == LEBESGUE:
        return ball_volume(d)
    # int_0^1 (1-r^2)^{d/2} r^{d-1} dr * |S^{d-1}|
    rule = gauss_legendre_rule(64)
    phi, w = rule.scaled(0.0, pi / 2)
    vals = np.cos(phi) ** (d + 1) * np.sin(phi) ** (d - 1)
    return sphere_area(d) * float(np.sum(w * vals))
