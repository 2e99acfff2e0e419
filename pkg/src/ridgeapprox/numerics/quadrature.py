"""Gauss-Legendre rules and composite (panel-split) integration on intervals."""
from __future__ import annotations

from dataclasses import dataclass
from functools import lru_cache

import numpy as np

from ..errors import InvalidArgument


@dataclass(frozen=True)
class QuadratureRule:
    """A rule on the reference interval [-1, 1].

    ``order`` is the polynomial degree integrated exactly.
    """

    nodes: np.ndarray
    weights: np.ndarray
    order: int

    @property
    def size(self) -> int:
        return len(self.nodes)

    def scaled(self, a, b):
        """Nodes and weights mapped onto [a, b] (broadcasts over array endpoints)."""
        a = np.asarray(a, dtype=float)[..., None]
        b = np.asarray(b, dtype=float)[..., None]
        half = 0.5 * (b - a)
        return 0.5 * (a + b) + half * self.nodes, half * self.weights

    def integrate(self, f, a=-1.0, b=1.0):
        x, w = self.scaled(a, b)
        return np.sum(w * f(x), axis=-1)

    def composite(self, breaks):
        """Nodes and weights of the rule repeated on each panel of ``breaks``."""
        breaks = np.asarray(breaks, dtype=float)
        x, w = self.scaled(breaks[:-1], breaks[1:])
        return x.ravel(), w.ravel()


@lru_cache(maxsize=64)
def _leggauss(m: int):
    x, w = np.polynomial.legendre.leggauss(m)
    x.setflags(write=False)
    w.setflags(write=False)
    return x, w


def gauss_legendre_rule(m: int) -> QuadratureRule:
    """m-point Gauss-Legendre rule on [-1, 1], exact for degree 2m-1."""
    if int(m) != m or m < 1:
        raise InvalidArgument(f"node count must be a positive integer, got {m!r}")
    m = int(m)
    x, w = _leggauss(m)
    return QuadratureRule(nodes=x, weights=w, order=2 * m - 1)


def refine_breaks(breaks, per_panel: int) -> np.ndarray:
    """Split every panel of ``breaks`` into ``per_panel`` equal sub-panels."""
    breaks = np.asarray(breaks, dtype=float)
    if per_panel <= 1:
        return breaks
    t = np.linspace(0.0, 1.0, per_panel + 1)[:-1]
    inner = breaks[:-1, None] + np.diff(breaks)[:, None] * t
    return np.append(inner.ravel(), breaks[-1])


def merge_breaks(lo: float, hi: float, *points) -> np.ndarray:
    """Sorted unique breakpoints in [lo, hi] including both ends."""
    pts = [np.atleast_1d(np.asarray(p, dtype=float)).ravel() for p in points]
    allp = np.concatenate([[lo, hi], *pts]) if pts else np.array([lo, hi])
    allp = allp[np.isfinite(allp)]
    allp = np.clip(allp, lo, hi)
    return np.unique(allp)
