"""Exact piecewise-polynomial functions on a bounded interval.

Storage follows ``scipy.interpolate.PPoly``: ``breaks`` of length m+1 and
``coefs`` of shape (deg+1, m) in descending powers of (t - breaks[i]).  The
function is taken to be zero outside [breaks[0], breaks[-1]].
"""
from __future__ import annotations

from math import comb

import numpy as np
from scipy.interpolate import PPoly

from .errors import InvalidArgument
from .numerics.quadrature import gauss_legendre_rule


def taylor_shift(desc: np.ndarray, delta: float) -> np.ndarray:
    """Descending coefficients of p(u + delta) given those of p(u)."""
    desc = np.asarray(desc, dtype=float)
    asc = desc[::-1]
    out = np.zeros_like(asc)
    for j, cj in enumerate(asc):
        if cj == 0.0:
            continue
        for i in range(j + 1):
            out[i] += cj * comb(j, i) * delta ** (j - i)
    return out[::-1]


class PiecewisePoly:
    __slots__ = ("breaks", "coefs", "_pp")

    def __init__(self, breaks, coefs):
        breaks = np.asarray(breaks, dtype=float)
        coefs = np.atleast_2d(np.asarray(coefs, dtype=float))
        if breaks.ndim != 1 or len(breaks) < 2:
            raise InvalidArgument("need at least one piece")
        if coefs.shape[1] != len(breaks) - 1:
            raise InvalidArgument("coefficient columns must match the number of pieces")
        if np.any(np.diff(breaks) <= 0):
            raise InvalidArgument("breakpoints must be strictly increasing")
        self.breaks = breaks
        self.coefs = coefs
        self._pp = PPoly(coefs, breaks, extrapolate=True)

    # construction ---------------------------------------------------------
    @classmethod
    def zero(cls, lo=-1.0, hi=1.0):
        return cls([lo, hi], np.zeros((1, 1)))

    @classmethod
    def from_pieces(cls, breaks, polys):
        """``polys[i]`` are ascending coefficients in the global variable t."""
        breaks = np.asarray(breaks, dtype=float)
        deg = max(len(p) for p in polys) - 1
        c = np.zeros((deg + 1, len(polys)))
        for i, p in enumerate(polys):
            asc = np.zeros(deg + 1)
            asc[: len(p)] = p
            c[:, i] = taylor_shift(asc[::-1], breaks[i])
        return cls(breaks, c)

    @classmethod
    def ramp(cls, b: float, k: int, lo=-1.0, hi=1.0):
        """t -> max(0, t + b)^k on [lo, hi], with 0^0 = 1."""
        knot = -b
        desc = np.zeros(k + 1)
        desc[0] = 1.0
        if knot <= lo:
            return cls([lo, hi], taylor_shift(desc, lo - knot)[:, None])
        if knot >= hi:
            return cls([lo, hi], np.zeros((k + 1, 1)))
        c = np.zeros((k + 1, 2))
        c[:, 1] = desc
        return cls([lo, knot, hi], c)

    # evaluation -----------------------------------------------------------
    @property
    def degree(self) -> int:
        return self.coefs.shape[0] - 1

    @property
    def n_pieces(self) -> int:
        return len(self.breaks) - 1

    @property
    def domain(self):
        return float(self.breaks[0]), float(self.breaks[-1])

    def __call__(self, t, nu: int = 0):
        t = np.asarray(t, dtype=float)
        out = self._pp(t, nu)
        lo, hi = self.domain
        return np.where((t >= lo) & (t <= hi), out, 0.0)

    def piece_values(self, i: int, t, nu: int = 0):
        """Evaluate piece i's polynomial (no support masking)."""
        desc = self.coefs[:, i]
        if nu:
            desc = np.polyder(desc, nu) if len(desc) > nu else np.zeros(1)
        return np.polyval(desc, np.asarray(t, dtype=float) - self.breaks[i])

    def one_sided(self, t: float, side: int = 1, nu: int = 0) -> float:
        """Right (side=1) or left (side=-1) limit of the nu-th derivative."""
        lo, hi = self.domain
        if (side > 0 and t >= hi) or (side < 0 and t <= lo):
            return 0.0
        i = np.searchsorted(self.breaks, t, side="right" if side > 0 else "left") - 1
        i = int(np.clip(i, 0, self.n_pieces - 1))
        return float(self.piece_values(i, t, nu))

    # calculus -------------------------------------------------------------
    def derivative(self, n: int = 1) -> "PiecewisePoly":
        if n == 0:
            return self
        if self.degree < n:
            return PiecewisePoly(self.breaks, np.zeros((1, self.n_pieces)))
        d = self._pp.derivative(n)
        return PiecewisePoly(d.x, d.c)

    def antiderivative(self, n: int = 1) -> "PiecewisePoly":
        a = self._pp.antiderivative(n)
        return PiecewisePoly(a.x, a.c)

    def integrate(self, lo=None, hi=None) -> float:
        a, b = self.domain
        lo = a if lo is None else max(lo, a)
        hi = b if hi is None else min(hi, b)
        if hi <= lo:
            return 0.0
        return float(self._pp.integrate(lo, hi))

    def _piece_rule(self, extra_degree: int):
        m = (self.degree + extra_degree) // 2 + 1
        rule = gauss_legendre_rule(max(m, 1))
        x, w = rule.scaled(self.breaks[:-1], self.breaks[1:])
        return x, w

    def integrate_product(self, weight_fn, extra_degree: int) -> float:
        """Exact integral of self * weight_fn when weight_fn is a polynomial of
        degree <= extra_degree on every piece."""
        x, w = self._piece_rule(extra_degree)
        vals = np.stack([self.piece_values(i, x[i]) for i in range(self.n_pieces)])
        return float(np.sum(w * vals * weight_fn(x)))

    def moments(self, rmax: int) -> np.ndarray:
        x, w = self._piece_rule(rmax)
        vals = np.stack([self.piece_values(i, x[i]) for i in range(self.n_pieces)])
        return np.array([np.sum(w * vals * x ** r) for r in range(rmax + 1)])

    def l2_norm_sq(self) -> float:
        x, w = self._piece_rule(self.degree)
        vals = np.stack([self.piece_values(i, x[i]) for i in range(self.n_pieces)])
        return float(np.sum(w * vals * vals))

    def _sign_breaks(self, i: int) -> np.ndarray:
        a, b = self.breaks[i], self.breaks[i + 1]
        desc = np.trim_zeros(self.coefs[:, i], "f")
        pts = [0.0, b - a]
        if len(desc) > 1:
            r = np.roots(desc)
            r = r[np.abs(r.imag) <= 1e-12 * (1 + np.abs(r.real))].real
            pts.extend(r[(r > 0) & (r < b - a)])
        return np.unique(pts)

    def l1_norm(self) -> float:
        """Exact integral of |f| (pieces split at their real roots)."""
        total = 0.0
        for i in range(self.n_pieces):
            desc = self.coefs[:, i]
            if not np.any(desc):
                continue
            anti = np.polyint(desc)
            u = self._sign_breaks(i)
            vals = np.polyval(anti, u)
            total += float(np.sum(np.abs(np.diff(vals))))
        return total

    def jumps(self) -> np.ndarray:
        """Jumps f(t+) - f(t-) at interior breakpoints."""
        out = []
        for i in range(1, self.n_pieces):
            left = self.piece_values(i - 1, self.breaks[i])
            right = self.piece_values(i, self.breaks[i])
            out.append(float(right - left))
        return np.asarray(out)

    def total_variation(self) -> float:
        """Variation on the closed domain, including interior jumps."""
        return self.derivative(1).l1_norm() + float(np.sum(np.abs(self.jumps())))

    # algebra --------------------------------------------------------------
    def scale(self, alpha: float) -> "PiecewisePoly":
        return PiecewisePoly(self.breaks, alpha * self.coefs)

    def pad(self, lo: float, hi: float) -> "PiecewisePoly":
        """Same function with explicit zero pieces extending the domain."""
        a, b = self.domain
        breaks = list(self.breaks)
        c = self.coefs
        if lo < a:
            breaks = [lo] + breaks
            c = np.hstack([np.zeros((c.shape[0], 1)), c])
        if hi > b:
            breaks = breaks + [hi]
            c = np.hstack([c, np.zeros((c.shape[0], 1))])
        return PiecewisePoly(breaks, c)

    def restrict_breaks(self, new_breaks) -> "PiecewisePoly":
        """Re-express on a refinement ``new_breaks`` of the breakpoints."""
        new_breaks = np.asarray(new_breaks, dtype=float)
        c = np.zeros((self.degree + 1, len(new_breaks) - 1))
        lo, hi = self.domain
        for j in range(len(new_breaks) - 1):
            mid = 0.5 * (new_breaks[j] + new_breaks[j + 1])
            if mid < lo or mid > hi:
                continue
            i = int(np.clip(np.searchsorted(self.breaks, mid) - 1, 0, self.n_pieces - 1))
            c[:, j] = taylor_shift(self.coefs[:, i], new_breaks[j] - self.breaks[i])
        return PiecewisePoly(new_breaks, c)

    def compose_affine(self, alpha: float, beta: float) -> "PiecewisePoly":
        """t -> f(alpha t + beta) for alpha > 0."""
        if alpha <= 0:
            raise InvalidArgument("compose_affine needs alpha > 0")
        new_breaks = (self.breaks - beta) / alpha
        powers = alpha ** np.arange(self.degree, -1, -1, dtype=float)
        return PiecewisePoly(new_breaks, self.coefs * powers[:, None])

    def box_convolve(self, h: float) -> "PiecewisePoly":
        """(f * (1/h) 1_[-h/2, h/2])(t), computed exactly."""
        if h <= 0:
            raise InvalidArgument("box width must be positive")
        lo, hi = self.domain
        F = self.pad(lo - h, hi + h).antiderivative()
        half = 0.5 * h
        nb = np.unique(np.concatenate([self.breaks - half, self.breaks + half]))
        nb = nb[np.concatenate([[True], np.diff(nb) > 1e-14 * max(1.0, np.abs(nb).max())])]
        deg = F.degree
        c = np.zeros((deg + 1, len(nb) - 1))
        for j in range(len(nb) - 1):
            mid = 0.5 * (nb[j] + nb[j + 1])
            acc = np.zeros(deg + 1)
            for sgn, off in ((1.0, half), (-1.0, -half)):
                i = int(np.clip(np.searchsorted(F.breaks, mid + off) - 1, 0, F.n_pieces - 1))
                acc += sgn * taylor_shift(F.coefs[:, i], nb[j] + off - F.breaks[i])
            c[:, j] = acc / h
        return PiecewisePoly(nb, c)

    def trimmed(self, tol: float = 0.0) -> "PiecewisePoly":
        """Drop trailing zero-degree padding (exactly zero leading coefficients)."""
        c = self.coefs
        while c.shape[0] > 1 and np.all(np.abs(c[0]) <= tol):
            c = c[1:]
        return PiecewisePoly(self.breaks, c)

    def support(self):
        nz = np.any(self.coefs != 0.0, axis=0)
        if not np.any(nz):
            return None
        idx = np.flatnonzero(nz)
        return float(self.breaks[idx[0]]), float(self.breaks[idx[-1] + 1])

    def kernel_arrays(self):
        """(breaks, coefs) as contiguous float64 arrays, coefs shaped (pieces, deg+1)."""
        return (np.ascontiguousarray(self.breaks),
                np.ascontiguousarray(self.coefs.T))

    def __repr__(self):
        return f"PiecewisePoly(pieces={self.n_pieces}, degree={self.degree}, domain={self.domain})"
