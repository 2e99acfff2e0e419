"""Ridge packings g_{p,l}(x) = delta^k psi(omega_p.x / delta + 2l) and their Gram matrix."""
from __future__ import annotations

from dataclasses import dataclass
from functools import cached_property

import numpy as np

from .. import kernels
from ..errors import AccuracyFailure, InvalidArgument, UnsupportedDimension
from ..inner import weight_params
from ..numerics.eigen import SymmetricMatrix
from ..numerics.packing import PackedDirections, projective_packing
from ..numerics.quadrature import QuadratureRule, gauss_legendre_rule
from ..numerics.weights import BOCHNER_RIESZ, rho_weight, sphere_area
from ..piecewise import PiecewisePoly
from .profile import VanishingMomentProfile, build_vanishing_moment_profile

GRAM_TOL = 1e-9
MAX_REFINE = 3


@dataclass(frozen=True)
class RidgePacking:
    d: int
    k: int
    N: int
    a: float
    delta: float
    directions: PackedDirections
    shifts: np.ndarray
    profile: VanishingMomentProfile

    @property
    def n_count(self) -> int:
        return self.directions.count * len(self.shifts)

    def members(self):
        """(direction index, shift) for every member, direction-major."""
        return [(p, int(l)) for p in range(self.directions.count) for l in self.shifts]

    def member_profile(self, l: int) -> PiecewisePoly:
        """y -> delta^k psi(y / delta + 2l) as a piecewise polynomial in y."""
        return (self.profile.pieces.compose_affine(1.0 / self.delta, 2.0 * l)
                .scale(self.delta ** self.k))

    @cached_property
    def _profiles(self):
        return {int(l): self.member_profile(int(l)).kernel_arrays() for l in self.shifts}

    def member_value(self, p: int, l: int, x) -> np.ndarray:
        x = np.atleast_2d(np.asarray(x, dtype=float))
        y = x @ self.directions.dirs[p]
        return self.member_profile(l)(y)


def build_ridge_packing(d: int, k: int, N: int, a: float,
                        profile: VanishingMomentProfile | None = None) -> RidgePacking:
    if d > 3:
        raise UnsupportedDimension(f"ridge packings are built for d in {{2, 3}}, got {d}")
    if d < 2:
        raise InvalidArgument(f"ridge packings need d >= 2, got {d}")
    if int(N) != N or N < 4 or N % 2:
        raise InvalidArgument(f"N must be an even integer >= 4, got {N!r}")
    if not (0.0 < a <= 0.25):
        raise InvalidArgument(f"shrink factor a must lie in (0, 1/4], got {a!r}")
    N = int(N)
    dirs = projective_packing(d, N)
    prof = profile if profile is not None else build_vanishing_moment_profile(d, k)
    if prof.d != d or prof.k != k:
        raise InvalidArgument("profile was built for a different (d, k)")
    shifts = np.arange(-(N // 2), N // 2 + 1)
    return RidgePacking(d=d, k=k, N=N, a=float(a), delta=float(a) / N, directions=dirs,
                        shifts=shifts, profile=prof)


def diagonal_lower_bound(packing: RidgePacking) -> float:
    """|S^{d-2}| K_d (3/4)^{d-1/2} delta^{2k+1} int psi^2.

    Every member's support lies in |y| <= 1/2, where the slice weight is at
    least its value at y = 1/2.
    """
    d = packing.d
    area = sphere_area(d - 1)
    return area * rho_weight(d, 0.5) * packing.delta ** (2 * packing.k + 1) * packing.profile.l2_norm_sq()


def _segment_distance(px, py, qx, qy):
    """Distance from the origin to the segment [p, q] (broadcasting)."""
    dx, dy = qx - px, qy - py
    den = dx * dx + dy * dy
    t = np.clip(-(px * dx + py * dy) / np.where(den > 0, den, 1.0), 0.0, 1.0)
    ex, ey = px + t * dx, py + t * dy
    return np.sqrt(ex * ex + ey * ey)


def interacting_pairs(packing: RidgePacking, c: float, s: float):
    """Shift pairs (l, l') of two directions whose product can be nonzero.

    In the plane of the two directions the supports intersect in a
    parallelogram.  When that parallelogram lies inside the unit disc, the inner
    integral of g_{q,l'} against the polynomial weight (degree 2d-2 for the
    Bochner-Riesz weight) vanishes by the moment conditions on psi; when it
    lies outside, the integrand is zero.  Only parallelograms crossing the
    unit circle remain.
    """
    dl = packing.delta
    L = packing.shifts.astype(float)
    lo = dl * (-2.0 * L - 1.0)
    hi = dl * (-2.0 * L + 1.0)
    # vertices in (y, v) coordinates, ordered around the parallelogram
    ys = [lo[:, None], lo[:, None], hi[:, None], hi[:, None]]
    zs = [lo[None, :], hi[None, :], hi[None, :], lo[None, :]]
    vx = [np.broadcast_to(y, (len(L), len(L))) for y in ys]
    vy = [(z - c * y) / s for y, z in zip(ys, zs)]
    rmax = np.max([np.hypot(x, y) for x, y in zip(vx, vy)], axis=0)
    dmin = np.min([_segment_distance(vx[i], vy[i], vx[(i + 1) % 4], vy[(i + 1) % 4])
                   for i in range(4)], axis=0)
    return np.argwhere((rmax > 1.0) & (dmin < 1.0))


def _entry(fb, fc, gb, gc, c, s, C, p, par_const, rule, inner):
    return kernels.pair_integral(fb, fc, gb, gc, c, s, C, p, par_const,
                                 rule.nodes, rule.weights, inner.nodes, inner.weights, False, True)


def assemble_gram(packing: RidgePacking, rule: QuadratureRule | None = None,
                  tol: float = GRAM_TOL, return_stats: bool = False):
    """Gram matrix of the packing in L2(B, (1-|x|^2)^{d/2} dx).

    Same-direction blocks are diagonal (disjoint supports).  Cross-direction
    entries are evaluated only for pairs selected by ``interacting_pairs``;
    each is checked against a rule with twice the nodes.
    """
    d = packing.d
    rule = rule or gauss_legendre_rule(16)
    C, p, par_const = weight_params(d, BOCHNER_RIESZ)
    if not float(p).is_integer():
        raise InvalidArgument("packing Gram assembly expects the Bochner-Riesz weight")
    deg = packing.profile.pieces.degree
    inner = gauss_legendre_rule((deg + 2 * int(p)) // 2 + 1)
    fine = gauss_legendre_rule(2 * rule.size)
    profs = packing._profiles
    shifts = [int(l) for l in packing.shifts]
    nl = len(shifts)
    n = packing.n_count
    G = np.zeros((n, n))
    diag = {}
    for l in shifts:
        fb, fc = profs[l]
        diag[l] = _entry(fb, fc, fb, fc, 1.0, 0.0, C, p, par_const, fine, inner)
    for pi in range(packing.directions.count):
        for j, l in enumerate(shifts):
            G[pi * nl + j, pi * nl + j] = diag[l]
    scale = max(diag.values())
    dirs = packing.directions.dirs
    n_eval = 0
    worst = 0.0
    for pi in range(len(dirs)):
        for qi in range(pi + 1, len(dirs)):
            c = float(np.dot(dirs[pi], dirs[qi]))
            s = float(np.linalg.norm(dirs[qi] - c * dirs[pi]))
            for a_idx, b_idx in interacting_pairs(packing, c, s):
                fb, fc = profs[shifts[a_idx]]
                gb, gc = profs[shifts[b_idx]]
                val = _entry(fb, fc, gb, gc, c, s, C, p, par_const, rule, inner)
                ref = _entry(fb, fc, gb, gc, c, s, C, p, par_const, fine, inner)
                err = abs(val - ref)
                m = 2
                while err > tol * scale and m < 2 ** MAX_REFINE:
                    m *= 2
                    val = ref
                    ref = _entry(fb, fc, gb, gc, c, s, C, p, par_const,
                                 gauss_legendre_rule(m * rule.size), inner)
                    err = abs(val - ref)
                if err > tol * scale:
                    raise AccuracyFailure(
                        f"Gram entry ({pi},{shifts[a_idx]}),({qi},{shifts[b_idx]}) changed by "
                        f"{err / scale:.3g} (relative) after refinement")
                worst = max(worst, err / scale)
                i = pi * nl + a_idx
                j = qi * nl + b_idx
                G[i, j] = ref
                n_eval += 1
    S = SymmetricMatrix(G)
    if return_stats:
        return S, {"evaluated_pairs": n_eval, "max_refinement_change": worst}
    return S
