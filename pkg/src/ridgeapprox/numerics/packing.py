"""Well separated direction families on the projective sphere."""
from __future__ import annotations

from dataclasses import dataclass

import numpy as np

from ..errors import ConstructionFailed, InvalidArgument, UnsupportedDimension

GOLDEN_ANGLE = np.pi * (3.0 - np.sqrt(5.0))
# smallest accepted N * (min projective separation) for the spiral lattice
MIN_SEPARATION_CONSTANT = 0.5


@dataclass(frozen=True)
class PackedDirections:
    d: int
    N: int
    dirs: np.ndarray
    c: float

    @property
    def count(self) -> int:
        return self.dirs.shape[0]

    @property
    def min_separation(self) -> float:
        return self.c / self.N


def projective_separation(dirs: np.ndarray) -> float:
    """min over pairs i != j of min(|w_i - w_j|, |w_i + w_j|)."""
    dirs = np.asarray(dirs, dtype=float)
    if dirs.shape[0] < 2:
        return np.inf
    g = np.abs(dirs @ dirs.T)
    np.fill_diagonal(g, -np.inf)
    # |w_i -+ w_j|^2 = 2 - 2|w_i . w_j| for unit vectors
    cmax = np.clip(g.max(), -1.0, 1.0)
    return float(np.sqrt(max(2.0 - 2.0 * cmax, 0.0)))


# empty band above the equator, in units of the spiral's z step; points just
# above the equator at nearly opposite longitudes are almost antipodal, the
# band keeps that seam as wide as the bulk spacing
EQUATOR_GAP = 1.75


def _hemisphere_spiral(n: int) -> np.ndarray:
    """Golden-angle spiral from the pole down to z ~ EQUATOR_GAP / n."""
    i = np.arange(n, dtype=float)
    z = 1.0 - i / (n - 1.0 + EQUATOR_GAP)
    r = np.sqrt(1.0 - z * z)
    phi = i * GOLDEN_ANGLE
    pts = np.stack([r * np.cos(phi), r * np.sin(phi), z], axis=1)
    return pts / np.linalg.norm(pts, axis=1, keepdims=True)


def projective_packing(d: int, N: int) -> PackedDirections:
    """N^{d-1} unit directions with projective separation >= c/N."""
    if d not in (2, 3):
        if d > 3:
            raise UnsupportedDimension(f"direction packings are built for d in {{2, 3}}, got {d}")
        raise InvalidArgument(f"direction packings need d >= 2, got {d}")
    if int(N) != N or N < 2:
        raise InvalidArgument(f"N must be an integer >= 2, got {N!r}")
    N = int(N)
    if d == 2:
        theta = np.arange(N) * np.pi / N
        dirs = np.stack([np.cos(theta), np.sin(theta)], axis=1)
    else:
        dirs = _hemisphere_spiral(N * N)
    sep = projective_separation(dirs)
    c = sep * N
    if not np.isfinite(c) or c < (MIN_SEPARATION_CONSTANT if d == 3 else 0.0) or c <= 0.0:
        raise ConstructionFailed(f"direction family separation constant {c:.4g} is too small", achieved=c)
    dirs.setflags(write=False)
    return PackedDirections(d=d, N=N, dirs=dirs, c=float(c))
