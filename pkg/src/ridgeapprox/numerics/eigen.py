"""Dense symmetric storage and smallest-eigenvalue computation."""
from __future__ import annotations

import numpy as np
from scipy.linalg import eigh

from ..errors import InvalidArgument, NumericalError
from .. import kernels

JACOBI_TOL = 1e-12
# above this size cyclic Jacobi (O(n^3) per sweep) is replaced by LAPACK
JACOBI_MAX_DIM = 512 if kernels.COMPILED else 96


class SymmetricMatrix:
    """Symmetric matrix built from one stored triangle.

    The lower triangle is a mirror of the upper one, so entries(i, j) and
    entries(j, i) are the same float.
    """

    __slots__ = ("_a",)

    def __init__(self, upper):
        a = np.array(upper, dtype=float, copy=True)
        if a.ndim != 2 or a.shape[0] != a.shape[1]:
            raise InvalidArgument("symmetric matrix must be square")
        iu = np.triu_indices(a.shape[0], 1)
        a.T[iu] = a[iu]
        a.setflags(write=False)
        self._a = a

    @property
    def dim(self) -> int:
        return self._a.shape[0]

    @property
    def entries(self) -> np.ndarray:
        return self._a

    def __getitem__(self, idx):
        return self._a[idx]

    def to_array(self) -> np.ndarray:
        return self._a.copy()

    def shifted(self, t: float) -> "SymmetricMatrix":
        return SymmetricMatrix(self._a + t * np.eye(self.dim))

    def __repr__(self):
        return f"SymmetricMatrix(dim={self.dim})"


def _as_array(G) -> np.ndarray:
    if isinstance(G, SymmetricMatrix):
        return G.entries
    a = np.asarray(G, dtype=float)
    if a.ndim != 2 or a.shape[0] != a.shape[1]:
        raise InvalidArgument("expected a square matrix")
    return a


def eigenvalues_sym(G, method: str = "auto") -> np.ndarray:
    a = _as_array(G)
    if a.shape[0] < 1:
        raise InvalidArgument("matrix dimension must be at least 1")
    if not np.all(np.isfinite(a)):
        raise InvalidArgument("matrix has non-finite entries")
    if method == "auto":
        method = "jacobi" if a.shape[0] <= JACOBI_MAX_DIM else "lapack"
    if method == "jacobi":
        w, sweeps = kernels.jacobi_eigenvalues(a, JACOBI_TOL, 100)
        if sweeps >= 100:
            raise NumericalError("Jacobi iteration did not converge in 100 sweeps")
        return w
    if method == "lapack":
        return eigh(a, eigvals_only=True)
    raise InvalidArgument(f"unknown eigen method {method!r}")


def min_eigenvalue_sym(G, method: str = "auto") -> float:
    """Smallest eigenvalue of a dense symmetric matrix."""
    a = _as_array(G)
    if a.shape[0] < 1:
        raise InvalidArgument("matrix dimension must be at least 1")
    if not np.all(np.isfinite(a)):
        raise InvalidArgument("matrix has non-finite entries")
    if method == "auto" and a.shape[0] > JACOBI_MAX_DIM:
        return float(eigh(a, eigvals_only=True, subset_by_index=[0, 0])[0])
    return float(eigenvalues_sym(a, method)[0])
