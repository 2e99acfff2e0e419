"""Entropy lower-bound certificates from Gram matrices of ridge packings."""
from __future__ import annotations

import json
from dataclasses import asdict, dataclass
from math import sqrt

import numpy as np

from ..errors import InvalidArgument, NumericalInconsistency
from ..numerics.eigen import SymmetricMatrix, min_eigenvalue_sym
from ..numerics.quadrature import QuadratureRule
from .packing import RidgePacking, assemble_gram, build_ridge_packing
from .profile import VanishingMomentProfile, build_vanishing_moment_profile

PSD_TOL = 1e-8
COROLLARY = "corollary"
LEMMA = "lemma"


@dataclass(frozen=True)
class EntropyCertificate:
    """Lower bounds on eps_n(B_1) for n = n_count.

    bound_lemma = sqrt(lambda_min / n) / 2 holds for any Gram matrix;
    bound_corollary = min ||g|| / sqrt(8 n) holds when every row satisfies
    sum_{j != i} |G_ij| <= G_ii / 2.
    """

    n_count: int
    min_norm_sq: float
    lambda_min: float
    diag_dominant: bool
    bound_corollary: float | None
    bound_lemma: float
    mode: str
    max_offdiag_ratio: float
    lambda_clamped: bool = False
    d: int | None = None
    k: int | None = None
    N: int | None = None
    a: float | None = None
    delta: float | None = None

    @property
    def bound(self) -> float:
        """The certified bound named by ``mode``."""
        return self.bound_corollary if self.mode == COROLLARY else self.bound_lemma

    def to_dict(self) -> dict:
        doc = asdict(self)
        doc["bound"] = self.bound
        return doc

    def to_json(self) -> str:
        return json.dumps(self.to_dict())


def certify_gram(G, **meta) -> EntropyCertificate:
    """Certificate from an explicit Gram matrix (array or SymmetricMatrix)."""
    A = G.entries if isinstance(G, SymmetricMatrix) else np.asarray(G, dtype=float)
    if A.ndim != 2 or A.shape[0] != A.shape[1] or A.shape[0] < 1:
        raise InvalidArgument("Gram matrix must be square and nonempty")
    n = A.shape[0]
    diag = np.diag(A).copy()
    if np.any(diag <= 0):
        raise NumericalInconsistency("Gram matrix has a nonpositive diagonal entry")
    off = np.sum(np.abs(A), axis=1) - np.abs(diag)
    ratio = off / diag
    dominant = bool(np.all(ratio <= 0.5))
    lam = min_eigenvalue_sym(G if isinstance(G, SymmetricMatrix) else SymmetricMatrix(np.triu(A)))
    scale = float(diag.max())
    clamped = False
    if lam < 0:
        if lam < -PSD_TOL * scale:
            raise NumericalInconsistency(f"Gram matrix is not PSD: lambda_min = {lam!r}")
        lam, clamped = 0.0, True
    min_sq = float(diag.min())
    b_cor = sqrt(min_sq) / sqrt(8.0 * n) if dominant else None
    b_lem = 0.5 * sqrt(lam / n)
    return EntropyCertificate(
        n_count=n, min_norm_sq=min_sq, lambda_min=float(lam), diag_dominant=dominant,
        bound_corollary=b_cor, bound_lemma=b_lem, mode=COROLLARY if dominant else LEMMA,
        max_offdiag_ratio=float(ratio.max()), lambda_clamped=clamped, **meta)


def certify_lower_bound(packing: RidgePacking, rule: QuadratureRule | None = None,
                        gram: SymmetricMatrix | None = None) -> EntropyCertificate:
    G = assemble_gram(packing, rule) if gram is None else gram
    return certify_gram(G, d=packing.d, k=packing.k, N=packing.N, a=packing.a, delta=packing.delta)


def find_admissible_a(d: int, k: int, Ns, a0: float = 0.25, steps: int = 6,
                      profile: VanishingMomentProfile | None = None, rule: QuadratureRule | None = None):
    """Largest a (within a bisection tolerance) making every packing in Ns
    diagonally dominant, starting from a0.

    Returns (a, certificates at that a).  Halves a until dominance holds, then
    bisects between the passing and failing values.
    """
    Ns = list(Ns)
    if not Ns:
        raise InvalidArgument("need at least one N")
    prof = profile or build_vanishing_moment_profile(d, k)

    def attempt(a):
        certs = []
        for N in Ns:
            c = certify_lower_bound(build_ridge_packing(d, k, N, a, prof), rule)
            if not c.diag_dominant:
                return None
            certs.append(c)
        return certs

    a = float(a0)
    certs = attempt(a)
    if certs is not None:
        return a, certs
    hi = a
    for _ in range(40):
        a *= 0.5
        certs = attempt(a)
        if certs is not None:
            break
    else:
        raise NumericalInconsistency("no admissible shrink factor found")
    lo, best = a, certs
    for _ in range(steps):
        mid = 0.5 * (lo + hi)
        c = attempt(mid)
        if c is None:
            hi = mid
        else:
            lo, best = mid, c
    return lo, best
