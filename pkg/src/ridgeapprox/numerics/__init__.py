from .quadrature import QuadratureRule, gauss_legendre_rule
from .weights import (BOCHNER_RIESZ, LEBESGUE, ball_measure, ball_volume, cross_slice_factor,
                      gamma_weight, parallel_slice_weight, rho_weight, sphere_area)
from .packing import PackedDirections, projective_packing, projective_separation
from .eigen import SymmetricMatrix, eigenvalues_sym, min_eigenvalue_sym
from .montecarlo import ball_monte_carlo

__all__ = [
    "QuadratureRule", "gauss_legendre_rule", "BOCHNER_RIESZ", "LEBESGUE", "ball_measure",
    "ball_volume", "cross_slice_factor", "gamma_weight", "parallel_slice_weight", "rho_weight",
    "sphere_area", "PackedDirections", "projective_packing", "projective_separation",
    "SymmetricMatrix", "eigenvalues_sym", "min_eigenvalue_sym", "ball_monte_carlo",
]
