"""Shallow ReLU^k and cosine dictionary approximation: compression
algorithms, K_1 norm calculators and certified metric-entropy lower bounds."""
from . import kernels
from .dictionary import (RidgeAtom, SparseCombo, SpectralAtom, empty_combo, eval_atom, eval_combo,
                         ridge_combo)
from .entropy import (EntropyCertificate, RidgePacking, VanishingMomentProfile, assemble_gram,
                      build_covering_net, build_ridge_packing, build_vanishing_moment_profile,
                      certify_gram, certify_lower_bound, find_admissible_a)
from .errors import (AccuracyFailure, BasisFailure, ConstructionFailed, InvalidArgument, NumericalError,
                     NumericalInconsistency, RidgeApproxError, SupportViolation, TooLarge,
                     UnsupportedDimension)
from .experiments import ExperimentConfig, RateFit, fit_slope, run_rate_experiment
from .inner import (MeasureWeight, atom_gram, combo_distance, combo_norm_sq, dictionary_bound,
                    reduced_ridge_inner_product)
from .maurey import maurey_compress, maurey_error_curve
from .norms import (FourierDensity, Profile1D, k1_norm_1d, peano_decompose, ridge_superposition_bound,
                    spectral_barron_norm)
from .numerics import (QuadratureRule, SymmetricMatrix, ball_monte_carlo, gamma_weight,
                       gauss_legendre_rule, min_eigenvalue_sym, projective_packing, rho_weight)
from .piecewise import PiecewisePoly
from .stratified import (ChartSpec, CompressionReport, TensorInterpolant, default_chart,
                         stratified_compress, tensor_chebyshev_interpolant)

__all__ = [name for name in dir() if not name.startswith("_")]
