"""Import-time selection between the compiled kernels and the numpy fallback.

Set RIDGEAPPROX_PURE_PYTHON=1 to force the fallback.
"""
import os

from . import _pykernels

BACKEND = "python"
_impl = _pykernels
if os.environ.get("RIDGEAPPROX_PURE_PYTHON", "") not in ("1", "true", "yes"):
    try:
        from . import _ckernels as _impl  # type: ignore[no-redef]
        BACKEND = "compiled"
    except ImportError:
        _impl = _pykernels

jacobi_eigenvalues = _impl.jacobi_eigenvalues
ridge_atom_gram = _impl.ridge_atom_gram
pair_integral = _impl.pair_integral
PARALLEL_TOL = _pykernels.PARALLEL_TOL
COMPILED = BACKEND == "compiled"


def backends():
    """Available implementations, keyed by name."""
    out = {"python": _pykernels}
    try:
        from . import _ckernels
        out["compiled"] = _ckernels
    except ImportError:
        pass
    return out
