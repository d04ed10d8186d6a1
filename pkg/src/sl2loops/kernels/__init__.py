"""Hot inner loops, compiled when possible.

The Cython build (``_ckernels``) is used if it imports; otherwise the
pure-Python module with identical behaviour.  Set ``SL2LOOPS_PURE=1`` to
force the fallback.
"""

import os

from . import _pykernels

if os.environ.get("SL2LOOPS_PURE"):
    _impl = _pykernels
else:
    try:
        from . import _ckernels as _impl
    except ImportError:  # extension not built
        _impl = _pykernels

BACKEND = "cython" if _impl is not _pykernels else "python"

mul_terms = _impl.mul_terms
add_terms = _impl.add_terms
eval_sign = _impl.eval_sign
sign_variations = _impl.sign_variations
signed_prem = _impl.signed_prem
sturm_chain = _impl.sturm_chain

__all__ = [
    "BACKEND",
    "mul_terms",
    "add_terms",
    "eval_sign",
    "sign_variations",
    "signed_prem",
    "sturm_chain",
]
