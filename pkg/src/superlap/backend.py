"""Select the compiled kernel core at import, falling back to numpy.

``SUPERLAP_BACKEND=numpy`` (or ``cython``) forces a choice; the default is
the compiled extension when it built, else the numpy twin.  Both expose
``pairwise_weights``, ``seminorm_power``, ``pairing_power``, ``dual_power``
with identical semantics.
"""

import os

from . import _kernels_np

_FORCED = os.environ.get("SUPERLAP_BACKEND", "").strip().lower()

if _FORCED == "numpy":
    _impl = _kernels_np
    BACKEND = "numpy"
else:
    try:
        from . import _kernels_cy as _impl

        BACKEND = "cython"
    except ImportError:
        if _FORCED == "cython":
            raise
        _impl = _kernels_np
        BACKEND = "numpy"

pairwise_weights = _impl.pairwise_weights
seminorm_power = _impl.seminorm_power
pairing_power = _impl.pairing_power
dual_power = _impl.dual_power


def backend_name():
    """Name of the active kernel implementation ('cython' or 'numpy')."""
    return BACKEND
