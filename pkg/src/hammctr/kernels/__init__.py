"""Kernel selection: compiled extension when available, numpy fallback otherwise.

Set HAMMCTR_PURE_PY=1 to force the numpy implementation.  Both expose the
same four functions with identical outputs; `hammctr bench --suite impls`
times them against each other.
"""

import os

from . import pyimpl

if os.environ.get("HAMMCTR_PURE_PY"):
    impl = pyimpl
else:
    try:
        from . import _speedups as impl
    except ImportError:
        impl = pyimpl

IMPL = impl.IMPL

hamming_rowmax = impl.hamming_rowmax
hamming_rowmin_excl = impl.hamming_rowmin_excl
refine_partition = impl.refine_partition
light_pairs = impl.light_pairs
popcount_matrix = impl.popcount_matrix


def implementations():
    """(name, module) pairs of every available implementation."""
    impls = [("python", pyimpl)]
    try:
        from . import _speedups

        impls.append(("compiled", _speedups))
    except ImportError:
        pass
    return impls
