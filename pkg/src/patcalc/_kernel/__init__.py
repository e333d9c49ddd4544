"""Kernel selection: compiled extension if built, numpy fallback otherwise.

Set PATCALC_NO_EXT=1 to force the fallback (used by the benchmark).
"""

import os

from . import slowcheck

if os.environ.get("PATCALC_NO_EXT"):
    impl = slowcheck
else:
    try:
        from . import _fastcheck as impl  # type: ignore[no-redef]
    except ImportError:
        impl = slowcheck

IMPL = impl.IMPL
assoc_quad = impl.assoc_quad
count_assoc_triples = impl.count_assoc_triples
