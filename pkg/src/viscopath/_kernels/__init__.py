"""Kernel backend selection.

The compiled extension is used when it imported cleanly; setting the
environment variable VISCOPATH_PURE to anything but "0" forces the numpy
fallback. ``BACKEND`` records which one is active.
"""

from __future__ import annotations

import os

from . import pure as _pure

if os.environ.get("VISCOPATH_PURE", "0") not in ("", "0"):
    _impl = _pure
    BACKEND = "pure"
else:
    try:
        from . import _native as _impl  # type: ignore[no-redef]

        BACKEND = "native"
    except ImportError:
        _impl = _pure
        BACKEND = "pure"

step_chain = _impl.step_chain

__all__ = ["BACKEND", "step_chain"]
