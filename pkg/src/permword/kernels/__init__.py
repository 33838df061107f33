"""Kernel backend selection.

The compiled extension ``permword._ckernels`` is used when importable;
otherwise (or when the environment variable PERMWORD_PURE is set to a
truthy value) the pure numpy implementations take over. Both lanes share
one API and one accumulation order, so results match exactly.
"""

import os

from . import pure as _pure

BACKEND = "python"
_impl = _pure

if os.environ.get("PERMWORD_PURE", "").strip().lower() not in ("1", "true", "yes"):
    try:
        from .. import _ckernels as _impl  # type: ignore[no-redef]

        BACKEND = "c"
    except ImportError:
        pass

track_points = _impl.track_points
convolve_steps = _impl.convolve_steps
adjacency_apply = _impl.adjacency_apply


def backend() -> str:
    """Either ``"c"`` or ``"python"``."""
    return BACKEND
