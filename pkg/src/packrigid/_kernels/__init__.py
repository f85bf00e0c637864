"""Backend selection for the radius-iteration kernels.

The compiled Cython extension is preferred; the pure NumPy implementation is
the fallback.  Set PACKRIGID_PURE=1 to force the fallback (used by the
benchmark and the cross-checking tests).
"""

import os

from . import pure

if os.environ.get("PACKRIGID_PURE", "") == "1":
    _impl = pure
else:
    try:
        from . import _angles_cy as _impl  # type: ignore[attr-defined]
    except ImportError:
        _impl = pure

BACKEND = _impl.BACKEND_NAME
solve_radii = _impl.solve_radii
angle_residuals = _impl.angle_residuals

__all__ = ["BACKEND", "solve_radii", "angle_residuals", "pure"]
