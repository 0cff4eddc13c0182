"""Kernel selection at import time.

The compiled ``dmxy._core`` is used when importable; setting
``DMXY_PURE_PYTHON=1`` forces the numpy fallback in ``dmxy._pycore``.
"""

import os

from . import _pycore

if os.environ.get("DMXY_PURE_PYTHON") == "1":
    _impl = _pycore
    NAME = "python"
else:
    try:
        from . import _core as _impl
    except ImportError:
        _impl = _pycore
        NAME = "python"
    else:
        NAME = "compiled"

rk4_linear = _impl.rk4_linear
asym_concurrence_grid = _impl.asym_concurrence_grid


def implementations():
    """Available kernel modules keyed by name, for tests and benchmarks."""
    found = {"python": _pycore}
    try:
        from . import _core
    except ImportError:
        pass
    else:
        found["compiled"] = _core
    return found
