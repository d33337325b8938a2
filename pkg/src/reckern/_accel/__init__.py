"""Backend selection for the hot accumulation loop.

The compiled core is preferred when the extension built; the NumPy core is
always available.  ``use_backend`` switches explicitly (used by the parity
tests and the benchmark).
"""

from __future__ import annotations

from . import _core_py

try:
    from . import _core as _compiled
except ImportError:
    _compiled = None

HAVE_COMPILED = _compiled is not None

_active = _compiled if HAVE_COMPILED else _core_py


def backend_name() -> str:
    return "compiled" if _active is _compiled and HAVE_COMPILED else "python"


def use_backend(name: str) -> None:
    """Select ``"compiled"``, ``"python"`` or ``"auto"``."""
    global _active
    if name == "python":
        _active = _core_py
    elif name == "compiled":
        if not HAVE_COMPILED:
            raise RuntimeError("compiled core is not available in this install")
        _active = _compiled
    elif name == "auto":
        _active = _compiled if HAVE_COMPILED else _core_py
    else:
        raise ValueError(f"unknown backend {name!r}")


def accumulate(*args, **kwargs):
    return _active.accumulate(*args, **kwargs)
