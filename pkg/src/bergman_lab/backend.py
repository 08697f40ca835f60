"""Backend selection for the hot distance kernel.

``BERGMAN_LAB_BACKEND`` forces the choice: ``compiled``, ``python`` or
``auto`` (default; compiled when the extension built, fallback otherwise).
Both backends implement the identical ``sd_batch`` contract, so results only
differ by floating-point-identical zero.
"""

import os


def _load():
    choice = os.environ.get("BERGMAN_LAB_BACKEND", "auto").lower()
    if choice not in ("auto", "compiled", "python"):
        raise ValueError(f"unknown BERGMAN_LAB_BACKEND {choice!r}")
    if choice == "python":
        from . import _fallback

        return _fallback
    try:
        from . import _speedups

        return _speedups
    except ImportError:
        if choice == "compiled":
            raise ImportError(
                "BERGMAN_LAB_BACKEND=compiled but the extension is not built"
            ) from None
        from . import _fallback

        return _fallback


impl = _load()
BACKEND_NAME = impl.BACKEND_NAME
sd_batch = impl.sd_batch
