"""Monte Carlo kernel backend selection.

The compiled extension is preferred when present; the pure-numpy twin is
the fallback.  Both implement the same draw protocol and produce identical
results from the same bit generator.  Set ``RSKMC_PURE_PYTHON=1`` to force
the fallback (used by the benchmark and the equivalence tests).
"""

import os

from . import pure as _pure

_forced = os.environ.get("RSKMC_PURE_PYTHON", "").strip() not in ("", "0")

if _forced:
    _impl = _pure
    BACKEND = "python"
else:
    try:
        from . import _fast as _impl  # type: ignore[attr-defined]

        BACKEND = "cython"
    except ImportError:
        _impl = _pure
        BACKEND = "python"

simulate_run_rsk = _impl.simulate_run_rsk
simulate_run_csk = _impl.simulate_run_csk


def available_backends() -> dict:
    """Importable kernel backends keyed by name."""
    out = {"python": _pure}
    try:
        from . import _fast

        out["cython"] = _fast
    except ImportError:
        pass
    return out


__all__ = ["simulate_run_rsk", "simulate_run_csk", "BACKEND", "available_backends"]
