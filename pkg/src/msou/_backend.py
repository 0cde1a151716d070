"""Pick the compiled kernels when they are built, the pure-Python ones
otherwise.  ``MSOU_PURE_PYTHON=1`` forces the fallback."""
import os

from . import _fallback

BACKEND = "python"
CompiledProgram = _fallback.CompiledProgram
mix_search = _fallback.mix_search

if os.environ.get("MSOU_PURE_PYTHON", "") not in ("1", "true", "yes"):
    try:
        from . import _kernels
    except ImportError:
        pass
    else:
        BACKEND = "cython"
        CompiledProgram = _kernels.CompiledProgram
        mix_search = _kernels.mix_search
