"""Nonlocal p-diffusion solver bindings.

The heavy lifting lives in the compiled ``_core`` extension: grid and kernel
assembly, the implicit variational time stepper, the truncated-data ladder
and the verification diagnostics.
"""

from ._core import *  # noqa: F401,F403
from ._core import __doc__ as _core_doc

__all__ = [name for name in dir() if not name.startswith("_")]
__doc__ = _core_doc
