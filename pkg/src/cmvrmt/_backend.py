"""Kernel backend selection.

``CMVRMT_BACKEND`` may be ``auto`` (default: compiled if importable),
``compiled`` (fail if the extension is missing) or ``python``.
"""

import importlib
import os

from . import _pykernels

BACKENDS = ("compiled", "python")


def get_kernels(name: str):
    """Return the kernel module for ``name`` (``compiled`` or ``python``)."""
    if name == "python":
        return _pykernels
    if name == "compiled":
        return importlib.import_module("cmvrmt._kernels")
    raise ValueError(f"unknown backend {name!r}")


def available_backends():
    out = []
    for name in BACKENDS:
        try:
            get_kernels(name)
        except ImportError:
            continue
        out.append(name)
    return out


def _select():
    choice = os.environ.get("CMVRMT_BACKEND", "auto").lower()
    if choice == "auto":
        try:
            return "compiled", get_kernels("compiled")
        except ImportError:
            return "python", _pykernels
    return choice, get_kernels(choice)


BACKEND, kernels = _select()
