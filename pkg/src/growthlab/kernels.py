"""Kernel backend selection.

The compiled extension is used when it imports; otherwise the numpy
fallback. ``GROWTHLAB_KERNELS=python`` forces the fallback at import time and
:func:`use_backend` switches temporarily (for benchmarks and parity tests).
"""
import contextlib
import os

import numpy as np

from growthlab import _pykernels

try:
    from growthlab import _ckernels
except ImportError:  # extension not built
    _ckernels = None

ADD = 0
MUL = 1

_BACKENDS = {"python": _pykernels}
if _ckernels is not None:
    _BACKENDS["cython"] = _ckernels

if os.environ.get("GROWTHLAB_KERNELS", "").lower() == "python" or _ckernels is None:
    _active = _pykernels
else:
    _active = _ckernels


def available_backends():
    return sorted(_BACKENDS)


def backend_name():
    return "cython" if _active is _ckernels and _ckernels is not None else "python"


@contextlib.contextmanager
def use_backend(name):
    global _active
    try:
        module = _BACKENDS[name]
    except KeyError:
        raise ValueError(f"kernel backend {name!r} is not available") from None
    previous = _active
    _active = module
    try:
        yield module
    finally:
        _active = previous


def _c(a):
    return np.ascontiguousarray(a, dtype=np.int64)


def dense_sumset(x, y, max_size):
    return _active.dense_sumset(_c(x), _c(y), max_size)


def sparse_combine(x, y, op, max_size):
    return _active.sparse_combine(_c(x), _c(y), op, max_size)


def rep_count(x, t):
    return int(_active.rep_count(_c(x), int(t)))
