"""Kernel selection: compiled float loops when available, Python otherwise.

Exact (``Fraction``) inputs always go through the Python versions.  Setting
``SCHREIER_PURE=1`` forces the Python versions for floats too.
"""

from __future__ import annotations

import os
from fractions import Fraction

from . import _kernels_py

try:
    if os.environ.get("SCHREIER_PURE") == "1":
        raise ImportError("pure mode requested")
    from . import _kernels as _compiled
except ImportError:
    _compiled = None

BACKEND = "cython" if _compiled is not None else "python"


def _exact(values) -> bool:
    return any(isinstance(v, Fraction) for v in values)


def sign_max_gram(G):
    if _compiled is not None and not any(_exact(row) for row in G):
        return _compiled.sign_max_gram([[float(v) for v in row] for row in G])
    return _kernels_py.sign_max_gram(G)


def hxi_s1(pos, vals, p):
    if _compiled is not None and not _exact(vals) and not isinstance(p, Fraction):
        return _compiled.hxi_s1(list(pos), [float(v) for v in vals], None if p is None else float(p))
    return _kernels_py.hxi_s1(pos, vals, p)


def tsirelson_s1(pos, vals, theta):
    if _compiled is not None and not _exact(vals):
        return _compiled.tsirelson_s1(list(pos), [float(v) for v in vals], float(theta))
    return _kernels_py.tsirelson_s1(pos, vals, theta)
