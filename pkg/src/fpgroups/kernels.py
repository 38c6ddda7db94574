"""Backend selection for the hot kernels.

The compiled ``_ckernels`` extension is used when it imports; otherwise the
pure-Python ``_pykernels`` fallback.  Set ``FPGROUPS_PURE_PYTHON=1`` to force
the fallback.
"""

from __future__ import annotations

import os

import numpy as np

from . import _pykernels

if os.environ.get("FPGROUPS_PURE_PYTHON"):
    _impl = _pykernels
else:
    try:
        from . import _ckernels as _impl  # type: ignore[attr-defined]
    except ImportError:
        _impl = _pykernels

BACKEND = "cython" if _impl is not _pykernels else "python"


def available_backends() -> dict:
    backends = {"python": _pykernels}
    try:
        from . import _ckernels  # type: ignore[attr-defined]

        backends["cython"] = _ckernels
    except ImportError:
        pass
    return backends


def get_backend(name: str | None = None):
    if name is None:
        return _impl
    return available_backends()[name]


def suffix_array(codes) -> np.ndarray:
    """Suffix array by prefix doubling (vectorised, O(n log² n))."""
    s = np.asarray(codes, dtype=np.int64)
    n = len(s)
    if n == 0:
        return np.zeros(0, dtype=np.int64)
    _, rank = np.unique(s, return_inverse=True)
    rank = rank.astype(np.int64).reshape(-1)
    k = 1
    while True:
        second = np.full(n, -1, dtype=np.int64)
        if k < n:
            second[: n - k] = rank[k:]
        sa = np.lexsort((second, rank))
        r1, r2 = rank[sa], second[sa]
        diff = np.empty(n, dtype=bool)
        diff[0] = True
        diff[1:] = (r1[1:] != r1[:-1]) | (r2[1:] != r2[:-1])
        new = np.cumsum(diff) - 1
        rank = np.empty(n, dtype=np.int64)
        rank[sa] = new
        if new[-1] == n - 1:
            return sa
        k *= 2


def low_index_search(ncols, relators, max_index, first_only=False, deadline=None, max_nodes=0, backend=None):
    return get_backend(backend).low_index_search(ncols, relators, max_index, first_only, deadline, max_nodes)


def lcp_array(codes, sa, backend=None):
    return get_backend(backend).lcp_array(codes, sa)


def piece_scan(sa, lcp, owner, offset, length, period, nwords, backend=None):
    return get_backend(backend).piece_scan(sa, lcp, owner, offset, length, period, nwords)
