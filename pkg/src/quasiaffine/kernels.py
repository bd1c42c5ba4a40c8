"""Backend selection for the two hot loops.

The compiled extension is used when it imports and the data fits in int64;
anything else (missing extension, ``QUASIAFFINE_PURE_PYTHON=1``, or an
overflow detected mid-kernel) runs the pure-Python kernels on unbounded ints.
Both backends return identical results.
"""

from __future__ import annotations

import logging
import os
from concurrent.futures import ThreadPoolExecutor

from . import _pykernels

logger = logging.getLogger(__name__)

try:
    if os.environ.get("QUASIAFFINE_PURE_PYTHON"):
        raise ImportError("pure Python backend forced by environment")
    import numpy as np

    from . import _ckernels
except ImportError as _exc:  # pragma: no cover - depends on the build
    _ckernels = None
    np = None
    logger.debug("compiled kernels unavailable: %s", _exc)

BACKEND = "cython" if _ckernels is not None else "python"

_INT64_MAX = 2**63 - 1


def available_backends() -> list[str]:
    return ["python"] + (["cython"] if _ckernels is not None else [])


def pad_slots(slots, dim):
    """Pad every slot of every batch item to the same candidate count."""
    width = max((len(c) for item in slots for c in item), default=0)
    zero = [0] * dim
    return [[list(c) + [zero] * (width - len(c)) for c in item] for item in slots], width


def _fits(values) -> bool:
    return all(-_INT64_MAX <= v <= _INT64_MAX for v in values)


def first_nonzero(rows, owner, ordered, slots, *, workers: int = 1, backend: str | None = None):
    """Locate the first nonzero value of a batched symmetric multilinear form.

    ``slots`` must already be padded (see :func:`pad_slots`). Returns
    ``(p, combo, row, value)`` or None; with several workers the batch is split
    into contiguous chunks and the earliest hit wins, so the answer does not
    depend on the worker count.
    """
    backend = backend or BACKEND
    if not len(slots) or not rows or not ordered:
        return None
    if np is not None and isinstance(slots, np.ndarray) and (backend != "cython" or _ckernels is None):
        slots = slots.tolist()
    if backend == "cython" and _ckernels is not None:
        try:
            C = np.array(rows, dtype=np.int64)
            V = np.ascontiguousarray(slots, dtype=np.int64)
            O = np.array(ordered, dtype=np.int64).reshape(len(ordered), -1)
            W = np.array(owner, dtype=np.int64)
        except OverflowError:
            return _pykernels.first_nonzero(rows, owner, ordered, slots)
        try:
            return _chunked(lambda a, b: _ckernels.first_nonzero(C, W, O, V, a, b), len(slots), workers)
        except OverflowError:
            logger.debug("int64 overflow, retrying with Python integers")
            if isinstance(slots, np.ndarray):
                slots = slots.tolist()
    return _chunked(
        lambda a, b: _pykernels.first_nonzero(rows, owner, ordered, slots, a, b),
        len(slots),
        1,
    )


def _chunked(fn, n, workers):
    if workers <= 1 or n < 2 * workers:
        return fn(0, n)
    step = -(-n // workers)
    bounds = [(i, min(i + step, n)) for i in range(0, n, step)]
    with ThreadPoolExecutor(max_workers=workers) as pool:
        results = list(pool.map(lambda ab: fn(*ab), bounds))
    return next((res for res in results if res is not None), None)


def convolve(a: dict, b: dict, offset: int, *, backend: str | None = None) -> dict:
    """Multiply two packed Gaussian-integer series (see ``_pykernels.convolve``)."""
    backend = backend or BACKEND
    if backend == "cython" and _ckernels is not None and a and b:
        keys_a = list(a)
        keys_b = list(b)
        flat = keys_a + keys_b + [offset]
        flat += [v for pair in a.values() for v in pair] + [v for pair in b.values() for v in pair]
        if _fits(flat):
            arr = lambda xs: np.array(xs, dtype=np.int64)  # noqa: E731
            try:
                k, re, im = _ckernels.convolve(
                    arr(keys_a), arr([v[0] for v in a.values()]), arr([v[1] for v in a.values()]),
                    arr(keys_b), arr([v[0] for v in b.values()]), arr([v[1] for v in b.values()]),
                    offset,
                )
                return dict(zip(k.tolist(), zip(re.tolist(), im.tolist())))
            except OverflowError:
                logger.debug("int64 overflow in convolution, retrying with Python integers")
    return _pykernels.convolve(a, b, offset)
