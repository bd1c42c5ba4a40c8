"""Pure-Python reference kernels (arbitrary precision, no overflow)."""

from __future__ import annotations

from itertools import product


def first_nonzero(rows, owner, ordered, slots, p_start=0, p_stop=None):
    """First ``(p, combo, row, value)`` at which the batched form is nonzero.

    ``slots[p][j][w]`` is the candidate vector ``w`` for slot ``j`` of batch
    item ``p``. The symmetric form is described by ``ordered`` (every ordered
    index tuple of every stored component) and ``owner`` (the component each
    ordered tuple belongs to); ``rows[x][s]`` is component ``s`` evaluated at
    interpolation point ``x``. Returns None when every value vanishes.
    """
    if p_stop is None:
        p_stop = len(slots)
    n_comp = len(rows[0]) if rows else 0
    for p in range(p_start, p_stop):
        cand = slots[p]
        r = len(cand)
        sizes = [len(c) for c in cand]
        for combo_idx, combo in enumerate(product(*(range(s) for s in sizes))):
            vecs = [cand[j][combo[j]] for j in range(r)]
            comp = [0] * n_comp
            nonzero = False
            for t, idx in enumerate(ordered):
                prod = 1
                for j in range(r):
                    prod *= vecs[j][idx[j]]
                    if not prod:
                        break
                if prod:
                    comp[owner[t]] += prod
                    nonzero = True
            if not nonzero:
                continue
            for row_idx, row in enumerate(rows):
                val = 0
                for a, b in zip(row, comp):
                    if b:
                        val += a * b
                if val:
                    return p, combo_idx, row_idx, val
    return None


def convolve(a, b, offset):
    """Product of two sparse Gaussian-integer series keyed by packed frequencies.

    ``a`` and ``b`` map packed keys to ``(re, im)`` integer pairs; the packed
    key of a sum of frequencies is ``ka + kb - offset``.
    """
    out: dict[int, list[int]] = {}
    for ka, (ra, ia) in a.items():
        for kb, (rb, ib) in b.items():
            k = ka + kb - offset
            re = ra * rb - ia * ib
            im = ra * ib + ia * rb
            acc = out.get(k)
            if acc is None:
                out[k] = [re, im]
            else:
                acc[0] += re
                acc[1] += im
    return {k: (v[0], v[1]) for k, v in out.items() if v[0] or v[1]}
