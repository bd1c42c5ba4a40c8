# cython: language_level=3, boundscheck=False, wraparound=False, cdivision=True
"""Compiled int64 kernels.

Same contracts as ``_pykernels`` but on fixed-width integers: every multiply
and add is overflow checked and an overflow raises ``OverflowError`` so the
caller can redo the batch with Python integers. Results are never truncated.
"""

from libc.stdlib cimport malloc, free
from libcpp.unordered_map cimport unordered_map
from libcpp.vector cimport vector

import numpy as np

cdef extern from *:
    """
    static inline int qa_mul_ovf(long long a, long long b, long long *r) {
        return __builtin_mul_overflow(a, b, r);
    }
    static inline int qa_add_ovf(long long a, long long b, long long *r) {
        return __builtin_add_overflow(a, b, r);
    }
    static inline int qa_sub_ovf(long long a, long long b, long long *r) {
        return __builtin_sub_overflow(a, b, r);
    }
    """
    int qa_mul_ovf(long long a, long long b, long long *r) nogil
    int qa_add_ovf(long long a, long long b, long long *r) nogil
    int qa_sub_ovf(long long a, long long b, long long *r) nogil


cdef int _scan(const long long[:, ::1] C,
               const long long[::1] owner,
               const long long[:, ::1] ordered,
               const long long[:, :, :, ::1] V,
               Py_ssize_t p0, Py_ssize_t p1,
               long long *comp, Py_ssize_t *combo,
               Py_ssize_t *out_p, Py_ssize_t *out_combo,
               Py_ssize_t *out_row, long long *out_val) noexcept nogil:
    # 0: all zero, 1: found, -1: overflow
    cdef Py_ssize_t R = C.shape[0]
    cdef Py_ssize_t S = C.shape[1]
    cdef Py_ssize_t T = ordered.shape[0]
    cdef Py_ssize_t r = ordered.shape[1]
    cdef Py_ssize_t M = V.shape[2]
    cdef Py_ssize_t p, j, t, s, x, combo_idx
    cdef long long prod, acc, term
    cdef bint nonzero, done
    for p in range(p0, p1):
        for j in range(r):
            combo[j] = 0
        combo_idx = 0
        done = False
        while not done:
            for s in range(S):
                comp[s] = 0
            nonzero = False
            for t in range(T):
                prod = 1
                for j in range(r):
                    if qa_mul_ovf(prod, V[p, j, combo[j], ordered[t, j]], &prod):
                        return -1
                    if prod == 0:
                        break
                if prod != 0:
                    if qa_add_ovf(comp[owner[t]], prod, &comp[owner[t]]):
                        return -1
                    nonzero = True
            if nonzero:
                for x in range(R):
                    acc = 0
                    for s in range(S):
                        if comp[s] != 0 and C[x, s] != 0:
                            if qa_mul_ovf(C[x, s], comp[s], &term):
                                return -1
                            if qa_add_ovf(acc, term, &acc):
                                return -1
                    if acc != 0:
                        out_p[0] = p
                        out_combo[0] = combo_idx
                        out_row[0] = x
                        out_val[0] = acc
                        return 1
            # advance the mixed-radix counter, last slot fastest
            combo_idx += 1
            j = r - 1
            while True:
                combo[j] += 1
                if combo[j] < M:
                    break
                combo[j] = 0
                if j == 0:
                    done = True
                    break
                j -= 1
    return 0


def first_nonzero(C, owner, ordered, V, Py_ssize_t p_start=0, p_stop=None):
    """int64 version of ``_pykernels.first_nonzero`` on dense arrays.

    ``V`` has shape ``(P, r, M, d)``; slots with fewer candidates are padded
    with zero vectors by the caller.
    """
    cdef const long long[:, ::1] Cv = np.ascontiguousarray(C, dtype=np.int64)
    cdef const long long[::1] ov = np.ascontiguousarray(owner, dtype=np.int64)
    cdef const long long[:, ::1] odv = np.ascontiguousarray(ordered, dtype=np.int64)
    cdef const long long[:, :, :, ::1] Vv = np.ascontiguousarray(V, dtype=np.int64)
    cdef Py_ssize_t P = Vv.shape[0]
    cdef Py_ssize_t p1 = P if p_stop is None else min(<Py_ssize_t>p_stop, P)
    cdef Py_ssize_t S = Cv.shape[1]
    cdef Py_ssize_t r = odv.shape[1]
    cdef Py_ssize_t out_p = 0, out_combo = 0, out_row = 0
    cdef long long out_val = 0
    cdef int status
    if Cv.shape[0] == 0 or odv.shape[0] == 0 or p_start >= p1:
        return None
    cdef long long *comp = <long long *> malloc((S + 1) * sizeof(long long))
    cdef Py_ssize_t *combo = <Py_ssize_t *> malloc((r + 1) * sizeof(Py_ssize_t))
    if comp == NULL or combo == NULL:
        free(comp)
        free(combo)
        raise MemoryError()
    try:
        with nogil:
            status = _scan(Cv, ov, odv, Vv, p_start, p1, comp, combo,
                           &out_p, &out_combo, &out_row, &out_val)
    finally:
        free(comp)
        free(combo)
    if status < 0:
        raise OverflowError("int64 overflow in form evaluation")
    if status == 0:
        return None
    return int(out_p), int(out_combo), int(out_row), int(out_val)


def convolve(const long long[::1] ka, const long long[::1] ra, const long long[::1] ia,
             const long long[::1] kb, const long long[::1] rb, const long long[::1] ib,
             long long offset):
    """int64 version of ``_pykernels.convolve`` on parallel key/re/im arrays.

    Returns ``(keys, re, im)`` numpy arrays with zero entries removed.
    """
    cdef unordered_map[long long, Py_ssize_t] where
    cdef vector[long long] keys
    cdef vector[long long] res
    cdef vector[long long] ims
    cdef Py_ssize_t na = ka.shape[0], nb = kb.shape[0], i, j, pos
    cdef long long k, t1, t2, re, im
    cdef bint overflow = False
    with nogil:
        for i in range(na):
            for j in range(nb):
                if qa_add_ovf(ka[i], kb[j], &k) or qa_sub_ovf(k, offset, &k):
                    overflow = True
                    break
                if qa_mul_ovf(ra[i], rb[j], &t1) or qa_mul_ovf(ia[i], ib[j], &t2) \
                        or qa_sub_ovf(t1, t2, &re):
                    overflow = True
                    break
                if qa_mul_ovf(ra[i], ib[j], &t1) or qa_mul_ovf(ia[i], rb[j], &t2) \
                        or qa_add_ovf(t1, t2, &im):
                    overflow = True
                    break
                if where.count(k):
                    pos = where[k]
                    if qa_add_ovf(res[pos], re, &res[pos]) or qa_add_ovf(ims[pos], im, &ims[pos]):
                        overflow = True
                        break
                else:
                    where[k] = keys.size()
                    keys.push_back(k)
                    res.push_back(re)
                    ims.push_back(im)
            if overflow:
                break
    if overflow:
        raise OverflowError("int64 overflow in convolution")
    n = keys.size()
    out_k = np.empty(n, dtype=np.int64)
    out_r = np.empty(n, dtype=np.int64)
    out_i = np.empty(n, dtype=np.int64)
    cdef long long[::1] vk = out_k
    cdef long long[::1] vr = out_r
    cdef long long[::1] vi = out_i
    cdef Py_ssize_t m = 0
    for pos in range(<Py_ssize_t>n):
        if res[pos] != 0 or ims[pos] != 0:
            vk[m] = keys[pos]
            vr[m] = res[pos]
            vi[m] = ims[pos]
            m += 1
    return out_k[:m], out_r[:m], out_i[:m]
