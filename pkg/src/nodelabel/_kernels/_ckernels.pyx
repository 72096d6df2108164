# cython: boundscheck=False, wraparound=False, cdivision=True
"""Compiled kernel backend; contracts match pykernels exactly."""

import numpy as np

cimport numpy as cnp

cnp.import_array()

BACKEND_KIND = "compiled"


def color_rollout(cnp.int32_t[:] indptr, cnp.int32_t[:] indices, cnp.int32_t[:] order):
    cdef Py_ssize_t n = indptr.shape[0] - 1
    colors_arr = np.zeros(n, dtype=np.int32)
    mark_arr = np.zeros(n + 2, dtype=np.int64)
    cdef cnp.int32_t[:] col = colors_arr
    cdef cnp.int64_t[:] mark = mark_arr
    cdef Py_ssize_t i, j
    cdef cnp.int32_t v, c
    cdef cnp.int64_t stamp = 0
    cdef cnp.int32_t k = 0
    for i in range(order.shape[0]):
        v = order[i]
        stamp += 1
        for j in range(indptr[v], indptr[v + 1]):
            c = col[indices[j]]
            if c:
                mark[c] = stamp
        c = 1
        while mark[c] == stamp:
            c += 1
        col[v] = c
        if c > k:
            k = c
    return colors_arr, int(k)


def cover_rollout(cnp.int32_t[:] indptr, cnp.int32_t[:] indices, cnp.int32_t[:] order):
    cdef Py_ssize_t n = indptr.shape[0] - 1
    cdef long long m = indices.shape[0] // 2
    labels_arr = np.full(n, -1, dtype=np.int32)
    cdef cnp.int32_t[:] lab = labels_arr
    cdef long long uncovered = m
    cdef Py_ssize_t i, j
    cdef cnp.int32_t v
    cdef long long newly
    cdef int steps = 0, size = 0
    for i in range(order.shape[0]):
        if uncovered == 0:
            break
        v = order[i]
        newly = 0
        for j in range(indptr[v], indptr[v + 1]):
            if lab[indices[j]] != 1:
                newly += 1
        lab[v] = 1
        uncovered -= newly
        size += 1
        steps += 1
    for i in range(n):
        if lab[i] == -1:
            lab[i] = 0
    return labels_arr, steps, size


def mis_rollout(cnp.int32_t[:] indptr, cnp.int32_t[:] indices, cnp.int32_t[:] order):
    cdef Py_ssize_t n = indptr.shape[0] - 1
    labels_arr = np.full(n, -1, dtype=np.int32)
    cdef cnp.int32_t[:] lab = labels_arr
    cdef Py_ssize_t i, j
    cdef cnp.int32_t v, take
    cdef int size = 0
    for i in range(order.shape[0]):
        v = order[i]
        take = 1
        for j in range(indptr[v], indptr[v + 1]):
            if lab[indices[j]] == 1:
                take = 0
                break
        lab[v] = take
        size += take
    return labels_arr, int(size)


cdef bint _next_perm(cnp.int32_t* a, Py_ssize_t n) noexcept nogil:
    # lexicographic next permutation; returns False after the last one
    cdef Py_ssize_t i = n - 2, j = n - 1
    cdef cnp.int32_t tmp
    while i >= 0 and a[i] >= a[i + 1]:
        i -= 1
    if i < 0:
        return False
    while a[j] <= a[i]:
        j -= 1
    tmp = a[i]; a[i] = a[j]; a[j] = tmp
    i += 1
    j = n - 1
    while i < j:
        tmp = a[i]; a[i] = a[j]; a[j] = tmp
        i += 1
        j -= 1
    return True


def best_ordering_gc(cnp.int32_t[:] indptr, cnp.int32_t[:] indices):
    cdef Py_ssize_t n = indptr.shape[0] - 1
    perm_arr = np.arange(n, dtype=np.int32)
    col_arr = np.zeros(n, dtype=np.int32)
    mark_arr = np.zeros(n + 2, dtype=np.int64)
    cdef cnp.int32_t[:] perm = perm_arr
    cdef cnp.int32_t[:] col = col_arr
    cdef cnp.int64_t[:] mark = mark_arr
    cdef cnp.int32_t best = <cnp.int32_t> (n + 1)
    cdef cnp.int64_t stamp = 0
    cdef Py_ssize_t i, j
    cdef cnp.int32_t v, c, k
    cdef bint more = True
    with nogil:
        while more:
            k = 0
            for i in range(n):
                v = perm[i]
                stamp += 1
                for j in range(indptr[v], indptr[v + 1]):
                    c = col[indices[j]]
                    if c:
                        mark[c] = stamp
                c = 1
                while mark[c] == stamp:
                    c += 1
                col[v] = c
                if c > k:
                    k = c
                if k >= best:
                    break
            else:
                if k < best:
                    best = k
            for i in range(n):
                col[i] = 0
            more = _next_perm(&perm[0], n)
    return int(best)


def best_ordering_mvc(cnp.int32_t[:] indptr, cnp.int32_t[:] indices):
    cdef Py_ssize_t n = indptr.shape[0] - 1
    cdef long long m = indices.shape[0] // 2
    if m == 0:
        return 0
    perm_arr = np.arange(n, dtype=np.int32)
    lab_arr = np.zeros(n, dtype=np.int32)
    cdef cnp.int32_t[:] perm = perm_arr
    cdef cnp.int32_t[:] lab = lab_arr
    cdef cnp.int32_t best = <cnp.int32_t> (n + 1)
    cdef long long uncovered, newly
    cdef cnp.int32_t size, v
    cdef Py_ssize_t i, j
    cdef bint more = True
    with nogil:
        while more:
            uncovered = m
            size = 0
            for i in range(n):
                if uncovered == 0:
                    break
                v = perm[i]
                newly = 0
                for j in range(indptr[v], indptr[v + 1]):
                    if lab[indices[j]] != 1:
                        newly += 1
                lab[v] = 1
                uncovered -= newly
                size += 1
                if size >= best:
                    break
            if uncovered == 0 and size < best:
                best = size
            for i in range(n):
                lab[i] = 0
            more = _next_perm(&perm[0], n)
    return int(best)


def best_ordering_mis(cnp.int32_t[:] indptr, cnp.int32_t[:] indices):
    cdef Py_ssize_t n = indptr.shape[0] - 1
    perm_arr = np.arange(n, dtype=np.int32)
    lab_arr = np.zeros(n, dtype=np.int32)
    cdef cnp.int32_t[:] perm = perm_arr
    cdef cnp.int32_t[:] lab = lab_arr
    cdef cnp.int32_t best_size = 0, size, v, take
    cdef Py_ssize_t i, j
    cdef bint more = True
    with nogil:
        while more:
            size = 0
            for i in range(n):
                v = perm[i]
                take = 1
                for j in range(indptr[v], indptr[v + 1]):
                    if lab[indices[j]] == 1:
                        take = 0
                        break
                lab[v] = take
                size += take
            if size > best_size:
                best_size = size
            for i in range(n):
                lab[i] = 0
            more = _next_perm(&perm[0], n)
    return -int(best_size)
