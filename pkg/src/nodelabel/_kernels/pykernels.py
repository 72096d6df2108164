"""Pure-Python kernel backend.

Same contracts as the compiled module `_ckernels`; every function here must
return bit-identical results to its compiled twin (all-integer work, same
iteration order). Used when the extension is absent or NODELABEL_PURE_PYTHON
is set.
"""

from __future__ import annotations

from itertools import permutations

import numpy as np

BACKEND_KIND = "python"


def color_rollout(indptr, indices, order):
    """Greedy coloring along `order` (smallest feasible color, 1-based).

    Returns (colors int32 array, number of distinct colors)."""
    n = len(indptr) - 1
    colors = np.zeros(n, dtype=np.int32)
    mark = [0] * (n + 2)
    stamp = 0
    k = 0
    ip = indptr
    idx = indices
    col = colors
    for v in order:
        v = int(v)
        stamp += 1
        for j in range(ip[v], ip[v + 1]):
            c = col[idx[j]]
            if c:
                mark[c] = stamp
        c = 1
        while mark[c] == stamp:
            c += 1
        col[v] = c
        if c > k:
            k = c
    return colors, k


def cover_rollout(indptr, indices, order):
    """Vertex-cover rule along `order`: label 1 while edges remain uncovered,
    then bulk-assign 0 to the rest.

    Returns (labels int32 array, rule_steps, cover_size)."""
    n = len(indptr) - 1
    m = len(indices) // 2
    labels = np.full(n, -1, dtype=np.int32)
    uncovered = m
    steps = 0
    size = 0
    for v in order:
        if uncovered == 0:
            break
        v = int(v)
        newly = 0
        for j in range(indptr[v], indptr[v + 1]):
            if labels[indices[j]] != 1:
                newly += 1
        labels[v] = 1
        uncovered -= newly
        size += 1
        steps += 1
    labels[labels == -1] = 0
    return labels, steps, size


def mis_rollout(indptr, indices, order):
    """Independent-set rule along `order`: label 1 unless a neighbor already
    has 1. Returns (labels int32 array, set_size)."""
    n = len(indptr) - 1
    labels = np.full(n, -1, dtype=np.int32)
    size = 0
    for v in order:
        v = int(v)
        take = 1
        for j in range(indptr[v], indptr[v + 1]):
            if labels[indices[j]] == 1:
                take = 0
                break
        labels[v] = take
        size += take
    return labels, size


def best_ordering_gc(indptr, indices):
    """Min distinct colors over all n! orderings. n <= 9 enforced by caller."""
    n = len(indptr) - 1
    best = n + 1
    ip = [int(x) for x in indptr]
    idx = [int(x) for x in indices]
    col = [0] * n
    mark = [0] * (n + 2)
    stamp = 0
    for perm in permutations(range(n)):
        k = 0
        stamp0 = stamp
        for v in perm:
            stamp0 += 1
            for j in range(ip[v], ip[v + 1]):
                c = col[idx[j]]
                if c:
                    mark[c] = stamp0
            c = 1
            while mark[c] == stamp0:
                c += 1
            col[v] = c
            if c > k:
                k = c
            if k >= best:
                break
        else:
            if k < best:
                best = k
        stamp = stamp0
        for v in perm:
            col[v] = 0
    return best


def best_ordering_mvc(indptr, indices):
    """Min cover size over all orderings under the cover rule."""
    n = len(indptr) - 1
    m = len(indices) // 2
    if m == 0:
        return 0
    best = n + 1
    ip = [int(x) for x in indptr]
    idx = [int(x) for x in indices]
    lab = [0] * n  # 1 = in cover, 0 = undecided/out
    for perm in permutations(range(n)):
        uncovered = m
        size = 0
        for v in perm:
            if uncovered == 0:
                break
            newly = 0
            for j in range(ip[v], ip[v + 1]):
                if lab[idx[j]] != 1:
                    newly += 1
            lab[v] = 1
            uncovered -= newly
            size += 1
            if size >= best:
                break
        if uncovered == 0 and size < best:
            best = size
        for v in perm:
            lab[v] = 0
    return best


def best_ordering_mis(indptr, indices):
    """Min cost (= -max independent-set size) over all orderings."""
    n = len(indptr) - 1
    best_size = 0
    ip = [int(x) for x in indptr]
    idx = [int(x) for x in indices]
    lab = [0] * n
    for perm in permutations(range(n)):
        size = 0
        for v in perm:
            take = 1
            for j in range(ip[v], ip[v + 1]):
                if lab[idx[j]] == 1:
                    take = 0
                    break
            lab[v] = take
            size += take
        if size > best_size:
            best_size = size
        for v in perm:
            lab[v] = 0
    return -best_size
