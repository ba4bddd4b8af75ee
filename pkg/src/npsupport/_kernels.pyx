# cython: language_level=3, boundscheck=False, wraparound=False
"""Compiled versions of the hot loops.  Same contract as ``_pykernels``."""

from libc.stdint cimport uint64_t, uint8_t
from libc.stdlib cimport malloc, free


def subset_connected(adjacency, s):
    cdef Py_ssize_t k = len(s)
    if k == 0:
        return False
    if k == 1:
        return True
    start = next(iter(s))
    seen = {start}
    stack = [start]
    cdef Py_ssize_t count = 1
    while stack:
        u = stack.pop()
        for w in adjacency[u]:
            if w in s and w not in seen:
                seen.add(w)
                stack.append(w)
                count += 1
    return count == k


cdef extern from *:
    int __builtin_ctzll(unsigned long long) nogil
    int __builtin_popcountll(unsigned long long) nogil


cdef inline int _ctz(uint64_t x) nogil:
    return __builtin_ctzll(x)


cdef inline int _popcount(uint64_t x) nogil:
    return __builtin_popcountll(x)


cdef inline int _q_size(uint64_t* adj, uint64_t prev, int v) nogil:
    cdef uint64_t vbit = (<uint64_t>1) << v
    cdef uint64_t seen = adj[v] | vbit
    cdef uint64_t frontier = adj[v] & prev
    cdef uint64_t low, new
    cdef int u
    while frontier:
        low = frontier & (~frontier + 1)
        u = _ctz(low)
        frontier ^= low
        new = adj[u] & ~seen
        seen |= new
        frontier |= new & prev
    return _popcount(seen & ~(prev | vbit))


def treewidth_dp(adjmasks, int n):
    if n == 0:
        return 0, []
    if n > 30:
        raise ValueError("treewidth_dp supports at most 30 vertices")
    cdef uint64_t full = ((<uint64_t>1) << n) - 1
    cdef uint64_t size = full + 1
    cdef uint64_t* adj = <uint64_t*>malloc(n * sizeof(uint64_t))
    cdef uint8_t* tw = <uint8_t*>malloc(size * sizeof(uint8_t))
    cdef uint8_t* arg = <uint8_t*>malloc(size * sizeof(uint8_t))
    if adj == NULL or tw == NULL or arg == NULL:
        free(adj); free(tw); free(arg)
        raise MemoryError()
    cdef int i, v, best, best_v, q, t, val
    cdef uint64_t mask, m, low, prev
    for i in range(n):
        adj[i] = <uint64_t>adjmasks[i]
    try:
        with nogil:
            tw[0] = 0
            arg[0] = 0
            mask = 1
            while mask <= full:
                best = n + 1
                best_v = 0
                m = mask
                while m:
                    low = m & (~m + 1)
                    v = _ctz(low)
                    m ^= low
                    prev = mask ^ low
                    t = tw[prev]
                    if t >= best:
                        continue
                    q = _q_size(adj, prev, v)
                    val = t if t > q else q
                    if val < best:
                        best = val
                        best_v = v
                tw[mask] = <uint8_t>best
                arg[mask] = <uint8_t>best_v
                mask += 1
        order = []
        mask = full
        while mask:
            v = arg[mask]
            order.append(v)
            mask ^= (<uint64_t>1) << v
        order.reverse()
        return int(tw[full]), order
    finally:
        free(adj)
        free(tw)
        free(arg)
