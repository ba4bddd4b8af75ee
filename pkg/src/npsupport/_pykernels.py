"""Pure-Python versions of the hot loops.  Mirrors ``_kernels.pyx`` exactly."""

from __future__ import annotations


def subset_connected(adjacency, s) -> bool:
    """BFS restricted to ``s``; ``adjacency[v]`` is any container of neighbours."""
    k = len(s)
    if k == 0:
        return False
    if k == 1:
        return True
    start = next(iter(s))
    seen = {start}
    stack = [start]
    while stack:
        u = stack.pop()
        for w in adjacency[u]:
            if w in s and w not in seen:
                seen.add(w)
                stack.append(w)
    return len(seen) == k


def _q_size(adj, prev, v):
    seen = adj[v] | (1 << v)
    frontier = adj[v] & prev
    while frontier:
        low = frontier & -frontier
        u = low.bit_length() - 1
        frontier ^= low
        new = adj[u] & ~seen
        seen |= new
        frontier |= new & prev
    return bin(seen & ~(prev | (1 << v))).count("1")


def treewidth_dp(adjmasks, n: int):
    """Subset DP over elimination prefixes.

    Returns ``(width, order)`` where ``order`` is an elimination ordering whose
    induced decomposition has exactly ``width``.
    """
    if n == 0:
        return 0, []
    full = (1 << n) - 1
    tw = [0] * (full + 1)
    arg = [0] * (full + 1)
    for mask in range(1, full + 1):
        best = n + 1
        best_v = -1
        m = mask
        while m:
            low = m & -m
            v = low.bit_length() - 1
            m ^= low
            prev = mask ^ low
            t = tw[prev]
            if t >= best:
                continue
            q = _q_size(adjmasks, prev, v)
            val = t if t > q else q
            if val < best:
                best = val
                best_v = v
        tw[mask] = best
        arg[mask] = best_v
    order = []
    mask = full
    while mask:
        v = arg[mask]
        order.append(v)
        mask ^= 1 << v
    order.reverse()
    return tw[full], order
