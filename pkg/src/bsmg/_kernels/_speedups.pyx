# cython: boundscheck=False, wraparound=False
"""Compiled kernels; semantics must match reference.py exactly."""

from cpython.array cimport array
import array as _array


def component_labels(int n, sources, ranges):
    cdef array parent_arr = _array.array("l", range(n))
    cdef long* parent = parent_arr.data.as_longs
    cdef long a, b, ra, rb, i, root
    for a, b in zip(sources, ranges):
        ra = a
        while parent[ra] != ra:
            parent[ra] = parent[parent[ra]]
            ra = parent[ra]
        rb = b
        while parent[rb] != rb:
            parent[rb] = parent[parent[rb]]
            rb = parent[rb]
        if ra != rb:
            if rb < ra:
                ra, rb = rb, ra
            parent[rb] = ra
    labels = [0] * n
    seen = {}
    for i in range(n):
        root = i
        while parent[root] != root:
            parent[root] = parent[parent[root]]
            root = parent[root]
        if root not in seen:
            seen[root] = len(seen)
        labels[i] = seen[root]
    return labels


def perm_closure(gens, bound):
    if not gens:
        return [()]
    cdef int n = len(gens[0])
    cdef int i
    identity = tuple(range(n))
    elements = [identity]
    seen = {identity}
    frontier = [identity]
    while frontier:
        new_frontier = []
        for elem in frontier:
            for gen in gens:
                composed = tuple([elem[gen[i]] for i in range(n)])
                if composed not in seen:
                    seen.add(composed)
                    elements.append(composed)
                    new_frontier.append(composed)
                    if len(elements) > bound:
                        return None
        frontier = new_frontier
    return elements
