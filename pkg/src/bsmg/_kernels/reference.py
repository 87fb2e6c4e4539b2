"""Pure-Python kernels; always available, semantics match _speedups exactly."""


def component_labels(n, sources, ranges):
    """Connected-component labels for n nodes under edges (sources[i], ranges[i]).

    Labels are compact and ordered by first occurrence, so label 0 is the
    component of the lowest-numbered node.
    """
    parent = list(range(n))

    def find(i):
        while parent[i] != i:
            parent[i] = parent[parent[i]]
            i = parent[i]
        return i

    for a, b in zip(sources, ranges):
        ra, rb = find(a), find(b)
        if ra != rb:
            if rb < ra:
                ra, rb = rb, ra
            parent[rb] = ra
    labels = [0] * n
    seen = {}
    for i in range(n):
        root = find(i)
        if root not in seen:
            seen[root] = len(seen)
        labels[i] = seen[root]
    return labels


def perm_closure(gens, bound):
    """Closure of permutation tuples under composition, BFS from the identity.

    Returns the element list in deterministic discovery order (identity
    first), or None if the closure exceeds bound.
    """
    if not gens:
        return [()]
    n = len(gens[0])
    identity = tuple(range(n))
    elements = [identity]
    seen = {identity}
    frontier = [identity]
    while frontier:
        new_frontier = []
        for elem in frontier:
            for gen in gens:
                composed = tuple(elem[gen[i]] for i in range(n))
                if composed not in seen:
                    seen.add(composed)
                    elements.append(composed)
                    new_frontier.append(composed)
                    if len(elements) > bound:
                        return None
        frontier = new_frontier
    return elements
