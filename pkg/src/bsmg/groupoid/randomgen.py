"""Seeded random groupoid instances for randomized law checks.

Two instance families cover complementary ground:

  * partition groupoids: principal, products by endpoint lookup, towers of
    sub-relations from partition refinement. Cheap, and plain index counts
    classes, so the index laws get exercised with nontrivial values.
  * action groupoids of small permutation groups: parallel arrows and point
    stabilizers, so local index and the modular cocycles see multiplicity.

Everything is driven by a caller-supplied random.Random so runs with the
same seed produce the same instances.
"""

from fractions import Fraction

from ..errors import GroupTooLarge
from .core import FiniteMeasuredGroupoid, Subgroupoid


def random_masses(rng, n, *, uniform_chance=0.3):
    """Positive masses summing to 1, sometimes uniform on purpose."""
    if rng.random() < uniform_chance:
        return [Fraction(1, n)] * n
    weights = [rng.randint(1, 6) for _ in range(n)]
    total = sum(weights)
    return [Fraction(w, total) for w in weights]


def random_partition(rng, items, *, max_blocks=None):
    items = list(items)
    rng.shuffle(items)
    k = rng.randint(1, max_blocks or len(items))
    blocks = [[] for _ in range(k)]
    for i, x in enumerate(items):
        blocks[i % k].append(x)
    blocks = [sorted(b) for b in blocks if b]
    blocks.sort()
    return blocks


def refine_blocks(rng, blocks):
    """Random refinement: each block splits into one or more sub-blocks."""
    out = []
    for block in blocks:
        out.extend(random_partition(rng, block))
    out.sort()
    return out


def partition_groupoid(masses, blocks):
    """Principal groupoid whose classes are the given partition blocks."""
    n = len(masses)
    names = [f"x{i}" for i in range(n)]
    src = list(range(n))
    rng_ = list(range(n))
    labels = [f"u{i}" for i in range(n)]
    pair_id = {}
    for block in blocks:
        for s in block:
            for r in block:
                if s != r:
                    pair_id[(s, r)] = len(src)
                    src.append(s)
                    rng_.append(r)
                    labels.append(f"{s}>{r}")
    inv = list(range(n)) + [0] * (len(src) - n)
    for (s, r), gid in pair_id.items():
        inv[gid] = pair_id[(r, s)]

    def pmap(s, r):
        return s if s == r else pair_id.get((s, r))

    return FiniteMeasuredGroupoid(names, masses, src, rng_, inv, labels,
                                  None, principal_map=pmap)


def relation_arrow_ids(G, blocks):
    """Arrow ids of the sub-relation induced by a refinement partition."""
    ids = set(range(G.n_units))
    where = {}
    for bi, block in enumerate(blocks):
        for x in block:
            where[x] = bi
    for g in range(G.n_units, G.n_arrows):
        if where[G.src[g]] == where[G.rng[g]]:
            ids.add(g)
    return frozenset(ids)


def random_partition_tower(rng, *, max_units=12):
    """(G, K_ids, H_ids) with H <= K <= G principal, from nested partitions."""
    n = rng.randint(2, max_units)
    blocks_g = random_partition(rng, range(n), max_blocks=max(1, n // 2))
    blocks_k = refine_blocks(rng, blocks_g)
    blocks_h = refine_blocks(rng, blocks_k)
    G = partition_groupoid(random_masses(rng, n), blocks_g)
    return G, relation_arrow_ids(G, blocks_k), relation_arrow_ids(G, blocks_h)


def cycle_on(support, n):
    """Permutation of range(n) cycling the listed points, fixing the rest."""
    perm = list(range(n))
    for i, x in enumerate(support):
        perm[x] = support[(i + 1) % len(support)]
    return tuple(perm)


def invariant_masses(rng, gens, n):
    """Random masses constant on the orbits of the generators, so every
    arrow of the action groupoid preserves the point mass."""
    from .._kernels import component_labels
    srcs, rngs = [], []
    for gen in gens:
        srcs.extend(range(n))
        rngs.extend(gen)
    labels = component_labels(n, srcs, rngs)
    weight = {c: rng.randint(1, 6) for c in set(labels)}
    total = sum(weight[c] for c in labels)
    return [Fraction(weight[c], total) for c in labels]


def random_action_instance(rng, *, max_units=10, max_arrows=400,
                           preserve_masses=False):
    """Action groupoid of a small permutation group, abelian or dihedral.

    Normal subgroups of these groups are easy to pick, which the quotient
    and modular checks rely on. preserve_masses draws masses constant on
    orbits, which the modular cocycles require.
    """
    while True:
        n = rng.randint(2, max_units)
        style = rng.choice(("cyclic", "bicyclic", "dihedral"))
        if style == "dihedral" and n >= 3:
            rot = tuple((i + 1) % n for i in range(n))
            ref = tuple((-i) % n for i in range(n))
            gens = [rot, ref]
        elif style == "bicyclic" and n >= 4:
            pts = list(range(n))
            rng.shuffle(pts)
            cut = rng.randint(2, n - 2)
            gens = [cycle_on(pts[:cut], n), cycle_on(pts[cut:], n)]
        else:
            pts = list(range(n))
            rng.shuffle(pts)
            gens = [cycle_on(pts, n)]
        if preserve_masses:
            masses = invariant_masses(rng, gens, n)
        else:
            masses = random_masses(rng, n)
        try:
            G = FiniteMeasuredGroupoid.from_group_action(
                gens, masses, bound=max_arrows // n)
        except GroupTooLarge:
            continue
        if G.n_arrows <= max_arrows:
            return G


def identity_index(G):
    n = len(G.group_elements[0])
    return G.group_elements.index(tuple(range(n)))


def subgroup_closure(G, gen_indices):
    """Subgroup of G.group_elements (as an index set) generated by gens."""
    comp = G._composer
    seen = {identity_index(G)}
    seen.update(gen_indices)
    work = list(seen)
    while work:
        i = work.pop()
        for j in list(seen):
            for k in (comp.mul(("g", i), ("g", j))[1],
                      comp.mul(("g", j), ("g", i))[1]):
                if k not in seen:
                    seen.add(k)
                    work.append(k)
    return frozenset(seen)


def random_subgroup(rng, G, *, proper_chance=0.0):
    """Random subgroup as an element-index set; sometimes trivial or full."""
    order = len(G.group_elements)
    n_gens = rng.randint(0, 2)
    gens = [rng.randrange(order) for _ in range(n_gens)]
    lam = subgroup_closure(G, gens)
    if proper_chance and len(lam) == order and rng.random() < proper_chance:
        return random_subgroup(rng, G, proper_chance=0)
    return lam


def subgroup_arrow_ids(G, elem_indices):
    """Arrows whose group label lies in the given element-index set."""
    members = set(elem_indices)
    return frozenset(g for g in range(G.n_arrows)
                     if G.labels[g][1] in members)


def is_normal_subgroup(G, elem_indices):
    comp = G._composer
    order = len(G.group_elements)
    inv_of = {}
    for i in range(order):
        for j in range(order):
            if comp.mul(("g", i), ("g", j))[1] == identity_index(G):
                inv_of[i] = j
                break
    members = set(elem_indices)
    for gi in range(order):
        for li in members:
            conj = comp.mul(comp.mul(("g", gi), ("g", li)),
                            ("g", inv_of[gi]))[1]
            if conj not in members:
                return False
    return True


def random_wide_subgroupoid(rng, G, *, max_seeds=4):
    """Wide subgroupoid generated by a few random arrows."""
    n_seeds = rng.randint(0, max_seeds)
    seeds = [rng.randrange(G.n_arrows) for _ in range(n_seeds)]
    return Subgroupoid.generated_by(G, seeds)


def random_groupoid(rng, *, max_units=12, max_arrows=400):
    """A random instance from either family, for the broad law checks."""
    if rng.random() < 0.5:
        G, _, _ = random_partition_tower(rng, max_units=max_units)
        return G
    return random_action_instance(rng, max_units=min(max_units, 10),
                                  max_arrows=max_arrows)
