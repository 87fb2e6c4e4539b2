"""Quotients of finite measured groupoids and tree-valued invariant maps.

The quotient of G by a subgroupoid S collapses each two-sided class S.g.S to
one arrow over the S-components of the unit space. The construction never
assumes S sits normally: it builds the classes first and then checks, in
order, that the unit classes recover exactly S (kernel), that the class
product is well defined, and that every quotient arrow lifts from every fiber
point of its source component. Any failure raises NotNormal with a witness.

The second half realizes cocycle-invariant assignments into the acting tree
of a two-generator one-relator presentation: equivariant vertex maps found by
bounded search, and induced finite vertex sets for finite-index subgroupoids.
"""

from __future__ import annotations

from fractions import Fraction

from ..errors import IndexNotConstant, NotACocycle, NotNormal, VerificationFailure
from ..tree import base_vertex, canonical_vertex, neighbors
from ..words import GroupWord, same_element
from .core import ErgodicDecomposition, FiniteMeasuredGroupoid, Subgroupoid


def _class_partition(G, s_ids):
    """Union-find partition of the arrows into two-sided classes S.g.S."""
    parent = list(range(G.n_arrows))

    def find(a):
        while parent[a] != a:
            parent[a] = parent[parent[a]]
            a = parent[a]
        return a

    def union(a, b):
        ra, rb = find(a), find(b)
        if ra != rb:
            if rb < ra:
                ra, rb = rb, ra
            parent[rb] = ra

    by_src = {}
    for s in s_ids:
        by_src.setdefault(G.src[s], []).append(s)
    for g in range(G.n_arrows):
        for s in by_src.get(G.rng[g], ()):
            k = G.product(s, g)
            if k is None:
                raise ValueError("quotient needs a complete product")
            union(g, k)
    for g in range(G.n_arrows):
        for s in s_ids:
            if G.src[g] == G.rng[s]:
                k = G.product(g, s)
                if k is None:
                    raise ValueError("quotient needs a complete product")
                union(g, k)
    roots = {}
    labels = []
    for g in range(G.n_arrows):
        r = find(g)
        if r not in roots:
            roots[r] = len(roots)
        labels.append(roots[r])
    classes = [[] for _ in range(len(roots))]
    for g, c in enumerate(labels):
        classes[c].append(g)
    return labels, [tuple(c) for c in classes]


def quotient(G, S):
    """Quotient groupoid and projection map.

    Returns (Q, theta, pi) where theta maps each arrow id of G to its class
    id in Q and pi maps each unit of G to its component index. Raises
    NotNormal when S does not sit normally enough for the quotient to exist.
    """
    s_ids = S.ids if isinstance(S, Subgroupoid) else frozenset(S)
    dec = ErgodicDecomposition(G, sorted(s_ids))
    labels, classes = _class_partition(G, s_ids)

    # kernel: the classes of the unit arrows must union to exactly S
    kernel = set()
    for x in range(G.n_units):
        kernel.update(classes[labels[G.unit_arrow(x)]])
    if kernel != set(s_ids):
        extra = sorted(kernel - set(s_ids))[:4]
        missing = sorted(set(s_ids) - kernel)[:4]
        raise NotNormal(
            "unit classes do not recover the subgroupoid "
            f"(extra arrows {extra}, unreached {missing})")

    # endpoints must be constant on classes
    for c, members in enumerate(classes):
        ends = {(dec.component_of[G.src[g]], dec.component_of[G.rng[g]])
                for g in members}
        if len(ends) != 1:
            raise NotNormal(f"class {c} has mixed component endpoints")

    n_comp = dec.n_components
    # reorder classes so the unit classes come first, one per component
    unit_class_of_comp = {}
    for x in range(G.n_units):
        unit_class_of_comp[dec.component_of[x]] = labels[G.unit_arrow(x)]
    order = [unit_class_of_comp[z] for z in range(n_comp)]
    order += [c for c in range(len(classes)) if c not in set(order)]
    new_id = {c: i for i, c in enumerate(order)}
    theta = [new_id[labels[g]] for g in range(G.n_arrows)]
    q_classes = [classes[c] for c in order]

    q_src = [dec.component_of[G.src[members[0]]] for members in q_classes]
    q_rng = [dec.component_of[G.rng[members[0]]] for members in q_classes]
    q_inv = [theta[G.inv[members[0]]] for members in q_classes]

    # lifting: every class must contain an arrow out of every source point
    for c, members in enumerate(q_classes):
        sources = {G.src[g] for g in members}
        needed = set(dec.components[q_src[c]])
        if sources != needed:
            raise NotNormal(
                f"class {c} does not lift from every fiber point "
                f"(misses units {sorted(needed - sources)[:4]})")

    # product: class of g.h must not depend on the representatives
    q_prod = {}
    for a in range(len(q_classes)):
        for b in range(len(q_classes)):
            if q_src[a] != q_rng[b]:
                continue
            result = None
            for h in q_classes[b]:
                for g in q_classes[a]:
                    if G.src[g] == G.rng[h]:
                        k = G.product(g, h)
                        if k is None:
                            raise ValueError("quotient needs a complete product")
                        if result is None:
                            result = theta[k]
                        elif result != theta[k]:
                            raise NotNormal(
                                f"product of classes ({a},{b}) is not well "
                                f"defined (witness arrows {g},{h})")
            if result is None:
                raise NotNormal(f"classes ({a},{b}) have no composable lift")
            q_prod[(a, b)] = result

    q_masses = list(dec.masses)
    q_labels = ["e"] * n_comp + [f"c{c}" for c in range(n_comp, len(q_classes))]
    Q = FiniteMeasuredGroupoid(
        [f"z{z}" for z in range(n_comp)], q_masses,
        q_src, q_rng, q_inv, q_labels, None,
        explicit_products=q_prod, product_complete=True)
    Q.base_components = dec.components
    pi = list(dec.component_of)
    return Q, theta, pi


def quotient_modulus(Q, alpha):
    """Mass ratio range over source of a quotient arrow."""
    return Q.masses[Q.rng[alpha]] / Q.masses[Q.src[alpha]]


def check_group_action_quotient(G, S, Q, theta):
    """For an action groupoid G and the subgroupoid S of a normal subgroup's
    arrows, verify that Q is the action groupoid of the quotient group: the
    map (coset, component) -> class is well defined, bijective on fibers, and
    multiplicative. Raises VerificationFailure with the first discrepancy."""
    elements = G.group_elements
    n_pts = G.n_units
    s_ids = S.ids if isinstance(S, Subgroupoid) else frozenset(S)
    lam = sorted({G.labels[g][1] for g in s_ids})
    composer = G._composer
    # right cosets e.Lam as frozensets of element indices
    coset_of = {}
    cosets = []
    for ei in range(len(elements)):
        if ei in coset_of:
            continue
        members = frozenset(composer.mul(("g", ei), ("g", li))[1] for li in lam)
        cid = len(cosets)
        cosets.append(members)
        for m in members:
            coset_of[m] = cid
    dec_components = Q.base_components
    comp_of = {}
    for z, comp in enumerate(dec_components):
        for x in comp:
            comp_of[x] = z

    def arrow_id(ei, x):
        return ei * n_pts + x

    # well defined: theta constant over the coset and over the component
    table = {}
    for cid, members in enumerate(cosets):
        for z, comp in enumerate(dec_components):
            seen = {theta[arrow_id(ei, x)] for ei in members for x in comp}
            if len(seen) != 1:
                raise VerificationFailure(
                    f"coset {cid} over component {z} maps to classes {sorted(seen)}")
            table[(cid, z)] = seen.pop()
    # bijective on each fiber
    for z in range(len(dec_components)):
        image = {table[(cid, z)] for cid in range(len(cosets))}
        fiber = {alpha for alpha in range(Q.n_arrows) if Q.src[alpha] == z}
        if image != fiber:
            raise VerificationFailure(
                f"coset map is not a bijection on the fiber of component {z}")
    # multiplicative
    for cid1 in range(len(cosets)):
        for cid2 in range(len(cosets)):
            e1 = min(cosets[cid1])
            e2 = min(cosets[cid2])
            for z in range(len(dec_components)):
                x = min(dec_components[z])
                mid = comp_of[G.rng[arrow_id(e2, x)]]
                left = Q.product(table[(cid1, mid)], table[(cid2, z)])
                e12 = composer.mul(("g", e1), ("g", e2))[1]
                right = table[(coset_of[e12], z)]
                if left != right:
                    raise VerificationFailure(
                        f"coset map not multiplicative at ({cid1},{cid2},{z})")
    return True


# -- tree-valued invariant maps ---------------------------------------------


def check_word_cocycle(G, arrow_ids, rho, params):
    """rho maps arrow ids to group words; verify multiplicativity over every
    composable pair inside arrow_ids and compatibility with inverses."""
    ids = sorted(arrow_ids)
    for g in ids:
        gi = G.inv[g]
        if gi in rho and not same_element(
                rho[g] * rho[gi], GroupWord.identity(), params):
            raise NotACocycle(f"rho breaks at the inverse of arrow {g}")
    for g in ids:
        for h in ids:
            if G.src[g] == G.rng[h]:
                k = G.product(g, h)
                if k is None:
                    raise ValueError("cocycle check needs a complete product")
                if k not in rho:
                    raise NotACocycle(f"rho undefined on composite arrow {k}")
                if not same_element(rho[g] * rho[h], rho[k], params):
                    raise NotACocycle(f"rho breaks at the pair ({g},{h})")


def _translate(word, vertex):
    return canonical_vertex(word * vertex.rep_word(), vertex.params)


def _vertex_ball(params, radius):
    center = base_vertex(params)
    seen = {center}
    frontier = [center]
    for _ in range(radius):
        nxt = []
        for v in frontier:
            for _, w in neighbors(v):
                if w not in seen:
                    seen.add(w)
                    nxt.append(w)
        frontier = nxt
    return sorted(seen, key=lambda v: (len(v.form.syllables), str(v)))


def find_invariant_vertex_map(G, S, rho, params, *, radius=3):
    """Search for a vertex assignment x -> psi(x) with
    rho(g) . psi(s(g)) == psi(r(g)) for every arrow g of S.

    rho is a dict {arrow id: GroupWord} and is validated as a cocycle first.
    Candidate base vertices are drawn from the ball of the given radius
    around the standard base vertex, per S-component; returns the assignment
    dict or None when no candidate in the ball works.
    """
    s_ids = sorted(S.ids if isinstance(S, Subgroupoid) else set(S))
    check_word_cocycle(G, s_ids, rho, params)
    dec = ErgodicDecomposition(G, s_ids)
    by_src = {}
    for g in s_ids:
        by_src.setdefault(G.src[g], []).append(g)
    ball = _vertex_ball(params, radius)
    psi = {}
    for comp in dec.components:
        x0 = min(comp)
        # spanning tree of the component along lowest-id arrows
        tree_arrows = []
        seen = {x0}
        frontier = [x0]
        while frontier:
            nxt = []
            for u in frontier:
                for g in sorted(by_src.get(u, ())):
                    w = G.rng[g]
                    if w not in seen:
                        seen.add(w)
                        tree_arrows.append(g)
                        nxt.append(w)
            frontier = nxt
        assigned = None
        for cand in ball:
            trial = {x0: cand}
            for g in tree_arrows:
                trial[G.rng[g]] = _translate(rho[g], trial[G.src[g]])
            ok = all(
                _translate(rho[g], trial[G.src[g]]) == trial[G.rng[g]]
                for g in s_ids if G.src[g] in trial and G.rng[g] in trial)
            if ok:
                assigned = trial
                break
        if assigned is None:
            return None
        psi.update(assigned)
    return psi


def induce_finite_invariant_set(G, H, rho, psi, params):
    """From an H-invariant vertex map psi, build the induced finite-set map
    Psi(x) = { rho(g)^-1 . psi(r(g)) : g over the H-classes of s^-1(x) }.

    H must have constant index in G over the units (IndexNotConstant
    otherwise) and psi must be H-invariant (ValueError). The result is
    checked to be invariant under every arrow of G and to contain psi
    pointwise; both checks are structural identities, verified anyway."""
    from .pseudogroup import coset_classes

    h_ids = H.ids if isinstance(H, Subgroupoid) else frozenset(H)
    for g in sorted(h_ids):
        if _translate(rho[g], psi[G.src[g]]) != psi[G.rng[g]]:
            raise ValueError(f"psi is not invariant under arrow {g} of H")
    counts = set()
    reps_at = {}
    for x in range(G.n_units):
        classes = coset_classes(G, h_ids, x)
        counts.add(len(classes))
        reps_at[x] = [cls[0] for cls in classes]
    if len(counts) != 1:
        raise IndexNotConstant(f"fiber class counts vary: {sorted(counts)}")
    big = {}
    for x in range(G.n_units):
        vals = set()
        for g in reps_at[x]:
            vals.add(_translate(rho[g].inverse(), psi[G.rng[g]]))
        big[x] = frozenset(vals)
    for g in range(G.n_arrows):
        moved = frozenset(_translate(rho[g], v) for v in big[G.src[g]])
        if moved != big[G.rng[g]]:
            raise VerificationFailure(
                f"induced set map fails invariance at arrow {g}")
    for x in range(G.n_units):
        if psi[x] not in big[x]:
            raise VerificationFailure(f"psi({x}) missing from the induced set")
    return big
