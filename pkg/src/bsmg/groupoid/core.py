"""Finite discrete measured groupoids with exact rational masses.

An instance is a finite window of a discrete measured groupoid: finitely many
units with positive rational masses, finitely many arrows with source, range,
inverse, and a label, and a partial product. Constructors that close their
input (group actions, partial isomorphism closures) produce a complete
product; hand-built windows may leave products undefined beyond the modeled
region, and operations that need closure refuse such windows.

Arrows are identified by dense integer ids assigned in construction order;
ties everywhere break toward the lowest id, which keeps every computation
deterministic. Arrows 0..n_units-1 are always the unit loops.
"""

from __future__ import annotations

import json
from fractions import Fraction

from .._kernels import component_labels, perm_closure
from ..errors import ClosureTooLarge, EmptySet, GroupTooLarge


def _free_reduce(word):
    out = []
    for sym in word:
        if out and out[-1] == -sym:
            out.pop()
        else:
            out.append(sym)
    return tuple(out)


class _GroupComposer:
    """Label composition for action groupoids: labels are ("g", element index)
    and multiply through the abstract group elements."""

    def __init__(self, elements, index_of):
        self.elements = elements
        self.index_of = index_of
        self._mult = {}

    def mul(self, lg, lh):
        key = (lg[1], lh[1])
        result = self._mult.get(key)
        if result is None:
            pi, pj = self.elements[key[0]], self.elements[key[1]]
            result = self.index_of[tuple(pi[pj[i]] for i in range(len(pi)))]
            self._mult[key] = result
        return ("g", result)


class _WordComposer:
    """Label composition for partial isomorphism closures: labels are reduced
    words over signed seed indices, the unit label is the empty word."""

    def __init__(self, normalizer=None):
        self.normalizer = normalizer

    def mul(self, lg, lh):
        word = _free_reduce(lg + lh)
        if self.normalizer is not None:
            word = self.normalizer(word)
        return word


class FiniteMeasuredGroupoid:
    """See module docstring. Build through the class methods, not __init__."""

    def __init__(self, unit_names, masses, src, rng, inv, labels, composer, *,
                 explicit_products=None, product_complete=True, rn_values=None,
                 principal_map=None):
        self.unit_names = tuple(unit_names)
        self.n_units = len(self.unit_names)
        self.masses = tuple(Fraction(m) for m in masses)
        if any(m <= 0 for m in self.masses):
            raise ValueError("all point masses must be positive")
        self.src = tuple(src)
        self.rng = tuple(rng)
        self.inv = tuple(inv)
        self.labels = tuple(labels)
        self._composer = composer
        # principal groupoids have exactly one arrow per unit pair, so the
        # product is endpoint lookup; the callable maps (src, rng) to an id
        self._principal = principal_map
        self._prod = dict(explicit_products) if explicit_products else {}
        self.product_complete = product_complete
        self.rn_values = tuple(rn_values) if rn_values is not None else None
        for x in range(self.n_units):
            if not (self.src[x] == self.rng[x] == x and self.inv[x] == x):
                raise ValueError("arrows 0..n_units-1 must be the unit loops")
        self._by_src_label = {}
        if composer is not None:
            for gid, (s, lab) in enumerate(zip(self.src, self.labels)):
                key = (s, lab)
                if key in self._by_src_label:
                    raise ValueError("duplicate (source, label) pair")
                self._by_src_label[key] = gid

    # -- basic structure --------------------------------------------------

    @property
    def n_arrows(self):
        return len(self.src)

    def all_arrows(self):
        return range(self.n_arrows)

    def unit_arrow(self, x):
        return x

    def is_unit_arrow(self, g):
        return g < self.n_units

    def source_fiber(self, x):
        return [g for g in range(self.n_arrows) if self.src[g] == x]

    def range_fiber(self, x):
        return [g for g in range(self.n_arrows) if self.rng[g] == x]

    def product(self, g, h):
        """g . h for s(g) = r(h); None when not composable or outside a window."""
        if self.src[g] != self.rng[h]:
            return None
        if self._principal is not None:
            return self._principal(self.src[h], self.rng[g])
        key = (g, h)
        cached = self._prod.get(key)
        if cached is not None:
            return cached
        if self._composer is None:
            return None
        label = self._composer.mul(self.labels[g], self.labels[h])
        result = self._by_src_label.get((self.src[h], label))
        if result is None:
            raise AssertionError("closed groupoid is missing a composite arrow")
        self._prod[key] = result
        return result

    @property
    def measure_preserving(self):
        return all(self.masses[self.src[g]] == self.masses[self.rng[g]]
                   for g in range(self.n_arrows))

    def mass_of(self, units):
        return sum((self.masses[x] for x in units), Fraction(0))

    def total_mass(self):
        return sum(self.masses, Fraction(0))

    def label_text(self, g):
        if self.is_unit_arrow(g):
            return "e"
        lab = self.labels[g]
        if isinstance(lab, str):
            return lab
        if lab and lab[0] == "g":
            return f"g{lab[1]}"
        return ".".join(f"s{abs(s) - 1}" + ("'" if s < 0 else "") for s in lab)

    # -- constructors ------------------------------------------------------

    @classmethod
    def from_group_action(cls, action_gens, masses=None, *,
                          group_gens=None, bound=5000):
        """Action groupoid of a finite group acting on the unit set.

        action_gens are permutations of the units. By default the group is the
        transformation group they generate; pass group_gens (permutations of
        any finite set, e.g. a regular representation) to act through a
        possibly non-faithful quotient, in which case arrows are counted per
        abstract group element. The action map is verified to be a
        homomorphism on the fly.
        """
        if not action_gens:
            raise ValueError("need at least one generator")
        n = len(action_gens[0])
        action_gens = [tuple(g) for g in action_gens]
        for g in action_gens:
            if sorted(g) != list(range(n)):
                raise ValueError("generators must be permutations of the unit set")
        if group_gens is None:
            elements = perm_closure(action_gens, bound)
            if elements is None:
                raise GroupTooLarge(f"group closure exceeds {bound} elements")
            action_of = {e: e for e in elements}
            group_elements = list(elements)
        else:
            group_gens = [tuple(g) for g in group_gens]
            if len(group_gens) != len(action_gens):
                raise ValueError("group_gens and action_gens must correspond")
            m = len(group_gens[0])
            identity = tuple(range(m))
            group_elements = [identity]
            action_of = {identity: tuple(range(n))}
            frontier = [identity]
            while frontier:
                new_frontier = []
                for elem in frontier:
                    for ggen, agen in zip(group_gens, action_gens):
                        comp = tuple(elem[ggen[i]] for i in range(m))
                        act = action_of[elem]
                        comp_act = tuple(act[agen[i]] for i in range(n))
                        known = action_of.get(comp)
                        if known is None:
                            action_of[comp] = comp_act
                            group_elements.append(comp)
                            new_frontier.append(comp)
                            if len(group_elements) > bound:
                                raise GroupTooLarge(
                                    f"group closure exceeds {bound} elements")
                        elif known != comp_act:
                            raise ValueError(
                                "action generators do not define a homomorphism")
                frontier = new_frontier
        index_of = {e: i for i, e in enumerate(group_elements)}
        if masses is None:
            masses = [Fraction(1, n)] * n
        inv_elem = []
        for e in group_elements:
            inverse = [0] * len(e)
            for i, v in enumerate(e):
                inverse[v] = i
            inv_elem.append(index_of[tuple(inverse)])
        src, rng, inv, labs = [], [], [], []
        for ei, e in enumerate(group_elements):
            act = action_of[e]
            for x in range(n):
                src.append(x)
                rng.append(act[x])
                labs.append(("g", ei))
                inv.append(inv_elem[ei] * n + act[x])
        composer = _GroupComposer(group_elements, index_of)
        G = cls(range(n), masses, src, rng, inv, labs, composer)
        G.group_elements = tuple(group_elements)
        G.action_perms = tuple(action_of[e] for e in group_elements)
        return G

    @classmethod
    def from_partial_isos(cls, n_units, seeds, masses=None, *,
                          label_normalizer=None, bound=4000):
        """Groupoid generated by partial injections of the unit set.

        Each seed is a dict {x: y}, injective. Arrows are identified by
        (source, normalized label word); distinct normalized labels give
        distinct parallel arrows even when they agree pointwise, so without a
        label_normalizer collapsing relations the closure of any recurrent
        seed is infinite and raises ClosureTooLarge.
        """
        seeds = [dict(s) for s in seeds]
        for s in seeds:
            if len(set(s.values())) != len(s):
                raise ValueError("seeds must be injective")
        if masses is None:
            masses = [Fraction(1, n_units)] * n_units
        composer = _WordComposer(label_normalizer)
        src, rng, labs = [], [], []
        by_key = {}

        def add_arrow(s, r, label):
            key = (s, label)
            existing = by_key.get(key)
            if existing is not None:
                if rng[existing] != r:
                    raise ValueError("label normalizer conflicts with the action")
                return None
            gid = len(src)
            src.append(s)
            rng.append(r)
            labs.append(label)
            by_key[key] = gid
            return gid

        for x in range(n_units):
            add_arrow(x, x, ())
        worklist = []
        for i, seed in enumerate(seeds):
            for x in sorted(seed):
                gid = add_arrow(x, seed[x], composer.mul((i + 1,), ()))
                if gid is not None:
                    worklist.append(gid)
            inv_seed = {y: x for x, y in seed.items()}
            for y in sorted(inv_seed):
                gid = add_arrow(y, inv_seed[y], composer.mul((-(i + 1),), ()))
                if gid is not None:
                    worklist.append(gid)
        cursor = 0
        while cursor < len(worklist):
            g = worklist[cursor]
            cursor += 1
            for h in range(len(src)):
                for left, right in ((g, h), (h, g)):
                    if src[left] == rng[right]:
                        label = composer.mul(labs[left], labs[right])
                        gid = add_arrow(src[right], rng[left], label)
                        if gid is not None:
                            worklist.append(gid)
                            if len(src) > bound:
                                raise ClosureTooLarge(
                                    f"closure exceeds {bound} arrows")
        inv = [0] * len(src)
        for g in range(len(src)):
            ilabel = composer.mul(tuple(-s for s in reversed(labs[g])), ())
            partner = by_key.get((rng[g], ilabel))
            if partner is None:
                raise AssertionError("closure is missing an inverse arrow")
            inv[g] = partner
        return cls(range(n_units), masses, src, rng, inv, labs, composer)

    @classmethod
    def window(cls, masses, arrows, inverse_pairs, *, unit_names=None,
               products=None, rn_values=None):
        """A finite window with explicit arrows and a possibly partial product.

        arrows: list of (source, range, label_text) for the non-unit arrows.
        inverse_pairs: list of (i, j) indices into arrows with arrow j the
        inverse of arrow i (i == j marks a self-inverse loop). Unit arrows,
        unit absorption, and g . g^-1 are filled in automatically; any other
        products must be passed explicitly (indices into arrows) and beyond
        that the product is undefined. rn_values, if given, lists the
        Radon-Nikodym value of each arrows[i]; inverses get reciprocals.
        """
        n = len(masses)
        names = tuple(unit_names) if unit_names else tuple(range(n))
        src = list(range(n))
        rng = list(range(n))
        labs = ["e"] * n
        inv = list(range(n))
        for s, r, lab in arrows:
            src.append(s)
            rng.append(r)
            labs.append(lab)
            inv.append(-1)
        paired = set()
        for i, j in inverse_pairs:
            if src[n + i] != rng[n + j] or rng[n + i] != src[n + j]:
                raise ValueError(f"arrows {i} and {j} cannot be inverses")
            inv[n + i] = n + j
            inv[n + j] = n + i
            paired.add(i)
            paired.add(j)
        if len(paired) != len(arrows):
            raise ValueError("every arrow needs an inverse pairing")
        prod = {}
        for g in range(len(src)):
            prod[(rng[g], g)] = g
            prod[(g, src[g])] = g
            prod[(g, inv[g])] = rng[g]
            prod[(inv[g], g)] = src[g]
        if products:
            for (g, h), k in products.items():
                if src[n + g] != rng[n + h]:
                    raise ValueError(f"product ({g},{h}) is not composable")
                if k is not None:
                    # None marks a composable pair whose composite lies
                    # outside the window
                    prod[(n + g, n + h)] = n + k
        rn = None
        if rn_values is not None:
            rn = [None] * len(src)
            for x in range(n):
                rn[x] = Fraction(1)
            for i, value in enumerate(rn_values):
                value = Fraction(value)
                if value <= 0:
                    raise ValueError("Radon-Nikodym values must be positive")
                if rn[n + i] not in (None, value):
                    raise ValueError("inverse pair got conflicting RN values")
                rn[n + i] = value
                partner = inv[n + i]
                if rn[partner] not in (None, 1 / value):
                    raise ValueError("inverse pair got conflicting RN values")
                rn[partner] = 1 / value
            if None in rn:
                raise ValueError("rn_values must cover every arrow")
        return cls(names, masses, src, rng, inv, labs, None,
                   explicit_products=prod, product_complete=False,
                   rn_values=rn)

    # -- serialization -----------------------------------------------------

    def to_doc(self, *, include_products=True):
        doc = {
            "units": [
                {"name": str(self.unit_names[x]),
                 "mass": str(self.masses[x])}
                for x in range(self.n_units)
            ],
            "arrows": [
                {"id": g, "source": self.src[g], "range": self.rng[g],
                 "inverse": self.inv[g], "label": self.label_text(g)}
                for g in range(self.n_arrows)
            ],
            "product_complete": self.product_complete,
        }
        if include_products:
            table = []
            for g in range(self.n_arrows):
                for h in range(self.n_arrows):
                    if self.src[g] == self.rng[h]:
                        k = self.product(g, h)
                        if k is not None:
                            table.append([g, h, k])
            doc["products"] = table
        if self.rn_values is not None:
            doc["rn"] = [str(v) for v in self.rn_values]
        return doc

    @classmethod
    def from_doc(cls, doc):
        masses = [Fraction(u["mass"]) for u in doc["units"]]
        names = [u["name"] for u in doc["units"]]
        src, rng, inv, labs = [], [], [], []
        for a in sorted(doc["arrows"], key=lambda a: a["id"]):
            src.append(a["source"])
            rng.append(a["range"])
            inv.append(a["inverse"])
            labs.append(a["label"])
        prod = {(g, h): k for g, h, k in doc.get("products", [])}
        rn = [Fraction(v) for v in doc["rn"]] if "rn" in doc else None
        return cls(names, masses, src, rng, inv, labs, None,
                   explicit_products=prod,
                   product_complete=bool(doc.get("product_complete")),
                   rn_values=rn)

    def to_json(self, **kw):
        return json.dumps(self.to_doc(**kw), sort_keys=True, separators=(",", ":"))


class Subgroupoid:
    """A wide subgroupoid: an arrow subset containing the units and closed
    under inverse and products. Shares units and masses with the parent."""

    def __init__(self, parent, arrow_ids, check=True):
        self.parent = parent
        ids = set(arrow_ids)
        ids.update(range(parent.n_units))
        self.ids = frozenset(ids)
        if check:
            self._check()

    def _check(self):
        G = self.parent
        for g in self.ids:
            if G.inv[g] not in self.ids:
                raise ValueError(f"subgroupoid not closed under inverse at {g}")
        for g in self.ids:
            for h in self.ids:
                if G.src[g] == G.rng[h]:
                    k = G.product(g, h)
                    if k is None:
                        raise ValueError(
                            "subgroupoid needs a complete ambient product")
                    if k not in self.ids:
                        raise ValueError(
                            f"subgroupoid not closed under product ({g},{h})")

    @classmethod
    def generated_by(cls, parent, arrow_ids):
        """Closure of the given arrows inside the parent."""
        ids = set(range(parent.n_units))
        work = []
        for g in arrow_ids:
            for h in (g, parent.inv[g]):
                if h not in ids:
                    ids.add(h)
                    work.append(h)
        cursor = 0
        while cursor < len(work):
            g = work[cursor]
            cursor += 1
            for h in sorted(ids):
                for left, right in ((g, h), (h, g)):
                    if parent.src[left] == parent.rng[right]:
                        k = parent.product(left, right)
                        if k is not None and k not in ids:
                            ids.add(k)
                            work.append(k)
        return cls(parent, ids, check=False)

    def __contains__(self, g):
        return g in self.ids

    def __len__(self):
        return len(self.ids)

    def sorted_ids(self):
        return sorted(self.ids)

    def full(self):
        return len(self.ids) == self.parent.n_arrows


def whole(G):
    """The full groupoid viewed as a subgroupoid of itself."""
    return Subgroupoid(G, range(G.n_arrows), check=False)


class ErgodicDecomposition:
    """Partition of the units into the components of a groupoid, a
    subgroupoid, or an explicit arrow subset."""

    def __init__(self, G, arrow_ids=None):
        if isinstance(G, Subgroupoid):
            parent = G.parent
            ids = G.sorted_ids()
        else:
            parent = G
            ids = list(arrow_ids) if arrow_ids is not None else list(
                range(G.n_arrows))
        self.parent = parent
        labels = component_labels(
            parent.n_units,
            [parent.src[g] for g in ids],
            [parent.rng[g] for g in ids],
        )
        self.component_of = tuple(labels)
        n_comp = max(labels) + 1 if labels else 0
        comps = [[] for _ in range(n_comp)]
        for x, c in enumerate(labels):
            comps[c].append(x)
        self.components = tuple(tuple(c) for c in comps)
        self.masses = tuple(parent.mass_of(c) for c in self.components)

    @property
    def n_components(self):
        return len(self.components)

    def component(self, x):
        return self.components[self.component_of[x]]

    def conditional_mass(self, x):
        """Mass of x under the normalized measure of its component."""
        return self.parent.masses[x] / self.masses[self.component_of[x]]

    def is_ergodic(self):
        return self.n_components == 1


def ergodic_decomposition(G):
    return ErgodicDecomposition(G)


def restrict(G, units):
    """(G)_A: the restriction to a nonempty unit subset.

    Returns (restricted groupoid, unit_map, arrow_map) where unit_map sends a
    parent unit index to its restricted index and arrow_map likewise for the
    surviving arrows. Masses are restricted, not renormalized.
    """
    A = sorted(set(units))
    if not A:
        raise EmptySet("restriction to the empty set")
    if isinstance(G, Subgroupoid):
        raise TypeError("restrict expects a groupoid; restrict the parent")
    inside = set(A)
    unit_map = {x: i for i, x in enumerate(A)}
    kept = [G.unit_arrow(x) for x in A]
    kept += [g for g in range(G.n_arrows)
             if not G.is_unit_arrow(g)
             and G.src[g] in inside and G.rng[g] in inside]
    arrow_map = {g: i for i, g in enumerate(kept)}
    src = [unit_map[G.src[g]] for g in kept]
    rng = [unit_map[G.rng[g]] for g in kept]
    inv = [arrow_map[G.inv[g]] for g in kept]
    labels = [G.labels[g] for g in kept]
    rn = [G.rn_values[g] for g in kept] if G.rn_values is not None else None
    if G._principal is not None:
        parent_principal = G._principal

        def local_principal(i, j, _A=A, _map=arrow_map):
            return _map[parent_principal(_A[i], _A[j])]

        sub = FiniteMeasuredGroupoid(
            [G.unit_names[x] for x in A],
            [G.masses[x] for x in A],
            src, rng, inv, labels, None,
            principal_map=local_principal, rn_values=rn)
    elif G._composer is not None:
        # The label algebra is inherited and composites of surviving arrows
        # survive, so lazy label lookup keeps working on the restriction.
        sub = FiniteMeasuredGroupoid(
            [G.unit_names[x] for x in A],
            [G.masses[x] for x in A],
            src, rng, inv, labels, G._composer, rn_values=rn)
    else:
        prod = {}
        for i, g in enumerate(kept):
            for j, h in enumerate(kept):
                if G.src[g] == G.rng[h]:
                    k = G.product(g, h)
                    if k is not None and k in arrow_map:
                        prod[(i, j)] = arrow_map[k]
        sub = FiniteMeasuredGroupoid(
            [G.unit_names[x] for x in A],
            [G.masses[x] for x in A],
            src, rng, inv, labels, None,
            explicit_products=prod,
            product_complete=G.product_complete,
            rn_values=rn)
    return sub, unit_map, arrow_map


def saturation(G, units):
    """Every unit reachable from the given set through arrows of G."""
    dec = ErgodicDecomposition(G)
    comps = {dec.component_of[x] for x in units}
    return frozenset(x for x in range(G.n_units) if dec.component_of[x] in comps)


def index_of_pair(G, ambient_ids, sub_ids, x):
    """Classes of {g in ambient : s(g) = x} under g ~ h iff g h^-1 in sub.

    Computed as orbits of left multiplication by sub, which is the same
    relation: g h^-1 = s in sub iff g = s h.
    """
    fiber = [g for g in ambient_ids if G.src[g] == x]
    sub_by_src = {}
    for s in sub_ids:
        sub_by_src.setdefault(G.src[s], []).append(s)
    unseen = set(fiber)
    classes = 0
    for g in sorted(fiber):
        if g not in unseen:
            continue
        classes += 1
        stack = [g]
        unseen.discard(g)
        while stack:
            h = stack.pop()
            for s in sub_by_src.get(G.rng[h], ()):
                k = G.product(s, h)
                if k is None:
                    raise ValueError("index needs a complete product")
                if k in unseen:
                    unseen.discard(k)
                    stack.append(k)
    return classes


def index(G, H, x):
    """[G : H]_x = the number of left H-classes of s^-1(x), a positive int."""
    if isinstance(H, Subgroupoid):
        parent, sub_ids = H.parent, H.ids
    else:
        parent, sub_ids = G, H
    return index_of_pair(parent, range(parent.n_arrows), sub_ids, x)


def local_index(G, H, x):
    """[[G : H]]_x: the index taken after restricting both groupoids to the
    H-component of x. Returned as an exact Fraction."""
    if isinstance(H, Subgroupoid):
        sub_ids = H.ids
    else:
        sub_ids = frozenset(H)
    return local_index_of_pair(G, range(G.n_arrows), sub_ids, x)


def local_index_of_pair(G, ambient_ids, sub_ids, x):
    """[[ambient : sub]]_x for two nested wide arrow subsets of G.

    Both restricted to the sub-component of x before counting, so the value
    only changes when the restriction severs genuine structure."""
    sub_ids = set(sub_ids) | set(range(G.n_units))
    dec = ErgodicDecomposition(G, sorted(sub_ids))
    Y = dec.component(x)
    GY, unit_map, arrow_map = restrict(G, Y)
    amb = [arrow_map[g] for g in ambient_ids if g in arrow_map]
    sub = [arrow_map[g] for g in sub_ids if g in arrow_map]
    return Fraction(index_of_pair(GY, amb, sub, unit_map[x]))


def validate(G):
    """Axiom check; returns a list of human-readable violations. Exhaustive,
    so intended for desk-scale instances and tests."""
    problems = []
    for x in range(G.n_units):
        if G.masses[x] <= 0:
            problems.append(f"unit {x} has non-positive mass")
    for g in range(G.n_arrows):
        gi = G.inv[g]
        if not (0 <= gi < G.n_arrows) or G.inv[gi] != g:
            problems.append(f"inverse of arrow {g} is not an involution")
            continue
        if G.src[g] != G.rng[gi] or G.rng[g] != G.src[gi]:
            problems.append(f"inverse of arrow {g} does not swap endpoints")
        k = G.product(g, gi)
        if k is not None and k != G.unit_arrow(G.rng[g]):
            problems.append(f"arrow {g} times its inverse is not the unit")
    defined = []
    for g in range(G.n_arrows):
        for h in range(G.n_arrows):
            if G.src[g] == G.rng[h]:
                k = G.product(g, h)
                if k is None:
                    if G.product_complete:
                        problems.append(f"missing product ({g},{h})")
                    continue
                if G.src[k] != G.src[h] or G.rng[k] != G.rng[g]:
                    problems.append(f"product ({g},{h}) has wrong endpoints")
                defined.append((g, h, k))
    table = {(g, h): k for g, h, k in defined}
    for g, h, k in defined:
        for f in range(G.n_arrows):
            if G.src[h] == G.rng[f]:
                hf = table.get((h, f))
                if hf is None:
                    continue
                left = table.get((k, f))
                right = table.get((g, hf))
                if left is not None and right is not None and left != right:
                    problems.append(f"associativity fails at ({g},{h},{f})")
    if G.rn_values is not None:
        for g, h, k in defined:
            if G.rn_values[g] * G.rn_values[h] != G.rn_values[k]:
                problems.append(
                    f"attached RN values not multiplicative at ({g},{h})")
    return problems
