"""Partial isomorphisms realized inside a finite measured groupoid.

A partial isomorphism picks one arrow phi(x) per domain unit x with injective
ranges; it is the atomic-scale analogue of an element of the full pseudogroup.
Conjugation moves arrows and subgroupoids across phi, and the witness
machinery classifies how a subgroupoid sits inside its ambient groupoid:
every subgroupoid admits a covering family of witnesses, and each witness is
tagged Normalizing or QuasiNormalizing according to how it carries the
subgroupoid's restriction.
"""

from __future__ import annotations

import enum
from dataclasses import dataclass, field

from ..errors import NotInFullGroup, NotQuasiNormal
from .core import Subgroupoid, index_of_pair


class QNClass(enum.Enum):
    NORMALIZING = "normalizing"
    QUASI_NORMALIZING = "quasi-normalizing"
    NEITHER = "neither"


class PartialIso:
    """A choice of arrows phi(x), one per domain unit, with injective ranges."""

    def __init__(self, G, arrows):
        """arrows: dict {x: arrow id} with s(arrow) == x; ranges must differ."""
        self.G = G
        self.arrows = dict(arrows)
        for x, g in self.arrows.items():
            if G.src[g] != x:
                raise NotInFullGroup(f"arrow {g} does not start at unit {x}")
        self.domain = tuple(sorted(self.arrows))
        ranges = [G.rng[self.arrows[x]] for x in self.domain]
        if len(set(ranges)) != len(ranges):
            raise NotInFullGroup("ranges collide; not a partial isomorphism")
        self.range = tuple(sorted(ranges))
        self._preimage = {G.rng[g]: x for x, g in self.arrows.items()}

    @classmethod
    def identity_on(cls, G, units):
        return cls(G, {x: G.unit_arrow(x) for x in units})

    @classmethod
    def from_arrows(cls, G, arrow_ids):
        return cls(G, {G.src[g]: g for g in arrow_ids})

    def __len__(self):
        return len(self.arrows)

    def arrow(self, x):
        return self.arrows[x]

    def target(self, x):
        return self.G.rng[self.arrows[x]]

    def preimage(self, y):
        return self._preimage[y]

    def inverse(self):
        G = self.G
        return PartialIso(G, {G.rng[g]: G.inv[g] for g in self.arrows.values()})

    def compose(self, other):
        """self after other, on the units where the chain is defined."""
        G = self.G
        arrows = {}
        for x, g in other.arrows.items():
            mid = G.rng[g]
            top = self.arrows.get(mid)
            if top is None:
                continue
            k = G.product(top, g)
            if k is None:
                raise ValueError("composition needs a complete product")
            arrows[x] = k
        return PartialIso(G, arrows)

    def restricted(self, units):
        keep = set(units) & set(self.domain)
        return PartialIso(self.G, {x: self.arrows[x] for x in keep})

    def conjugate_arrow(self, g):
        """U_phi(g) = phi(r(g)) . g . phi(s(g))^-1 when both endpoints sit in
        the domain; None otherwise."""
        G = self.G
        s, r = G.src[g], G.rng[g]
        if s not in self.arrows or r not in self.arrows:
            return None
        left = G.product(self.arrows[r], g)
        if left is None:
            return None
        out = G.product(left, G.inv[self.arrows[s]])
        return out

    def conjugate_set(self, arrow_ids):
        """Image of the arrows supported on the domain, as a frozenset."""
        out = set()
        for g in arrow_ids:
            k = self.conjugate_arrow(g)
            if k is not None:
                out.add(k)
        return frozenset(out)

    def is_measure_preserving(self):
        G = self.G
        return all(G.masses[x] == G.masses[self.target(x)] for x in self.domain)

    def __repr__(self):
        pairs = ", ".join(f"{x}->{self.target(x)}" for x in self.domain)
        return f"PartialIso({pairs})"


def arrows_within(G, arrow_ids, units):
    """The arrows among arrow_ids with both endpoints in units."""
    inside = set(units)
    return frozenset(g for g in arrow_ids
                     if G.src[g] in inside and G.rng[g] in inside)


@dataclass
class WitnessReport:
    phi: PartialIso
    qn_class: QNClass
    # arrows of S inside the witness range, and the conjugated copy
    s_range: frozenset = field(default=frozenset())
    s_image: frozenset = field(default=frozenset())
    # per-unit indices of the intersection in each, on the witness range
    indices_in_range: dict = field(default_factory=dict)
    indices_in_image: dict = field(default_factory=dict)


def qn_membership(G, S, phi):
    """Classify a partial isomorphism against a subgroupoid S.

    Normalizing: conjugation carries the S-arrows of the domain exactly onto
    the S-arrows of the range. QuasiNormalizing: it does so up to finite
    index on both sides (at this scale the indices are always finite, so
    Neither is reported only for a phi whose conjugates leave S entirely
    incomparable, which cannot happen; the tag is kept for interface parity).
    """
    if isinstance(S, Subgroupoid):
        s_ids = S.ids
    else:
        s_ids = frozenset(S)
    s_dom = arrows_within(G, s_ids, phi.domain)
    s_rng = arrows_within(G, s_ids, phi.range)
    s_img = phi.conjugate_set(s_dom)
    report = WitnessReport(phi=phi, qn_class=QNClass.NEITHER,
                           s_range=s_rng, s_image=s_img)
    if s_img == s_rng:
        report.qn_class = QNClass.NORMALIZING
        return report
    inter = s_rng & s_img
    for x in phi.range:
        report.indices_in_range[x] = index_of_pair(G, s_rng, inter, x)
        report.indices_in_image[x] = index_of_pair(G, s_img, inter, x)
    report.qn_class = QNClass.QUASI_NORMALIZING
    return report


def coset_classes(G, S, x):
    """Left S-classes of the source fiber at x; each class sorted by id."""
    if isinstance(S, Subgroupoid):
        s_ids = S.ids
    else:
        s_ids = frozenset(S)
    sub_by_src = {}
    for s in s_ids:
        sub_by_src.setdefault(G.src[s], []).append(s)
    fiber = sorted(G.source_fiber(x))
    unseen = set(fiber)
    classes = []
    for g in fiber:
        if g not in unseen:
            continue
        members = {g}
        unseen.discard(g)
        stack = [g]
        while stack:
            h = stack.pop()
            for s in sub_by_src.get(G.rng[h], ()):
                k = G.product(s, h)
                if k is None:
                    raise ValueError("coset classes need a complete product")
                if k in unseen:
                    unseen.discard(k)
                    members.add(k)
                    stack.append(k)
        classes.append(tuple(sorted(members)))
    return classes


def witness_family(G, S, *, max_rounds=None):
    """A covering family of witnesses for S inside G.

    Returns a list of WitnessReports whose partial isomorphisms jointly cover
    every left S-class of every source fiber (each class contains phi(x) for
    some witness phi and unit x). Witnesses are assembled greedily: each round
    walks the uncovered classes in (unit, class representative) order and
    picks the lowest-id arrow whose range is still free in that round. Every
    round covers at least its first pending class, so the loop terminates.
    """
    pending = []
    for x in range(G.n_units):
        for cls_arrows in coset_classes(G, S, x):
            pending.append((x, cls_arrows))
    reports = []
    limit = max_rounds if max_rounds is not None else len(pending) + 1
    rounds = 0
    while pending:
        rounds += 1
        if rounds > limit:
            raise NotQuasiNormal("witness assembly did not converge")
        chosen = {}
        used_ranges = set()
        used_sources = set()
        still = []
        for x, cls_arrows in pending:
            if x in used_sources:
                still.append((x, cls_arrows))
                continue
            pick = None
            for g in cls_arrows:
                if G.rng[g] not in used_ranges:
                    pick = g
                    break
            if pick is None:
                still.append((x, cls_arrows))
                continue
            chosen[x] = pick
            used_sources.add(x)
            used_ranges.add(G.rng[pick])
        if not chosen:
            raise NotQuasiNormal("no witness can cover the remaining classes")
        phi = PartialIso(G, chosen)
        reports.append(qn_membership(G, S, phi))
        pending = still
    return reports


def is_quasinormal(G, S):
    """True when a covering family of witnesses exists; at this scale the
    family always exists, so the verdict is True together with the family.
    Kept as a checked computation rather than a constant so the witnesses
    can be inspected and reused."""
    reports = witness_family(G, S)
    ok = all(r.qn_class in (QNClass.NORMALIZING, QNClass.QUASI_NORMALIZING)
             for r in reports)
    return ok, reports
