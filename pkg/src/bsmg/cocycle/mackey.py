"""Type classification and Mackey ranges at finite scale.

The type of a nonsingular finite groupoid is read off the subgroup of
positive rationals generated by the Radon-Nikodym defects against a spanning
forest: trivial subgroup means a measure preserving model (type II after a
potential change), a cyclic subgroup generated by lambda < 1 means type
III_lambda, a rank-two subgroup is dense and means type III_1. Type III_0
cannot occur at one finite scale (it needs an infinite tower), so the label
exists only for interface completeness.

The Mackey range of an integer-group valued cocycle is the translation
action on the components of the skew product. For Z/m the skew product is
finite and exact; for Z the components are computed on doubling windows
until they stabilize and cross-checked against the defect subgroup.
"""

from __future__ import annotations

from dataclasses import dataclass
from fractions import Fraction
from math import gcd

from .._kernels import component_labels
from ..errors import InfiniteComponents, NotPowerValued
from ..groupoid.core import ErgodicDecomposition
from .core import radon_nikodym
from .values import GroupoidCocycle, ZModAdd


@dataclass(frozen=True)
class TypeLabel:
    kind: str  # "II", "III_lambda", "III_1", "III_0"
    lam: Fraction | None = None

    def __str__(self):
        if self.kind == "III_lambda":
            return f"III_{self.lam}"
        return self.kind.replace("_", "-") if self.kind == "III_1" else self.kind


def _factor(n):
    out = {}
    d = 2
    while d * d <= n:
        while n % d == 0:
            out[d] = out.get(d, 0) + 1
            n //= d
        d += 1
    if n > 1:
        out[n] = out.get(n, 0) + 1
    return out


def _exponent_vector(value, primes):
    num = _factor(value.numerator)
    den = _factor(value.denominator)
    return tuple(num.get(p, 0) - den.get(p, 0) for p in primes)


def _defects(G, rn_values):
    """Multiset of nontrivial spanning-forest defect values of a positive
    cocycle, pooled across all arrow-connected components."""
    by_unit = {}
    for g in range(G.n_arrows):
        by_unit.setdefault(G.src[g], []).append((g, False))
        by_unit.setdefault(G.rng[g], []).append((g, True))
    dec = ErgodicDecomposition(G)
    psi = {}
    for comp in dec.components:
        root = min(comp)
        psi[root] = Fraction(1)
        frontier = [root]
        while frontier:
            nxt = []
            for u in frontier:
                for g, backwards in sorted(by_unit.get(u, ())):
                    if backwards:
                        other = G.src[g]
                        if other not in psi:
                            psi[other] = psi[G.rng[g]] / rn_values[g]
                            nxt.append(other)
                    else:
                        other = G.rng[g]
                        if other not in psi:
                            psi[other] = psi[G.src[g]] * rn_values[g]
                            nxt.append(other)
            frontier = nxt
    defects = []
    for g in range(G.n_arrows):
        d = rn_values[g] * psi[G.src[g]] / psi[G.rng[g]]
        if d != 1:
            defects.append(d)
    return defects


def classify_type(G):
    """TypeLabel of a finite nonsingular groupoid or window; see module
    docstring. Exact rational arithmetic throughout."""
    rn = radon_nikodym(G).values
    defects = _defects(G, rn)
    if not defects:
        return TypeLabel("II")
    primes = sorted({p for d in defects
                     for p in list(_factor(d.numerator)) +
                     list(_factor(d.denominator))})
    vectors = [_exponent_vector(d, primes) for d in defects]
    base = vectors[0]
    for v in vectors[1:]:
        # parallel iff all 2x2 minors with the base vanish
        if any(base[i] * v[j] - base[j] * v[i]
               for i in range(len(primes)) for j in range(i + 1, len(primes))):
            return TypeLabel("III_1")
    content = gcd(*base) if len(base) > 1 else abs(base[0])
    direction = tuple(c // content for c in base)
    j0 = next(i for i, c in enumerate(direction) if c)
    mults = [v[j0] // direction[j0] for v in vectors]
    g0 = 0
    for m in mults:
        g0 = gcd(g0, m)
    gen = [g0 * c for c in direction]
    lam = Fraction(1)
    for p, e in zip(primes, gen):
        lam *= Fraction(p) ** e
    if lam > 1:
        lam = 1 / lam
    return TypeLabel("III_lambda", lam)


@dataclass(frozen=True)
class MackeyRange:
    """Translation action of the target group on skew-product components."""

    n_components: int
    component_of: dict      # (unit, h) -> component id
    action: tuple           # component permutation of the +1 translation
    orbit_sizes: tuple      # sorted cycle lengths of the action
    modulus: int            # m for Z/m targets


def mackey_range(G, tau, m):
    """Exact Mackey range of a Z/m valued cocycle (tau: one int per arrow)."""
    target = ZModAdd(m)
    taus = GroupoidCocycle.from_values(G, target, tau)
    n = G.n_units
    srcs, rngs = [], []
    for g in range(G.n_arrows):
        for h in range(m):
            srcs.append(G.src[g] * m + h)
            rngs.append(G.rng[g] * m + (h + taus(g)) % m)
    labels = component_labels(n * m, srcs, rngs)
    comp_of = {(x, h): labels[x * m + h] for x in range(n) for h in range(m)}
    n_comp = max(labels) + 1
    action = [None] * n_comp
    for x in range(n):
        for h in range(m):
            c1 = labels[x * m + h]
            c2 = labels[x * m + (h + 1) % m]
            if action[c1] is None:
                action[c1] = c2
            elif action[c1] != c2:
                raise AssertionError("translation is not well defined")
    seen = [False] * n_comp
    orbits = []
    for c in range(n_comp):
        if seen[c]:
            continue
        size = 0
        cur = c
        while not seen[cur]:
            seen[cur] = True
            size += 1
            cur = action[cur]
        orbits.append(size)
    return MackeyRange(n_comp, comp_of, tuple(action), tuple(sorted(orbits)), m)


def ranges_isomorphic(r1, r2):
    """Isomorphism of two Mackey ranges as cyclic-group actions: same
    modulus and the same multiset of translation orbit sizes."""
    return (r1.modulus == r2.modulus
            and r1.n_components == r2.n_components
            and r1.orbit_sizes == r2.orbit_sizes)


def _int_defect_period(G, tau_values):
    """gcd of the spanning-forest defects of an integer cocycle, per
    arrow-connected component of G; 0 means the defect subgroup is trivial."""
    by_unit = {}
    for g in range(G.n_arrows):
        by_unit.setdefault(G.src[g], []).append((g, False))
        by_unit.setdefault(G.rng[g], []).append((g, True))
    dec = ErgodicDecomposition(G)
    height = {}
    periods = []
    for comp in dec.components:
        root = min(comp)
        height[root] = 0
        frontier = [root]
        while frontier:
            nxt = []
            for u in frontier:
                for g, backwards in sorted(by_unit.get(u, ())):
                    if backwards:
                        other = G.src[g]
                        if other not in height:
                            height[other] = height[G.rng[g]] - tau_values[g]
                            nxt.append(other)
                    else:
                        other = G.rng[g]
                        if other not in height:
                            height[other] = height[G.src[g]] + tau_values[g]
                            nxt.append(other)
            frontier = nxt
        period = 0
        for g in range(G.n_arrows):
            if dec.component_of[G.src[g]] == dec.component_of[root]:
                period = gcd(period,
                             tau_values[g] + height[G.src[g]] - height[G.rng[g]])
        periods.append(period)
    return periods, dec


def mackey_range_int(G, tau, *, cap=512):
    """Mackey data of a Z valued cocycle: per-component translation period
    (0 = the flow is a free Z translation). Computed on doubling windows
    [-B, B] until the component partition over the h = 0 slab stabilizes
    twice, then cross-checked against the defect subgroup.
    Raises InfiniteComponents when the cap is hit before stabilization."""
    tau_values = tau.values if isinstance(tau, GroupoidCocycle) else (
        tuple(tau[g] for g in range(G.n_arrows)))
    n = G.n_units
    last = None
    stable = 0
    B = 4
    result = None
    while B <= cap:
        offsets = range(-B, B + 1)
        idx = {(x, h): i for i, (x, h) in enumerate(
            (x, h) for x in range(n) for h in offsets)}
        srcs, rngs = [], []
        for g in range(G.n_arrows):
            for h in offsets:
                h2 = h + tau_values[g]
                if -B <= h2 <= B:
                    srcs.append(idx[(G.src[g], h)])
                    rngs.append(idx[(G.rng[g], h2)])
        labels = component_labels(len(idx), srcs, rngs)
        # canonical partition of the central slab |h| <= 2; raw component
        # labels renumber between windows, first-occurrence ids do not
        canon = {}
        signature = tuple(
            canon.setdefault(labels[idx[(x, j)]], len(canon))
            for x in range(n) for j in range(-2, 3))
        if signature == last:
            stable += 1
            if stable >= 2:
                result = labels, idx
                break
        else:
            stable = 0
            last = signature
        B *= 2
    if result is None:
        raise InfiniteComponents(f"no stabilization within window {cap}")
    labels, idx = result
    periods, dec = _int_defect_period(G, tau_values)
    # first return time seen in the window must be consistent with the
    # defect subgroup: zero subgroup allows no return at all, period d
    # allows first returns only at multiples of d
    for ci, comp in enumerate(dec.components):
        x = min(comp)
        observed = 0
        for j in range(1, 5):
            if labels[idx[(x, j)]] == labels[idx[(x, 0)]]:
                observed = j
                break
        expected = periods[ci]
        if observed and (not expected or observed % expected):
            raise AssertionError("windowed period disagrees with defects")
    return periods


def power_exponents(values, base):
    """Write each positive rational as an integer power of base, or raise
    NotPowerValued. base must be a positive rational other than 1."""
    base = Fraction(base)
    if base <= 0 or base == 1:
        raise ValueError("base must be positive and not 1")
    out = []
    for v in values:
        v = Fraction(v)
        if v <= 0:
            raise NotPowerValued(f"{v} is not positive")
        if v == 1:
            out.append(0)
            continue
        k = 0
        cur = Fraction(1)
        found = None
        while abs(k) <= 128:
            if cur == v:
                found = k
                break
            if cur == 1 / v:
                found = -k
                break
            k += 1
            cur *= base
        if found is None:
            raise NotPowerValued(f"{v} is not a power of {base}")
        out.append(found)
    return out


def flow_type(G, base):
    """Type of a model whose Radon-Nikodym values are integer powers of
    base: the translation period n of the Mackey range of the exponent
    cocycle gives III_{base^n} (n > 0) or II (free translation).
    Returns one TypeLabel per arrow-connected component of G."""
    rn = radon_nikodym(G).values
    exps = power_exponents(rn, base)
    periods = mackey_range_int(G, exps)
    base = Fraction(base)
    labels = []
    for n in periods:
        if n == 0:
            labels.append(TypeLabel("II"))
        else:
            lam = base ** n
            if lam > 1:
                lam = 1 / lam
            labels.append(TypeLabel("III_lambda", lam))
    return labels


def one_loop_model(loop_values, *, mass=Fraction(1)):
    """A single-unit window carrying one loop per given Radon-Nikodym value
    (with its inverse); the minimal nonsingular test pattern."""
    from ..groupoid.core import FiniteMeasuredGroupoid

    arrows = []
    pairs = []
    rn = []
    for i, v in enumerate(loop_values):
        v = Fraction(v)
        arrows.append((0, 0, f"u{i}"))
        arrows.append((0, 0, f"u{i}'"))
        pairs.append((2 * i, 2 * i + 1))
        rn.extend([v, 1 / v])
    return FiniteMeasuredGroupoid.window(
        [mass], arrows, pairs, rn_values=rn)


def scaled_product_model(ratio, n, *, masses=None):
    """An n-cycle window whose single defect is ratio**n: arrows i -> i+1
    each carrying Radon-Nikodym value ratio. Its type is III_{ratio**n}
    (mapped below 1) and the exponent flow has translation period n."""
    from ..groupoid.core import FiniteMeasuredGroupoid

    ratio = Fraction(ratio)
    if masses is None:
        masses = [Fraction(1, n)] * n
    arrows = []
    pairs = []
    rn = []
    for i in range(n):
        arrows.append((i, (i + 1) % n, f"s{i}"))
        arrows.append(((i + 1) % n, i, f"s{i}'"))
        pairs.append((2 * i, 2 * i + 1))
        rn.extend([ratio, 1 / ratio])
    return FiniteMeasuredGroupoid.window(masses, arrows, pairs, rn_values=rn)
