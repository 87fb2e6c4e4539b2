"""Exact simulation of the coupling dynamics on [0,1) x (truncated ring).

The continuous picture is the group generated by a line translation, a
compact ring shift, and a scaling letter. A run can only hold a finite
shadow: the line coordinate is kept as an exact affine expression a + b*theta
(so irrational theta still compares decidably), the ring coordinate is a
TruncatedProfiniteInt with explicit level, and every scaling letter consumes
or produces one level on the ring side.

theta itself comes in three flavors. Exact rationals and the golden ratio
are fully decidable (golden sign tests reduce to comparing u^2 against 5 w^2,
no intervals involved); a raw interval theta answers only what its width can
support and raises PrecisionError on anything it cannot.
"""

from __future__ import annotations

import math
from dataclasses import dataclass
from fractions import Fraction
from math import gcd

from .errors import (
    LevelBudgetExceeded,
    NotErgodic,
    ParamMismatch,
    PrecisionError,
    VerificationFailure,
)
from .profinite import TruncatedProfiniteInt
from .words import GroupWord, commutator, is_identity, modular_hom, same_element


# -- theta ------------------------------------------------------------------

class ThetaValue:
    """A nonzero translation length: rational, golden ratio, or interval."""

    __slots__ = ("kind", "frac", "lo", "hi")

    def __init__(self, kind, frac=None, lo=None, hi=None):
        self.kind = kind
        self.frac = frac
        self.lo = lo
        self.hi = hi

    @classmethod
    def from_rational(cls, value):
        value = Fraction(value)
        if value == 0:
            raise ValueError("theta must be nonzero")
        return cls("rational", frac=value)

    @classmethod
    def golden(cls):
        return cls("golden")

    @classmethod
    def from_interval(cls, lo, hi):
        lo, hi = Fraction(lo), Fraction(hi)
        if not lo <= hi:
            raise ValueError("empty interval")
        if lo <= 0 <= hi:
            raise ValueError("theta interval must not contain zero")
        return cls("interval", lo=lo, hi=hi)

    @property
    def is_rational(self):
        return self.kind == "rational"

    def __float__(self):
        if self.kind == "rational":
            return float(self.frac)
        if self.kind == "golden":
            return (1 + math.sqrt(5)) / 2
        return float((self.lo + self.hi) / 2)

    def bounds(self, depth=40):
        """Exact rational bounds lo <= theta <= hi. For the golden ratio
        these are consecutive Fibonacci convergents at the given depth."""
        if self.kind == "rational":
            return self.frac, self.frac
        if self.kind == "interval":
            return self.lo, self.hi
        a, b = _fib(depth), _fib(depth + 1)
        c, d = b, a + b
        lo, hi = Fraction(b, a), Fraction(d, c)
        return (lo, hi) if lo <= hi else (hi, lo)

    def __repr__(self):
        if self.kind == "rational":
            return f"ThetaValue({self.frac})"
        if self.kind == "golden":
            return "ThetaValue(golden)"
        return f"ThetaValue([{self.lo}, {self.hi}])"


def _fib(n):
    a, b = 0, 1
    for _ in range(n):
        a, b = b, a + b
    return a


@dataclass(frozen=True)
class ThetaAffine:
    """The exact value a + b*theta for whichever theta is in play."""

    a: Fraction
    b: Fraction

    def __add__(self, other):
        o = as_affine(other)
        return ThetaAffine(self.a + o.a, self.b + o.b)

    def __sub__(self, other):
        o = as_affine(other)
        return ThetaAffine(self.a - o.a, self.b - o.b)

    def scale(self, c):
        c = Fraction(c)
        return ThetaAffine(self.a * c, self.b * c)

    def __repr__(self):
        return f"({self.a} + {self.b}*theta)"


def as_affine(x):
    if isinstance(x, ThetaAffine):
        return x
    return ThetaAffine(Fraction(x), Fraction(0))


def affine_sign(theta, value):
    """Exact sign of a + b*theta: -1, 0, or +1."""
    value = as_affine(value)
    a, b = value.a, value.b
    if theta.kind == "rational":
        v = a + b * theta.frac
        return (v > 0) - (v < 0)
    if theta.kind == "golden":
        # 2(a + b*phi) = (2a + b) + b*sqrt(5)
        u, w = 2 * a + b, b
        if w == 0:
            return (u > 0) - (u < 0)
        if u == 0:
            return 1 if w > 0 else -1
        if u > 0 and w > 0:
            return 1
        if u < 0 and w < 0:
            return -1
        big = u * u > 5 * w * w
        if u > 0:
            return 1 if big else -1
        return -1 if big else 1
    vlo = a + b * (theta.lo if b >= 0 else theta.hi)
    vhi = a + b * (theta.hi if b >= 0 else theta.lo)
    if vlo > 0:
        return 1
    if vhi < 0:
        return -1
    if vlo == vhi == 0:
        return 0
    raise PrecisionError(f"cannot decide the sign of {value} on {theta!r}")


def affine_floor(theta, value):
    """Largest integer n with n <= a + b*theta, decided exactly."""
    value = as_affine(value)
    if theta.kind == "rational":
        return math.floor(value.a + value.b * theta.frac)
    n = math.floor(float(value.a) + float(value.b) * float(theta))
    # float gave a candidate; exact signs settle the fencepost
    while affine_sign(theta, value - n) < 0:
        n -= 1
    while affine_sign(theta, value - (n + 1)) >= 0:
        n += 1
    return n


def theta_is_positive(theta):
    if theta.kind == "rational":
        return theta.frac > 0
    if theta.kind == "golden":
        return True
    return theta.lo > 0


def div_by_theta(theta, value):
    """(a + b*theta) / theta as an exact affine value (rational or golden)."""
    value = as_affine(value)
    if theta.kind == "rational":
        return ThetaAffine(value.a / theta.frac + value.b, Fraction(0))
    if theta.kind == "golden":
        # 1/phi = phi - 1, so (a + b phi)/phi = (b - a) + a phi
        return ThetaAffine(value.b - value.a, value.a)
    raise PrecisionError("exact division by an interval theta")


# -- the return-time cocycle -------------------------------------------------

def _check_fundamental(theta, x, width):
    """0 <= x < width, decided exactly; width is affine."""
    if affine_sign(theta, as_affine(x)) < 0:
        raise ValueError(f"{x} is negative")
    if affine_sign(theta, as_affine(width) - as_affine(x)) <= 0:
        raise ValueError(f"{x} is not below {width}")


def _abs_theta(theta):
    if theta.kind == "rational":
        return ThetaAffine(abs(theta.frac), Fraction(0))
    if theta.kind == "golden":
        return ThetaAffine(Fraction(0), Fraction(1))
    if theta.lo > 0:
        return ThetaAffine(Fraction(0), Fraction(1))
    return ThetaAffine(Fraction(0), Fraction(-1))


def beta_cocycle(n, x, theta):
    """The unique integer m with x - n + theta*m in [0, |theta|).

    x must already lie in [0, |theta|). Exact for rational theta and the
    golden ratio; an interval theta that cannot separate the two candidate
    values raises PrecisionError.
    """
    n = int(n)
    width = _abs_theta(theta)
    _check_fundamental(theta, x, width)
    shifted = ThetaAffine(Fraction(n), Fraction(0)) - as_affine(x)
    if theta.kind == "interval":
        lo, hi = theta.lo, theta.hi
        v = shifted.a
        q1, q2 = v / lo, v / hi
        if lo > 0:
            c1, c2 = math.ceil(q1), math.ceil(q2)
        else:
            c1, c2 = math.floor(q1), math.floor(q2)
        if c1 != c2:
            raise PrecisionError(f"interval theta cannot place {v}")
        m = c1
    else:
        quotient = div_by_theta(theta, shifted)
        if theta_is_positive(theta):
            m = -affine_floor(theta, quotient.scale(-1))
        else:
            m = affine_floor(theta, quotient)
    landed = as_affine(x) - ThetaAffine(Fraction(n), Fraction(0)) + \
        _theta_times(theta, m)
    if theta.kind != "interval":
        if affine_sign(theta, landed) < 0 or \
                affine_sign(theta, width - landed) <= 0:
            raise AssertionError("return time left the fundamental window")
    return m


def _theta_times(theta, m):
    if theta.kind == "rational":
        return ThetaAffine(theta.frac * m, Fraction(0))
    return ThetaAffine(Fraction(0), Fraction(m))


def beta_step(n, x, theta):
    """(m, landing point): the return time together with x - n + theta*m.
    The landing point is a Fraction for rational theta, affine otherwise."""
    m = beta_cocycle(n, x, theta)
    landed = as_affine(x) - ThetaAffine(Fraction(n), Fraction(0)) + \
        _theta_times(theta, m)
    if theta.kind == "rational":
        return m, landed.a + landed.b * theta.frac
    return m, landed


# -- the scaling homomorphism on the line coordinate -------------------------

@dataclass(frozen=True)
class LTheta:
    """l(w) = coefficient * theta; breakdown maps scaling height to the
    signed count of translation letters applied at that height."""

    coefficient: Fraction
    breakdown: tuple
    in_hom_domain: bool

    def value(self, theta):
        return _theta_times(theta, 1).scale(self.coefficient)


def l_theta(word, params):
    """Line coordinate of the embedded word, as a multiple of theta.

    The translation letter contributes theta scaled by (q/p)^height, where
    height is the running scaling-letter exponent sum to its left; the value
    is theta-linear, so one rational coefficient captures every theta at
    once and l_theta = theta * l_1 holds identically. On the kernel of the
    modular homomorphism the coefficient is additive.
    """
    height = 0
    acc = {}
    for letter, exp in word.runs:
        if letter == "t":
            height += exp
        else:
            acc[height] = acc.get(height, 0) + exp
    ratio = Fraction(params.q, params.p)
    coefficient = sum((c * ratio ** h for h, c in acc.items()), Fraction(0))
    breakdown = tuple(sorted((h, c) for h, c in acc.items() if c))
    return LTheta(coefficient, breakdown,
                  modular_hom(word, params) == 1)


def n_element_words(params, count=10):
    """Distinct nontrivial words with trivial modular value and zero line
    coordinate: commutator-built elements of the kernel of both maps."""
    a = GroupWord.a()
    t = GroupWord.t()

    def conj(g, w):
        return g * w * g.inverse()

    c1 = commutator(a, conj(t, a))
    c2 = commutator(a, conj(t ** 2, a))
    c3 = commutator(a ** 2, conj(t, a))
    pool = [c1, c2, c3,
            commutator(a, conj(t, a ** 2)),
            commutator(a ** 3, conj(t, a)),
            c1 * c1, c1 * c2, c2 * c1, c1 * c3,
            conj(a, c1), conj(a ** 2, c1), conj(t, c1),
            conj(t.inverse(), c1), c1.inverse(), c1 * c1 * c1]
    out = []
    for w in pool:
        lt = l_theta(w, params)
        if not lt.in_hom_domain or lt.coefficient != 0:
            continue
        if is_identity(w, params):
            continue
        if any(same_element(w, seen, params) for seen in out):
            continue
        out.append(w)
        if len(out) == count:
            return out
    raise ValueError(f"only found {len(out)} kernel elements, wanted {count}")


# -- the coupling action ------------------------------------------------------

@dataclass(frozen=True, eq=False)
class CouplingPoint:
    """Line coordinate in [0, 1) plus a truncated ring coordinate."""

    x: object               # Fraction or ThetaAffine
    kappa: TruncatedProfiniteInt

    def _key(self):
        xa = as_affine(self.x)
        return (xa.a, xa.b, self.kappa)

    def __eq__(self, other):
        if not isinstance(other, CouplingPoint):
            return NotImplemented
        return self._key() == other._key()

    def __hash__(self):
        return hash(self._key())


def coupling_point(params, x, kappa_residue, level):
    return CouplingPoint(x, TruncatedProfiniteInt(params, kappa_residue, level))


def _wrap_x(theta, x):
    j = affine_floor(theta, x)
    return x - ThetaAffine(Fraction(j), Fraction(0)), j


def coupling_action(word, pt, theta, params=None, *, budget=None):
    """Image of pt under the embedded word, reduced to [0,1) x ring.

    The rightmost letter acts first. The translation letter adds theta to x
    and 1 to kappa, then both are shifted back by the integer part of x.
    The scaling letter divides kappa by p with remainder r (consuming one
    p0-level, gaining one q0-level), sends x to (q/p)(x - r), multiplies
    the quotient by q, and wraps; its inverse mirrors with p and q swapped.
    budget, if given, caps the total number of scaling letters applied.
    """
    params = params or pt.kappa.params
    if pt.kappa.params != params:
        raise ParamMismatch(f"{pt.kappa.params} vs {params}")
    if budget is not None:
        spent = sum(abs(e) for letter, e in word.runs if letter == "t")
        if spent > budget:
            raise LevelBudgetExceeded(f"{spent} scaling letters, budget {budget}")
    x = as_affine(pt.x)
    if affine_sign(theta, x) < 0 or \
            affine_sign(theta, ThetaAffine(Fraction(1), Fraction(0)) - x) <= 0:
        raise ValueError("point is outside the fundamental domain")
    kappa = pt.kappa
    ap, aq = abs(params.p), abs(params.q)
    for letter, exp in reversed(word.runs):
        if letter == "a":
            x = x + _theta_times(theta, exp)
            x, j = _wrap_x(theta, x)
            kappa = kappa + (exp - j)
            continue
        step = 1 if exp > 0 else -1
        for _ in range(abs(exp)):
            K, L = kappa.level
            if step == 1:
                if K < 1:
                    raise LevelBudgetExceeded(
                        f"scaling letter needs a p0-level, at {kappa.to_text()}")
                r = kappa.residue % ap
                quo = (kappa.residue - r) // params.p
                x = (x - ThetaAffine(Fraction(r), Fraction(0))).scale(
                    Fraction(params.q, params.p))
                x, j = _wrap_x(theta, x)
                kappa = TruncatedProfiniteInt(
                    params, params.q * quo - j, (K - 1, L + 1))
            else:
                if L < 1:
                    raise LevelBudgetExceeded(
                        f"inverse scaling needs a q0-level, at {kappa.to_text()}")
                r = kappa.residue % aq
                quo = (kappa.residue - r) // params.q
                x = (x - ThetaAffine(Fraction(r), Fraction(0))).scale(
                    Fraction(params.p, params.q))
                x, j = _wrap_x(theta, x)
                kappa = TruncatedProfiniteInt(
                    params, params.p * quo - j, (K + 1, L - 1))
    if theta.kind == "rational":
        x = x.a + x.b * theta.frac
    return CouplingPoint(x, kappa)


# -- rotation model -----------------------------------------------------------

@dataclass(frozen=True)
class OrbitReport:
    kind: str               # "rational" or "irrational"
    period: int | None
    degenerate: bool
    grid_points: int | None
    discrepancy: Fraction | None
    steps: int


def rotation_model_orbit(theta, N, steps=0):
    """Orbit of the rotation by theta - 1 on a circle of circumference N.

    Rational theta = u/v lives on the grid (1/v)Z / NZ: the exact minimal
    period is returned, flagged degenerate when the rotation is trivial on
    the circle. The golden ratio returns the exact star discrepancy of the
    first `steps` points, computed on a Fibonacci convergent grid fine
    enough that the convergent and the true orbit cannot differ at the
    reported scale.
    """
    if N < 1:
        raise ValueError("N must be positive")
    if theta.kind == "rational":
        u, v = theta.frac.numerator, theta.frac.denominator
        s = u - v
        grid = N * v
        period = 1 if s == 0 else grid // gcd(abs(s), grid)
        return OrbitReport("rational", period, s % grid == 0, grid, None, 0)
    if theta.kind != "golden":
        raise ValueError("orbit statistics need a rational or golden theta")
    if steps < 1:
        raise ValueError("steps must be positive for the irrational path")
    m = 2
    while _fib(m + 1) < steps * steps:
        m += 1
    F, F1 = _fib(m), _fib(m + 1)
    denom = F1 * N
    positions = sorted((i * F) % denom for i in range(steps))
    # star discrepancy of s_i/denom: max_i max(i/n - s_i, s_i - (i-1)/n)
    best = 0
    n = steps
    for i, s in enumerate(positions, start=1):
        best = max(best, i * denom - s * n, s * n - (i - 1) * denom)
    return OrbitReport("irrational", None, False, None,
                       Fraction(best, n * denom), steps)


# -- Cesaro mixing diagnostics ------------------------------------------------

@dataclass(frozen=True)
class CylinderSet:
    """A cylinder on the two-sided Bernoulli(1/2) shift: coordinate -> bit."""

    fixed: tuple

    @staticmethod
    def of(mapping):
        items = tuple(sorted((int(c), int(b)) for c, b in mapping.items()))
        if any(b not in (0, 1) for _, b in items):
            raise ValueError("bits must be 0 or 1")
        if len({c for c, _ in items}) != len(items):
            raise ValueError("repeated coordinate")
        return CylinderSet(items)

    def shifted(self, m):
        return CylinderSet(tuple((c + m, b) for c, b in self.fixed))


class BernoulliBase:
    """Finite shadow of the Bernoulli(1/2) full shift: coordinates are
    confined to [-window, window], measures are exact dyadic rationals."""

    def __init__(self, window=2 ** 15):
        self.window = window

    def _check(self, cyl):
        for c, _ in cyl.fixed:
            if abs(c) > self.window:
                raise ValueError(f"coordinate {c} leaves the window")

    def measure(self, cyl):
        self._check(cyl)
        return Fraction(1, 2 ** len(cyl.fixed))

    def meet_measure(self, c1, c2):
        self._check(c1)
        self._check(c2)
        merged = dict(c1.fixed)
        for c, b in c2.fixed:
            if merged.setdefault(c, b) != b:
                return Fraction(0)
        return Fraction(1, 2 ** len(merged))


def _intervals_mod(theta, lo, hi):
    """The set [lo, hi) pushed into the circle [0, |theta|): 1 or 2 pieces."""
    width = _abs_theta(theta)
    q = div_by_theta(theta, lo)
    if not theta_is_positive(theta):
        q = q.scale(-1)
    j = affine_floor(theta, q)
    lo = lo - width.scale(j)
    hi = hi - width.scale(j)
    if affine_sign(theta, width - hi) >= 0:
        return [(lo, hi)]
    return [(lo, width), (ThetaAffine(Fraction(0), Fraction(0)), hi - width)]


def _meet(theta, one, two):
    """Intersection of two disjoint-interval lists; endpoints affine."""
    out = []
    for lo1, hi1 in one:
        for lo2, hi2 in two:
            lo = lo1 if affine_sign(theta, lo1 - lo2) >= 0 else lo2
            hi = hi1 if affine_sign(theta, hi1 - hi2) <= 0 else hi2
            if affine_sign(theta, hi - lo) > 0:
                out.append((lo, hi))
    return out


def _total_length(theta, pieces):
    total = ThetaAffine(Fraction(0), Fraction(0))
    for lo, hi in pieces:
        total = total + (hi - lo)
    return total


@dataclass
class CesaroReport:
    horizon: int
    average: float
    target: float
    gap: float
    gap_exact: str
    independent_from: int | None
    samples: list
    burn_in_bound: float


def _affine_product(t1, t2):
    # (a1 + b1 phi)(a2 + b2 phi) with phi^2 = phi + 1; exact for rational
    # theta too, where the b parts are zero
    a_part = t1.a * t2.a + t1.b * t2.b
    b_part = t1.a * t2.b + t1.b * t2.a + t1.b * t2.b
    return ThetaAffine(a_part, b_part)


def cesaro_mixing_test(base, theta, A1, B1, A2, B2, horizon, *,
                       sample_every=None):
    """Cesaro averages of nu(b^k(A1 x B1) cap (A2 x B2)) against the product
    value, for the skew step b(x, y) = (x - 1 + theta*m, shift^m y) on
    [0, theta) x base, m the return time of x.

    A1, A2 are interval lists on [0, theta) (affine endpoints allowed);
    B1, B2 are cylinders. Every term is exact; the report carries floats for
    reading plus the exact final gap. independent_from records the first
    step from which the base factor equals the product exactly, and the
    burn-in contribution of the steps before it is bounded in the report.
    """
    if theta.kind == "interval":
        raise PrecisionError("Cesaro averages need a rational or golden theta")
    if not theta_is_positive(theta):
        raise ValueError("the mixing diagnostic expects a positive theta")
    width = _abs_theta(theta)
    A1 = [(as_affine(lo), as_affine(hi)) for lo, hi in A1]
    A2 = [(as_affine(lo), as_affine(hi)) for lo, hi in A2]
    muB1, muB2 = base.measure(B1), base.measure(B2)
    t1 = div_by_theta(theta, _total_length(theta, A1))
    t2 = div_by_theta(theta, _total_length(theta, A2))
    target_affine = _affine_product(t1, t2).scale(muB1 * muB2)
    total = ThetaAffine(Fraction(0), Fraction(0))
    samples = []
    independent_from = None
    sample_every = sample_every or max(1, horizon // 50)
    # the k-th base factor is mu(shift^m B1 cap B2) with the cylinder
    # pulled back to coordinates c - m; past this distance no coordinates
    # can collide and the factor is exactly mu(B1) mu(B2)
    span1 = [c for c, _ in B1.fixed]
    span2 = [c for c, _ in B2.fixed]
    indep_dist = max(0, max(span1) - min(span2) + 1) if span1 and span2 else 0
    for k in range(1, horizon + 1):
        # m(x') = floor((x' + k)/theta) on the circle; one breakpoint
        m0 = affine_floor(theta, div_by_theta(
            theta, ThetaAffine(Fraction(k), Fraction(0))))
        cut = width.scale(m0 + 1) - ThetaAffine(Fraction(k), Fraction(0))
        zero = ThetaAffine(Fraction(0), Fraction(0))
        if affine_sign(theta, cut) > 0 and affine_sign(theta, width - cut) > 0:
            pieces = [((zero, cut), m0), ((cut, width), m0 + 1)]
        elif affine_sign(theta, cut) <= 0:
            pieces = [((zero, width), m0 + 1)]
        else:
            pieces = [((zero, width), m0)]
        shiftA1 = []
        for lo, hi in A1:
            shiftA1.extend(_intervals_mod(
                theta, lo - ThetaAffine(Fraction(k), Fraction(0)),
                hi - ThetaAffine(Fraction(k), Fraction(0))))
        term = ThetaAffine(Fraction(0), Fraction(0))
        all_factors_product = True
        for (plo, phi_), m in pieces:
            cell = _meet(theta, [(plo, phi_)], shiftA1)
            cell = _meet(theta, cell, A2)
            if not cell:
                continue
            factor = base.meet_measure(B1.shifted(-m), B2)
            if factor != muB1 * muB2:
                all_factors_product = False
            term = term + _total_length(theta, cell).scale(factor)
        if independent_from is None and all_factors_product \
                and m0 >= indep_dist:
            independent_from = k
        total = total + div_by_theta(theta, term)
        if k % sample_every == 0 or k == horizon:
            avg = total.scale(Fraction(1, k))
            gap = avg - target_affine
            samples.append((k, _to_float(theta, avg), _to_float(theta, gap)))
    avg = total.scale(Fraction(1, horizon))
    gap = avg - target_affine
    gap_float = abs(_to_float(theta, gap))
    burn = independent_from or horizon
    # each term and the target both lie in [0, 1], so the steps before
    # independence contribute at most this much to the final average
    burn_in_bound = (burn / horizon) * (1.0 + float(muB1 * muB2))
    return CesaroReport(horizon, _to_float(theta, avg),
                        _to_float(theta, target_affine), gap_float,
                        repr(gap), independent_from, samples, burn_in_bound)


def _to_float(theta, value):
    value = as_affine(value)
    return float(value.a) + float(value.b) * float(theta)


# -- component counting and periodicity --------------------------------------

def component_counts(c, n, r, s, kmax, lmax):
    """|W_{k,l}| = orbit count of the subgroup step r^k s^l c on Z/n,
    computed by orbit enumeration and cross-checked against the gcd closed
    form; the two ladder divisibility laws are asserted over the table."""
    if n < 1 or r < 1 or s < 1:
        raise ValueError("moduli and scaling steps must be positive")
    if gcd(c, n) != 1:
        raise NotErgodic(f"step {c} on Z/{n} has gcd {gcd(c, n)}")
    table = {}
    for k in range(kmax + 1):
        for l in range(lmax + 1):
            step = (r ** k * s ** l * c) % n
            seen = [False] * n
            orbits = 0
            for x0 in range(n):
                if seen[x0]:
                    continue
                orbits += 1
                x = x0
                while not seen[x]:
                    seen[x] = True
                    x = (x + step) % n
            if orbits != gcd(r ** k * s ** l * c, n):
                raise VerificationFailure(
                    f"orbit count at ({k},{l}) disagrees with the gcd form")
            table[(k, l)] = orbits
    for k in range(kmax):
        for l in range(lmax + 1):
            hi, lo = table[(k + 1, l)], table[(k, l)]
            if hi % lo or r % (hi // lo):
                raise VerificationFailure(
                    f"|W_{k+1},{l}| / |W_{k},{l}| = {hi}/{lo} violates the ladder")
    for k in range(kmax + 1):
        for l in range(lmax):
            hi, lo = table[(k, l + 1)], table[(k, l)]
            if hi % lo or s % (hi // lo):
                raise VerificationFailure(
                    f"|W_{k},{l+1}| / |W_{k},{l}| = {hi}/{lo} violates the ladder")
    return table


@dataclass(frozen=True)
class ZCycleModel:
    """The +step action on Z/size: every orbit has the same length."""

    size: int
    step: int = 1

    def orbits(self):
        g = gcd(self.step, self.size) or self.size
        length = self.size // g
        reps = range(g)
        return [(x0, length) for x0 in reps]


def periodicity_check(model, d, m, n, kmax, lmax):
    """Whether an equivariant map onto the +1 cycle Z/(d m^k n^l) exists for
    every k <= kmax, l <= lmax. The map is built by orbit labeling and
    verified; a wrap mismatch refutes it (and nothing else can)."""
    for k in range(kmax + 1):
        for l in range(lmax + 1):
            modulus = d * m ** k * n ** l
            for x0, length in model.orbits():
                if length % modulus:
                    return False
                # build the labeling on one orbit and verify the wrap
                x, label = x0, 0
                for _ in range(length):
                    x = (x + model.step) % model.size
                    label = (label + 1) % modulus
                if x != x0 or label != 0:
                    raise AssertionError("orbit walk failed to close")
    return True


def periodic_model(params, kmax, lmax):
    """The odometer truncation certified to carry every equivariant quotient
    up to (kmax, lmax) for these parameters."""
    size = params.d0 * abs(params.p0) ** kmax * abs(params.q0) ** lmax
    return ZCycleModel(size, 1)
