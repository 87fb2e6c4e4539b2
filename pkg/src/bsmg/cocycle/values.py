"""Value groups for groupoid cocycles and the cocycle wrapper.

Cocycles here are total assignments of one value per arrow, multiplicative
over every defined product. On windows with a partial product the check runs
over exactly the defined part, which is the strongest statement a window can
support.
"""

from __future__ import annotations

from dataclasses import dataclass
from fractions import Fraction

from ..errors import NotACocycle, TargetMismatch


class QPos:
    """Positive rationals under multiplication."""

    name = "Q+"
    identity = Fraction(1)

    @staticmethod
    def op(a, b):
        return a * b

    @staticmethod
    def inverse(a):
        return 1 / a

    @staticmethod
    def coerce(v):
        f = Fraction(v)
        if f <= 0:
            raise TargetMismatch(f"{v!r} is not a positive rational")
        return f


class ZAdd:
    """Integers under addition."""

    name = "Z"
    identity = 0

    @staticmethod
    def op(a, b):
        return a + b

    @staticmethod
    def inverse(a):
        return -a

    @staticmethod
    def coerce(v):
        if isinstance(v, bool) or not isinstance(v, int):
            raise TargetMismatch(f"{v!r} is not an integer")
        return v


class ZModAdd:
    """Integers mod n under addition."""

    def __init__(self, n):
        if n < 1:
            raise ValueError("modulus must be positive")
        self.n = n
        self.name = f"Z/{n}"
        self.identity = 0

    def op(self, a, b):
        return (a + b) % self.n

    def inverse(self, a):
        return (-a) % self.n

    def coerce(self, v):
        if isinstance(v, bool) or not isinstance(v, int):
            raise TargetMismatch(f"{v!r} is not an integer")
        return v % self.n


@dataclass(frozen=True)
class GroupoidCocycle:
    """One value per arrow, checked multiplicative where the product exists."""

    G: object
    target: object
    values: tuple

    @classmethod
    def from_values(cls, G, target, values, *, check=True):
        if isinstance(values, dict):
            vals = tuple(target.coerce(values[g]) for g in range(G.n_arrows))
        else:
            vals = tuple(target.coerce(v) for v in values)
        if len(vals) != G.n_arrows:
            raise TargetMismatch("need one value per arrow")
        c = cls(G, target, vals)
        if check:
            c.check()
        return c

    def __call__(self, g):
        return self.values[g]

    def check(self):
        G, t = self.G, self.target
        for x in range(G.n_units):
            if self.values[G.unit_arrow(x)] != t.identity:
                raise NotACocycle(f"unit arrow at {x} is not sent to identity")
        for g in range(G.n_arrows):
            if self.values[G.inv[g]] != t.inverse(self.values[g]):
                raise NotACocycle(f"value at the inverse of {g} does not invert")
        for g in range(G.n_arrows):
            for h in range(G.n_arrows):
                if G.src[g] == G.rng[h]:
                    k = G.product(g, h)
                    if k is None:
                        continue
                    if self.values[k] != t.op(self.values[g], self.values[h]):
                        raise NotACocycle(f"not multiplicative at ({g},{h})")
        return self

    def is_identity(self):
        return all(v == self.target.identity for v in self.values)


def coboundary(G, target, psi):
    """The cocycle g -> psi(r(g)) op psi(s(g))^-1 of a unit potential."""
    values = [
        target.op(target.coerce(psi[G.rng[g]]),
                  target.inverse(target.coerce(psi[G.src[g]])))
        for g in range(G.n_arrows)
    ]
    return GroupoidCocycle.from_values(G, target, values, check=False)
