"""Independent slow-path oracles the tests compare the library against.

Everything here is written for obviousness, not speed: whole-word rescans,
breadth-first walks, and smallest-power searches. None of it shares code
with the implementations under test beyond the public data types.
"""

from fractions import Fraction

from bsmg import tree
from bsmg.words import GroupWord, normalize


def oracle_normal_form(word, params):
    """Normal form computed by repeated whole-word pinch scans followed by a
    left-to-right remainder push. Returns (k0, ((e, k), ...)) as plain
    tuples for comparison against the incremental folder."""
    p, q = params.p, params.q
    k0, syls = _to_syllables(word)
    # phase 1: remove pinches, rescanning from scratch after every hit
    while True:
        hit = None
        for i in range(len(syls) - 1):
            e, k = syls[i]
            e2, _ = syls[i + 1]
            if e == 1 and e2 == -1 and k % p == 0:
                hit = (i, q * (k // p))
                break
            if e == -1 and e2 == 1 and k % q == 0:
                hit = (i, p * (k // q))
                break
        if hit is None:
            break
        i, merged = hit
        merged += syls[i + 1][1]
        del syls[i:i + 2]
        if i == 0:
            k0 += merged
        else:
            e, k = syls[i - 1]
            syls[i - 1] = (e, k + merged)
    # phase 2: push transversal remainders to the right
    for i in range(len(syls)):
        e, _ = syls[i]
        prev = k0 if i == 0 else syls[i - 1][1]
        if e == 1:
            r = prev % abs(q)
            carry = p * ((prev - r) // q)
        else:
            r = prev % abs(p)
            carry = q * ((prev - r) // p)
        if i == 0:
            k0 = r
        else:
            syls[i - 1] = (syls[i - 1][0], r)
        syls[i] = (e, syls[i][1] + carry)
    return k0, tuple(syls)


def _to_syllables(word):
    k0 = 0
    syls = []
    for letter, exp in word.runs:
        if letter == "a":
            if syls:
                e, k = syls[-1]
                syls[-1] = (e, k + exp)
            else:
                k0 += exp
        else:
            step = 1 if exp > 0 else -1
            for _ in range(abs(exp)):
                syls.append((step, 0))
    return k0, syls


def oracle_is_identity(word, params):
    k0, syls = oracle_normal_form(word, params)
    return k0 == 0 and not syls


def bfs_distance(u, v, limit=8):
    """Tree distance by breadth-first search over neighbor lists; None when
    v is farther than limit."""
    if u == v:
        return 0
    seen = {u}
    frontier = [u]
    for depth in range(1, limit + 1):
        nxt = []
        for vertex in frontier:
            for _, w in tree.neighbors(vertex):
                if w == v:
                    return depth
                if w not in seen:
                    seen.add(w)
                    nxt.append(w)
        frontier = nxt
    return None


def smallest_power_index(u, v, bound=400):
    """Order of the stabilizer of v inside the stabilizer of u, found by
    trying powers of the generator one by one."""
    params = u.params
    if u == v:
        return 1
    g = u.rep_word()
    x = g * GroupWord.a() * g.inverse()
    # walk x^n * v_rep incrementally, renormalizing to keep words short
    cur = v.rep_word()
    for n in range(1, bound + 1):
        cur = normalize(x * cur, params).to_word()
        if tree.canonical_vertex(cur, params) == v:
            return n
    raise AssertionError(f"no power up to {bound} stabilizes {v.to_text()}")


def ball(params, radius):
    """All vertices within the given tree radius of the base vertex."""
    v0 = tree.base_vertex(params)
    seen = {v0}
    frontier = [v0]
    for _ in range(radius):
        nxt = []
        for vertex in frontier:
            for _, w in tree.neighbors(vertex):
                if w not in seen:
                    seen.add(w)
                    nxt.append(w)
        frontier = nxt
    return seen


def orbit_count(step, modulus):
    """Orbits of x -> x + step on Z/modulus, by explicit enumeration."""
    seen = [False] * modulus
    count = 0
    for start in range(modulus):
        if seen[start]:
            continue
        count += 1
        x = start
        while not seen[x]:
            seen[x] = True
            x = (x + step) % modulus
    return count


def iso_orbit(p, q):
    """The set of parameter pairs defining the same group, generated by the
    two obvious moves (swap the pair, negate both entries)."""
    out = set()
    work = [(p, q)]
    while work:
        pair = work.pop()
        if pair in out:
            continue
        out.add(pair)
        a, b = pair
        work.extend([(b, a), (-a, -b)])
    return out


def mass_transport_sum(G, values):
    """Sum of f(g) m(s(g)) minus sum of f(g^-1) m(s(g)); zero when the
    values come from a measure-preserving symmetry."""
    total = Fraction(0)
    for g in range(G.n_arrows):
        total += values[g] * G.masses[G.src[g]]
        total -= values[G.inv[g]] * G.masses[G.src[g]]
    return total
