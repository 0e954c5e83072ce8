"""Brute-force reference implementations used only by the tests.

Everything here works on plain Python sets straight from the definitions,
without bitsets, numpy or any helper from the package under test.
"""
from itertools import combinations


def sumset(d):
    return {a + b for a in d for b in d}


def diffset(d):
    return {a - b for a in d for b in d}


def first_hole(s):
    h = 0
    while h in s:
        h += 1
    return h


def longest_run(s):
    """(length, start) of the longest run of consecutive integers; ties to
    the smallest start."""
    best = (0, None)
    for x in sorted(s):
        if x - 1 in s:
            continue
        y = x
        while y + 1 in s:
            y += 1
        if y - x + 1 > best[0]:
            best = (y - x + 1, x)
    return best


def pair_weights(d):
    d = sorted(d)
    L = d[-1] - d[0]
    w = [0] * (L + 1)
    for a, b in combinations(d, 2):
        w[b - a] += 1
    return w[1:]


def is_interval(s, lo, hi):
    return s == set(range(lo, hi + 1))


# --- constructions, written from the set definitions ---------------------

def nested(n1, n2):
    return set(range(n1)) | {n1 + i * (n1 + 1) for i in range(n2)}


def cna(n1, n2):
    tail = n2 * (n1 + 1)
    return nested(n1, n2) | {tail + i for i in range(n1)}


def kma(n1, n2, n3):
    c = cna(n1, n2)
    m = max(c)
    base = [0] if n1 == 0 else list(range(0, n1 * n1 + 1, n1))
    mid = {2 * m + 1 + b + i * (n1 * n1 + m + 1) for i in range(n3) for b in base}
    return c | mid


def ka(n1, n2, n3):
    c = cna(n1, n2)
    m = max(c)
    off = (n3 + 2) * m + n3 * (n1 * n1 + 1) + 1
    return kma(n1, n2, n3) | {x + off for x in c}


def symmetric(g, lam):
    top = max(g) + lam
    return set(g) | {top - x for x in g}


# --- exhaustive searches ------------------------------------------------------

def max_first_hole(n):
    """Largest first hole of D + D over n-element sets of non-negative
    integers, and all normalized maximizers.

    Plain ascending enumeration. The only cut is that the next element may
    not exceed the current first hole (all later sums would be larger than
    that hole, so it could never be filled).
    """
    best = [0, []]

    def rec(elems, sums):
        h = first_hole(sums)
        if len(elems) == n:
            if h > best[0]:
                best[0], best[1] = h, [tuple(elems)]
            elif h == best[0]:
                best[1].append(tuple(elems))
            return
        for a in range(elems[-1] + 1, h + 1):
            new = {a + e for e in elems} | {2 * a}
            rec(elems + [a], sums | new)

    rec([0], {0})
    return best[0], best[1]


def restricted_mras(n):
    """Largest L with an n-element set D ⊆ {0..L}, 0, L ∈ D and
    D + D = {0..2L}, and all such sets (plain combinations)."""
    if n == 1:
        return 0, [(0,)]
    L = n * (n + 1) // 4
    while L >= 1:
        sols = []
        for mid in combinations(range(1, L), n - 2):
            d = (0,) + mid + (L,)
            if is_interval(sumset(d), 0, 2 * L):
                sols.append(d)
        if sols:
            return L, sols
        L -= 1
    raise AssertionError("unreachable")
