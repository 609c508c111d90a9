"""Brute-force reference computations used only by the tests.

Everything here works on plain ``Fraction`` instants with Python sets and
Counters, independent of the package's tick arithmetic and numpy code paths.
"""
from collections import Counter
from fractions import Fraction
from itertools import product
from math import floor


def instants(M, N, r, eps1, eps2):
    t1 = [M * n + Fraction(e) for n, e in zip(range(r * N), eps1)]
    t2 = [N * m + Fraction(e) for m, e in zip(range(r * M), eps2)]
    return t1, t2


def self_sets(t):
    pos = {t[i] - t[j] for i, j in product(range(len(t)), repeat=2) if i >= j}
    neg = {t[i] - t[j] for i, j in product(range(len(t)), repeat=2) if i <= j}
    return pos, neg


def cross_sets(t1, t2):
    pos = {a - b for a, b in product(t1, t2)}
    return pos, {-v for v in pos}


def claim_counts(M, N, r, eps1, eps2):
    """Observed distinct counts for claims 1-6 and 8, and the self/cross overlap size."""
    t1, t2 = instants(M, N, r, eps1, eps2)
    sm_pos, sm_neg = self_sets(t1)
    sn_pos, sn_neg = self_sets(t2)
    c_pos, c_neg = cross_sets(t1, t2)
    ls = sm_pos | sm_neg | sn_pos | sn_neg
    lc = c_pos | c_neg
    return {
        1: len(sm_pos), 2: len(sn_pos), 3: len(sm_pos | sn_pos), 4: len(ls),
        5: len(c_pos), 6: len(lc), 7: len(ls & lc), 8: len(ls | lc),
    }


def mapped_weights(samples):
    """Ordered pairs per nearest-integer lag; lag 0 counts unordered pairs once."""
    z = Counter()
    n = len(samples)
    for a in range(n):
        for b in range(n):
            lag = floor(samples[a] - samples[b] + Fraction(1, 2))
            if lag == 0 and b < a:
                continue
            z[lag] += 1
    return z


def nonblind_weights(M, N, r, eps1, eps2):
    t1, t2 = instants(M, N, r, eps1, eps2)
    return mapped_weights(t1 + t2)


def blind_weights(M, N, r):
    kept = sorted(set(M * n for n in range(r * N)) | set(N * m for m in range(r * M)))
    return mapped_weights([Fraction(t) for t in kept])


def unmapped_weights(M, N, r, eps1, eps2):
    t1, t2 = instants(M, N, r, eps1, eps2)
    s = t1 + t2
    z = Counter()
    for a in range(len(s)):
        for b in range(len(s)):
            d = s[a] - s[b]
            if d == 0 and b < a:
                continue
            z[d] += 1
    return z
