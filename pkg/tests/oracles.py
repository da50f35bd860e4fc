"""Independent reference computations used to freeze expected values.

Nothing here imports crowdinfo.
"""

from fractions import Fraction
from itertools import product
from math import comb

import mpmath

mpmath.mp.dps = 40


def entropy_mp(probs):
    """High-precision Shannon entropy in bits."""
    total = mpmath.mpf(0)
    for p in probs:
        p = mpmath.mpf(p)
        if p > 0:
            total -= p * mpmath.log(p, 2)
    return total


def h_symmetric_mp(eps, n):
    eps = mpmath.mpf(eps)
    return entropy_mp([1 - eps] + [eps / (n - 1)] * (n - 1))


def hb_mp(p):
    return h_symmetric_mp(p, 2)


def partitions_by_labelings(k, N):
    """Distinct set partitions reached by labeling k items with N labels."""
    seen = set()
    for labels in product(range(N), repeat=k):
        blocks = {}
        seen.add(tuple(blocks.setdefault(x, len(blocks)) for x in labels))
    return seen


def set_partitions(k):
    """All set partitions of range(k) as frozensets of frozensets.

    Built by inserting each element into an existing block or a new one.
    """
    parts = [[]]
    for x in range(k):
        grown = []
        for blocks in parts:
            for i in range(len(blocks)):
                grown.append(blocks[:i] + [blocks[i] | {x}] + blocks[i + 1:])
            grown.append(blocks + [frozenset([x])])
        parts = grown
    return [frozenset(frozenset(b) for b in blocks) for blocks in parts]


def spammer_error_by_labelings(k):
    """Per-item spammer error from raw binary labelings.

    Truth and answer are independent uniform labelings of k items; the
    decoder may flip the answer's labels, and keeps the flip with fewer
    mismatches.  Averages mismatch fractions exactly.
    """
    total = Fraction(0)
    words = list(product((0, 1), repeat=k))
    for u in words:
        for v in words:
            d = sum(a != b for a, b in zip(u, v))
            total += Fraction(min(d, k - d), k)
    return total / len(words) ** 2


def majority_error_binary(eps, r):
    """Exact plurality-vote error for binary labels with random tie breaks."""
    eps = Fraction(eps)
    err = Fraction(0)
    for j in range(r + 1):
        pj = comb(r, j) * eps ** j * (1 - eps) ** (r - j)
        if 2 * j > r:
            err += pj
        elif 2 * j == r:
            err += pj / 2
    return err
