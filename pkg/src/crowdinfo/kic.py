"""k-ary incidence coding (kIC).

A kIC query shows ``k`` items and asks which of them share a label.  The
answer is a set partition of the ``k`` positions into at most ``N`` blocks,
with block labels forgotten.  Partitions are stored canonically as
restricted-growth strings: position 0 is in block 0, and each later position
is in an existing block or opens block ``max + 1``.
"""

from __future__ import annotations

from dataclasses import dataclass, field
from fractions import Fraction
from functools import lru_cache
from math import comb
from typing import Sequence, Tuple

import numpy as np

from .infomath import ValidationError

Pattern = Tuple[int, ...]

BRUTEFORCE_MAX_K = 16


def _check_k(k, minimum=1):
    if int(k) != k or k < minimum:
        raise ValidationError(f"k must be an integer >= {minimum}, got {k}")
    return int(k)


def _check_n(N):
    if int(N) != N or N < 2:
        raise ValidationError(f"N must be an integer >= 2, got {N}")
    return int(N)


@lru_cache(maxsize=None)
def stirling2(n: int, j: int) -> int:
    """Stirling number of the second kind S(n, j)."""
    if n == j:
        return 1
    if j == 0 or j > n:
        return 0
    return j * stirling2(n - 1, j) + stirling2(n - 1, j - 1)


def count_valid_responses(k: int, N: int) -> int:
    return sum(stirling2(k, j) for j in range(1, N + 1))


@lru_cache(maxsize=64)
def _enumerate(k: int, N: int) -> Tuple[Pattern, ...]:
    out = []

    def grow(prefix, top):
        if len(prefix) == k:
            out.append(tuple(prefix))
            return
        for b in range(min(top + 2, N)):
            prefix.append(b)
            grow(prefix, max(top, b))
            prefix.pop()

    grow([0], 0)
    return tuple(out)


def enumerate_valid_responses(k: int, N: int) -> Tuple[Pattern, ...]:
    """All partitions of ``k`` positions into at most ``N`` unlabeled blocks.

    Returned in lexicographic order of their restricted-growth strings.
    """
    return _enumerate(_check_k(k), _check_n(N))


def canonical_pattern(labels: Sequence[int]) -> Pattern:
    """Relabel blocks in order of first appearance."""
    seen = {}
    return tuple(seen.setdefault(x, len(seen)) for x in labels)


@dataclass(frozen=True)
class KicCode:
    k: int
    N: int
    valid_responses: Tuple[Pattern, ...] = field(init=False, repr=False, compare=False)

    def __post_init__(self):
        object.__setattr__(self, "k", _check_k(self.k))
        object.__setattr__(self, "N", _check_n(self.N))
        object.__setattr__(self, "valid_responses", _enumerate(self.k, self.N))

    @property
    def n_responses(self) -> int:
        """Response alphabet size M of the equivalent discrete channel."""
        return len(self.valid_responses)


@dataclass(frozen=True)
class KicQuery:
    item_ids: Tuple[int, ...]
    true_pattern: Pattern

    def __post_init__(self):
        if len(set(self.item_ids)) != len(self.item_ids):
            raise ValidationError(f"query items must be distinct: {self.item_ids}")
        if len(self.true_pattern) != len(self.item_ids):
            raise ValidationError("pattern length must equal the number of items")


def encode_query(labels: Sequence[int], code: KicCode) -> Pattern:
    """Response a perfect worker gives for items with these true labels."""
    labels = [int(x) for x in labels]
    if len(labels) != code.k:
        raise ValidationError(f"expected {code.k} labels, got {len(labels)}")
    for x in labels:
        if not 0 <= x < code.N:
            raise ValidationError(f"label {x} outside 0..{code.N - 1}")
    return canonical_pattern(labels)


def make_query(item_ids: Sequence[int], labels: Sequence[int], code: KicCode) -> KicQuery:
    return KicQuery(tuple(int(i) for i in item_ids), encode_query(labels, code))


def spammer_error_fraction(k: int) -> Fraction:
    """Exact per-item error of a uniformly random kIC answer, binary labels."""
    k = _check_k(k, minimum=2)
    total = sum(i * comb(k, i) for i in range((k - 1) // 2 + 1))
    acc = Fraction(total)
    if k % 2 == 0:
        acc += Fraction(k, 4) * comb(k, k // 2)
    return acc / (k * 2 ** (k - 1))


def spammer_error_prob(k: int, N: int = 2) -> float:
    """Probability that a spammer's kIC answer mislabels a given item.

    Closed form for binary labels and a uniform dataset; other ``N`` are
    rejected rather than extrapolated.
    """
    if N != 2:
        raise ValidationError("spammer error probability is only defined for N = 2")
    return float(spammer_error_fraction(k))


def spammer_error_for_arity(k: int, N: int = 2) -> float:
    """Spammer per-item error including the direct-query case ``k = 1``.

    With ``k = 1`` a spammer picks one of ``N`` labels uniformly and is wrong
    with probability ``(N - 1) / N``.
    """
    if _check_k(k) == 1:
        return (N - 1) / N
    return spammer_error_prob(k, N)


def _popcount(x: np.ndarray) -> np.ndarray:
    x = x.astype(np.uint32)
    count = np.zeros(x.shape, dtype=np.int64)
    while np.any(x):
        count += (x & 1).astype(np.int64)
        x >>= 1
    return count


def spammer_error_prob_bruteforce(k: int) -> float:
    """Average item mismatch over every (truth, spammer answer) pattern pair.

    Each pair of binary patterns is aligned with whichever of the two global
    labelings gives fewer mismatched items.  Exhaustive, so restricted to
    ``k <= 16``.
    """
    k = _check_k(k, minimum=2)
    if k > BRUTEFORCE_MAX_K:
        raise ValidationError(f"brute force supports k <= {BRUTEFORCE_MAX_K}, got {k}")
    # binary restricted-growth strings are exactly the k-bit words with bit 0 clear
    patterns = np.arange(2 ** (k - 1), dtype=np.int64) << 1
    M = patterns.size
    mismatches = 0
    chunk = max(1, 2 ** 22 // M)
    for start in range(0, M, chunk):
        u = patterns[start:start + chunk, None]
        d = _popcount(u ^ patterns[None, :])
        mismatches += int(np.minimum(d, k - d).sum())
    return mismatches / (k * M * M)
