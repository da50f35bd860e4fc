"""Entropy, capacity and rate-distortion primitives (all in bits)."""

from __future__ import annotations

from dataclasses import dataclass
from typing import Sequence, Union

import numpy as np

PMF_TOL = 1e-9


class ValidationError(ValueError):
    """Raised when an argument violates a documented precondition."""


@dataclass(frozen=True)
class Pmf:
    """Probability mass function over an ordered finite alphabet.

    Construction validates the entries; use :meth:`normalized` to rescale
    arbitrary non-negative weights.
    """

    probabilities: tuple

    def __post_init__(self):
        p = tuple(float(x) for x in self.probabilities)
        if len(p) == 0:
            raise ValidationError("pmf must have at least one entry")
        if any(not np.isfinite(x) or x < 0 for x in p):
            raise ValidationError(f"pmf entries must be finite and >= 0, got {p}")
        total = sum(p)
        if abs(total - 1.0) > PMF_TOL:
            raise ValidationError(f"pmf entries sum to {total!r}, expected 1")
        object.__setattr__(self, "probabilities", p)

    @classmethod
    def normalized(cls, weights: Sequence[float]) -> "Pmf":
        w = np.asarray(weights, dtype=float)
        if w.ndim != 1 or w.size == 0 or np.any(w < 0) or w.sum() <= 0:
            raise ValidationError("weights must be a non-empty non-negative vector")
        return cls(tuple(w / w.sum()))

    @classmethod
    def uniform(cls, n: int) -> "Pmf":
        if n < 1:
            raise ValidationError("alphabet size must be >= 1")
        return cls((1.0 / n,) * n)

    def __len__(self) -> int:
        return len(self.probabilities)

    def __iter__(self):
        return iter(self.probabilities)

    def as_array(self) -> np.ndarray:
        return np.array(self.probabilities)

    @property
    def max(self) -> float:
        return max(self.probabilities)


PmfLike = Union[Pmf, Sequence[float], np.ndarray]


def as_pmf(p: PmfLike) -> Pmf:
    return p if isinstance(p, Pmf) else Pmf(tuple(np.asarray(p, dtype=float).ravel()))


def _entropy_bits(p: np.ndarray) -> float:
    nz = p[p > 0]
    # max() guards the -0.0 that a lone unit mass produces
    return max(0.0, float(-np.sum(nz * np.log2(nz))))


def entropy(p: PmfLike) -> float:
    """Shannon entropy in bits, with 0 log 0 = 0.

    >>> entropy([0.5, 0.5])
    1.0
    """
    return _entropy_bits(as_pmf(p).as_array())


def _check_unit(name: str, value: float) -> float:
    value = float(value)
    if not (0.0 <= value <= 1.0):
        raise ValidationError(f"{name} must lie in [0, 1], got {value}")
    return value


def symmetric_pmf(epsilon: float, n_symbols: int) -> np.ndarray:
    """The pmf (1 - eps, eps/(n-1), ..., eps/(n-1))."""
    epsilon = _check_unit("epsilon", epsilon)
    if int(n_symbols) != n_symbols or n_symbols < 2:
        raise ValidationError(f"n_symbols must be an integer >= 2, got {n_symbols}")
    n = int(n_symbols)
    p = np.full(n, epsilon / (n - 1))
    p[0] = 1.0 - epsilon
    return p


def symmetric_entropy(epsilon: float, n_symbols: int) -> float:
    """Entropy of a correct symbol w.p. 1 - epsilon, uniform error otherwise."""
    return _entropy_bits(symmetric_pmf(epsilon, n_symbols))


def binary_entropy(p: float) -> float:
    return symmetric_entropy(p, 2)


def msc_capacity_pointwise(epsilon: float, M: int) -> float:
    """Capacity log2(M) - H_M(epsilon) of an M-ary symmetric channel.

    Not clamped; callers that divide by it decide how to treat values <= 0.
    """
    return float(np.log2(M)) - symmetric_entropy(epsilon, M)


def rate_distortion_hamming(source: PmfLike, target_error: float) -> float:
    """Rate-distortion function of a memoryless source under Hamming distortion.

    Returns ``H(source) - H_N(target_error)`` inside the region
    ``target_error <= min(1 - p_max, 1 - 1/N)`` and 0 outside it, where the
    trivial decoders (argmax, or uniform guessing) already meet the target.
    """
    src = as_pmf(source)
    eps_hat = _check_unit("target_error", target_error)
    n = len(src)
    if n == 1 or eps_hat > min(1.0 - src.max, 1.0 - 1.0 / n):
        return 0.0
    return max(0.0, entropy(src) - symmetric_entropy(eps_hat, n))
