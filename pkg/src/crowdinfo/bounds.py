"""Minimum query rates (queries per item) for a target labeling error.

``rmin_sl_uk`` and ``rmin_sl_cs`` are the information-theoretic limits for an
MSC worker population whose skills are unknown to everyone, or known to the
decoder.  ``rmin_shc`` specialises the latter to a spammer-hammer pool on a
uniform binary dataset.  ``kic_rate_threshold`` is the oracle-decoder lower
bound for k-ary incidence coding.
"""

from __future__ import annotations

import math
from dataclasses import dataclass
from typing import Iterable, List, Optional, Sequence

import numpy as np

from .infomath import (
    Pmf,
    PmfLike,
    ValidationError,
    as_pmf,
    binary_entropy,
    rate_distortion_hamming,
    symmetric_entropy,
)
from .kic import spammer_error_for_arity
from .workers import SkillPopulation, population_mean_entropy, population_mean_skill


@dataclass(frozen=True)
class RateBound:
    """A rate in queries per item, or the infeasible marker.

    Infeasible means no finite rate meets the target: the channel carries
    no information while the source still needs some.
    """

    value: float
    feasible: bool = True

    @classmethod
    def infeasible(cls) -> "RateBound":
        return cls(math.inf, False)

    def __float__(self) -> float:
        return self.value

    def __str__(self) -> str:
        return format_rate(self)


def format_rate(rate: RateBound, digits: int = 6) -> str:
    if not rate.feasible:
        return "inf"
    return f"{rate.value:.{digits}g}"


@dataclass(frozen=True)
class BoundQuery:
    source: Pmf
    M: int
    population: SkillPopulation
    target_error: float

    def __post_init__(self):
        object.__setattr__(self, "source", as_pmf(self.source))
        if int(self.M) != self.M or self.M < 2:
            raise ValidationError(f"M must be an integer >= 2, got {self.M}")
        object.__setattr__(self, "M", int(self.M))
        if not 0.0 <= self.target_error <= 1.0:
            raise ValidationError(f"target_error must lie in [0, 1], got {self.target_error}")


def _ratio(numerator: float, capacity: float) -> RateBound:
    if numerator <= 0.0:
        return RateBound(0.0)
    if capacity <= 0.0:
        return RateBound.infeasible()
    return RateBound(numerator / capacity)


def rmin_sl_uk(q: BoundQuery) -> RateBound:
    """Skill levels unknown: capacity of the average worker."""
    capacity = math.log2(q.M) - symmetric_entropy(population_mean_skill(q.population), q.M)
    return _ratio(rate_distortion_hamming(q.source, q.target_error), capacity)


def rmin_sl_cs(q: BoundQuery) -> RateBound:
    """Skill levels known to the decoder: average capacity over workers."""
    capacity = math.log2(q.M) - population_mean_entropy(q.population, q.M)
    return _ratio(rate_distortion_hamming(q.source, q.target_error), capacity)


def rmin_shc(q: float, M: int, target_error: float) -> RateBound:
    """(1 - H_b(target)) / (q log2 M) on a uniform binary dataset."""
    if not 0.0 <= q <= 1.0:
        raise ValidationError(f"q must lie in [0, 1], got {q}")
    if int(M) != M or M < 2:
        raise ValidationError(f"M must be an integer >= 2, got {M}")
    if not 0.0 <= target_error <= 1.0:
        raise ValidationError(f"target_error must lie in [0, 1], got {target_error}")
    if target_error > 0.5:
        return RateBound(0.0)
    return _ratio(1.0 - binary_entropy(target_error), q * math.log2(M))


def kic_rate_threshold(k: int, q: float, target_error: float) -> RateBound:
    """Rate below which no kIC decoder reaches ``target_error``.

    Inverts ``target = eps_S(k) (1 - q)^(k R)`` for ``R``.  ``k = 1`` uses
    the direct-query spammer error 1/2.
    """
    if not 0.0 <= q <= 1.0:
        raise ValidationError(f"q must lie in [0, 1], got {q}")
    if not 0.0 <= target_error <= 1.0:
        raise ValidationError(f"target_error must lie in [0, 1], got {target_error}")
    eps_s = spammer_error_for_arity(k)
    if target_error >= eps_s or q == 1.0:
        return RateBound(0.0)
    if q == 0.0 or target_error == 0.0:
        return RateBound.infeasible()
    return RateBound(math.log(target_error / eps_s) / (k * math.log1p(-q)))


def oracle_error(k: int, q: float, rate: float) -> float:
    """Expected oracle-decoder error at ``rate`` queries per item."""
    return spammer_error_for_arity(k) * (1.0 - q) ** (k * rate)


def default_error_grid(step: float = 0.005) -> np.ndarray:
    """Open grid over (0, 0.5) at the given resolution."""
    n = int(round(0.5 / step))
    return np.round(np.arange(1, n) * step, 12)


@dataclass(frozen=True)
class CurvePoint:
    curve: str
    epsilon_hat: float
    rate: RateBound


def figure2_table(
    q: float,
    k_list: Sequence[int],
    error_grid: Optional[Iterable[float]] = None,
    M: Optional[int] = None,
) -> List[CurvePoint]:
    """Rows comparing the information-theoretic limit with kIC bounds.

    The ``it-limit`` curve uses ``M = 2**(max(k_list) - 1)`` response choices
    unless ``M`` is given; it never drops below the binary alphabet.
    """
    k_list = [int(k) for k in k_list]
    if not k_list:
        raise ValidationError("k_list must not be empty")
    grid = default_error_grid() if error_grid is None else [float(e) for e in error_grid]
    if M is None:
        M = max(2, 2 ** (max(k_list) - 1))
    rows = [CurvePoint("it-limit", e, rmin_shc(q, M, e)) for e in grid]
    for k in k_list:
        rows += [CurvePoint(f"kic-k{k}", e, kic_rate_threshold(k, q, e)) for e in grid]
    return rows
