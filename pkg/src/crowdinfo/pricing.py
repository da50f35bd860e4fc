"""Query pricing for kIC campaigns."""

from __future__ import annotations

from dataclasses import dataclass

from .bounds import kic_rate_threshold
from .infomath import ValidationError


@dataclass(frozen=True)
class PriceQuote:
    price_per_query: float
    k: int

    def __post_init__(self):
        if self.price_per_query < 0:
            raise ValidationError(f"price must be >= 0, got {self.price_per_query}")
        if int(self.k) != self.k or self.k < 1:
            raise ValidationError(f"query arity k must be an integer >= 1, got {self.k}")


def campaign_cost(price: PriceQuote, n_items: float, rate: float) -> float:
    """Total spend: price per query x items x queries per item."""
    if n_items < 0 or rate < 0:
        raise ValidationError("n_items and rate must be non-negative")
    return price.price_per_query * n_items * rate


def _check_arity(name, k):
    if int(k) != k or k < 2:
        raise ValidationError(f"{name} must be an integer >= 2, got {k}")
    return int(k)


def price_threshold(k1: int, k2: int, price_k1: float) -> float:
    """Highest per-query price worth paying for k2IC given the k1IC price.

    Rule of thumb from equal budget and equal fidelity, where ``k R`` is
    roughly constant across arities: ``price_k1 * k2 / k1``.
    """
    k1, k2 = _check_arity("k1", k1), _check_arity("k2", k2)
    if price_k1 <= 0:
        raise ValidationError(f"price_k1 must be > 0, got {price_k1}")
    return price_k1 * k2 / k1


def price_threshold_exact(k1: int, k2: int, q: float, target_error: float, price_k1: float) -> float:
    """Same threshold using the actual oracle-bound rates ``price_k1 * R1 / R2``."""
    k1, k2 = _check_arity("k1", k1), _check_arity("k2", k2)
    if price_k1 <= 0:
        raise ValidationError(f"price_k1 must be > 0, got {price_k1}")
    if k1 == k2:
        return price_k1
    r1 = kic_rate_threshold(k1, q, target_error)
    r2 = kic_rate_threshold(k2, q, target_error)
    for k, r in ((k1, r1), (k2, r2)):
        if not r.feasible or r.value <= 0:
            raise ValidationError(f"rate threshold for k={k} is {r}; need a finite positive rate")
    return price_k1 * r1.value / r2.value
