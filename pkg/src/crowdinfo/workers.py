"""Worker channel models: M-ary symmetric (MSC) and spammer-hammer (SHC).

A worker answering a query is a discrete memoryless channel from the true
response ``u`` to the reported response ``v``.  Random streams are always
passed in explicitly as :class:`numpy.random.Generator` objects.
"""

from __future__ import annotations

import enum
from dataclasses import dataclass
from typing import Iterable, Tuple

import numpy as np

from .infomath import Pmf, ValidationError, symmetric_entropy


class WorkerState(enum.Enum):
    SPAMMER = "S"
    HAMMER = "H"


def _check_alphabet(M, minimum=2):
    if int(M) != M or M < minimum:
        raise ValidationError(f"alphabet size M must be an integer >= {minimum}, got {M}")
    return int(M)


def _check_prob(name, value):
    value = float(value)
    if not (0.0 <= value <= 1.0):
        raise ValidationError(f"{name} must lie in [0, 1], got {value}")
    return value


def _check_symbol(u, M):
    if int(u) != u or not (0 <= u < M):
        raise ValidationError(f"symbol index {u} outside 0..{M - 1}")
    return int(u)


@dataclass(frozen=True)
class MscChannel:
    """M-ary symmetric channel with total error probability ``epsilon``."""

    M: int
    epsilon: float

    def __post_init__(self):
        object.__setattr__(self, "M", _check_alphabet(self.M))
        object.__setattr__(self, "epsilon", _check_prob("epsilon", self.epsilon))

    def transition_matrix(self) -> np.ndarray:
        off = self.epsilon / (self.M - 1)
        P = np.full((self.M, self.M), off)
        np.fill_diagonal(P, 1.0 - self.epsilon)
        return P


@dataclass(frozen=True)
class ShcChannel:
    """Spammer-hammer channel: hammer with probability ``q``.

    ``M = 1`` is admitted for the degenerate single-response alphabet.
    """

    q: float
    M: int

    def __post_init__(self):
        object.__setattr__(self, "q", _check_prob("q", self.q))
        object.__setattr__(self, "M", _check_alphabet(self.M, minimum=1))

    def transition_matrix(self, state: WorkerState) -> np.ndarray:
        if state is WorkerState.HAMMER:
            return np.eye(self.M)
        return np.full((self.M, self.M), 1.0 / self.M)


@dataclass(frozen=True)
class SkillPopulation:
    """Discrete distribution of worker error probabilities.

    ``levels`` holds error probabilities, ``weights`` their probabilities.
    """

    levels: Tuple[float, ...]
    weights: Tuple[float, ...]

    def __post_init__(self):
        levels = tuple(_check_prob("skill level", e) for e in self.levels)
        weights = Pmf(tuple(self.weights)).probabilities
        if len(levels) != len(weights):
            raise ValidationError("levels and weights must have equal length")
        object.__setattr__(self, "levels", levels)
        object.__setattr__(self, "weights", weights)

    @classmethod
    def from_pairs(cls, pairs: Iterable[Tuple[float, float]]) -> "SkillPopulation":
        pairs = list(pairs)
        if not pairs:
            raise ValidationError("population needs at least one skill level")
        levels, weights = zip(*pairs)
        return cls(tuple(levels), tuple(weights))

    @classmethod
    def point_mass(cls, epsilon: float) -> "SkillPopulation":
        return cls((epsilon,), (1.0,))

    @property
    def is_point_mass(self) -> bool:
        support = {e for e, w in zip(self.levels, self.weights) if w > 0}
        return len(support) == 1

    def sample(self, size, rng: np.random.Generator) -> np.ndarray:
        idx = rng.choice(len(self.levels), size=size, p=np.array(self.weights))
        return np.asarray(self.levels)[idx]


def msc_transition(channel: MscChannel, u: int, v: int) -> float:
    """P(v | u) for the M-ary symmetric channel."""
    u = _check_symbol(u, channel.M)
    v = _check_symbol(v, channel.M)
    if u == v:
        return 1.0 - channel.epsilon
    return channel.epsilon / (channel.M - 1)


def msc_sample(channel: MscChannel, u, rng: np.random.Generator):
    """Pass ``u`` (scalar or array) through the channel.

    Errors land uniformly on the ``M - 1`` wrong symbols, drawn as a nonzero
    cyclic offset from ``u``.
    """
    u_arr = np.asarray(u)
    if np.any((u_arr < 0) | (u_arr >= channel.M)):
        raise ValidationError(f"input symbols must lie in 0..{channel.M - 1}")
    out = msc_sample_many(u_arr, np.full(u_arr.shape, channel.epsilon), channel.M, rng)
    return int(out) if out.ndim == 0 else out


def msc_sample_many(u: np.ndarray, epsilon: np.ndarray, M: int, rng: np.random.Generator) -> np.ndarray:
    """Vectorised MSC draws with a per-use error probability."""
    u = np.asarray(u, dtype=np.int64)
    flip = rng.random(u.shape) < epsilon
    offset = rng.integers(1, M, size=u.shape) if M > 1 else np.zeros(u.shape, dtype=np.int64)
    return np.where(flip, (u + offset) % M, u)


def shc_draw_worker(q: float, rng: np.random.Generator) -> WorkerState:
    q = _check_prob("q", q)
    return WorkerState.HAMMER if rng.random() < q else WorkerState.SPAMMER


def shc_draw_workers(q: float, size, rng: np.random.Generator) -> np.ndarray:
    """Boolean array, True where the drawn worker is a hammer."""
    q = _check_prob("q", q)
    return rng.random(size) < q


def shc_respond(channel: ShcChannel, state: WorkerState, u: int, rng: np.random.Generator) -> int:
    u = _check_symbol(u, channel.M)
    if state is WorkerState.HAMMER:
        return u
    return int(rng.integers(channel.M))


def population_mean_skill(pop: SkillPopulation) -> float:
    return float(np.dot(pop.levels, pop.weights))


def population_mean_entropy(pop: SkillPopulation, M: int) -> float:
    """E[H_M(eps)] over the population."""
    return float(sum(w * symmetric_entropy(e, M) for e, w in zip(pop.levels, pop.weights)))
