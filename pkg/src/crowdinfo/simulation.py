"""Monte Carlo crowdsourcing simulator.

Items get iid labels, are packed into non-adaptive k-item queries so that
every item sits in exactly ``R'`` queries, and each query goes to a freshly
drawn worker.  Two decoders are provided: the spammer-hammer oracle (knows
which worker was a hammer) and plurality voting on direct ``k = 1`` queries.

Every trial runs on its own child stream of ``SeedSequence(seed)``, so a
config with a fixed seed always produces the same report.
"""

from __future__ import annotations

import math
from dataclasses import asdict, dataclass, field, replace
from typing import List, Optional, Sequence, Union

import numpy as np

from .infomath import Pmf, ValidationError, as_pmf
from .kic import spammer_error_for_arity
from .bounds import kic_rate_threshold
from .workers import SkillPopulation, msc_sample_many, shc_draw_workers

MIN_TRIALS_FOR_CI = 8
Z_95 = 1.959963984540054


@dataclass(frozen=True)
class ShcModel:
    q: float


WorkerModel = Union[ShcModel, SkillPopulation]


@dataclass(frozen=True)
class SimConfig:
    n_items: int
    source: Pmf
    code_k: int
    queries_per_item: int
    worker_model: WorkerModel
    decoder: str = "oracle"
    seed: int = 0
    n_trials: int = 10

    def __post_init__(self):
        object.__setattr__(self, "source", as_pmf(self.source))
        if self.code_k < 1:
            raise ValidationError(f"code_k must be >= 1, got {self.code_k}")
        if self.n_items < self.code_k:
            raise ValidationError(f"n_items ({self.n_items}) must be >= code_k ({self.code_k})")
        if self.queries_per_item < 1:
            raise ValidationError(f"queries_per_item must be >= 1, got {self.queries_per_item}")
        if self.n_trials < 1:
            raise ValidationError(f"n_trials must be >= 1, got {self.n_trials}")
        if self.decoder not in ("oracle", "majority"):
            raise ValidationError(f"decoder must be 'oracle' or 'majority', got {self.decoder!r}")
        if not 0 <= self.seed < 2 ** 64:
            raise ValidationError("seed must be a 64-bit unsigned integer")

    @property
    def rate(self) -> float:
        return self.queries_per_item / self.code_k


@dataclass(frozen=True)
class SimulationReport:
    empirical_error: float
    ci_halfwidth: Optional[float]
    analytic_prediction: Optional[float]
    rate_used: float
    std_error: float
    n_trials: int
    n_items: int
    n_fillers: int
    trial_errors: tuple = field(repr=False)

    def deviation_sigmas(self) -> Optional[float]:
        """|empirical - analytic| in units of the estimator's standard error."""
        if self.analytic_prediction is None:
            return None
        diff = abs(self.empirical_error - self.analytic_prediction)
        if self.std_error == 0.0:
            return 0.0 if diff == 0.0 else math.inf
        return diff / self.std_error

    def to_dict(self) -> dict:
        d = asdict(self)
        d["trial_errors"] = list(self.trial_errors)
        return d


def generate_dataset(n_items: int, source, rng: np.random.Generator) -> np.ndarray:
    src = as_pmf(source)
    if n_items == 0:
        return np.zeros(0, dtype=np.int64)
    return rng.choice(len(src), size=n_items, p=src.as_array()).astype(np.int64)


def _fix_boundary(stream: np.ndarray, start: int, k: int, n: int, rng: np.random.Generator) -> None:
    # Chunk [start, start+k) straddles two permutations; the head of the later
    # one begins at the next multiple of n.  Swap repeated heads with elements
    # further into that permutation until the chunk is duplicate-free.
    perm_start = (start // n + 1) * n
    head = stream[perm_start:start + k]
    tail = stream[start:perm_start]
    for _ in range(1000):
        clash = np.isin(head, tail)
        if not clash.any():
            return
        i = int(np.flatnonzero(clash)[0])
        j = int(rng.integers(start + k - perm_start, n))
        a, b = perm_start + i, perm_start + j
        stream[a], stream[b] = stream[b], stream[a]
        head = stream[perm_start:start + k]
    raise RuntimeError("could not resolve a duplicate item inside a query")


def assign_queries(n_items: int, k: int, R_prime: int, rng: np.random.Generator):
    """Pack items into k-item queries so each item appears in ``R_prime`` of them.

    Returns ``(queries, n_fillers)``: an integer array of shape
    ``(n_queries, k)`` and the number of filler ids (``>= n_items``) appended
    to the last query when ``n_items * R_prime`` is not a multiple of ``k``.
    Queries are cut from ``R_prime`` concatenated random permutations.
    """
    if k < 1 or R_prime < 1:
        raise ValidationError("k and R_prime must be >= 1")
    if n_items < k:
        raise ValidationError(f"cannot form a {k}-item query from {n_items} items")
    n = n_items
    stream = np.concatenate([rng.permutation(n) for _ in range(R_prime)])
    for r in range(1, R_prime):
        boundary = r * n
        start = (boundary // k) * k
        if start != boundary:
            _fix_boundary(stream, start, k, n, rng)
    n_fillers = (-stream.size) % k
    stream = np.concatenate([stream, n + np.arange(n_fillers)])
    return stream.reshape(-1, k), n_fillers


def _summarize(errors: Sequence[float], prediction, rate, cfg: SimConfig, n_fillers: int) -> SimulationReport:
    errs = np.asarray(errors, dtype=float)
    mean = float(errs.mean())
    if errs.size > 1:
        se = float(errs.std(ddof=1) / math.sqrt(errs.size))
    else:
        se = 0.0
    ci = Z_95 * se if errs.size >= MIN_TRIALS_FOR_CI else None
    return SimulationReport(
        empirical_error=mean,
        ci_halfwidth=ci,
        analytic_prediction=prediction,
        rate_used=rate,
        std_error=se,
        n_trials=int(errs.size),
        n_items=cfg.n_items,
        n_fillers=n_fillers,
        trial_errors=tuple(float(e) for e in errs),
    )


def _trial_rngs(cfg: SimConfig):
    return [np.random.default_rng(s) for s in np.random.SeedSequence(cfg.seed).spawn(cfg.n_trials)]


def _oracle_trial(cfg: SimConfig, rng: np.random.Generator):
    n, k, Rp = cfg.n_items, cfg.code_k, cfg.queries_per_item
    q = cfg.worker_model.q
    labels = generate_dataset(n, cfg.source, rng)
    queries, n_fillers = assign_queries(n, k, Rp, rng)
    hammer = shc_draw_workers(q, queries.shape[0], rng)

    # item -> its R' query slots; fillers only ever sit in the last query
    flat = queries.ravel()
    real = flat < n
    order = np.argsort(flat[real], kind="stable")
    slots = np.flatnonzero(real)[order].reshape(n, Rp)
    item_query = slots // k
    all_spam = ~hammer[item_query].any(axis=1)

    # Each all-spammer item is decoded from one of its spammer answers.
    pick = rng.integers(Rp, size=n)
    slot = slots[np.arange(n), pick]
    q_idx, pos = slot // k, slot % k

    N = len(cfg.source)
    if k == 1:
        guess = rng.integers(N, size=queries.shape[0])
        wrong_item = guess[q_idx] != labels
    else:
        true = np.where(queries < n, labels[np.minimum(queries, n - 1)], 0)
        # fillers carry label 0; only real positions are scored
        answer = rng.integers(2, size=queries.shape)
        answer[:, 0] = 0
        miss = answer != true
        n_miss = miss.sum(axis=1)
        flip = (k - n_miss < n_miss) | ((2 * n_miss == k) & (rng.random(queries.shape[0]) < 0.5))
        # the oracle keeps whichever global labeling of the answer fits truth better
        wrong = miss ^ flip[:, None]
        wrong_item = wrong[q_idx, pos]
    errors = all_spam & wrong_item
    return float(errors.mean()), n_fillers


def run_oracle_decoder_sim(cfg: SimConfig) -> SimulationReport:
    """Spammer-hammer pool with an oracle that trusts any hammer answer.

    An item is decoded correctly if a hammer saw it.  Otherwise one of its
    spammer answers is chosen and aligned with the truth as favourably as
    the unlabeled partition allows; the item is wrong if it still lands on
    the wrong side.
    """
    if not isinstance(cfg.worker_model, ShcModel):
        raise ValidationError("the oracle decoder needs a spammer-hammer worker model")
    if cfg.decoder != "oracle":
        raise ValidationError(f"config decoder is {cfg.decoder!r}, expected 'oracle'")
    N = len(cfg.source)
    if cfg.code_k >= 2 and N != 2:
        raise ValidationError("kIC oracle simulation supports binary labels only (N = 2)")
    errs, fillers = [], 0
    for rng in _trial_rngs(cfg):
        e, fillers = _oracle_trial(cfg, rng)
        errs.append(e)
    # A uniform spammer answer is independent of the truth, so the per-item
    # spammer error does not depend on the label distribution.
    prediction = spammer_error_for_arity(cfg.code_k, N) * (1 - cfg.worker_model.q) ** cfg.queries_per_item
    return _summarize(errs, prediction, cfg.rate, cfg, fillers)


def plurality_vote(responses: np.ndarray, n_labels: int, rng: np.random.Generator) -> np.ndarray:
    """Row-wise most frequent label; ties broken uniformly at random."""
    n = responses.shape[0]
    counts = np.zeros((n, n_labels))
    np.add.at(counts, (np.repeat(np.arange(n), responses.shape[1]), responses.ravel()), 1.0)
    # jitter < 1 only reorders tied counts
    return np.argmax(counts + rng.random(counts.shape) * 0.5, axis=1)


def _majority_trial(cfg: SimConfig, rng: np.random.Generator) -> float:
    n, Rp = cfg.n_items, cfg.queries_per_item
    N = len(cfg.source)
    labels = generate_dataset(n, cfg.source, rng)
    queries, _ = assign_queries(n, 1, Rp, rng)
    eps = cfg.worker_model.sample(queries.shape[0], rng)
    answers = msc_sample_many(labels[queries[:, 0]], eps, N, rng)
    # k = 1 queries are R' stacked permutations of the items
    per_item = np.empty((n, Rp), dtype=np.int64)
    per_item[queries[:, 0], np.repeat(np.arange(Rp), n)] = answers
    decoded = plurality_vote(per_item, N, rng)
    return float(np.mean(decoded != labels))


def run_majority_vote_sim(cfg: SimConfig) -> SimulationReport:
    """Direct label queries to an MSC population, decoded by plurality."""
    if cfg.code_k != 1:
        raise ValidationError("majority voting is defined for direct queries only (k = 1)")
    if not isinstance(cfg.worker_model, SkillPopulation):
        raise ValidationError("majority voting needs an MSC skill population")
    if cfg.decoder != "majority":
        raise ValidationError(f"config decoder is {cfg.decoder!r}, expected 'majority'")
    if len(cfg.source) < 2:
        raise ValidationError("source needs at least two labels")
    errs = [_majority_trial(cfg, rng) for rng in _trial_rngs(cfg)]
    return _summarize(errs, None, cfg.rate, cfg, 0)


def run_simulation(cfg: SimConfig) -> SimulationReport:
    if cfg.decoder == "oracle":
        return run_oracle_decoder_sim(cfg)
    return run_majority_vote_sim(cfg)


SWEEP_AXES = ("queries_per_item", "q", "target_error")


def _grid_seed(seed: int, index: int) -> int:
    return int(np.random.SeedSequence([seed, index]).generate_state(1, dtype=np.uint64)[0])


def sweep_configs(cfg: SimConfig, axis: str, grid: Sequence[float]) -> List[SimConfig]:
    """One derived config per grid value, each with its own seed.

    ``target_error`` sets ``R'`` to the smallest integer at or above the kIC
    oracle threshold ``k * R`` for that target (at least 1).
    """
    if axis not in SWEEP_AXES:
        raise ValidationError(f"sweep axis must be one of {SWEEP_AXES}, got {axis!r}")
    out = []
    for i, value in enumerate(grid):
        seed = _grid_seed(cfg.seed, i)
        if axis == "queries_per_item":
            c = replace(cfg, queries_per_item=int(value), seed=seed)
        elif axis == "q":
            if not isinstance(cfg.worker_model, ShcModel):
                raise ValidationError("a q sweep needs a spammer-hammer worker model")
            c = replace(cfg, worker_model=ShcModel(float(value)), seed=seed)
        else:
            if not isinstance(cfg.worker_model, ShcModel):
                raise ValidationError("a target_error sweep needs a spammer-hammer worker model")
            r = kic_rate_threshold(cfg.code_k, cfg.worker_model.q, float(value))
            if not r.feasible:
                raise ValidationError(f"target error {value} is unreachable at q={cfg.worker_model.q}")
            Rp = max(1, math.ceil(cfg.code_k * r.value - 1e-9))
            c = replace(cfg, queries_per_item=Rp, seed=seed)
        out.append(c)
    return out


def sweep(cfg: SimConfig, axis: str, grid: Sequence[float]) -> List[SimulationReport]:
    return [run_simulation(c) for c in sweep_configs(cfg, axis, grid)]
