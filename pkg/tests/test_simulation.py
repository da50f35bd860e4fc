import numpy as np
import pytest

from crowdinfo.infomath import ValidationError
from crowdinfo.simulation import (
    ShcModel,
    SimConfig,
    assign_queries,
    generate_dataset,
    plurality_vote,
    run_majority_vote_sim,
    run_oracle_decoder_sim,
    run_simulation,
    sweep,
    sweep_configs,
)
from crowdinfo.workers import SkillPopulation

from oracles import majority_error_binary


def shc_cfg(k, q, Rp, n=20000, trials=8, seed=7, source=(0.5, 0.5)):
    return SimConfig(n, source, k, Rp, ShcModel(q), "oracle", seed, trials)


def mv_cfg(eps, Rp, n=20000, trials=8, seed=7, source=(0.5, 0.5)):
    pop = eps if isinstance(eps, SkillPopulation) else SkillPopulation.point_mass(eps)
    return SimConfig(n, source, 1, Rp, pop, "majority", seed, trials)


def test_dataset_deterministic_source(rng):
    assert not generate_dataset(100, (1.0, 0.0), rng).any()


def test_dataset_uniform_binary(rng):
    labels = generate_dataset(10 ** 6, (0.5, 0.5), rng)
    assert abs(np.mean(labels == 0) - 0.5) <= 0.0015


def test_dataset_empty(rng):
    assert generate_dataset(0, (0.5, 0.5), rng).size == 0


def test_assign_direct_repetition(rng):
    queries, fillers = assign_queries(5, 1, 3, rng)
    assert queries.shape == (15, 1) and fillers == 0
    assert np.array_equal(np.bincount(queries.ravel()), [3] * 5)


def test_assign_small_regular(rng):
    queries, fillers = assign_queries(6, 3, 2, rng)
    assert queries.shape == (4, 3) and fillers == 0
    assert np.array_equal(np.bincount(queries.ravel()), [2] * 6)


def test_assign_too_few_items(rng):
    with pytest.raises(ValidationError):
        assign_queries(2, 3, 1, rng)


@pytest.mark.parametrize("n", [3, 4, 5, 7, 10, 31])
@pytest.mark.parametrize("k", [1, 2, 3, 4])
@pytest.mark.parametrize("Rp", [1, 2, 3, 5])
def test_assign_degree_regular(n, k, Rp, rng):
    if n < k:
        return
    queries, fillers = assign_queries(n, k, Rp, rng)
    flat = queries.ravel()
    assert fillers == (-n * Rp) % k
    assert queries.shape == ((n * Rp + fillers) // k, k)
    assert np.array_equal(np.bincount(flat[flat < n], minlength=n), np.full(n, Rp))
    assert np.array_equal(np.sort(flat[flat >= n]), n + np.arange(fillers))
    assert all(len(set(row)) == k for row in queries.tolist())


def test_oracle_all_hammers():
    assert run_oracle_decoder_sim(shc_cfg(3, 1.0, 2)).empirical_error == 0.0


def test_oracle_reference_point():
    r = run_oracle_decoder_sim(shc_cfg(3, 0.3, 3, n=10 ** 5, trials=20))
    assert r.analytic_prediction == pytest.approx(0.25 * 0.7 ** 3)
    assert abs(r.empirical_error - 0.08575) <= 3 * r.std_error
    assert r.rate_used == 1.0


def test_oracle_pure_spammers():
    r = run_oracle_decoder_sim(shc_cfg(2, 0.0, 1, n=50000))
    assert r.analytic_prediction == 0.25
    assert abs(r.empirical_error - 0.25) <= 4 * r.std_error


def test_oracle_direct_queries():
    r = run_oracle_decoder_sim(shc_cfg(1, 0.4, 2, n=50000))
    assert r.analytic_prediction == pytest.approx(0.5 * 0.36)
    assert abs(r.empirical_error - 0.18) <= 4 * r.std_error


def test_oracle_skewed_binary_source():
    r = run_oracle_decoder_sim(shc_cfg(4, 0.2, 1, n=50000, source=(0.85, 0.15)))
    assert abs(r.empirical_error - 0.3125 * 0.8) <= 4 * r.std_error


def test_oracle_with_fillers():
    r = run_oracle_decoder_sim(shc_cfg(3, 0.0, 1, n=30002, trials=8))
    assert r.n_fillers == 1
    assert abs(r.empirical_error - 0.25) <= 4 * r.std_error


def test_oracle_rejects_wrong_model():
    with pytest.raises(ValidationError):
        run_oracle_decoder_sim(SimConfig(100, (0.5, 0.5), 2, 1, SkillPopulation.point_mass(0.1), "oracle"))
    with pytest.raises(ValidationError):
        run_oracle_decoder_sim(shc_cfg(3, 0.3, 1, source=(0.3, 0.3, 0.4)))


def test_majority_perfect_workers():
    assert run_majority_vote_sim(mv_cfg(0.0, 3)).empirical_error == 0.0


def test_majority_single_response():
    r = run_majority_vote_sim(mv_cfg(0.3, 1, n=50000))
    assert r.analytic_prediction is None
    assert abs(r.empirical_error - 0.3) <= 4 * r.std_error


@pytest.mark.parametrize("Rp", [2, 4, 5])
def test_majority_matches_binomial(Rp):
    r = run_majority_vote_sim(mv_cfg(0.3, Rp, n=50000, trials=10))
    expected = float(majority_error_binary("3/10", Rp))
    assert abs(r.empirical_error - expected) <= 4 * r.std_error


def test_majority_rejects_kic():
    with pytest.raises(ValidationError):
        run_majority_vote_sim(SimConfig(100, (0.5, 0.5), 2, 1, SkillPopulation.point_mass(0.1), "majority"))
    with pytest.raises(ValidationError):
        run_majority_vote_sim(SimConfig(100, (0.5, 0.5), 1, 1, ShcModel(0.5), "majority"))


def test_plurality_tie_break_uniform(rng):
    votes = np.tile([0, 1], (40000, 1))
    decided = plurality_vote(votes, 2, rng)
    assert abs(decided.mean() - 0.5) < 4 * np.sqrt(0.25 / 40000)
    assert np.array_equal(plurality_vote(np.array([[2, 2, 0], [1, 0, 1]]), 3, rng), [2, 1])


def test_config_validation():
    with pytest.raises(ValidationError):
        SimConfig(2, (0.5, 0.5), 3, 1, ShcModel(0.5))
    with pytest.raises(ValidationError):
        SimConfig(10, (0.5, 0.5), 3, 0, ShcModel(0.5))
    with pytest.raises(ValidationError):
        SimConfig(10, (0.5, 0.5), 3, 1, ShcModel(0.5), n_trials=0)


def test_ci_only_with_enough_trials():
    assert run_simulation(shc_cfg(2, 0.5, 1, n=1000, trials=3)).ci_halfwidth is None
    r = run_simulation(shc_cfg(2, 0.5, 1, n=1000, trials=8))
    assert r.ci_halfwidth >= 0


def test_determinism():
    cfg = shc_cfg(3, 0.4, 2, n=5000)
    assert run_simulation(cfg) == run_simulation(cfg)
    other = run_simulation(shc_cfg(3, 0.4, 2, n=5000, seed=8))
    assert other.trial_errors != run_simulation(cfg).trial_errors


def test_sweep_empty():
    assert sweep(shc_cfg(3, 0.3, 1), "queries_per_item", []) == []


def test_sweep_predictions_decrease():
    reports = sweep(shc_cfg(3, 0.3, 1, n=5000), "queries_per_item", [1, 2, 3])
    preds = [r.analytic_prediction for r in reports]
    assert len(reports) == 3 and preds[0] > preds[1] > preds[2]


def test_sweep_repeatable_and_seeded_per_point():
    cfg = shc_cfg(2, 0.5, 1, n=3000)
    a = sweep(cfg, "q", [0.2, 0.6])
    assert a == sweep(cfg, "q", [0.2, 0.6])
    seeds = [c.seed for c in sweep_configs(cfg, "q", [0.2, 0.6])]
    assert len(set(seeds)) == 2 and cfg.seed not in seeds


def test_sweep_target_error_picks_threshold_rate():
    cfgs = sweep_configs(shc_cfg(3, 0.3, 1), "target_error", [0.2, 0.05, 0.01])
    assert [c.queries_per_item for c in cfgs] == [1, 5, 10]
    with pytest.raises(ValidationError):
        sweep_configs(shc_cfg(3, 0.3, 1), "bogus", [1])


def test_error_non_increasing_in_queries():
    for k, q in ((2, 0.2), (3, 0.5), (4, 0.8)):
        reports = sweep(shc_cfg(k, q, 1, n=30000), "queries_per_item", [1, 2, 4])
        for a, b in zip(reports, reports[1:]):
            assert b.empirical_error <= a.empirical_error + a.ci_halfwidth + b.ci_halfwidth
