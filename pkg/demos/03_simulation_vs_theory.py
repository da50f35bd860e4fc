"""
Checking the oracle decoder by simulation
=========================================

Each query goes to a hammer (perfect) with probability q, or to a spammer.
An item is wrong only if all its queries reached spammers, so the error is
the spammer error times (1 - q)^R', where R' is the number of queries per item.
"""

from crowdinfo import ShcModel, SimConfig, run_simulation, sweep

cfg = SimConfig(
    n_items=50_000, source=(0.5, 0.5), code_k=3, queries_per_item=1,
    worker_model=ShcModel(0.3), decoder="oracle", seed=2024, n_trials=8,
)

for report in sweep(cfg, "queries_per_item", [1, 2, 3, 4, 6]):
    print(f"rate={report.rate_used:.3f}  empirical={report.empirical_error:.5f} "
          f"+/- {report.ci_halfwidth:.5f}  predicted={report.analytic_prediction:.5f} "
          f"({report.deviation_sigmas():+.2f} sigma)")

# %%
# Same seed, same numbers: runs are reproducible bit for bit.
assert run_simulation(cfg) == run_simulation(cfg)
print("repeat run identical")
