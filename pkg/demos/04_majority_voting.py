"""
Plain majority voting
=====================

Direct questions with repetition, decoded by plurality vote. For a crowd
of identical workers the error follows a binomial tail.
"""

from math import comb

from crowdinfo import SimConfig, SkillPopulation, run_majority_vote_sim


def binomial_tail(eps, r):
    # ties are broken by a fair coin
    total = 0.0
    for j in range(r + 1):
        pj = comb(r, j) * eps ** j * (1 - eps) ** (r - j)
        total += pj if 2 * j > r else pj / 2 if 2 * j == r else 0.0
    return total


for r in (1, 3, 5, 7):
    cfg = SimConfig(40_000, (0.5, 0.5), 1, r, SkillPopulation.point_mass(0.3), "majority", seed=r, n_trials=8)
    rep = run_majority_vote_sim(cfg)
    print(f"R={r}: simulated {rep.empirical_error:.4f}, binomial {binomial_tail(0.3, r):.4f}")
