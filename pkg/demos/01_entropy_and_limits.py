"""
How many answers does a crowd need?
===================================

Worker skill caps how much each answer can say about the truth. This walk
through compares that cap with the information a labeling has to carry.
"""

import numpy as np

from crowdinfo import (
    BoundQuery,
    Pmf,
    SkillPopulation,
    binary_entropy,
    msc_capacity_pointwise,
    rate_distortion_hamming,
    rmin_sl_cs,
    rmin_sl_uk,
)

# A fair binary label carries one bit. A worker who errs 10% of the time
# on a binary question delivers a bit minus the entropy of that error.
print("H_b(0.1)              =", round(binary_entropy(0.1), 6))
print("capacity, eps=0.1, M=2 =", round(msc_capacity_pointwise(0.1, 2), 6))

# Allowing some residual error shrinks the information needed per item.
source = Pmf.uniform(2)
for target in (0.0, 0.05, 0.1, 0.25, 0.5):
    print(f"bits needed at target {target:<4}: {rate_distortion_hamming(source, target):.4f}")

# %%
# A mixed crowd: 60% careful workers and 40% near-random ones.
crowd = SkillPopulation.from_pairs([(0.05, 0.6), (0.45, 0.4)])
query = BoundQuery(source, M=2, population=crowd, target_error=0.05)

# Knowing each worker's skill (sl-cs) can only lower the bound relative to
# knowing the crowd average alone (sl-uk).
print("rate bound, skill unknown :", rmin_sl_uk(query))
print("rate bound, skill known   :", rmin_sl_cs(query))

# %%
# Sweep the target error to see the whole trade-off curve.
grid = np.linspace(0.01, 0.45, 10)
for eps in grid:
    q = BoundQuery(source, 2, crowd, float(eps))
    print(f"eps={eps:.3f}  uk={rmin_sl_uk(q).value:7.3f}  cs={rmin_sl_cs(q).value:7.3f}")
