"""
Asking about several items at once
==================================

A k-item query asks a worker to group items that share a label. The
answer is a set partition, so only the grouping matters, not the names.
"""

from crowdinfo import KicCode, encode_query, spammer_error_prob, spammer_error_prob_bruteforce
from crowdinfo.kic import count_valid_responses, stirling2

# With two labels, a k-item query has 2^(k-1) distinct answers.
for k in range(2, 7):
    print(f"k={k}: {KicCode(k, 2).n_responses} binary answers")

# With more labels, answers are counted by Stirling numbers.
print("k=5, N=3:", count_valid_responses(5, 3), "=", sum(stirling2(5, j) for j in range(1, 4)))

# The code forgets label names: these two labelings are the same answer.
code = KicCode(4, 2)
print(encode_query([0, 1, 1, 0], code), encode_query([1, 0, 0, 1], code))

# %%
# A spammer answers at random. After the best relabeling, what fraction
# of the items in the query end up wrong? The closed form and exhaustive
# search agree, and the value repeats in pairs (k=2,3 then 4,5, ...).
for k in range(2, 11):
    print(f"k={k:2d}  closed={spammer_error_prob(k):.6f}  brute={spammer_error_prob_bruteforce(k):.6f}")
