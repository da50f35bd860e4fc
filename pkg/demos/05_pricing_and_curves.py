"""
What should a bigger query cost?
================================

Bigger queries cover more items per answer. This script asks what price
per query keeps a k2-item design as cheap as a k1-item one, then prints
the curves comparing the kIC rates with the converse limit.
"""

from crowdinfo import PriceQuote, campaign_cost, figure2_table, kic_rate_threshold
from crowdinfo.pricing import price_threshold, price_threshold_exact

q, target = 0.3, 0.05
for k in (2, 3, 4, 5):
    rate = kic_rate_threshold(k, q, target).value
    cost = campaign_cost(PriceQuote(0.10, k), n_items=10_000, rate=rate)
    print(f"k={k}: {rate:.4f} queries/item, cost for 10k items at $0.10 = ${cost:,.2f}")

# The simple rule scales the price with k. The exact break-even price uses
# the actual rates. It matches the simple rule when k1 is even and drops below it when k1 is odd.
for k1 in range(2, 8):
    approx = price_threshold(k1, k1 + 1, 0.10)
    exact = price_threshold_exact(k1, k1 + 1, q, target, 0.10)
    print(f"{k1}->{k1 + 1}: simple {approx:.4f}, exact {exact:.4f}")

# %%
# Curve data for plotting in any tool.
rows = figure2_table(q=0.5, k_list=(2, 3, 4))
for p in rows[:: len(rows) // 8]:
    print(f"{p.curve:9s} eps={p.epsilon_hat:.3f} rate={p.rate}")
