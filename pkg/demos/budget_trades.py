#!/usr/bin/env python3
"""How the pixel budget turns into trades.

Derives the promote/demote ratio for a few factor triples, then runs the
greedy allocator on a small hand-readable score matrix and shows the trade
it takes, the one it refuses, and the exhaustive-search cross-check.
"""

import numpy as np

from bbmr import (FactorTriple, allocate, build_trade_arrays, oracle_allocate,
                  solve_budget_ratio, uniform_plan)

# ---------------------------------------------------------------------------
# the trade ratio is pure arithmetic on stored pixel counts
# ---------------------------------------------------------------------------
print("promote:demote ratio per factor triple (block 64x64):")
for triple in (FactorTriple(2, 4, 8), FactorTriple(1, 2, 4),
               FactorTriple(2, 4, 16)):
    ratio = solve_budget_ratio(triple, 64, 64)
    k1, k2, k3 = triple
    p = [(64 // k) * (64 // k) for k in triple]
    print(f"  ({k1},{k2},{k3}): pixels {p[0]}/{p[1]}/{p[2]} "
          f"-> promote {ratio.a} per {ratio.c} demoted "
          f"({ratio.a}*{p[0]} + {ratio.c}*{p[2]} = "
          f"{ratio.a * p[0] + ratio.c * p[2]} = "
          f"{ratio.a + ratio.c}*{p[1]})")
print()

# ---------------------------------------------------------------------------
# a ten-block allocation, worked by hand
# ---------------------------------------------------------------------------
# columns: PSNR at fine / mid / coarse factor
scores = np.array([
    [38.0, 30.0, 29.9],   # textured but cheap to demote
    [36.0, 30.0, 29.8],   # second-best promotion
    [31.0, 30.5, 25.3],   # mid-band detail: poor earn, pricey pay
    [30.2, 30.0, 29.9],   # near-flat
    [30.2, 30.0, 29.9],
    [30.1, 30.0, 29.9],
    [30.1, 30.0, 29.9],
    [30.1, 30.0, 29.8],
    [30.1, 30.0, 29.8],
    [30.0, 30.0, 29.8],
])
factors = FactorTriple(2, 4, 8)
ratio = solve_budget_ratio(factors, 64, 64)
threshold = 0.5

gains = scores[:, 0] - scores[:, 1]
losses = scores[:, 1] - scores[:, 2]
print("block  earn(dB)  pay(dB)")
for i, (g, l) in enumerate(zip(gains, losses)):
    print(f"  {i}      {g:5.2f}    {l:5.2f}")
print()

plan = allocate(build_trade_arrays(scores), ratio, threshold,
                block_max_k1=len(scores) // (ratio.a + ratio.c),
                n_blocks=len(scores), factors=factors)
print(f"greedy with t = {threshold} dB: {plan.trades} trade(s)")
print(f"  codes: {plan.codes.tolist()}  (1 = fine, 2 = mid, 3 = coarse)")

# trade 1 promotes block 0 (earn 8.0) for the four cheapest demotions
# (0.1 dB each); trade 2 would promote block 1 (earn 6.0), but the
# cheapest demotions left are 0.2 + 0.2 + 0.2 + 5.2 = 5.8, and
# 6.0 < 5.8 + 0.5, so the loop stops with block 1 at the mid factor
uniform = uniform_plan(len(scores), factors, ratio)
print(f"  stored pixels: {plan.lr_pixels(64, 64)} "
      f"(uniform {uniform.lr_pixels(64, 64)})")

reference = oracle_allocate(scores, ratio, threshold, len(scores), factors)
agree = np.array_equal(plan.codes, reference.codes)
print(f"  exhaustive sweep agrees: {agree} "
      f"({reference.trades} trade(s))")
