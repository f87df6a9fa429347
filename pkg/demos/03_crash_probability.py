"""Crash probability: exact enumeration, Monte Carlo, and closed-form bounds.

F_p is the probability, when each server crashes independently with
probability p, that every quorum contains at least one crashed server.  Small
systems are enumerated exactly (2^n alive sets); larger ones use reproducible
counter-based Monte Carlo, so the same seed gives bit-identical estimates no
matter how many worker threads run.
"""

import maskquorum as mq

# The 3-of-4 block has the closed form 6p^2 - 8p^3 + 3p^4.
handle = mq.build(mq.ThresholdSpec(4, 3))
for p in (0.1, 0.2, 0.3):
    exact = mq.crash_prob_exact(handle, p).value
    poly = 6 * p ** 2 - 8 * p ** 3 + 3 * p ** 4
    print(f"3-of-4 block  p={p:.2f}  exact={exact:.6f}  polynomial={poly:.6f}")

# Iterating the block crash function drives F_p to 0 below the critical
# probability and to 1 above it.
pc = mq.rt_critical_probability(4, 3)
print(f"\n3-of-4 critical probability: {pc.value:.4f} (below 1/2: {pc.below_half})")
for p in (0.15, 0.30):
    trajectory = [mq.rt_fp_recurrence(4, 3, h, p) for h in range(6)]
    print(f"  p={p:.2f}: F(h) = " + ", ".join(f"{v:.3g}" for v in trajectory))

# Monte Carlo agrees with enumeration and is deterministic in the seed.
rt = mq.build(mq.RTSpec(4, 3, 2))
exact = mq.crash_prob_exact(rt, 0.2).value
mc = mq.crash_prob_mc(rt, 0.2, trials=200_000, seed=42)
print(f"\nRT(4,3,2) at p=0.2: exact {exact:.5f}, MC {mc.value:.5f} "
      f"(std err {mc.std_error:.5f}, seed {mc.seed})")

again = mq.crash_prob_mc(rt, 0.2, trials=200_000, seed=42, workers=8)
print(f"same seed, 8 workers: {again.value:.5f} (bit-identical: {again.value == mc.value})")

# Lower bounds from the combinatorial parameters hold for every system.
params = rt.params
for p in (0.1, 0.3, 0.5):
    bounds = mq.fp_lower_bounds(params, p)
    print(f"p={p:.1f}: exact {mq.crash_prob_exact(rt, p).value:.6f} >= "
          f"p^a_min {bounds.p_mt:.6f}, p^(c-2b) {bounds.p_c2f:.6f}")
