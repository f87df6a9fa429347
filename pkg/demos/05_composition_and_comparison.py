"""Composition algebra and the published four-way comparison.

Replacing every element of one quorum system with a copy of another
multiplies all five measures (n, c, i_min, a_min, load) and composes the
crash-probability functions.  The boosting recipe - a projective plane over
(3b+1)-of-(4b+1) threshold blocks - turns a plain quorum system into a
b-masking one with optimal load.
"""

import maskquorum as mq

outer = mq.build(mq.FPPSpec(2)).materialize(100)
inner = mq.build(mq.ThresholdSpec(3, 2)).materialize(100)
composed = mq.compose_explicit(outer, inner)
print(f"FPP(2) over Threshold(3,2): n={composed.n}, {composed.m} quorums")
print("  brute force (c, i_min, a_min):", tuple(mq.combinatorial_params(composed)))

algebra = mq.compose_params(mq.build(mq.FPPSpec(2)).params,
                            mq.build(mq.ThresholdSpec(3, 2)).params)
print("  parameter algebra            :", (algebra.c, algebra.i_min, algebra.a_min))

# Crash probabilities compose functionally: F(p) = s(r(p)).
for p in (0.1, 0.25):
    r_p = mq.crash_prob_exact(inner, p).value
    s_r = mq.crash_prob_exact(outer, r_p).value
    whole = mq.crash_prob_exact(composed, p).value
    print(f"  p={p:.2f}: F(composition)={whole:.6f}  s(r(p))={s_r:.6f}")

# The four constructions at the published comparison point: 1024 servers,
# crash probability 1/8 per server.  (The CLI renders the same table:
# `maskquorum table8`.)
from maskquorum.cli import _table8_rows

print(f"\n{'system':<18} {'b':>3} {'f':>3} {'load':>9} {'kind':>6} "
      f"{'F_p value':>11} {'published':>10}")
for row in _table8_rows(p=0.125, n=1024):
    print(f"{row['system']:<18} {row['b']:>3} {row['f']:>3} {row['load']:>9.4f} "
          f"{row['fp_kind']:>6} {row['fp_value']:>11.3g} {row['paper_value']:>10}")
print("\n(The crossing-paths row reports f = 28; the published table prints 29.)")
