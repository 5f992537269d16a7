"""
Robustness drills: adversarial inputs at a fixed precision target
=================================================================

Three stress tests, scaled down for a quick run:

* zero-join: left and right tables from disjoint vocabularies, so every
  produced join is a false positive (the engine should produce almost none);
* irrelevant right rows: flooding the query side with strangers should not
  disturb recall on the true rows;
* blocking factor sweep: once the per-record candidate budget passes
  sqrt(|L|), results barely move.
"""

from fuzzyjoin import (
    generate_synthetic,
    robustness_beta_sweep,
    robustness_irrelevant_r,
    robustness_zero_join,
)

print("zero-join stress (200 x 200 disjoint random token strings):")
point = robustness_zero_join(n_left=200, n_right=200, seed=0)
print(f"  joins produced: {point.report.n_assigned}, "
      f"false-positive rate: {point.fp_rate:.4f} (want < 0.05)")
print()

L, R, gt = generate_synthetic(n_left=80, seed=3, unmatched_rate=0.1)

print("irrelevant right rows (fraction of query table that is noise):")
for p in robustness_irrelevant_r(L, R, gt, rates=(0.2, 0.6), seed=0):
    r = p.report
    print(f"  rate={p.params['rate']:.1f}: precision={r.precision:.3f} "
          f"recall_abs={r.recall_absolute}")
print()

print("blocking factor sweep (candidates kept per row = beta * sqrt(|L|)):")
for p in robustness_beta_sweep(L, R, gt, betas=(0.25, 1.0, 2.0), seed=0):
    r = p.report
    print(f"  beta={p.params['beta']:.2f}: precision={r.precision:.3f} "
          f"recall_abs={r.recall_absolute}")
