"""A strongly positive perturbation C_{a,s} that destroys eventual positivity."""

from evpos import classify_semigroup
from evpos.models import (
    example_counterexample_3d,
    example_positive_family,
    positive_family_threshold,
)

A, _ = example_counterexample_3d()
s = 4.05
threshold = positive_family_threshold(s)
print(f"largest a keeping A + C_(a,{s}) not eventually positive: {threshold:.6g}")
for a in (0.0, 0.25 * threshold, 0.5 * threshold, 2 * threshold):
    C = example_positive_family(a, s)
    print(f"a = {a:.4g}: C is {classify_semigroup(C).verdict.value}, "
          f"A + C is {classify_semigroup(A + C).verdict.value}")
