"""Painleve V: Backlund maps, composites and the ladder.

Random admissible jets of a case-1 solution are pushed through Backlund
transformations and the images are checked against P_V with the mapped
parameters.  Composites use square roots tracked from ``(beta - 1, n, k1)``.
"""

import random
from fractions import Fraction

from meixner_pv.numeric import PrecisionConfig
from meixner_pv.painleve import (
    COMPOSITE_SIGNS,
    CaseId,
    SignTriple,
    backlund,
    backlund_params,
    case1_composite,
    case1_roots,
    case_params,
    image_roots,
    ladder,
    pv_residual,
    remark2_transforms,
    sample_jet,
)

cfg = PrecisionConfig(256)
rng = random.Random(1)
g, b, n = cfg.mpf("1.5"), cfg.mpf("0.7"), 1
p = case_params(CaseId(1, n, g, b, 1))

worst = 0
for s in SignTriple.all():
    for _ in range(20):
        t, jet = sample_jet(rng, p, cfg)
        y1, p1 = backlund(t, jet, p, s)
        worst = max(worst, abs(pv_residual(t, y1, p1)))
print(f"Backlund images, 8 sign triples: max residual {float(worst):.2e}")

# exact parameter maps of the two composites
gq, bq = Fraction(3, 2), Fraction(7, 10)
for key, case in (("Y1", 2), ("Y2", 3)):
    q, roots = case_params(CaseId(1, n, gq, bq, 1)), case1_roots(n, bq)
    for s in COMPOSITE_SIGNS[key]:
        q, roots = backlund_params(q, s, roots), image_roots(q, s, roots)
    print(f"{key}: composite parameters {q}, case {case}: {q == case_params(CaseId(case, n, gq, bq, 1))}")

# composites agree with the closed-form transforms pointwise
t, jet = sample_jet(rng, p, cfg)
Y1, Y2 = remark2_transforms(t, jet, n, g, b)
c1, _ = case1_composite(t, jet, n, g, b, COMPOSITE_SIGNS["Y1"])
c2, _ = case1_composite(t, jet, n, g, b, COMPOSITE_SIGNS["Y2"])
print(f"|Y1 - composite| = {float(abs(Y1.f - c1.f)):.2e}, |Y2 - composite| = {float(abs(Y2.f - c2.f)):.2e}")

# ladder n -> n + 1
target = case_params(CaseId(1, n + 1, g, b, 1))
up = ladder(t, jet, "up", n, g, b)
print(f"ladder up residual in P_V(n = {n + 1}): {float(abs(pv_residual(t, up, target))):.2e}")
