"""Surgery on Phi-functions.

Four constructions that change a function's small- or large-value behavior
while keeping it (weakly) equivalent to the original, plus an estimator
that recovers x-independent asymptotes empirically.
"""

from orliczkit import (
    AsymptotePair,
    WeightFunction,
    cap_curve,
    check_ainc,
    check_weak_equivalence,
    glue_small_values,
    make_family,
    power_curve,
    rebuild_with_ainc,
    region_from_dict,
    repair_asymptote,
    small_value_threshold,
    tail_asymptotes,
)

# 1. Glue: on a chosen region, replace small values (below 1) by their
#    p-th power.  Here the strip example becomes t^2 everywhere.
phi = make_family("example_3_2", {}, None)
G = region_from_dict({"region": "inv_square_strip"})
glued = glue_small_values(phi, G, 2.0)
x_in = (2.0, 1e-9)
print("before glue at x in G, t=0.5:", phi.eval(x_in, 0.5))
print("after  glue at x in G, t=0.5:", glued.eval(x_in, 0.5))

# 2. Threshold: the largest safe level below which an x-independent
#    asymptote and the function both stay <= 1, halved for margin.
base = make_family("example_3_5", {}, None)
t1 = small_value_threshold(base, power_curve(2.0))
print("small-value threshold t1 =", t1)

# 3. Cap / repair: truncate a curve at a level, or splice a power tail
#    onto an asymptote above t1 so large values grow like t^p.
capped = cap_curve(power_curve(1.0), beta0=2.0)
print("capped linear curve at t=5:", capped.value(5.0), "(flat above 2)")
repaired = repair_asymptote(power_curve(2.0), t1=0.5, p=2.0)
print("repaired quadratic is aInc_2:", check_ainc(repaired, 2.0).holds)

# 4. Rebuild: given an asymptote pair (phi_inf, h, beta), produce a new
#    function that follows phi_inf for small values and dominates the
#    original beyond, gaining a clean almost-increase property.
h = WeightFunction.recip_power(4.0, 2)
pair = AsymptotePair(power_curve(2.0), h, beta=1.0)
psi = rebuild_with_ainc(base, pair, t1)
print("rebuilt: aInc_2 holds:", check_ainc(psi, 2.0).holds)
print("rebuilt ~ original (L=1, h):",
      check_weak_equivalence(base, psi, L=1.0, h=h).holds)

# 5. Estimate asymptotes from samples: upper/lower envelopes over shells
#    of growing radius, returned as witness curves.
est_upper, est_lower = tail_asymptotes(base)
print("estimated tail at t=2: upper", est_upper.value(2.0),
      "lower", est_lower.value(2.0), "(true asymptote t^2 -> 4)")
