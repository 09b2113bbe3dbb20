"""Growth and regularity conditions with explicit, recheckable constants.

Every checker returns a ConditionReport: a verdict plus the constants and
witnesses that justify it, serializable to JSON.
"""

import math

from orliczkit import (
    SampleSpec,
    WeightFunction,
    check_a0,
    check_a1,
    check_a2,
    check_ainc,
    check_equivalence,
    doubling_scale,
    enlarge_ainc_constant,
    exponent_from_doubling,
    from_curve,
    make_family,
    power_curve,
    reports_table,
)

# A profile that is linear below 1 and quadratic above: max(t, t^2) variant.
phi = make_family("example_3_4", {}, None)

# Almost-increase of phi(t)/t^p.  Holds with constant ~2 for p=2 on [1, inf),
# fails on (0, 1] where the profile is only linear.
ok_above = check_ainc(phi, 2.0, T=(1.0, math.inf))
fails_below = check_ainc(phi, 1.5, T=(0.0, 1.0),
                         spec=SampleSpec(t_min=1e-30, t_max=1.0))
print("aInc_2 on [1, inf):", ok_above.holds,
      "constant", round(ok_above.constants["sampled_sup"], 4))
print("aInc_1.5 on (0, 1]:", fails_below.holds,
      "worst ratio", f"{fails_below.constants['sampled_sup']:.3g}",
      "witness", fails_below.worst_witness)

# Normalization (A0): a beta with phi(x, beta) <= 1 <= phi(x, 1/beta).
a0 = check_a0(phi)
print("A0:", a0.holds, "beta =", a0.constants["beta"])

# Local comparability over small balls (A1') and comparability to an
# x-independent asymptote up to an integrable error (A2).
a1 = check_a1(phi)
a2 = check_a2(phi, power_curve(1.0), WeightFunction.zero(), beta=0.5)
print("A1':", a1.holds, "beta =", a1.constants["beta"])
print("A2 vs t (beta=1/2):", a2.holds)

# Equivalence up to a multiplicative constant, with the least L found.
eq = check_equivalence(from_curve(power_curve(2.0)),
                       make_family("orlicz", {"p": 2.0, "coef": 4.0}, None),
                       L=4.0)
print("t^2 ~ 4t^2:", eq.holds, "least L =", eq.constants["least_L"])

# Constant algebra: exact relations between doubling and growth exponents.
c = doubling_scale(1.0, 3.0)
print("doubling scale for p=3:", c, "-> exponent back:",
      exponent_from_doubling(c))
print("constant after widening the range [1, inf) -> [1/4, inf):",
      enlarge_ainc_constant(2.0, 2.0, 0.25, 1.0))

# Reports render as a fixed-width table for quick scanning.
print()
print(reports_table([ok_above, fails_below, a0, a1, a2]))
