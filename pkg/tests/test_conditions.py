import json
import math

import numpy as np
import pytest
from hypothesis import given, strategies as st

from orliczkit import (
    SampleSpec,
    WeightFunction,
    check_a0,
    check_a1,
    check_a2,
    check_adec,
    check_ainc,
    check_equivalence,
    check_weak_equivalence,
    doubling_scale,
    enlarge_ainc_constant,
    exponent_from_doubling,
    from_curve,
    make_family,
    power_curve,
    region_from_dict,
    reports_table,
    weight_from_dict,
)

INF = math.inf


# ---------------------------------------------------------------------------
# Almost-monotone growth


def test_ainc_power_curves():
    c = power_curve(2.0)
    rep = check_ainc(c, 2.0)
    assert rep.holds and abs(rep.constants["a"] - 1.0) < 1e-9
    rep = check_ainc(c, 1.5)
    assert rep.holds
    rep = check_ainc(c, 3.0)
    assert not rep.holds and "diverges_at_infinity" in rep.flags
    assert rep.constants["a"] == INF


def test_adec_power_curves():
    c = power_curve(2.0)
    assert check_adec(c, 2.0).holds
    assert check_adec(c, 3.0).holds
    rep = check_adec(c, 1.5)
    assert not rep.holds and "diverges_at_infinity" in rep.flags


def test_ainc_restricted_range(families):
    phi = families["example_3_4"]
    rep = check_ainc(phi, 2.0, T=(1.0, INF))
    # the claimed constant on [1, inf) is exactly 2
    assert rep.holds and rep.constants["sampled_sup"] <= 2.0 + 1e-9
    assert rep.constants["sampled_sup"] >= 1.9
    rep = check_ainc(phi, 1.5, T=(0.0, 1.0))
    assert not rep.holds and "diverges_at_zero" in rep.flags


def test_ainc_reported_constant_recheckable():
    phi = families_phi = make_family(
        "double_phase", {"p": 1.5, "q": 2.5,
                         "a": {"field": "const", "value": 1.0}}, None)
    rep = check_ainc(families_phi, 1.5)
    assert rep.holds
    a = rep.constants["a"]
    spec = SampleSpec()
    grid = spec.t_grid()
    vals = phi.eval_grid(np.array([[0.0]]), grid)[0]
    r = vals / grid ** 1.5
    for i in range(0, len(grid) - 1, 7):
        assert r[i] <= a * np.min(r[i + 1:]) * (1 + 1e-9)


def test_ainc_witness_and_interval_validation():
    rep = check_ainc(families_ex34(), 2.0, T=(1.0, INF))
    w = rep.worst_witness
    assert w is not None and w["t"] < w["s"]
    with pytest.raises(ValueError):
        check_ainc(power_curve(2.0), 2.0, T=(3.0, 1.0))


def families_ex34():
    return make_family("example_3_4", {}, None)


@given(st.floats(1.0, 4.0), st.floats(0.0, 1.0))
def test_ainc_of_pure_power_property(e, frac):
    # t^e is aInc_p exactly when p <= e, with constant 1
    p = 1.0 + frac * (e - 1.0)
    rep = check_ainc(power_curve(e), p)
    assert rep.holds and rep.constants["a"] <= 1.0 + 1e-9
    if e + 0.05 < 4.0:
        assert not check_ainc(power_curve(e), e + 0.05).holds


# ---------------------------------------------------------------------------
# Normalization at level 1


def test_a0_families(families):
    assert check_a0(families["example_4_6"]).constants["beta"] == 1.0
    assert check_a0(families["example_3_5"]).constants["beta"] == 1.0
    beta34 = check_a0(families["example_3_4"]).constants["beta"]
    assert 0.5 <= beta34 <= (math.sqrt(5.0) - 1.0) / 2.0 + 1e-6


def test_a0_needs_shrinking_beta():
    # phi(t) = t^2/4 reaches 1 only at t = 2, so beta = 1/2
    phi = from_curve(power_curve(2.0, coef=0.25))
    rep = check_a0(phi)
    assert rep.holds and abs(rep.constants["beta"] - 0.5) < 1e-6


# ---------------------------------------------------------------------------
# Local comparability


def test_a1_x_independent_is_exact():
    rep = check_a1(from_curve(power_curve(2.0), dim=1))
    assert rep.holds and rep.constants["beta"] == 1.0


def test_a1_families(families):
    for name in ("example_3_2", "example_3_4", "example_3_5"):
        rep = check_a1(families[name])
        assert rep.holds and rep.constants["beta"] == 1.0, name


# ---------------------------------------------------------------------------
# Comparability to an asymptote


def test_a2_families(families):
    G = region_from_dict({"region": "inv_square_strip"})
    assert check_a2(families["example_3_2"], power_curve(2.0),
                    WeightFunction.indicator(G), beta=1.0).holds
    assert check_a2(families["example_3_4"], power_curve(1.0),
                    WeightFunction.zero(), beta=0.5).holds
    assert check_a2(families["example_3_5"], power_curve(2.0),
                    WeightFunction.recip_power(4.0, 2), beta=1.0).holds


def test_a2_detects_failure(families):
    # h = 0 and beta = 1 cannot absorb the quadratic branch against t
    rep = check_a2(families["example_3_4"], power_curve(1.0),
                   WeightFunction.zero(), beta=1.0)
    assert not rep.holds
    with pytest.raises(ValueError):
        check_a2(families["example_3_4"], power_curve(1.0),
                 WeightFunction.zero(), beta=2.0)


# ---------------------------------------------------------------------------
# Equivalence


def test_equivalence_least_constant():
    rep = check_equivalence(power_curve(2.0), power_curve(2.0, coef=4.0),
                            L=2.0)
    assert rep.holds and abs(rep.constants["least_L"] - 2.0) < 1e-12
    rep = check_equivalence(power_curve(2.0), power_curve(2.0, coef=4.0),
                            L=1.5)
    assert not rep.holds


def test_weak_equivalence(families):
    G = region_from_dict({"region": "inv_square_strip"})
    h = WeightFunction.indicator(G)
    t2 = from_curve(power_curve(2.0), dim=2)
    assert check_weak_equivalence(families["example_3_2"], t2, 1.0, h).holds
    # without the additive term the same pair fails at L = 1
    assert not check_weak_equivalence(families["example_3_2"], t2, 1.0,
                                      WeightFunction.zero()).holds


# ---------------------------------------------------------------------------
# Constant algebra


def test_doubling_scale_round_trip():
    for a, p in ((1.0, 2.0), (2.0, 1.5), (3.0, 3.0)):
        c = doubling_scale(a, p)
        assert c == (2.0 * a) ** (1.0 / (p - 1.0))
        if a == 1.0:
            assert abs(exponent_from_doubling(c) - p) < 1e-12
    with pytest.raises(ValueError):
        doubling_scale(0.5, 2.0)
    with pytest.raises(ValueError):
        exponent_from_doubling(1.0)


def test_enlarge_ainc_constant():
    assert enlarge_ainc_constant(2.0, 2.0, 0.25, 1.0) == 16.0
    assert enlarge_ainc_constant(1.0, 2.0, 1.0, 1.0) == 1.0
    with pytest.raises(ValueError):
        enlarge_ainc_constant(1.0, 2.0, 2.0, 1.0)


# ---------------------------------------------------------------------------
# Weights, reports, plumbing


def test_weight_norms():
    h = WeightFunction.recip_power(4.0, 2)
    assert abs(h.l1_norm - 2.0 * math.pi / (3.0 * 2.0)) < 1e-12
    assert h.linf_norm == 1.0
    assert abs(h((1.0, 0.0)) - 2.0 ** -4) < 1e-15
    h1 = WeightFunction.recip_power(2.0, 1)
    assert abs(h1.l1_norm - 2.0) < 1e-12
    assert WeightFunction.zero().l1_norm == 0.0


def test_weight_roundtrip():
    for h in (WeightFunction.zero(),
              WeightFunction.recip_power(3.0, 1),
              WeightFunction.indicator(
                  region_from_dict({"region": "inv_square_strip"}))):
        rt = weight_from_dict(json.loads(json.dumps(h.to_dict())))
        X = np.array([[0.5, 0.0], [2.0, 0.1]]) if h.name != "recip_power" \
            else np.array([[1.0], [3.0]])
        np.testing.assert_allclose(rt.many(X), h.many(X))


def test_report_json_deterministic():
    rep1 = check_ainc(power_curve(2.0), 2.0)
    rep2 = check_ainc(power_curve(2.0), 2.0)
    assert rep1.to_json() == rep2.to_json()
    assert '"condition"' in rep1.to_json()
    table = reports_table([rep1, check_a0(from_curve(power_curve(2.0)))])
    assert "aInc_2" in table and "A0" in table and "PASS" in table


def test_infinite_constant_serializes_as_string():
    rep = check_ainc(power_curve(2.0), 3.0)
    assert json.loads(rep.to_json())["constants"]["a"] == "inf"
