import json
import math

import numpy as np
import pytest
from hypothesis import given, strategies as st

from orliczkit import (
    ConstructionError,
    Domain,
    DomainError,
    PhiCurve,
    PhiFunction,
    PowerTerm,
    from_curve,
    make_family,
    power_curve,
    region_from_dict,
)

INF = math.inf


# ---------------------------------------------------------------------------
# PowerTerm / PhiCurve structure


def test_power_term_validation():
    with pytest.raises(ConstructionError):
        PowerTerm(-1.0, 2.0)
    with pytest.raises(ConstructionError):
        PowerTerm(1.0, -0.5)
    with pytest.raises(ConstructionError):
        PowerTerm(1.0, 2.0, shift=-1.0)


def test_curve_validation_rejects_bad_shapes():
    with pytest.raises(ConstructionError):  # breakpoints must start at 0
        PhiCurve((1.0,), ((PowerTerm(1.0, 2.0),),))
    with pytest.raises(ConstructionError):  # constant first piece
        PhiCurve((0.0,), ((PowerTerm(1.0, 0.0),),))
    with pytest.raises(ConstructionError):  # downward jump at the seam
        PhiCurve((0.0, 1.0),
                 ((PowerTerm(1.0, 1.0),), (PowerTerm(0.1, 1.0),)))
    with pytest.raises(ConstructionError):  # bounded curve, no escape
        PhiCurve((0.0, 1.0),
                 ((PowerTerm(1.0, 1.0),), (PowerTerm(1.0, 0.0),)))


def test_curve_value_and_left_limit():
    c = PhiCurve((0.0, 1.0),
                 ((PowerTerm(1.0, 1.0),),
                  (PowerTerm(1.0, 2.0), PowerTerm(1.0, 1.0))))
    assert c.value(0.0) == 0.0
    assert c.value(0.5) == 0.5
    assert c.value(2.0) == 6.0
    assert c.value_left(1.0) == 1.0  # left branch at the seam
    assert c.value(1.0) == 2.0
    np.testing.assert_allclose(c.value(np.array([0.25, 2.0])), [0.25, 6.0])


def test_infinite_tail():
    c = PhiCurve((0.0,), ((PowerTerm(1.0, 1.0),),), infinite_tail=1.0)
    assert c.value(1.0) == 1.0
    assert c.value(1.5) == INF
    assert c.inverse(5.0) == 1.0  # the jump supplies all large values


# ---------------------------------------------------------------------------
# Inverse


@pytest.mark.parametrize("p", [1.5, 2.0, 3.0])
def test_inverse_power_closed_form(p):
    c = power_curve(p)
    for tau in np.geomspace(1e-3, 1e3, 25):
        assert abs(c.inverse(tau) - tau ** (1.0 / p)) <= 1e-10 * tau ** (1.0 / p)


def test_inverse_piecewise(families):
    phi = families["example_3_4"]
    # at the origin the seam is 1/2; phi(t) = t^2 + t above it
    assert abs(phi.inverse((0.0, 0.0), 6.0) - 2.0) < 1e-10
    assert abs(phi.inverse((0.0, 0.0), 0.25) - 0.25) < 1e-10
    assert phi.inverse((0.0, 0.0), 0.0) == 0.0


def test_inverse_is_generalized_inf():
    # flat piece: inverse returns the left edge of the level set
    c = PhiCurve((0.0, 1.0, 2.0),
                 ((PowerTerm(1.0, 1.0),),
                  (PowerTerm(1.0, 0.0, shift=1.0),),
                  (PowerTerm(1.0, 0.0, shift=2.0), PowerTerm(1.0, 1.0, shift=2.0))))
    assert c.value(1.5) == 1.0
    assert abs(c.inverse(1.0) - 1.0) < 1e-10


# ---------------------------------------------------------------------------
# Conjugate


def test_conjugate_square():
    c = power_curve(2.0)
    for t in np.geomspace(1e-2, 1e2, 17):
        assert abs(c.conjugate(t) - t * t / 4.0) <= 1e-8 * max(t * t / 4.0, 1.0)


@pytest.mark.parametrize("p", [1.5, 3.0])
def test_conjugate_power_closed_form(p):
    c = power_curve(p)
    q = p / (p - 1.0)
    for t in np.geomspace(1e-1, 1e1, 9):
        exact = (p - 1.0) * (t / p) ** q
        assert abs(c.conjugate(t) - exact) <= 1e-8 * max(exact, 1.0)


def test_conjugate_linear():
    c = power_curve(1.0)
    assert c.conjugate(0.5) == 0.0
    assert c.conjugate(1.0) == 0.0
    assert c.conjugate(1.5) == INF


def test_conjugate_capped_linear():
    # sup_{s <= 1} (s t - s) = max(t - 1, 0)
    c = PhiCurve((0.0,), ((PowerTerm(1.0, 1.0),),), infinite_tail=1.0)
    assert abs(c.conjugate(3.0) - 2.0) < 1e-8
    assert c.conjugate(0.5) == 0.0


# ---------------------------------------------------------------------------
# Domain / Region


def test_domain_membership():
    d = Domain(1, (-2.0,), (2.0,))
    assert d.contains((0.0,)) and not d.contains((2.5,))
    lo, hi = d.sampling_box(16.0)
    assert lo[0] >= -2.0 and hi[0] <= 2.0


def test_region_inv_square_strip():
    G = region_from_dict({"region": "inv_square_strip"})
    assert G.contains((2.0, 0.1)) and G.contains((1.0, 1.0))
    assert not G.contains((0.5, 0.0)) and not G.contains((2.0, 0.5))
    assert G.measure == 2.0


def test_domain_error_outside(families):
    with pytest.raises(DomainError):
        families["example_4_6"].eval((3.0,), 1.0)


# ---------------------------------------------------------------------------
# Families


def test_variable_exponent_formula():
    phi = make_family("variable_exponent",
                      {"p": {"field": "const", "value": 3.0}}, None)
    assert abs(phi.eval((0.0,), 2.0) - 8.0) < 1e-12


def test_double_phase_formula():
    phi = make_family("double_phase",
                      {"p": 1.5, "q": 3.0,
                       "a": {"field": "const", "value": 2.0}}, None)
    t = 1.7
    assert abs(phi.eval((0.0,), t) - (t ** 1.5 + 2.0 * t ** 3)) < 1e-12
    with pytest.raises(ConstructionError):
        make_family("double_phase", {"p": 3.0, "q": 2.0}, None)


def test_vdp_formula():
    phi = make_family("vdp", {"p": {"field": "const", "value": 1.5},
                              "q": {"field": "const", "value": 2.5},
                              "a": {"field": "const", "value": 0.5}}, None)
    t = 0.9
    assert abs(phi.eval((1.0,), t) - (t ** 1.5 + 0.5 * t ** 2.5)) < 1e-12


@pytest.mark.parametrize("name", ["example_3_2", "example_3_4",
                                  "example_3_5", "example_4_6"])
def test_vectorized_eval_matches_curves(name, families):
    phi = families[name]
    rng = np.random.default_rng(7)
    lo, hi = phi.domain.sampling_box(8.0)
    X = np.column_stack([rng.uniform(l, h, 40) for l, h in zip(lo, hi)])
    T = rng.uniform(1e-3, 10.0, 40)
    grid = phi.eval_many(X, T)
    direct = np.array([phi.curve_at(tuple(x)).value(t) for x, t in zip(X, T)])
    np.testing.assert_allclose(grid, direct, rtol=1e-12, atol=1e-300)


def test_example_formulas(families):
    # on the strip: linear below 1; off it: square
    phi = families["example_3_2"]
    assert phi.eval((2.0, 0.1), 0.5) == 0.5
    assert phi.eval((0.0, 0.0), 0.5) == 0.25
    assert phi.eval((2.0, 0.1), 2.0) == 4.0
    # seam at 1/(|x|+2)
    phi = families["example_3_4"]
    assert phi.eval((0.0, 0.0), 0.25) == 0.25
    assert phi.eval((0.0, 0.0), 0.75) == 0.75 ** 2 + 0.75
    # damped linear branch below (|x|+1)^-2
    phi = families["example_3_5"]
    x = (3.0, 4.0)  # |x| = 5, weight 36
    assert abs(phi.eval(x, 1e-3) - 1e-3 / 36.0) < 1e-15
    assert phi.eval(x, 0.5) == 0.25
    # exponent profile min(2, 3 - |x|)
    phi = families["example_4_6"]
    assert abs(phi.eval((1.5,), 2.0) - 2.0 ** 1.5) < 1e-12
    assert abs(phi.eval((0.5,), 2.0) - 4.0) < 1e-12


# ---------------------------------------------------------------------------
# Serialization


@pytest.mark.parametrize("name", ["example_3_2", "example_3_4",
                                  "example_3_5", "example_4_6"])
def test_serialization_roundtrip(name, families):
    phi = families[name]
    rt = PhiFunction.from_json(phi.to_json())
    lo, hi = phi.domain.sampling_box(4.0)
    x = tuple(0.5 * (l + h) for l, h in zip(lo, hi))
    for t in (1e-3, 0.5, 2.0, 50.0):
        assert rt.eval(x, t) == phi.eval(x, t)
    assert rt.to_json() == phi.to_json()  # canonical form is stable


def test_curve_roundtrip():
    c = PhiCurve((0.0, 1.0),
                 ((PowerTerm(2.0, 1.5),),
                  (PowerTerm(2.0, 1.5), PowerTerm(1.0, 3.0, shift=1.0))),
                 infinite_tail=9.0)
    rt = PhiCurve.from_dict(json.loads(json.dumps(c.to_dict())))
    assert rt == c


# ---------------------------------------------------------------------------
# Properties


@given(st.floats(1.0, 4.0), st.floats(1e-3, 1e3), st.floats(1e-3, 1e3))
def test_inverse_identity_property(p, tau, t):
    c = power_curve(p)
    # phi(phi^{-1}(tau)) = tau and phi^{-1}(phi(t)) = t for strictly
    # increasing continuous curves
    assert abs(c.value(c.inverse(tau)) - tau) <= 1e-9 * tau
    assert abs(c.inverse(c.value(t)) - t) <= 1e-9 * t


@given(st.floats(1.1, 4.0), st.floats(0.05, 20.0))
def test_conjugate_young_inequality(p, t):
    c = power_curve(p)
    conj = c.conjugate(t)
    for s in np.geomspace(1e-3, 1e3, 20):
        assert s * t <= c.value(s) + conj + 1e-8 * max(1.0, s * t)
