import math
import warnings

import numpy as np
import pytest
import scipy.integrate
import scipy.linalg
from hypothesis import given, settings
from hypothesis import strategies as st

from orbitquant.diffops import DiffOperator
from orbitquant.fourier_ops import Axis, GridError, GridFunction, interior_mask
from orbitquant.orbits import get_chart
from orbitquant.repr_verify import (DomainExitWarning, GroupElementAffC, GroupElementAffR, UnsupportedOperatorError,
                                    characteristic_exp, closed_form_rep_affC, closed_form_rep_affR,
                                    compare_exp_vs_closed_form, compare_exp_vs_closed_form_affC, expm1_ratio,
                                    group_law_defect, lie_derivative_check_affC, ode_cross_check, seam_mass,
                                    sheared_operator, unitarity_check)
from orbitquant.symbols import VarSpace, parse

S_AXIS = Axis("s", -8.0, 8.0, 1024)
CYL = [Axis("s1", -8.0, 8.0, 256), Axis("s2", 0.0, 2 * math.pi, 128, periodic=True)]
small = st.floats(-2, 2, allow_nan=False)


def packet(centre=0.0, width=0.8, k=0.0, ax=S_AXIS):
    return GridFunction.sample([ax], lambda s: np.exp(-((s - centre) / width) ** 2 / 2 + 1j * k * s))


def cyl_packet(c1=0.0, c2=math.pi, k=0.3):
    return GridFunction.sample(CYL, lambda s1, s2: np.exp(-((s1 - c1) / 0.6) ** 2 / 2 - ((s2 - c2) / 0.35) ** 2 / 2
                                                          + 1j * k * s1))


def test_expm1_ratio():
    assert expm1_ratio(0, 2.0) == 2.0
    assert expm1_ratio(1e-9, 1.0) == pytest.approx(1 + 5e-10, rel=1e-15)
    assert expm1_ratio(2.0, 1.0) == pytest.approx((math.e ** 2 - 1) / 2, rel=1e-15)
    z = 0.4 - 0.3j
    assert expm1_ratio(z, 1.0) == pytest.approx((np.exp(z) - 1) / z, rel=1e-14)
    # both sides of the series switch agree with expm1
    for x in (0.9999e-6, 1.0001e-6, -0.9999e-6, -1.0001e-6):
        assert abs(expm1_ratio(x, 1.0) - math.expm1(x) / x) < 1e-15


def test_group_affr_exp_frozen(aff_r):
    # frozen from scipy.linalg.expm([[0.9, -0.4], [0, 0]])
    g = GroupElementAffR.exp(aff_r.element([0.9, -0.4]))
    assert g.a == pytest.approx(2.4596031111569507, rel=1e-14)
    assert g.b == pytest.approx(-0.6487124938475334, rel=1e-14)


@given(small, small, small, small)
def test_group_affr_law_matches_matrices(a1, b1, a2, b2):
    g, h = GroupElementAffR(math.exp(a1), b1), GroupElementAffR(math.exp(a2), b2)
    np.testing.assert_allclose((g * h).matrix(), g.matrix() @ h.matrix(), atol=1e-12)
    np.testing.assert_allclose((g * g.inverse()).matrix(), np.eye(2), atol=1e-12)


def test_group_affc_exp(aff_c):
    a = aff_c.element([0.4, -0.3, 0.8, 0.5])
    g = GroupElementAffC.exp(a)
    assert g.z == 0.4 - 0.3j
    assert g.w == pytest.approx(1.0650535505351386 + 0.44855468829682643j, rel=1e-14)
    assert GroupElementAffC.exp_matrix(a).w == pytest.approx(g.w, rel=1e-13)
    m = scipy.linalg.expm(np.array([[0.4 - 0.3j, 0.8 + 0.5j], [0, 0]]))
    np.testing.assert_allclose(g.matrix(), m, rtol=1e-13)


@given(st.lists(small, min_size=8, max_size=8))
def test_group_affc_law(c):
    g, h = GroupElementAffC(complex(c[0], c[1]), complex(c[2], c[3])), GroupElementAffC(complex(c[4], c[5]),
                                                                                        complex(c[6], c[7]))
    np.testing.assert_allclose((g * h).matrix(), g.matrix() @ h.matrix(), atol=1e-10)
    np.testing.assert_allclose((g * g.inverse()).matrix(), np.eye(2), atol=1e-10)


def test_flow_phase_matches_quadrature(chart_r):
    op = sheared_operator(chart_r.algebra.element([0.9, -0.4]), chart_r)
    flow = characteristic_exp(op, 1.0)
    assert flow.shift == {"s": 0.9}
    got = flow.phase_symbol.eval({"s": 0.3})
    # frozen from scipy.integrate.quad
    assert got == pytest.approx(-0.8756702734046864, rel=1e-13)
    ref, _ = scipy.integrate.quad(lambda tau: -0.4 * math.exp(0.3 + 0.9 * tau), 0, 1)
    assert got == pytest.approx(ref, rel=1e-12)


def test_flow_zero_velocity():
    sp = VarSpace((), ("s",))
    op = DiffOperator.multiplication(parse("exp(s)", sp) * 2j)
    flow = characteristic_exp(op, 0.5)
    assert flow.phase_symbol == parse("exp(s)", sp)


@settings(max_examples=30)
@given(small, small, st.floats(0.1, 1.5), st.floats(0.1, 1.5))
def test_flow_semigroup(alpha, beta, s, t):
    ch = get_chart("affR+")
    op = sheared_operator(ch.algebra.element([alpha, beta]), ch)
    assert characteristic_exp(op, s).then(characteristic_exp(op, t)).isclose(characteristic_exp(op, s + t), 1e-10)


def test_flow_rejects_second_order():
    sp = VarSpace((), ("s",))
    with pytest.raises(UnsupportedOperatorError):
        characteristic_exp(DiffOperator.derivative(sp, "s", 2), 1.0)
    with pytest.raises(UnsupportedOperatorError):
        characteristic_exp(DiffOperator(sp, {(1,): parse("exp(s)", sp)}), 1.0)


@pytest.mark.parametrize("cid", ["affR+", "affR-"])
def test_flow_matches_closed_form(cid):
    ch = get_chart(cid)
    rng = np.random.default_rng(1)
    for _ in range(10):
        z = ch.algebra.element(rng.uniform(-2, 2, 2))
        rep = compare_exp_vs_closed_form(z, packet(rng.uniform(-1, 1), rng.uniform(0.5, 1.0)), ch)
        assert rep.sup_error < 1e-8
        assert rep.norm_drift < 1e-8


def test_flow_composition_matches_matrix_product(chart_r):
    # exp(Z1) exp(Z2) through flows equals the closed form at the matrix-product element
    z1, z2 = chart_r.algebra.element([0.6, 1.1]), chart_r.algebra.element([-0.4, -0.7])
    f = packet()
    two = characteristic_exp(sheared_operator(z1, chart_r), 1.0).apply(
        characteristic_exp(sheared_operator(z2, chart_r), 1.0).apply(f))
    m = scipy.linalg.expm(np.array([[0.6, 1.1], [0, 0]])) @ scipy.linalg.expm(np.array([[-0.4, -0.7], [0, 0]]))
    g = GroupElementAffR(m[0, 0], m[0, 1])
    ref = closed_form_rep_affR(g, f)
    assert np.abs(two.values - ref.values)[interior_mask(f)].max() < 1e-8


def test_exit_warning():
    with pytest.warns(DomainExitWarning):
        closed_form_rep_affR(GroupElementAffR(math.exp(5.0), 0.0), packet(-6.0))


def test_ode_cross_check(chart_r):
    ax = Axis("s", -10.0, 4.0, 256)
    op = sheared_operator(chart_r.algebra.element([0.7, 0.5]), chart_r)
    f = GridFunction.sample([ax], lambda s: np.exp(-((s + 3) / 0.7) ** 2 / 2))
    out = ode_cross_check(op, f, 50)
    assert out["error"] < 1e-4
    assert out["reduction"] >= 8


def test_unitarity_log_measure():
    fs = [packet(0.3, 0.7), packet(-0.5, 0.9, 1.0)]
    for g in (GroupElementAffR(2.0, 0.5), GroupElementAffR(0.3, -1.7)):
        for sign in (1, -1):
            assert unitarity_check(lambda h: closed_form_rep_affR(g, h, sign), fs)["max_drift"] < 1e-8


def test_negative_control_both_readings():
    fs = [packet(0.0, 0.7)]
    # f(y) -> f(2y): Lebesgue norm scales by 2^(-1/2)
    d1 = unitarity_check(lambda h: closed_form_rep_affR(GroupElementAffR(2.0, 0.0), h), fs, measure="lebesgue")
    assert d1["max_drift"] == pytest.approx(1 - 2 ** -0.5, abs=1e-3)
    # f(y) -> f(y/2): Lebesgue norm scales by 2^(1/2)
    d2 = unitarity_check(lambda h: closed_form_rep_affR(GroupElementAffR(0.5, 0.0), h), fs, measure="lebesgue")
    assert d2["max_drift"] == pytest.approx(math.sqrt(2) - 1, abs=1e-3)
    with pytest.raises(ValueError):
        unitarity_check(lambda h: h, fs, measure="counting")


def test_group_law_affr():
    rep = lambda g, h: closed_form_rep_affR(g, h)
    f = packet(0.2, 0.6)
    assert group_law_defect(rep, GroupElementAffR(1.7, 0.4), GroupElementAffR(0.6, -1.2), f) < 1e-8


@pytest.mark.parametrize("theta", [0.0, 0.25, 0.7])
def test_group_law_affc(theta):
    rep = lambda g, h: closed_form_rep_affC(theta, g, h)
    f = cyl_packet()
    g1, g2 = GroupElementAffC(0.3 + 0.8j, -0.5 + 0.2j), GroupElementAffC(-0.2 + 0.5j, 0.7 - 0.4j)
    assert group_law_defect(rep, g1, g2, f) < 1e-6
    # circle shifts on grid multiples rotate exactly, so seam crossings are exact too
    step = 2 * math.pi / 128
    g3, g4 = GroupElementAffC(0.3 + 92j * step, -0.5 + 0.2j), GroupElementAffC(-0.2 - 60j * step, 0.7 - 0.4j)
    assert group_law_defect(rep, g3, g4, f) < 1e-9
    assert group_law_defect(rep, g4, g3, f) < 1e-9
    assert unitarity_check(lambda h: rep(g1, h), [f], measure="product")["max_drift"] < 1e-8


def test_affc_theta_is_seen_across_seam():
    # the wrap term only matters when a displacement crosses 2 pi
    f = cyl_packet()
    g = GroupElementAffC(92j * 2 * math.pi / 128, 0.0)
    a = closed_form_rep_affC(0.0, g, f)
    b = closed_form_rep_affC(0.25, g, f)
    assert np.abs(a.values - b.values).max() > 0.1
    assert seam_mass(f) < 1e-6


def test_affc_flow_and_lie_derivative(chart_c):
    a = chart_c.algebra.element([0.5, -0.2, 0.7, -0.4])
    f = cyl_packet(0.2, math.pi + 0.1)
    assert compare_exp_vs_closed_form_affC(a, f, 0.7, chart_c).sup_error < 1e-6
    assert lie_derivative_check_affC(a, f, 0.25, chart_c) < 1e-6


def test_affc_axis_validation():
    bad = GridFunction.sample([Axis("s1", -1, 1, 8), Axis("s2", 0, 3, 8)], lambda s1, s2: s1 * 0)
    with pytest.raises(GridError):
        closed_form_rep_affC(0.0, GroupElementAffC(0j, 0j), bad)
