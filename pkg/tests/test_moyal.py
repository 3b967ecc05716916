import math

import numpy as np
import pytest
from hypothesis import given, settings
from hypothesis import strategies as st

from orbitquant.moyal import (NU, LambdaError, p_r, p_r_enumerated, star, star_bracket_check, star_commutator,
                              star_components)
from orbitquant.orbits import get_chart
from orbitquant.symbols import ExpPolySymbol, parse

from strategies import SPACE1, SPACE2, symbols

LAM1 = [[0, 1], [-1, 0]]
LAM2 = get_chart("affC:0").lam
V2 = ("p1", "p2", "q1", "q2")


def test_star_examples(chart_r):
    sp = chart_r.space
    p, eq = parse("p", sp), parse("exp(q)", sp)
    assert star(p, eq, chart_r) == p * eq + eq * (1 / 2j)
    one = ExpPolySymbol.constant(sp, 1)
    u = parse("p^2*exp(q) - 3*p", sp)
    assert star(u, one, chart_r) == u and star(one, u, chart_r) == u
    assert star(eq, eq, chart_r) == parse("exp(2*q)", sp)


@pytest.mark.parametrize("m", range(0, 6))
@pytest.mark.parametrize("a", [1.0, -2.0, 0.5j])
def test_star_closed_form(m, a):
    # p^m * e^{aq} = e^{aq} (p + a nu)^m and e^{aq} * p^m = e^{aq} (p - a nu)^m
    p = ExpPolySymbol.var(SPACE1, "p")
    e = ExpPolySymbol.exp(SPACE1, {"q": a})
    one = ExpPolySymbol.constant(SPACE1, 1)
    assert star(p ** m, e, LAM1) == e * (p + one * (a * NU)) ** m
    assert star(e, p ** m, LAM1) == e * (p - one * (a * NU)) ** m


@given(symbols(max_deg=3), symbols(max_deg=3), st.integers(0, 4))
def test_iterated_matches_enumerated_2d(u, v, r):
    assert p_r(u, v, r, LAM1).max_deviation(p_r_enumerated(u, v, r, LAM1)) <= 1e-9 * max(
        1, p_r(u, v, r, LAM1).max_abs_coeff())


@settings(max_examples=25)
@given(symbols(SPACE2, max_terms=3, max_deg=2), symbols(SPACE2, max_terms=3, max_deg=2), st.integers(0, 3))
def test_iterated_matches_enumerated_4d(u, v, r):
    a, b = p_r(u, v, r, LAM2, V2), p_r_enumerated(u, v, r, LAM2, V2)
    assert a.max_deviation(b) <= 1e-9 * max(1, a.max_abs_coeff())


@given(symbols(), symbols())
def test_termination_bound(u, v):
    bound = u.deg_p + v.deg_p
    for r in range(bound + 1, bound + 3):
        assert p_r(u, v, r, LAM1).is_zero()
    assert len(star_components(u, v, LAM1)) == bound + 1


@given(symbols(), symbols())
def test_classical_limit(u, v):
    comps = star_components(u, v, LAM1)
    assert comps[0] == u * v
    pb = u.deriv("p") * v.deriv("q") - u.deriv("q") * v.deriv("p")
    assert p_r(u, v, 1, LAM1).max_deviation(pb) <= 1e-12 * max(1, pb.max_abs_coeff())


@given(symbols(), symbols())
def test_even_orders_symmetric(u, v):
    for r in range(0, 5):
        sign = (-1) ** r
        a, b = p_r(u, v, r, LAM1), p_r(v, u, r, LAM1)
        assert a.max_deviation(b * sign) <= 1e-9 * max(1, a.max_abs_coeff())


@given(symbols(), symbols())
def test_commutator_has_only_odd_orders(u, v):
    comm = star_commutator(u, v, LAM1)
    odd = ExpPolySymbol.zero(SPACE1)
    for r in range(1, u.deg_p + v.deg_p + 1, 2):
        odd = odd + p_r(u, v, r, LAM1) * (2 * NU ** r / math.factorial(r))
    assert comm.max_deviation(odd) <= 1e-9 * max(1, odd.max_abs_coeff())


@settings(max_examples=40)
@given(symbols(), symbols(), symbols())
def test_associativity_2d(u, v, w):
    lhs = star(star(u, v, LAM1), w, LAM1)
    rhs = star(u, star(v, w, LAM1), LAM1)
    assert lhs.max_deviation(rhs) <= 1e-10 * max(1, lhs.max_abs_coeff())


@settings(max_examples=15)
@given(symbols(SPACE2, max_terms=2, max_deg=2), symbols(SPACE2, max_terms=2, max_deg=2),
       symbols(SPACE2, max_terms=2, max_deg=2))
def test_associativity_4d(u, v, w):
    lhs = star(star(u, v, LAM2, V2), w, LAM2, V2)
    rhs = star(u, star(v, w, LAM2, V2), LAM2, V2)
    assert lhs.max_deviation(rhs) <= 1e-10 * max(1, lhs.max_abs_coeff())


@pytest.mark.parametrize("cid", ["affR+", "affR-", "affC:0"])
def test_bracket_check(cid):
    rep = star_bracket_check(get_chart(cid), trials=30, seed=4)
    assert rep.passed(1e-12)
    assert rep.to_dict()["pairs"] == 30 + get_chart(cid).algebra.dim ** 2


def test_affc_x2_y2(chart_c):
    a = chart_c.algebra
    ix2 = chart_c.hamiltonian_map(a["X2"]) * 1j
    iy2 = chart_c.hamiltonian_map(a["Y2"]) * 1j
    lhs = star(ix2, iy2, chart_c) - star(iy2, ix2, chart_c)
    assert lhs == chart_c.hamiltonian_map(-a["Y1"]) * 1j


def test_lambda_validation():
    u = parse("p*exp(q)", SPACE1)
    with pytest.raises(LambdaError):
        p_r(u, u, 1, [[0, 1], [1, 0]])
    with pytest.raises(LambdaError):
        p_r(u, u, 1, np.eye(3))
    with pytest.raises(ValueError):
        p_r(u, u, -1, LAM1)
