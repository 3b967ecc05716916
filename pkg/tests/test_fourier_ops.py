import math
import warnings

import numpy as np
import pytest
from hypothesis import given, settings
from hypothesis import strategies as st

from orbitquant.diffops import DiffOperator, quantize_symbol
from orbitquant.fourier_ops import (Axis, BoundaryMassWarning, GridError, GridFunction, apply_numeric,
                                    band_limited_shift, boundary_mass, evaluate_on_grid, interior_mask,
                                    partial_fourier, spectral_derivative, star_apply_numeric)
from orbitquant.orbits import get_chart
from orbitquant.symbols import VarSpace, parse

P = Axis("p", -20, 20, 512)


def gaussian(ax, centre=0.0, width=1.0, k=0.0):
    return GridFunction.sample([ax], lambda **m: np.exp(-((m[ax.name] - centre) / width) ** 2 / 2
                                                        + 1j * k * m[ax.name]))


def test_axis_layout():
    ax = Axis("x", -1, 1, 4)
    np.testing.assert_allclose(ax.points, [-1, -0.5, 0, 0.5])
    c = Axis.centered("x", 0.25, 8)
    assert c.min == -1 and c.max == 1
    with pytest.raises(GridError):
        Axis("x", 1, 0, 4)
    with pytest.raises(GridError):
        GridFunction([ax], np.zeros(3))


@pytest.mark.parametrize("a", [0.0, 1.3, -2.1])
def test_gaussian_transform_analytic(a):
    # exp(-(p-a)^2/2) -> exp(-i a x) exp(-x^2/2) under exp(-ipx)/sqrt(2 pi)
    f = gaussian(P, centre=a)
    g = partial_fourier(f, "p")
    x = g.axis("x").points
    np.testing.assert_allclose(g.values, np.exp(-1j * a * x - x ** 2 / 2), atol=1e-12)
    assert g.names == ("x",)


@settings(max_examples=20)
@given(st.floats(-3, 3), st.floats(0.6, 2.0), st.floats(-2, 2), st.floats(-5, 5))
def test_roundtrip_and_parseval(c, w, k, origin):
    f = gaussian(P, c, w, k)
    g = partial_fourier(f, "p", origin=origin)
    back = partial_fourier(g, "x", inverse=True, to="p", origin=P.min)
    np.testing.assert_allclose(back.values, f.values, atol=1e-12)
    assert g.norm() == pytest.approx(f.norm(), rel=1e-12)


def test_derivative_multiplier_rule():
    # d/dp on the p side is multiplication by i x on the x side
    f = gaussian(P, 0.4, 0.9)
    lhs = partial_fourier(spectral_derivative(f, "p"), "p")
    rhs = partial_fourier(f, "p")
    rhs = rhs * (1j * rhs.mesh()["x"])
    np.testing.assert_allclose(lhs.values, rhs.values, atol=1e-10)


def test_multiplication_becomes_derivative():
    # multiplying by p on the p side is i d/dx on the x side
    f = gaussian(P, -0.3, 1.1)
    lhs = partial_fourier(f * f.mesh()["p"], "p")
    rhs = spectral_derivative(partial_fourier(f, "p"), "x") * 1j
    np.testing.assert_allclose(lhs.values, rhs.values, atol=1e-9)


def test_spectral_derivative_and_shift():
    ax = Axis("s", 0, 2 * math.pi, 64, periodic=True)
    f = GridFunction.sample([ax], lambda s: np.sin(3 * s))
    np.testing.assert_allclose(spectral_derivative(f, "s", 2).values, -9 * np.sin(3 * ax.points), atol=1e-11)
    np.testing.assert_allclose(band_limited_shift(f, "s", 0.4).values, np.sin(3 * (ax.points + 0.4)), atol=1e-12)
    with pytest.raises(GridError):
        partial_fourier(f, "s")


def test_save_load(tmp_path):
    axes = [Axis("q", -1, 1, 4), Axis("x", 0, 2 * math.pi, 8, periodic=True)]
    f = GridFunction(axes, np.arange(32).reshape(4, 8) * (1 + 0.5j))
    path = f.save(tmp_path / "f.json")
    g = GridFunction.load(path)
    np.testing.assert_array_equal(g.values, f.values)
    assert g.axes == f.axes
    assert (tmp_path / "f.json.bin").stat().st_size == 32 * 16
    g32 = GridFunction.load(f.save(tmp_path / "h.json", "complex64"))
    np.testing.assert_allclose(g32.values, f.values, rtol=1e-6)
    with pytest.raises(ValueError):
        f.save(tmp_path / "z.json", "float16")


def test_boundary_warning():
    ax = Axis("x", -4, 4, 128)
    with pytest.warns(BoundaryMassWarning):
        boundary_mass(gaussian(ax, 3.5, 0.5))
    with warnings.catch_warnings():
        warnings.simplefilter("error")
        assert boundary_mass(gaussian(ax, 0, 0.3)) < 1e-8


def test_interior_mask():
    ax = Axis("x", -4, 4, 8)
    m = interior_mask(GridFunction([ax], np.zeros(8)))
    # points -4..3; the central half keeps |x| <= 2
    assert m.tolist() == [False, False, True, True, True, True, True, False]


def test_apply_numeric_matches_symbolic():
    sp = VarSpace((), ("q", "x"))
    axes = [Axis("q", -6, 6, 64), Axis("x", -6, 6, 64)]
    f = GridFunction.sample(axes, lambda q, x: np.exp(-q ** 2 - x ** 2))
    op = DiffOperator(sp, {(1, 0): parse("exp(0.1*q)", sp), (0, 1): 2.0})
    exact = GridFunction.sample(axes, lambda q, x: (np.exp(0.1 * q) * (-2 * q) + 2 * (-2 * x)) * np.exp(-q ** 2 - x ** 2))
    np.testing.assert_allclose(apply_numeric(op, f).values, exact.values, atol=1e-9)
    with pytest.raises(GridError):
        evaluate_on_grid(parse("exp(t)", VarSpace((), ("t",))), f)


def test_star_apply_numeric_affr(chart_r):
    axes = [Axis("q", -8, 8, 64), Axis("x", -16, 16, 1024)]
    rng = np.random.default_rng(11)
    for _ in range(3):
        c = rng.uniform(-1, 1, 2)
        f = GridFunction.sample(axes, lambda q, x: np.exp(-((q - c[0]) / 0.7) ** 2 / 2 - ((x - c[1]) / 1.2) ** 2 / 2))
        zt = chart_r.hamiltonian_map(chart_r.algebra.element(rng.uniform(-2, 2, 2)))
        a = star_apply_numeric(zt, f, chart_r)
        b = apply_numeric(quantize_symbol(zt, chart_r), f)
        assert np.abs(a.values - b.values)[interior_mask(f)].max() < 1e-6


def test_star_apply_numeric_pure_momentum(chart_r):
    # i p on the Fourier side is i (1/2 d_q - d_x); the series has one term
    axes = [Axis("q", -8, 8, 32), Axis("x", -16, 16, 256)]
    f = GridFunction.sample(axes, lambda q, x: np.exp(-q ** 2 / 2 - x ** 2 / 2))
    zt = parse("p", chart_r.space)
    a = star_apply_numeric(zt, f, chart_r)
    exact = GridFunction.sample(axes, lambda q, x: (-0.5 * q + x) * np.exp(-q ** 2 / 2 - x ** 2 / 2))
    np.testing.assert_allclose(a.values, exact.values, atol=1e-9)


def test_star_apply_numeric_affc():
    from orbitquant.suites import suite_operator_numeric
    res = suite_operator_numeric(5, "affC:0", functions=2)
    assert res.passed, [a.to_dict() for a in res.assertions]
