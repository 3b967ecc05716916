"""Exponentiating quantized operators and checking them against the group representations.

After the shear, the operator attached to an algebra element is
``v . grad + c(s)`` with constant ``v`` and ``c`` a sum of exponentials, so
``exp(t op) f (s) = exp(int_0^t c(s + v tau) dtau) f(s + v t)``.

aff(R) acts on ``L2(R_+, dy/y)`` through ``(a, b) f (y) = exp(i b y) f(a y)``;
functions are sampled in ``s = log y`` where dilations become translations.
aff(C) acts on functions of ``xi`` in the cylinder ``R x [0, 2 pi)``, read as
the point ``exp(xi)`` of ``C*``.
"""
from __future__ import annotations

import cmath
import math
import warnings
from dataclasses import dataclass, field
from typing import Callable, Sequence

import numpy as np

from .diffops import DiffOperator, change_vars_shear, quantize_symbol, shear_pairs
from .fourier_ops import (Axis, GridError, GridFunction, apply_numeric, band_limited_shift,
                          boundary_mass, evaluate_on_grid, interior_mask)
from .lie_core import AlgebraElement, matrix_exp
from .symbols import ExpPolySymbol

__all__ = [
    "CharacteristicFlow",
    "UnsupportedOperatorError",
    "DomainExitWarning",
    "characteristic_exp",
    "expm1_ratio",
    "GroupElementAffR",
    "GroupElementAffC",
    "closed_form_rep_affR",
    "closed_form_rep_affC",
    "sheared_operator",
    "compare_exp_vs_closed_form",
    "compare_exp_vs_closed_form_affC",
    "integrate_rk4",
    "ode_cross_check",
    "unitarity_check",
    "group_law_defect",
    "seam_mass",
    "lie_derivative_check_affC",
    "ComparisonReport",
]

TAYLOR_SWITCH = 1e-6


class UnsupportedOperatorError(ValueError):
    pass


class DomainExitWarning(UserWarning):
    pass


def expm1_ratio(lam: complex, t: float) -> complex:
    """``(exp(lam t) - 1) / lam``, with the ``lam -> 0`` limit ``t``."""
    z = complex(lam) * t
    if abs(z) < TAYLOR_SWITCH:
        return t * (1 + z / 2 + z * z / 6)
    a, b = z.real, z.imag
    # exp(z) - 1 without cancellation for small |z|
    num = complex(math.expm1(a) * math.cos(b) - 2 * math.sin(b / 2) ** 2, math.exp(a) * math.sin(b))
    return num / complex(lam)


@dataclass(frozen=True)
class CharacteristicFlow:
    """``f -> exp(i phase) f(. + shift)``.

    ``phase_symbol`` is ``int_0^t a0(s + v tau) dtau`` where the operator's
    zeroth-order coefficient is ``i a0``.
    """

    variables: tuple[str, ...]
    shift: dict
    phase_symbol: ExpPolySymbol
    t: float = 1.0

    def apply(self, f: GridFunction, warn: bool = True) -> GridFunction:
        g = f
        for v, d in self.shift.items():
            if d:
                if warn:
                    _exit_mass(f, v, d)
                g = band_limited_shift(g, v, d)
        return g * np.exp(1j * evaluate_on_grid(self.phase_symbol, f))

    def then(self, later: "CharacteristicFlow") -> "CharacteristicFlow":
        """The flow of total time ``self.t + later.t`` (``self`` applied last)."""
        if later.variables != self.variables:
            raise ValueError("flows act on different variables")
        phase = later.phase_symbol
        for v, d in self.shift.items():
            if d:
                phase = phase.translate(v, d)
        shift = {v: self.shift.get(v, 0.0) + later.shift.get(v, 0.0) for v in self.variables}
        return CharacteristicFlow(self.variables, shift, self.phase_symbol + phase, self.t + later.t)

    def isclose(self, other: "CharacteristicFlow", tol: float = 1e-12) -> bool:
        return (self.variables == other.variables
                and all(abs(self.shift[v] - other.shift[v]) <= tol * max(1.0, abs(self.shift[v]))
                        for v in self.variables)
                and self.phase_symbol.isclose(other.phase_symbol, tol))

    def to_dict(self) -> dict:
        return {"t": self.t, "shift": dict(self.shift), "phase": self.phase_symbol.format()}


def characteristic_exp(op: DiffOperator, t: float) -> CharacteristicFlow:
    """Closed-form ``exp(t op)`` for ``op = v . grad + i a0`` with constant ``v``."""
    if op.order > 1:
        raise UnsupportedOperatorError(f"operator of order {op.order} has no characteristic flow")
    names = op.variables
    n = len(names)
    vel = [0.0] * n
    a0 = ExpPolySymbol.zero(op.space)
    for idx, coef in op.terms:
        if sum(idx) == 0:
            a0 = coef * -1j
            continue
        val = coef.constant_value()
        if val is None:
            raise UnsupportedOperatorError("vector field coefficients must be constant")
        if abs(val.imag) > 1e-14 * max(1.0, abs(val)):
            raise UnsupportedOperatorError("vector field coefficients must be real")
        vel[idx.index(1)] = val.real
    acc = {}
    for (exps, lin), c in a0.term_dict().items():
        lam = sum(a * v for a, v in zip(lin, vel))
        acc[(exps, lin)] = c * expm1_ratio(lam, t)
    phase = ExpPolySymbol(op.space, acc)
    return CharacteristicFlow(tuple(names), {v: vel[k] * t for k, v in enumerate(names)}, phase, float(t))


def _exit_mass(f: GridFunction, var: str, delta: float, threshold: float = 1e-8) -> float:
    """Share of ``|f|^2`` pushed across the end of a line axis by the shift ``x -> x + delta``."""
    ax = f.axis(var)
    if ax.periodic or delta == 0:
        return 0.0
    k = f.axis_index(var)
    prof = (np.abs(f.values) ** 2).sum(axis=tuple(i for i in range(f.values.ndim) if i != k))
    total = prof.sum()
    if total == 0:
        return 0.0
    pts = ax.points
    lost = prof[pts < ax.min + delta].sum() if delta > 0 else prof[pts >= ax.max + delta].sum()
    frac = float(lost / total)
    if frac > threshold:
        warnings.warn(f"shift by {delta:.3g} along {var!r} moves {frac:.3g} of the mass off the grid",
                      DomainExitWarning, stacklevel=3)
    return frac


# aff(R) -----------------------------------------------------------------------

@dataclass(frozen=True)
class GroupElementAffR:
    """The matrix ``[[a, b], [0, 1]]`` with ``a > 0``."""

    a: float
    b: float

    def __post_init__(self):
        if not self.a > 0:
            raise ValueError(f"a must be positive, got {self.a}")

    def __mul__(self, other: "GroupElementAffR") -> "GroupElementAffR":
        return GroupElementAffR(self.a * other.a, self.a * other.b + self.b)

    def inverse(self) -> "GroupElementAffR":
        return GroupElementAffR(1 / self.a, -self.b / self.a)

    def matrix(self) -> np.ndarray:
        return np.array([[self.a, self.b], [0.0, 1.0]])

    @classmethod
    def from_matrix(cls, m) -> "GroupElementAffR":
        m = np.asarray(m, dtype=float)
        if abs(m[1, 0]) > 1e-12 or abs(m[1, 1] - 1) > 1e-12:
            raise ValueError("not an affine matrix")
        return cls(float(m[0, 0]), float(m[0, 1]))

    @classmethod
    def exp(cls, z: AlgebraElement) -> "GroupElementAffR":
        """Exponential through the defining representation ``X -> E11``, ``Y -> E12``."""
        alpha, beta = (float(c) for c in z.coeffs)
        return cls.from_matrix(matrix_exp(np.array([[alpha, beta], [0.0, 0.0]])))

    def to_dict(self) -> dict:
        return {"a": self.a, "b": self.b}


def closed_form_rep_affR(g: GroupElementAffR, f: GridFunction, sign: int = 1, axis: str = "s",
                         warn: bool = True) -> GridFunction:
    """``exp(i b y) f(a y)`` on the half-line ``sign * y > 0``, sampled in ``s = log |y|``."""
    delta = math.log(g.a)
    if warn:
        _exit_mass(f, axis, delta)
    shifted = band_limited_shift(f, axis, delta)
    y = sign * np.exp(f.mesh()[axis])
    return shifted * np.exp(1j * g.b * y)


def sheared_operator(element: AlgebraElement, chart) -> DiffOperator:
    """Quantized operator in the sheared variables, restricted to the ``s`` variables."""
    op = quantize_symbol(chart.hamiltonian_map(element), chart)
    pairs = shear_pairs(chart)
    sheared = change_vars_shear(op, pairs)
    return sheared.restrict([p[2] for p in pairs])


@dataclass
class ComparisonReport:
    group_element: dict
    sup_error: float
    l2_error: float
    norm_drift: float
    boundary_mass: float
    extra: dict = field(default_factory=dict)

    def to_dict(self) -> dict:
        out = {"group_element": self.group_element, "sup_error": self.sup_error, "l2_error": self.l2_error,
               "norm_drift": self.norm_drift, "boundary_mass": self.boundary_mass}
        out.update(self.extra)
        return out


def _compare(a: GridFunction, b: GridFunction, f: GridFunction, mask) -> tuple[float, float, float]:
    diff = np.abs(a.values - b.values)
    sup = float(diff[mask].max())
    l2 = float(math.sqrt(np.sum(diff[mask] ** 2) * f.cell))
    nf = f.norm()
    drift = abs(a.norm() - nf) / nf if nf else 0.0
    return sup, l2, drift


def compare_exp_vs_closed_form(z: AlgebraElement, f: GridFunction, chart=None,
                               fraction: float = 0.5) -> ComparisonReport:
    """Flow of the quantized operator at ``t = 1`` against ``exp(i b y) f(a y)``.

    ``(a, b)`` comes from the matrix exponential of ``z``; errors are measured
    on the central ``fraction`` of the ``s`` axis.
    """
    from .orbits import get_chart
    chart = chart or get_chart("affR+")
    if chart.algebra is not z.algebra or not chart.orbit_id.startswith("affR"):
        raise ValueError("compare_exp_vs_closed_form needs an aff(R) element and chart")
    sign = 1 if chart.orbit_id == "affR+" else -1
    flow = characteristic_exp(sheared_operator(z, chart), 1.0)
    lhs = flow.apply(f)
    g = GroupElementAffR.exp(z)
    rhs = closed_form_rep_affR(g, f, sign)
    sup, l2, drift = _compare(lhs, rhs, f, interior_mask(f, fraction))
    return ComparisonReport(g.to_dict(), sup, l2, drift, boundary_mass(f, warn=False),
                            {"element": [float(c) for c in z.coeffs]})


# aff(C) -----------------------------------------------------------------------

@dataclass(frozen=True)
class GroupElementAffC:
    """``(z, w)`` with product ``(z, w)(z', w') = (z + z', w + e^z w')``."""

    z: complex
    w: complex

    def __mul__(self, other: "GroupElementAffC") -> "GroupElementAffC":
        return GroupElementAffC(self.z + other.z, self.w + cmath.exp(self.z) * other.w)

    def inverse(self) -> "GroupElementAffC":
        return GroupElementAffC(-self.z, -cmath.exp(-self.z) * self.w)

    def matrix(self) -> np.ndarray:
        return np.array([[cmath.exp(self.z), self.w], [0, 1]], dtype=complex)

    @classmethod
    def exp(cls, a: AlgebraElement) -> "GroupElementAffC":
        """``A = alpha1 X1 + alpha2 X2 + beta1 Y1 + beta2 Y2`` -> ``(alpha, beta (e^alpha - 1)/alpha)``."""
        a1, a2, b1, b2 = (float(c) for c in a.coeffs)
        alpha, beta = complex(a1, a2), complex(b1, b2)
        return cls(alpha, beta * expm1_ratio(alpha, 1.0))

    @classmethod
    def exp_matrix(cls, a: AlgebraElement) -> "GroupElementAffC":
        """Same, via the matrix exponential of ``[[alpha, beta], [0, 0]]``."""
        a1, a2, b1, b2 = (float(c) for c in a.coeffs)
        m = matrix_exp(np.array([[complex(a1, a2), complex(b1, b2)], [0, 0]], dtype=complex))
        return cls(complex(a1, a2), complex(m[0, 1]))

    def to_dict(self) -> dict:
        return {"z": [self.z.real, self.z.imag], "w": [self.w.real, self.w.imag]}


def _cylinder_axes(f: GridFunction, axes: Sequence[str]) -> tuple[str, str]:
    line, circle = axes
    ca = f.axis(circle)
    if not ca.periodic or abs(ca.min) > 1e-12 or abs(ca.max - 2 * math.pi) > 1e-12:
        raise GridError(f"axis {circle!r} must be the periodic interval [0, 2 pi)")
    f.axis(line)
    return line, circle


def closed_form_rep_affC(theta: float, g: GroupElementAffC, f: GridFunction,
                         axes: Sequence[str] = ("s1", "s2"), warn: bool = True) -> GridFunction:
    """``exp(i (Re(w e^xi) + 2 pi theta floor((xi2 + Im z) / 2 pi))) f(xi1 + Re z, (xi2 + Im z) mod 2 pi)``."""
    line, circle = _cylinder_axes(f, axes)
    if warn:
        _exit_mass(f, line, g.z.real)
    shifted = band_limited_shift(band_limited_shift(f, line, g.z.real), circle, g.z.imag)
    mesh = f.mesh()
    xi1, xi2 = mesh[line], mesh[circle]
    wrap = np.floor((xi2 + g.z.imag) / (2 * math.pi))
    phase = (g.w * np.exp(xi1 + 1j * xi2)).real + 2 * math.pi * theta * wrap
    return shifted * np.exp(1j * phase)


def seam_mass(f: GridFunction, axis: str = "s2", width: float = math.pi / 4) -> float:
    """Share of ``|f|^2`` within ``width`` of the circle seam at ``0 = 2 pi``."""
    k = f.axis_index(axis)
    pts = f.axis(axis).points
    prof = (np.abs(f.values) ** 2).sum(axis=tuple(i for i in range(f.values.ndim) if i != k))
    total = prof.sum()
    near = (pts < width) | (pts >= 2 * math.pi - width)
    return float(prof[near].sum() / total) if total else 0.0


def compare_exp_vs_closed_form_affC(a: AlgebraElement, f: GridFunction, theta: float = 0.0, chart=None,
                                    fraction: float = 0.5) -> ComparisonReport:
    """Flow of the sheared aff(C) operator against ``T_theta(exp A)``.

    Agreement is expected where the integer-part term vanishes on the support,
    i.e. for functions away from the seam and small circle displacement.
    """
    from .orbits import get_chart
    chart = chart or get_chart("affC:0")
    flow = characteristic_exp(sheared_operator(a, chart), 1.0)
    lhs = flow.apply(f)
    g = GroupElementAffC.exp(a)
    rhs = closed_form_rep_affC(theta, g, f)
    sup, l2, drift = _compare(lhs, rhs, f, interior_mask(f, fraction))
    return ComparisonReport(g.to_dict(), sup, l2, drift, boundary_mass(f, warn=False),
                            {"seam_mass": seam_mass(f), "theta": theta})


def lie_derivative_check_affC(a: AlgebraElement, f: GridFunction, theta: float = 0.0, chart=None,
                              h: float = 1e-4, fraction: float = 0.5) -> float:
    """Sup distance between the centred difference of ``t -> T_theta(exp tA) f`` and the sheared operator."""
    from .orbits import get_chart
    chart = chart or get_chart("affC:0")
    plus = closed_form_rep_affC(theta, GroupElementAffC.exp(a * h), f, warn=False)
    minus = closed_form_rep_affC(theta, GroupElementAffC.exp(a * -h), f, warn=False)
    deriv = (plus - minus) * (1 / (2 * h))
    op_f = apply_numeric(sheared_operator(a, chart), f)
    return float(np.abs(deriv.values - op_f.values)[interior_mask(f, fraction)].max())


# numerics shared by both groups ------------------------------------------------

def integrate_rk4(op: DiffOperator, f: GridFunction, t: float, steps: int) -> GridFunction:
    """Method of lines for ``dU/dt = op U``: spectral in space, classical RK4 in time."""
    dt = t / steps
    coefs = []
    for idx, c in op.terms:
        coefs.append((idx, evaluate_on_grid(c, f)))
    from .fourier_ops import spectral_derivative

    def rhs(u):
        g = f.with_values(u)
        out = np.zeros_like(u)
        for idx, c in coefs:
            d = g
            for v, m in zip(op.variables, idx):
                if m:
                    d = spectral_derivative(d, v, m)
            out += c * d.values
        return out

    u = f.values.copy()
    for _ in range(steps):
        k1 = rhs(u)
        k2 = rhs(u + 0.5 * dt * k1)
        k3 = rhs(u + 0.5 * dt * k2)
        k4 = rhs(u + dt * k3)
        u = u + dt / 6 * (k1 + 2 * k2 + 2 * k3 + k4)
    return f.with_values(u)


def ode_cross_check(op: DiffOperator, f: GridFunction, steps: int, t: float = 1.0,
                    fraction: float = 0.5) -> dict:
    """Errors of RK4 with ``steps`` and ``2 steps`` against the characteristic flow."""
    exact = characteristic_exp(op, t).apply(f, warn=False)
    mask = interior_mask(f, fraction)
    errs = []
    for n in (steps, 2 * steps):
        u = integrate_rk4(op, f, t, n)
        errs.append(float(np.abs(u.values - exact.values)[mask].max()))
    return {"steps": steps, "error": errs[0], "error_half_step": errs[1],
            "reduction": errs[0] / errs[1] if errs[1] else math.inf}


def _trapezoid_weights(f: GridFunction) -> np.ndarray:
    ws = []
    for ax in f.axes:
        w = np.full(ax.count, ax.step)
        if not ax.periodic:
            w[0] = w[-1] = ax.step / 2
        ws.append(w)
    grids = np.meshgrid(*ws, indexing="ij")
    return np.prod(grids, axis=0)


def _measure_density(f: GridFunction, measure: str, axis: str) -> np.ndarray:
    if measure in ("log", "haar", "product"):
        return np.ones(f.values.shape)
    if measure == "lebesgue":
        # dy = e^s ds on the half-line
        return np.exp(f.mesh()[axis])
    raise ValueError(f"unknown measure {measure!r}; expected log, lebesgue or product")


def unitarity_check(action: Callable[[GridFunction], GridFunction], fs: Sequence[GridFunction],
                    measure: str = "log", axis: str = "s") -> dict:
    """Relative norm drift ``| |Tf| - |f| | / |f|`` per test function, trapezoid quadrature.

    ``measure``: ``log`` is ``dy/|y| = ds``; ``lebesgue`` is ``dy = e^s ds``;
    ``product`` is Lebesgue on the line times arc length on the circle.
    """
    drifts = []
    for f in fs:
        w = _trapezoid_weights(f) * _measure_density(f, measure, axis)
        tf = action(f)
        n0 = math.sqrt(float(np.sum(np.abs(f.values) ** 2 * w)))
        n1 = math.sqrt(float(np.sum(np.abs(tf.values) ** 2 * w)))
        drifts.append(abs(n1 - n0) / n0 if n0 else 0.0)
    return {"measure": measure, "drifts": drifts, "max_drift": max(drifts, default=0.0)}


def group_law_defect(rep: Callable, g1, g2, f: GridFunction) -> float:
    """``|T(g1) T(g2) f - T(g1 g2) f| / |f|``."""
    lhs = rep(g1, rep(g2, f))
    rhs = rep(g1 * g2, f)
    nf = f.norm()
    return (lhs - rhs).norm() / nf if nf else 0.0
