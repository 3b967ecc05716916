"""Grid functions, the partial Fourier transform and numeric operator action.

Fourier convention: ``F u(x) = (2 pi)^{-1/2} int exp(-i p x) u(p) dp``, so
``F(p g) = i d_x F(g)`` and ``F(d_p g) = i x F(g)``. The discrete version pairs
a uniform ``p`` grid of ``N`` points and spacing ``dp`` with an ``x`` grid of
spacing ``2 pi / (N dp)``; both are endpoint-exclusive
(``point_k = min + k (max - min) / count``) and the transform is exactly
unitary between the two grid-weighted L2 norms.

Symbolic operators live in :mod:`orbitquant.diffops` and are re-exported here.
"""
from __future__ import annotations

import json
import math
import warnings
from dataclasses import dataclass
from itertools import product
from pathlib import Path
from typing import Mapping, Sequence

import numpy as np

from .diffops import (DiffOperator, UnsupportedSymbolError, apply_symbolic, change_vars_linear,
                      change_vars_shear, commutator, compose, quantize_symbol, shear_pairs)
from .symbols import ExpPolySymbol

__all__ = [
    "Axis",
    "GridFunction",
    "GridError",
    "BoundaryMassWarning",
    "partial_fourier",
    "spectral_derivative",
    "band_limited_shift",
    "apply_numeric",
    "star_apply_numeric",
    "boundary_mass",
    "interior_mask",
    "evaluate_on_grid",
    "DiffOperator",
    "UnsupportedSymbolError",
    "apply_symbolic",
    "change_vars_linear",
    "change_vars_shear",
    "commutator",
    "compose",
    "quantize_symbol",
    "shear_pairs",
]

BOUNDARY_FRACTION = 0.05
BOUNDARY_THRESHOLD = 1e-8


class GridError(ValueError):
    pass


class BoundaryMassWarning(UserWarning):
    pass


@dataclass(frozen=True)
class Axis:
    name: str
    min: float
    max: float
    count: int
    periodic: bool = False

    def __post_init__(self):
        if self.count < 2:
            raise GridError(f"axis {self.name!r} needs at least 2 points")
        if not self.max > self.min:
            raise GridError(f"axis {self.name!r} has max <= min")

    @property
    def step(self) -> float:
        return (self.max - self.min) / self.count

    @property
    def points(self) -> np.ndarray:
        return self.min + self.step * np.arange(self.count)

    def renamed(self, name: str) -> "Axis":
        return Axis(name, self.min, self.max, self.count, self.periodic)

    def to_dict(self) -> dict:
        return {"name": self.name, "min": self.min, "max": self.max, "count": self.count,
                "periodic": self.periodic}

    @classmethod
    def from_dict(cls, d: Mapping) -> "Axis":
        return cls(str(d["name"]), float(d["min"]), float(d["max"]), int(d["count"]),
                   bool(d.get("periodic", False)))

    @classmethod
    def centered(cls, name: str, step: float, count: int) -> "Axis":
        lo = -(count // 2) * step
        return cls(name, lo, lo + count * step, count)


class GridFunction:
    """Complex samples on a rectangular grid; ``values.shape`` follows ``axes``."""

    __slots__ = ("axes", "values")

    def __init__(self, axes: Sequence[Axis], values):
        axes = tuple(axes)
        values = np.asarray(values)
        if not np.iscomplexobj(values):
            values = values.astype(complex)
        if values.shape != tuple(a.count for a in axes):
            raise GridError(f"value shape {values.shape} does not match axes "
                            f"{[(a.name, a.count) for a in axes]}")
        names = [a.name for a in axes]
        if len(set(names)) != len(names):
            raise GridError(f"duplicate axis names {names}")
        self.axes = axes
        self.values = values

    @property
    def names(self) -> tuple[str, ...]:
        return tuple(a.name for a in self.axes)

    def axis(self, name: str) -> Axis:
        return self.axes[self.axis_index(name)]

    def axis_index(self, name: str) -> int:
        try:
            return self.names.index(name)
        except ValueError:
            raise GridError(f"grid has no axis {name!r}; axes are {self.names}") from None

    def mesh(self) -> dict[str, np.ndarray]:
        grids = np.meshgrid(*(a.points for a in self.axes), indexing="ij")
        return dict(zip(self.names, grids))

    @property
    def cell(self) -> float:
        return float(np.prod([a.step for a in self.axes]))

    def norm(self, weight=None) -> float:
        w = 1.0 if weight is None else weight
        return float(math.sqrt(np.sum(np.abs(self.values) ** 2 * w) * self.cell))

    def with_values(self, values) -> "GridFunction":
        return GridFunction(self.axes, values)

    def same_axes(self, other: "GridFunction") -> bool:
        return self.axes == other.axes

    def _require(self, other: "GridFunction"):
        if not self.same_axes(other):
            raise GridError("grid functions live on different axes")

    def __add__(self, other):
        if isinstance(other, GridFunction):
            self._require(other)
            return self.with_values(self.values + other.values)
        return self.with_values(self.values + other)

    def __sub__(self, other):
        if isinstance(other, GridFunction):
            self._require(other)
            return self.with_values(self.values - other.values)
        return self.with_values(self.values - other)

    def __mul__(self, other):
        if isinstance(other, GridFunction):
            self._require(other)
            return self.with_values(self.values * other.values)
        return self.with_values(self.values * other)

    __rmul__ = __mul__

    @classmethod
    def sample(cls, axes: Sequence[Axis], func) -> "GridFunction":
        """Evaluate ``func(**mesh)`` on the grid."""
        axes = tuple(axes)
        grids = np.meshgrid(*(a.points for a in axes), indexing="ij")
        return cls(axes, np.broadcast_to(func(**dict(zip((a.name for a in axes), grids))),
                                         tuple(a.count for a in axes)).astype(complex))

    # serialization ------------------------------------------------------

    def save(self, path, precision: str = "complex128") -> Path:
        """Write ``path`` (JSON header) and ``path`` + ``.bin`` (little-endian payload)."""
        dtype = {"complex64": "<c8", "complex128": "<c16"}.get(precision)
        if dtype is None:
            raise ValueError(f"precision must be complex64 or complex128, got {precision!r}")
        path = Path(path)
        payload = path.with_name(path.name + ".bin")
        header = {"schema": "1", "axes": [a.to_dict() for a in self.axes], "dtype": precision,
                  "shape": list(self.values.shape), "payload": payload.name}
        path.write_text(json.dumps(header, indent=2, sort_keys=True) + "\n")
        payload.write_bytes(np.ascontiguousarray(self.values, dtype=dtype).tobytes())
        return path

    @classmethod
    def load(cls, path) -> "GridFunction":
        path = Path(path)
        header = json.loads(path.read_text())
        dtype = {"complex64": "<c8", "complex128": "<c16"}[header["dtype"]]
        data = np.frombuffer((path.parent / header["payload"]).read_bytes(), dtype=dtype)
        axes = [Axis.from_dict(a) for a in header["axes"]]
        return cls(axes, data.reshape(header["shape"]).astype(complex))


# transforms -----------------------------------------------------------------

def _dual_name(name: str) -> str:
    if name.startswith("p"):
        return "x" + name[1:]
    if name.startswith("x"):
        return "p" + name[1:]
    return name + "_hat"


def partial_fourier(f: GridFunction, axis: str, inverse: bool = False, to: str | None = None,
                    origin: float | None = None) -> GridFunction:
    """Unitary transform along one axis.

    Forward maps ``p -> x`` with kernel ``exp(-i p x)``; ``inverse=True``
    maps back with ``exp(+i p x)``. The output axis has spacing
    ``2 pi / (count * step)`` and starts at ``origin`` (default: centred).
    """
    k = f.axis_index(axis)
    ax = f.axes[k]
    if ax.periodic:
        raise GridError(f"axis {axis!r} is periodic; only line axes can be Fourier transformed")
    n = ax.count
    d_in = ax.step
    d_out = 2 * math.pi / (n * d_in)
    out0 = -(n // 2) * d_out if origin is None else float(origin)
    new_axis = Axis(to or _dual_name(axis), out0, out0 + n * d_out, n)
    in_pts = ax.points
    out_pts = new_axis.points
    shape = [1] * f.values.ndim
    shape[k] = n
    sign = 1 if inverse else -1
    pre = np.exp(sign * 1j * np.arange(n) * d_in * out0).reshape(shape)
    post = (d_in / math.sqrt(2 * math.pi)) * np.exp(sign * 1j * ax.min * out_pts).reshape(shape)
    if inverse:
        g = np.fft.ifft(f.values * pre, axis=k) * n
    else:
        g = np.fft.fft(f.values * pre, axis=k)
    axes = list(f.axes)
    axes[k] = new_axis
    return GridFunction(axes, g * post)


def _wavenumbers(ax: Axis) -> np.ndarray:
    return 2 * math.pi * np.fft.fftfreq(ax.count, d=ax.step)


def spectral_derivative(f: GridFunction, axis: str, order: int = 1) -> GridFunction:
    """FFT derivative; the Nyquist mode is dropped for odd orders."""
    if order == 0:
        return f
    k = f.axis_index(axis)
    ax = f.axes[k]
    kk = _wavenumbers(ax)
    mult = (1j * kk) ** order
    if order % 2 and ax.count % 2 == 0:
        mult[ax.count // 2] = 0
    shape = [1] * f.values.ndim
    shape[k] = ax.count
    g = np.fft.ifft(np.fft.fft(f.values, axis=k) * mult.reshape(shape), axis=k)
    return f.with_values(g)


def band_limited_shift(f: GridFunction, axis: str, delta: float) -> GridFunction:
    """Trigonometric interpolant evaluated at ``point + delta``; exact for band-limited periodic data."""
    if delta == 0:
        return f
    k = f.axis_index(axis)
    ax = f.axes[k]
    kk = _wavenumbers(ax)
    mult = np.exp(1j * kk * delta)
    if ax.count % 2 == 0:
        mult[ax.count // 2] = math.cos(kk[ax.count // 2] * delta)
    shape = [1] * f.values.ndim
    shape[k] = ax.count
    return f.with_values(np.fft.ifft(np.fft.fft(f.values, axis=k) * mult.reshape(shape), axis=k))


def evaluate_on_grid(sym: ExpPolySymbol, f: GridFunction, extra: Mapping[str, float] | None = None):
    """Values of ``sym`` on ``f``'s grid; variables absent from the grid must be absent from ``sym``."""
    mesh = f.mesh()
    point = {}
    for v in sym.space.variables:
        if v in mesh:
            point[v] = mesh[v]
        elif extra and v in extra:
            point[v] = extra[v]
        elif sym.depends_on(v):
            raise GridError(f"symbol depends on {v!r}, which is not a grid axis")
        else:
            point[v] = 0.0
    val = sym.eval(point)
    return np.broadcast_to(val, f.values.shape)


def apply_numeric(op: DiffOperator, f: GridFunction) -> GridFunction:
    """Spectral derivatives per axis, then pointwise multiplication by the coefficients."""
    for idx, _ in op.terms:
        for v, m in zip(op.variables, idx):
            if m and v not in f.names:
                raise GridError(f"operator differentiates along {v!r}, which is not a grid axis")
    out = np.zeros_like(f.values)
    for idx, coef in op.terms:
        g = f
        for v, m in zip(op.variables, idx):
            if m:
                g = spectral_derivative(g, v, m)
        out = out + evaluate_on_grid(coef, f) * g.values
    return f.with_values(out)


def _multi_indices(n: int, r: int):
    if n == 0:
        if r == 0:
            yield ()
        return
    for first in range(r, -1, -1):
        for rest in _multi_indices(n - 1, r - first):
            yield (first,) + rest


def star_apply_numeric(zt: ExpPolySymbol, f: GridFunction, chart, rtol: float = 1e-16,
                       max_order: int = 400, p_origin: Mapping[str, float] | None = None) -> GridFunction:
    """``F_p(i zt * F_p^{-1} f)`` by summing the star series on the grid.

    ``f`` lives on the Fourier side (axes include ``chart.q_vars`` and
    ``chart.x_vars``). Order-``r`` terms are grouped by the multi-index ``mu``
    of derivatives falling on ``zt``:
    ``(1/2i)^r / mu! * d^mu zt * prod_a D_a^{mu_a} u`` with
    ``D_a = sum_b lam[a, b] d_b``. On the Fourier side ``d_p`` is
    multiplication by ``i x`` and ``d_q`` is spectral. Summation stops once
    every term of three successive orders past the momentum-degree bound is
    below ``rtol`` times the running maximum.
    """
    names = chart.variables
    lam = chart.lam
    m = len(chart.p_vars)
    p_of_x = dict(zip(chart.x_vars, chart.p_vars))
    for v in chart.q_vars + chart.x_vars:
        f.axis_index(v)
    mesh = f.mesh()
    p_origin = dict(p_origin or {})

    def to_p(g: GridFunction) -> GridFunction:
        for xv in chart.x_vars:
            g = partial_fourier(g, xv, inverse=True, to=p_of_x[xv], origin=p_origin.get(p_of_x[xv]))
        return g

    def to_x(g: GridFunction) -> GridFunction:
        for xv in chart.x_vars:
            g = partial_fourier(g, p_of_x[xv], to=xv, origin=f.axis(xv).min)
        return g

    # q-derivatives keep term keys, so the exponentials are evaluated once
    basis: dict = {}

    def mult_symbol(sym: ExpPolySymbol, g: GridFunction) -> GridFunction:
        if sym.deg_p:
            gp = to_p(g)
            return to_x(gp * evaluate_on_grid(sym, gp))
        vals = 0
        for key, c in sym.term_dict().items():
            if key not in basis:
                basis[key] = evaluate_on_grid(ExpPolySymbol(sym.space, {key: 1.0}, _canonical=True), g)
            vals = vals + c * basis[key]
        return g * vals

    def d_apply(a: int, g: GridFunction) -> GridFunction:
        """``D_a = sum_b lam[a, b] d_b`` on the Fourier side."""
        out = f.with_values(np.zeros_like(g.values))
        for b in np.nonzero(lam[a])[0]:
            w = lam[a, b]
            if b < m:
                out = out + g * (w * 1j * mesh[chart.x_vars[b]])
            else:
                out = out + spectral_derivative(g, names[b]) * w
        return out

    bound = zt.deg_p + 1
    total = mult_symbol(zt, f).values.copy()
    scale = float(np.max(np.abs(total))) or 1.0
    # cache of prod_a D_a^{mu_a} f keyed by mu
    cache = {(0,) * len(names): f}
    quiet = 0
    for r in range(1, max_order + 1):
        biggest = 0.0
        new_cache = {}
        for mu in _multi_indices(len(names), r):
            dz = zt
            for v, k in zip(names, mu):
                if k:
                    dz = dz.deriv(v, k)
            if dz.is_zero():
                continue
            j = next(i for i, k in enumerate(mu) if k)
            prev = list(mu)
            prev[j] -= 1
            prev = tuple(prev)
            if prev not in cache:
                continue
            du = d_apply(j, cache[prev])
            new_cache[mu] = du
            w = (1 / 2j) ** r / math.prod(math.factorial(k) for k in mu)
            term = mult_symbol(dz, du).values * w
            total += term
            biggest = max(biggest, float(np.max(np.abs(term))))
        cache = new_cache
        scale = max(scale, float(np.max(np.abs(total))))
        if not cache:
            break
        if r > bound and biggest <= rtol * scale:
            quiet += 1
            if quiet >= 3:
                break
        else:
            quiet = 0
    return f.with_values(1j * total)


def interior_mask(f: GridFunction, fraction: float = 0.5, axes: Sequence[str] | None = None) -> np.ndarray:
    """Boolean mask of the central ``fraction`` of each selected non-periodic axis."""
    masks = []
    for ax in f.axes:
        pts = ax.points
        if ax.periodic or (axes is not None and ax.name not in axes):
            masks.append(np.ones(ax.count, bool))
            continue
        mid = 0.5 * (ax.min + ax.max)
        half = 0.5 * fraction * (ax.max - ax.min)
        masks.append(np.abs(pts - mid) <= half)
    grids = np.meshgrid(*masks, indexing="ij")
    return np.logical_and.reduce(grids) if grids else np.ones((), bool)


def boundary_mass(f: GridFunction, fraction: float = BOUNDARY_FRACTION, warn: bool = True,
                  threshold: float = BOUNDARY_THRESHOLD) -> float:
    """Share of ``|f|^2`` carried by the outer ``fraction`` of samples of each line axis.

    The fraction is split evenly between the two ends. A
    :class:`BoundaryMassWarning` is raised above ``threshold``.
    """
    dens = np.abs(f.values) ** 2
    total = float(dens.sum())
    if total == 0:
        return 0.0
    worst = 0.0
    for k, ax in enumerate(f.axes):
        if ax.periodic:
            continue
        edge = max(1, int(round(ax.count * fraction / 2)))
        prof = dens.sum(axis=tuple(i for i in range(dens.ndim) if i != k))
        worst = max(worst, float((prof[:edge].sum() + prof[-edge:].sum()) / total))
    if warn and worst > threshold:
        warnings.warn(f"boundary mass {worst:.3g} exceeds {threshold:g}; the grid truncates the function",
                      BoundaryMassWarning, stacklevel=2)
    return worst
