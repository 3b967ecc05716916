"""Catalog of coadjoint-orbit charts for aff(R) and aff(C).

Each chart fixes canonical coordinates ``(p, q)`` on one orbit, the
constant Poisson tensor in those coordinates and the linear map sending an
algebra element ``Z`` to its Hamiltonian ``Z~`` (linear in the ``p``'s,
exponential in the ``q``'s).

Sign convention: ``lam[a, b]`` is the Poisson tensor ``{x_a, x_b}`` over the
chart variables ``p_vars + q_vars``, so ``{f, g} = sum lam[a, b] df/dx_a dg/dx_b``.
"""
from __future__ import annotations

import math
from dataclasses import dataclass, field
from typing import Callable, Sequence

import numpy as np

from .lie_core import (AlgebraElement, CoadjointFunctional, LieAlgebra, catalog_algebra,
                       numerical_rank, poisson_matrix)
from .symbols import ExpPolySymbol, VarSpace

__all__ = [
    "OrbitChart",
    "PolarizationSpec",
    "PukanszkyReport",
    "OrbitMembershipError",
    "chart_affR",
    "chart_affC",
    "get_chart",
    "poisson_bracket",
    "annihilator",
    "pukanszky_check",
    "CHART_IDS",
]

CHART_IDS = ("affR+", "affR-", "affC:k")


class OrbitMembershipError(ValueError):
    pass


@dataclass(frozen=True, eq=False)
class PolarizationSpec:
    """Real part ``h`` of a polarization plus the PBW block order it induces.

    ``block_order`` is ``(p/h block, h block, pbar/h block)`` as tuples of
    0-based basis indices; flattened, it is the total order used for PBW
    normal forms.
    """

    algebra: LieAlgebra
    h_basis: tuple[AlgebraElement, ...]
    block_order: tuple[tuple[int, ...], tuple[int, ...], tuple[int, ...]]

    def __post_init__(self):
        flat = [i for block in self.block_order for i in block]
        if sorted(flat) != list(range(self.algebra.dim)):
            raise ValueError(f"block order {self.block_order} is not a partition of the basis")

    @property
    def order(self) -> tuple[int, ...]:
        return tuple(i for block in self.block_order for i in block)

    @property
    def h_matrix(self) -> np.ndarray:
        return np.array([h.coeffs for h in self.h_basis]).reshape(len(self.h_basis), self.algebra.dim)

    @property
    def codim(self) -> int:
        m = self.h_matrix
        return self.algebra.dim - (int(np.linalg.matrix_rank(m)) if len(m) else 0)


@dataclass(frozen=True, eq=False)
class OrbitChart:
    algebra: LieAlgebra
    orbit_id: str
    p_vars: tuple[str, ...]
    q_vars: tuple[str, ...]
    x_vars: tuple[str, ...]
    lam: np.ndarray
    basis_symbols: tuple[ExpPolySymbol, ...]
    base_point: CoadjointFunctional
    polarization: PolarizationSpec
    membership: Callable[[np.ndarray], np.ndarray] = field(repr=False)
    q_strip: dict | None = None

    def __post_init__(self):
        lam = np.array(self.lam, dtype=float)
        lam.setflags(write=False)
        object.__setattr__(self, "lam", lam)
        m = len(self.p_vars)
        if lam.shape != (2 * m, 2 * m) or len(self.q_vars) != m:
            raise ValueError("lambda must be 2m x 2m over p_vars + q_vars")
        if not np.array_equal(lam, -lam.T):
            raise ValueError("lambda must be antisymmetric")
        if abs(np.linalg.det(lam)) < 1e-12:
            raise ValueError("lambda must be invertible")
        for s in self.basis_symbols:
            if s.space != self.space:
                raise ValueError("basis symbols must live in the chart space")

    @property
    def space(self) -> VarSpace:
        return VarSpace(self.p_vars, self.q_vars + self.x_vars)

    @property
    def variables(self) -> tuple[str, ...]:
        """Chart variables indexing ``lam``."""
        return self.p_vars + self.q_vars

    def lambda_in_order(self, order: Sequence[str]) -> np.ndarray:
        idx = [self.variables.index(v) for v in order]
        return self.lam[np.ix_(idx, idx)]

    def hamiltonian_map(self, element: AlgebraElement) -> ExpPolySymbol:
        if element.algebra is not self.algebra:
            raise ValueError("element does not belong to the chart's algebra")
        out = ExpPolySymbol.zero(self.space)
        for c, s in zip(element.coeffs, self.basis_symbols):
            if c != 0:
                out = out + s * float(c)
        return out

    def is_member(self, coords) -> np.ndarray:
        return self.membership(np.asarray(coords, dtype=float))

    def __repr__(self):
        return f"OrbitChart({self.orbit_id!r})"


def poisson_bracket(f: ExpPolySymbol, g: ExpPolySymbol, chart: OrbitChart) -> ExpPolySymbol:
    out = ExpPolySymbol.zero(chart.space)
    names = chart.variables
    for a, b in zip(*np.nonzero(chart.lam)):
        out = out + f.deriv(names[a]) * g.deriv(names[b]) * float(chart.lam[a, b])
    return out


def chart_affR(sign: int | str = +1) -> OrbitChart:
    """Half-plane orbit of aff(R): ``Z~ = alpha p + sign * beta e^q`` for ``Z = alpha X + beta Y``."""
    if sign in ("+", "plus"):
        sign = 1
    elif sign in ("-", "minus"):
        sign = -1
    if sign not in (1, -1):
        raise ValueError(f"sign must be +1 or -1, got {sign!r}")
    alg = catalog_algebra("aff_r")
    space = VarSpace(("p",), ("q", "x"))
    p = ExpPolySymbol.var(space, "p")
    eq = ExpPolySymbol.exp(space, {"q": 1}, float(sign))
    pol = PolarizationSpec(alg, (alg["Y"],), ((0,), (1,), ()))
    return OrbitChart(
        algebra=alg,
        orbit_id="affR+" if sign > 0 else "affR-",
        p_vars=("p",), q_vars=("q",), x_vars=("x",),
        lam=[[0.0, 1.0], [-1.0, 0.0]],
        basis_symbols=(p, eq),
        base_point=alg.functional([0.0, float(sign)]),
        polarization=pol,
        membership=lambda c: sign * c[..., 1] > 0,
    )


def chart_affC(k: int = 0) -> OrbitChart:
    """The open 4-dimensional orbit of aff(C) on sheet ``k``.

    With ``z = p1 + i p2`` and ``w = q1 + i q2`` the Hamiltonian of
    ``A = (alpha, beta)`` is ``Re(alpha z) + Re(beta e^w)``, the basis being
    ``X1 = (1, 0)``, ``X2 = (i, 0)``, ``Y1 = (0, 1)``, ``Y2 = (0, i)``.
    The Poisson tensor is that of ``dp1^dq1 - dp2^dq2``.
    """
    k = int(k)
    alg = catalog_algebra("aff_c")
    space = VarSpace(("p1", "p2"), ("q1", "q2", "x1", "x2"))
    p1 = ExpPolySymbol.var(space, "p1")
    p2 = ExpPolySymbol.var(space, "p2")
    ew = ExpPolySymbol.exp(space, {"q1": 1, "q2": 1j})
    ewbar = ExpPolySymbol.exp(space, {"q1": 1, "q2": -1j})
    y1 = (ew + ewbar) * 0.5
    y2 = (ew - ewbar) * 0.5j
    # variables ordered (p1, p2, q1, q2)
    lam = np.zeros((4, 4))
    lam[0, 2], lam[2, 0] = 1.0, -1.0
    lam[1, 3], lam[3, 1] = -1.0, 1.0
    pol = PolarizationSpec(alg, (alg["Y1"], alg["Y2"]), ((0, 1), (2, 3), ()))
    return OrbitChart(
        algebra=alg,
        orbit_id=f"affC:{k}",
        p_vars=("p1", "p2"), q_vars=("q1", "q2"), x_vars=("x1", "x2"),
        lam=lam,
        basis_symbols=(p1, -p2, y1, y2),
        base_point=alg.functional([0.0, 0.0, 1.0, 0.0]),
        polarization=pol,
        membership=lambda c: c[..., 2] ** 2 + c[..., 3] ** 2 != 0,
        q_strip={"var": "q2", "low": 2 * k * math.pi, "high": 2 * k * math.pi + 2 * math.pi},
    )


def get_chart(chart_id: str) -> OrbitChart:
    """Resolve ``affR+``, ``affR-`` or ``affC:k`` (``affC`` alone means sheet 0)."""
    if chart_id == "affR+":
        return chart_affR(+1)
    if chart_id == "affR-":
        return chart_affR(-1)
    if chart_id == "affC" or chart_id.startswith("affC:"):
        _, _, k = chart_id.partition(":")
        try:
            return chart_affC(int(k) if k else 0)
        except ValueError:
            raise KeyError(f"bad sheet index in chart id {chart_id!r}") from None
    raise KeyError(f"unknown chart {chart_id!r}; expected one of affR+, affR-, affC:k")


def annihilator(algebra: LieAlgebra, h_basis: Sequence[AlgebraElement]) -> np.ndarray:
    """Rows spanning ``h^perp`` in dual coordinates."""
    n = algebra.dim
    if not h_basis:
        return np.eye(n)
    m = np.array([h.coeffs for h in h_basis])
    _, s, vt = np.linalg.svd(m)
    rank = int(np.sum(s > 1e-12 * max(1.0, s.max())))
    return vt[rank:]


@dataclass
class PukanszkyReport:
    orbit_id: str
    samples: int
    failures: int
    codim_h: int
    orbit_dim: int
    isotropic: bool
    failing_examples: list[list[float]]

    @property
    def passed(self) -> bool:
        return self.failures == 0

    def to_dict(self) -> dict:
        return {"orbit": self.orbit_id, "samples": self.samples, "failures": self.failures,
                "passed": self.passed, "codim_h": self.codim_h, "orbit_dim": self.orbit_dim,
                "isotropic": self.isotropic, "failing_examples": self.failing_examples}


def pukanszky_check(chart: OrbitChart, pol: PolarizationSpec, f: CoadjointFunctional,
                    samples: int, seed: int = 0, scale: float = 10.0) -> PukanszkyReport:
    """Sample ``F + H`` with ``H`` in ``h^perp`` and test orbit membership.

    Coefficients of ``H`` in an orthonormal basis of the annihilator are
    drawn uniformly from ``[-scale, scale]``.
    """
    if f.algebra is not chart.algebra or pol.algebra is not chart.algebra:
        raise ValueError("chart, polarization and functional must share one algebra")
    if not bool(chart.is_member(f.coords)):
        raise OrbitMembershipError(f"{f!r} is not on orbit {chart.orbit_id}")
    rng = np.random.default_rng(seed)
    basis = annihilator(chart.algebra, pol.h_basis)
    coeffs = rng.uniform(-scale, scale, size=(samples, basis.shape[0]))
    pts = f.coords + coeffs @ basis
    ok = np.asarray(chart.is_member(pts), dtype=bool)
    bad = pts[~ok]
    # isotropy: F vanishes on [h, h]
    c = chart.algebra.constants
    hm = pol.h_matrix
    iso = True
    if len(hm):
        vals = np.einsum("ai,bj,ijk,k->ab", hm, hm, c, f.coords)
        iso = bool(np.all(np.abs(vals) < 1e-12))
    return PukanszkyReport(
        orbit_id=chart.orbit_id,
        samples=samples,
        failures=int(bad.shape[0]),
        codim_h=pol.codim,
        orbit_dim=int(numerical_rank(poisson_matrix(f))),
        isotropic=iso,
        failing_examples=[[float(v) for v in row] for row in bad[:3]],
    )
