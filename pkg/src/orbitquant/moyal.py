"""Moyal star product on exponential-polynomial symbols.

``u * v = sum_r (1/r!) (1/2i)^r P^r(u, v)`` with
``P^r(u, v) = lam^{a1 b1} ... lam^{ar br} d_{a1..ar} u d_{b1..br} v``.

Every nonzero entry of the Poisson tensor couples at least one momentum
variable, so each contraction strips one power of ``p`` from ``u`` or
``v`` and the series stops at ``r = deg_p(u) + deg_p(v)``.

``P^r`` is computed by applying the first-order contraction ``r`` times
to ``u (x) v`` kept as a two-slot term table; :func:`p_r_enumerated` is the
index-tuple definition, kept as an independent check.
"""
from __future__ import annotations

import itertools
import math
from dataclasses import dataclass, field
from typing import Sequence

import numpy as np

from .lie_core import bracket
from .symbols import ExpPolySymbol, VarSpace, _accumulate

__all__ = [
    "LambdaError",
    "p_r",
    "p_r_enumerated",
    "star_components",
    "star",
    "star_commutator",
    "BracketCheckReport",
    "star_bracket_check",
    "NU",
]

NU = 1 / 2j


class LambdaError(ValueError):
    pass


def _resolve(lam, variables, space: VarSpace):
    # accept an OrbitChart in place of (lam, variables)
    if hasattr(lam, "lam") and hasattr(lam, "variables"):
        if variables is None:
            variables = lam.variables
        lam = lam.lam
    lam = np.asarray(lam, dtype=float)
    if variables is None:
        variables = space.variables
    variables = tuple(variables)
    if lam.shape != (len(variables), len(variables)):
        raise LambdaError(f"lambda has shape {lam.shape} but {len(variables)} variables {variables}")
    if not np.allclose(lam, -lam.T, atol=0):
        raise LambdaError("lambda must be antisymmetric")
    pairs = []
    for a, b in zip(*np.nonzero(lam)):
        la = space.locate(variables[a])
        lb = space.locate(variables[b])
        if la[0] != "p" and lb[0] != "p":
            raise LambdaError(
                f"lambda couples position variables {variables[a]!r} and {variables[b]!r}; "
                "the star series would not terminate on this symbol class")
        pairs.append((la, lb, float(lam[a, b])))
    return pairs


def _dkey(key, loc):
    exps, lin = key
    kind, idx = loc
    if kind == "p":
        m = exps[idx]
        if m == 0:
            return None
        return (exps[:idx] + (m - 1,) + exps[idx + 1:], lin), m
    a = lin[idx]
    if a == 0:
        return None
    return key, a


def _tensor(u: ExpPolySymbol, v: ExpPolySymbol) -> dict:
    return {(ka, kb): ca * cb for ka, ca in u._terms.items() for kb, cb in v._terms.items()}


def _contract(table: dict, pairs) -> dict:
    out: dict = {}
    for (ka, kb), c in table.items():
        for la, lb, w in pairs:
            da = _dkey(ka, la)
            if da is None:
                continue
            db = _dkey(kb, lb)
            if db is None:
                continue
            _accumulate(out, (da[0], db[0]), c * w * da[1] * db[1])
    return out


def _diagonal(table: dict, space: VarSpace) -> ExpPolySymbol:
    acc: dict = {}
    for ((ea, la), (eb, lb)), c in table.items():
        key = (tuple(x + y for x, y in zip(ea, eb)), tuple(complex(round((x + y).real, 12) + 0.0,
                                                                   round((x + y).imag, 12) + 0.0)
                                                           for x, y in zip(la, lb)))
        _accumulate(acc, key, c)
    return ExpPolySymbol(space, acc, _canonical=True)


def _check_spaces(u, v):
    if not isinstance(u, ExpPolySymbol) or not isinstance(v, ExpPolySymbol):
        raise TypeError("star operands must be ExpPolySymbol")
    u._check(v)


def p_r(u: ExpPolySymbol, v: ExpPolySymbol, r: int, lam, variables: Sequence[str] | None = None) -> ExpPolySymbol:
    """Bidifferential operator ``P^r(u, v)``; ``P^0 = uv`` and ``P^1`` is the Poisson bracket."""
    _check_spaces(u, v)
    if r < 0:
        raise ValueError("r must be non-negative")
    pairs = _resolve(lam, variables, u.space)
    table = _tensor(u, v)
    for _ in range(r):
        if not table:
            break
        table = _contract(table, pairs)
    return _diagonal(table, u.space)


def p_r_enumerated(u: ExpPolySymbol, v: ExpPolySymbol, r: int, lam,
                   variables: Sequence[str] | None = None) -> ExpPolySymbol:
    """``P^r`` summed over every index tuple, straight from the definition."""
    _check_spaces(u, v)
    if hasattr(lam, "lam"):
        variables = variables or lam.variables
        lam = lam.lam
    lam = np.asarray(lam, dtype=float)
    names = tuple(variables or u.space.variables)
    if lam.shape != (len(names), len(names)):
        raise LambdaError("lambda does not match the variables")
    n = len(names)
    out = ExpPolySymbol.zero(u.space)
    for idx_a in itertools.product(range(n), repeat=r):
        du = u
        for a in idx_a:
            du = du.deriv(names[a])
        if du.is_zero():
            continue
        for idx_b in itertools.product(range(n), repeat=r):
            w = 1.0
            for a, b in zip(idx_a, idx_b):
                w *= lam[a, b]
                if w == 0:
                    break
            if w == 0:
                continue
            dv = v
            for b in idx_b:
                dv = dv.deriv(names[b])
            out = out + du * dv * w
    return out


def star_components(u: ExpPolySymbol, v: ExpPolySymbol, lam,
                    variables: Sequence[str] | None = None) -> list[ExpPolySymbol]:
    """``[P^0, ..., P^R]`` with ``R = deg_p(u) + deg_p(v)``."""
    _check_spaces(u, v)
    pairs = _resolve(lam, variables, u.space)
    bound = u.deg_p + v.deg_p
    table = _tensor(u, v)
    comps = [_diagonal(table, u.space)]
    for _ in range(bound):
        table = _contract(table, pairs)
        comps.append(_diagonal(table, u.space))
    return comps


def star(u: ExpPolySymbol, v: ExpPolySymbol, lam, variables: Sequence[str] | None = None) -> ExpPolySymbol:
    """Moyal product, summed exactly up to the termination bound."""
    comps = star_components(u, v, lam, variables)
    out = ExpPolySymbol.zero(u.space)
    for r, comp in enumerate(comps):
        if not comp.is_zero():
            out = out + comp * (NU ** r / math.factorial(r))
    return out


def star_commutator(u: ExpPolySymbol, v: ExpPolySymbol, lam, variables=None) -> ExpPolySymbol:
    return star(u, v, lam, variables) - star(v, u, lam, variables)


@dataclass
class BracketCheckReport:
    orbit_id: str
    seed: int
    cases: list[dict] = field(default_factory=list)

    @property
    def max_deviation(self) -> float:
        return max((c["deviation"] for c in self.cases), default=0.0)

    def passed(self, tol: float = 1e-12) -> bool:
        return self.max_deviation < tol

    def to_dict(self) -> dict:
        return {"orbit": self.orbit_id, "seed": self.seed, "pairs": len(self.cases),
                "max_deviation": self.max_deviation}


def star_bracket_check(chart, trials: int, seed: int, include_basis: bool = True) -> BracketCheckReport:
    """Check ``iZ~ * iT~ - iT~ * iZ~ = i [Z, T]~`` on basis pairs and random pairs.

    Deviation is the largest coefficient difference divided by
    ``max(1, largest coefficient of the right-hand side)``.
    """
    alg = chart.algebra
    rng = np.random.default_rng(seed)
    pairs = []
    if include_basis:
        pairs += [(alg.basis_element(i), alg.basis_element(j)) for i in range(alg.dim) for j in range(alg.dim)]
    for _ in range(trials):
        pairs.append((alg.element(rng.normal(size=alg.dim)), alg.element(rng.normal(size=alg.dim))))
    report = BracketCheckReport(chart.orbit_id, seed)
    for z, t in pairs:
        iz = chart.hamiltonian_map(z) * 1j
        it = chart.hamiltonian_map(t) * 1j
        lhs = star(iz, it, chart) - star(it, iz, chart)
        rhs = chart.hamiltonian_map(bracket(z, t)) * 1j
        dev = lhs.max_deviation(rhs) / max(1.0, rhs.max_abs_coeff())
        report.cases.append({"Z": [float(c) for c in z.coeffs], "T": [float(c) for c in t.coeffs],
                             "deviation": float(dev)})
    return report
