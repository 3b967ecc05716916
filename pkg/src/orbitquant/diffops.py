"""Linear differential operators with exponential-polynomial coefficients.

An operator is ``sum_alpha c_alpha(y) d^alpha`` over a list of position
variables ``y``; coefficients are :class:`ExpPolySymbol` values over the same
variables. Composition expands by the Leibniz rule, so everything stays exact.
"""
from __future__ import annotations

import math
from itertools import product
from typing import Mapping, Sequence

import numpy as np

from .symbols import ExpPolySymbol, SymbolError, VarSpace

__all__ = [
    "DiffOperator",
    "UnsupportedSymbolError",
    "compose",
    "commutator",
    "apply_symbolic",
    "quantize_symbol",
    "change_vars_linear",
    "change_vars_shear",
    "shear_pairs",
]


class UnsupportedSymbolError(ValueError):
    pass


def _binom_multi(alpha, gamma) -> int:
    out = 1
    for a, g in zip(alpha, gamma):
        out *= math.comb(a, g)
    return out


class DiffOperator:
    """Immutable canonical operator ``{multi_index: coefficient}``."""

    __slots__ = ("space", "_terms")

    def __init__(self, space: VarSpace | Sequence[str], terms: Mapping | None = None):
        if not isinstance(space, VarSpace):
            space = VarSpace((), tuple(space))
        if space.p_vars:
            raise SymbolError("operators act on position variables only")
        self.space = space
        n = len(space.pos_vars)
        acc: dict = {}
        for idx, coef in (terms or {}).items():
            idx = tuple(int(k) for k in idx)
            if len(idx) != n or any(k < 0 for k in idx):
                raise SymbolError(f"bad derivative multi-index {idx} for {space}")
            if not isinstance(coef, ExpPolySymbol):
                coef = ExpPolySymbol.constant(space, complex(coef))
            coef._check(ExpPolySymbol.zero(space))
            prev = acc.get(idx)
            coef = coef if prev is None else prev + coef
            if coef.is_zero():
                acc.pop(idx, None)
            else:
                acc[idx] = coef
        self._terms = acc

    # constructors -----------------------------------------------------------

    @property
    def variables(self) -> tuple[str, ...]:
        return self.space.pos_vars

    @classmethod
    def zero(cls, space) -> "DiffOperator":
        return cls(space, {})

    @classmethod
    def identity(cls, space) -> "DiffOperator":
        op = cls(space, {})
        return cls(op.space, {(0,) * len(op.variables): 1.0})

    @classmethod
    def multiplication(cls, coef: ExpPolySymbol) -> "DiffOperator":
        return cls(coef.space, {(0,) * len(coef.space.pos_vars): coef})

    @classmethod
    def derivative(cls, space, var: str, order: int = 1, coef: complex = 1.0) -> "DiffOperator":
        op = cls(space, {})
        idx = [0] * len(op.variables)
        idx[op.variables.index(var)] = order
        return cls(op.space, {tuple(idx): coef})

    # inspection ---------------------------------------------------------------

    @property
    def terms(self) -> tuple[tuple[tuple[int, ...], ExpPolySymbol], ...]:
        """``(multi_index, coefficient)`` pairs in lexicographic index order."""
        return tuple((k, self._terms[k]) for k in sorted(self._terms))

    def coefficient(self, idx) -> ExpPolySymbol:
        return self._terms.get(tuple(idx), ExpPolySymbol.zero(self.space))

    @property
    def order(self) -> int:
        return max((sum(k) for k in self._terms), default=0)

    def is_zero(self) -> bool:
        return not self._terms

    def depends_on(self, var: str) -> bool:
        j = self.variables.index(var)
        return any(k[j] or c.depends_on(var) for k, c in self._terms.items())

    # algebra ----------------------------------------------------------------

    def _check(self, other: "DiffOperator"):
        if not isinstance(other, DiffOperator):
            raise TypeError(f"expected DiffOperator, got {type(other).__name__}")
        if other.space != self.space:
            raise SymbolError(f"operator spaces differ: {self.space} vs {other.space}")

    def __add__(self, other):
        if isinstance(other, (int, float, complex)):
            other = DiffOperator.identity(self.space) * other
        self._check(other)
        acc = dict(self._terms)
        for k, c in other._terms.items():
            acc[k] = acc[k] + c if k in acc else c
        return DiffOperator(self.space, acc)

    __radd__ = __add__

    def __neg__(self):
        return self * -1.0

    def __sub__(self, other):
        return self + (-other)

    def __mul__(self, other):
        """Scalar or coefficient multiplication on the left of every term."""
        if isinstance(other, (int, float, complex, np.number)):
            if other == 0:
                return DiffOperator.zero(self.space)
            return DiffOperator(self.space, {k: c * other for k, c in self._terms.items()})
        if isinstance(other, ExpPolySymbol):
            return DiffOperator(self.space, {k: other * c for k, c in self._terms.items()})
        return NotImplemented

    __rmul__ = __mul__

    def __matmul__(self, other):
        return compose(self, other)

    def apply(self, u: ExpPolySymbol) -> ExpPolySymbol:
        return apply_symbolic(self, u)

    def isclose(self, other: "DiffOperator", rtol: float = 1e-12) -> bool:
        if not isinstance(other, DiffOperator) or other.space != self.space:
            return False
        if set(self._terms) != set(other._terms):
            return False
        return all(c.isclose(other._terms[k], rtol) for k, c in self._terms.items())

    def max_deviation(self, other: "DiffOperator") -> float:
        self._check(other)
        zero = ExpPolySymbol.zero(self.space)
        keys = set(self._terms) | set(other._terms)
        return max((self._terms.get(k, zero).max_deviation(other._terms.get(k, zero)) for k in keys),
                   default=0.0)

    def __eq__(self, other):
        return self.isclose(other)

    __hash__ = None

    def restrict(self, space: VarSpace | Sequence[str]) -> "DiffOperator":
        """Drop variables the operator does not touch."""
        if not isinstance(space, VarSpace):
            space = VarSpace((), tuple(space))
        keep = [self.variables.index(v) for v in space.pos_vars]
        for j, v in enumerate(self.variables):
            if j not in keep and self.depends_on(v):
                raise SymbolError(f"operator still depends on {v!r}")
        return DiffOperator(space, {tuple(k[j] for j in keep): c.rebase(space) for k, c in self._terms.items()})

    def rebase(self, space: VarSpace | Sequence[str]) -> "DiffOperator":
        """Re-express over a space with more (or reordered) variables."""
        if not isinstance(space, VarSpace):
            space = VarSpace((), tuple(space))
        pos = {v: j for j, v in enumerate(space.pos_vars)}
        for j, v in enumerate(self.variables):
            if v not in pos and self.depends_on(v):
                raise SymbolError(f"operator depends on {v!r}, which {space} lacks")
        out = {}
        for k, c in self._terms.items():
            idx = [0] * len(space.pos_vars)
            for j, v in enumerate(self.variables):
                if v in pos:
                    idx[pos[v]] = k[j]
            out[tuple(idx)] = c.rebase(space)
        return DiffOperator(space, out)

    # output -----------------------------------------------------------------

    def _fmt_index(self, idx) -> str:
        parts = []
        for v, m in zip(self.variables, idx):
            if m == 1:
                parts.append(f"d_{v}")
            elif m > 1:
                parts.append(f"d_{v}^{m}")
        return "*".join(parts)

    def format(self) -> str:
        if not self._terms:
            return "0"
        pieces = []
        for idx, c in self.terms:
            d = self._fmt_index(idx)
            val = c.constant_value()
            if not d:
                pieces.append(f"({c.format()})")
            elif val is not None and val == 1:
                pieces.append(d)
            else:
                pieces.append(f"({c.format()})*{d}")
        return " + ".join(pieces)

    __str__ = format

    def __repr__(self):
        return f"DiffOperator({self.format()!r})"

    def to_dict(self) -> dict:
        return {
            "variables": list(self.variables),
            "terms": [{"derivative": {v: m for v, m in zip(self.variables, idx) if m},
                       "coefficient": c.format()} for idx, c in self.terms],
        }


def compose(a: DiffOperator, b: DiffOperator) -> DiffOperator:
    """``a o b`` with ``d^alpha (c u) = sum_gamma C(alpha, gamma) d^gamma c d^(alpha-gamma) u``."""
    a._check(b)
    names = a.variables
    acc: dict = {}
    for alpha, ca in a._terms.items():
        for beta, cb in b._terms.items():
            for gamma in product(*(range(m + 1) for m in alpha)):
                dc = cb
                for v, g in zip(names, gamma):
                    if g:
                        dc = dc.deriv(v, g)
                if dc.is_zero():
                    continue
                idx = tuple(al - g + be for al, g, be in zip(alpha, gamma, beta))
                term = ca * dc * float(_binom_multi(alpha, gamma))
                acc[idx] = acc[idx] + term if idx in acc else term
    return DiffOperator(a.space, acc)


def commutator(a: DiffOperator, b: DiffOperator) -> DiffOperator:
    return compose(a, b) - compose(b, a)


def apply_symbolic(op: DiffOperator, u: ExpPolySymbol) -> ExpPolySymbol:
    """Exact action on a symbol over the same position variables."""
    if u.space != op.space:
        if u.deg_p == 0 and set(u.space.pos_vars) <= set(op.variables):
            u = u.rebase(op.space)
        else:
            raise SymbolError(f"symbol space {u.space} does not match operator space {op.space}")
    out = ExpPolySymbol.zero(op.space)
    for idx, c in op._terms.items():
        du = u
        for v, m in zip(op.variables, idx):
            if m:
                du = du.deriv(v, m)
        if not du.is_zero():
            out = out + c * du
    return out


def quantize_symbol(zt: ExpPolySymbol, chart) -> DiffOperator:
    """Fourier conjugate of left star-multiplication by ``i * zt``.

    For ``zt = sum_i a_i p_i + a0(q)`` with constant ``a_i`` and a chart whose
    Poisson tensor only couples ``p`` with ``q`` through the block ``M``:

        sum_i a_i (1/2 sum_j M_ij d_{q_j} - d_{x_i}) + i a0(q - M^T x / 2)

    The result acts on functions of ``q_vars + x_vars``.
    """
    if zt.space != chart.space:
        raise SymbolError(f"symbol space {zt.space} is not the chart space {chart.space}")
    m = len(chart.p_vars)
    lam = chart.lam
    if np.any(lam[:m, :m]) or np.any(lam[m:, m:]):
        raise UnsupportedSymbolError("quantization needs a Poisson tensor of pure p-q type")
    block = lam[:m, m:]
    lin = [0j] * m
    a0_terms = {}
    for (exps, linform), c in zt.term_dict().items():
        deg = sum(exps)
        if deg == 0:
            a0_terms[(exps, linform)] = c
        elif deg == 1:
            if any(a != 0 for a in linform):
                raise UnsupportedSymbolError("momentum coefficients must be constant")
            lin[exps.index(1)] += c
        else:
            raise UnsupportedSymbolError(f"p-degree {deg} exceeds 1")
    op_space = VarSpace((), chart.q_vars + chart.x_vars)
    out = DiffOperator.zero(op_space)
    for i, a in enumerate(lin):
        if a == 0:
            continue
        for j, qv in enumerate(chart.q_vars):
            if block[i, j]:
                out = out + DiffOperator.derivative(op_space, qv, 1, 0.5 * block[i, j] * a)
        out = out + DiffOperator.derivative(op_space, chart.x_vars[i], 1, -a)
    if a0_terms:
        a0 = ExpPolySymbol(zt.space, a0_terms, _canonical=True).rebase(op_space)
        for j, qv in enumerate(chart.q_vars):
            shift = {chart.x_vars[i]: -0.5 * block[i, j] for i in range(m) if block[i, j]}
            if shift:
                a0 = a0.substitute_shift(qv, shift)
        out = out + DiffOperator.multiplication(a0 * 1j)
    return out


def change_vars_linear(op: DiffOperator, new_vars: Sequence[str], matrix, inverse=None) -> DiffOperator:
    """Rewrite ``op`` in variables ``new = matrix @ old`` (``old`` = ``op.variables``).

    Derivatives transform by ``d_old_k = sum_l matrix[l, k] d_new_l`` and
    coefficients by substituting ``old = inverse @ new``.
    """
    a = np.asarray(matrix, dtype=float)
    n = len(op.variables)
    if a.shape != (n, n) or len(new_vars) != n:
        raise ValueError(f"change of variables must be {n}x{n}")
    if inverse is None:
        if abs(np.linalg.det(a)) < 1e-12:
            raise ValueError("change of variables is not invertible")
        inverse = np.linalg.inv(a)
    inv = np.asarray(inverse, dtype=float)
    if not np.allclose(a @ inv, np.eye(n), atol=1e-12):
        raise ValueError("supplied inverse does not invert the change of variables")
    new_space = VarSpace((), tuple(new_vars))
    new_of_old = {old: {new: inv[k, l] for l, new in enumerate(new_vars) if inv[k, l]}
                  for k, old in enumerate(op.variables)}
    d_old = []
    for k in range(n):
        d = DiffOperator.zero(new_space)
        for l, new in enumerate(new_vars):
            if a[l, k]:
                d = d + DiffOperator.derivative(new_space, new, 1, a[l, k])
        d_old.append(d)
    out = DiffOperator.zero(new_space)
    for idx, c in op.terms:
        term = DiffOperator.multiplication(c.linear_substitute(new_space, new_of_old))
        for k, mult in enumerate(idx):
            for _ in range(mult):
                term = compose(term, d_old[k])
        out = out + term
    return out


def shear_pairs(chart) -> list[tuple[str, str, str, str, float]]:
    """``(q, x, s, t, sigma)`` per degree of freedom, with ``s = q - sigma x / 2``, ``t = q + sigma x / 2``.

    ``sigma`` is the diagonal of the chart's p-q block, so the quantized
    operators lose their ``t`` dependence.
    """
    m = len(chart.p_vars)
    block = chart.lam[:m, m:]
    if np.any(block - np.diag(np.diag(block))):
        raise UnsupportedSymbolError("shear needs a diagonal p-q block")
    suffix = [v[1:] for v in chart.p_vars]
    return [(chart.q_vars[i], chart.x_vars[i], "s" + suffix[i], "t" + suffix[i], float(block[i, i]))
            for i in range(m)]


def change_vars_shear(op: DiffOperator, pairs: Sequence[tuple], inverse: bool = False) -> DiffOperator:
    """Shear each ``(q, x)`` pair into ``(s, t) = (q - sigma x/2, q + sigma x/2)``.

    ``pairs`` holds ``(q, x, s, t[, sigma])`` tuples, ``sigma`` defaulting to 1.
    With ``inverse=True`` the operator is over the ``(s, t)`` variables and is
    mapped back to ``(q, x)``. ``sigma = 0`` is rejected.
    """
    pairs = [tuple(p) + ((1.0,) if len(p) == 4 else ()) for p in pairs]
    src = op.variables
    names = {}
    for q, x, s, t, sigma in pairs:
        if sigma == 0:
            raise ValueError("shear with sigma = 0 is not invertible")
        names[(q, x)] = (s, t, sigma)
    n = len(src)
    a = np.eye(n)
    inv = np.eye(n)
    new_vars = list(src)
    for (q, x), (s, t, sigma) in names.items():
        u, v = (s, t) if inverse else (q, x)
        if u not in src or v not in src:
            raise ValueError(f"operator has no variables {u!r}, {v!r}")
        i, j = src.index(u), src.index(v)
        fwd = np.array([[1.0, -sigma / 2], [1.0, sigma / 2]])
        bwd = np.array([[0.5, 0.5], [-1.0 / sigma, 1.0 / sigma]])
        blk, iblk = (bwd, fwd) if inverse else (fwd, bwd)
        a[np.ix_([i, j], [i, j])] = blk
        inv[np.ix_([i, j], [i, j])] = iblk
        new_vars[i], new_vars[j] = (q, x) if inverse else (s, t)
    return change_vars_linear(op, new_vars, a, inv)
