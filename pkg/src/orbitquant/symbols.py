"""Exponential-polynomial symbols.

A symbol is a finite sum of terms ``c * prod(p_i ** m_i) * exp(sum_j a_j y_j)``
with complex ``c`` and ``a_j``, non-negative integer ``m_i``, ``p_i`` the
momentum variables and ``y_j`` the position variables (chart ``q``'s and
their Fourier duals ``x``).  The class is closed under sums, products and
partial derivatives, which is all the Moyal product needs.
"""
from __future__ import annotations

import cmath
import math
import re
from dataclasses import dataclass
from typing import Iterable, Mapping

import numpy as np

__all__ = [
    "VarSpace",
    "ExpPolySymbol",
    "SymbolError",
    "SpaceMismatchError",
    "UnknownVariableError",
    "MissingVariableError",
    "UnsupportedShiftError",
    "SymbolParseError",
    "SymbolSyntaxError",
    "parse",
    "add",
    "mul",
    "deriv",
    "evaluate",
    "substitute_shift",
    "KEY_DIGITS",
    "COEFF_RTOL",
]

# exponent entries are snapped to this many decimals when forming term keys
KEY_DIGITS = 12
COEFF_RTOL = 1e-12
_CANCEL_RTOL = 1e-13


class SymbolError(ValueError):
    pass


class SpaceMismatchError(SymbolError):
    pass


class UnknownVariableError(SymbolError):
    pass


class MissingVariableError(SymbolError):
    pass


class UnsupportedShiftError(SymbolError):
    pass


class SymbolParseError(SymbolError):
    def __init__(self, message: str, position: int, text: str = ""):
        self.position = position
        self.text = text
        pointer = f"\n  {text}\n  {' ' * position}^" if text else ""
        super().__init__(f"{message} at position {position}{pointer}")


class SymbolSyntaxError(SymbolParseError):
    pass


@dataclass(frozen=True)
class VarSpace:
    """Ordered momentum variables and position variables."""

    p_vars: tuple[str, ...] = ()
    pos_vars: tuple[str, ...] = ()

    def __post_init__(self):
        object.__setattr__(self, "p_vars", tuple(self.p_vars))
        object.__setattr__(self, "pos_vars", tuple(self.pos_vars))
        names = self.p_vars + self.pos_vars
        if len(set(names)) != len(names):
            raise ValueError(f"duplicate variable names in {names}")
        for name in names:
            if not re.fullmatch(r"[A-Za-z_][A-Za-z0-9_]*", name) or name in ("i", "exp"):
                raise ValueError(f"invalid variable name {name!r}")

    @classmethod
    def standard(cls, n: int = 1, with_x: bool = True) -> "VarSpace":
        """``(p; q, x)`` for ``n = 1``, ``(p1..pn; q1..qn, x1..xn)`` otherwise."""
        if n == 1:
            names = ("p",), ("q",), ("x",)
        else:
            names = tuple(tuple(f"{s}{i + 1}" for i in range(n)) for s in "pqx")
        p, q, x = names
        return cls(p, q + x if with_x else q)

    @property
    def variables(self) -> tuple[str, ...]:
        return self.p_vars + self.pos_vars

    def locate(self, var: str) -> tuple[str, int]:
        """``("p", i)`` or ``("y", j)`` for a variable name."""
        if var in self.p_vars:
            return "p", self.p_vars.index(var)
        if var in self.pos_vars:
            return "y", self.pos_vars.index(var)
        raise UnknownVariableError(f"unknown variable {var!r}; space has {self.variables}")

    def __str__(self):
        return f"VarSpace(p={list(self.p_vars)}, pos={list(self.pos_vars)})"


def _snap(z) -> complex:
    z = complex(z)
    return complex(round(z.real, KEY_DIGITS) + 0.0, round(z.imag, KEY_DIGITS) + 0.0)


def _sort_key(key):
    exps, lin = key
    return exps, tuple(z.real for z in lin), tuple(z.imag for z in lin)


def _accumulate(acc: dict, key, c: complex):
    """Add ``c`` into ``acc[key]``, dropping the entry on cancellation."""
    if c == 0:
        return
    old = acc.get(key)
    if old is None:
        acc[key] = c
        return
    new = old + c
    if new == 0 or abs(new) <= _CANCEL_RTOL * max(abs(old), abs(c)):
        del acc[key]
    else:
        acc[key] = new


def _fmt_real(x: float) -> str:
    if x == int(x) and abs(x) < 1e15:
        return str(int(x))
    return repr(float(x))


def _fmt_complex(c: complex) -> str:
    """Coefficient text; bare for reals, parenthesised otherwise."""
    if c.imag == 0:
        return _fmt_real(c.real)
    if c.real == 0:
        return f"({_fmt_real(c.imag)}*i)"
    sign = "+" if c.imag > 0 else "-"
    return f"({_fmt_real(c.real)}{sign}{_fmt_real(abs(c.imag))}*i)"


class ExpPolySymbol:
    """Immutable canonical exponential-polynomial symbol.

    Terms are stored as ``{(p_exps, linform): coeff}`` where ``p_exps`` is a
    tuple of ints over ``space.p_vars`` and ``linform`` a tuple of complex
    exponent coefficients over ``space.pos_vars``.
    """

    __slots__ = ("space", "_terms")

    def __init__(self, space: VarSpace, terms: Mapping | None = None, *, _canonical: bool = False):
        self.space = space
        if _canonical:
            self._terms = dict(terms)
            return
        acc: dict = {}
        for key, c in (terms or {}).items():
            exps, lin = key
            exps = tuple(int(e) for e in exps)
            lin = tuple(_snap(a) for a in lin)
            if len(exps) != len(space.p_vars) or len(lin) != len(space.pos_vars):
                raise SpaceMismatchError(f"term key {key} does not fit {space}")
            if any(e < 0 for e in exps):
                raise SymbolError(f"negative p-exponent in {key}")
            _accumulate(acc, (exps, lin), complex(c))
        self._terms = acc

    # construction -------------------------------------------------------

    @classmethod
    def zero(cls, space: VarSpace) -> "ExpPolySymbol":
        return cls(space, {}, _canonical=True)

    @classmethod
    def constant(cls, space: VarSpace, c: complex) -> "ExpPolySymbol":
        return cls(space, {cls._unit_key(space): c})

    @classmethod
    def var(cls, space: VarSpace, name: str) -> "ExpPolySymbol":
        kind, idx = space.locate(name)
        if kind != "p":
            raise SymbolError(f"{name!r} is a position variable; only exp(...) of it is in the class")
        exps = [0] * len(space.p_vars)
        exps[idx] = 1
        return cls(space, {(tuple(exps), cls._unit_key(space)[1]): 1.0})

    @classmethod
    def exp(cls, space: VarSpace, linform: Mapping[str, complex], coeff: complex = 1.0) -> "ExpPolySymbol":
        lin = [0j] * len(space.pos_vars)
        for name, a in linform.items():
            kind, idx = space.locate(name)
            if kind != "y":
                raise SymbolError(f"exp(...) only accepts position variables, got {name!r}")
            lin[idx] += complex(a)
        return cls(space, {((0,) * len(space.p_vars), tuple(lin)): coeff})

    @classmethod
    def from_terms(cls, space: VarSpace,
                   terms: Iterable[tuple[complex, Mapping[str, int], Mapping[str, complex]]]) -> "ExpPolySymbol":
        """Build from ``(coeff, {p_var: exponent}, {pos_var: exponent coefficient})`` triples."""
        acc = {}
        for coeff, p_exps, lin in terms:
            exps = [0] * len(space.p_vars)
            for name, e in p_exps.items():
                kind, idx = space.locate(name)
                if kind != "p":
                    raise SymbolError(f"{name!r} is not a momentum variable")
                exps[idx] += int(e)
            form = [0j] * len(space.pos_vars)
            for name, a in lin.items():
                kind, idx = space.locate(name)
                if kind != "y":
                    raise SymbolError(f"{name!r} is not a position variable")
                form[idx] += complex(a)
            key = (tuple(exps), tuple(form))
            acc[key] = acc.get(key, 0) + coeff
        return cls(space, acc)

    @staticmethod
    def _unit_key(space: VarSpace):
        return (0,) * len(space.p_vars), (0j,) * len(space.pos_vars)

    # inspection -----------------------------------------------------------

    @property
    def terms(self) -> tuple[tuple[tuple[int, ...], tuple[complex, ...], complex], ...]:
        """Canonically ordered ``(p_exps, linform, coeff)`` triples."""
        return tuple((k[0], k[1], self._terms[k]) for k in sorted(self._terms, key=_sort_key))

    def term_dict(self) -> dict:
        return dict(self._terms)

    def __len__(self):
        return len(self._terms)

    def is_zero(self) -> bool:
        return not self._terms

    @property
    def deg_p(self) -> int:
        """Largest total momentum degree; 0 for the zero symbol."""
        return max((sum(k[0]) for k in self._terms), default=0)

    def depends_on(self, var: str) -> bool:
        kind, idx = self.space.locate(var)
        if kind == "p":
            return any(k[0][idx] for k in self._terms)
        return any(k[1][idx] != 0 for k in self._terms)

    def constant_value(self) -> complex | None:
        """The value if the symbol is a constant, else ``None``."""
        unit = self._unit_key(self.space)
        if not self._terms:
            return 0j
        if set(self._terms) == {unit}:
            return self._terms[unit]
        return None

    # ring structure -------------------------------------------------------

    def _check(self, other: "ExpPolySymbol"):
        if not isinstance(other, ExpPolySymbol):
            raise TypeError(f"expected ExpPolySymbol, got {type(other).__name__}")
        if other.space != self.space:
            raise SpaceMismatchError(f"{self.space} vs {other.space}")

    def _coerce(self, other):
        if isinstance(other, (int, float, complex, np.number)):
            return ExpPolySymbol.constant(self.space, complex(other))
        self._check(other)
        return other

    def __add__(self, other):
        other = self._coerce(other)
        acc = dict(self._terms)
        for k, c in other._terms.items():
            _accumulate(acc, k, c)
        return ExpPolySymbol(self.space, acc, _canonical=True)

    __radd__ = __add__

    def __neg__(self):
        return ExpPolySymbol(self.space, {k: -c for k, c in self._terms.items()}, _canonical=True)

    def __sub__(self, other):
        return self + (-self._coerce(other))

    def __rsub__(self, other):
        return (-self) + other

    def __mul__(self, other):
        if isinstance(other, (int, float, complex, np.number)):
            s = complex(other)
            if s == 0:
                return ExpPolySymbol.zero(self.space)
            return ExpPolySymbol(self.space, {k: s * c for k, c in self._terms.items()}, _canonical=True)
        self._check(other)
        acc: dict = {}
        for (e1, l1), c1 in self._terms.items():
            for (e2, l2), c2 in other._terms.items():
                key = (tuple(a + b for a, b in zip(e1, e2)),
                       tuple(_snap(a + b) for a, b in zip(l1, l2)))
                _accumulate(acc, key, c1 * c2)
        return ExpPolySymbol(self.space, acc, _canonical=True)

    def __rmul__(self, other):
        return self * other

    def __pow__(self, n: int):
        if not isinstance(n, int) or n < 0:
            raise ValueError("only non-negative integer powers")
        out = ExpPolySymbol.constant(self.space, 1.0)
        for _ in range(n):
            out = out * self
        return out

    # calculus ---------------------------------------------------------------

    def deriv(self, var: str, order: int = 1) -> "ExpPolySymbol":
        kind, idx = self.space.locate(var)
        out = self
        for _ in range(order):
            acc: dict = {}
            for (exps, lin), c in out._terms.items():
                if kind == "p":
                    m = exps[idx]
                    if m == 0:
                        continue
                    new = exps[:idx] + (m - 1,) + exps[idx + 1:]
                    _accumulate(acc, (new, lin), c * m)
                else:
                    a = lin[idx]
                    if a != 0:
                        _accumulate(acc, (exps, lin), c * a)
            out = ExpPolySymbol(self.space, acc, _canonical=True)
        return out

    def substitute_shift(self, var: str, shift: Mapping[str, complex]) -> "ExpPolySymbol":
        """Substitute ``var -> var + shift`` where ``shift`` is a linear form in position variables."""
        kind, idx = self.space.locate(var)
        if kind != "y":
            raise UnsupportedShiftError(f"can only shift position variables, not {var!r}")
        vec = [0j] * len(self.space.pos_vars)
        for name, a in shift.items():
            k2, j = self.space.locate(name)
            if k2 != "y":
                raise UnsupportedShiftError(f"shift may only involve position variables, got {name!r}")
            vec[j] += complex(a)
        acc: dict = {}
        for (exps, lin), c in self._terms.items():
            a = lin[idx]
            new = tuple(_snap(l + a * v) for l, v in zip(lin, vec)) if a != 0 else lin
            _accumulate(acc, (exps, new), c)
        return ExpPolySymbol(self.space, acc, _canonical=True)

    def translate(self, var: str, offset: complex) -> "ExpPolySymbol":
        """Substitute ``var -> var + offset`` for a constant offset."""
        kind, idx = self.space.locate(var)
        if kind == "p":
            raise UnsupportedShiftError("translation of momentum variables leaves the canonical basis")
        acc: dict = {}
        for key, c in self._terms.items():
            _accumulate(acc, key, c * cmath.exp(key[1][idx] * offset))
        return ExpPolySymbol(self.space, acc, _canonical=True)

    def rebase(self, space: VarSpace) -> "ExpPolySymbol":
        """Re-express over another space by variable name.

        Variables missing from ``space`` must not occur; new ones enter with
        exponent zero.
        """
        for var in self.space.variables:
            if var not in space.variables and self.depends_on(var):
                raise SpaceMismatchError(f"symbol depends on {var!r}, which {space} lacks")
        pmap = [self.space.p_vars.index(v) if v in self.space.p_vars else None for v in space.p_vars]
        ymap = [self.space.pos_vars.index(v) if v in self.space.pos_vars else None for v in space.pos_vars]
        for v in space.p_vars:
            if v in self.space.pos_vars:
                raise SpaceMismatchError(f"{v!r} changes kind between spaces")
        acc = {}
        for (exps, lin), c in self._terms.items():
            e2 = tuple(exps[i] if i is not None else 0 for i in pmap)
            l2 = tuple(lin[j] if j is not None else 0j for j in ymap)
            acc[(e2, l2)] = c
        return ExpPolySymbol(space, acc, _canonical=True)

    def linear_substitute(self, space: VarSpace, new_of_old: Mapping[str, Mapping[str, complex]]) -> "ExpPolySymbol":
        """Rewrite each old position variable as a linear form in ``space``'s position variables.

        Old position variables absent from ``new_of_old`` keep their name.
        Momentum dependence must be absent.
        """
        if self.deg_p:
            raise SymbolError("linear_substitute only handles p-free symbols")
        rows = []
        for name in self.space.pos_vars:
            form = new_of_old.get(name, {name: 1.0})
            vec = [0j] * len(space.pos_vars)
            for new, a in form.items():
                kind, j = space.locate(new)
                if kind != "y":
                    raise SymbolError(f"{new!r} is not a position variable of the target space")
                vec[j] += complex(a)
            rows.append(vec)
        mat = np.array(rows, dtype=complex).reshape(len(self.space.pos_vars), len(space.pos_vars))
        zero_exps = (0,) * len(space.p_vars)
        acc: dict = {}
        for (exps, lin), c in self._terms.items():
            new = tuple(_snap(v) for v in np.asarray(lin, dtype=complex) @ mat) if lin else (0j,) * len(space.pos_vars)
            _accumulate(acc, (zero_exps, new), c)
        return ExpPolySymbol(space, acc, _canonical=True)

    # numerics -------------------------------------------------------------

    def eval(self, point: Mapping[str, complex | np.ndarray]):
        """Evaluate at a point; values may be numpy arrays (broadcast together)."""
        missing = [v for v in self.space.variables if v not in point]
        if missing:
            raise MissingVariableError(f"no value for {missing}")
        total = 0j
        pvals = [np.asarray(point[v]) for v in self.space.p_vars]
        yvals = [np.asarray(point[v]) for v in self.space.pos_vars]
        for (exps, lin), c in self._terms.items():
            val = c
            for m, pv in zip(exps, pvals):
                if m:
                    val = val * pv ** m
            arg = 0j
            for a, yv in zip(lin, yvals):
                if a != 0:
                    arg = arg + a * yv
            total = total + val * np.exp(arg)
        return complex(total) if np.ndim(total) == 0 else total

    # comparison / output ---------------------------------------------------

    def max_deviation(self, other: "ExpPolySymbol") -> float:
        """Largest coefficient difference over the union of term keys."""
        self._check(other)
        keys = set(self._terms) | set(other._terms)
        return max((abs(self._terms.get(k, 0) - other._terms.get(k, 0)) for k in keys), default=0.0)

    def max_abs_coeff(self) -> float:
        return max((abs(c) for c in self._terms.values()), default=0.0)

    def isclose(self, other: "ExpPolySymbol", rtol: float = COEFF_RTOL) -> bool:
        if not isinstance(other, ExpPolySymbol) or other.space != self.space:
            return False
        if set(self._terms) != set(other._terms):
            return False
        return all(abs(c - other._terms[k]) <= rtol * max(abs(c), abs(other._terms[k]))
                   for k, c in self._terms.items())

    def __eq__(self, other):
        if isinstance(other, (int, float, complex)):
            other = ExpPolySymbol.constant(self.space, other)
        return self.isclose(other)

    __hash__ = None

    def _format_lin(self, lin) -> str:
        parts = []
        for name, a in zip(self.space.pos_vars, lin):
            for val, suffix in ((a.real, ""), (a.imag, "i*")):
                if val == 0:
                    continue
                mag = abs(val)
                body = f"{suffix}{name}" if mag == 1 else f"{_fmt_real(mag)}*{suffix}{name}"
                parts.append(("-" if val < 0 else "+", body))
        if not parts:
            return "0"
        first_sign, first = parts[0]
        out = ("-" if first_sign == "-" else "") + first
        for sign, body in parts[1:]:
            out += f" {sign} {body}"
        return out

    def format(self) -> str:
        """Canonical text, highest momentum degree first; parses back to an equal symbol."""
        if not self._terms:
            return "0"
        pieces = []
        for exps, lin, c in reversed(self.terms):
            factors = []
            for name, m in zip(self.space.p_vars, exps):
                if m == 1:
                    factors.append(name)
                elif m > 1:
                    factors.append(f"{name}^{m}")
            if any(a != 0 for a in lin):
                factors.append(f"exp({self._format_lin(lin)})")
            negative = c.imag == 0 and c.real < 0
            mag = -c if negative else c
            if factors and mag == 1:
                body = "*".join(factors)
            else:
                body = "*".join([_fmt_complex(mag)] + factors)
            pieces.append(("-" if negative else "+", body))
        sign, body = pieces[0]
        out = ("-" if sign == "-" else "") + body
        for sign, body in pieces[1:]:
            out += f" {sign} {body}"
        return out

    __str__ = format

    def __repr__(self):
        return f"ExpPolySymbol({self.format()!r})"


# --- functional API ----------------------------------------------------------

def add(u: ExpPolySymbol, v: ExpPolySymbol) -> ExpPolySymbol:
    u._check(v)
    return u + v


def mul(u: ExpPolySymbol, v: ExpPolySymbol) -> ExpPolySymbol:
    u._check(v)
    return u * v


def deriv(u: ExpPolySymbol, var: str, order: int = 1) -> ExpPolySymbol:
    return u.deriv(var, order)


def evaluate(u: ExpPolySymbol, point: Mapping[str, complex]):
    return u.eval(point)


def substitute_shift(u: ExpPolySymbol, var: str, shift: Mapping[str, complex]) -> ExpPolySymbol:
    return u.substitute_shift(var, shift)


# --- parser ----------------------------------------------------------------------
#
# expr    := ['+'|'-'] term (('+'|'-') term)*
# term    := factor ('*' factor)*
# factor  := number | 'i' | var ['^' nat] | 'exp' '(' linform ')' | '(' expr ')'
# linform := ['+'|'-'] lterm (('+'|'-') lterm)*
# lterm   := [number ['*']] ['i' '*'] var | number

_TOKEN = re.compile(r"\s*(?:(?P<num>\d+\.?\d*(?:[eE][+-]?\d+)?|\.\d+(?:[eE][+-]?\d+)?)"
                    r"|(?P<name>[A-Za-z_][A-Za-z0-9_]*)|(?P<op>[-+*^()]))")


def _tokenize(text: str):
    tokens = []
    pos = 0
    while True:
        while pos < len(text) and text[pos].isspace():
            pos += 1
        if pos >= len(text):
            break
        m = _TOKEN.match(text, pos)
        if not m or m.end() == pos:
            raise SymbolSyntaxError(f"unexpected character {text[pos]!r}", pos, text)
        kind = m.lastgroup
        start = m.start(kind)
        tokens.append((kind, m.group(kind), start))
        pos = m.end()
    tokens.append(("end", "", len(text)))
    return tokens


class _Parser:
    def __init__(self, text: str, space: VarSpace):
        self.text = text
        self.space = space
        self.tokens = _tokenize(text)
        self.i = 0

    def peek(self, offset: int = 0):
        return self.tokens[min(self.i + offset, len(self.tokens) - 1)]

    def next(self):
        tok = self.tokens[self.i]
        self.i += 1
        return tok

    def error(self, msg, tok=None):
        tok = tok or self.peek()
        raise SymbolSyntaxError(msg, tok[2], self.text)

    def expect(self, value):
        tok = self.next()
        if tok[1] != value or tok[0] not in ("op",):
            self.error(f"expected {value!r}, found {tok[1] or 'end of input'!r}", tok)

    def variable(self, tok, want: str | None = None):
        name = tok[1]
        if name not in self.space.variables:
            raise UnknownVariableError(
                f"unknown variable {name!r} at position {tok[2]}; space has {self.space.variables}")
        kind, _ = self.space.locate(name)
        if want and kind != want:
            what = "momentum" if want == "p" else "position"
            self.error(f"{name!r} is not a {what} variable here", tok)
        return name

    def parse(self) -> ExpPolySymbol:
        out = self.expr()
        if self.peek()[0] != "end":
            self.error(f"unexpected {self.peek()[1]!r}")
        return out

    def expr(self) -> ExpPolySymbol:
        sign = 1.0
        tok = self.peek()
        if tok[0] == "op" and tok[1] in "+-":
            self.next()
            sign = -1.0 if tok[1] == "-" else 1.0
        out = self.term() * sign
        while self.peek()[0] == "op" and self.peek()[1] in "+-":
            op = self.next()[1]
            t = self.term()
            out = out + t if op == "+" else out - t
        return out

    def term(self) -> ExpPolySymbol:
        out = self.factor()
        while self.peek()[0] == "op" and self.peek()[1] == "*":
            self.next()
            out = out * self.factor()
        return out

    def factor(self) -> ExpPolySymbol:
        tok = self.next()
        kind, val, _ = tok
        if kind == "num":
            return ExpPolySymbol.constant(self.space, float(val))
        if kind == "name":
            if val == "i":
                return ExpPolySymbol.constant(self.space, 1j)
            if val == "exp":
                self.expect("(")
                lin, const = self.linform()
                self.expect(")")
                return ExpPolySymbol.exp(self.space, lin, cmath.exp(const))
            name = self.variable(tok, "p")
            base = ExpPolySymbol.var(self.space, name)
            if self.peek()[0] == "op" and self.peek()[1] == "^":
                self.next()
                ntok = self.next()
                if ntok[0] != "num" or not ntok[1].isdigit():
                    self.error("exponent must be a non-negative integer", ntok)
                return base ** int(ntok[1])
            return base
        if kind == "op" and val == "(":
            out = self.expr()
            self.expect(")")
            return out
        self.error(f"unexpected {val or 'end of input'!r}", tok)

    def linform(self):
        lin: dict[str, complex] = {}
        const = 0j
        sign = 1.0
        tok = self.peek()
        if tok[0] == "op" and tok[1] in "+-":
            self.next()
            sign = -1.0 if tok[1] == "-" else 1.0
        while True:
            coeff, name = self.lterm()
            if name is None:
                const += sign * coeff
            else:
                lin[name] = lin.get(name, 0) + sign * coeff
            tok = self.peek()
            if tok[0] == "op" and tok[1] in "+-":
                self.next()
                sign = -1.0 if tok[1] == "-" else 1.0
                continue
            return lin, const

    def lterm(self):
        coeff = 1.0 + 0j
        tok = self.peek()
        if tok[0] == "num":
            self.next()
            coeff = complex(float(tok[1]))
            nxt = self.peek()
            if nxt[0] == "op" and nxt[1] == "*":
                self.next()
            elif nxt[0] != "name":
                return coeff, None
        tok = self.peek()
        if tok[0] == "name" and tok[1] == "i":
            self.next()
            self.expect("*")
            coeff *= 1j
            tok = self.peek()
        if tok[0] != "name" or tok[1] in ("i", "exp"):
            self.error("expected a position variable in exp(...)", tok)
        self.next()
        return coeff, self.variable(tok, "y")


def parse(text: str, space: VarSpace) -> ExpPolySymbol:
    """Parse the symbol mini-language into a canonical symbol.

    >>> s = VarSpace.standard(1)
    >>> parse("2*p + 3*exp(q)", s).format()
    '2*p + 3*exp(q)'
    """
    return _Parser(text, space).parse()
