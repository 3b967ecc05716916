"""Universal enveloping algebra: words, PBW normal forms, quantization.

Words are tuples of 0-based basis indices. Normal forms are reached by the
rewriting rule ``X_j X_i -> X_i X_j + [X_j, X_i]`` whenever ``X_j`` comes
after ``X_i`` in the chosen total order.
"""
from __future__ import annotations

import random
from typing import Iterable, Mapping, Sequence

from .diffops import DiffOperator, compose, quantize_symbol
from .lie_core import LieAlgebra
from .symbols import _fmt_complex

__all__ = [
    "UEElement",
    "ue_mul",
    "pbw_normal_form",
    "parse_word",
    "top_degree_part",
    "sorted_word",
    "quantize_ue",
    "relation_element",
]


class UEElement:
    __slots__ = ("algebra", "_terms")

    def __init__(self, algebra: LieAlgebra, terms: Mapping | None = None):
        self.algebra = algebra
        acc: dict = {}
        for word, c in (terms or {}).items():
            word = tuple(int(i) for i in word)
            if any(not 0 <= i < algebra.dim for i in word):
                raise ValueError(f"word {word} has letters outside the basis of {algebra.name}")
            c = acc.get(word, 0) + complex(c)
            if c == 0:
                acc.pop(word, None)
            else:
                acc[word] = c
        self._terms = acc

    @classmethod
    def unit(cls, algebra: LieAlgebra, c: complex = 1) -> "UEElement":
        return cls(algebra, {(): c})

    @classmethod
    def word(cls, algebra: LieAlgebra, letters: Iterable, c: complex = 1) -> "UEElement":
        letters = tuple(algebra.index(x) if isinstance(x, str) else int(x) for x in letters)
        return cls(algebra, {letters: c})

    @classmethod
    def letter(cls, algebra: LieAlgebra, i) -> "UEElement":
        return cls.word(algebra, [i])

    @property
    def terms(self) -> tuple[tuple[tuple[int, ...], complex], ...]:
        """Longest words first, ties broken lexicographically."""
        return tuple((w, self._terms[w]) for w in sorted(self._terms, key=lambda w: (-len(w), w)))

    def term_dict(self) -> dict:
        return dict(self._terms)

    def is_zero(self) -> bool:
        return not self._terms

    @property
    def degree(self) -> int:
        return max((len(w) for w in self._terms), default=0)

    def _check(self, other):
        if not isinstance(other, UEElement):
            raise TypeError(f"expected UEElement, got {type(other).__name__}")
        if other.algebra is not self.algebra:
            raise ValueError("elements belong to different algebras")

    def __add__(self, other):
        self._check(other)
        acc = dict(self._terms)
        for w, c in other._terms.items():
            acc[w] = acc.get(w, 0) + c
        return UEElement(self.algebra, acc)

    def __neg__(self):
        return self * -1

    def __sub__(self, other):
        return self + (-other)

    def __mul__(self, other):
        if isinstance(other, UEElement):
            return ue_mul(self, other)
        if isinstance(other, (int, float, complex)):
            return UEElement(self.algebra, {w: c * other for w, c in self._terms.items()})
        return NotImplemented

    def __rmul__(self, other):
        if isinstance(other, (int, float, complex)):
            return self * other
        return NotImplemented

    def __eq__(self, other):
        return isinstance(other, UEElement) and other.algebra is self.algebra and other._terms == self._terms

    __hash__ = None

    def format(self) -> str:
        """Canonical text; equal elements give byte-identical strings."""
        if not self._terms:
            return "0"
        labels = self.algebra.basis
        parts = []
        for w, c in self.terms:
            body = "*".join(labels[i] for i in w)
            negative = c.imag == 0 and c.real < 0
            mag = -c if negative else c
            if not body:
                text = _fmt_complex(mag)
            elif mag == 1:
                text = body
            else:
                text = f"{_fmt_complex(mag)}*{body}"
            parts.append(("-" if negative else "+", text))
        out = ("-" if parts[0][0] == "-" else "") + parts[0][1]
        for sign, text in parts[1:]:
            out += f" {sign} {text}"
        return out

    __str__ = format

    def __repr__(self):
        return f"UEElement({self.format()!r})"

    def to_dict(self) -> dict:
        return {"algebra": self.algebra.name, "normal_form": self.format(),
                "terms": [{"word": [self.algebra.basis[i] for i in w], "coeff": [c.real, c.imag]}
                          for w, c in self.terms]}


def ue_mul(a: UEElement, b: UEElement) -> UEElement:
    """Concatenation product, no reordering."""
    a._check(b)
    acc: dict = {}
    for wa, ca in a._terms.items():
        for wb, cb in b._terms.items():
            acc[wa + wb] = acc.get(wa + wb, 0) + ca * cb
    return UEElement(a.algebra, acc)


def parse_word(algebra: LieAlgebra, text: str) -> UEElement:
    """``"Y,X"`` -> the word ``Y X``; an empty string is the unit."""
    text = text.strip()
    if not text:
        return UEElement.unit(algebra)
    letters = [t.strip() for t in text.split(",")]
    for t in letters:
        if t not in algebra.basis:
            raise KeyError(f"unknown basis label {t!r}; expected one of {list(algebra.basis)}")
    return UEElement.word(algebra, letters)


def _resolve_order(algebra: LieAlgebra, order) -> tuple[int, ...]:
    if order is None:
        return tuple(range(algebra.dim))
    if hasattr(order, "order"):
        order = order.order
    order = tuple(algebra.index(x) if isinstance(x, str) else int(x) for x in order)
    if sorted(order) != list(range(algebra.dim)):
        raise ValueError(f"order {order} is not a permutation of the basis")
    return order


def pbw_normal_form(e: UEElement, order=None, strategy: str = "leftmost",
                    rng: random.Random | int | None = None) -> UEElement:
    """Rewrite until every word is nondecreasing in ``order``.

    ``order`` is a sequence of basis indices or labels, or anything with an
    ``order`` attribute (e.g. a polarization). ``strategy`` is ``"leftmost"``
    or ``"random"``; the latter picks a uniformly random inversion at every
    step using ``rng``.
    """
    alg = e.algebra
    rank = {b: k for k, b in enumerate(_resolve_order(alg, order))}
    if strategy not in ("leftmost", "random"):
        raise ValueError(f"unknown strategy {strategy!r}")
    if strategy == "random" and not isinstance(rng, random.Random):
        rng = random.Random(rng)
    structure = alg.structure
    done: dict = {}
    pending = dict(e._terms)
    while pending:
        nxt: dict = {}
        for w, c in pending.items():
            inv = [k for k in range(len(w) - 1) if rank[w[k]] > rank[w[k + 1]]]
            if not inv:
                done[w] = done.get(w, 0) + c
                continue
            k = inv[0] if strategy == "leftmost" else rng.choice(inv)
            j, i = w[k], w[k + 1]
            swapped = w[:k] + (i, j) + w[k + 2:]
            nxt[swapped] = nxt.get(swapped, 0) + c
            for m, cm in structure.get((j, i), {}).items():
                shorter = w[:k] + (m,) + w[k + 2:]
                nxt[shorter] = nxt.get(shorter, 0) + c * cm
        pending = {w: c for w, c in nxt.items() if c != 0}
    return UEElement(alg, done)


def sorted_word(word: Sequence[int], order=None, algebra: LieAlgebra | None = None) -> tuple[int, ...]:
    if order is None:
        return tuple(sorted(word))
    if hasattr(order, "order"):
        order = order.order
    if algebra is not None:
        order = _resolve_order(algebra, order)
    rank = {b: k for k, b in enumerate(order)}
    return tuple(sorted(word, key=rank.__getitem__))


def top_degree_part(e: UEElement) -> UEElement:
    d = e.degree
    return UEElement(e.algebra, {w: c for w, c in e._terms.items() if len(w) == d})


def relation_element(algebra: LieAlgebra, i: int, j: int) -> UEElement:
    """``X_i X_j - X_j X_i - [X_i, X_j]``, which lies in the defining ideal."""
    out = UEElement(algebra, {(i, j): 1})
    out = out - UEElement(algebra, {(j, i): 1})
    return out - UEElement(algebra, {(m,): c for m, c in algebra.structure.get((i, j), {}).items()})


def quantize_ue(e: UEElement, chart, cache: dict | None = None) -> DiffOperator:
    """Extend ``X_i -> quantize_symbol(hamiltonian of X_i)`` multiplicatively and linearly."""
    if e.algebra is not chart.algebra:
        raise ValueError("element and chart belong to different algebras")
    alg = chart.algebra
    cache = {} if cache is None else cache
    if "letters" not in cache:
        cache["letters"] = [quantize_symbol(chart.hamiltonian_map(alg.basis_element(i)), chart)
                            for i in range(alg.dim)]
    letters = cache["letters"]
    ident = DiffOperator.identity(letters[0].space)
    out = DiffOperator.zero(ident.space)
    for w, c in e.terms:
        op = cache.get(w)
        if op is None:
            op = ident
            for i in w:
                op = compose(op, letters[i])
            cache[w] = op
        out = out + op * c
    return out
