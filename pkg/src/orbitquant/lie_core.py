"""Finite-dimensional real Lie algebras given by structure constants.

Besides the bracket itself this module carries the adjoint and coadjoint
actions, the Poisson matrix ``<F, [X_i, X_j]>`` of a functional and the
rank stratification of the dual space obtained by sampling it.
"""
from __future__ import annotations

import json
import math
from dataclasses import dataclass, field
from importlib import resources
from pathlib import Path
from typing import Mapping, Sequence

import numpy as np

__all__ = [
    "AlgebraFileError",
    "DimensionMismatchError",
    "InvalidSamplerError",
    "LieAlgebra",
    "AlgebraElement",
    "CoadjointFunctional",
    "ValidationReport",
    "SamplerSpec",
    "StratificationReport",
    "bracket",
    "check_jacobi",
    "ad_matrix",
    "matrix_exp",
    "coadjoint_apply",
    "poisson_matrix",
    "numerical_rank",
    "stratify",
    "load_algebra",
    "algebra_from_dict",
    "catalog_algebra",
    "RANK_RTOL",
]

RANK_RTOL = 1e-9
JACOBI_TOL = 1e-12


class DimensionMismatchError(ValueError):
    """Raised when operands live in different algebras or have the wrong length."""


class AlgebraFileError(ValueError):
    """A Lie-algebra definition file could not be read.

    ``location`` names the offending spot: ``line:col`` for JSON syntax
    errors, a JSON path such as ``brackets[1].terms[0].k`` otherwise.
    """

    def __init__(self, message: str, location: str = ""):
        self.location = location
        super().__init__(f"{location}: {message}" if location else message)


class InvalidSamplerError(ValueError):
    pass


@dataclass(frozen=True, eq=False)
class LieAlgebra:
    """Real Lie algebra with ``[X_i, X_j] = sum_k c[i][j][k] X_k``.

    ``structure`` is the sparse table ``{(i, j): {k: c}}`` with 0-based
    indices; every ordered pair present is stored explicitly, so a table
    that is not antisymmetric can be represented (and then rejected by
    :func:`check_jacobi`).
    """

    name: str
    basis: tuple[str, ...]
    structure: Mapping[tuple[int, int], Mapping[int, float]]
    _dense: np.ndarray = field(init=False, repr=False, compare=False)

    def __post_init__(self):
        n = len(self.basis)
        if n == 0:
            raise ValueError("a Lie algebra needs at least one basis element")
        if len(set(self.basis)) != n:
            raise ValueError(f"duplicate basis labels in {self.basis}")
        dense = np.zeros((n, n, n))
        for (i, j), row in self.structure.items():
            for k, c in row.items():
                if not (0 <= i < n and 0 <= j < n and 0 <= k < n):
                    raise DimensionMismatchError(f"index ({i},{j},{k}) out of range for dim {n}")
                dense[i, j, k] = c
        dense.setflags(write=False)
        object.__setattr__(self, "_dense", dense)

    @classmethod
    def from_brackets(cls, name: str, basis: Sequence[str],
                      brackets: Mapping[tuple[int, int], Mapping[int, float]]) -> "LieAlgebra":
        """Build from the ``i < j`` entries only; the ``(j, i)`` half is implied."""
        table: dict[tuple[int, int], dict[int, float]] = {}
        for (i, j), row in brackets.items():
            if i >= j:
                raise ValueError(f"only i < j entries are allowed, got ({i}, {j})")
            table[(i, j)] = {k: float(c) for k, c in row.items() if c != 0}
            table[(j, i)] = {k: -float(c) for k, c in row.items() if c != 0}
        return cls(name, tuple(basis), table)

    @classmethod
    def abelian(cls, dim: int, name: str = "abelian") -> "LieAlgebra":
        return cls(name, tuple(f"E{i + 1}" for i in range(dim)), {})

    @property
    def dim(self) -> int:
        return len(self.basis)

    @property
    def constants(self) -> np.ndarray:
        """Dense read-only ``c[i, j, k]`` array."""
        return self._dense

    def index(self, label: str | int) -> int:
        if isinstance(label, (int, np.integer)):
            if not 0 <= label < self.dim:
                raise IndexError(label)
            return int(label)
        try:
            return self.basis.index(label)
        except ValueError:
            raise KeyError(f"unknown basis label {label!r} for {self.name}") from None

    def element(self, coeffs: Sequence[float]) -> "AlgebraElement":
        return AlgebraElement(self, coeffs)

    def basis_element(self, label: str | int) -> "AlgebraElement":
        v = np.zeros(self.dim)
        v[self.index(label)] = 1.0
        return AlgebraElement(self, v)

    def __getitem__(self, label: str | int) -> "AlgebraElement":
        return self.basis_element(label)

    def zero(self) -> "AlgebraElement":
        return AlgebraElement(self, np.zeros(self.dim))

    def functional(self, coords: Sequence[float]) -> "CoadjointFunctional":
        return CoadjointFunctional(self, coords)

    def to_dict(self) -> dict:
        brackets = []
        for (i, j) in sorted(self.structure):
            if i < j:
                terms = [{"k": k + 1, "c": _plain_number(c)}
                         for k, c in sorted(self.structure[(i, j)].items())]
                brackets.append({"i": i + 1, "j": j + 1, "terms": terms})
        return {"name": self.name, "dim": self.dim, "basis": list(self.basis), "brackets": brackets}


def _plain_number(c: float):
    return int(c) if float(c).is_integer() else float(c)


def _frozen_vector(values, n: int, what: str) -> np.ndarray:
    arr = np.array(values, dtype=float).reshape(-1)
    if arr.shape != (n,):
        raise DimensionMismatchError(f"{what} needs {n} coordinates, got {arr.size}")
    arr.setflags(write=False)
    return arr


@dataclass(frozen=True, eq=False)
class AlgebraElement:
    algebra: LieAlgebra
    coeffs: np.ndarray

    def __post_init__(self):
        object.__setattr__(self, "coeffs", _frozen_vector(self.coeffs, self.algebra.dim, "element"))

    def _same(self, other: "AlgebraElement"):
        if not isinstance(other, AlgebraElement) or other.algebra is not self.algebra:
            raise DimensionMismatchError("elements belong to different algebras")

    def __add__(self, other):
        self._same(other)
        return AlgebraElement(self.algebra, self.coeffs + other.coeffs)

    def __sub__(self, other):
        self._same(other)
        return AlgebraElement(self.algebra, self.coeffs - other.coeffs)

    def __neg__(self):
        return AlgebraElement(self.algebra, -self.coeffs)

    def __mul__(self, s):
        return AlgebraElement(self.algebra, float(s) * self.coeffs)

    __rmul__ = __mul__

    def __eq__(self, other):
        return (isinstance(other, AlgebraElement) and other.algebra is self.algebra
                and bool(np.array_equal(self.coeffs, other.coeffs)))

    __hash__ = None

    def isclose(self, other: "AlgebraElement", atol: float = 1e-12) -> bool:
        self._same(other)
        return bool(np.allclose(self.coeffs, other.coeffs, rtol=0, atol=atol))

    def __repr__(self):
        parts = [f"{c:g}*{lab}" for c, lab in zip(self.coeffs, self.algebra.basis) if c != 0]
        return f"<{self.algebra.name}: {' + '.join(parts) or '0'}>"


@dataclass(frozen=True, eq=False)
class CoadjointFunctional:
    """Point ``F`` of the dual, stored as ``F_i = <F, X_i>``."""

    algebra: LieAlgebra
    coords: np.ndarray

    def __post_init__(self):
        object.__setattr__(self, "coords", _frozen_vector(self.coords, self.algebra.dim, "functional"))

    def __call__(self, element: AlgebraElement) -> float:
        if element.algebra is not self.algebra:
            raise DimensionMismatchError("functional and element belong to different algebras")
        return float(self.coords @ element.coeffs)

    def __add__(self, other: "CoadjointFunctional"):
        if other.algebra is not self.algebra:
            raise DimensionMismatchError("functionals belong to different algebras")
        return CoadjointFunctional(self.algebra, self.coords + other.coords)

    def isclose(self, other: "CoadjointFunctional", atol: float = 1e-10) -> bool:
        return bool(np.allclose(self.coords, other.coords, rtol=0, atol=atol))

    def __repr__(self):
        return f"<{self.algebra.name}* {np.array2string(self.coords, precision=6)}>"


def bracket(a: AlgebraElement, b: AlgebraElement) -> AlgebraElement:
    a._same(b)
    return AlgebraElement(a.algebra, np.einsum("i,j,ijk->k", a.coeffs, b.coeffs, a.algebra.constants))


@dataclass
class ValidationReport:
    algebra: str
    violations: list[dict] = field(default_factory=list)

    @property
    def ok(self) -> bool:
        return not self.violations

    def to_dict(self) -> dict:
        return {"algebra": self.algebra, "ok": self.ok, "violations": self.violations}


def check_jacobi(algebra: LieAlgebra, tol: float = JACOBI_TOL) -> ValidationReport:
    """List every antisymmetry and Jacobi violation larger than ``tol``.

    Indices in the report are 1-based, matching the file format.
    """
    c = algebra.constants
    report = ValidationReport(algebra.name)
    asym = c + c.transpose(1, 0, 2)
    for i, j, k in zip(*np.nonzero(np.abs(asym) > tol)):
        if i <= j:
            report.violations.append({"kind": "antisymmetry", "indices": [int(i) + 1, int(j) + 1, int(k) + 1],
                                      "value": float(asym[i, j, k])})
    # J[i,j,k,l] = sum_m c[i,j,m] c[m,k,l] + cyclic(i,j,k)
    t = np.einsum("ijm,mkl->ijkl", c, c)
    jac = t + t.transpose(1, 2, 0, 3) + t.transpose(2, 0, 1, 3)
    for i, j, k, l in zip(*np.nonzero(np.abs(jac) > tol)):
        report.violations.append({"kind": "jacobi", "indices": [int(i) + 1, int(j) + 1, int(k) + 1, int(l) + 1],
                                  "value": float(jac[i, j, k, l])})
    return report


def ad_matrix(u: AlgebraElement) -> np.ndarray:
    """Matrix of ``ad_U = [U, .]``; column ``j`` holds the coordinates of ``[U, X_j]``."""
    return np.einsum("i,ijk->kj", u.coeffs, u.algebra.constants)


def matrix_exp(m) -> np.ndarray:
    """Matrix exponential by scaling and squaring of a truncated Taylor series.

    The Taylor loop runs until the next term is below double precision of
    the partial sum, on a matrix scaled to 1-norm at most 1/2.
    """
    m = np.asarray(m)
    if m.ndim != 2 or m.shape[0] != m.shape[1]:
        raise ValueError(f"matrix_exp needs a square matrix, got shape {m.shape}")
    if not np.all(np.isfinite(m)):
        raise ValueError("matrix_exp needs finite entries")
    dtype = np.result_type(m.dtype, float)
    n = m.shape[0]
    norm = float(np.abs(m).sum(axis=0).max()) if n else 0.0
    squarings = max(0, int(math.ceil(math.log2(norm))) + 1) if norm > 0.5 else 0
    a = m.astype(dtype) / (2.0 ** squarings)
    result = np.eye(n, dtype=dtype)
    term = np.eye(n, dtype=dtype)
    for k in range(1, 60):
        term = term @ a / k
        result = result + term
        if np.abs(term).max() <= 1e-18 * max(1.0, np.abs(result).max()):
            break
    for _ in range(squarings):
        result = result @ result
    return result


def coadjoint_apply(u: AlgebraElement, f: CoadjointFunctional) -> CoadjointFunctional:
    """``K(exp U) F``, i.e. ``Z -> <F, exp(-ad_U) Z>``.

    For aff(R) with ``U = aX + bY`` the matrix ``exp(-ad_U)`` in the basis
    (X, Y) is ``[[1, 0], [b (1 - e^{-a}) / a, e^{-a}]]``.
    """
    if u.algebra is not f.algebra:
        raise DimensionMismatchError("element and functional belong to different algebras")
    e = matrix_exp(-ad_matrix(u))
    return CoadjointFunctional(f.algebra, e.T @ f.coords)


def poisson_matrix(f: CoadjointFunctional) -> np.ndarray:
    return np.einsum("ijk,k->ij", f.algebra.constants, f.coords)


def numerical_rank(m: np.ndarray, rtol: float = RANK_RTOL) -> np.ndarray | int:
    """Count singular values above ``rtol`` times the largest one.

    Works on a single matrix or a stack ``(..., n, n)``; a zero matrix has rank 0.
    """
    s = np.linalg.svd(np.asarray(m), compute_uv=False)
    top = s[..., :1]
    ranks = np.sum((s > rtol * top) & (top > 0), axis=-1)
    return int(ranks) if np.ndim(ranks) == 0 else ranks


@dataclass(frozen=True)
class SamplerSpec:
    """Distribution for sampling the dual space.

    ``kind`` is ``"uniform"`` (box ``[low, high]^n``) or ``"gaussian"``
    (``N(0, scale^2)`` per coordinate); coordinates listed in ``zero``
    (0-based) are set to exactly zero after sampling.
    """

    kind: str = "uniform"
    low: float = -1.0
    high: float = 1.0
    scale: float = 1.0
    zero: tuple[int, ...] = ()

    def __post_init__(self):
        if self.kind not in ("uniform", "gaussian"):
            raise InvalidSamplerError(f"unknown sampler kind {self.kind!r}")
        if self.kind == "uniform" and not self.low < self.high:
            raise InvalidSamplerError(f"uniform sampler needs low < high, got [{self.low}, {self.high}]")
        if self.kind == "gaussian" and not self.scale > 0:
            raise InvalidSamplerError("gaussian sampler needs scale > 0")

    @classmethod
    def from_dict(cls, spec: Mapping) -> "SamplerSpec":
        unknown = set(spec) - {"kind", "low", "high", "scale", "zero"}
        if unknown:
            raise InvalidSamplerError(f"unknown sampler fields {sorted(unknown)}")
        try:
            kw = dict(spec)
            if "zero" in kw:
                kw["zero"] = tuple(int(z) for z in kw["zero"])
            return cls(**kw)
        except (TypeError, ValueError) as exc:
            if isinstance(exc, InvalidSamplerError):
                raise
            raise InvalidSamplerError(str(exc)) from None

    def draw(self, rng: np.random.Generator, count: int, dim: int) -> np.ndarray:
        if any(not 0 <= z < dim for z in self.zero):
            raise InvalidSamplerError(f"zeroed coordinate out of range for dim {dim}: {self.zero}")
        if self.kind == "uniform":
            pts = rng.uniform(self.low, self.high, size=(count, dim))
        else:
            pts = rng.normal(0.0, self.scale, size=(count, dim))
        pts[:, list(self.zero)] = 0.0
        return pts


@dataclass
class StratificationReport:
    algebra: str
    seed: int
    samples: int
    rank_histogram: dict[int, int]
    examples: dict[int, list[list[float]]]
    points: np.ndarray = field(repr=False)
    ranks: np.ndarray = field(repr=False)

    def to_dict(self) -> dict:
        return {
            "algebra": self.algebra,
            "seed": self.seed,
            "samples": self.samples,
            "rank_histogram": {str(r): n for r, n in sorted(self.rank_histogram.items())},
            "examples": {str(r): ex for r, ex in sorted(self.examples.items())},
        }


def stratify(algebra: LieAlgebra, sampler: SamplerSpec | Mapping, count: int, seed: int,
             rtol: float = RANK_RTOL, n_examples: int = 3) -> StratificationReport:
    """Sample the dual space and bucket the points by orbit dimension."""
    if count < 1:
        raise ValueError("count must be >= 1")
    if not isinstance(sampler, SamplerSpec):
        sampler = SamplerSpec.from_dict(sampler)
    rng = np.random.default_rng(seed)
    pts = sampler.draw(rng, count, algebra.dim)
    mats = np.einsum("ijk,sk->sij", algebra.constants, pts)
    ranks = np.atleast_1d(numerical_rank(mats, rtol))
    hist: dict[int, int] = {}
    examples: dict[int, list[list[float]]] = {}
    for pt, r in zip(pts, ranks):
        r = int(r)
        hist[r] = hist.get(r, 0) + 1
        ex = examples.setdefault(r, [])
        if len(ex) < n_examples:
            ex.append([float(v) for v in pt])
    return StratificationReport(algebra.name, seed, count, hist, examples, pts, ranks)


def algebra_from_dict(data) -> LieAlgebra:
    if not isinstance(data, dict):
        raise AlgebraFileError("top level must be an object", "$")
    for key, typ in (("name", str), ("dim", int), ("basis", list), ("brackets", list)):
        if key not in data:
            raise AlgebraFileError(f"missing field {key!r}", "$")
        if not isinstance(data[key], typ) or (typ is int and isinstance(data[key], bool)):
            raise AlgebraFileError(f"field must be {typ.__name__}", key)
    n = data["dim"]
    if n < 1:
        raise AlgebraFileError("dim must be positive", "dim")
    if len(data["basis"]) != n or not all(isinstance(b, str) for b in data["basis"]):
        raise AlgebraFileError(f"basis must list {n} strings", "basis")
    table: dict[tuple[int, int], dict[int, float]] = {}
    for bi, entry in enumerate(data["brackets"]):
        where = f"brackets[{bi}]"
        if not isinstance(entry, dict) or not {"i", "j", "terms"} <= set(entry):
            raise AlgebraFileError("entry needs i, j and terms", where)
        i, j = entry["i"], entry["j"]
        for name, v in (("i", i), ("j", j)):
            if not isinstance(v, int) or isinstance(v, bool) or not 1 <= v <= n:
                raise AlgebraFileError(f"index must be an integer in 1..{n}", f"{where}.{name}")
        if not i < j:
            raise AlgebraFileError("only i < j entries are allowed", where)
        if (i - 1, j - 1) in table:
            raise AlgebraFileError("duplicate bracket entry", where)
        row: dict[int, float] = {}
        if not isinstance(entry["terms"], list):
            raise AlgebraFileError("terms must be a list", f"{where}.terms")
        for ti, term in enumerate(entry["terms"]):
            tw = f"{where}.terms[{ti}]"
            if not isinstance(term, dict) or not {"k", "c"} <= set(term):
                raise AlgebraFileError("term needs k and c", tw)
            k, c = term["k"], term["c"]
            if not isinstance(k, int) or isinstance(k, bool) or not 1 <= k <= n:
                raise AlgebraFileError(f"index must be an integer in 1..{n}", f"{tw}.k")
            if not isinstance(c, (int, float)) or isinstance(c, bool) or not math.isfinite(c):
                raise AlgebraFileError("coefficient must be a finite number", f"{tw}.c")
            row[k - 1] = row.get(k - 1, 0.0) + float(c)
        table[(i - 1, j - 1)] = row
    return LieAlgebra.from_brackets(data["name"], data["basis"], table)


_CATALOG_FILES = {"aff_r": "aff_r.json", "affR": "aff_r.json", "aff_c": "aff_c.json", "affC": "aff_c.json"}


def bundled_path(name: str) -> Path | None:
    """Path of a bundled algebra file, accepting ``aff_r``, ``affR`` or ``aff_r.json``."""
    fname = _CATALOG_FILES.get(name.removesuffix(".json"))
    if fname is None:
        return None
    return Path(str(resources.files("orbitquant") / "data" / fname))


def load_algebra(path: str | Path) -> LieAlgebra:
    path = Path(path)
    try:
        text = path.read_text(encoding="utf-8")
    except OSError as exc:
        raise AlgebraFileError(f"cannot read file: {exc.strerror}", str(path)) from None
    try:
        data = json.loads(text)
    except json.JSONDecodeError as exc:
        raise AlgebraFileError(exc.msg, f"{exc.lineno}:{exc.colno}") from None
    return algebra_from_dict(data)


_catalog_cache: dict[str, LieAlgebra] = {}


def catalog_algebra(name: str) -> LieAlgebra:
    """The bundled ``aff_r`` / ``aff_c`` algebras (shared instances)."""
    path = bundled_path(name)
    if path is None:
        raise KeyError(f"no bundled algebra named {name!r}")
    key = path.name
    if key not in _catalog_cache:
        _catalog_cache[key] = load_algebra(path)
    return _catalog_cache[key]
