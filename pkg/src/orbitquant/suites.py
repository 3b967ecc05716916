"""Verification suites shared by the CLI and the acceptance tests.

Each suite returns a :class:`SuiteResult`: a list of named assertions
(measured value, tolerance, pass flag) plus supporting detail. Results hold
no timings, so equal configurations give identical reports.
"""
from __future__ import annotations

import math
import random
from dataclasses import dataclass, field
from pathlib import Path
from typing import Sequence

import numpy as np

from .diffops import commutator, quantize_symbol
from .enveloping import (UEElement, pbw_normal_form, quantize_ue, relation_element, sorted_word,
                         top_degree_part)
from .fourier_ops import (Axis, GridFunction, apply_numeric, interior_mask, star_apply_numeric)
from .lie_core import bracket, catalog_algebra, stratify
from .moyal import star, star_bracket_check
from .orbits import get_chart, pukanszky_check
from .repr_verify import (GroupElementAffC, GroupElementAffR, closed_form_rep_affC, closed_form_rep_affR,
                          compare_exp_vs_closed_form, compare_exp_vs_closed_form_affC, group_law_defect,
                          lie_derivative_check_affC, ode_cross_check, seam_mass, sheared_operator,
                          unitarity_check)
from .symbols import ExpPolySymbol

__all__ = [
    "Assertion",
    "SuiteResult",
    "GridSpec",
    "SUITES",
    "DEFAULT_TOLERANCES",
    "suite_commutator",
    "suite_associativity",
    "suite_contractions",
    "suite_pbw",
    "suite_operator",
    "suite_operator_numeric",
    "suite_representation",
    "suite_stratification",
    "suite_pukanszky",
    "random_symbol",
    "run_suite",
]

DEFAULT_TOLERANCES = {
    "commutator": 1e-12,
    "associativity": 1e-10,
    "operator": 1e-12,
    "operator_numeric": 1e-6,
    "representation": 1e-8,
    "ode": 1e-4,
    "unitarity": 1e-8,
    "group_law_affR": 1e-8,
    "group_law_affC": 1e-6,
    "negative_control": 1e-3,
}


@dataclass
class Assertion:
    name: str
    value: float
    tolerance: float
    passed: bool
    relation: str = "<"

    def to_dict(self) -> dict:
        return {"name": self.name, "value": self.value, "tolerance": self.tolerance,
                "relation": self.relation, "passed": self.passed}


@dataclass
class SuiteResult:
    suite: str
    assertions: list[Assertion] = field(default_factory=list)
    details: dict = field(default_factory=dict)

    @property
    def passed(self) -> bool:
        return all(a.passed for a in self.assertions)

    def below(self, name: str, value: float, tol: float) -> Assertion:
        a = Assertion(name, float(value), float(tol), bool(value < tol))
        self.assertions.append(a)
        return a

    def at_least(self, name: str, value: float, bound: float) -> Assertion:
        a = Assertion(name, float(value), float(bound), bool(value >= bound), ">=")
        self.assertions.append(a)
        return a

    def equal(self, name: str, value, expected) -> Assertion:
        ok = value == expected
        a = Assertion(name, float(value), float(expected), bool(ok), "==")
        self.assertions.append(a)
        return a

    def to_dict(self) -> dict:
        return {"suite": self.suite, "passed": self.passed,
                "assertions": [a.to_dict() for a in self.assertions], "details": self.details}


@dataclass(frozen=True)
class GridSpec:
    min: float
    max: float
    count: int

    @classmethod
    def parse(cls, text: str) -> "GridSpec":
        parts = text.split(":")
        if len(parts) != 3:
            raise ValueError(f"grid must be min:max:count, got {text!r}")
        lo, hi, n = float(parts[0]), float(parts[1]), int(parts[2])
        if not hi > lo:
            raise ValueError(f"grid max must exceed min in {text!r}")
        if n < 2 or n & (n - 1):
            raise ValueError(f"grid count must be a power of two, got {n}")
        return cls(lo, hi, n)

    def axis(self, name: str) -> Axis:
        return Axis(name, self.min, self.max, self.count)

    def __str__(self):
        return f"{self.min:g}:{self.max:g}:{self.count}"


def _tol(overrides: dict | None, key: str) -> float:
    if overrides and "all" in overrides:
        return overrides["all"]
    if overrides and key in overrides:
        return overrides[key]
    return DEFAULT_TOLERANCES[key]


def _charts(chart_id: str | None, default: Sequence[str]) -> list:
    return [get_chart(c) for c in ([chart_id] if chart_id else default)]


# symbolic suites ----------------------------------------------------------------

def suite_commutator(seed: int, chart_id: str | None = None, trials: int = 100, tol=None) -> SuiteResult:
    """Star commutator of Hamiltonians equals the Hamiltonian of the bracket."""
    res = SuiteResult("commutator")
    for ch in _charts(chart_id, ("affR+", "affR-", "affC:0")):
        rep = star_bracket_check(ch, trials, seed)
        res.below(f"{ch.orbit_id}: max coefficient deviation", rep.max_deviation, _tol(tol, "commutator"))
        res.details[ch.orbit_id] = rep.to_dict()
    return res


def random_symbol(rng: np.random.Generator, chart, max_deg: int = 3, max_terms: int = 3) -> ExpPolySymbol:
    """A few terms ``c * p^k * exp(a . q)`` with small integer/Gaussian-integer exponents."""
    space = chart.space
    out = ExpPolySymbol.zero(space)
    nterms = int(rng.integers(1, max_terms + 1))
    qidx = [space.pos_vars.index(v) for v in chart.q_vars]
    for _ in range(nterms):
        exps = [0] * len(space.p_vars)
        budget = int(rng.integers(0, max_deg + 1))
        for _ in range(budget):
            exps[int(rng.integers(len(exps)))] += 1
        lin = [0j] * len(space.pos_vars)
        for j in qidx:
            lin[j] = complex(int(rng.integers(-2, 3)), 0)
        if len(qidx) > 1:
            lin[qidx[1]] = complex(0, int(rng.integers(-2, 3)))
        c = complex(*rng.normal(size=2))
        out = out + ExpPolySymbol(space, {(tuple(exps), tuple(lin)): c})
    return out


def suite_associativity(seed: int, chart_id: str | None = None, trials: int = 200, tol=None) -> SuiteResult:
    from .moyal import p_r
    res = SuiteResult("associativity")
    for ch in _charts(chart_id, ("affR+", "affC:0")):
        rng = np.random.default_rng(seed)
        worst = 0.0
        beyond = 0.0
        for _ in range(trials):
            u, v, w = (random_symbol(rng, ch) for _ in range(3))
            left = star(star(u, v, ch), w, ch)
            right = star(u, star(v, w, ch), ch)
            scale = max(1.0, left.max_abs_coeff(), right.max_abs_coeff())
            worst = max(worst, left.max_deviation(right) / scale)
            beyond = max(beyond, p_r(u, v, u.deg_p + v.deg_p + 1, ch).max_abs_coeff())
        res.below(f"{ch.orbit_id}: associativity deviation", worst, _tol(tol, "associativity"))
        res.equal(f"{ch.orbit_id}: P^r vanishes past the degree bound", beyond, 0.0)
    return res


def suite_contractions(max_k: int = 6) -> SuiteResult:
    """Closed forms of ``P^k`` against a Hamiltonian, checked exactly."""
    from .moyal import p_r
    res = SuiteResult("contractions")
    ch = get_chart("affR+")
    alg = ch.algebra
    alpha, beta = 0.7, -1.3
    zt = ch.hamiltonian_map(alg.element([alpha, beta]))
    eq = ExpPolySymbol.exp(ch.space, {"q": 1})
    p = ExpPolySymbol.var(ch.space, "p")
    bad = 0
    for m in range(2, 8):
        g = p ** m * ExpPolySymbol.exp(ch.space, {"q": 0.5})
        for k in range(2, max_k + 1):
            expected = eq * g.deriv("p", k) * (beta * (-1) ** k)
            if not p_r(zt, g, k, ch).isclose(expected):
                bad += 1
    res.equal("affR: P^k(Z~, g) = (-1)^k beta e^q d_p^k g, k = 2..6", bad, 0)
    chc = get_chart("affC:0")
    algc = chc.algebra
    coeffs = [0.4, -0.9, 1.1, 0.6]
    at = chc.hamiltonian_map(algc.element(coeffs))
    b = complex(coeffs[2], coeffs[3])
    ew = ExpPolySymbol.exp(chc.space, {"q1": 1, "q2": 1j})
    ewb = ExpPolySymbol.exp(chc.space, {"q1": 1, "q2": -1j})
    p1 = ExpPolySymbol.var(chc.space, "p1")
    p2 = ExpPolySymbol.var(chc.space, "p2")
    bad = 0
    for g in (p1 ** 3 * p2, p1 ** 2 * p2 ** 2 * ew, (p1 + p2 * 1j) ** 4 + p2 ** 3 * ewb):
        for r in range(2, 6):
            dz = _holo(g, r, -1)
            dzb = _holo(g, r, +1)
            expected = (ew * dz * b + ewb * dzb * b.conjugate()) * ((-1) ** r * 2 ** (r - 1))
            if not p_r(at, g, r, chc).isclose(expected):
                bad += 1
    res.equal("affC: P^r(A~, g) = (-1)^r 2^(r-1) [beta e^w d_z^r g + conj], r = 2..5", bad, 0)
    return res


def _holo(g: ExpPolySymbol, r: int, sign: int) -> ExpPolySymbol:
    """``d_z^r g`` (sign -1) or ``d_zbar^r g`` (sign +1) with ``d_z = (d_p1 - i d_p2) / 2``."""
    for _ in range(r):
        g = (g.deriv("p1") + g.deriv("p2") * (sign * 1j)) * 0.5
    return g


def suite_operator(seed: int, chart_id: str | None = None, trials: int = 100, tol=None) -> SuiteResult:
    """Quantization is a Lie homomorphism and kills the enveloping-algebra relations."""
    res = SuiteResult("operator")
    t = _tol(tol, "operator")
    for ch in _charts(chart_id, ("affR+", "affR-", "affC:0")):
        alg = ch.algebra
        rng = np.random.default_rng(seed)
        pairs = [(alg.basis_element(i), alg.basis_element(j)) for i in range(alg.dim) for j in range(alg.dim)]
        pairs += [(alg.element(rng.normal(size=alg.dim)), alg.element(rng.normal(size=alg.dim)))
                  for _ in range(trials)]
        worst = 0.0
        for a, b in pairs:
            qa = quantize_symbol(ch.hamiltonian_map(a), ch)
            qb = quantize_symbol(ch.hamiltonian_map(b), ch)
            qab = quantize_symbol(ch.hamiltonian_map(bracket(a, b)), ch)
            lhs = commutator(qa, qb)
            scale = max([1.0] + [c.max_abs_coeff() for _, c in qab.terms])
            worst = max(worst, lhs.max_deviation(qab) / scale)
        res.below(f"{ch.orbit_id}: [Q(A), Q(B)] - Q([A, B])", worst, t)
        kernel = 0.0
        cache: dict = {}
        for i in range(alg.dim):
            for j in range(alg.dim):
                op = quantize_ue(relation_element(alg, i, j), ch, cache)
                kernel = max([kernel] + [c.max_abs_coeff() for _, c in op.terms])
        res.below(f"{ch.orbit_id}: relation kernel", kernel, t)
    return res


def _gaussian_packets(rng, axes: Sequence[Axis], count: int, width_frac=(0.035, 0.05)) -> list[GridFunction]:
    """Modulated Gaussians; centres and widths are fractions of each axis length."""
    out = []
    for _ in range(count):
        centres = [rng.uniform(-0.1, 0.1) * (a.max - a.min) for a in axes]
        widths = [rng.uniform(*width_frac) * (a.max - a.min) for a in axes]
        waves = [rng.uniform(-1, 1) for _ in axes]

        def func(_c=centres, _w=widths, _k=waves, **mesh):
            arg = 0
            for a, c, w, k in zip(axes, _c, _w, _k):
                x = mesh[a.name]
                arg = arg - ((x - c) / w) ** 2 / 2 + 1j * k * x
            return np.exp(arg)

        out.append(GridFunction.sample(axes, func))
    return out


def suite_operator_numeric(seed: int, chart_id: str | None = None, grid: GridSpec | None = None,
                           functions: int = 20, tol=None) -> SuiteResult:
    """Star series summed on the grid against the closed-form quantized operator."""
    res = SuiteResult("operator_numeric")
    t = _tol(tol, "operator_numeric")
    for ch in _charts(chart_id, ("affR+", "affC:0")):
        rng = np.random.default_rng(seed)
        alg = ch.algebra
        if ch.orbit_id.startswith("affR"):
            xg = grid or GridSpec(-16.0, 16.0, 1024)
            axes = [Axis("q", -8, 8, 64), xg.axis("x")]
            n, frac = functions, (0.035, 0.05)
        else:
            axes = [Axis("q1", -6, 6, 16), Axis("q2", -6, 6, 16), Axis("x1", -8, 8, 32), Axis("x2", -8, 8, 32)]
            n, frac = min(functions, 2), (0.07, 0.085)
        worst = 0.0
        for f in _gaussian_packets(rng, axes, n, frac):
            zt = ch.hamiltonian_map(alg.element(rng.uniform(-2, 2, alg.dim) if ch.orbit_id.startswith("affR")
                                                else rng.uniform(-1, 1, alg.dim)))
            a = star_apply_numeric(zt, f, ch)
            b = apply_numeric(quantize_symbol(zt, ch), f)
            worst = max(worst, float(np.abs(a.values - b.values)[interior_mask(f)].max()))
        res.below(f"{ch.orbit_id}: FFT star route vs quantized operator ({n} functions)", worst, t)
        res.details[ch.orbit_id] = {"axes": [a.to_dict() for a in axes], "functions": n}
    return res


# representations ------------------------------------------------------------------

def _slug(orbit_id: str) -> str:
    return orbit_id.replace(":", "_").replace("+", "plus").replace("-", "minus")


def _packet_s(rng, ax: Axis) -> GridFunction:
    c = rng.uniform(-1, 1)
    w = rng.uniform(0.5, 1.0)
    return GridFunction.sample([ax], lambda s: np.exp(-((s - c) / w) ** 2 / 2))


def suite_representation(seed: int, chart_id: str | None = None, grid: GridSpec | None = None,
                         samples: int = 50, tol=None, dump_dir: Path | None = None,
                         precision: str = "complex128") -> SuiteResult:
    res = SuiteResult("representation")
    for ch in _charts(chart_id, ("affR+", "affR-", "affC:0")):
        if ch.orbit_id.startswith("affR"):
            _representation_affR(res, ch, seed, grid or GridSpec(-8.0, 8.0, 4096), samples, tol, dump_dir, precision)
        else:
            _representation_affC(res, ch, seed, tol, dump_dir, precision)
    return res


def _representation_affR(res: SuiteResult, ch, seed, grid: GridSpec, samples, tol, dump_dir, precision):
    rng = np.random.default_rng(seed)
    alg = ch.algebra
    sign = 1 if ch.orbit_id == "affR+" else -1
    ax = grid.axis("s")
    worst = 0.0
    cases = []
    for k in range(samples):
        z = alg.element(rng.uniform(-2, 2, 2))
        f = _packet_s(rng, ax)
        rep = compare_exp_vs_closed_form(z, f, ch)
        worst = max(worst, rep.sup_error)
        cases.append(rep.to_dict())
        if dump_dir is not None and k == 0:
            f.save(Path(dump_dir) / f"{_slug(ch.orbit_id)}_input.json", precision)
            characteristic = sheared_operator(z, ch)
            from .repr_verify import characteristic_exp
            characteristic_exp(characteristic, 1.0).apply(f).save(Path(dump_dir) / f"{_slug(ch.orbit_id)}_flow.json",
                                                                 precision)
    res.below(f"{ch.orbit_id}: flow vs closed form, sup interior ({samples} elements)", worst,
              _tol(tol, "representation"))
    res.details[f"{ch.orbit_id}/comparisons"] = cases

    # method of lines on a domain short enough that RK4 is not stiffness-bound
    ode_axis = Axis("s", -10.0, 4.0, 256)
    op = sheared_operator(alg.element([0.7, 0.5]), ch)
    f = GridFunction.sample([ode_axis], lambda s: np.exp(-((s + 3) / 0.7) ** 2 / 2))
    ode = ode_cross_check(op, f, 50)
    res.below(f"{ch.orbit_id}: RK4 vs flow", ode["error"], _tol(tol, "ode"))
    res.at_least(f"{ch.orbit_id}: RK4 error reduction under step halving", ode["reduction"], 8.0)
    res.details[f"{ch.orbit_id}/ode"] = ode

    fs = [_packet_s(rng, ax) for _ in range(5)]
    elems = [GroupElementAffR(float(np.exp(rng.uniform(-1, 1))), float(rng.uniform(-2, 2))) for _ in range(5)]
    drift = max(unitarity_check(lambda h, g=g: closed_form_rep_affR(g, h, sign), fs)["max_drift"] for g in elems)
    res.below(f"{ch.orbit_id}: norm drift in L2(dy/|y|)", drift, _tol(tol, "unitarity"))
    defect = 0.0
    for f in fs:
        g1, g2 = elems[int(rng.integers(5))], elems[int(rng.integers(5))]
        defect = max(defect, group_law_defect(lambda g, h: closed_form_rep_affR(g, h, sign), g1, g2, f))
    res.below(f"{ch.orbit_id}: group-law defect", defect, _tol(tol, "group_law_affR"))
    # Lebesgue control: dilation f(y) -> f(y / 2), i.e. the element (1/2, 0)
    a = 2.0
    neg = unitarity_check(lambda h: closed_form_rep_affR(GroupElementAffR(1 / a, 0.0), h, sign), fs[:1],
                          measure="lebesgue")["max_drift"]
    res.below(f"{ch.orbit_id}: Lebesgue drift minus |a^(1/2) - 1| at a = 2", abs(neg - abs(math.sqrt(a) - 1)),
              _tol(tol, "negative_control"))
    res.details[f"{ch.orbit_id}/negative_control"] = {"a": a, "drift": neg, "expected": abs(math.sqrt(a) - 1)}


def cylinder_axes(line: int = 512, circle: int = 128) -> list[Axis]:
    return [Axis("s1", -8.0, 8.0, line), Axis("s2", 0.0, 2 * math.pi, circle, periodic=True)]


def seam_avoiding_packet(rng, axes: Sequence[Axis]) -> GridFunction:
    c1 = rng.uniform(-0.5, 0.5)
    c2 = math.pi + rng.uniform(-0.2, 0.2)
    k = rng.uniform(-1, 1)
    return GridFunction.sample(axes, lambda s1, s2: np.exp(-((s1 - c1) / 0.6) ** 2 / 2
                                                            - ((s2 - c2) / 0.35) ** 2 / 2 + 1j * k * s1))


def _representation_affC(res: SuiteResult, ch, seed, tol, dump_dir, precision):
    rng = np.random.default_rng(seed)
    alg = ch.algebra
    axes = cylinder_axes()
    fs = [seam_avoiding_packet(rng, axes) for _ in range(3)]
    if dump_dir is not None:
        fs[0].save(Path(dump_dir) / f"{_slug(ch.orbit_id)}_input.json", precision)
    seam = max(seam_mass(f) for f in fs)
    res.details[f"{ch.orbit_id}/seam_mass"] = seam

    def rand_elem():
        return GroupElementAffC(complex(*rng.uniform(-1, 1, 2)), complex(*rng.uniform(-1, 1, 2)))

    for theta in (0.0, 0.25, 0.7):
        rep = lambda g, h, th=theta: closed_form_rep_affC(th, g, h)
        defect = max(group_law_defect(rep, rand_elem(), rand_elem(), f) for f in fs)
        res.below(f"{ch.orbit_id}: group-law defect, theta = {theta}", defect, _tol(tol, "group_law_affC"))
        # circle shifts on grid multiples rotate exactly, so crossing the seam is exact
        step = 2 * math.pi / axes[1].count
        crossing = [GroupElementAffC(complex(rng.uniform(-1, 1), int(rng.integers(40, 120)) * step),
                                     complex(*rng.uniform(-1, 1, 2))) for _ in range(2)]
        seam_defect = max(group_law_defect(rep, crossing[0], crossing[1], f) for f in fs)
        res.below(f"{ch.orbit_id}: group-law defect across the seam, theta = {theta}", seam_defect,
                  _tol(tol, "group_law_affC"))
        g = rand_elem()
        drift = unitarity_check(lambda h: rep(g, h), fs, measure="product")["max_drift"]
        res.below(f"{ch.orbit_id}: norm drift, theta = {theta}", drift, _tol(tol, "unitarity"))
    worst = 0.0
    lie = 0.0
    for f in fs:
        # small circle displacement keeps the integer-part term zero on the support
        a = alg.element([rng.uniform(-1, 1), rng.uniform(-0.5, 0.5), rng.uniform(-1, 1), rng.uniform(-1, 1)])
        worst = max(worst, compare_exp_vs_closed_form_affC(a, f, 0.7, ch).sup_error)
        lie = max(lie, lie_derivative_check_affC(a, f, 0.25, ch))
    res.below(f"{ch.orbit_id}: flow vs T_theta away from the seam", worst, _tol(tol, "group_law_affC"))
    res.below(f"{ch.orbit_id}: Lie derivative of T_theta vs sheared operator", lie, _tol(tol, "group_law_affC"))


# structure suites -------------------------------------------------------------------

def suite_pbw(seed: int, words: int = 500, strategies: int = 20, max_len: int = 6) -> SuiteResult:
    res = SuiteResult("pbw")
    alg = catalog_algebra("aff_c")
    order = get_chart("affC:0").polarization.order
    rnd = random.Random(seed)
    mismatches = 0
    filtration = 0
    for n in range(words):
        w = tuple(rnd.randrange(alg.dim) for _ in range(rnd.randint(0, max_len)))
        e = UEElement(alg, {w: 1})
        ref = pbw_normal_form(e, order)
        text = ref.format()
        for s in range(strategies):
            if pbw_normal_form(e, order, "random", random.Random(rnd.getrandbits(64))).format() != text:
                mismatches += 1
        top = top_degree_part(ref)
        if top != UEElement(alg, {sorted_word(w, order): 1}):
            filtration += 1
    res.equal(f"aff_c: confluence over {strategies} strategies x {words} words", mismatches, 0)
    res.equal("aff_c: filtration (top part is the sorted word)", filtration, 0)
    return res


def suite_stratification(seed: int, samples: int = 10_000) -> SuiteResult:
    res = SuiteResult("stratification")
    for name, generic, zero_idx in (("aff_r", 2, (1,)), ("aff_c", 4, (2, 3))):
        alg = catalog_algebra(name)
        full = stratify(alg, {"kind": "uniform"}, samples, seed)
        expected = np.where(np.any(full.points[:, list(zero_idx)] != 0, axis=1), generic, 0)
        res.equal(f"{name}: generic samples have rank {generic}", int(np.sum(full.ranks != expected)), 0)
        zeroed = stratify(alg, {"kind": "uniform", "zero": list(zero_idx)}, samples, seed)
        res.equal(f"{name}: samples on the singular set have rank 0", int(np.sum(zeroed.ranks != 0)), 0)
        res.details[name] = {"generic": full.to_dict()["rank_histogram"],
                             "singular": zeroed.to_dict()["rank_histogram"]}
    return res


def suite_pukanszky(seed: int, samples: int = 1000) -> SuiteResult:
    res = SuiteResult("pukanszky")
    for cid in ("affR+", "affR-", "affC:0"):
        ch = get_chart(cid)
        rep = pukanszky_check(ch, ch.polarization, ch.base_point, samples, seed)
        res.equal(f"{cid}: membership failures over {samples} annihilator samples", rep.failures, 0)
        res.equal(f"{cid}: codim h = orbit dim / 2", rep.codim_h * 2, rep.orbit_dim)
        res.details[cid] = rep.to_dict()
    return res


SUITES = ("commutator", "pbw", "operator", "representation", "all")


def run_suite(name: str, seed: int, chart_id: str | None = None, grid: GridSpec | None = None,
              tol: dict | None = None, dump_dir: Path | None = None, precision: str = "complex128") -> list[SuiteResult]:
    """Run one CLI suite (``all`` runs every one) and return the results in a fixed order."""
    if name not in SUITES:
        raise ValueError(f"unknown suite {name!r}; expected one of {', '.join(SUITES)}")
    out = []
    if name in ("commutator", "all"):
        out.append(suite_commutator(seed, chart_id, tol=tol))
        out.append(suite_associativity(seed, chart_id, tol=tol))
        if chart_id is None:
            out.append(suite_contractions())
    if name in ("pbw", "all"):
        out.append(suite_pbw(seed))
    if name in ("operator", "all"):
        out.append(suite_operator(seed, chart_id, tol=tol))
        numeric_grid = grid if name == "operator" else None
        out.append(suite_operator_numeric(seed, chart_id, numeric_grid, tol=tol))
    if name in ("representation", "all"):
        out.append(suite_representation(seed, chart_id, grid, tol=tol, dump_dir=dump_dir, precision=precision))
    if name == "all":
        out.append(suite_stratification(seed))
        out.append(suite_pukanszky(seed))
    return out
