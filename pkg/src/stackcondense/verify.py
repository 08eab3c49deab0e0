"""Self-verification suites behind ``stackcondense verify``.

``paper`` runs the full acceptance checks; ``properties`` runs only the
randomized algebraic identities. Every check is exact.
"""

from __future__ import annotations

import contextlib
import time
from dataclasses import dataclass
from fractions import Fraction
from typing import Callable, Iterator

import numpy as np

from . import cochains, linalg
from .cochains import (
    Cochain,
    bockstein,
    cup,
    cup_i,
    differential,
    steenrod_sq,
)
from .cohomology import (
    cohomologous,
    cohomology_basis,
    cohomology_dim,
    default_h2_basis,
    degree1_basis,
    enumerate_classes,
    is_coboundary,
    named_classes,
    reduced_kappa,
)
from .groups import PRESET_NAMES, FiniteGroup, preset
from .premodular import AlgebraObject, condense_full, deligne_product, so_category, spin_category
from .spinflow import consistent_set, crosscheck_theoremB, is_subgroup
from .supercoh import SupercohCocycle, gu_wen_obstruction, gu_wen_solutions, orbit_period, predicted_period

SMALL = tuple(n for n in PRESET_NAMES if n != "s4")


@dataclass
class CheckResult:
    name: str
    passed: bool
    detail: str = ""
    seconds: float = 0.0

    def line(self) -> str:
        return f"{'pass' if self.passed else 'FAIL'}  {self.name}  ({self.seconds:.2f}s){'  ' + self.detail if self.detail else ''}"

    def to_json(self) -> dict:
        return {"name": self.name, "pass": self.passed, "detail": self.detail}


# ---------------------------------------------------------------- test matrix

def kappa_matrix(g: FiniteGroup) -> list[tuple[str, Cochain]]:
    """Every H^2 class for small groups; the four named classes for larger ones."""
    if g.order <= 8:
        return [(f"class:{m}", k) for m, k in enumerate_classes(default_h2_basis(g), g, 2)]
    nc = named_classes(g)
    keys = [k for k in ("0", "x^2", "y", "y+x^2") if k in nc]
    return [(k, nc[k]) for k in keys]


def spanning_family(g: FiniteGroup, kappa: Cochain, rng: np.random.Generator) -> list[SupercohCocycle]:
    """Valid (alpha, beta) over a period-faithful representative of ``kappa``.

    For small groups alpha ranges over all H^2 class representatives and beta over
    a particular solution plus H^3 representatives and a random coboundary. For
    larger groups the degree-4 solve is out of budget, so alpha is 0 or kappa,
    where beta = 0 solves the Gu-Wen equation exactly.
    """
    k = reduced_kappa(kappa)
    if g.order <= 8:
        alphas = [a for _, a in enumerate_classes(default_h2_basis(g), g, 2)] + [k]
        h3 = cohomology_basis(g, 3)
    else:
        alphas = [Cochain.zero(g, 2), k]
        h3 = []
    fam = []
    for a in alphas:
        if g.order <= 8:
            b0 = gu_wen_solutions(k, a)
        else:
            # skip the degree-5 closedness test: the obstruction is zero on the nose here
            b0 = Cochain.zero(g, 3) if gu_wen_obstruction(k, a).is_zero() else None
        if b0 is None:
            continue
        noise = differential(Cochain.random(g, 2, rng))
        for b in [b0, b0 + noise, *(b0 + z for z in h3)]:
            fam.append(SupercohCocycle(k, a, b))
    return fam


# ---------------------------------------------------------------- criteria

def _orbits(groups, rng) -> Iterator[tuple[str, str, int, object]]:
    for name in groups:
        g = preset(name)
        for label, k in kappa_matrix(g):
            pred = predicted_period(g, k)
            for c in spanning_family(g, k, rng):
                yield name, label, pred, c


def check_trichotomy(rng) -> CheckResult:
    bad = []
    for name, label, pred, c in _orbits(PRESET_NAMES, rng):
        p = orbit_period(c).period
        if p != pred:
            bad.append(f"{name} {label}: period {p}, predicted {pred}")
    g = preset("z2")
    if predicted_period(g, named_classes(g)["x^2"]) != 2:
        bad.append("z2 x^2 not predicted 2")
    s4 = preset("s4")
    for key in ("y", "y+x^2"):
        if predicted_period(s4, named_classes(s4)[key]) != 4:
            bad.append(f"s4 {key} not predicted 4")
    for name in PRESET_NAMES:
        g = preset(name)
        if predicted_period(g, Cochain.zero(g, 2)) != 1:
            bad.append(f"{name} kappa=0 not predicted 1")
    return CheckResult("shift period trichotomy 1/2/4", not bad, "; ".join(bad[:5]))


def check_shift_identities(rng) -> CheckResult:
    bad = []
    for name, label, _, c in _orbits(PRESET_NAMES, rng):
        try:
            orbit_period(c)
        except AssertionError as e:
            bad.append(f"{name} {label}: {e}")
    return CheckResult("shift identities (validity, two-step, four-step)", not bad, "; ".join(bad[:5]))


def check_condensation() -> CheckResult:
    bad = []
    for n in range(16):
        for m in range(16):
            c = deligne_product(so_category(n), spin_category(m))
            r = condense_full(c, AlgebraObject.unit_plus(c.index("psi(x)f")))
            out = r.result
            if out.label != f"SO({(n + m) % 16})_1":
                bad.append(f"({n},{m}) -> {out.label}")
            if out.central_charge != Fraction(n + m, 2) % 8:
                bad.append(f"({n},{m}) central charge {out.central_charge}")
            if out.total_dim_squared() * 4 != c.total_dim_squared():
                bad.append(f"({n},{m}) total dimension")
    c = deligne_product(so_category(1), spin_category(1))
    lines = condense_full(c, AlgebraObject.unit_plus(c.index("psi(x)f"))).module_table()
    expected = {
        "A (x) psi(x)1 = psi(x)1 + 1(x)f  [local]",
        "A (x) 1(x)sigma = 1(x)sigma + psi(x)sigma  [not local]",
    }
    if not expected <= set(lines):
        bad.append("n=m=1 module table")
    return CheckResult("condensation SO(n)_1 x Spin(m)_1 -> SO(n+m)_1", not bad, "; ".join(bad[:5]))


def check_consistency_numbers() -> CheckResult:
    bad = []
    z2 = preset("z2")
    nz = named_classes(z2)
    if len(consistent_set(z2, nz["x^2"])) != 8:
        bad.append("z2 x^2 order != 8")
    if len(consistent_set(z2, nz["0"])) != 16:
        bad.append("z2 0 order != 16")
    s4 = preset("s4")
    ns = named_classes(s4)
    if consistent_set(s4, ns["y"]) != [0, 4, 8, 12]:
        bad.append("s4 y != {0,4,8,12}")
    for name in PRESET_NAMES:
        g = preset(name)
        for label, k in kappa_matrix(g):
            if is_coboundary(k) is None and any(n % 2 for n in consistent_set(g, k)):
                bad.append(f"{name} {label}: odd n feasible")
    return CheckResult("consistency solver numbers", not bad, "; ".join(bad[:5]))


def check_period_crosscheck() -> CheckResult:
    bad = []
    for name in PRESET_NAMES:
        g = preset(name)
        for label, k in kappa_matrix(g):
            cc = crosscheck_theoremB(g, k)
            if not is_subgroup(cc.consistent):
                bad.append(f"{name} {label}: not a subgroup")
            if not cc.passed:
                bad.append(f"{name} {label}: solver {cc.consistent} vs period {cc.period}")
    return CheckResult("consistency set equals period divisibility set", not bad, "; ".join(bad))


def check_ring() -> CheckResult:
    bad = []
    z2 = preset("z2")
    if [cohomology_dim(z2, n) for n in range(6)] != [1] * 6:
        bad.append("H^*(Z/2) dims")
    z4 = preset("z4")
    x = degree1_basis(z4)[0]
    if cohomology_dim(z4, 2) != 1 or is_coboundary(cup(x, x)) is None:
        bad.append("Z/4 degree 2")
    s4 = preset("s4")
    if cohomology_dim(s4, 2) != 2:
        bad.append("dim H^2(S4)")
    nc = named_classes(s4)
    y, x = nc["y"], nc["x"]
    sq1y = steenrod_sq(1, y).representative
    if is_coboundary(sq1y) is not None:
        bad.append("Sq^1 y = 0")
    if is_coboundary(cup(x, y) + sq1y) is not None:
        bad.append("x y + Sq^1 y trivial")
    return CheckResult("cohomology ring spot checks", not bad, "; ".join(bad))


def check_dd(rng) -> CheckResult:
    bad = []
    for name in SMALL:
        g = preset(name)
        for n in range(5):
            c = Cochain.random(g, n, rng)
            if not differential(differential(c)).is_zero():
                bad.append(f"{name} degree {n}")
            q = Cochain.random(g, n, rng, cochains.QZ, 12)
            if not differential(differential(q)).is_zero():
                bad.append(f"{name} degree {n} qz")
    return CheckResult("d o d = 0", not bad, "; ".join(bad))


def check_leibniz(rng) -> CheckResult:
    bad = []
    for name in SMALL:
        g = preset(name)
        for p, q in ((0, 1), (1, 1), (1, 2), (2, 1), (2, 2)):
            for _ in range(5):
                u, v = Cochain.random(g, p, rng), Cochain.random(g, q, rng)
                if differential(cup(u, v)) != cup(differential(u), v) + cup(u, differential(v)):
                    bad.append(f"{name} ({p},{q})")
    return CheckResult("Leibniz rule for cup", not bad, "; ".join(bad[:5]))


def check_cup1(rng, pairs: int = 500) -> CheckResult:
    bad = []
    degrees = ((1, 1), (1, 2), (2, 1), (2, 2))
    for name in SMALL:
        g = preset(name)
        fails = 0
        for t in range(pairs):
            p, q = degrees[t % len(degrees)]
            u, v = Cochain.random(g, p, rng), Cochain.random(g, q, rng)
            lhs = differential(cup_i(u, v, 1))
            rhs = cup_i(differential(u), v, 1) + cup_i(u, differential(v), 1) + cup(u, v) + cup(v, u)
            if lhs != rhs:
                fails += 1
        if fails:
            bad.append(f"{name}: {fails}/{pairs} pairs")
    return CheckResult(CUP1, not bad, "; ".join(bad))


def check_bockstein() -> CheckResult:
    bad = []
    for name in SMALL:
        g = preset(name)
        for n in (1, 2):
            for z in cohomology_basis(g, n):
                if not cohomologous(bockstein(z).representative, steenrod_sq(1, z).representative):
                    bad.append(f"{name} degree {n}")
    return CheckResult("Bockstein agrees with Sq^1", not bad, "; ".join(bad))


def naive_rank(m: np.ndarray) -> int:
    m = m.copy() % 2
    r = 0
    for c in range(m.shape[1]):
        piv = next((i for i in range(r, m.shape[0]) if m[i, c]), None)
        if piv is None:
            continue
        m[[r, piv]] = m[[piv, r]]
        for i in range(m.shape[0]):
            if i != r and m[i, c]:
                m[i] ^= m[r]
        r += 1
    return r


def check_linalg(rng, systems: int = 1000) -> CheckResult:
    bad = 0
    for _ in range(systems):
        r, c = rng.integers(1, 65, size=2)
        a = (rng.random((r, c)) < rng.uniform(0.05, 0.6)).astype(np.uint8)
        b = rng.integers(0, 2, r, dtype=np.uint8)
        m = linalg.F2Matrix.from_bits(a)
        rk = linalg.rank(m)
        solvable = naive_rank(np.column_stack([a, b])) == naive_rank(a)
        x = linalg.solve(m, linalg.F2Vector.from_bits(b))
        ok = rk == naive_rank(a) and (x is not None) == solvable
        if x is not None:
            ok &= np.array_equal(a.astype(np.int64) @ x.to_bits() % 2, b)
        kb = linalg.kernel_basis(m)
        ok &= len(kb) == c - rk and all(not np.any(a.astype(np.int64) @ v.to_bits() % 2) for v in kb)
        bad += not ok
    return CheckResult("bit-packed linear algebra vs naive oracle", not bad, f"{bad}/{systems} mismatched" if bad else "")


# ---------------------------------------------------------------- suites

CUP1 = "cup-1 coboundary identity"


def _timed(name: str, fn: Callable[[], CheckResult]) -> CheckResult:
    t = time.perf_counter()
    try:
        r = fn()
    except Exception as e:  # a crash inside a check is a failed check, not a crash of the suite
        r = CheckResult(name, False, f"raised {type(e).__name__}: {e}")
    r.seconds = time.perf_counter() - t
    return r


def property_checks(seed: int) -> list[tuple[str, Callable[[], CheckResult]]]:
    rng = np.random.default_rng(seed)
    return [
        ("d o d = 0", lambda: check_dd(rng)),
        ("Leibniz rule for cup", lambda: check_leibniz(rng)),
        (CUP1, lambda: check_cup1(rng)),
        ("Bockstein agrees with Sq^1", check_bockstein),
        ("bit-packed linear algebra vs naive oracle", lambda: check_linalg(rng)),
    ]


def paper_checks(seed: int) -> list[tuple[str, Callable[[], CheckResult]]]:
    rng = np.random.default_rng(seed)
    return [
        ("shift period trichotomy 1/2/4", lambda: check_trichotomy(rng)),
        ("shift identities (validity, two-step, four-step)", lambda: check_shift_identities(rng)),
        ("condensation SO(n)_1 x Spin(m)_1 -> SO(n+m)_1", check_condensation),
        ("consistency solver numbers", check_consistency_numbers),
        ("consistency set equals period divisibility set", check_period_crosscheck),
        ("cohomology ring spot checks", check_ring),
        *property_checks(seed),
    ]


SUITES = {"paper": paper_checks, "properties": property_checks}


def run_suite(name: str, seed: int = 0) -> list[CheckResult]:
    if name not in SUITES:
        raise ValueError(f"unknown suite {name!r}; choose from {sorted(SUITES)}")
    return [_timed(label, fn) for label, fn in SUITES[name](seed)]


@contextlib.contextmanager
def injected_fault(kind: str):
    """Temporarily break a primitive so the suite can prove it notices."""
    if kind != "cup1":
        raise ValueError(f"unknown fault {kind!r}")
    original = cochains.cup_i_terms

    def broken(p, q, i):
        terms = original(p, q, i)
        return terms[:-1] if i == 1 and len(terms) > 1 else terms

    cochains.cup_i_terms = broken
    try:
        yield
    finally:
        cochains.cup_i_terms = original
