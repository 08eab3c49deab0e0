"""Which Spin(n)_1 theories couple to a spin-G_f background (G_b, kappa).

For each n mod 16 we look for a closed ``n1`` in C^1 and ``n2`` in C^2 (both F_2)
solving ``d n2 = n1 kappa + c Sq^1 kappa`` with ``c = (n // 2) mod 2``.
"""

from __future__ import annotations

from dataclasses import dataclass, field

from .cochains import Cochain, CochainError, CohomologyClass, NotClosed, cup, cup_i, differential, _rep
from .cohomology import degree1_basis, enumerate_classes, is_coboundary, reduced_kappa
from .groups import FiniteGroup
from .supercoh import InvalidInput, SupercohCocycle, orbit_period, predicted_period

MOD = 16
H1_CAP = 20


class H1TooLarge(CochainError):
    pass


def sq1_coefficient(n: int) -> int:
    return (n % MOD // 2) % 2


@dataclass
class Verdict:
    n: int
    feasible: bool
    rule: str
    n1: Cochain | None = None
    n2: Cochain | None = None

    def to_json(self) -> dict:
        from .io import cochain_to_json

        out = {"n": self.n, "feasible": self.feasible, "rule": self.rule}
        if self.feasible:
            out["n1"] = cochain_to_json(self.n1)
            out["n2"] = cochain_to_json(self.n2)
        return out


def _kappa(kappa) -> Cochain:
    k = _rep(kappa)
    if k.degree != 2 or k.coeff != "f2":
        raise InvalidInput("kappa must be a degree-2 F_2 cochain")
    if not differential(k).is_zero():
        raise NotClosed("kappa is not closed")
    return k


def check_witness(kappa, n: int, n1: Cochain, n2: Cochain) -> bool:
    """Bit-exact check of ``d n1 = 0`` and ``d n2 = n1 kappa + c Sq^1 kappa``."""
    k = _kappa(kappa)
    if not differential(n1).is_zero():
        return False
    rhs = cup(n1, k)
    if sq1_coefficient(n):
        rhs = rhs + cup_i(k, k, 1)
    return differential(n2) == rhs


def feasible(g: FiniteGroup, kappa, n: int) -> Verdict:
    k = _kappa(kappa)
    if k.group != g:
        raise InvalidInput("kappa lives on a different group")
    n %= MOD
    c = sq1_coefficient(n)
    zero1 = Cochain.zero(g, 1)
    trivial = is_coboundary(k) is not None
    if trivial:
        # Sq^1 of a coboundary is a coboundary, so n1 = 0 always works
        rhs = cup_i(k, k, 1) if c else Cochain.zero(g, 3)
        n2 = is_coboundary(rhs)
        if n2 is None:
            raise AssertionError("Sq^1 of a trivial class was not a coboundary")
        v = Verdict(n, True, "trivial-kappa", zero1, n2)
    elif n % 2:
        v = Verdict(n, False, "odd-n")
    elif n % 4 == 0:
        v = Verdict(n, True, "n-0-mod-4", zero1, Cochain.zero(g, 2))
    else:
        v = _search_n1(g, k, n)
    if v.feasible and not check_witness(k, n, v.n1, v.n2):
        raise AssertionError(f"witness for n={n} failed verification")
    return v


def _search_n1(g: FiniteGroup, k: Cochain, n: int) -> Verdict:
    basis = degree1_basis(g)
    if len(basis) > H1_CAP:
        raise H1TooLarge(f"dim H^1 = {len(basis)} exceeds the enumeration cap {H1_CAP}")
    sq1 = cup_i(k, k, 1)
    for _, n1 in enumerate_classes(basis, g, 1):
        n2 = is_coboundary(cup(n1, k) + sq1)
        if n2 is not None:
            return Verdict(n, True, "n-2-mod-4", n1, n2)
    return Verdict(n, False, "n-2-mod-4")


def consistent_set(g: FiniteGroup, kappa) -> list[int]:
    out = [n for n in range(MOD) if feasible(g, kappa, n).feasible]
    if not is_subgroup(out):
        raise AssertionError(f"feasible set {out} is not a subgroup of Z/16")
    return out


def is_subgroup(ns) -> bool:
    s = set(ns)
    return 0 in s and all((a + b) % MOD in s for a in s for b in s)


@dataclass(frozen=True)
class Subgroup:
    generator: int
    order: int

    def elements(self) -> list[int]:
        return sorted({self.generator * i % MOD for i in range(MOD)})

    def to_json(self) -> dict:
        return {"generator": self.generator, "order": self.order}


def subgroup_of(ns) -> Subgroup:
    s = sorted(set(ns))
    if not is_subgroup(s):
        raise ValueError(f"{s} is not a subgroup of Z/16")
    gen = min((x for x in s if x), default=0)
    return Subgroup(gen, len(s))


def image_of_F(g: FiniteGroup, kappa) -> Subgroup:
    return subgroup_of(consistent_set(g, kappa))


@dataclass
class CrossCheck:
    consistent: list[int]
    period: int
    divisibility: list[int]
    orbit_periods: list[int] = field(default_factory=list)

    @property
    def period_match(self) -> bool:
        return self.consistent == self.divisibility

    @property
    def orbit_match(self) -> bool:
        return all(p == self.period for p in self.orbit_periods)

    @property
    def passed(self) -> bool:
        return self.period_match and self.orbit_match

    def to_json(self) -> dict:
        return {
            "pass": self.passed,
            "predictedPeriod": self.period,
            "divisibilitySet": self.divisibility,
            "periodMatch": self.period_match,
            "orbitPeriods": self.orbit_periods,
            "orbitMatch": self.orbit_match,
        }


def orbit_family(g: FiniteGroup, kappa: Cochain) -> list[SupercohCocycle]:
    """Small family of valid (alpha, beta) over a period-faithful kappa representative."""
    k = reduced_kappa(kappa)
    fam = []
    for a in (Cochain.zero(g, 2), k):
        b = is_coboundary(cup(a, a) + cup(k, a))
        if b is not None:
            fam.append(SupercohCocycle(k, a, b))
    return fam


def crosscheck_theoremB(g: FiniteGroup, kappa, orbits: bool | None = None) -> CrossCheck:
    k = _kappa(kappa)
    cs = consistent_set(g, k)
    p = predicted_period(g, k)
    div = [n for n in range(MOD) if n % p == 0]
    if orbits is None:
        orbits = g.order <= 8
    periods = [orbit_period(c).period for c in orbit_family(g, k)] if orbits else []
    return CrossCheck(cs, p, div, periods)


@dataclass
class ConsistencyReport:
    group: FiniteGroup
    kappa_label: str
    verdicts: list[Verdict]
    subgroup: Subgroup
    crosscheck: CrossCheck

    def feasible_set(self) -> list[int]:
        return [v.n for v in self.verdicts if v.feasible]

    def to_json(self) -> dict:
        return {
            "group": self.group.name or self.group.key,
            "kappa": self.kappa_label,
            "verdicts": [v.to_json() for v in self.verdicts],
            "subgroup": self.subgroup.to_json(),
            "theoremB": self.crosscheck.to_json(),
        }


def consistency_report(g: FiniteGroup, kappa, label: str = "") -> ConsistencyReport:
    k = _kappa(kappa)
    verdicts = [feasible(g, k, n) for n in range(MOD)]
    fs = [v.n for v in verdicts if v.feasible]
    if not is_subgroup(fs):
        raise AssertionError(f"feasible set {fs} is not a subgroup of Z/16")
    return ConsistencyReport(g, label, verdicts, subgroup_of(fs), crosscheck_theoremB(g, k))
