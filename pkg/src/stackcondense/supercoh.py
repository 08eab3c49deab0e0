"""Twisted supercohomology cocycles and the stack-and-condense shift.

A cocycle is ``(kappa; alpha, beta, gamma)`` on a bosonic group with

* ``d kappa = 0`` and ``d alpha = 0`` (degree 2, F2),
* ``d beta = alpha cup alpha + kappa cup alpha`` (degree 3, F2),
* ``d gamma = i(beta cup_1 beta + kappa cup beta) + f_kappa(alpha)`` (degree 4, Q/Z).

One stack-and-condense step sends ``alpha -> alpha + kappa`` and
``beta -> beta + kappa cup_1 alpha``. The correction ``f_kappa`` has no
closed form here; callers may inject one, otherwise it is assumed to vanish at
``alpha = 0`` (toggle with ``assume_f_vanishes_at_zero``) and is reported as
pending for ``alpha != 0``.
"""

from __future__ import annotations

from dataclasses import dataclass, field
from typing import Callable, Optional

from .cochains import (
    F2,
    QZ,
    Cochain,
    CochainError,
    Mismatch,
    cup,
    cup_i,
    differential,
    include,
)
from .cohomology import is_coboundary
from .groups import FiniteGroup

FKappa = Callable[[Cochain, Cochain], Cochain]  # (kappa, alpha) -> degree-5 Q/Z cochain


class InvalidInput(CochainError):
    pass


class NoReturnWithin4(RuntimeError):
    pass


@dataclass(frozen=True)
class SupercohCocycle:
    kappa: Cochain
    alpha: Cochain
    beta: Cochain
    gamma: Optional[Cochain] = None

    def __post_init__(self):
        g = self.kappa.group
        for name, c, deg, coeff in (
            ("kappa", self.kappa, 2, F2),
            ("alpha", self.alpha, 2, F2),
            ("beta", self.beta, 3, F2),
            ("gamma", self.gamma, 4, QZ),
        ):
            if c is None:
                continue
            if c.group != g:
                raise Mismatch(f"{name} lives on a different group")
            if c.degree != deg or c.coeff != coeff:
                raise Mismatch(f"{name} must be a degree-{deg} {coeff} cochain, got degree {c.degree} {c.coeff}")

    @property
    def group(self) -> FiniteGroup:
        return self.kappa.group

    @classmethod
    def trivial(cls, group: FiniteGroup, kappa: Cochain | None = None, with_gamma: bool = False):
        kappa = kappa if kappa is not None else Cochain.zero(group, 2)
        gamma = Cochain.zero(group, 4, QZ) if with_gamma else None
        return cls(kappa, Cochain.zero(group, 2), Cochain.zero(group, 3), gamma)


def gu_wen_obstruction(kappa: Cochain, alpha: Cochain) -> Cochain:
    """The cochain ``alpha cup alpha + kappa cup alpha`` that ``d beta`` must equal."""
    return cup(alpha, alpha) + cup(kappa, alpha)


def dw_source(kappa: Cochain, beta: Cochain) -> Cochain:
    """``beta cup_1 beta + kappa cup beta`` in F2 (degree 5)."""
    return cup_i(beta, beta, 1) + cup(kappa, beta)


@dataclass
class ValidationReport:
    kappa_closed: bool
    alpha_closed: bool
    beta_layer: bool
    gamma_layer: Optional[bool]  # None: no gamma, or pending f_kappa
    gamma_status: str  # "absent", "checked", "pending f_kappa(alpha)"

    @property
    def ab_valid(self) -> bool:
        return self.kappa_closed and self.alpha_closed and self.beta_layer

    @property
    def valid(self) -> bool:
        return self.ab_valid and self.gamma_layer is not False

    def failures(self) -> list[str]:
        out = []
        if not self.kappa_closed:
            out.append("kappa: d(kappa) != 0")
        if not self.alpha_closed:
            out.append("Majorana layer: d(alpha) != 0")
        if not self.beta_layer:
            out.append("Gu-Wen layer: d(beta) != alpha^2 + kappa alpha")
        if self.gamma_layer is False:
            out.append("Dijkgraaf-Witten layer: d(gamma) != i(beta cup_1 beta + kappa beta) + f_kappa(alpha)")
        return out

    def to_json(self) -> dict:
        return {
            "kappa_closed": self.kappa_closed,
            "alpha_closed": self.alpha_closed,
            "beta_layer": self.beta_layer,
            "gamma_layer": self.gamma_layer,
            "gamma_status": self.gamma_status,
        }


def validate_cocycle(
    c: SupercohCocycle,
    f_kappa: FKappa | None = None,
    assume_f_vanishes_at_zero: bool = True,
) -> ValidationReport:
    kappa_ok = differential(c.kappa).is_zero()
    alpha_ok = differential(c.alpha).is_zero()
    beta_ok = differential(c.beta) == gu_wen_obstruction(c.kappa, c.alpha)
    if c.gamma is None:
        return ValidationReport(kappa_ok, alpha_ok, beta_ok, None, "absent")
    target = include(dw_source(c.kappa, c.beta))
    if f_kappa is not None:
        target = target + f_kappa(c.kappa, c.alpha)
    elif not (c.alpha.is_zero() and assume_f_vanishes_at_zero):
        return ValidationReport(kappa_ok, alpha_ok, beta_ok, None, "pending f_kappa(alpha)")
    return ValidationReport(kappa_ok, alpha_ok, beta_ok, differential(c.gamma) == target, "checked")


def shift_once(c: SupercohCocycle, check: bool = True) -> SupercohCocycle:
    """One stack-and-condense step on the (alpha, beta) layers; gamma is carried unchanged.

    The gamma layer is not claimed valid afterwards: see :func:`gamma_constraint`.
    """
    if check:
        rep = validate_cocycle(c)
        if not rep.ab_valid:
            raise InvalidInput("; ".join(rep.failures()))
    alpha = c.alpha + c.kappa
    beta = c.beta + cup_i(c.kappa, c.alpha, 1)
    out = SupercohCocycle(c.kappa, alpha, beta, c.gamma)
    if check and differential(out.beta) != gu_wen_obstruction(out.kappa, out.alpha):
        raise AssertionError("shift broke d(beta') = alpha'^2 + kappa alpha'")
    return out


@dataclass
class ShiftOrbit:
    states: list[SupercohCocycle]
    period: int
    checks: dict = field(default_factory=dict)


def orbit_period(c: SupercohCocycle) -> ShiftOrbit:
    """Iterate the shift up to four times and report the exact return period."""
    rep = validate_cocycle(c)
    if not rep.ab_valid:
        raise InvalidInput("; ".join(rep.failures()))
    states = [c]
    for _ in range(4):
        states.append(shift_once(states[-1], check=False))
    checks = {
        "validity_preserved": all(
            differential(s.beta) == gu_wen_obstruction(s.kappa, s.alpha) for s in states
        ),
        "alpha_two_step": states[2].alpha == c.alpha,
        "beta_two_step": states[2].beta == c.beta + cup_i(c.kappa, c.kappa, 1),
        "beta_four_step": states[4].beta == c.beta,
    }
    if not all(checks.values()):
        failed = [k for k, v in checks.items() if not v]
        raise AssertionError(f"shift identities failed: {failed}")
    for p in (1, 2, 4):
        if states[p].alpha == c.alpha and states[p].beta == c.beta:
            return ShiftOrbit(states[: p + 1], p, checks)
    raise NoReturnWithin4("no exact return within four shifts")


def predicted_period(group: FiniteGroup, kappa) -> int:
    """1 if [kappa] = 0, else 2 if Sq^1[kappa] = 0, else 4."""
    k = getattr(kappa, "representative", kappa)
    if k.group != group:
        raise Mismatch("kappa lives on a different group")
    if is_coboundary(k) is not None:
        return 1
    if is_coboundary(cup_i(k, k, 1)) is not None:
        return 2
    return 4


@dataclass
class GammaConstraint:
    iterations: int
    required: Cochain  # i(beta^(k) cup_1 beta^(k) + kappa beta^(k)), degree 5 Q/Z
    f_kappa_pending: bool  # the f_kappa(alpha^(k)) term is not included
    alpha: Cochain


def gamma_constraint(c: SupercohCocycle, iterations: int) -> GammaConstraint:
    if iterations < 0:
        raise InvalidInput("iterations must be nonnegative")
    rep = validate_cocycle(c)
    if not rep.ab_valid:
        raise InvalidInput("; ".join(rep.failures()))
    s = c
    for _ in range(iterations):
        s = shift_once(s, check=False)
    return GammaConstraint(
        iterations, include(dw_source(s.kappa, s.beta)), not s.alpha.is_zero(), s.alpha
    )


def gu_wen_solutions(kappa: Cochain, alpha: Cochain) -> Cochain | None:
    """A particular beta with ``d beta = alpha^2 + kappa alpha``, if one exists."""
    return is_coboundary(gu_wen_obstruction(kappa, alpha))
