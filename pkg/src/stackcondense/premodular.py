"""Table-driven premodular categories for the SO(n)_1 and Spin(n)_1 families.

Only twists, fusion, central charge and squared quantum dimensions are
modelled; F- and R-symbols are not. The fermion ``f`` of Spin(n)_1 always has
twist 1/2.
"""

from __future__ import annotations

from collections import Counter
from dataclasses import dataclass, field
from fractions import Fraction
from itertools import permutations, product
from typing import Sequence

HALF = Fraction(1, 2)


class CategoryError(ValueError):
    pass


class NotCondensable(CategoryError):
    pass


class NonBoson(NotCondensable):
    pass


def _mod1(x) -> Fraction:
    return Fraction(x) % 1


def _mod8(x) -> Fraction:
    return Fraction(x) % 8


@dataclass(frozen=True)
class PremodularCategory:
    """``fusion[i][j]`` is the multiplicity vector of ``i x j`` over the simples."""

    label: str
    simples: tuple[str, ...]
    twists: tuple[Fraction, ...]
    fusion: tuple[tuple[tuple[int, ...], ...], ...]
    central_charge: Fraction
    dim_squares: tuple[Fraction, ...]

    def __post_init__(self):
        r = len(self.simples)
        object.__setattr__(self, "twists", tuple(_mod1(t) for t in self.twists))
        object.__setattr__(self, "central_charge", _mod8(self.central_charge))
        object.__setattr__(self, "dim_squares", tuple(Fraction(d) for d in self.dim_squares))
        if len(self.twists) != r or len(self.dim_squares) != r or len(self.fusion) != r:
            raise CategoryError("simples, twists, dims and fusion must have matching rank")
        if any(len(row) != r or any(len(v) != r for v in row) for row in self.fusion):
            raise CategoryError("fusion table has the wrong shape")

    @property
    def rank(self) -> int:
        return len(self.simples)

    def index(self, name: str) -> int:
        return self.simples.index(name)

    def fuse(self, i: int, j: int) -> Counter:
        return Counter({k: m for k, m in enumerate(self.fusion[i][j]) if m})

    def fuse_names(self, a: str, b: str) -> Counter:
        return Counter({self.simples[k]: m for k, m in self.fuse(self.index(a), self.index(b)).items()})

    def total_dim_squared(self) -> Fraction:
        return sum(self.dim_squares, Fraction(0))

    def dual(self, i: int) -> int:
        for j in range(self.rank):
            if self.fusion[i][j][0]:
                return j
        raise CategoryError(f"{self.simples[i]} has no dual")

    def is_invertible(self, i: int) -> bool:
        return self.dim_squares[i] == 1

    def axiom_failures(self) -> list[str]:
        """Unit, duals, commutativity and associativity of the fusion rules."""
        r = self.rank
        out = []
        for j in range(r):
            if self.fusion[0][j] != tuple(int(k == j) for k in range(r)):
                out.append(f"unit fails on {self.simples[j]}")
        for i in range(r):
            if not any(self.fusion[i][j][0] for j in range(r)):
                out.append(f"{self.simples[i]} has no dual")
            for j in range(r):
                if self.fusion[i][j] != self.fusion[j][i]:
                    out.append(f"fusion not commutative on ({self.simples[i]}, {self.simples[j]})")
        for a, b, c in product(range(r), repeat=3):
            left = [0] * r
            right = [0] * r
            for k, m in enumerate(self.fusion[a][b]):
                if m:
                    for l, n in enumerate(self.fusion[k][c]):
                        left[l] += m * n
            for k, m in enumerate(self.fusion[b][c]):
                if m:
                    for l, n in enumerate(self.fusion[a][k]):
                        right[l] += m * n
            if left != right:
                out.append(f"fusion not associative on {self.simples[a]}, {self.simples[b]}, {self.simples[c]}")
        if self.total_dim_squared() <= 0:
            out.append("total dimension is not positive")
        return out

    def to_json(self) -> dict:
        c = self.central_charge
        return {
            "label": self.label,
            "rank": self.rank,
            "simples": list(self.simples),
            "twists": [str(t) for t in self.twists],
            "fusion": [[list(v) for v in row] for row in self.fusion],
            "centralCharge": f"{c} mod 8",
            "dimSquares": [str(d) for d in self.dim_squares],
        }


def _group_fusion(elements: Sequence, op) -> tuple:
    """Fusion table of a pointed category with the given group law."""
    pos = {e: i for i, e in enumerate(elements)}
    r = len(elements)
    return tuple(
        tuple(tuple(int(k == pos[op(a, b)]) for k in range(r)) for b in elements) for a in elements
    )


def spin_category(n: int) -> PremodularCategory:
    n %= 16
    c = Fraction(n, 2)
    s = Fraction(n, 16)
    if n % 4 == 0:
        # 1, f, e, m as Z/2 x Z/2 with f = e m
        els = [(0, 0), (1, 1), (1, 0), (0, 1)]
        fusion = _group_fusion(els, lambda a, b: ((a[0] + b[0]) % 2, (a[1] + b[1]) % 2))
        return PremodularCategory(
            f"Spin({n})_1", ("1", "f", "e", "m"), (0, HALF, s, s), fusion, c, (1, 1, 1, 1)
        )
    if n % 4 == 2:
        # 1, f, a, abar as Z/4 with a = 1, f = 2, abar = 3
        fusion = _group_fusion([0, 2, 1, 3], lambda a, b: (a + b) % 4)
        return PremodularCategory(
            f"Spin({n})_1", ("1", "f", "a", "abar"), (0, HALF, s, s), fusion, c, (1, 1, 1, 1)
        )
    fusion = (
        ((1, 0, 0), (0, 1, 0), (0, 0, 1)),
        ((0, 1, 0), (1, 0, 0), (0, 0, 1)),
        ((0, 0, 1), (0, 0, 1), (1, 1, 0)),
    )
    return PremodularCategory(f"Spin({n})_1", ("1", "f", "sigma"), (0, HALF, s), fusion, c, (1, 1, 2))


def so_category(n: int) -> PremodularCategory:
    n %= 16
    fusion = _group_fusion([0, 1], lambda a, b: (a + b) % 2)
    return PremodularCategory(f"SO({n})_1", ("1", "psi"), (0, HALF), fusion, Fraction(n, 2), (1, 1))


def deligne_product(a: PremodularCategory, b: PremodularCategory) -> PremodularCategory:
    pairs = [(i, j) for i in range(a.rank) for j in range(b.rank)]
    rb = b.rank
    fusion = []
    for i1, j1 in pairs:
        row = []
        for i2, j2 in pairs:
            va, vb = a.fusion[i1][i2], b.fusion[j1][j2]
            row.append(tuple(va[k] * vb[l] for k, l in pairs))
        fusion.append(tuple(row))
    return PremodularCategory(
        f"{a.label} x {b.label}",
        tuple(f"{a.simples[i]}(x){b.simples[j]}" for i, j in pairs),
        tuple(a.twists[i] + b.twists[j] for i, j in pairs),
        tuple(fusion),
        a.central_charge + b.central_charge,
        tuple(a.dim_squares[i] * b.dim_squares[j] for i, j in pairs),
    )


@dataclass(frozen=True)
class AlgebraObject:
    summands: tuple[int, ...]

    @classmethod
    def unit_plus(cls, b: int) -> AlgebraObject:
        return cls((0, b))


@dataclass
class ModuleEntry:
    simple: int
    summands: tuple[int, ...]  # A (x) simple decomposed into simples
    local: bool


@dataclass
class Condensation:
    result: PremodularCategory
    modules: list[ModuleEntry]
    classes: list[tuple[int, ...]]  # local classes, as sets of ambient simples
    source: PremodularCategory = field(repr=False)

    def module_table(self) -> list[str]:
        s = self.source.simples
        out = []
        for m in self.modules:
            rhs = " + ".join(s[k] for k in m.summands)
            out.append(f"A (x) {s[m.simple]} = {rhs}  [{'local' if m.local else 'not local'}]")
        return out


def _boson(c: PremodularCategory, a: AlgebraObject) -> int:
    if len(a.summands) != 2 or 0 not in a.summands:
        raise NotCondensable("only algebras 1 + b are supported")
    b = max(a.summands)
    if b == 0:
        raise NotCondensable("algebra 1 + 1 is not condensable")
    if not c.is_invertible(b) or c.fusion[b][b][0] != 1:
        raise NotCondensable(f"{c.simples[b]} must be invertible with b x b = 1")
    if c.twists[b] != 0:
        raise NonBoson(f"{c.simples[b]} has twist {c.twists[b]}, not a boson")
    return b


def monodromy_phase(c: PremodularCategory, b: int, x: int) -> Fraction:
    """Double braiding of an invertible ``b`` with ``x``: theta(b x)/(theta_b theta_x), as a phase mod 1."""
    bx = next(iter(c.fuse(b, x)))
    return _mod1(c.twists[bx] - c.twists[b] - c.twists[x])


def condense_full(c: PremodularCategory, a: AlgebraObject) -> Condensation:
    """Local modules of ``A = 1 + b`` for an invertible boson ``b``.

    Free modules ``A (x) x`` and ``A (x) (b x)`` are identified; a class is local
    iff its two members have equal twist mod 1.
    """
    b = _boson(c, a)
    partner = []
    for x in range(c.rank):
        prod = c.fuse(b, x)
        (bx,) = prod.keys()
        if bx == x:
            raise NotCondensable(f"b fixes {c.simples[x]}; split modules are not supported")
        partner.append(bx)
    modules = []
    classes: list[tuple[int, ...]] = []
    seen: dict[int, int] = {}
    for x in range(c.rank):
        local = c.twists[partner[x]] == c.twists[x]
        modules.append(ModuleEntry(x, (x, partner[x]), local))
        if local and x not in seen:
            cls = (x, partner[x])
            seen[x] = seen[partner[x]] = len(classes)
            classes.append(cls)
    # fusion of free modules: (A x) (x)_A (A y) = A (x y)
    r = len(classes)
    fusion = []
    for cx in classes:
        row = []
        for cy in classes:
            vec = [0] * r
            for z, m in c.fuse(cx[0], cy[0]).items():
                if z not in seen:
                    raise AssertionError("local modules are not closed under fusion")
                vec[seen[z]] += m
            row.append(tuple(vec))
        fusion.append(tuple(row))
    names = tuple(c.simples[cx[0]] if cx[0] <= cx[1] else c.simples[cx[1]] for cx in classes)
    result = PremodularCategory(
        f"local modules of 1+{c.simples[b]} in {c.label}",
        names,
        tuple(c.twists[cx[0]] for cx in classes),
        tuple(fusion),
        c.central_charge,
        tuple(c.dim_squares[cx[0]] for cx in classes),
    )
    label = identify(result)
    if label != "unrecognized":
        result = PremodularCategory(
            label, result.simples, result.twists, result.fusion, result.central_charge, result.dim_squares
        )
    return Condensation(result, modules, classes, c)


def condense(c: PremodularCategory, a: AlgebraObject) -> PremodularCategory:
    return condense_full(c, a).result


def identify(c: PremodularCategory) -> str:
    """Match against SO(n)_1 and Spin(n)_1 up to relabeling of simples."""
    n = c.central_charge * 2
    if n.denominator != 1:
        return "unrecognized"
    n = int(n) % 16
    for ref in (so_category(n), spin_category(n)):
        if _isomorphic(c, ref):
            return ref.label
    return "unrecognized"


def _isomorphic(c: PremodularCategory, ref: PremodularCategory) -> bool:
    if c.rank != ref.rank or c.central_charge != ref.central_charge:
        return False
    if sorted(c.twists) != sorted(ref.twists) or sorted(c.dim_squares) != sorted(ref.dim_squares):
        return False
    r = c.rank
    for perm in permutations(range(1, r)):
        p = (0, *perm)  # c index i -> ref index p[i]
        if any(c.twists[i] != ref.twists[p[i]] or c.dim_squares[i] != ref.dim_squares[p[i]] for i in range(r)):
            continue
        ok = all(
            c.fusion[i][j][k] == ref.fusion[p[i]][p[j]][p[k]]
            for i in range(r)
            for j in range(r)
            for k in range(r)
        )
        if ok:
            return True
    return False


def parse_label(label: str) -> PremodularCategory:
    """``so:n`` or ``spin:n``."""
    kind, _, num = label.strip().lower().partition(":")
    try:
        n = int(num)
    except ValueError:
        raise CategoryError(f"bad category label {label!r}; expected so:n or spin:n") from None
    if kind == "so":
        return so_category(n)
    if kind == "spin":
        return spin_category(n)
    raise CategoryError(f"bad category label {label!r}; expected so:n or spin:n")


def stack_and_condense(n: int, m: int) -> Condensation:
    """Condense ``psi (x) f`` in SO(n)_1 (x) Spin(m)_1."""
    c = deligne_product(so_category(n), spin_category(m))
    b = c.index("psi(x)f")
    return condense_full(c, AlgebraObject.unit_plus(b))
