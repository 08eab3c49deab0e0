"""Normalized bar-complex cochains on BG.

A degree-n cochain is stored as a dense vector over the tuples
``(g1, ..., gn)`` of non-identity elements, in lexicographic order of the
element indices; degree 0 holds a single value. Tuples containing the identity
are degenerate simplices of the nerve and the cochain vanishes on them.

Evaluation on faces: an n-simplex ``(g1, ..., gn)`` has vertices
``P0 = e, Pj = g1 ... gj``; the face on vertices ``v0 < ... < vk`` is the tuple
``(P[v0]^-1 P[v1], ..., P[v(k-1)]^-1 P[vk])``.

Cup-i convention: for ``u`` of degree p, ``v`` of degree q and
``n = p + q - i``, ``(u cup_i v)(0..n)`` sums, over ``0 <= j0 < ... < ji <= n``,
``u`` on the union of the even intervals of ``[0,j0], [j0,j1], ..., [ji,n]``
times ``v`` on the union of the odd ones, keeping only terms whose vertex counts
are ``p + 1`` and ``q + 1``. With this convention
``d(u cup_i v) = du cup_i v + u cup_i dv + u cup_(i-1) v + v cup_(i-1) u`` mod 2.
"""

from __future__ import annotations

import itertools
import threading
from dataclasses import dataclass
from fractions import Fraction
from typing import Sequence

import numpy as np

from .groups import FiniteGroup
from .linalg import F2Vector, QmodZVector

F2 = "f2"
QZ = "qz"


class CochainError(ValueError):
    pass


class GroupMismatch(CochainError):
    pass


class UnsupportedCoefficients(CochainError):
    pass


class DegreeTooSmall(CochainError):
    pass


class NotClosed(CochainError):
    pass


class Mismatch(CochainError):
    pass


# ---------------------------------------------------------------- simplices

_cache: dict[tuple[str, int], tuple[np.ndarray, np.ndarray]] = {}
_cache_lock = threading.Lock()


def dim_cochains(group: FiniteGroup, n: int) -> int:
    return (group.order - 1) ** n


def simplices(group: FiniteGroup, n: int) -> tuple[np.ndarray, np.ndarray]:
    """All non-degenerate n-simplices and their vertex prefix products.

    Returns ``(tuples, prefix)`` of shapes ``(count, n)`` and ``(count, n+1)``.
    """
    key = (group.key, n)
    with _cache_lock:
        hit = _cache.get(key)
    if hit is not None:
        return hit
    m = group.order - 1
    count = m**n
    dtype = np.int16 if group.order < 2**15 else np.int32
    idx = np.arange(count, dtype=np.int64)
    tuples = np.empty((count, n), dtype=dtype)
    for pos in range(n - 1, -1, -1):
        tuples[:, pos] = idx % m + 1
        idx //= m
    prefix = np.zeros((count, n + 1), dtype=dtype)
    for pos in range(n):
        prefix[:, pos + 1] = group.table[prefix[:, pos], tuples[:, pos]]
    tuples.setflags(write=False)
    prefix.setflags(write=False)
    with _cache_lock:
        _cache.setdefault(key, (tuples, prefix))
        return _cache[key]


def clear_cache() -> None:
    with _cache_lock:
        _cache.clear()
        _faces.clear()


def face_index(group: FiniteGroup, prefix: np.ndarray, verts: Sequence[int]) -> np.ndarray:
    """Index into the degree ``len(verts)-1`` cochain vector of each face; -1 if degenerate."""
    k = len(verts) - 1
    m = group.order - 1
    out = np.zeros(prefix.shape[0], dtype=np.int64)
    ok = np.ones(prefix.shape[0], dtype=bool)
    inv = group.inverse
    table = group.table
    for a, b in zip(verts[:-1], verts[1:]):
        h = table[inv[prefix[:, a]], prefix[:, b]]
        ok &= h != 0
        out = out * m + (h - 1)
    if k == 0:
        return out
    out[~ok] = -1
    return out


_FACE_CACHE_ROWS = 1 << 19  # larger complexes recompute faces instead of holding them
_faces: dict[tuple[str, int, tuple[int, ...]], np.ndarray] = {}


def faces(group: FiniteGroup, n: int, verts: Sequence[int]) -> np.ndarray:
    """Memoized ``face_index`` over the n-simplices of ``group``."""
    key = (group.key, n, tuple(verts))
    with _cache_lock:
        hit = _faces.get(key)
    if hit is not None:
        return hit
    _, prefix = simplices(group, n)
    idx = face_index(group, prefix, verts)
    if prefix.shape[0] <= _FACE_CACHE_ROWS:
        idx.setflags(write=False)
        with _cache_lock:
            _faces.setdefault(key, idx)
    return idx


def tuple_index(group: FiniteGroup, tup: Sequence[int]) -> int:
    m = group.order - 1
    i = 0
    for g in tup:
        if not 1 <= g <= m:
            raise CochainError(f"tuple {tuple(tup)} contains the identity or an invalid element")
        i = i * m + (g - 1)
    return i


# ---------------------------------------------------------------- cochains

@dataclass(frozen=True, eq=False)
class Cochain:
    """Normalized cochain; ``values`` is a uint8 0/1 array (F2) or a QmodZVector (Q/Z)."""

    group: FiniteGroup
    degree: int
    values: object
    coeff: str = F2

    def __post_init__(self):
        n = dim_cochains(self.group, self.degree)
        if self.coeff == F2:
            vals = np.asarray(self.values, dtype=np.uint8) & 1
            if vals.shape != (n,):
                raise CochainError(f"expected {n} values for degree {self.degree}, got {vals.shape}")
            vals.setflags(write=False)
            object.__setattr__(self, "values", vals)
        elif self.coeff == QZ:
            vals = self.values
            if not isinstance(vals, QmodZVector):
                vals = QmodZVector.from_values(vals)
            if len(vals) != n:
                raise CochainError(f"expected {n} values for degree {self.degree}, got {len(vals)}")
            object.__setattr__(self, "values", vals)
        else:
            raise CochainError(f"unknown coefficients {self.coeff!r}")

    # constructors
    @classmethod
    def zero(cls, group: FiniteGroup, degree: int, coeff: str = F2) -> Cochain:
        n = dim_cochains(group, degree)
        if coeff == F2:
            return cls(group, degree, np.zeros(n, dtype=np.uint8))
        return cls(group, degree, QmodZVector.zeros(n), QZ)

    @classmethod
    def constant(cls, group: FiniteGroup, value=1, coeff: str = F2) -> Cochain:
        if coeff == F2:
            return cls(group, 0, np.array([value], dtype=np.uint8))
        return cls(group, 0, QmodZVector.from_values([value]), QZ)

    @classmethod
    def from_function(cls, group: FiniteGroup, degree: int, fn, coeff: str = F2) -> Cochain:
        """Evaluate ``fn(*tuple)`` on every non-degenerate tuple."""
        tuples, _ = simplices(group, degree)
        vals = [fn(*map(int, t)) for t in tuples]
        if coeff == F2:
            return cls(group, degree, np.array(vals, dtype=np.uint8) & 1)
        return cls(group, degree, QmodZVector.from_values(vals), QZ)

    @classmethod
    def from_vector(cls, group: FiniteGroup, degree: int, vec: F2Vector) -> Cochain:
        return cls(group, degree, vec.to_bits())

    @classmethod
    def random(cls, group: FiniteGroup, degree: int, rng: np.random.Generator, coeff: str = F2,
               denominator: int = 8) -> Cochain:
        n = dim_cochains(group, degree)
        if coeff == F2:
            return cls(group, degree, rng.integers(0, 2, n, dtype=np.uint8))
        nums = rng.integers(0, denominator, n)
        return cls(group, degree, QmodZVector.from_integers(nums.tolist(), denominator), QZ)

    # access
    def __call__(self, *tup: int):
        if len(tup) != self.degree:
            raise CochainError(f"expected {self.degree} arguments")
        if any(g == 0 for g in tup):
            return 0 if self.coeff == F2 else Fraction(0)
        i = tuple_index(self.group, tup) if tup else 0
        if self.coeff == F2:
            return int(self.values[i])
        return self.values.entry(i)

    def to_vector(self) -> F2Vector:
        self._need_f2()
        return F2Vector.from_bits(self.values)

    def _need_f2(self):
        if self.coeff != F2:
            raise UnsupportedCoefficients("operation needs F2 coefficients")

    def _check_same(self, other: Cochain):
        if self.group != other.group:
            raise GroupMismatch("cochains live on different groups")
        if self.degree != other.degree or self.coeff != other.coeff:
            raise Mismatch(
                f"cannot combine degree {self.degree} {self.coeff} with degree {other.degree} {other.coeff}"
            )

    def __add__(self, other: Cochain) -> Cochain:
        self._check_same(other)
        if self.coeff == F2:
            return Cochain(self.group, self.degree, self.values ^ other.values)
        return Cochain(self.group, self.degree, self.values + other.values, QZ)

    def __sub__(self, other: Cochain) -> Cochain:
        self._check_same(other)
        if self.coeff == F2:
            return self + other
        return Cochain(self.group, self.degree, self.values - other.values, QZ)

    def __neg__(self) -> Cochain:
        if self.coeff == F2:
            return self
        return Cochain(self.group, self.degree, -self.values, QZ)

    def __eq__(self, other):
        if not isinstance(other, Cochain):
            return NotImplemented
        if self.group != other.group or self.degree != other.degree or self.coeff != other.coeff:
            return False
        if self.coeff == F2:
            return bool(np.array_equal(self.values, other.values))
        return self.values == other.values

    __hash__ = None

    def is_zero(self) -> bool:
        if self.coeff == F2:
            return not self.values.any()
        return self.values.is_zero()

    def support(self) -> int:
        """Number of tuples where the cochain is nonzero."""
        if self.coeff == F2:
            return int(self.values.sum())
        return sum(1 for v in self.values.num if v)

    def __repr__(self):
        return (
            f"Cochain(group={self.group.name or self.group.key}, degree={self.degree}, "
            f"coeff={self.coeff}, support={self.support()})"
        )


def include(c: Cochain) -> Cochain:
    """The inclusion Z/2 -> Q/Z, 1 -> 1/2."""
    c._need_f2()
    return Cochain(c.group, c.degree, QmodZVector.from_integers(c.values.astype(np.int64).tolist(), 2), QZ)


def lift_integral(c: Cochain) -> np.ndarray:
    c._need_f2()
    return c.values.astype(np.int64)


# ---------------------------------------------------------------- differential

def _gather(values: np.ndarray, idx: np.ndarray, zero) -> np.ndarray:
    out = values[np.where(idx >= 0, idx, 0)]
    if out.dtype == object:
        out = out.copy()
        out[idx < 0] = zero
    else:
        out = np.where(idx >= 0, out, zero)
    return out


def _coboundary_array(group: FiniteGroup, n: int, values: np.ndarray, signed: bool) -> np.ndarray:
    """Apply d to an array of degree-n values (uint8 mod 2, int64 or object integers)."""
    _, prefix = simplices(group, n + 1)
    verts = list(range(n + 2))
    if values.dtype == np.uint8:
        acc = np.zeros(prefix.shape[0], dtype=np.uint8)
    elif values.dtype == object:
        acc = np.zeros(prefix.shape[0], dtype=object)
    else:
        acc = np.zeros(prefix.shape[0], dtype=np.int64)
    for j in range(n + 2):
        face = verts[:j] + verts[j + 1:]
        term = _gather(values, faces(group, n + 1, face), 0)
        if values.dtype == np.uint8:
            acc ^= term
        elif signed and j % 2:
            acc = acc - term
        else:
            acc = acc + term
    return acc


def differential(c: Cochain) -> Cochain:
    n = c.degree
    if c.coeff == F2:
        return Cochain(c.group, n + 1, _coboundary_array(c.group, n, c.values, False))
    num = _coboundary_array(c.group, n, c.values.num, True)
    return Cochain(c.group, n + 1, QmodZVector(num, c.values.den), QZ)


def integral_differential(group: FiniteGroup, n: int, values: np.ndarray) -> np.ndarray:
    """Signed coboundary of an integer-valued normalized cochain."""
    return _coboundary_array(group, n, np.asarray(values, dtype=np.int64), True)


def is_closed(c: Cochain) -> bool:
    return differential(c).is_zero()


# ---------------------------------------------------------------- products

def _check_pair(u: Cochain, v: Cochain):
    if u.group != v.group:
        raise GroupMismatch("cochains live on different groups")


def _product(u: Cochain, v: Cochain, terms: list[tuple[list[int], list[int]]], degree: int) -> Cochain:
    group = u.group
    _, prefix = simplices(group, degree)
    count = prefix.shape[0]
    if u.coeff == F2 and v.coeff == F2:
        acc = np.zeros(count, dtype=np.uint8)
        for uv, vv in terms:
            acc ^= _gather(u.values, faces(group, degree, uv), 0) & _gather(
                v.values, faces(group, degree, vv), 0
            )
        return Cochain(group, degree, acc)
    if u.coeff == QZ and v.coeff == QZ:
        raise UnsupportedCoefficients("no product of two Q/Z cochains")
    # F2 x Q/Z: the F2 value acts through its lift 0/1
    den = u.values.den if u.coeff == QZ else v.values.den
    acc = np.zeros(count, dtype=object)
    for uv, vv in terms:
        a = _gather(u.values.num if u.coeff == QZ else u.values.astype(object), faces(group, degree, uv), 0)
        b = _gather(v.values.num if v.coeff == QZ else v.values.astype(object), faces(group, degree, vv), 0)
        acc = acc + a * b
    return Cochain(group, degree, QmodZVector(acc, den), QZ)


def cup(u: Cochain, v: Cochain) -> Cochain:
    _check_pair(u, v)
    p, q = u.degree, v.degree
    n = p + q
    return _product(u, v, [(list(range(p + 1)), list(range(p, n + 1)))], n)


def cup_i_terms(p: int, q: int, i: int) -> list[tuple[list[int], list[int]]]:
    """Vertex lists (for u, for v) of the cup-i formula on the (p+q-i)-simplex."""
    n = p + q - i
    terms = []
    for cuts in itertools.combinations(range(n + 1), i + 1):
        bounds = [0, *cuts, n]
        ev: list[int] = []
        od: list[int] = []
        for k in range(i + 2):
            seg = list(range(bounds[k], bounds[k + 1] + 1))
            target = ev if k % 2 == 0 else od
            target.extend(seg if not target else seg[1:] if target[-1] == seg[0] else seg)
        if len(ev) == p + 1 and len(od) == q + 1:
            terms.append((ev, od))
    return terms


def cup_i(u: Cochain, v: Cochain, i: int) -> Cochain:
    _check_pair(u, v)
    if i < 0:
        raise CochainError("i must be nonnegative")
    if i == 0:
        return cup(u, v)
    if u.coeff != F2 or v.coeff != F2:
        raise UnsupportedCoefficients("cup-i for i >= 1 is only implemented over F2")
    if i > min(u.degree, v.degree):
        raise CochainError(f"cup_{i} needs both degrees >= {i}")
    return _product(u, v, cup_i_terms(u.degree, v.degree, i), u.degree + v.degree - i)


# ---------------------------------------------------------------- classes and operations

@dataclass(frozen=True, eq=False)
class CohomologyClass:
    representative: Cochain

    def __post_init__(self):
        if not is_closed(self.representative):
            raise NotClosed("representative is not closed")

    @property
    def group(self) -> FiniteGroup:
        return self.representative.group

    @property
    def degree(self) -> int:
        return self.representative.degree

    @property
    def coeff(self) -> str:
        return self.representative.coeff


def _rep(z) -> Cochain:
    return z.representative if isinstance(z, CohomologyClass) else z


def steenrod_sq(k: int, z) -> CohomologyClass:
    """Closed representative of Sq^k[z], computed as ``z cup_(n-k) z``."""
    c = _rep(z)
    c._need_f2()
    n = c.degree
    if k < 0:
        raise CochainError("k must be nonnegative")
    if k > n:
        raise DegreeTooSmall(f"Sq^{k} vanishes on degree {n}; refusing to return it")
    return CohomologyClass(cup_i(c, c, n - k))


def bockstein(z) -> CohomologyClass:
    """Bockstein of 0 -> Z/2 -> Z/4 -> Z/2 -> 0, via an integral lift."""
    c = _rep(z)
    c._need_f2()
    d = integral_differential(c.group, c.degree, lift_integral(c))
    if np.any(d % 2):
        raise NotClosed("Bockstein needs a closed mod-2 cochain")
    return CohomologyClass(Cochain(c.group, c.degree + 1, ((d // 2) % 2).astype(np.uint8)))
