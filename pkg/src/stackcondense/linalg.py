"""Exact linear algebra over F2 (bit-packed) and Q/Z.

F2 matrices are stored row-major as ``uint64`` words, bit ``j % 64`` of word
``j // 64`` holding column ``j``. Elimination always runs on a private copy.
"""

from __future__ import annotations

from dataclasses import dataclass
from fractions import Fraction
from math import gcd
from typing import Iterable, Sequence

import numpy as np

WORD = 64
DEFAULT_ROW_CAP = 1 << 24

_row_cap = DEFAULT_ROW_CAP


def row_cap() -> int:
    return _row_cap


def set_row_cap(cap: int) -> int:
    """Set the largest coboundary matrix (in rows) we agree to build; returns the old cap."""
    global _row_cap
    if cap <= 0:
        raise ValueError("row cap must be positive")
    old, _row_cap = _row_cap, int(cap)
    return old


class DimensionMismatch(ValueError):
    pass


def _nwords(n: int) -> int:
    return (n + WORD - 1) // WORD


def pack_bits(bits: np.ndarray) -> np.ndarray:
    """Pack a (..., n) 0/1 array into (..., ceil(n/64)) uint64 words."""
    bits = np.asarray(bits, dtype=np.uint8) & 1
    n = bits.shape[-1]
    pad = _nwords(n) * WORD - n
    if pad:
        bits = np.concatenate([bits, np.zeros(bits.shape[:-1] + (pad,), dtype=np.uint8)], axis=-1)
    packed = np.packbits(bits, axis=-1, bitorder="little")
    return np.ascontiguousarray(packed).view("<u8").astype(np.uint64, copy=False)


def unpack_bits(words: np.ndarray, n: int) -> np.ndarray:
    w = np.ascontiguousarray(words, dtype="<u8")
    bits = np.unpackbits(w.view(np.uint8), axis=-1, bitorder="little")
    return bits[..., :n]


class F2Vector:
    __slots__ = ("length", "words")

    def __init__(self, length: int, words: np.ndarray | None = None):
        self.length = int(length)
        if words is None:
            words = np.zeros(_nwords(length), dtype=np.uint64)
        self.words = np.asarray(words, dtype=np.uint64)

    @classmethod
    def from_bits(cls, bits) -> F2Vector:
        bits = np.asarray(bits)
        return cls(len(bits), pack_bits(bits))

    def to_bits(self) -> np.ndarray:
        return unpack_bits(self.words, self.length)

    def __getitem__(self, j: int) -> int:
        return int((int(self.words[j // WORD]) >> (j % WORD)) & 1)

    def __add__(self, other: F2Vector) -> F2Vector:
        if other.length != self.length:
            raise DimensionMismatch("vector lengths differ")
        return F2Vector(self.length, self.words ^ other.words)

    def __eq__(self, other):
        return (
            isinstance(other, F2Vector)
            and other.length == self.length
            and np.array_equal(self.words, other.words)
        )

    def is_zero(self) -> bool:
        return not self.words.any()

    def weight(self) -> int:
        return int(np.bitwise_count(self.words).sum())

    def __repr__(self):
        return f"F2Vector({''.join(map(str, self.to_bits()))})"


class F2Matrix:
    __slots__ = ("rows", "cols", "data")

    def __init__(self, rows: int, cols: int, data: np.ndarray | None = None):
        self.rows, self.cols = int(rows), int(cols)
        if data is None:
            data = np.zeros((rows, _nwords(cols)), dtype=np.uint64)
        self.data = np.asarray(data, dtype=np.uint64).reshape(rows, _nwords(cols))

    @classmethod
    def from_bits(cls, bits) -> F2Matrix:
        bits = np.atleast_2d(np.asarray(bits))
        return cls(bits.shape[0], bits.shape[1], pack_bits(bits))

    @classmethod
    def identity(cls, n: int) -> F2Matrix:
        return cls.from_bits(np.eye(n, dtype=np.uint8))

    @classmethod
    def zeros(cls, rows: int, cols: int) -> F2Matrix:
        return cls(rows, cols)

    @classmethod
    def from_columns(cls, columns: Sequence[F2Vector], rows: int | None = None) -> F2Matrix:
        if rows is None:
            rows = columns[0].length if columns else 0
        if not columns:
            return cls(rows, 0)
        bits = np.stack([c.to_bits() for c in columns], axis=1)
        return cls.from_bits(bits)

    def to_bits(self) -> np.ndarray:
        return unpack_bits(self.data, self.cols)

    def transpose(self) -> F2Matrix:
        return F2Matrix.from_bits(self.to_bits().T)

    def column(self, j: int) -> F2Vector:
        w, b = divmod(j, WORD)
        bits = (self.data[:, w] >> np.uint64(b)) & np.uint64(1)
        return F2Vector.from_bits(bits.astype(np.uint8))

    def hstack(self, other: F2Matrix) -> F2Matrix:
        if other.rows != self.rows:
            raise DimensionMismatch("row counts differ")
        return F2Matrix.from_bits(np.concatenate([self.to_bits(), other.to_bits()], axis=1))

    def __matmul__(self, x):
        if isinstance(x, F2Vector):
            if x.length != self.cols:
                raise DimensionMismatch(f"matrix has {self.cols} columns, vector length {x.length}")
            if self.rows == 0:
                return F2Vector(0)
            par = np.bitwise_count(self.data & x.words[None, :]).sum(axis=1) & 1
            return F2Vector.from_bits(par.astype(np.uint8))
        if isinstance(x, F2Matrix):
            if x.rows != self.cols:
                raise DimensionMismatch("inner dimensions differ")
            a = self.to_bits().astype(np.int64)
            b = x.to_bits().astype(np.int64)
            return F2Matrix.from_bits((a @ b) & 1)
        return NotImplemented

    def __eq__(self, other):
        return (
            isinstance(other, F2Matrix)
            and (self.rows, self.cols) == (other.rows, other.cols)
            and np.array_equal(self.data, other.data)
        )

    def __repr__(self):
        return f"F2Matrix({self.rows}x{self.cols})"


def _rref(data: np.ndarray, ncols: int) -> tuple[np.ndarray, list[int]]:
    """Reduced row echelon form in place; returns (data, pivot columns)."""
    nrows = data.shape[0]
    pivots: list[int] = []
    r = 0
    one = np.uint64(1)
    for c in range(ncols):
        if r == nrows:
            break
        w = c // WORD
        bit = one << np.uint64(c % WORD)
        col = (data[:, w] & bit) != 0
        below = np.flatnonzero(col[r:])
        if below.size == 0:
            continue
        p = r + int(below[0])
        if p != r:
            data[[r, p]] = data[[p, r]]
            col[r], col[p] = col[p], col[r]
        col[r] = False
        hit = np.flatnonzero(col)
        if hit.size:
            data[hit] ^= data[r]
        pivots.append(c)
        r += 1
    return data, pivots


def rank(m: F2Matrix) -> int:
    _, piv = _rref(m.data.copy(), m.cols)
    return len(piv)


def kernel_basis(m: F2Matrix) -> list[F2Vector]:
    """Basis of ``{x : m x = 0}``; its size is ``cols - rank(m)``."""
    red, piv = _rref(m.data.copy(), m.cols)
    free = sorted(set(range(m.cols)) - set(piv))
    if not free:
        return []
    bits = unpack_bits(red[: len(piv)], m.cols)  # (rank, cols)
    basis = np.zeros((len(free), m.cols), dtype=np.uint8)
    basis[np.arange(len(free)), free] = 1
    if piv:
        basis[:, piv] = bits[:, free].T
    packed = pack_bits(basis)
    return [F2Vector(m.cols, packed[i]) for i in range(len(free))]


def solve(m: F2Matrix, b: F2Vector) -> F2Vector | None:
    """Some ``x`` with ``m x = b``, or ``None`` when the system is inconsistent."""
    if b.length != m.rows:
        raise DimensionMismatch(f"right-hand side has length {b.length}, matrix has {m.rows} rows")
    if m.rows == 0:
        return F2Vector(m.cols)
    aug = np.concatenate([m.data, np.zeros((m.rows, 1), dtype=np.uint64)], axis=1)
    # widen so the extra column always has its own bit
    ncols = _nwords(m.cols) * WORD
    aug[:, -1] = pack_bits(b.to_bits()[:, None])[:, 0]
    red, piv = _rref(aug, ncols + 1)
    if piv and piv[-1] == ncols:
        return None
    rhs = (red[: len(piv), -1] & np.uint64(1)).astype(np.uint8)
    x = np.zeros(m.cols, dtype=np.uint8)
    x[piv] = rhs
    sol = F2Vector.from_bits(x)
    if not (m @ sol) == b:
        raise AssertionError("internal error: F2 solution failed verification")
    return sol


class EchelonBasis:
    """Incrementally built reduced basis of a subspace of F2^n.

    Used to pick complements (e.g. cocycles modulo coboundaries).
    """

    def __init__(self, length: int):
        self.length = length
        self._rows: list[np.ndarray] = []
        self._pivots: list[int] = []

    def __len__(self):
        return len(self._rows)

    def reduce(self, v: F2Vector) -> F2Vector:
        w = v.words.copy()
        for row, p in zip(self._rows, self._pivots):
            if (int(w[p // WORD]) >> (p % WORD)) & 1:
                w ^= row
        return F2Vector(self.length, w)

    def add(self, v: F2Vector) -> bool:
        """Add ``v``; returns False if it was already in the span."""
        r = self.reduce(v)
        if r.is_zero():
            return False
        bits = r.to_bits()
        p = int(np.flatnonzero(bits)[0])
        for i, (row, q) in enumerate(zip(self._rows, self._pivots)):
            if (int(row[p // WORD]) >> (p % WORD)) & 1:
                self._rows[i] = row ^ r.words
        self._rows.append(r.words)
        self._pivots.append(p)
        return True

    def contains(self, v: F2Vector) -> bool:
        return self.reduce(v).is_zero()


# ---------------------------------------------------------------- Q/Z

def _as_fraction(x) -> Fraction:
    if isinstance(x, str):
        return Fraction(x.strip())
    return Fraction(x)


class QmodZVector:
    """Vector of exact rationals modulo 1.

    Stored as integer numerators over one common denominator, kept in lowest
    terms after every operation; entry ``i`` is ``num[i] / den`` in ``[0, 1)``.
    """

    __slots__ = ("num", "den")

    def __init__(self, num: np.ndarray, den: int = 1):
        num = np.asarray(num, dtype=object)
        den = int(den)
        if den <= 0:
            raise ValueError("denominator must be positive")
        num = np.array([int(v) % den for v in num], dtype=object) if num.size else num
        g = den
        for v in num:
            g = gcd(g, int(v))
            if g == 1:
                break
        if g > 1:
            num = np.array([int(v) // g for v in num], dtype=object)
            den //= g
        self.num = num
        self.den = den

    @classmethod
    def zeros(cls, n: int) -> QmodZVector:
        return cls(np.zeros(n, dtype=object), 1)

    @classmethod
    def from_values(cls, values: Iterable) -> QmodZVector:
        fr = [_as_fraction(v) for v in values]
        den = 1
        for f in fr:
            den = den * f.denominator // gcd(den, f.denominator)
        return cls(np.array([f.numerator * (den // f.denominator) for f in fr], dtype=object), den)

    @classmethod
    def from_integers(cls, ints, den: int) -> QmodZVector:
        """Entries ``ints[i] / den``."""
        return cls(np.asarray(ints, dtype=object), den)

    def __len__(self):
        return len(self.num)

    def entry(self, i: int) -> Fraction:
        return Fraction(int(self.num[i]), self.den)

    def values(self) -> list[Fraction]:
        return [Fraction(int(v), self.den) for v in self.num]

    def _common(self, other: QmodZVector) -> tuple[np.ndarray, np.ndarray, int]:
        if len(other) != len(self):
            raise DimensionMismatch("vector lengths differ")
        den = self.den * other.den // gcd(self.den, other.den)
        return self.num * (den // self.den), other.num * (den // other.den), den

    def __add__(self, other: QmodZVector) -> QmodZVector:
        a, b, den = self._common(other)
        return QmodZVector(a + b, den)

    def __sub__(self, other: QmodZVector) -> QmodZVector:
        a, b, den = self._common(other)
        return QmodZVector(a - b, den)

    def __neg__(self) -> QmodZVector:
        return QmodZVector(-self.num, self.den)

    def scale(self, k: int) -> QmodZVector:
        return QmodZVector(self.num * int(k), self.den)

    def is_zero(self) -> bool:
        return self.den == 1

    def __eq__(self, other):
        return (
            isinstance(other, QmodZVector)
            and self.den == other.den
            and len(self) == len(other)
            and all(int(a) == int(b) for a, b in zip(self.num, other.num))
        )

    def __repr__(self):
        return f"QmodZVector({[str(v) for v in self.values()]})"
