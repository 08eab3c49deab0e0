"""Cohomology queries on the normalized bar complex.

Membership questions are answered by solving ``dX = z`` rather than by
computing full kernels, so S4 never needs its degree-4 coboundary matrix.
"""

from __future__ import annotations

import threading
from typing import Iterator

import numpy as np

from . import linalg
from .cochains import (
    F2,
    QZ,
    Cochain,
    CochainError,
    CohomologyClass,
    Mismatch,
    NotClosed,
    UnsupportedCoefficients,
    cup,
    cup_i,
    differential,
    dim_cochains,
    face_index,
    simplices,
)
from .groups import FiniteGroup
from .linalg import EchelonBasis, F2Matrix, F2Vector, QmodZVector


class TooLarge(CochainError):
    pass


_mat_cache: dict[tuple[str, int], F2Matrix] = {}
_mat_lock = threading.Lock()


def _check_cap(group: FiniteGroup, rows_degree: int):
    rows = dim_cochains(group, rows_degree)
    if rows > linalg.row_cap():
        raise TooLarge(
            f"coboundary matrix into degree {rows_degree} has {rows} rows, above the cap {linalg.row_cap()}"
        )


def coboundary_matrix(group: FiniteGroup, n: int) -> F2Matrix:
    """Matrix of d: C^n -> C^(n+1) over F2, memoized per (group, n)."""
    _check_cap(group, n + 1)
    key = (group.key, n)
    with _mat_lock:
        hit = _mat_cache.get(key)
    if hit is not None:
        return hit
    rows, cols = dim_cochains(group, n + 1), dim_cochains(group, n)
    mat = F2Matrix.zeros(rows, cols)
    _, prefix = simplices(group, n + 1)
    verts = list(range(n + 2))
    r = np.arange(rows)
    for j in range(n + 2):
        col = face_index(group, prefix, verts[:j] + verts[j + 1:])
        ok = col >= 0
        bits = np.left_shift(np.uint64(1), (col[ok] % 64).astype(np.uint64))
        np.bitwise_xor.at(mat.data, (r[ok], col[ok] // 64), bits)
    with _mat_lock:
        _mat_cache.setdefault(key, mat)
        return _mat_cache[key]


def integral_coboundary_matrix(group: FiniteGroup, n: int) -> np.ndarray:
    """Signed integer matrix of d: C^n -> C^(n+1) (dense)."""
    _check_cap(group, n + 1)
    rows, cols = dim_cochains(group, n + 1), dim_cochains(group, n)
    mat = np.zeros((rows, cols), dtype=np.int64)
    _, prefix = simplices(group, n + 1)
    verts = list(range(n + 2))
    r = np.arange(rows)
    for j in range(n + 2):
        col = face_index(group, prefix, verts[:j] + verts[j + 1:])
        ok = col >= 0
        np.add.at(mat, (r[ok], col[ok]), -1 if j % 2 else 1)
    return mat


def clear_cache() -> None:
    with _mat_lock:
        _mat_cache.clear()


def cohomology_dim(group: FiniteGroup, n: int, coeff: str = F2) -> int:
    if coeff != F2:
        raise UnsupportedCoefficients("cohomology_dim is only implemented over F2")
    if n < 0:
        return 0
    dn = coboundary_matrix(group, n)
    z = dn.cols - linalg.rank(dn)
    b = linalg.rank(coboundary_matrix(group, n - 1)) if n >= 1 else 0
    return z - b


# ---------------------------------------------------------------- coboundaries

def is_coboundary(z: Cochain) -> Cochain | None:
    """A verified witness ``X`` with ``dX = z``, or None when ``[z] != 0``."""
    if not differential(z).is_zero():
        raise NotClosed("is_coboundary needs a closed cochain")
    if z.degree == 0:
        # nothing lies below degree 0: only the zero cochain is trivial, with an empty witness
        return Cochain.zero(z.group, 0, z.coeff) if z.is_zero() else None
    if z.is_zero():
        return Cochain.zero(z.group, z.degree - 1, z.coeff)
    if z.coeff == F2:
        x = linalg.solve(coboundary_matrix(z.group, z.degree - 1), z.to_vector())
        if x is None:
            return None
        w = Cochain.from_vector(z.group, z.degree - 1, x)
    else:
        w = _qz_witness(z)
        if w is None:
            return None
    if differential(w) != z:
        raise AssertionError("internal error: coboundary witness failed verification")
    return w


def _qz_witness(z: Cochain) -> Cochain | None:
    # A Q/Z coboundary of denominator D in degree >= 2 always has a primitive with
    # denominator dividing D*|G|, because |G| kills H^(n-1)(G; Q/Z).
    if z.degree == 1:
        return None  # d of a constant is 0
    den = z.values.den
    modulus = den * z.group.order
    a = integral_coboundary_matrix(z.group, z.degree - 1)
    rhs = np.array([int(v) for v in z.values.num], dtype=object) * (modulus // den)
    x = solve_mod(a, rhs, modulus)
    if x is None:
        return None
    return Cochain(z.group, z.degree - 1, QmodZVector.from_integers(x, modulus), QZ)


def cohomologous(u: Cochain, v: Cochain) -> bool:
    if u.group != v.group or u.degree != v.degree or u.coeff != v.coeff:
        raise Mismatch("cohomologous needs cochains of the same group, degree and coefficients")
    for c in (u, v):
        if not differential(c).is_zero():
            raise NotClosed("cohomologous needs closed cochains")
    return is_coboundary(u - v) is not None


def is_trivial_class(z) -> bool:
    c = z.representative if isinstance(z, CohomologyClass) else z
    return is_coboundary(c) is not None


# ---------------------------------------------------------------- solving mod M

def _factor(m: int) -> list[tuple[int, int]]:
    out = []
    p = 2
    while p * p <= m:
        if m % p == 0:
            k = 0
            while m % p == 0:
                m //= p
                k += 1
            out.append((p, k))
        p += 1
    if m > 1:
        out.append((m, 1))
    return out


def _val(x: int, p: int, cap: int) -> int:
    if x == 0:
        return cap
    v = 0
    while x % p == 0 and v < cap:
        x //= p
        v += 1
    return v


def _solve_prime_power(a: np.ndarray, b: np.ndarray, p: int, k: int) -> np.ndarray | None:
    """Solve a x = b over Z/p^k by diagonalizing with row and column operations."""
    q = p**k
    a = [[int(v) % q for v in row] for row in a.tolist()]
    b = [int(v) % q for v in b]
    rows, cols = len(a), (len(a[0]) if a else 0)
    colperm_ops: list[tuple] = []  # column operations to undo on the solution
    r = 0
    diag: list[int] = []
    while r < min(rows, cols):
        best = None
        for i in range(r, rows):
            row = a[i]
            for j in range(r, cols):
                if row[j]:
                    v = _val(row[j], p, k)
                    if best is None or v < best[0]:
                        best = (v, i, j)
                        if v == 0:
                            break
            if best is not None and best[0] == 0:
                break
        if best is None:
            break
        v, i, j = best
        a[r], a[i] = a[i], a[r]
        b[r], b[i] = b[i], b[r]
        if j != r:
            for row in a:
                row[r], row[j] = row[j], row[r]
            colperm_ops.append(("swap", r, j))
        piv = a[r][r]
        unit = piv // p**v
        uinv = pow(unit, -1, q)
        a[r] = [(x * uinv) % q for x in a[r]]
        b[r] = (b[r] * uinv) % q
        pv = p**v
        for i2 in range(rows):
            if i2 != r and a[i2][r]:
                f = a[i2][r] // pv
                a[i2] = [(x - f * y) % q for x, y in zip(a[i2], a[r])]
                b[i2] = (b[i2] - f * b[r]) % q
        for j2 in range(r + 1, cols):
            if a[r][j2]:
                f = a[r][j2] // pv
                for row in a:
                    row[j2] = (row[j2] - f * row[r]) % q
                colperm_ops.append(("add", j2, r, f))
        diag.append(pv)
        r += 1
    y = [0] * cols
    for i in range(r):
        if b[i] % diag[i]:
            return None
        y[i] = (b[i] // diag[i]) % q
    if any(b[i] % q for i in range(r, rows)):
        return None
    # undo column operations: x = V y, applied in reverse
    for op in reversed(colperm_ops):
        if op[0] == "swap":
            _, c1, c2 = op
            y[c1], y[c2] = y[c2], y[c1]
        else:
            _, j2, rr, f = op
            y[rr] = (y[rr] - f * y[j2]) % q
    return np.array(y, dtype=object)


def solve_mod(a: np.ndarray, b, modulus: int) -> list[int] | None:
    """Some integer x with ``a x = b (mod modulus)``, or None."""
    b = np.asarray(b, dtype=object)
    parts = []
    for p, k in _factor(modulus):
        x = _solve_prime_power(a, b, p, k)
        if x is None:
            return None
        parts.append((p**k, x))
    x = [0] * a.shape[1]
    for j in range(a.shape[1]):
        val, mod = 0, 1
        for q, xs in parts:
            # CRT step
            t = ((int(xs[j]) - val) * pow(mod, -1, q)) % q
            val += mod * t
            mod *= q
        x[j] = val % modulus
    chk = (a.astype(object).dot(np.array(x, dtype=object)) - b) % modulus
    if any(int(v) for v in chk):
        raise AssertionError("internal error: modular solution failed verification")
    return x


# ---------------------------------------------------------------- bases and classes

def cocycle_basis(group: FiniteGroup, n: int) -> list[Cochain]:
    return [Cochain.from_vector(group, n, v) for v in linalg.kernel_basis(coboundary_matrix(group, n))]


def _coboundary_span(group: FiniteGroup, n: int) -> EchelonBasis:
    span = EchelonBasis(dim_cochains(group, n))
    if n >= 1:
        d = coboundary_matrix(group, n - 1)
        for j in range(d.cols):
            span.add(d.column(j))
    return span


def cohomology_basis(group: FiniteGroup, n: int, preferred: list[Cochain] | None = None) -> list[Cochain]:
    """Cocycles whose classes form a basis of H^n(G; F2).

    ``preferred`` cocycles are tried first, so named representatives such as
    cup products of degree-1 classes end up in the basis when independent.
    """
    span = _coboundary_span(group, n)
    out = []
    candidates = list(preferred or []) + cocycle_basis(group, n)
    for c in candidates:
        if not differential(c).is_zero():
            raise NotClosed("preferred representative is not closed")
        if span.add(c.to_vector()):
            out.append(c)
    return out


def degree1_basis(group: FiniteGroup) -> list[Cochain]:
    """H^1 = Z^1 = Hom(G, Z/2) on the normalized complex."""
    return cocycle_basis(group, 1)


def default_h2_basis(group: FiniteGroup) -> list[Cochain]:
    """H^2 basis preferring cup products of the degree-1 basis."""
    h1 = degree1_basis(group)
    prods = [cup(a, b) for i, a in enumerate(h1) for b in h1[i:]]
    return cohomology_basis(group, 2, preferred=prods)


def class_coordinates(z: Cochain, basis: list[Cochain]) -> list[int] | None:
    """Coordinates of [z] in ``basis`` (None if z is not in their span mod coboundaries)."""
    n = z.degree
    cols = [b.to_vector() for b in basis]
    if n >= 1:
        d = coboundary_matrix(z.group, n - 1)
        mat = F2Matrix.from_columns(cols, dim_cochains(z.group, n)).hstack(d) if cols else d
    else:
        mat = F2Matrix.from_columns(cols, 1)
    x = linalg.solve(mat, z.to_vector())
    if x is None:
        return None
    return [x[i] for i in range(len(basis))]


def combine(basis: list[Cochain], mask: int, group: FiniteGroup, degree: int) -> Cochain:
    c = Cochain.zero(group, degree)
    for i, b in enumerate(basis):
        if mask >> i & 1:
            c = c + b
    return c


def enumerate_classes(basis: list[Cochain], group: FiniteGroup, degree: int) -> Iterator[tuple[int, Cochain]]:
    for mask in range(1 << len(basis)):
        yield mask, combine(basis, mask, group, degree)


def reduced_kappa(kappa: Cochain, search_limit: int = 1 << 16) -> Cochain:
    """A representative of [kappa] adapted to exact shift periods.

    Zero class -> the zero cochain. If Sq^1[kappa] = 0, look among
    ``kappa + d(lambda)`` for one with ``kappa cup_1 kappa = 0`` exactly (exhaustive
    over C^1/Z^1 when it has at most ``search_limit`` elements). Otherwise, or
    when nothing is found, kappa is returned unchanged.
    """
    if is_coboundary(kappa) is not None:
        return Cochain.zero(kappa.group, kappa.degree)
    sq1 = cup_i(kappa, kappa, 1)
    if sq1.is_zero():
        return kappa
    if is_coboundary(sq1) is None:
        return kappa
    group = kappa.group
    d0 = coboundary_matrix(group, 1)
    # C^1 modulo Z^1: a complement of the kernel of d on degree 1
    span = EchelonBasis(dim_cochains(group, 1))
    for v in linalg.kernel_basis(d0):
        span.add(v)
    comp = []
    for j in range(dim_cochains(group, 1)):
        e = np.zeros(dim_cochains(group, 1), dtype=np.uint8)
        e[j] = 1
        if span.add(F2Vector.from_bits(e)):
            comp.append(differential(Cochain(group, 1, e)))
    if (1 << len(comp)) > search_limit:
        return kappa
    for mask in range(1, 1 << len(comp)):
        cand = kappa
        for i, c in enumerate(comp):
            if mask >> i & 1:
                cand = cand + c
        if cup_i(cand, cand, 1).is_zero():
            return cand
    return kappa


# ---------------------------------------------------------------- restriction and named classes

def restrict(c: Cochain, elements: list[int]) -> Cochain:
    """Restriction of ``c`` to the subgroup on ``elements``."""
    sub, emb = c.group.subgroup(elements)
    emb_arr = np.array(emb)
    tuples, _ = simplices(sub, c.degree)
    m = c.group.order - 1
    idx = np.zeros(tuples.shape[0], dtype=np.int64)
    for pos in range(c.degree):
        idx = idx * m + (emb_arr[tuples[:, pos]] - 1)
    if c.coeff == F2:
        vals = c.values[idx] if c.degree else c.values
        return Cochain(sub, c.degree, vals)
    nums = c.values.num[idx] if c.degree else c.values.num
    return Cochain(sub, c.degree, QmodZVector(nums, c.values.den), QZ)


def sign_class(group: FiniteGroup) -> Cochain:
    """The unique nonzero degree-1 class; requires dim H^1 = 1."""
    h1 = degree1_basis(group)
    if len(h1) != 1:
        raise CochainError(f"x is only pinned when dim H^1 = 1 (here {len(h1)})")
    return h1[0]


def named_classes(group: FiniteGroup) -> dict[str, Cochain]:
    """Representatives of the ring generators named for this group.

    Pinned by property: ``x`` is the unique nonzero element of H^1 (when
    dim H^1 = 1), ``x^2 = x cup x``. For ``y`` the rule depends on H^2:

    * if H^2 = {0, [x^2]} only ``x``/``x^2`` are named (e.g. Z/2);
    * if x^2 is a coboundary and H^2 has one nonzero class, ``y`` is it (Z/4, Z/8);
    * if H^2 has dimension 2 with basis [x^2] and a class of nonzero Sq^1, ``y`` is
      class with nonzero Sq^1 that restricts to zero on the subgroup generated by
      the first involution with ``x = 1`` (for S4 the transposition (2 3)), and
      ``w = x cup y + Sq^1 y``.
    """
    out: dict[str, Cochain] = {"0": Cochain.zero(group, 2)}
    h1 = degree1_basis(group)
    if len(h1) != 1:
        return out
    x = h1[0]
    out["x"] = x
    x2 = cup(x, x)
    out["x^2"] = x2
    h2 = cohomology_basis(group, 2, preferred=[x2])
    x2_trivial = is_coboundary(x2) is not None
    if x2_trivial and len(h2) == 1:
        out["y"] = h2[0]
        return out
    if x2_trivial or len(h2) != 2:
        return out
    cands = [h2[1], h2[1] + x2]
    sq_nonzero = [c for c in cands if is_coboundary(cup_i(c, c, 1)) is None]
    if len(sq_nonzero) != 2:
        return out
    from .groups import element_order

    inv = next((g for g in range(1, group.order) if element_order(group, g) == 2 and x(g) == 1), None)
    if inv is None:
        return out
    sub = group.generated_subgroup([inv])
    for c in sq_nonzero:
        if is_coboundary(restrict(c, sub)) is not None:
            out["y"] = c
            out["y+x^2"] = c + x2
            out["w"] = cup(x, c) + cup_i(c, c, 1)
            break
    return out
