"""Finite groups as validated multiplication tables.

Element 0 is always the identity. Presets are generated programmatically so the
element indexing is reproducible:

* ``zN``: residues ``0..N-1`` under addition.
* ``AxB`` (e.g. ``z2xz2``, ``z2xz4``): pairs ``(a, b)`` in lexicographic order,
  index ``a * |B| + b``.
* ``s3``, ``s4``: permutations of ``range(n)`` in lexicographic order, with
  ``(p * q)(i) = p(q(i))``.
* ``d8``: the subgroup of ``s4`` preserving the square ``0-1-2-3``, again in
  lexicographic order of the permutations.
* ``q8``: ``1, -1, i, -i, j, -j, k, -k``.
"""

from __future__ import annotations

import hashlib
import itertools
import json
import re
from dataclasses import dataclass, field
from pathlib import Path
from typing import Sequence

import numpy as np

MAX_ORDER = 64


class GroupError(ValueError):
    pass


class UnknownPreset(GroupError):
    pass


class InvalidTable(GroupError):
    """Raised when a table is not a group table.

    ``kind`` is one of ``"shape"``, ``"identity"``, ``"latin"``,
    ``"associativity"``; ``row`` points at the offending row when known.
    """

    def __init__(self, kind: str, message: str, row: int | None = None):
        super().__init__(message)
        self.kind = kind
        self.row = row


class IndexOutOfRange(GroupError, IndexError):
    pass


@dataclass(frozen=True, eq=False)
class FiniteGroup:
    table: np.ndarray
    name: str = ""
    inverse: np.ndarray = field(init=False, repr=False)
    key: str = field(init=False, repr=False)

    def __post_init__(self):
        table = np.array(self.table, dtype=np.int64, copy=True)
        validate_table(table)
        table.setflags(write=False)
        inv = np.argmin(table, axis=1)  # table[a, inv[a]] == 0
        inv.setflags(write=False)
        object.__setattr__(self, "table", table)
        object.__setattr__(self, "inverse", inv)
        digest = hashlib.sha256(table.astype("<i4").tobytes()).hexdigest()[:16]
        object.__setattr__(self, "key", f"{len(table)}:{digest}")

    @property
    def order(self) -> int:
        return len(self.table)

    @property
    def identity_index(self) -> int:
        return 0

    def mul(self, a: int, b: int) -> int:
        return int(self.table[a, b])

    def __eq__(self, other):
        return isinstance(other, FiniteGroup) and self.key == other.key

    def __hash__(self):
        return hash(self.key)

    def __repr__(self):
        return f"FiniteGroup(name={self.name!r}, order={self.order})"

    def to_json(self) -> dict:
        return {"name": self.name, "order": self.order, "table": self.table.tolist()}

    def subgroup(self, elements: Sequence[int], name: str = "") -> tuple[FiniteGroup, list[int]]:
        """Subgroup on ``elements``; returns it with the map new index -> old index.

        The identity is moved to the front, the rest keep the given order.
        """
        elems = [0] + [int(e) for e in elements if int(e) != 0]
        if len(set(elems)) != len(elems):
            raise GroupError("repeated elements in subgroup")
        pos = {e: i for i, e in enumerate(elems)}
        sub = np.empty((len(elems), len(elems)), dtype=np.int64)
        for i, a in enumerate(elems):
            for j, b in enumerate(elems):
                c = self.mul(a, b)
                if c not in pos:
                    raise GroupError("elements are not closed under multiplication")
                sub[i, j] = pos[c]
        return FiniteGroup(sub, name=name), elems

    def generated_subgroup(self, gens: Sequence[int]) -> list[int]:
        elems = [0]
        seen = {0}
        frontier = [0]
        while frontier:
            nxt = []
            for a in frontier:
                for g in gens:
                    c = self.mul(a, g)
                    if c not in seen:
                        seen.add(c)
                        elems.append(c)
                        nxt.append(c)
            frontier = nxt
        return sorted(elems)


def validate_table(table) -> None:
    t = np.asarray(table)
    if t.ndim != 2 or t.shape[0] != t.shape[1] or t.shape[0] == 0:
        raise InvalidTable("shape", f"table must be a non-empty square array, got shape {t.shape}")
    n = t.shape[0]
    if n > MAX_ORDER:
        raise InvalidTable("shape", f"order {n} exceeds the supported maximum {MAX_ORDER}")
    if t.min() < 0 or t.max() >= n:
        bad = int(np.argwhere((t < 0) | (t >= n))[0][0])
        raise InvalidTable("latin", f"row {bad} has an entry outside 0..{n - 1}", row=bad)
    ident = np.arange(n)
    if not np.array_equal(t[0], ident):
        raise InvalidTable("identity", "row 0 must be the identity row 0..n-1", row=0)
    if not np.array_equal(t[:, 0], ident):
        bad = int(np.flatnonzero(t[:, 0] != ident)[0])
        raise InvalidTable("identity", f"column 0 must be the identity column; row {bad} differs", row=bad)
    srt = np.sort(t, axis=1)
    bad_rows = np.flatnonzero((srt != ident).any(axis=1))
    if bad_rows.size:
        r = int(bad_rows[0])
        raise InvalidTable("latin", f"row {r} is not a permutation of 0..{n - 1}", row=r)
    srt = np.sort(t, axis=0)
    bad_cols = np.flatnonzero((srt != ident[:, None]).any(axis=0))
    if bad_cols.size:
        c = int(bad_cols[0])
        raise InvalidTable("latin", f"column {c} is not a permutation of 0..{n - 1}")
    # (ab)c == a(bc), checked for all triples at once
    lhs = t[t[:, :, None], ident[None, None, :]]
    rhs = t[ident[:, None, None], t[None, :, :]]
    diff = np.argwhere(lhs != rhs)
    if diff.size:
        a, b, c = (int(v) for v in diff[0])
        raise InvalidTable(
            "associativity", f"(g{a} g{b}) g{c} != g{a} (g{b} g{c})", row=a
        )


def element_order(g: FiniteGroup, i: int) -> int:
    if not 0 <= i < g.order:
        raise IndexOutOfRange(f"element {i} out of range for group of order {g.order}")
    k, x = 1, i
    while x != 0:
        x = g.mul(x, i)
        k += 1
    return k


# ---------------------------------------------------------------- presets

def cyclic(n: int) -> FiniteGroup:
    a = np.arange(n)
    return FiniteGroup((a[:, None] + a[None, :]) % n, name=f"z{n}")


def direct_product(g: FiniteGroup, h: FiniteGroup, name: str | None = None) -> FiniteGroup:
    m = h.order
    idx = np.arange(g.order * m)
    a, b = divmod(idx, m)
    table = g.table[a[:, None], a[None, :]] * m + h.table[b[:, None], b[None, :]]
    return FiniteGroup(table, name=name if name is not None else f"{g.name}x{h.name}")


def permutation_group(perms: Sequence[Sequence[int]], name: str = "") -> FiniteGroup:
    """Group table from a list of permutations closed under composition.

    The list is sorted lexicographically first, which puts the identity at 0.
    """
    perms = sorted(tuple(p) for p in perms)
    pos = {p: i for i, p in enumerate(perms)}
    n = len(perms)
    table = np.empty((n, n), dtype=np.int64)
    for i, p in enumerate(perms):
        for j, q in enumerate(perms):
            table[i, j] = pos[tuple(p[x] for x in q)]
    return FiniteGroup(table, name=name)


def symmetric(n: int) -> FiniteGroup:
    return permutation_group(list(itertools.permutations(range(n))), name=f"s{n}")


def _closure(gens: Sequence[tuple[int, ...]]) -> list[tuple[int, ...]]:
    ident = tuple(range(len(gens[0])))
    out = {ident}
    frontier = [ident]
    while frontier:
        nxt = []
        for p in frontier:
            for g in gens:
                q = tuple(p[x] for x in g)
                if q not in out:
                    out.add(q)
                    nxt.append(q)
        frontier = nxt
    return list(out)


def dihedral8() -> FiniteGroup:
    return permutation_group(_closure([(1, 2, 3, 0), (2, 1, 0, 3)]), name="d8")


def quaternion8() -> FiniteGroup:
    # units as (sign, axis) with axis 0=1, 1=i, 2=j, 3=k
    units = [(s, a) for a in range(4) for s in (1, -1)]
    # product of basis units: axis pair -> (sign, axis)
    basis = {
        (0, 0): (1, 0), (0, 1): (1, 1), (0, 2): (1, 2), (0, 3): (1, 3),
        (1, 0): (1, 1), (1, 1): (-1, 0), (1, 2): (1, 3), (1, 3): (-1, 2),
        (2, 0): (1, 2), (2, 1): (-1, 3), (2, 2): (-1, 0), (2, 3): (1, 1),
        (3, 0): (1, 3), (3, 1): (1, 2), (3, 2): (-1, 1), (3, 3): (-1, 0),
    }
    pos = {u: i for i, u in enumerate(units)}
    table = np.empty((8, 8), dtype=np.int64)
    for i, (s1, a1) in enumerate(units):
        for j, (s2, a2) in enumerate(units):
            s, a = basis[(a1, a2)]
            table[i, j] = pos[(s1 * s2 * s, a)]
    return FiniteGroup(table, name="q8")


_NAMED = {
    "s3": lambda: symmetric(3),
    "s4": lambda: symmetric(4),
    "d8": dihedral8,
    "q8": quaternion8,
}

_CYCLIC = re.compile(r"z(\d+)$")


def _factor(token: str) -> FiniteGroup:
    if token in _NAMED:
        return _NAMED[token]()
    m = _CYCLIC.match(token)
    if m:
        n = int(m.group(1))
        if 1 <= n <= MAX_ORDER:
            return cyclic(n)
    raise UnknownPreset(f"unknown group preset {token!r}")


def preset(name: str) -> FiniteGroup:
    name = name.strip().lower()
    factors = [_factor(tok) for tok in name.split("x")] if name else None
    if not factors:
        raise UnknownPreset(f"unknown group preset {name!r}")
    g = factors[0]
    for h in factors[1:]:
        if g.order * h.order > MAX_ORDER:
            raise UnknownPreset(f"preset {name!r} has order above {MAX_ORDER}")
        g = direct_product(g, h)
    if len(factors) > 1:
        object.__setattr__(g, "name", name)
    return g


PRESET_NAMES = ("z2", "z4", "z2xz2", "z8", "s3", "s4", "d8", "q8")


def build_group(spec) -> FiniteGroup:
    """Build a group from a preset name or a raw multiplication table."""
    if isinstance(spec, FiniteGroup):
        return FiniteGroup(spec.table, name=spec.name)
    if isinstance(spec, str):
        return preset(spec)
    return FiniteGroup(np.asarray(spec), name="")


# ---------------------------------------------------------------- files

def _row_lines(text: str) -> list[int]:
    """Line numbers (1-based) where each row of the "table" array starts."""
    start = text.find('"table"')
    if start < 0:
        return []
    lines = []
    depth = 0
    line = text.count("\n", 0, start) + 1
    for ch in text[start:]:
        if ch == "\n":
            line += 1
        elif ch == "[":
            depth += 1
            if depth == 2:
                lines.append(line)
        elif ch == "]":
            depth -= 1
            if depth == 0:
                break
    return lines


def load_group(path) -> FiniteGroup:
    """Load a group file ``{"name", "order", "table"}``.

    Errors carry the file line of the offending row where one applies.
    """
    path = Path(path)
    text = path.read_text()
    try:
        data = json.loads(text)
    except json.JSONDecodeError as exc:
        raise InvalidTable("shape", f"{path}:{exc.lineno}: malformed JSON: {exc.msg}") from exc
    if not isinstance(data, dict) or "table" not in data:
        raise InvalidTable("shape", f"{path}:1: group file needs a 'table' entry")
    table = data["table"]
    rows = _row_lines(text)
    try:
        arr = np.array(table, dtype=np.int64)
    except (ValueError, TypeError) as exc:
        raise InvalidTable("shape", f"{path}:{rows[0] if rows else 1}: table rows must be integer lists") from exc
    if "order" in data and arr.ndim == 2 and data["order"] != arr.shape[0]:
        raise InvalidTable("shape", f"{path}:1: order {data['order']} does not match table size {arr.shape[0]}")
    try:
        return FiniteGroup(arr, name=str(data.get("name", "")))
    except InvalidTable as exc:
        line = rows[exc.row] if exc.row is not None and exc.row < len(rows) else 1
        raise InvalidTable(exc.kind, f"{path}:{line}: {exc}", row=exc.row) from exc


def save_group(g: FiniteGroup, path) -> None:
    rows = ",\n    ".join(json.dumps(r) for r in g.table.tolist())
    Path(path).write_text(
        f'{{\n  "name": {json.dumps(g.name)},\n  "order": {g.order},\n  "table": [\n    {rows}\n  ]\n}}\n'
    )
