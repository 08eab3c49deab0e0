"""JSON payloads for cochains, cocycle bundles and reports, plus atomic file output."""

from __future__ import annotations

import json
import os
import tempfile
from pathlib import Path

import numpy as np

from .cochains import F2, QZ, Cochain, CochainError, dim_cochains
from .groups import FiniteGroup, GroupError, build_group
from .linalg import QmodZVector
from .supercoh import SupercohCocycle


class FormatError(ValueError):
    pass


def dumps(obj) -> str:
    """Deterministic JSON: sorted keys, fixed separators, trailing newline."""
    return json.dumps(obj, sort_keys=True, indent=2, ensure_ascii=True) + "\n"


def write_atomic(path: str | os.PathLike, text: str) -> None:
    path = Path(path)
    fd, tmp = tempfile.mkstemp(dir=path.parent or ".", prefix=f".{path.name}.", suffix=".tmp")
    try:
        with os.fdopen(fd, "w", encoding="utf-8") as fh:
            fh.write(text)
        os.replace(tmp, path)
    except BaseException:
        if os.path.exists(tmp):
            os.unlink(tmp)
        raise


def cochain_to_json(c: Cochain) -> dict:
    if c.coeff == F2:
        values = [int(v) for v in c.values]
    else:
        values = [str(v) for v in c.values.values()]
    return {
        "group": c.group.name or c.group.key,
        "degree": c.degree,
        "coeff": c.coeff,
        "values": values,
    }


def _resolve_group(ref, group: FiniteGroup | None) -> FiniteGroup:
    if group is not None:
        if ref not in (group.name, group.key):
            raise FormatError(f"cochain refers to group {ref!r}, expected {group.name or group.key!r}")
        return group
    if not isinstance(ref, str):
        raise FormatError("cochain 'group' must be a string")
    try:
        return build_group(ref)
    except GroupError as e:
        raise FormatError(f"cannot resolve group {ref!r}: {e}") from None


def cochain_from_json(obj: dict, group: FiniteGroup | None = None) -> Cochain:
    if not isinstance(obj, dict):
        raise FormatError("cochain payload must be an object")
    missing = {"group", "degree", "coeff", "values"} - obj.keys()
    if missing:
        raise FormatError(f"cochain payload missing {sorted(missing)}")
    g = _resolve_group(obj["group"], group)
    n = obj["degree"]
    if not isinstance(n, int) or n < 0:
        raise FormatError("degree must be a nonnegative integer")
    vals = obj["values"]
    if not isinstance(vals, list) or len(vals) != dim_cochains(g, n):
        raise FormatError(f"expected {dim_cochains(g, n)} values for degree {n}")
    if obj["coeff"] == F2:
        if any(v not in (0, 1) or isinstance(v, bool) for v in vals):
            raise FormatError("f2 values must be 0 or 1")
        return Cochain(g, n, np.array(vals, dtype=np.uint8), F2)
    if obj["coeff"] == QZ:
        try:
            q = QmodZVector.from_values([str(v) for v in vals])
        except (ValueError, ZeroDivisionError) as e:
            raise FormatError(f"bad qz value: {e}") from None
        return Cochain(g, n, q, QZ)
    raise FormatError("coeff must be 'f2' or 'qz'")


def load_cochain(path, group: FiniteGroup | None = None) -> Cochain:
    return cochain_from_json(_read(path), group)


def bundle_to_json(c: SupercohCocycle) -> dict:
    out = {k: cochain_to_json(getattr(c, k)) for k in ("kappa", "alpha", "beta")}
    out["group"] = c.group.name or c.group.key
    if c.gamma is not None:
        out["gamma"] = cochain_to_json(c.gamma)
    return out


def bundle_from_json(obj: dict, group: FiniteGroup | None = None) -> SupercohCocycle:
    if not isinstance(obj, dict):
        raise FormatError("bundle payload must be an object")
    missing = {"group", "kappa", "alpha", "beta"} - obj.keys()
    if missing:
        raise FormatError(f"bundle missing {sorted(missing)}")
    g = _resolve_group(obj["group"], group)
    parts = {k: cochain_from_json(obj[k], g) for k in ("kappa", "alpha", "beta")}
    gamma = cochain_from_json(obj["gamma"], g) if obj.get("gamma") is not None else None
    try:
        return SupercohCocycle(parts["kappa"], parts["alpha"], parts["beta"], gamma)
    except CochainError as e:
        raise FormatError(str(e)) from None


def load_bundle(path, group: FiniteGroup | None = None) -> SupercohCocycle:
    return bundle_from_json(_read(path), group)


def orbit_to_json(orbit) -> dict:
    return {
        "period": orbit.period,
        "states": [
            {"alpha": cochain_to_json(s.alpha), "beta": cochain_to_json(s.beta)} for s in orbit.states
        ],
        "checks": dict(orbit.checks),
    }


def _read(path):
    try:
        with open(path, encoding="utf-8") as fh:
            return json.load(fh)
    except OSError as e:
        raise FormatError(f"cannot read {path}: {e.strerror}") from None
    except json.JSONDecodeError as e:
        raise FormatError(f"{path}:{e.lineno}: invalid JSON: {e.msg}") from None
