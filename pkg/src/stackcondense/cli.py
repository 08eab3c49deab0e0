"""Command-line front end.

Exit codes: 0 success, 1 a check failed, 2 bad input.
"""

from __future__ import annotations

import argparse
import contextlib
import sys
from pathlib import Path

from . import linalg
from .cochains import CochainError, Cochain, steenrod_sq
from .cohomology import (
    TooLarge,
    class_coordinates,
    cohomology_basis,
    cohomology_dim,
    combine,
    default_h2_basis,
    is_coboundary,
    named_classes,
    reduced_kappa,
)
from .groups import FiniteGroup, GroupError, load_group, preset
from .io import FormatError, bundle_to_json, cochain_to_json, dumps, load_bundle, load_cochain, orbit_to_json, write_atomic
from .premodular import AlgebraObject, CategoryError, condense_full, deligne_product, parse_label
from .spinflow import consistency_report
from .supercoh import SupercohCocycle, orbit_period, predicted_period, validate_cocycle
from .verify import injected_fault, run_suite

EXIT_OK, EXIT_CHECK, EXIT_INPUT = 0, 1, 2


class InputError(Exception):
    pass


class CheckFailed(Exception):
    def __init__(self, message: str, report):
        super().__init__(message)
        self.report = report


# ---------------------------------------------------------------- input resolution

def resolve_group(spec: str | None) -> FiniteGroup:
    if not spec:
        raise InputError("--group is required")
    path = Path(spec)
    if path.suffix == ".json" or path.exists():
        return load_group(path)
    return preset(spec)


def resolve_class(g: FiniteGroup, selector: str, degree: int = 2) -> tuple[str, Cochain]:
    """A named ring element, ``class:K`` (bitmask over the default H^2 basis) or a cochain file."""
    sel = selector.strip()
    if sel.startswith("class:"):
        if degree != 2:
            raise InputError("class:K selectors only index H^2")
        try:
            mask = int(sel[6:])
        except ValueError:
            raise InputError(f"bad class selector {selector!r}") from None
        basis = default_h2_basis(g)
        if not 0 <= mask < 1 << len(basis):
            raise InputError(f"class index {mask} out of range for dim H^2 = {len(basis)}")
        return sel, combine(basis, mask, g, 2)
    named = named_classes(g)
    if sel in named:
        c = named[sel]
        if c.degree != degree:
            raise InputError(f"{sel!r} has degree {c.degree}, expected {degree}")
        return sel, c
    if Path(sel).exists():
        c = load_cochain(sel, g)
        if c.degree != degree:
            raise InputError(f"cochain in {sel} has degree {c.degree}, expected {degree}")
        return Path(sel).name, c
    raise InputError(f"unknown class {selector!r} for this group; named classes: {sorted(named)}")


# ---------------------------------------------------------------- commands

def cmd_cohomology(args) -> dict:
    g = resolve_group(args.group)
    n = args.degree
    if n < 0:
        raise InputError("degree must be nonnegative")
    out = {"group": g.name or g.key, "degree": n, "dim": cohomology_dim(g, n)}
    if args.basis:
        out["basis"] = [cochain_to_json(c) for c in cohomology_basis(g, n)]
    return out


def cmd_steenrod(args) -> dict:
    g = resolve_group(args.group)
    label, z = resolve_class(g, args.cls, args.degree)
    sq = steenrod_sq(args.k, z).representative
    out = {
        "group": g.name or g.key,
        "class": label,
        "k": args.k,
        "trivial": is_coboundary(sq) is not None,
        "square": cochain_to_json(sq),
    }
    if sq.degree == 2:
        coords = class_coordinates(sq, default_h2_basis(g))
        out["coordinates"] = coords
    return out


def cmd_shift_orbit(args) -> dict:
    if args.bundle:
        g = resolve_group(args.group) if args.group else None
        c = load_bundle(args.bundle, g)
    else:
        g = resolve_group(args.group)
        _, k = resolve_class(g, args.kappa or "0")
        c = SupercohCocycle.trivial(g, reduced_kappa(k))
    rep = validate_cocycle(c)
    if not rep.ab_valid:
        raise InputError("invalid cocycle: " + "; ".join(rep.failures()))
    orbit = orbit_period(c)
    out = orbit_to_json(orbit)
    out["predicted"] = predicted_period(c.group, c.kappa)
    out["start"] = bundle_to_json(c)
    return out


def cmd_condense(args) -> dict:
    left, right = parse_label(args.left), parse_label(args.right)
    c = deligne_product(left, right)
    b = f"{left.simples[1]}(x){right.simples[1]}"
    r = condense_full(c, AlgebraObject.unit_plus(c.index(b)))
    return {
        "input": c.to_json(),
        "algebra": f"1 + {b}",
        "modules": r.module_table(),
        "result": r.result.to_json(),
        "identified": r.result.label,
    }


def cmd_consistency(args) -> dict:
    g = resolve_group(args.group)
    label, k = resolve_class(g, args.kappa or "0")
    return consistency_report(g, k, label).to_json()


def cmd_verify(args) -> dict:
    ctx = injected_fault(args.inject_fault) if args.inject_fault else contextlib.nullcontext()
    with ctx:
        results = run_suite(args.suite, args.seed)
    out = {"suite": args.suite, "seed": args.seed, "checks": [r.to_json() for r in results]}
    out["pass"] = all(r.passed for r in results)
    if not out["pass"]:
        failed = ", ".join(r.name for r in results if not r.passed)
        raise CheckFailed(f"failed: {failed}", out)
    return out


# ---------------------------------------------------------------- text rendering

def render_text(command: str, rep: dict) -> str:
    lines: list[str] = []
    if command == "cohomology":
        lines.append(f"dim H^{rep['degree']}({rep['group']}; F2) = {rep['dim']}")
    elif command == "steenrod":
        lines.append(f"Sq^{rep['k']} {rep['class']}: {'trivial' if rep['trivial'] else 'nontrivial'}")
        if rep.get("coordinates") is not None:
            lines.append(f"coordinates in H^2 basis: {rep['coordinates']}")
    elif command == "shift-orbit":
        lines.append(f"period {rep['period']} (predicted {rep['predicted']})")
        lines += [f"  {k}: {'pass' if v else 'FAIL'}" for k, v in sorted(rep["checks"].items())]
    elif command == "condense":
        lines += rep["modules"]
        res = rep["result"]
        lines.append(f"result: {rep['identified']}  c = {res['centralCharge']}  rank {res['rank']}")
    elif command == "consistency":
        fs = [v["n"] for v in rep["verdicts"] if v["feasible"]]
        sub = rep["subgroup"]
        lines.append(f"consistent n: {fs}")
        lines.append(f"subgroup <{sub['generator']}> of order {sub['order']}")
        tb = rep["theoremB"]
        lines.append(f"period cross-check: {'pass' if tb['pass'] else 'FAIL'} (predicted period {tb['predictedPeriod']})")
    elif command == "verify":
        lines += [f"{'pass' if c['pass'] else 'FAIL'}  {c['name']}" + (f"  {c['detail']}" if c["detail"] else "") for c in rep["checks"]]
        lines.append("all checks pass" if rep["pass"] else "some checks FAILED")
    return "\n".join(lines) + "\n"


# ---------------------------------------------------------------- parser

COMMANDS = {
    "cohomology": cmd_cohomology,
    "steenrod": cmd_steenrod,
    "shift-orbit": cmd_shift_orbit,
    "condense": cmd_condense,
    "consistency": cmd_consistency,
    "verify": cmd_verify,
}


def build_parser() -> argparse.ArgumentParser:
    common = argparse.ArgumentParser(add_help=False)
    common.add_argument("--group", help="preset name (z2, s4, z2xz2, ...) or group JSON file")
    common.add_argument("--out", help="write the report here instead of stdout")
    common.add_argument("--format", choices=("json", "text"), default="json")
    common.add_argument("--row-cap", type=int, help="maximum rows of any coboundary matrix")
    common.add_argument("--seed", type=int, default=0, help="seed for randomized checks")

    p = argparse.ArgumentParser(prog="stackcondense", description=__doc__.splitlines()[0])
    sub = p.add_subparsers(dest="command", required=True)

    s = sub.add_parser("cohomology", parents=[common], help="dimension of H^n(BG; F2)")
    s.add_argument("--degree", type=int, required=True)
    s.add_argument("--basis", action="store_true", help="include basis representatives")

    s = sub.add_parser("steenrod", parents=[common], help="Sq^k of a class")
    s.add_argument("--k", type=int, required=True)
    s.add_argument("--class", dest="cls", required=True, help="named class, class:K or cochain file")
    s.add_argument("--degree", type=int, default=2)

    s = sub.add_parser("shift-orbit", parents=[common], help="iterate the stack-and-condense shift")
    s.add_argument("--bundle", help="cocycle bundle JSON")
    s.add_argument("--kappa", help="kappa selector when no bundle is given (alpha = beta = 0)")

    s = sub.add_parser("condense", parents=[common], help="condense psi (x) f in SO(n)_1 (x) Spin(m)_1")
    s.add_argument("--left", required=True, help="so:n")
    s.add_argument("--right", required=True, help="spin:m")

    s = sub.add_parser("consistency", parents=[common], help="which Spin(n)_1 couple to (G, kappa)")
    s.add_argument("--kappa", default="0")

    s = sub.add_parser("verify", parents=[common], help="run a self-verification suite")
    s.add_argument("--suite", choices=("paper", "properties"), default="paper")
    s.add_argument("--inject-fault", choices=("cup1",), help=argparse.SUPPRESS)
    return p


def emit(args, rep: dict) -> None:
    text = dumps(rep) if args.format == "json" else render_text(args.command, rep)
    if args.out:
        write_atomic(args.out, text)
    else:
        sys.stdout.write(text)


def main(argv: list[str] | None = None) -> int:
    parser = build_parser()
    try:
        args = parser.parse_args(argv)
    except SystemExit as e:
        return EXIT_INPUT if e.code else EXIT_OK
    if args.out and not Path(args.out).resolve().parent.is_dir():
        print(f"error: output directory for {args.out} does not exist", file=sys.stderr)
        return EXIT_INPUT
    old_cap = linalg.row_cap()
    if args.row_cap is not None:
        if args.row_cap <= 0:
            print("error: --row-cap must be positive", file=sys.stderr)
            return EXIT_INPUT
        linalg.set_row_cap(args.row_cap)
    try:
        rep = COMMANDS[args.command](args)
    except CheckFailed as e:
        emit(args, e.report)
        print(f"check failure: {e}", file=sys.stderr)
        return EXIT_CHECK
    except (InputError, GroupError, FormatError, CategoryError, TooLarge, CochainError) as e:
        print(f"error: {e}", file=sys.stderr)
        return EXIT_INPUT
    finally:
        linalg.set_row_cap(old_cap)
    emit(args, rep)
    return EXIT_OK


if __name__ == "__main__":
    sys.exit(main())
