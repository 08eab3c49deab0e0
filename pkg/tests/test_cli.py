import json

import numpy as np
import pytest

from stackcondense.cli import main
from stackcondense.cochains import QZ, Cochain
from stackcondense.cohomology import named_classes, reduced_kappa
from stackcondense.groups import preset, save_group
from stackcondense.io import (
    FormatError,
    bundle_from_json,
    bundle_to_json,
    cochain_from_json,
    cochain_to_json,
    write_atomic,
)
from stackcondense.supercoh import SupercohCocycle


def run(capsys, *argv):
    code = main(list(argv))
    out = capsys.readouterr()
    return code, out.out, out.err


def run_json(capsys, *argv):
    code, out, err = run(capsys, *argv)
    assert code == 0, err
    return json.loads(out)


@pytest.mark.parametrize("group,degree,dim", [("z2", 3, 1), ("s4", 2, 2), ("z4", 2, 1)])
def test_cohomology(capsys, group, degree, dim):
    assert run_json(capsys, "cohomology", "--group", group, "--degree", str(degree))["dim"] == dim


def test_cohomology_text_and_basis(capsys):
    code, out, _ = run(capsys, "cohomology", "--group", "z2xz2", "--degree", "2", "--format", "text")
    assert code == 0 and out.strip() == "dim H^2(z2xz2; F2) = 3"
    rep = run_json(capsys, "cohomology", "--group", "z2xz2", "--degree", "2", "--basis")
    assert len(rep["basis"]) == 3


def test_steenrod(capsys):
    rep = run_json(capsys, "steenrod", "--group", "s4", "--k", "1", "--class", "y")
    assert rep["trivial"] is False
    rep = run_json(capsys, "steenrod", "--group", "z2", "--k", "1", "--class", "x", "--degree", "1")
    assert rep["trivial"] is False and rep["coordinates"] == [1]


def test_condense(capsys):
    rep = run_json(capsys, "condense", "--left", "so:1", "--right", "spin:1")
    assert rep["identified"] == "SO(2)_1"
    assert "A (x) psi(x)1 = psi(x)1 + 1(x)f  [local]" in rep["modules"]
    assert run_json(capsys, "condense", "--left", "so:0", "--right", "spin:16")["identified"] == "SO(0)_1"
    assert run_json(capsys, "condense", "--left", "so:7", "--right", "spin:6")["identified"] == "SO(13)_1"


def test_consistency(capsys):
    rep = run_json(capsys, "consistency", "--group", "z2", "--kappa", "x^2")
    assert [v["n"] for v in rep["verdicts"] if v["feasible"]] == list(range(0, 16, 2))
    assert rep["subgroup"] == {"generator": 2, "order": 8}
    rep = run_json(capsys, "consistency", "--group", "z2", "--kappa", "0")
    assert rep["subgroup"] == {"generator": 1, "order": 16}
    rep = run_json(capsys, "consistency", "--group", "s4", "--kappa", "y")
    assert [v["n"] for v in rep["verdicts"] if v["feasible"]] == [0, 4, 8, 12]


def test_consistency_class_selector(capsys):
    rep = run_json(capsys, "consistency", "--group", "z2xz2", "--kappa", "class:7")
    assert rep["kappa"] == "class:7"
    code, _, err = run(capsys, "consistency", "--group", "z2xz2", "--kappa", "class:8")
    assert code == 2 and "out of range" in err


def test_shift_orbit_selectors(capsys):
    assert run_json(capsys, "shift-orbit", "--group", "z2", "--kappa", "x^2")["period"] == 2
    assert run_json(capsys, "shift-orbit", "--group", "d8", "--kappa", "0")["period"] == 1


def test_shift_orbit_bundles(capsys, tmp_path, s4, s4_classes):
    g = preset("z2")
    k = reduced_kappa(named_classes(g)["x^2"])
    p = tmp_path / "z2.json"
    p.write_text(json.dumps(bundle_to_json(SupercohCocycle.trivial(g, k))))
    rep = run_json(capsys, "shift-orbit", "--bundle", str(p))
    assert rep["period"] == 2 and all(rep["checks"].values())
    p4 = tmp_path / "s4.json"
    p4.write_text(json.dumps(bundle_to_json(SupercohCocycle(s4_classes["y"], s4_classes["y"], Cochain.zero(s4, 3)))))
    assert run_json(capsys, "shift-orbit", "--bundle", str(p4))["period"] == 4


def test_shift_orbit_invalid_bundle(capsys, tmp_path, rng):
    g = preset("s3")
    c = SupercohCocycle(Cochain.zero(g, 2), Cochain.zero(g, 2), Cochain.random(g, 3, rng))
    p = tmp_path / "bad.json"
    p.write_text(json.dumps(bundle_to_json(c)))
    code, out, err = run(capsys, "shift-orbit", "--bundle", str(p))
    assert code == 2 and out == "" and "Gu-Wen layer" in err


def test_input_errors(capsys, tmp_path):
    assert run(capsys, "cohomology", "--group", "a5", "--degree", "1")[0] == 2
    assert run(capsys, "cohomology", "--degree", "1")[0] == 2
    assert run(capsys, "condense", "--left", "su:2", "--right", "spin:1")[0] == 2
    assert run(capsys, "consistency", "--group", "z2", "--kappa", "q")[0] == 2
    assert run(capsys, "frobnicate")[0] == 2
    assert run(capsys, "cohomology", "--group", "s4", "--degree", "3", "--row-cap", "100")[0] == 2
    bad = tmp_path / "g.json"
    bad.write_text('{"name": "g", "order": 2, "table": [[0, 1],\n [1, 1]]}')
    code, _, err = run(capsys, "cohomology", "--group", str(bad), "--degree", "1")
    assert code == 2 and "g.json:2:" in err


def test_group_file_input(capsys, tmp_path):
    path = tmp_path / "q8.json"
    save_group(preset("q8"), path)
    assert run_json(capsys, "cohomology", "--group", str(path), "--degree", "2")["dim"] == 2


def test_out_file_atomic_and_deterministic(capsys, tmp_path):
    out = tmp_path / "r.json"
    args = ["consistency", "--group", "z2xz2", "--kappa", "class:3", "--out", str(out)]
    assert main(args) == 0
    first = out.read_bytes()
    assert main(args) == 0
    assert out.read_bytes() == first
    assert [p.name for p in tmp_path.iterdir()] == ["r.json"]
    # failing command leaves the previous file untouched
    assert main(["consistency", "--group", "z2xz2", "--kappa", "nope", "--out", str(out)]) == 2
    assert out.read_bytes() == first


def test_write_atomic_no_partial(tmp_path):

    target = tmp_path / "x.txt"
    write_atomic(target, "ok\n")
    with pytest.raises(TypeError):
        write_atomic(target, 12345)
    assert target.read_text() == "ok\n"
    assert [p.name for p in tmp_path.iterdir()] == ["x.txt"]


def test_cochain_json_round_trip(rng):
    g = preset("s3")
    c = Cochain.random(g, 2, rng)
    assert cochain_from_json(json.loads(json.dumps(cochain_to_json(c)))) == c
    q = Cochain.random(g, 2, rng, QZ, 12)
    j = cochain_to_json(q)
    assert all("/" in v or v == "0" for v in j["values"])
    assert cochain_from_json(j) == q


def test_cochain_json_errors():
    g = preset("z2")
    good = cochain_to_json(Cochain.zero(g, 2))
    for broken in (
        {**good, "values": [0, 0]},
        {**good, "coeff": "z"},
        {**good, "values": [2]},
        {k: v for k, v in good.items() if k != "degree"},
        {**good, "group": "a5"},
    ):
        with pytest.raises(FormatError):
            cochain_from_json(broken)


def test_bundle_round_trip(s4_classes, s4):
    c = SupercohCocycle(s4_classes["y"], s4_classes["y"], Cochain.zero(s4, 3))
    c2 = bundle_from_json(json.loads(json.dumps(bundle_to_json(c))))
    assert (c2.kappa, c2.alpha, c2.beta) == (c.kappa, c.alpha, c.beta)


def test_verify_properties_deterministic(capsys):
    code1, out1, _ = run(capsys, "verify", "--suite", "properties", "--seed", "42")
    code2, out2, _ = run(capsys, "verify", "--suite", "properties", "--seed", "42")
    assert code1 == 0 and out1 == out2
    assert all(c["pass"] for c in json.loads(out1)["checks"])


def test_verify_mutation_cup1(capsys):
    code, out, err = run(capsys, "verify", "--suite", "paper", "--inject-fault", "cup1")
    assert code == 1
    rep = json.loads(out)
    failed = [c["name"] for c in rep["checks"] if not c["pass"]]
    assert "cup-1 coboundary identity" in failed
    assert "cup-1 coboundary identity" in err


def test_verify_paper_passes(capsys):
    code, out, _ = run(capsys, "verify", "--suite", "paper", "--format", "text")
    print(out)
    assert code == 0, out
