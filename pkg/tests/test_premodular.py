from fractions import Fraction

import pytest

from stackcondense.premodular import (
    AlgebraObject,
    CategoryError,
    NonBoson,
    NotCondensable,
    PremodularCategory,
    condense,
    condense_full,
    deligne_product,
    identify,
    monodromy_phase,
    parse_label,
    so_category,
    spin_category,
    stack_and_condense,
)

F = Fraction


def test_spin4():
    c = spin_category(4)
    assert c.simples == ("1", "f", "e", "m")
    assert c.twists == (0, F(1, 2), F(1, 4), F(1, 4))
    assert c.central_charge == 2


def test_spin2():
    c = spin_category(2)
    assert c.simples == ("1", "f", "a", "abar")
    assert c.twists == (0, F(1, 2), F(1, 8), F(1, 8))
    assert c.fuse_names("a", "a") == {"f": 1}
    assert c.fuse_names("abar", "abar") == {"f": 1}
    assert c.central_charge == 1


def test_spin3():
    c = spin_category(3)
    assert c.fuse_names("sigma", "sigma") == {"1": 1, "f": 1}
    assert c.fuse_names("sigma", "f") == {"sigma": 1}
    assert c.central_charge == F(3, 2)


def test_so_categories():
    assert so_category(0).central_charge == 0
    assert so_category(3).central_charge == F(3, 2)
    assert so_category(16) == so_category(0)


@pytest.mark.parametrize("n", range(16))
def test_axioms_hold(n):
    for c in (so_category(n), spin_category(n), deligne_product(so_category(n), spin_category(n))):
        assert c.axiom_failures() == []


def test_axiom_checker_catches_bad_table():
    bad = PremodularCategory(
        "bad", ("1", "a"), (0, 0), (((1, 0), (0, 1)), ((0, 1), (0, 1))), 0, (1, 1)
    )
    assert bad.axiom_failures()


def test_deligne_product():
    x = spin_category(5)
    p = deligne_product(x, so_category(0))
    assert p.rank == 2 * x.rank and p.central_charge == x.central_charge
    q = deligne_product(so_category(1), spin_category(1))
    assert q.rank == 6 and q.central_charge == 1
    for i in range(x.rank):
        for j in range(2):
            assert p.twists[2 * i + j] == (x.twists[i] + so_category(0).twists[j]) % 1


def test_n1_m1_condensation():
    r = stack_and_condense(1, 1)
    out = r.result
    assert out.rank == 2 and sorted(out.twists) == [0, F(1, 2)] and out.central_charge == 1
    assert out.label == "SO(2)_1"
    table = r.module_table()
    assert "A (x) psi(x)1 = psi(x)1 + 1(x)f  [local]" in table
    assert "A (x) 1(x)sigma = 1(x)sigma + psi(x)sigma  [not local]" in table
    assert len(table) == 6


def test_all_256_pairs():
    for n in range(16):
        for m in range(16):
            r = stack_and_condense(n, m)
            c = deligne_product(so_category(n), spin_category(m))
            assert identify(r.result) == f"SO({(n + m) % 16})_1"
            assert r.result.central_charge == F(n + m, 2) % 8
            # dim(1 + b)^2 = 4
            assert r.result.total_dim_squared() * 4 == c.total_dim_squared()
            assert r.result.axiom_failures() == []


def test_locality_matches_monodromy():
    for n in range(16):
        for m in range(16):
            c = deligne_product(so_category(n), spin_category(m))
            b = c.index("psi(x)f")
            r = condense_full(c, AlgebraObject.unit_plus(b))
            for entry in r.modules:
                assert entry.local == (monodromy_phase(c, b, entry.simple) == 0)


def test_so0_so0_condensation():
    c = deligne_product(so_category(0), so_category(0))
    out = condense(c, AlgebraObject.unit_plus(c.index("psi(x)psi")))
    assert out.rank == 2 and out.central_charge == 0 and out.label == "SO(0)_1"


def test_condense_errors():
    c = deligne_product(so_category(1), spin_category(1))
    with pytest.raises(NonBoson):
        condense(c, AlgebraObject.unit_plus(c.index("psi(x)1")))
    with pytest.raises(NotCondensable):
        condense(c, AlgebraObject.unit_plus(c.index("1(x)sigma")))
    with pytest.raises(NotCondensable):
        condense(c, AlgebraObject((0, 0)))


def test_identify():
    assert identify(so_category(5)) == "SO(5)_1"
    assert identify(spin_category(12)) == "Spin(12)_1"
    weird = PremodularCategory("x", ("1", "a"), (0, F(1, 3)), so_category(0).fusion, 0, (1, 1))
    assert identify(weird) == "unrecognized"
    for n in range(16):
        assert identify(so_category(n)) == so_category(n).label
        assert identify(spin_category(n)) == spin_category(n).label


def test_parse_label():
    assert parse_label("so:16") == so_category(0)
    assert parse_label("spin:6").label == "Spin(6)_1"
    with pytest.raises(CategoryError):
        parse_label("su:2")


def test_json_shape():
    j = spin_category(3).to_json()
    assert j["centralCharge"] == "3/2 mod 8"
    assert j["twists"] == ["0", "1/2", "3/16"]
    assert j["dimSquares"] == ["1", "1", "2"]
