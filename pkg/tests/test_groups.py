import json

import numpy as np
import pytest

from stackcondense.groups import (
    PRESET_NAMES,
    FiniteGroup,
    IndexOutOfRange,
    InvalidTable,
    UnknownPreset,
    build_group,
    direct_product,
    element_order,
    load_group,
    preset,
    save_group,
    symmetric,
    validate_table,
)


def test_z2_table():
    g = build_group("z2")
    assert g.order == 2
    assert g.table[1][1] == 0


def test_s4_order():
    assert build_group("s4").order == 24


def test_non_latin_rejected():
    with pytest.raises(InvalidTable) as e:
        build_group([[0, 1], [1, 1]])
    assert e.value.kind == "latin"


def test_identity_not_at_zero_rejected():
    with pytest.raises(InvalidTable) as e:
        build_group([[1, 0], [0, 1]])
    assert e.value.kind == "identity"


def test_non_associative_rejected():
    # a Latin square with identity 0 that is not associative (order 5 loop)
    t = [
        [0, 1, 2, 3, 4],
        [1, 0, 3, 4, 2],
        [2, 4, 0, 1, 3],
        [3, 2, 4, 0, 1],
        [4, 3, 1, 2, 0],
    ]
    with pytest.raises(InvalidTable) as e:
        build_group(t)
    assert e.value.kind == "associativity"


def test_bad_shape_rejected():
    with pytest.raises(InvalidTable) as e:
        build_group([[0, 1]])
    assert e.value.kind == "shape"


def test_unknown_preset():
    with pytest.raises(UnknownPreset):
        preset("a5")


@pytest.mark.parametrize("name,order", [("z2", 2), ("z4", 4), ("z2xz2", 4), ("z8", 8), ("s3", 6), ("s4", 24), ("d8", 8), ("q8", 8)])
def test_preset_orders(name, order):
    g = preset(name)
    assert g.order == order
    validate_table(g.table)  # round trip
    assert build_group(g) == g


def test_element_orders():
    assert element_order(preset("z2"), 0) == 1
    assert element_order(preset("z4"), 1) == 4
    s4 = symmetric(4)
    # transpositions: permutations with exactly two moved points
    from itertools import permutations

    perms = sorted(permutations(range(4)))
    trans = [i for i, p in enumerate(perms) if sum(p[k] != k for k in range(4)) == 2]
    assert len(trans) == 6
    assert all(element_order(s4, i) == 2 for i in trans)
    with pytest.raises(IndexOutOfRange):
        element_order(s4, 24)


def test_q8_and_d8_are_different():
    q8, d8 = preset("q8"), preset("d8")
    assert sorted(element_order(q8, i) for i in range(8)) == [1, 2, 4, 4, 4, 4, 4, 4]
    assert sorted(element_order(d8, i) for i in range(8)) == [1, 2, 2, 2, 2, 2, 4, 4]


def test_direct_product_componentwise():
    g, h = preset("z2"), preset("s3")
    p = direct_product(g, h)
    assert p.order == g.order * h.order
    for a1 in range(2):
        for b1 in range(6):
            for a2 in range(2):
                for b2 in range(6):
                    got = p.mul(a1 * 6 + b1, a2 * 6 + b2)
                    assert got == g.mul(a1, a2) * 6 + h.mul(b1, b2)


def test_group_file_round_trip(tmp_path):
    g = preset("d8")
    path = tmp_path / "d8.json"
    save_group(g, path)
    g2 = load_group(path)
    assert g2 == g and np.array_equal(g2.table, g.table)


def test_group_file_error_has_line(tmp_path):
    g = preset("z4")
    table = g.table.tolist()
    table[2] = [2, 3, 0, 0]
    path = tmp_path / "bad.json"
    path.write_text(json.dumps({"name": "bad", "order": 4, "table": table}, indent=1))
    with pytest.raises(InvalidTable) as e:
        load_group(path)
    assert "line" in str(e.value)


def test_equality_by_content():
    assert preset("s3") == preset("s3")
    assert preset("z4") != preset("z2xz2")
    assert isinstance(hash(preset("z2")), int)
    assert FiniteGroup(preset("z2").table).key == preset("z2").key
