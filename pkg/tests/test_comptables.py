from fractions import Fraction

import pytest
from hypothesis import given, strategies as st

from e8good.comptables import (SUPPORTED_GROUPS, Cyc, FiniteGroupTable, TableError, cyclotomic_poly, table_for,
                               verify_orthogonality)


@pytest.mark.parametrize("label", SUPPORTED_GROUPS)
def test_shipped_tables_orthogonal(label):
    assert verify_orthogonality(table_for(label))


def _corrupt(t: FiniteGroupTable, char_idx: int, cls_idx: int, delta) -> FiniteGroupTable:
    chars = [(n, d, list(v)) for n, d, v in t.characters]
    chars[char_idx][2][cls_idx] = chars[char_idx][2][cls_idx] + delta
    return FiniteGroupTable(t.group_label, list(t.classes), chars, t.N)


@pytest.mark.parametrize("label", ["S5", "D8", "Z4", "S3xZ2"])
def test_corrupted_table_rejected(label):
    t = table_for(label)
    assert not verify_orthogonality(_corrupt(t, len(t.characters) - 1, len(t.classes) - 1, Cyc.rational(2)))


def test_s5_degrees():
    t = table_for("S5")
    assert [t.degree(c) for c in ["(5)", "(41)", "(32)", "(311)", "(221)", "(2111)", "(11111)"]] == \
        [1, 4, 5, 6, 5, 4, 1]
    assert t.order == 120


def test_s5_column_orthogonality():
    t = table_for("S5")
    s = sum((t.value(c, "(221)") * t.value(c, "(11111)").conj() for c in t.char_names), Cyc.rational(0))
    assert s == 0


def test_z3_values():
    t = table_for("Z3")
    w = Cyc.zeta(3)
    allowed = [Cyc.rational(1), w, w * w]
    for c in t.char_names:
        for a in t.class_names:
            assert any(t.value(c, a) == x for x in allowed)


def test_d8_reflection_character():
    t = table_for("D8")
    assert [t.value("r", a) for a in ["1", "s", "t", "st", "stst"]] == [2, 0, 0, 0, -2]
    assert t.central_classes() == ["1", "stst"]


def test_central_classes_and_translation():
    assert table_for("S5").central_classes() == ["(11111)"]
    z4 = table_for("Z4")
    assert z4.central_classes() == z4.class_names
    assert z4.translate("g", "g^3") == "1"
    s3z2 = table_for("S3xZ2")
    assert s3z2.translate("((111),1)", "((21),1)") == "((21),0)"


def test_unknown_group():
    with pytest.raises(TableError):
        table_for("A5")


def test_cyclotomic_polynomials():
    assert tuple(cyclotomic_poly(1)) == (-1, 1)
    assert tuple(cyclotomic_poly(12)) == (1, 0, -1, 0, 1)
    assert tuple(cyclotomic_poly(30)) == (1, 1, 0, -1, -1, -1, 0, 1, 1)


def test_cyc_basics():
    w = Cyc.zeta(3)
    assert w + w * w == -1
    assert Cyc.zeta(4) * Cyc.zeta(4) == -1
    assert Cyc.zeta(6, 2) == w
    assert str(Cyc.zeta(6, 2).reduced()) == "z3"
    assert str(w * w) == "z3^2"
    assert str(Cyc.rational(-1)) == "-1"
    assert str(-Cyc.zeta(4)) == "-z4"
    assert (w + w.conj()).is_rational() and (w + w.conj()).to_fraction() == -1
    assert not w.is_real()
    assert (Cyc.zeta(8) + Cyc.zeta(8).conj()).is_real()
    assert not (Cyc.zeta(8) + Cyc.zeta(8).conj()).is_rational()


small = st.fractions(min_value=-5, max_value=5, max_denominator=4)
cyc12 = st.lists(small, min_size=4, max_size=4).map(lambda c: Cyc(12, c))


@given(cyc12, cyc12, cyc12)
def test_cyc_field_axioms(a, b, c):
    assert a + b == b + a
    assert a * b == b * a
    assert (a * b) * c == a * (b * c)
    assert a * (b + c) == a * b + a * c
    assert (a * b).conj() == a.conj() * b.conj()
    assert a - a == 0


@given(cyc12, st.sampled_from([24, 36, 60]))
def test_cyc_lift_preserves_value(a, m):
    assert a.lift(m) == a
    assert a.lift(m).reduced() == a


def test_as_records():
    rec = table_for("Z3").as_records()
    assert [c["name"] for c in rec["classes"]] == ["1", "g", "g^2"]
    assert [c["degree"] for c in rec["characters"]] == [1, 1, 1]
    assert ["1", "z3", "z3^2"] in [c["values"] for c in rec["characters"]]
