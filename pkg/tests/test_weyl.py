import itertools
import os
import shutil

import pytest
from hypothesis import given, strategies as st

from e8good.comptables import cyclotomic_poly
from e8good.weyl import (AmbiguousClass, WeylError, char_poly, conjugate_by_simple, cyclic_shift_minimize,
                         cyclic_shift_minimize_tracked, data_dir, default_lusztig_map, hooks_into, identify_class,
                         identity, is_reduced, load_catalog, longest_element, normalize_p, read_records,
                         reduced_word, simple_element, word_to_element)

COXETER = [1, 3, 4, 2, 5, 6, 7, 8]
Z11_CELL = [1, 4, 2, 3, 4, 3, 5, 6, 7, 8]

e8_words = st.lists(st.integers(1, 8), max_size=30)


def test_identity_and_involution():
    assert word_to_element("E8", []).length == 0
    assert word_to_element("E8", [1, 1]) == identity("E8")


def test_coxeter_length():
    assert word_to_element("E8", COXETER).length == 8


def test_longest_element_length_equals_positive_roots():
    from e8good.rootsystem import root_system
    assert longest_element("E8").length == root_system("E8").positive_count == 120


def test_is_reduced():
    assert is_reduced("E8", Z11_CELL)
    assert word_to_element("E8", Z11_CELL).length == 10
    assert not is_reduced("E8", [1, 1, 2])


@given(e8_words)
def test_reduced_word_roundtrip(word):
    w = word_to_element("E8", word)
    red = reduced_word(w)
    assert len(red) == w.length
    assert word_to_element("E8", red) == w
    assert is_reduced("E8", red)


def test_cyclic_shift_small_cases():
    assert cyclic_shift_minimize(identity("E8")) == identity("E8")
    assert cyclic_shift_minimize(word_to_element("A2", [1, 2, 1])).length == 1


@given(st.lists(st.integers(1, 8), max_size=16))
def test_cyclic_shift_properties(word):
    w = word_to_element("E8", word)
    m, conj = cyclic_shift_minimize_tracked(w)
    assert m.length <= w.length
    assert cyclic_shift_minimize(m).length == m.length
    x = w
    for j in reversed(conj):
        x = conjugate_by_simple(x, j)
    assert x == m
    assert char_poly(m) == char_poly(w)


def test_identify_known_classes():
    cat = load_catalog("E8")
    assert identify_class(identity("E8"), cat).min_length == 0
    cox = identify_class(word_to_element("E8", COXETER), cat)
    assert cox.min_length == 8
    # the Coxeter element of E8 has primitive 30th roots of unity as eigenvalues
    assert list(cox.char_poly) == list(reversed(cyclotomic_poly(30)))
    assert identify_class(simple_element("E8", 1), cat).min_length == 1


@pytest.mark.parametrize("label", ["E8", "A3", "A2", "A1"])
def test_catalog_invariants(label):
    for c in load_catalog(label):
        assert is_reduced(label, list(c.representative_word))
        w = word_to_element(label, list(c.representative_word))
        assert w.length == c.min_length
        assert char_poly(w) == c.char_poly
        assert cyclic_shift_minimize(w).length == c.min_length


def _enumerate(label):
    els = {identity(label).key: identity(label)}
    frontier = [identity(label)]
    rank = identity(label).rank
    while frontier:
        nxt = []
        for x in frontier:
            for j in range(1, rank + 1):
                y = word_to_element(label, reduced_word(x) + [j])
                if y.key not in els:
                    els[y.key] = y
                    nxt.append(y)
        frontier = nxt
    return list(els.values())


@pytest.mark.parametrize("label,order", [("A1", 2), ("A2", 6), ("A3", 24)])
def test_identify_class_against_brute_force(label, order):
    els = _enumerate(label)
    assert len(els) == order
    inv = {x.key: x.inverse() for x in els}

    def mul(a, b):
        return word_to_element(label, reduced_word(a) + reduced_word(b))
    classes = []
    seen = set()
    for x in els:
        if x.key in seen:
            continue
        cl = {mul(mul(g, x), inv[g.key]).key for g in els}
        seen |= cl
        classes.append(cl)
    cat = load_catalog(label)
    assert len(classes) == len(cat)
    by_key = {x.key: x for x in els}
    labels = [{identify_class(by_key[k], cat).name for k in cl} for cl in classes]
    assert all(len(s) == 1 for s in labels)
    assert len({next(iter(s)) for s in labels}) == len(classes)


def test_hooks_known_examples():
    cox = word_to_element("E8", COXETER)
    for p in (2, 3, 5, 7):
        assert hooks_into(cox, "E8", p)
        assert hooks_into(identity("E8"), "1", p)
    assert hooks_into(word_to_element("E8", Z11_CELL), "E8(a1)", 2)


def test_hooks_rejects_non_minimal():
    # a conjugate of the Coxeter element of length 10 lies in the right class but is not minimal
    cox = word_to_element("E8", COXETER)
    w = next(x for x in (word_to_element("E8", [j] + COXETER + [j]) for j in range(1, 9)) if x.length == 10)
    assert identify_class(w, load_catalog("E8")).name == identify_class(cox, load_catalog("E8")).name
    assert not hooks_into(w, "E8", 2)
    with pytest.raises(WeylError):
        hooks_into(identity("E8"), "no such class", 2)


def test_lusztig_map_preimages_nonempty():
    table = default_lusztig_map("E8")
    for p in ("2", "3", "5", ">=7"):
        for o in table.unipotent_classes(p):
            assert table.preimages(o, p)


def test_normalize_p():
    assert normalize_p(7) == normalize_p(11) == normalize_p(">=7") == ">=7"
    assert normalize_p(2) == "2"
    with pytest.raises(WeylError):
        normalize_p(4)


def test_read_records_malformed(tmp_path):
    f = tmp_path / "x.dat"
    f.write_text("a: 1\nnot a record line\n")
    with pytest.raises(ValueError):
        read_records(f)
    f.write_text("# c\na: 1\nb: two words\n\nc: 3\n")
    assert read_records(f) == [{"a": "1", "b": "two words"}, {"c": "3"}]


def test_data_dir_override(tmp_path, monkeypatch):
    copy = tmp_path / "data"
    shutil.copytree(data_dir(), copy)
    monkeypatch.setenv("E8GOOD_DATA", str(copy))
    assert data_dir() == copy
    assert len(load_catalog("A3")) == 5


def test_budget_exhaustion_is_reported():
    with pytest.raises(AmbiguousClass):
        cyclic_shift_minimize(longest_element("E8"), budget=3)
