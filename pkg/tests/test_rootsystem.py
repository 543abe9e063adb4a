import itertools

import numpy as np
import pytest

from e8good.rootsystem import (Root, RootSystemError, cartan_datum, jacobi_defect, reflection_permutation,
                               root_height, root_system, simple_reflection, validate_cartan)

CLOSED_FORM = {**{f"A{n}": n * (n + 1) for n in range(1, 9)},
               **{f"D{n}": 2 * n * (n - 1) for n in range(4, 9)},
               "E6": 72, "E7": 126, "E8": 240}


@pytest.mark.parametrize("label,count", sorted(CLOSED_FORM.items()))
def test_root_counts_closed_form(label, count):
    rs = root_system(label)
    assert len(rs.roots) == count
    assert rs.positive_count == count // 2


def test_a1_trivial():
    rs = root_system("A1")
    assert (len(rs.roots), rs.positive_count) == (2, 1)


def test_a2_matches_hand_enumeration():
    rs = root_system("A2")
    assert {r.coeffs for r in rs.roots[:rs.positive_count]} == {(1, 0), (0, 1), (1, 1)}
    assert len(rs.roots) == 6


def _e8_lattice_norm2():
    """Norm-2 vectors of the even unimodular lattice in R^8 (independent of the Cartan closure)."""
    vecs = []
    for i, j in itertools.combinations(range(8), 2):
        for si, sj in itertools.product((1, -1), repeat=2):
            v = [0] * 8
            v[i], v[j] = si, sj
            vecs.append(tuple(v))
    for signs in itertools.product((1, -1), repeat=8):
        if signs.count(-1) % 2 == 0:
            vecs.append(tuple(s * 0.5 for s in signs))
    return vecs


def test_e8_count_against_lattice_oracle(e8):
    assert len(_e8_lattice_norm2()) == len(e8.roots) == 240
    # every generated root has norm 2 in the Cartan form
    assert (np.diag(e8.gram) == 2).all()


def test_heights(e8):
    assert root_height(e8.roots[e8.simple(1)]) == 1
    assert e8.roots[e8.find((0, 1, 1, 2, 1, 0, 0, 0))].height == 5
    # Coxeter number of E8 is 240 / 8 = 30, so the highest root has height 29
    assert e8.highest_root.height == 240 // 8 - 1 == 29
    assert e8.highest_root.coeffs == (2, 3, 4, 6, 5, 4, 3, 2)
    assert e8.highest_root.height == max(r.height for r in e8.roots)


def test_ordering_by_height(e8):
    hs = [r.height for r in e8.roots[:e8.positive_count]]
    assert hs == sorted(hs)
    for i in range(e8.positive_count):
        assert e8.roots[e8.neg(i)].coeffs == tuple(-c for c in e8.roots[i].coeffs)


def test_simple_reflections(e8):
    a1 = e8.roots[0]
    assert simple_reflection(e8, a1, 1) == -a1
    a2 = e8.roots[e8.simple(2)]
    assert simple_reflection(e8, a2, 4).coeffs == (0, 1, 0, 1, 0, 0, 0, 0)


@pytest.mark.parametrize("j", range(1, 9))
def test_reflections_are_involutions(e8, j):
    s = reflection_permutation(e8, j)
    assert (s[s] == np.arange(240)).all()
    for r in e8.roots:
        assert simple_reflection(e8, simple_reflection(e8, r, j), j) == r


def test_structure_constants_all_pairs(e8):
    n = len(e8.roots)
    seen = 0
    for a in range(n):
        for b in range(n):
            s = e8.sum_table(a, b)
            if s is None:
                assert e8.N(a, b) == 0
                continue
            seen += 1
            assert e8.roots[s].coeffs == tuple(x + y for x, y in zip(e8.roots[a].coeffs, e8.roots[b].coeffs))
            assert e8.N(a, b) in (1, -1)
            assert e8.N(a, b) * e8.N(b, a) == -1
    assert seen > 0


def test_jacobi_type_identity(e8):
    n = len(e8.roots)
    for a in range(n):
        for b in range(n):
            s = e8.sum_table(a, b)
            if s is None:
                continue
            c = e8.neg(s)  # a + b + c = 0
            assert e8.N(a, b) == e8.N(b, c) == e8.N(c, a)
    assert jacobi_defect(e8) == 0


def test_extraspecial_pairs_positive(e8):
    assert e8.extraspecial
    for _, (x, y) in e8.extraspecial.items():
        assert e8.N(x, y) == 1


def test_bad_cartan_rejected():
    with pytest.raises(RootSystemError):
        validate_cartan([[2, -1], [0, 2]])
    with pytest.raises(RootSystemError):
        cartan_datum("G2")
    with pytest.raises(RootSystemError):
        root_system("E8").find((1, 1, 0, 0, 0, 0, 0, 0))


def test_dump_one_root_per_line(e8):
    lines = e8.dump().splitlines()
    assert len(lines) == 240
    assert lines[0] == "1 0 0 0 0 0 0 0  1"
