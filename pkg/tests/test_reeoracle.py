from fractions import Fraction
import itertools

import numpy as np
import pytest

from e8good.reeoracle import FiniteField, ReeOracleError, build_model, check_all, check_ree, hecke_character
from e8good.signsolver import centralizer_from_m

MODELS = [("A1", 2), ("A1", 3), ("A1", 4), ("A1", 5), ("A2", 2)]


def _sl_order(n, q):
    out = q ** (n * (n - 1) // 2)
    for k in range(2, n + 1):
        out *= q ** k - 1
    return out


@pytest.fixture(scope="module", params=MODELS, ids=lambda m: f"{m[0]}-q{m[1]}")
def model(request):
    return build_model(*request.param)


def test_orders(model):
    assert model.order == len(model.elements) == _sl_order(model.n, model.q)
    assert len(model.borel) == (model.q - 1) ** (model.n - 1) * model.q ** (model.n * (model.n - 1) // 2)


def test_sl2_f2_cells():
    m = build_model("A1", 2)
    assert (m.order, len(m.borel)) == (6, 2)
    assert sorted(len(c) for c in m.cells.values()) == [2, 4]


def test_cells_partition_group(model):
    assert sum(len(c) for c in model.cells.values()) == model.order
    assert len(model.cells) == len(list(itertools.permutations(range(model.n))))


def test_ree_formula_all_pairs(model):
    res = check_all(model)
    assert res and all(r[-1] for r in res)


def _identity_class(model):
    return next(i for i, c in enumerate(model.unipotent_classes) if len(c.elements) == 1)


def test_identity_identity_a1():
    for q in (2, 3, 4, 5):
        m = build_model("A1", q)
        e = tuple(range(2))
        lhs, rhs, ok = check_ree(m, _identity_class(m), e)
        assert ok and lhs == rhs == 1 + q


def test_regular_cases_a1():
    m = build_model("A1", 2)
    reg = 1 - _identity_class(m)
    lhs, rhs, ok = check_ree(m, reg, (0, 1))
    assert ok and lhs == rhs == 1
    m3 = build_model("A1", 3)
    for i, c in enumerate(m3.unipotent_classes):
        if len(c.elements) > 1:
            assert check_ree(m3, i, (1, 0))[2]


def test_orbit_sum_recovers_class_size(model):
    for cl in model.unipotent_classes:
        els = set(cl.elements)
        assert sum(len(els & set(cell)) for cell in model.cells.values()) == len(cl.elements)
        assert model.order // cl.centralizer_order == len(cl.elements)


def test_centralizer_from_brute_force():
    m = build_model("A1", 2)
    reg = m.unipotent_classes[1 - _identity_class(m)]
    in_borel = len(set(reg.elements) & set(m.cells[(0, 1)]))
    lhs, _, _ = check_ree(m, 1 - _identity_class(m), (0, 1))
    assert centralizer_from_m(lhs, in_borel, len(m.borel)) == reg.centralizer_order == 2


def test_hecke_relations():
    q = 3
    ts = np.array([[-1, 0], [1, q]])
    tt = np.array([[q, q], [0, -1]])
    eye = np.eye(2, dtype=int)
    for t in (ts, tt):
        assert (t @ t == (q - 1) * t + q * eye).all()
    assert (ts @ tt @ ts == tt @ ts @ tt).all()
    assert hecke_character("A2", q, "refl", (0, 1, 2)) == 2
    assert hecke_character("A2", q, "refl", (1, 0, 2)) == q - 1
    assert hecke_character("A1", q, "index", (1, 0)) == q
    assert hecke_character("A1", q, "sign", (1, 0)) == -1


@pytest.mark.parametrize("q", [2, 3, 4, 5])
def test_field_axioms(q):
    f = FiniteField(q)
    els = range(q)
    for a in els:
        if a:
            assert f.mul[a][f.inv[a]] == 1
        assert f.add[a][f.neg[a]] == 0
        for b in els:
            assert f.add[a][b] == f.add[b][a] and f.mul[a][b] == f.mul[b][a]
            for c in els:
                assert f.mul[a][f.add[b][c]] == f.add[f.mul[a][b]][f.mul[a][c]]


def test_size_bound():
    with pytest.raises(ReeOracleError):
        build_model("A2", 3)
    with pytest.raises(ReeOracleError):
        FiniteField(6)
    with pytest.raises(ReeOracleError):
        build_model("B2", 2)
