import random

import pytest
from hypothesis import given, strategies as st

from e8good.bruhat import (BruhatError, Certificate, bruhat_cell, inverse_conjugacy_check, lemma_bwb_check,
                           load_certificates, load_inverse_identities, normal_form, random_word, reconstruct,
                           verify_certificate, w0_word)
from e8good.chevalley import GroupWord, Token, evaluate, omega_word, parse_word, simple_u_word
from e8good.reeoracle import build_model
from e8good.weyl import identity, reduced_word, simple_element, word_to_element

COXETER = [1, 3, 4, 2, 5, 6, 7, 8]


def test_positive_word_is_in_borel():
    w = parse_word("u(1) u(234^25) u(8) u(12^23^24^35^26)", 3)
    assert bruhat_cell(w) == identity("E8")
    assert bruhat_cell(parse_word("u(1)", 2)) == identity("E8")


def test_omega_gives_simple_cell():
    assert bruhat_cell(omega_word([1], 2)) == simple_element("E8", 1)


@given(st.lists(st.integers(1, 8), max_size=25), st.sampled_from([2, 3, 5]))
def test_omega_word_cell(word, p):
    red = reduced_word(word_to_element("E8", word))
    assert bruhat_cell(omega_word(red, p)) == word_to_element("E8", red)


@pytest.mark.parametrize("p", [2, 3, 5])
def test_reconstruction_matches_evaluation(p):
    rng = random.Random(100 + p)
    for _ in range(100):
        w = random_word(rng, p, 50)
        assert reconstruct(normal_form(w)) == evaluate(w)


def _sl3_matrix(tok, model):
    """SL3(F2) image of an A2 token (signs are irrelevant in characteristic 2)."""
    n = 3
    pairs = {0: (0, 1), 1: (1, 2), 2: (0, 2)}

    def elem(i, j):
        m = [1 if a == b else 0 for a in range(n) for b in range(n)]
        m[i * n + j] = 1
        return tuple(m)
    if tok.kind == "u":
        i, j = pairs[tok.root % 3]
        return elem(i, j) if tok.root < 3 else elem(j, i)
    j = tok.j
    a, b = elem(j - 1, j), elem(j, j - 1)
    return _mul(_mul(a, b), a)


def _mul(a, b, n=3):
    return tuple(sum(a[i * n + k] * b[k * n + j] for k in range(n)) % 2 for i in range(n) for j in range(n))


def test_cells_against_sl3_brute_force():
    model = build_model("A2", 2)
    rng = random.Random(7)
    for _ in range(300):
        toks = []
        for _ in range(rng.randint(0, 12)):
            if rng.random() < 0.6:
                toks.append(Token("u", root=rng.randrange(6)))
            else:
                toks.append(Token("w", j=rng.randint(1, 2)))
        word = GroupWord(tuple(toks), 2, "A2")
        m = tuple(1 if i == j else 0 for i in range(3) for j in range(3))
        for t in toks:
            m = _mul(m, _sl3_matrix(t, model))
        cell = bruhat_cell(word)
        rep = tuple(1 if i == j else 0 for i in range(3) for j in range(3))
        for j in reduced_word(cell):
            rep = _mul(rep, _sl3_matrix(Token("w", j=j), model))
        assert model.cell_of[m] == model.cell_of[rep]


@given(st.integers(0, 2**32 - 1), st.sampled_from([2, 3, 5]))
def test_cell_invariant_under_borel_multiplication(seed, p):
    rng = random.Random(seed)
    w = random_word(rng, p, 20)
    left = [Token("u", root=rng.randrange(120), c=rng.randrange(1, p)) for _ in range(3)]
    right = [Token("u", root=rng.randrange(120), c=rng.randrange(1, p)) for _ in range(3)]
    if p != 2:
        left.append(Token("h", j=rng.randint(1, 8), c=p - 1))
        right.insert(0, Token("h", j=rng.randint(1, 8), c=p - 1))
    b1, b2 = GroupWord(tuple(left), p), GroupWord(tuple(right), p)
    assert bruhat_cell(b1 + w + b2) == bruhat_cell(w)


def test_w0_conjugate_of_z1_lies_in_coxeter_cell():
    w0 = omega_word(w0_word("E8"), 2)
    u0 = simple_u_word(COXETER, 2)
    assert bruhat_cell(w0 + u0 + w0.inverse()) == word_to_element("E8", COXETER)


def test_lemma_examples():
    assert lemma_bwb_check([1], [1], 2)
    assert lemma_bwb_check(COXETER, [1] * 8, 2)
    with pytest.raises(BruhatError):
        lemma_bwb_check([1, 1], [1, 1], 2)
    with pytest.raises(BruhatError):
        lemma_bwb_check([1], [3], 3)


@given(st.lists(st.integers(1, 8), min_size=1, max_size=20), st.sampled_from([2, 3, 5]), st.integers(0, 10**6))
def test_lemma_property(word, p, seed):
    red = reduced_word(word_to_element("E8", word))
    if not red:
        return
    rng = random.Random(seed)
    assert lemma_bwb_check(red, [rng.randrange(1, p) for _ in red], p)


def _cert(name):
    return next(c for c in load_certificates() if c.mizuno_name == name and c.p == 2)


@pytest.mark.parametrize("name,target", [
    ("z_1", COXETER),
    ("z_85", [6, 7, 4, 3, 4, 2, 5, 4, 3, 2, 4, 5, 1]),
    ("z_21", [1, 3, 1, 2, 4, 2, 3, 5, 4, 6, 5, 6, 7, 8]),
])
def test_reference_certificates(name, target):
    c = _cert(name)
    assert c.target_word == target
    rep = verify_certificate(c)
    assert rep.flags() == {"CONJ": True, "REDUCED": True, "HOOKS": True, "GOOD": True}
    assert rep.conj_nf == rep.conj and rep.mode == "EXACT"


def test_z85_shape():
    c = _cert("z_85")
    assert [t.root for t in c.pre_conjugator.tokens] == [1]
    assert "".join(map(str, c.omega_conjugator)) == "45873165423456541342563427654316542543245341342875367"


def test_corrupted_certificate_fails():
    c = _cert("z_21")
    bad_target = Certificate(c.class_name, c.mizuno_name, c.mizuno_word, c.pre_conjugator, c.omega_conjugator,
                             c.target_word[:-1], 2)
    rep = verify_certificate(bad_target)
    assert not rep.conj and not rep.good
    no_pre = Certificate(c.class_name, c.mizuno_name, c.mizuno_word, GroupWord((), 2), c.omega_conjugator,
                         c.target_word, 2)
    assert not verify_certificate(no_pre).conj
    wrong_class = Certificate("E8", c.mizuno_name, c.mizuno_word, c.pre_conjugator, c.omega_conjugator,
                              c.target_word, 2)
    assert not verify_certificate(wrong_class).hooks


def test_unproven_rows_are_not_certificates():
    names = {c.mizuno_name for c in load_certificates()}
    assert not names & {"z_39", "z_44", "z_50"}


def test_inverse_check_trivial():
    e = GroupWord((), 3)
    assert inverse_conjugacy_check(e, e, e, 3)[0]
    with pytest.raises(BruhatError):
        inverse_conjugacy_check(GroupWord((), 2), GroupWord((), 2), GroupWord((), 2), 2)


@pytest.mark.parametrize("name", ["z_30", "z_65"])
def test_inverse_identities_p3(name):
    ident = next(i for i in load_inverse_identities() if i.name == name)
    ok, mode, _ = inverse_conjugacy_check(ident.word, ident.t, ident.v, 3)
    assert ok and mode in ("EXACT", "UP-TO-TWIST")
