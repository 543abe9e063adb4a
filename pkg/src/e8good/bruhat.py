"""Bruhat normal form U T w U_w by BN-pair rewriting, and certificate checks.

This engine never touches the adjoint matrices of group elements: it
works with root coordinates, the Chevalley commutator formula, torus
characters and the rank-one identity
omega u(c) omega = u(-1/c) h(-1/c) omega u(-1/c) for c != 0.
The only constants taken from the Lie algebra are the signs eta in
omega_j u_r(t) omega_j^-1 = u_{s_j r}(eta t).
"""
from __future__ import annotations

import itertools
import random
from dataclasses import dataclass, field
from functools import lru_cache
from pathlib import Path
from typing import Dict, List, Optional, Sequence, Tuple

import numpy as np
from numba import njit

from .chevalley import (
    ChevalleyError,
    GroupWord,
    Token,
    _u_integral,
    evaluate,
    format_word,
    omega_word,
    parse_word,
    simple_u_word,
    _unit_group_generator,
)
from .rootsystem import RootSystem, root_system
from .weyl import (
    WeylElement,
    default_lusztig_map,
    hooks_into,
    identity,
    is_reduced,
    longest_element,
    reduced_word,
    simple_element,
    word_to_element,
)


class BruhatError(ValueError):
    pass


# ---------------------------------------------------------------- constants

@lru_cache(maxsize=None)
def group_constants(label: str) -> np.ndarray:
    """M[a, b] with [x_a, x_b] = M x_{a+b}, x_r = sign(r) e_r."""
    rs = root_system(label)
    m = len(rs.roots)
    sgn = np.where(np.arange(m) < rs.positive_count, 1, -1)
    s = rs.sum_idx
    out = np.zeros((m, m), dtype=np.int64)
    ok = s >= 0
    tgt = np.where(ok, s, 0)
    out[ok] = (sgn[:, None] * sgn[None, :] * sgn[tgt] * rs.struct.astype(np.int64))[ok]
    return out


@lru_cache(maxsize=None)
def omega_signs(label: str) -> np.ndarray:
    """eta[j-1, r] with omega_j u_r(t) omega_j^-1 = u_{s_j r}(eta t)."""
    rs = root_system(label)
    m = len(rs.roots)
    dim = m + rs.rank
    eta = np.zeros((rs.rank, m), dtype=np.int64)
    for j in range(1, rs.rank + 1):
        a = j - 1
        mats = []
        for r in (a, rs.neg(a), a):
            x, x2 = _u_integral(label, r)
            mats.append(np.eye(dim, dtype=np.int64) + x.toarray() + x2.toarray())
        om = mats[0] @ mats[1] @ mats[2]
        perm = simple_element(label, j).perm
        for r in range(m):
            s = int(perm[r])
            col = om[:, r]
            sgn_r = 1 if rs.is_positive(r) else -1
            sgn_s = 1 if rs.is_positive(s) else -1
            # Ad(omega) x_r = eta x_{s_j r}
            val = col[s] * sgn_r * sgn_s
            if val not in (1, -1) or np.count_nonzero(col) != 1:
                raise BruhatError("omega_j does not permute root vectors")
            eta[j - 1, r] = val
    return eta


# ---------------------------------------------------------------- unipotent collection

@njit(cache=True)
def _collect(coef, pos, order, S, M, p, items_r, items_t):
    """Multiply coef on the right by u_{items_r[i]}(items_t[i]) in turn.

    Moving u_r(t) leftwards past u_g(a) leaves u_{g+r}(M[g,r] a t) u_g(a)
    behind it; those factors are re-inserted depth first with a stack.
    """
    n = coef.shape[0]
    cap = 4096
    st_r = np.empty(cap, np.int64)
    st_t = np.empty(cap, np.int64)
    sp = 0
    for i in range(items_r.shape[0] - 1, -1, -1):
        st_r[sp] = items_r[i]
        st_t[sp] = items_t[i]
        sp += 1
    buf_r = np.empty(2 * n, np.int64)
    buf_t = np.empty(2 * n, np.int64)
    steps = 0
    while sp > 0:
        sp -= 1
        r = st_r[sp]
        t = st_t[sp] % p
        if t == 0:
            continue
        steps += 1
        if steps > 50_000_000:
            return False
        k = 0
        for q in range(pos[r] + 1, n):
            g = order[q]
            a = coef[g]
            if a != 0:
                s = S[g, r]
                if s >= 0:
                    buf_r[k] = s
                    buf_t[k] = (M[g, r] * a * t) % p
                    k += 1
                buf_r[k] = g
                buf_t[k] = a
                k += 1
                coef[g] = 0
        coef[r] = (coef[r] + t) % p
        if sp + k > cap:
            cap2 = 2 * (sp + k)
            nr = np.empty(cap2, np.int64)
            nt = np.empty(cap2, np.int64)
            nr[:sp] = st_r[:sp]
            nt[:sp] = st_t[:sp]
            st_r = nr
            st_t = nt
            cap = cap2
        for i in range(k - 1, -1, -1):
            st_r[sp] = buf_r[i]
            st_t[sp] = buf_t[i]
            sp += 1
    return True


class Collector:
    """Normal forms of elements of U over F_p in a fixed order of positive roots.

    An element is a dense coefficient vector over the positive roots; it
    stands for the product of u_r(coef[r]) taken in the collector's order.
    """

    def __init__(self, label: str, p: int, order: Optional[Sequence[int]] = None):
        self.rs = root_system(label)
        self.p = p
        self.n = self.rs.positive_count
        n = self.n
        order = list(range(n)) if order is None else list(order)
        if sorted(order) != list(range(n)):
            raise BruhatError("order must be a permutation of the positive roots")
        self.order = np.array(order, dtype=np.int64)
        self.pos = np.empty(n, dtype=np.int64)
        self.pos[self.order] = np.arange(n)
        self.M = np.ascontiguousarray(group_constants(label)[:n, :n])
        S = self.rs.sum_idx[:n, :n].astype(np.int64)
        self.S = np.ascontiguousarray(S)

    def new(self) -> np.ndarray:
        return np.zeros(self.n, dtype=np.int64)

    def mul_many(self, coef: np.ndarray, factors) -> np.ndarray:
        if len(factors) == 0:
            return coef
        rr = np.array([f[0] for f in factors], dtype=np.int64)
        tt = np.array([int(f[1]) for f in factors], dtype=np.int64)
        if not _collect(coef, self.pos, self.order, self.S, self.M, self.p, rr, tt):
            raise BruhatError("collection did not terminate")
        return coef

    def mul(self, coef: np.ndarray, r: int, t: int) -> np.ndarray:
        return self.mul_many(coef, [(r, t)])

    def from_factors(self, factors) -> np.ndarray:
        return self.mul_many(self.new(), list(factors))

    def factors(self, coef: np.ndarray) -> List[Tuple[int, int]]:
        return [(int(r), int(coef[r])) for r in self.order if coef[r]]


# ---------------------------------------------------------------- normal form

@dataclass
class BruhatNormalForm:
    label: str
    p: int
    u_part: List[Tuple[int, int]]
    torus_part: Dict[int, int]
    weyl_part: WeylElement
    u_prime_part: List[Tuple[int, int]]

    def to_word(self) -> GroupWord:
        toks: List[Token] = [Token("u", root=r, c=c) for r, c in self.u_part]
        toks += [Token("h", j=j, c=c) for j, c in sorted(self.torus_part.items()) if c % self.p != 1]
        toks += [Token("w", j=j) for j in reduced_word(self.weyl_part)]
        toks += [Token("u", root=r, c=c) for r, c in self.u_prime_part]
        return GroupWord(tuple(toks), self.p, self.label)

    def key(self):
        return (tuple(sorted(self.u_part)), tuple(sorted((j, c % self.p) for j, c in self.torus_part.items())),
                self.weyl_part.key, tuple(sorted(self.u_prime_part)))

    def __eq__(self, other) -> bool:
        return isinstance(other, BruhatNormalForm) and self.label == other.label and \
            self.p == other.p and self.key() == other.key()

    def describe(self) -> str:
        return format_word(self.to_word())


class _Engine:
    def __init__(self, label: str, p: int):
        if p not in (2, 3, 5):
            raise BruhatError(f"unsupported characteristic {p}")
        self.label = label
        self.p = p
        self.rs = root_system(label)
        self.rank = self.rs.rank
        self.col = Collector(label, p)
        self.eta = omega_signs(label).tolist()
        self.perms = [simple_element(label, j).perm.tolist() for j in range(1, self.rank + 1)]
        self.g = _unit_group_generator(p)
        self.q1 = p - 1  # order of F_p^x
        self.log = {pow(self.g, k, p): k for k in range(self.q1)}
        self.cart = [list(r) for r in self.rs.cartan.cartan_matrix]
        coeffs = self.rs.coeff_matrix
        # <r, alpha_i> for each root r
        self.pair = (coeffs @ np.array(self.cart)).tolist()
        self.U = self.col.new()
        self.T = [0] * self.rank
        self.w = identity(label)
        self._word: Optional[List[int]] = []
        self.Y = self.col.new()

    # torus helpers (exponent vectors relative to the generator g)
    def tchar(self, e: Sequence[int], r: int) -> int:
        k = sum(ei * pi for ei, pi in zip(e, self.pair[r])) % self.q1 if self.q1 > 1 else 0
        return pow(self.g, k, self.p)

    def reflect_torus(self, e: List[int], j: int) -> List[int]:
        e = list(e)
        e[j - 1] = (e[j - 1] - sum(e[i] * self.cart[i][j - 1] for i in range(self.rank))) % max(self.q1, 1)
        return e

    def weyl_torus(self, word: Sequence[int], e: List[int]) -> List[int]:
        for j in reversed(word):
            e = self.reflect_torus(e, j)
        return e

    def word(self) -> List[int]:
        if self._word is None:
            self._word = reduced_word(self.w)
        return self._word

    def conj_root_by_w(self, word: Sequence[int], r: int, t: int) -> Tuple[int, int]:
        """w_dot u_r(t) w_dot^-1 = u_{r'}(t')."""
        for j in reversed(word):
            t = t * self.eta[j - 1][r]
            r = self.perms[j - 1][r]
        return r, t % self.p

    def push_to_U(self, r: int, t: int) -> None:
        # T u_r(t) = u_r(chi(T) t) T
        self.col.mul(self.U, r, t * self.tchar(self.T, r))

    def mul_h(self, j: int, c: int) -> None:
        c %= self.p
        k = self.log[c]
        # Y h = h (h^-1 Y h)
        if k:
            cinv = pow(c, -1, self.p)
            newY = self.Y.copy()
            for r in np.nonzero(self.Y)[0]:
                e = self.pair[r][j - 1]
                newY[r] = int(self.Y[r]) * pow(cinv if e > 0 else c, abs(e), self.p) % self.p
            self.Y = newY
            e = [0] * self.rank
            e[j - 1] = k
            e = self.weyl_torus(self.word(), e)
            self.T = [(a + b) % self.q1 for a, b in zip(self.T, e)]

    def mul_u(self, r: int, t: int) -> None:
        t %= self.p
        if t == 0:
            return
        if self.rs.is_positive(r):
            self.col.mul(self.Y, r, t)
            return
        # negative root: u_r(t) = v_dot omega_j u_{a_j}(t') omega_j^-1 v_dot^-1
        b = self.rs.neg(r)
        v: List[int] = []
        cur = b
        while cur >= self.rank:
            for i in range(self.rank):
                if self.pair[cur][i] > 0:
                    v.append(i + 1)
                    cur = self.perms[i][cur]
                    break
        j = cur + 1
        # conjugate u_{a_j}(1) by v_dot omega_j to find the sign
        rr, sgn = self.conj_root_by_w(v + [j], j - 1, 1)
        assert rr == r
        tt = t * sgn % self.p  # sgn = +-1 so it is its own inverse
        for i in v:
            self.mul_omega(i)
        self.mul_omega(j)
        self.mul_u(j - 1, tt)
        self.mul_omega_inv(j)
        for i in reversed(v):
            self.mul_omega_inv(i)

    def mul_omega_inv(self, j: int) -> None:
        # omega_j^-1 = h_j(-1) omega_j
        self.mul_h(j, -1)
        self.mul_omega(j)

    def mul_omega(self, j: int) -> None:
        a = j - 1
        p = self.p
        c = int(self.Y[a])
        if c:
            y3 = self.col.from_factors([(a, -c)] + self.col.factors(self.Y))
        else:
            y3 = self.Y
        # Z = omega_j^-1 Y3 omega_j; omega_j^-1 = h_j(-1) omega_j
        perm = self.perms[a]
        zf = []
        for r, t in self.col.factors(y3):
            s = perm[r]
            tt = t * self.eta[a][r]
            # conjugation by h_j(-1) on u_s
            if self.pair[s][a] % 2:
                tt = -tt
            zf.append((s, tt))
        Z = self.col.from_factors(zf)
        wa = self.w.perm[a]
        if wa < self.rs.positive_count:
            if c:
                word = self.word()
                rr, tt = self.conj_root_by_w(word, a, c)
                self.push_to_U(rr, tt)
            self.w = WeylElement(self.label, self.w.perm[np.array(self.perms[a])])
            if self._word is not None:
                self._word = self._word + [j]
            self.Y = Z
            return
        # w(alpha_j) < 0
        wprime = WeylElement(self.label, self.w.perm[np.array(self.perms[a])])
        wword = reduced_word(wprime)
        if not c:
            e = [0] * self.rank
            if p != 2:
                e[a] = self.log[p - 1]
                e = self.weyl_torus(wword, e)
                self.T = [(x + y) % self.q1 for x, y in zip(self.T, e)]
            self.w = wprime
            self._word = wword
            self.Y = Z
            return
        d = (-pow(c, -1, p)) % p
        rr, tt = self.conj_root_by_w(wword, a, d)
        self.push_to_U(rr, tt)
        if p != 2:
            e = [0] * self.rank
            e[a] = self.log[d]
            e = self.weyl_torus(wword, e)
            self.T = [(x + y) % self.q1 for x, y in zip(self.T, e)]
        # w unchanged; Y <- u_j(d) Z
        self.Y = self.col.from_factors([(a, d)] + self.col.factors(Z))

    def apply(self, tok: Token) -> None:
        if tok.kind == "u":
            c = -tok.c if tok.inv else tok.c
            self.mul_u(tok.root, c)
        elif tok.kind == "w":
            if tok.inv:
                self.mul_omega_inv(tok.j)
            else:
                self.mul_omega(tok.j)
        elif tok.kind == "h":
            c = tok.c % self.p
            if tok.inv:
                c = pow(c, -1, self.p)
            self.mul_h(tok.j, c)
        else:
            raise BruhatError(f"unknown token {tok}")

    def finish(self) -> BruhatNormalForm:
        rs = self.rs
        n = rs.positive_count
        wperm = self.w.perm
        plus = [r for r in range(n) if wperm[r] < n]
        minus = [r for r in range(n) if wperm[r] >= n]
        split = Collector(self.label, self.p, plus + minus)
        y = split.from_factors(self.col.factors(self.Y))
        word = self.word()
        yminus = []
        for r, t in split.factors(y):
            if wperm[r] < n:
                rr, tt = self.conj_root_by_w(word, r, t)
                self.push_to_U(rr, tt)
            else:
                yminus.append((r, t))
        minus_col = Collector(self.label, self.p)
        ym = minus_col.from_factors(yminus)
        torus = {j + 1: pow(self.g, self.T[j], self.p) for j in range(self.rank)} if self.p != 2 else {}
        return BruhatNormalForm(self.label, self.p, self.col.factors(self.U), torus, self.w,
                                minus_col.factors(ym))


def normal_form(word: GroupWord) -> BruhatNormalForm:
    eng = _Engine(word.label, word.p)
    for t in word.tokens:
        eng.apply(t)
    return eng.finish()


def bruhat_cell(word: GroupWord) -> WeylElement:
    return normal_form(word).weyl_part


def reconstruct(nf: BruhatNormalForm):
    return evaluate(nf.to_word())


# ---------------------------------------------------------------- Lemma on B w B

def w0_word(label: str) -> List[int]:
    return reduced_word(longest_element(label))


def lemma_bwb_check(reduced: Sequence[int], coefficients: Sequence[int], p: int, label: str = "E8") -> bool:
    if len(reduced) != len(coefficients):
        raise BruhatError("word and coefficient lists differ in length")
    if not is_reduced(label, reduced):
        raise BruhatError("input word is not reduced")
    if any(c % p == 0 for c in coefficients):
        raise BruhatError("coefficients must be nonzero")
    w0 = omega_word(w0_word(label), p, label)
    u0 = GroupWord(tuple(Token("u", root=i - 1, c=c) for i, c in zip(reduced, coefficients)), p, label)
    cell = bruhat_cell(w0 + u0 + w0.inverse())
    return cell == word_to_element(label, reduced)


# ---------------------------------------------------------------- certificates

@dataclass
class Certificate:
    class_name: str
    mizuno_name: str
    mizuno_word: GroupWord
    pre_conjugator: GroupWord
    omega_conjugator: List[int]
    target_word: List[int]
    p: int
    status: str = "CERT"
    target_coeffs: Optional[List[int]] = None
    note: str = ""

    @property
    def label(self) -> str:
        return self.mizuno_word.label

    def conjugator(self) -> GroupWord:
        return self.pre_conjugator + omega_word(self.omega_conjugator, self.p, self.label)

    def target(self) -> GroupWord:
        coeffs = self.target_coeffs or [1] * len(self.target_word)
        toks = tuple(Token("u", root=i - 1, c=c) for i, c in zip(self.target_word, coeffs))
        return GroupWord(toks, self.p, self.label)


@dataclass
class Report:
    name: str
    class_name: str
    p: int
    conj: bool
    conj_nf: bool
    reduced: bool
    hooks: bool
    mode: str = "EXACT"
    twist: Optional[GroupWord] = None
    errors: List[str] = field(default_factory=list)

    @property
    def good(self) -> bool:
        return self.conj and self.reduced and self.hooks

    def flags(self) -> Dict[str, bool]:
        return {"CONJ": self.conj, "REDUCED": self.reduced, "HOOKS": self.hooks, "GOOD": self.good}

    def as_dict(self) -> dict:
        d = {"name": self.name, "class": self.class_name, "p": self.p, "mode": self.mode,
             "conj_normal_form": self.conj_nf, **self.flags(), "errors": self.errors}
        if self.twist is not None:
            d["twist"] = format_word(self.twist)
        return d


def torus_words(label: str, p: int, support: int = 8):
    """All products of h_j(-1) over subsets of size <= support, smallest first."""
    rank = root_system(label).rank
    for k in range(0, support + 1):
        for sub in itertools.combinations(range(1, rank + 1), k):
            yield GroupWord(tuple(Token("h", j=j, c=-1) for j in sub), p, label)


def verify_certificate(cert: Certificate, twist_search: bool = True, twist_support: int = 8) -> Report:
    rep = Report(cert.mizuno_name, cert.class_name, cert.p, False, False, False, False)
    label = cert.label
    try:
        rep.reduced = bool(cert.target_word) and is_reduced(label, cert.target_word)
    except ValueError as exc:
        rep.errors.append(f"REDUCED: {exc}")
    try:
        w = word_to_element(label, cert.target_word)
        rep.hooks = hooks_into(w, cert.class_name, cert.p)
    except ValueError as exc:
        rep.errors.append(f"HOOKS: {exc}")
    g = cert.conjugator()
    lhs_word = g + cert.mizuno_word + g.inverse()
    target = cert.target()
    try:
        tm = evaluate(target)
        rep.conj = evaluate(lhs_word) == tm
        rep.conj_nf = normal_form(lhs_word) == normal_form(target)
        if rep.conj != rep.conj_nf:
            rep.errors.append("CONJ: matrix and normal-form verdicts disagree")
        if not rep.conj and twist_search and cert.p != 2:
            for t in torus_words(label, cert.p, twist_support):
                if not t.tokens:
                    continue
                gt = t + g
                if evaluate(gt + cert.mizuno_word + gt.inverse()) == tm:
                    rep.conj = True
                    rep.mode = "UP-TO-TWIST"
                    rep.twist = t
                    break
    except (ValueError, ChevalleyError) as exc:
        rep.errors.append(f"CONJ: {exc}")
    if not rep.conj:
        rep.mode = "FAILED"
    return rep


def inverse_conjugacy_check(z: GroupWord, t: GroupWord, v: GroupWord, p: int,
                            twist_search: bool = True, twist_support: int = 8):
    """Check (t v) z (t v)^-1 = z^-1; optionally allow an extra torus twist t'.

    Returns (holds, mode, twist) with mode EXACT, UP-TO-TWIST or FAILED.
    """
    if p not in (3, 5):
        raise BruhatError("inverse_conjugacy_check is for p in {3, 5}")
    for w in (z, t, v):
        if w.p != p:
            raise BruhatError("words over different fields")
    zi = evaluate(z.inverse())
    g = t + v
    if evaluate(g + z + g.inverse()) == zi:
        return True, "EXACT", None
    if twist_search:
        for tw in torus_words(z.label, p, twist_support):
            if not tw.tokens:
                continue
            gt = tw + g
            if evaluate(gt + z + gt.inverse()) == zi:
                return True, "UP-TO-TWIST", tw
    return False, "FAILED", None


# ---------------------------------------------------------------- certificate files

def _parse_omega(s: str) -> List[int]:
    s = s.strip()
    if s in ("", "-", "[]"):
        return []
    s = s.strip("[]")
    return [int(ch) for ch in s if not ch.isspace()]


def load_certificates(path: Optional[Path] = None) -> List[Certificate]:
    """Records separated by blank lines; 'key: value' per line."""
    from .weyl import data_dir, read_records

    path = Path(path) if path else data_dir() / "certs" / "table6.dat"
    certs = []
    try:
        records = read_records(path)
    except ValueError as exc:
        raise BruhatError(str(exc)) from None
    for rec in records:
        if rec.get("kind", "cert") != "cert":
            continue
        p = int(rec["p"])
        label = rec.get("type", "E8")
        tc = rec.get("target_coeffs")
        certs.append(Certificate(
            class_name=rec["class"],
            mizuno_name=rec["name"],
            mizuno_word=parse_word(rec.get("word", ""), p, label),
            pre_conjugator=parse_word(rec.get("pre", ""), p, label),
            omega_conjugator=_parse_omega(rec.get("omega", "")),
            target_word=[int(x) for x in rec.get("target", "").split()],
            p=p,
            status=rec.get("status", "CERT"),
            target_coeffs=[int(x) for x in tc.split()] if tc else None,
            note=rec.get("note", ""),
        ))
    return certs


@dataclass
class InverseIdentity:
    name: str
    word: GroupWord
    t: GroupWord
    v: GroupWord
    p: int


def load_inverse_identities(path: Optional[Path] = None) -> List[InverseIdentity]:
    from .weyl import data_dir, read_records

    path = Path(path) if path else data_dir() / "certs" / "table6.dat"
    out = []
    for rec in read_records(path):
        if rec.get("kind") != "inverse":
            continue
        p = int(rec["p"])
        out.append(InverseIdentity(rec["name"], parse_word(rec["word"], p), parse_word(rec.get("t", ""), p),
                                   parse_word(rec.get("v", ""), p), p))
    return out


# ---------------------------------------------------------------- random words

def random_word(rng: random.Random, p: int, max_len: int = 50, label: str = "E8") -> GroupWord:
    rs = root_system(label)
    n = rng.randint(0, max_len)
    toks = []
    for _ in range(n):
        k = rng.random()
        inv = rng.random() < 0.2
        if k < 0.55:
            toks.append(Token("u", root=rng.randrange(len(rs.roots)), c=rng.randrange(1, p), inv=inv))
        elif k < 0.85:
            toks.append(Token("w", j=rng.randint(1, rs.rank), inv=inv))
        else:
            toks.append(Token("h", j=rng.randint(1, rs.rank), c=rng.randrange(1, p), inv=inv))
    return GroupWord(tuple(toks), p, label)
