"""Words in Chevalley generators and their adjoint evaluation over F_p.

Root elements are u_r(t) = exp(t ad x_r) with x_r = e_r for positive r
and x_r = -e_r for negative r, so that
omega_j = u_{a_j}(1) u_{-a_j}(1) u_{a_j}(1) is a monomial matrix.
"""
from __future__ import annotations

import heapq
import re
from dataclasses import dataclass, field, replace
from functools import lru_cache
from typing import Dict, Iterable, List, Optional, Sequence, Tuple

import numpy as np
import scipy.sparse as sp

from .rootsystem import RootSystem, root_system
from .weyl import WeylElement, hooks_into, is_reduced, word_to_element

SUPPORTED_P = (2, 3, 5)


class ChevalleyError(ValueError):
    pass


# ---------------------------------------------------------------- tokens

@dataclass(frozen=True)
class Token:
    """One generator: kind 'u' (root element), 'w' (omega_j) or 'h' (coroot torus).

    For 'u', root is a root index and c the coefficient as written.
    For 'w', j is the simple index.  For 'h', j is the simple index and c
    the torus parameter.  inv marks a trailing ^-1.
    """
    kind: str
    root: int = -1
    j: int = 0
    c: int = 1
    inv: bool = False

    def inverse(self) -> "Token":
        return replace(self, inv=not self.inv)


def mizuno_index(coeffs: Sequence[int]) -> str:
    out = []
    for k, c in enumerate(coeffs):
        if c == 0:
            continue
        out.append(str(k + 1) if c == 1 else f"{k + 1}^{c}")
    return "".join(out)


_MIZ_RE = re.compile(r"(\d)(?:\^(\d))?")


def decode_mizuno(text: str, rank: int = 8) -> Tuple[int, ...]:
    text = text.strip()
    if not text:
        raise ChevalleyError("empty root index")
    pos = 0
    coeffs = [0] * rank
    last = 0
    while pos < len(text):
        m = _MIZ_RE.match(text, pos)
        if not m:
            raise ChevalleyError(f"malformed root index {text!r}")
        k = int(m.group(1))
        if not 1 <= k <= rank or k <= last:
            raise ChevalleyError(f"malformed root index {text!r}")
        e = int(m.group(2)) if m.group(2) else 1
        if e < 2 and m.group(2):
            raise ChevalleyError(f"malformed exponent in {text!r}")
        coeffs[k - 1] = e
        last = k
        pos = m.end()
    return tuple(coeffs)


def parse_mizuno(text: str, label: str = "E8") -> Token:
    rs = root_system(label)
    return Token("u", root=rs.find(decode_mizuno(text, rs.rank)))


_TOK_RE = re.compile(
    r"(u-|u|w|h)\(([^)]*)\)(\^-1)?"
)


@dataclass(frozen=True)
class GroupWord:
    tokens: Tuple[Token, ...]
    p: int
    label: str = "E8"

    def __post_init__(self) -> None:
        if self.p not in SUPPORTED_P:
            raise ChevalleyError(f"unsupported characteristic {self.p}")

    def __add__(self, other: "GroupWord") -> "GroupWord":
        if other.p != self.p or other.label != self.label:
            raise ChevalleyError("cannot concatenate words over different groups")
        return GroupWord(self.tokens + other.tokens, self.p, self.label)

    def __len__(self) -> int:
        return len(self.tokens)

    def inverse(self) -> "GroupWord":
        return GroupWord(tuple(t.inverse() for t in reversed(self.tokens)), self.p, self.label)

    def __str__(self) -> str:
        return format_word(self)


def format_token(t: Token, label: str = "E8") -> str:
    rs = root_system(label)
    suffix = "^-1" if t.inv else ""
    if t.kind == "u":
        neg = not rs.is_positive(t.root)
        idx = mizuno_index(rs.roots[rs.neg(t.root) if neg else t.root].coeffs)
        arg = idx if t.c == 1 else f"{idx},{t.c}"
        return f"{'u-' if neg else 'u'}({arg}){suffix}"
    if t.kind == "w":
        return f"w({t.j}){suffix}"
    return f"h({t.j},{t.c}){suffix}"


def format_word(w: GroupWord) -> str:
    return " ".join(format_token(t, w.label) for t in w.tokens)


def parse_word(text: str, p: int, label: str = "E8") -> GroupWord:
    rs = root_system(label)
    toks: List[Token] = []
    for piece in text.split():
        m = _TOK_RE.fullmatch(piece)
        if not m:
            raise ChevalleyError(f"cannot parse token {piece!r}")
        kind, arg, inv = m.group(1), m.group(2), bool(m.group(3))
        if kind in ("u", "u-"):
            parts = arg.split(",")
            if len(parts) > 2:
                raise ChevalleyError(f"bad root element {piece!r}")
            r = rs.find(decode_mizuno(parts[0], rs.rank))
            c = int(parts[1]) if len(parts) == 2 else 1
            if kind == "u-":
                r = rs.neg(r)
            toks.append(Token("u", root=r, c=c, inv=inv))
        elif kind == "w":
            j = int(arg)
            rs.simple(j)
            toks.append(Token("w", j=j, inv=inv))
        else:
            parts = arg.split(",")
            if len(parts) != 2:
                raise ChevalleyError(f"bad torus token {piece!r}")
            j, c = int(parts[0]), int(parts[1])
            rs.simple(j)
            toks.append(Token("h", j=j, c=c, inv=inv))
    word = GroupWord(tuple(toks), p, label)
    for t in word.tokens:
        if t.kind in ("u", "h") and t.c % p == 0:
            raise ChevalleyError("coefficients must be nonzero in F_p")
    return word


def u_word(roots: Iterable[int], p: int, label: str = "E8") -> GroupWord:
    return GroupWord(tuple(Token("u", root=r) for r in roots), p, label)


def simple_u_word(indices: Iterable[int], p: int, label: str = "E8") -> GroupWord:
    return u_word((j - 1 for j in indices), p, label)


def omega_word(indices: Iterable[int], p: int, label: str = "E8", inverse: bool = False) -> GroupWord:
    return GroupWord(tuple(Token("w", j=j, inv=inverse) for j in indices), p, label)


# ---------------------------------------------------------------- Lie algebra

@lru_cache(maxsize=None)
def _ad_tables(label: str):
    """Integer matrices of ad x_r (r a root) on the basis e_roots, h_1..h_n."""
    rs = root_system(label)
    m, n = len(rs.roots), rs.rank
    dim = m + n
    coeffs = rs.coeff_matrix
    cart = np.array(rs.cartan.cartan_matrix, dtype=np.int64)
    ads = []
    for r in range(m):
        sgn = 1 if rs.is_positive(r) else -1
        rows, cols, vals = [], [], []
        for b in range(m):
            s = rs.sum_idx[r, b]
            if s >= 0:
                rows.append(int(s)); cols.append(b); vals.append(sgn * int(rs.struct[r, b]))
        # [e_r, e_-r] = h_r = sum_i c_i h_i
        b = rs.neg(r)
        for i in range(n):
            if coeffs[r, i]:
                rows.append(m + i); cols.append(b); vals.append(sgn * int(coeffs[r, i]))
        # [e_r, h_i] = -<r, alpha_i> e_r
        pr = coeffs[r] @ cart
        for i in range(n):
            if pr[i]:
                rows.append(r); cols.append(m + i); vals.append(-sgn * int(pr[i]))
        ads.append(sp.csr_matrix((vals, (rows, cols)), shape=(dim, dim), dtype=np.int64))
    return ads


@lru_cache(maxsize=None)
def _u_integral(label: str, r: int):
    """(X, X^2/2) for X = ad x_r, both integral."""
    x = _ad_tables(label)[r]
    x2 = (x @ x).toarray()
    if np.any(x2 % 2):
        raise ChevalleyError("divided power not integral")
    return x, sp.csr_matrix(x2 // 2)


def lie_dim(label: str) -> int:
    rs = root_system(label)
    return len(rs.roots) + rs.rank


@lru_cache(maxsize=None)
def _unit_group_generator(p: int) -> int:
    for g in range(1, p):
        if len({pow(g, k, p) for k in range(p - 1)}) == p - 1:
            return g
    raise ChevalleyError("no generator")


def _u_sparse(label: str, r: int, t: int, p: int) -> sp.csr_matrix:
    x, x2 = _u_integral(label, r)
    dim = x.shape[0]
    mat = sp.identity(dim, dtype=np.int64, format="csr") + t * x + (t * t) * x2
    mat = sp.csr_matrix(mat)
    mat.data %= p
    mat.eliminate_zeros()
    return mat


def _torus_diag(label: str, j: int, c: int, p: int) -> np.ndarray:
    rs = root_system(label)
    pr = rs.gram[: len(rs.roots), j - 1]
    cinv = pow(c, -1, p)
    d = [pow(c, int(e), p) if e >= 0 else pow(cinv, int(-e), p) for e in pr]
    return np.array(d + [1] * rs.rank, dtype=np.int64)


@lru_cache(maxsize=None)
def token_sparse(label: str, t: Token, p: int) -> sp.csr_matrix:
    """Sparse matrix of one token over F_p."""
    rs = root_system(label)
    if t.kind == "u":
        c = t.c % p
        if c == 0:
            raise ChevalleyError("zero coefficient")
        if t.inv:
            c = (-c) % p
        return _u_sparse(label, t.root, c, p)
    if t.kind == "w":
        a = t.j - 1
        one = -1 if t.inv else 1
        seq = [(a, one), (rs.neg(a), one), (a, one)]
        mat = None
        for r, c in seq:
            u = _u_sparse(label, r, c % p, p)
            mat = u if mat is None else sp.csr_matrix(mat @ u)
        mat.data %= p
        mat.eliminate_zeros()
        return mat
    if t.kind == "h":
        c = t.c % p
        if c == 0:
            raise ChevalleyError("zero torus parameter")
        if t.inv:
            c = pow(c, -1, p)
        return sp.diags(_torus_diag(label, t.j, c, p), format="csr")
    raise ChevalleyError(f"unknown token kind {t.kind!r}")


class AdjointMatrix:
    """A dense matrix over F_p in the adjoint representation."""

    __slots__ = ("a", "p")

    def __init__(self, a: np.ndarray, p: int):
        self.a = np.asarray(a, dtype=np.int64) % p
        self.p = p

    def __matmul__(self, other: "AdjointMatrix") -> "AdjointMatrix":
        return AdjointMatrix((self.a @ other.a) % self.p, self.p)

    def __eq__(self, other) -> bool:
        return isinstance(other, AdjointMatrix) and self.p == other.p and np.array_equal(self.a, other.a)

    def __hash__(self) -> int:
        return hash(self.packed().tobytes())

    def packed(self) -> np.ndarray:
        """Bit-packed rows when p = 2, otherwise a uint8 copy."""
        if self.p == 2:
            return np.packbits(self.a.astype(np.uint8), axis=1)
        return self.a.astype(np.uint8)

    def is_identity(self) -> bool:
        return np.array_equal(self.a, np.eye(self.a.shape[0], dtype=np.int64))

    def rank_mod_p(self) -> int:
        m = self.a.copy() % self.p
        rows, cols = m.shape
        r = 0
        for c in range(cols):
            piv = next((i for i in range(r, rows) if m[i, c]), None)
            if piv is None:
                continue
            m[[r, piv]] = m[[piv, r]]
            m[r] = (m[r] * pow(int(m[r, c]), -1, self.p)) % self.p
            nz = np.nonzero(m[:, c])[0]
            for i in nz:
                if i != r:
                    m[i] = (m[i] - m[i, c] * m[r]) % self.p
            r += 1
            if r == rows:
                break
        return r


def adjoint_matrix(tok: Token, p: int, label: str = "E8") -> AdjointMatrix:
    if p not in SUPPORTED_P:
        raise ChevalleyError(f"unsupported characteristic {p}")
    return AdjointMatrix(token_sparse(label, tok, p).toarray(), p)


@lru_cache(maxsize=None)
def _token_sparse_t(label: str, t: Token, p: int) -> sp.csr_matrix:
    # transposed float copy; entries stay below 2**53 so float products are exact
    return sp.csr_matrix(token_sparse(label, t, p).T.astype(np.float64))


def evaluate(word: GroupWord) -> AdjointMatrix:
    p = word.p
    dim = lie_dim(word.label)
    mt = np.eye(dim)  # transpose of the running product
    for t in word.tokens:
        mt = np.asarray(_token_sparse_t(word.label, t, p) @ mt) % p
    return AdjointMatrix(mt.T.astype(np.int64), p)


def words_equal(a: GroupWord, b: GroupWord) -> bool:
    return evaluate(a) == evaluate(b)


# ---------------------------------------------------------------- p = 2 rewriting

def _p2_check(word: GroupWord) -> None:
    if word.p != 2:
        raise ChevalleyError("simplify_p2 needs p = 2")
    for t in word.tokens:
        if t.kind == "h":
            raise ChevalleyError("torus tokens are trivial-free only for p = 2; drop them first")


def simplify_p2(word: GroupWord) -> GroupWord:
    """Rewrite with u_a^2 = 1, the commutator rule and omega-conjugation.

    The result is checked against the adjoint evaluation; on any mismatch
    the input is returned unchanged.
    """
    _p2_check(word)
    rs = root_system(word.label)
    from .weyl import simple_element

    # over F_2 every token is an involution and omega_j^-1 = omega_j
    items: List[Tuple[str, int]] = [("u", t.root) if t.kind == "u" else ("w", t.j) for t in word.tokens]

    def commute(a: Tuple[str, int], b: Tuple[str, int]) -> bool:
        if a[0] != "u" or b[0] != "u":
            return False
        return a[1] != rs.neg(b[1]) and rs.sum_idx[a[1], b[1]] < 0

    changed = True
    while changed:
        changed = False
        # (i) cancel x x
        out: List[Tuple[str, int]] = []
        for it in items:
            if out and out[-1] == it:
                out.pop()
                changed = True
            else:
                out.append(it)
        items = out
        # (iii) omega_j u_a omega_j -> u_{s_j a}
        for k in range(len(items) - 2):
            a, b, c = items[k:k + 3]
            if a[0] == "w" and c == a and b[0] == "u":
                s = simple_element(word.label, a[1]).perm
                items[k:k + 3] = [("u", int(s[b[1]]))]
                changed = True
                break
        if changed:
            continue
        # (ii) u_a u_b u_a u_b -> u_{a+b}
        for k in range(len(items) - 3):
            a, b, c, d = items[k:k + 4]
            if a[0] == b[0] == "u" and a == c and b == d and a != b:
                s = rs.sum_idx[a[1], b[1]]
                if s >= 0:
                    items[k:k + 4] = [("u", int(s))]
                else:
                    items[k:k + 4] = []
                changed = True
                break
        if changed:
            continue
        # bring equal root elements together across commuting factors
        for k, a in enumerate(items):
            if a[0] != "u":
                continue
            for l in range(k + 1, len(items)):
                if items[l] == a:
                    del items[l]
                    del items[k]
                    changed = True
                    break
                if not commute(a, items[l]):
                    break
            if changed:
                break
    toks = tuple(Token("u", root=i) if k == "u" else Token("w", j=i) for k, i in items)
    res = GroupWord(toks, 2, word.label)
    if not words_equal(res, word):
        return word
    return res


# ---------------------------------------------------------------- good conjugator search

@dataclass
class SearchResult:
    conjugator: GroupWord
    target: List[int]
    explored: int

    @property
    def omega_indices(self) -> List[int]:
        return [t.j for t in self.conjugator.tokens if t.kind == "w"]


def _rewrite_moves(rs: RootSystem, state: Tuple[int, ...]):
    """Neighbouring u-words over F_2 equal in the group (no conjugation)."""
    n = len(state)
    for k in range(n - 1):
        a, b = state[k], state[k + 1]
        if a == b:
            yield state[:k] + state[k + 2:]
            continue
        if a == rs.neg(b):
            continue
        s = rs.sum_idx[a, b]
        if s < 0:
            yield state[:k] + (b, a) + state[k + 2:]
        else:
            # u_a u_b = u_b u_{a+b} u_a over F_2
            yield state[:k] + (b, int(s), a) + state[k + 2:]
    # expand a non-simple positive root as a commutator of two smaller ones
    for k, r in enumerate(state):
        if rs.is_positive(r) and r >= rs.rank:
            for j in range(rs.rank):
                d = rs.sum_idx[r, rs.neg(j)]
                if 0 <= d < rs.positive_count:
                    yield state[:k] + (j, int(d), j, int(d)) + state[k + 1:]
                    break


def _score(rs: RootSystem, state: Tuple[int, ...]) -> Tuple[int, int]:
    h = rs.heights()
    total = 0
    for r in state:
        hr = int(h[r])
        total += hr if hr > 0 else 4 * (-hr) + 4
    return total, len(state)


def search_good_conjugator(z: GroupWord, O: str, p: int = 2, budget: int = 10**5,
                           max_len: int = 40) -> Optional[SearchResult]:
    """Best-first search for g with g z g^-1 a reduced word of simple u's hooking into O.

    Moves are conjugation by omega_j and the p = 2 rewriting rules.  The
    score is the height sum of the factors, so the search can move
    sideways or uphill when needed.  Returns None when the budget runs out.
    """
    if p != 2:
        raise ChevalleyError("search_good_conjugator works over F_2")
    rs = root_system(z.label)
    if any(t.kind != "u" or t.c % 2 == 0 for t in z.tokens):
        raise ChevalleyError("z must be a product of root elements")
    start = tuple(t.root for t in z.tokens)
    perms = [np.array(word_to_element(z.label, [j]).perm) for j in range(1, rs.rank + 1)]
    # state -> (parent, omega index or 0)
    parent: Dict[Tuple[int, ...], Tuple[Optional[Tuple[int, ...]], int]] = {start: (None, 0)}
    heap = [(_score(rs, start), 0, start)]
    counter = 0
    explored = 0
    while heap and explored < budget:
        _, _, st = heapq.heappop(heap)
        explored += 1
        if all(0 <= r < rs.rank for r in st):
            target = [r + 1 for r in st]
            if is_reduced(z.label, target):
                try:
                    ok = hooks_into(word_to_element(z.label, target), O, p)
                except ValueError:
                    ok = False
                if ok:
                    conj = _cancel_squares(_trace_conjugator(parent, st))
                    g = omega_word(conj, 2, z.label)
                    tw = simple_u_word(target, 2, z.label)
                    if words_equal(g + z + g.inverse(), tw):
                        return SearchResult(g, target, explored)
        nbrs: List[Tuple[Tuple[int, ...], int]] = []
        for j in range(rs.rank):
            nbrs.append((tuple(int(perms[j][r]) for r in st), j + 1))
        for nb in _rewrite_moves(rs, st):
            if len(nb) <= max_len:
                nbrs.append((nb, 0))
        for nb, j in nbrs:
            if nb in parent:
                continue
            parent[nb] = (st, j)
            counter += 1
            heapq.heappush(heap, (_score(rs, nb), counter, nb))
    return None


def _cancel_squares(seq: List[int]) -> List[int]:
    # omega_j^2 = h_j(-1) is trivial over F_2
    out: List[int] = []
    for j in seq:
        if out and out[-1] == j:
            out.pop()
        else:
            out.append(j)
    return out


def _trace_conjugator(parent, st) -> List[int]:
    """omega indices [j_s .. j_1] such that g = omega_{j_s} .. omega_{j_1}."""
    seq: List[int] = []
    while True:
        prev, j = parent[st]
        if prev is None:
            break
        if j:
            seq.append(j)
        st = prev
    # the first conjugation applied is innermost, i.e. rightmost
    return seq
