"""Brute-force check of Ree's formula on SL2(F_q) and SL3(F_2).

For a unipotent u and w in W the formula reads

    |BwB n O_u| * |C(u)| / |B|  =  sum over phi in Irr(W) of phi_q(T_w) * rho_phi(u)

where rho_phi runs over the principal-series unipotent characters.  The left
side is counted directly on the enumerated group.  The right side combines
Hecke-algebra character values with character values obtained from
permutation characters on G/P, so the two sides are computed independently.
"""
from __future__ import annotations

import itertools
from dataclasses import dataclass, field
from fractions import Fraction
from typing import Dict, List, Sequence, Tuple

import numpy as np

__all__ = ["ReeOracleError", "FiniteField", "SmallGroupModel", "UnipotentClass", "build_model",
           "check_ree", "check_all", "hecke_character", "MAX_WORK"]

MAX_WORK = 2_000_000   # bound on |G|^2, the cost of the conjugation sweeps

Mat = Tuple[int, ...]
Perm = Tuple[int, ...]


class ReeOracleError(ValueError):
    pass


class FiniteField:
    """F_q for q prime or q = 4, elements encoded as 0..q-1."""

    def __init__(self, q: int):
        self.q = q
        if q == 4:
            # a = 2, a + 1 = 3, a^2 = a + 1; addition is xor on the bit encoding
            add = [[x ^ y for y in range(4)] for x in range(4)]

            def pmul(x, y):
                r = 0
                for i in range(2):
                    if (y >> i) & 1:
                        r ^= x << i
                if r & 4:
                    r ^= 0b111
                return r
            mul = [[pmul(x, y) for y in range(4)] for x in range(4)]
        elif q >= 2 and all(q % d for d in range(2, int(q ** 0.5) + 1)):
            add = [[(x + y) % q for y in range(q)] for x in range(q)]
            mul = [[(x * y) % q for y in range(q)] for x in range(q)]
        else:
            raise ReeOracleError(f"unsupported field size {q}")
        self.add = add
        self.mul = mul
        self.neg = [next(y for y in range(q) if add[x][y] == 0) for x in range(q)]
        self.inv = [0] + [next(y for y in range(q) if mul[x][y] == 1) for x in range(1, q)]

    def sub(self, x: int, y: int) -> int:
        return self.add[x][self.neg[y]]


class _MatGroup:
    def __init__(self, F: FiniteField, n: int):
        self.F, self.n = F, n

    def mul(self, a: Mat, b: Mat) -> Mat:
        n, F = self.n, self.F
        out = []
        for i in range(n):
            for j in range(n):
                s = 0
                for k in range(n):
                    s = F.add[s][F.mul[a[i * n + k]][b[k * n + j]]]
                out.append(s)
        return tuple(out)

    def det(self, a: Mat) -> int:
        n, F = self.n, self.F
        if n == 2:
            return F.sub(F.mul[a[0]][a[3]], F.mul[a[1]][a[2]])
        total = 0
        for perm in itertools.permutations(range(n)):
            term = 1
            for i, j in enumerate(perm):
                term = F.mul[term][a[i * n + j]]
            if _sign(perm) < 0:
                term = F.neg[term]
            total = F.add[total][term]
        return total

    def inv(self, a: Mat) -> Mat:
        n, F = self.n, self.F
        m = [list(a[i * n:(i + 1) * n]) + [int(i == j) for j in range(n)] for i in range(n)]
        for c in range(n):
            r = next(r for r in range(c, n) if m[r][c])
            m[c], m[r] = m[r], m[c]
            s = F.inv[m[c][c]]
            m[c] = [F.mul[s][x] for x in m[c]]
            for r in range(n):
                if r != c and m[r][c]:
                    f = m[r][c]
                    m[r] = [F.sub(x, F.mul[f][y]) for x, y in zip(m[r], m[c])]
        return tuple(x for row in m for x in row[n:])

    def rank(self, rows: List[List[int]]) -> int:
        F = self.F
        m = [list(r) for r in rows]
        rk = 0
        ncol = len(m[0]) if m else 0
        for c in range(ncol):
            piv = next((r for r in range(rk, len(m)) if m[r][c]), None)
            if piv is None:
                continue
            m[rk], m[piv] = m[piv], m[rk]
            s = F.inv[m[rk][c]]
            m[rk] = [F.mul[s][x] for x in m[rk]]
            for r in range(len(m)):
                if r != rk and m[r][c]:
                    f = m[r][c]
                    m[r] = [F.sub(x, F.mul[f][y]) for x, y in zip(m[r], m[rk])]
            rk += 1
        return rk

    def bruhat_perm(self, a: Mat) -> Perm:
        """w with a in BwB (B upper triangular), from ranks of lower-left blocks."""
        n = self.n
        rows = [list(a[i * n:(i + 1) * n]) for i in range(n)]

        def r(i, j):
            if i >= n or j == 0:
                return 0
            return self.rank([row[:j] for row in rows[i:]])
        w = []
        for k in range(n):
            j = next(j for j in range(1, n + 1) if r(k, j) - r(k + 1, j) == 1)
            w.append(j - 1)
        return tuple(w)


def _sign(perm: Sequence[int]) -> int:
    inv = sum(1 for i in range(len(perm)) for j in range(i + 1, len(perm)) if perm[i] > perm[j])
    return -1 if inv % 2 else 1


def _length(w: Perm) -> int:
    return sum(1 for i in range(len(w)) for j in range(i + 1, len(w)) if w[i] > w[j])


def _reduced_word(w: Perm) -> List[int]:
    """Simple transpositions s_i (swap i, i+1) with w = s_{i1} ... s_{ik}, via bubble sort."""
    w = list(w)
    word = []
    changed = True
    while changed:
        changed = False
        for i in range(len(w) - 1):
            if w[i] > w[i + 1]:
                w[i], w[i + 1] = w[i + 1], w[i]
                word.append(i)
                changed = True
    return word[::-1]


@dataclass
class UnipotentClass:
    rep: Mat
    elements: List[Mat]
    centralizer_order: int


@dataclass
class SmallGroupModel:
    type: str
    q: int
    n: int
    elements: List[Mat]
    borel: List[Mat]
    weyl_reps: Dict[Perm, Mat]
    cells: Dict[Perm, List[Mat]]
    unipotent_classes: List[UnipotentClass]
    principal_series_values: Dict[Tuple[str, int], Fraction]
    cell_of: Dict[Mat, Perm] = field(repr=False, default_factory=dict)

    @property
    def order(self) -> int:
        return len(self.elements)

    def weyl_elements(self) -> List[Perm]:
        return sorted(self.cells, key=lambda w: (_length(w), w))

    def class_index(self, u: Mat) -> int:
        for i, c in enumerate(self.unipotent_classes):
            if u in c.elements:
                return i
        raise ReeOracleError("element is not unipotent")


def _identity(n: int) -> Mat:
    return tuple(int(i == j) for i in range(n) for j in range(n))


def _group_order(n: int, q: int) -> int:
    out = q ** (n * (n - 1) // 2)
    for k in range(2, n + 1):
        out *= q ** k - 1
    return out


def build_model(type_: str, q: int) -> SmallGroupModel:
    """Enumerate SL_n(F_q) (n = 2 for A1, 3 for A2) with Bruhat cells and unipotent data."""
    n = {"A1": 2, "A2": 3}.get(type_)
    if n is None:
        raise ReeOracleError(f"unsupported type {type_!r}")
    order = _group_order(n, q)
    if order > 10 ** 6 or order * order > MAX_WORK:
        raise ReeOracleError(f"size bound exceeded: |SL{n}({q})| = {order}")
    F = FiniteField(q)
    G = _MatGroup(F, n)
    elements = [m for m in itertools.product(range(q), repeat=n * n) if G.det(m) == 1]
    if len(elements) != order:
        raise ReeOracleError("enumeration does not match the group order")
    ident = _identity(n)

    def upper(m):
        return all(m[i * n + j] == 0 for i in range(n) for j in range(i))

    borel = [m for m in elements if upper(m)]
    cell_of = {m: G.bruhat_perm(m) for m in elements}
    cells: Dict[Perm, List[Mat]] = {}
    for m, w in cell_of.items():
        cells.setdefault(w, []).append(m)
    weyl_reps = {}
    for w in cells:
        # signed permutation matrix with entry (k, w(k)); fix the determinant with one sign
        rep = [0] * (n * n)
        for k, j in enumerate(w):
            rep[k * n + j] = 1
        if G.det(tuple(rep)) != 1:
            rep[w[0]] = F.neg[1]
        weyl_reps[w] = tuple(rep)

    inv = {m: G.inv(m) for m in elements}

    def is_unipotent(m):
        x = tuple(F.sub(a, b) for a, b in zip(m, ident))
        p = x
        for _ in range(n - 1):
            p = G.mul(p, x)
        return not any(p)

    unis = [m for m in elements if is_unipotent(m)]
    seen = set()
    classes = []
    for u in unis:
        if u in seen:
            continue
        orbit = sorted({G.mul(G.mul(g, u), inv[g]) for g in elements})
        seen.update(orbit)
        classes.append(UnipotentClass(u, orbit, order // len(orbit)))

    # permutation characters on G/P_J; J = subsets of simple reflections
    simple = list(range(n - 1))
    parabolics: Dict[Tuple[int, ...], set] = {}
    for r in range(len(simple) + 1):
        for J in itertools.combinations(simple, r):
            allowed = {w for w in cells if set(_reduced_word(w)) <= set(J)}
            parabolics[J] = {m for m in elements if cell_of[m] in allowed}

    def perm_char(P: set, g: Mat) -> Fraction:
        hits = sum(1 for x in elements if G.mul(G.mul(inv[x], g), x) in P)
        return Fraction(hits, len(P))

    def signed_sum(g):
        return sum((-1) ** len(J) * perm_char(P, g) for J, P in parabolics.items())

    values: Dict[Tuple[str, int], Fraction] = {}
    for i, c in enumerate(classes):
        u = c.rep
        pi_B = perm_char(parabolics[()], u)
        st = signed_sum(u)
        values[("1", i)] = Fraction(1)
        values[("St", i)] = st
        if n == 2:
            # Ind_B^G 1 = 1 + St
            if pi_B - 1 != st:
                raise ReeOracleError("A1 permutation character does not split as 1 + St")
        else:
            rho = (pi_B - 1 - st) / 2
            values[("rho", i)] = rho
        values[("perm", i)] = pi_B
    model = SmallGroupModel(type_, q, n, elements, borel, weyl_reps, cells, classes, values, cell_of)
    if n == 3:
        _validate_a2(model, G, parabolics, inv)
    return model


def _validate_a2(model: SmallGroupModel, G: _MatGroup, parabolics, inv) -> None:
    """Inner products over the whole group: St and rho are irreducible and distinct from 1."""
    elements = model.elements
    full_classes: List[List[Mat]] = []
    seen = set()
    for g in elements:
        if g in seen:
            continue
        orb = {G.mul(G.mul(x, g), inv[x]) for x in elements}
        seen.update(orb)
        full_classes.append(sorted(orb))

    def perm_char(P, g):
        return Fraction(sum(1 for x in elements if G.mul(G.mul(inv[x], g), x) in P), len(P))

    st, rho, one = [], [], []
    sizes = []
    for cl in full_classes:
        g = cl[0]
        s = sum((-1) ** len(J) * perm_char(P, g) for J, P in parabolics.items())
        pb = perm_char(parabolics[()], g)
        st.append(s)
        rho.append((pb - 1 - s) / 2)
        one.append(Fraction(1))
        sizes.append(len(cl))

    def ip(a, b):
        return sum(x * y * s for x, y, s in zip(a, b, sizes)) / len(elements)

    e = next(i for i, cl in enumerate(full_classes) if cl == [_identity(model.n)])
    checks = [ip(st, st) == 1, ip(rho, rho) == 1, ip(st, one) == 0, ip(rho, one) == 0, ip(st, rho) == 0,
              st[e] == model.q ** 3, rho[e] == model.q * (model.q + 1)]
    if not all(checks):
        raise ReeOracleError("principal-series decomposition failed its inner-product checks")


def hecke_character(type_: str, q: int, name: str, w: Perm) -> int:
    """phi_q(T_w) for the irreducible characters of the Hecke algebra of type A1 or A2.

    Quadratic relation (T_s - q)(T_s + 1) = 0.  'index' sends T_s to q, 'sign'
    sends T_s to -1; 'refl' (A2 only) is the trace of a 2-dimensional model.
    """
    word = _reduced_word(w)
    if name == "index":
        return q ** len(word)
    if name == "sign":
        return (-1) ** len(word)
    if name == "refl" and type_ == "A2":
        gens = [np.array([[-1, 0], [1, q]], dtype=object), np.array([[q, q], [0, -1]], dtype=object)]
        m = np.array([[1, 0], [0, 1]], dtype=object)
        for s in word:
            m = m.dot(gens[s])
        return int(m[0, 0] + m[1, 1])
    raise ReeOracleError(f"no Hecke character {name!r} for {type_}")


# Hecke character <-> principal-series unipotent character
_PAIRING = {"A1": [("index", "1"), ("sign", "St")],
            "A2": [("index", "1"), ("sign", "St"), ("refl", "rho")]}


def check_ree(model: SmallGroupModel, u, w) -> Tuple[Fraction, Fraction, bool]:
    """Both sides of Ree's formula at (u, w); u is a matrix or a class index, w a permutation."""
    ci = u if isinstance(u, int) else model.class_index(tuple(u))
    cls = model.unipotent_classes[ci]
    w = tuple(w)
    if w not in model.cells:
        raise ReeOracleError(f"{w} is not in the Weyl group")
    count = sum(1 for m in cls.elements if model.cell_of[m] == w)
    lhs = Fraction(count * cls.centralizer_order, len(model.borel))
    rhs = Fraction(0)
    for hname, cname in _PAIRING[model.type]:
        rhs += hecke_character(model.type, model.q, hname, w) * model.principal_series_values[(cname, ci)]
    return lhs, rhs, lhs == rhs


def check_all(model: SmallGroupModel) -> List[Tuple[int, Perm, Fraction, Fraction, bool]]:
    out = []
    for ci in range(len(model.unipotent_classes)):
        for w in model.weyl_elements():
            lhs, rhs, ok = check_ree(model, ci, w)
            out.append((ci, w, lhs, rhs, ok))
    return out
