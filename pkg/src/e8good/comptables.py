"""Exact character tables of the small groups that occur as component groups.

Values live in cyclotomic fields Q(zeta_N), stored as rational coordinate
vectors on the power basis 1, z, ..., z^(phi(N)-1).  Nothing here uses
floating point.
"""
from __future__ import annotations

import itertools
from dataclasses import dataclass
from fractions import Fraction
from functools import lru_cache
from math import gcd
from typing import Dict, List, Sequence, Tuple

__all__ = [
    "Cyc", "cyclotomic_poly", "FiniteGroupTable", "TableError", "table_for",
    "verify_orthogonality", "SUPPORTED_GROUPS", "partitions",
]


class TableError(ValueError):
    pass


def _lcm(a: int, b: int) -> int:
    return a * b // gcd(a, b)


def _poly_divmod(num: List[int], den: List[int]) -> Tuple[List[int], List[int]]:
    # integer polynomials, coefficient lists from degree 0 upwards; den monic
    num = list(num)
    q = [0] * max(len(num) - len(den) + 1, 1)
    for k in range(len(num) - len(den), -1, -1):
        c = num[k + len(den) - 1]
        q[k] = c
        if c:
            for i, d in enumerate(den):
                num[k + i] -= c * d
    return q, num[: len(den) - 1]


@lru_cache(maxsize=None)
def cyclotomic_poly(n: int) -> Tuple[int, ...]:
    """Coefficients of Phi_n from the constant term up."""
    if n < 1:
        raise TableError("n must be positive")
    poly = [-1] + [0] * (n - 1) + [1]
    for d in range(1, n):
        if n % d == 0:
            poly, rem = _poly_divmod(poly, list(cyclotomic_poly(d)))
            assert not any(rem)
    return tuple(poly)


def _solve_exact(cols: List[Tuple[Fraction, ...]], target: Tuple[Fraction, ...]):
    """Solve sum x_j cols[j] = target exactly; None if inconsistent."""
    n = len(cols)
    rows = [[Fraction(col[i]) for col in cols] + [Fraction(target[i])] for i in range(len(target))]
    piv_cols = []
    r = 0
    for c in range(n):
        pr = next((i for i in range(r, len(rows)) if rows[i][c]), None)
        if pr is None:
            continue
        rows[r], rows[pr] = rows[pr], rows[r]
        inv = 1 / rows[r][c]
        rows[r] = [x * inv for x in rows[r]]
        for i in range(len(rows)):
            if i != r and rows[i][c]:
                f = rows[i][c]
                rows[i] = [x - f * y for x, y in zip(rows[i], rows[r])]
        piv_cols.append(c)
        r += 1
    if any(row[-1] for row in rows[r:]):
        return None
    x = [Fraction(0)] * n
    for i, c in enumerate(piv_cols):
        x[c] = rows[i][-1]
    return x


class Cyc:
    """An element of Q(zeta_N) in the power basis."""

    __slots__ = ("N", "c")

    def __init__(self, N: int, coeffs: Sequence):
        self.N = N
        phi = len(cyclotomic_poly(N)) - 1
        c = [Fraction(x) for x in coeffs]
        if len(c) > phi:
            c = self._reduce(N, c)
        c += [Fraction(0)] * (phi - len(c))
        self.c = tuple(c)

    @staticmethod
    def _reduce(N: int, c: List[Fraction]) -> List[Fraction]:
        f = cyclotomic_poly(N)
        d = len(f) - 1
        c = list(c)
        for k in range(len(c) - 1, d - 1, -1):
            a = c[k]
            if a:
                for i, fi in enumerate(f):
                    c[k - d + i] -= a * fi
        return c[:d]

    # constructors
    @classmethod
    def rational(cls, x, N: int = 1) -> "Cyc":
        return cls(N, [x])

    @classmethod
    def zeta(cls, N: int, k: int = 1) -> "Cyc":
        k %= N
        c = [0] * (k + 1)
        c[k] = 1
        return cls(N, c)

    def lift(self, M: int) -> "Cyc":
        if M == self.N:
            return self
        if M % self.N:
            raise TableError(f"cannot embed Q(zeta_{self.N}) in Q(zeta_{M})")
        step = M // self.N
        c = [Fraction(0)] * (step * (len(self.c) - 1) + 1)
        for i, a in enumerate(self.c):
            c[i * step] = a
        return Cyc(M, c)

    def _common(self, other) -> Tuple["Cyc", "Cyc"]:
        if not isinstance(other, Cyc):
            other = Cyc.rational(other, self.N)
        M = _lcm(self.N, other.N)
        return self.lift(M), other.lift(M)

    def __add__(self, other):
        a, b = self._common(other)
        return Cyc(a.N, [x + y for x, y in zip(a.c, b.c)])

    __radd__ = __add__

    def __neg__(self):
        return Cyc(self.N, [-x for x in self.c])

    def __sub__(self, other):
        return self + (-other if isinstance(other, Cyc) else -Fraction(other))

    def __rsub__(self, other):
        return (-self) + other

    def __mul__(self, other):
        a, b = self._common(other)
        prod = [Fraction(0)] * (2 * len(a.c) - 1)
        for i, x in enumerate(a.c):
            if x:
                for j, y in enumerate(b.c):
                    if y:
                        prod[i + j] += x * y
        return Cyc(a.N, prod)

    __rmul__ = __mul__

    def conj(self) -> "Cyc":
        out = Cyc(self.N, [])
        for i, a in enumerate(self.c):
            if a:
                out = out + Cyc.zeta(self.N, -i) * a
        return out

    def __eq__(self, other) -> bool:
        if not isinstance(other, Cyc):
            try:
                other = Cyc.rational(other)
            except (TypeError, ValueError):
                return NotImplemented
        a, b = self._common(other)
        return a.c == b.c

    def __hash__(self):
        r = self.reduced()
        return hash((r.N, r.c))

    def reduced(self) -> "Cyc":
        """Rewrite in the smallest Q(zeta_M), M | N, that contains the value."""
        for M in range(1, self.N + 1):
            if self.N % M:
                continue
            cols = [Cyc.zeta(M, i).lift(self.N).c for i in range(len(cyclotomic_poly(M)) - 1)]
            sol = _solve_exact(cols, self.c)
            if sol is not None:
                return Cyc(M, sol)
        return self

    def is_rational(self) -> bool:
        return not any(self.c[1:])

    def is_real(self) -> bool:
        return self == self.conj()

    def to_fraction(self) -> Fraction:
        if not self.is_rational():
            raise TableError(f"{self} is not rational")
        return self.c[0]

    def __repr__(self) -> str:
        return f"Cyc({self})"

    def __str__(self) -> str:
        r = self.reduced()
        if not r.is_rational():
            for k in range(1, r.N):
                z = Cyc.zeta(r.N, k)
                mono = f"z{r.N}" if k == 1 else f"z{r.N}^{k}"
                if z.c == r.c:
                    return mono
                if (-z).c == r.c:
                    return "-" + mono
        terms = []
        for i, a in enumerate(r.c):
            if not a:
                continue
            mono = "" if i == 0 else (f"z{r.N}" if i == 1 else f"z{r.N}^{i}")
            if not mono:
                terms.append(str(a))
            elif a == 1:
                terms.append(mono)
            elif a == -1:
                terms.append("-" + mono)
            else:
                terms.append(f"{a}*{mono}")
        if not terms:
            return "0"
        s = terms[0]
        for t in terms[1:]:
            s += t if t.startswith("-") else "+" + t
        return s


# ---------------------------------------------------------------- tables

@dataclass
class FiniteGroupTable:
    group_label: str
    classes: List[Tuple[str, int, str]]          # (name, size, representative)
    characters: List[Tuple[str, int, List[Cyc]]]  # (name, degree, values per class)
    N: int

    @property
    def order(self) -> int:
        return sum(s for _, s, _ in self.classes)

    @property
    def class_names(self) -> List[str]:
        return [c[0] for c in self.classes]

    @property
    def char_names(self) -> List[str]:
        return [c[0] for c in self.characters]

    def value(self, char: str, cls: str) -> Cyc:
        i = self.class_names.index(cls)
        for name, _, vals in self.characters:
            if name == char:
                return vals[i]
        raise TableError(f"unknown character {char!r}")

    def degree(self, char: str) -> int:
        for name, d, _ in self.characters:
            if name == char:
                return d
        raise TableError(f"unknown character {char!r}")

    def central_classes(self) -> List[str]:
        return [n for n, s, _ in self.classes if s == 1]

    def translate(self, z: str, cls: str) -> str:
        """The class of z*a for central z and a in cls."""
        if z not in self.central_classes():
            raise TableError(f"{z} is not central")
        for target in self.class_names:
            if all(vals[self.class_names.index(target)] * d ==
                   vals[self.class_names.index(cls)] * vals[self.class_names.index(z)]
                   for _, d, vals in self.characters):
                return target
        raise TableError("translation failed")

    def as_records(self) -> dict:
        return {
            "group": self.group_label,
            "conductor": self.N,
            "classes": [{"name": n, "size": s, "rep": r} for n, s, r in self.classes],
            "characters": [{"name": n, "degree": d, "values": [str(v) for v in vals]}
                           for n, d, vals in self.characters],
        }

    def format(self) -> str:
        head = ["", *self.class_names]
        rows = [head, ["size", *[str(s) for _, s, _ in self.classes]]]
        for n, _, vals in self.characters:
            rows.append([n, *[str(v) for v in vals]])
        widths = [max(len(r[i]) for r in rows) for i in range(len(head))]
        return "\n".join("  ".join(x.rjust(w) for x, w in zip(r, widths)) for r in rows)


def _cyclic(n: int) -> FiniteGroupTable:
    names = {
        1: ["1"], 2: ["1", "-1"], 3: ["1", "w", "w^2"], 4: ["1", "i", "-1", "-i"],
        5: ["1", "z5", "z5^2", "z5^3", "z5^4"], 6: ["1", "-w^2", "w", "-1", "w^2", "-w"],
    }[n]
    classes = [("1" if j == 0 else ("g" if j == 1 else f"g^{j}"), 1, f"g^{j}") for j in range(n)]
    chars = [(names[k], 1, [Cyc.zeta(n, k * j) for j in range(n)]) for k in range(n)]
    return FiniteGroupTable(f"Z{n}", classes, chars, n)


def partitions(n: int, largest: int = None) -> List[Tuple[int, ...]]:
    largest = n if largest is None else largest
    if n == 0:
        return [()]
    out = []
    for k in range(min(n, largest), 0, -1):
        for rest in partitions(n - k, k):
            out.append((k,) + rest)
    return out


def _mn_character(lam: Tuple[int, ...], mu: Tuple[int, ...]) -> int:
    """Murnaghan-Nakayama rule via beta-sets."""
    if not mu:
        return 1
    r, rest = mu[0], mu[1:]
    m = len(lam)
    beta = [lam[i] + (m - 1 - i) for i in range(m)]
    total = 0
    bset = set(beta)
    for b in beta:
        if b - r >= 0 and (b - r) not in bset:
            height = sum(1 for x in beta if b - r < x < b)
            nb = sorted((bset - {b}) | {b - r}, reverse=True)
            new = tuple(x - (m - 1 - i) for i, x in enumerate(nb))
            new = tuple(x for x in new if x > 0)
            total += (-1) ** height * _mn_character(new, rest)
    return total


def _class_size_sym(mu: Tuple[int, ...]) -> int:
    from math import factorial
    n = sum(mu)
    denom = 1
    for k in set(mu):
        m = mu.count(k)
        denom *= k ** m * factorial(m)
    return factorial(n) // denom


def _lab(p: Tuple[int, ...]) -> str:
    return "(" + "".join(str(x) for x in p) + ")"


def _symmetric(n: int) -> FiniteGroupTable:
    parts = partitions(n)
    cls_parts = sorted(parts, key=lambda mu: (len(mu) != n, -len(mu)))
    classes = [(_lab(mu), _class_size_sym(mu), _lab(mu)) for mu in cls_parts]
    chars = []
    for lam in parts:
        vals = [Cyc.rational(_mn_character(lam, mu)) for mu in cls_parts]
        chars.append((_lab(lam), int(vals[0].to_fraction()), vals))
    if n == 3:
        rename = {"(3)": "1", "(111)": "eps", "(21)": "r"}
        chars = [(rename[c], d, v) for c, d, v in chars]
    return FiniteGroupTable(f"S{n}", classes, chars, 1)


def _matmul2(a, b):
    return tuple(tuple(sum(a[i][k] * b[k][j] for k in range(2)) for j in range(2)) for i in range(2))


def _dihedral8() -> FiniteGroupTable:
    s = ((0, 1), (1, 0))
    t = ((1, 0), (0, -1))
    one = ((1, 0), (0, 1))
    # words in s, t reaching every element; keep the shortest word per element
    elems: Dict[tuple, str] = {one: ""}
    frontier = [one]
    while frontier:
        nxt = []
        for g in frontier:
            for name, gen in (("s", s), ("t", t)):
                h = _matmul2(g, gen)
                if h not in elems:
                    elems[h] = elems[g] + name
                    nxt.append(h)
        frontier = nxt
    inv = {g: next(h for h in elems if _matmul2(g, h) == one) for g in elems}
    seen = set()
    classes_el = []
    for g in sorted(elems, key=lambda x: (len(elems[x]), elems[x])):
        if g in seen:
            continue
        cl = {_matmul2(_matmul2(h, g), inv[h]) for h in elems}
        seen |= cl
        classes_el.append((g, cl))
    names = {"": "1", "s": "s", "t": "t", "st": "st", "stst": "stst", "sts": "t", "tst": "s", "ts": "st",
             "tsts": "stst"}
    classes = []
    for g, cl in classes_el:
        w = elems[g]
        classes.append((names.get(w, w), len(cl), ",".join(sorted(elems[h] or "1" for h in cl))))

    def lin(vs, vt):
        def f(g):
            w = elems[g]
            return (vs ** w.count("s")) * (vt ** w.count("t"))
        return f

    chars = []
    for name, vs, vt in (("1", 1, 1), ("eps_s", -1, 1), ("eps_t", 1, -1), ("eps", -1, -1)):
        f = lin(vs, vt)
        chars.append((name, 1, [Cyc.rational(f(g)) for g, _ in classes_el]))
    chars.append(("r", 2, [Cyc.rational(g[0][0] + g[1][1]) for g, _ in classes_el]))
    return FiniteGroupTable("D8", classes, chars, 1)


def _product(a: FiniteGroupTable, b: FiniteGroupTable, label: str) -> FiniteGroupTable:
    classes = [(f"({ca},{cb})", sa * sb, f"({ra},{rb})")
               for (ca, sa, ra), (cb, sb, rb) in itertools.product(a.classes, b.classes)]
    chars = []
    for (na, da, va), (nb, db, vb) in itertools.product(a.characters, b.characters):
        chars.append((f"{na}x{nb}", da * db, [x * y for x, y in itertools.product(va, vb)]))
    return FiniteGroupTable(label, classes, chars, _lcm(a.N, b.N))


def _z2_named() -> FiniteGroupTable:
    t = _cyclic(2)
    return FiniteGroupTable("Z2", [("0", 1, "0"), ("1", 1, "1")],
                            [("1", 1, t.characters[0][2]), ("eps", 1, t.characters[1][2])], 2)


def _build(label: str) -> FiniteGroupTable:
    if label in {f"Z{n}" for n in range(1, 7)}:
        return _cyclic(int(label[1:]))
    if label == "S3":
        return _symmetric(3)
    if label == "S5":
        return _symmetric(5)
    if label == "D8":
        return _dihedral8()
    if label == "Z2xZ2":
        return _product(_z2_named(), _z2_named(), "Z2xZ2")
    if label == "S3xZ2":
        s3 = _symmetric(3)
        return _product(s3, _z2_named(), "S3xZ2")
    raise TableError(f"unsupported group {label!r}")


SUPPORTED_GROUPS = ("Z1", "Z2", "Z3", "Z4", "Z5", "Z6", "S3", "S5", "D8", "Z2xZ2", "S3xZ2")


@lru_cache(maxsize=None)
def table_for(label: str) -> FiniteGroupTable:
    t = _build(label)
    if not verify_orthogonality(t):
        raise TableError(f"constructed table for {label} fails orthogonality")
    return t


def verify_orthogonality(t: FiniteGroupTable) -> bool:
    """Exact row and column orthogonality, class equation and degree sum."""
    order = t.order
    k = len(t.classes)
    if len(t.characters) != k:
        return False
    if sum(d * d for _, d, _ in t.characters) != order:
        return False
    sizes = [s for _, s, _ in t.classes]
    for i, (_, di, vi) in enumerate(t.characters):
        if vi[0] != di:
            return False
        for j, (_, _, vj) in enumerate(t.characters):
            ip = sum((vi[c] * vj[c].conj() * sizes[c] for c in range(k)), Cyc.rational(0))
            if ip != (order if i == j else 0):
                return False
    for a in range(k):
        for b in range(k):
            s = sum((v[a] * v[b].conj() for _, _, v in t.characters), Cyc.rational(0))
            if s != (Fraction(order, sizes[a]) if a == b else 0):
                return False
    return True
