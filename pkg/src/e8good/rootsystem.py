"""Simply-laced root systems with a Chevalley basis.

Roots are integer vectors in the simple-root basis.  Positive roots are
stored first, ordered by height and then by descending coefficient
vector, so that the simple root alpha_j sits at index j-1.  The negative
of root index i is index i + N where N is the number of positive roots.
"""
from __future__ import annotations

from dataclasses import dataclass, field
from functools import lru_cache
from typing import Dict, List, Optional, Sequence, Tuple

import numpy as np

SUPPORTED = (
    [f"A{n}" for n in range(1, 9)]
    + [f"D{n}" for n in range(4, 9)]
    + ["E6", "E7", "E8"]
)


class RootSystemError(ValueError):
    pass


@dataclass(frozen=True)
class CartanDatum:
    type_label: str
    rank: int
    cartan_matrix: Tuple[Tuple[int, ...], ...]

    def __post_init__(self) -> None:
        validate_cartan(self.cartan_matrix)
        if len(self.cartan_matrix) != self.rank:
            raise RootSystemError("rank does not match Cartan matrix size")


def validate_cartan(mat: Sequence[Sequence[int]]) -> None:
    n = len(mat)
    for i in range(n):
        if len(mat[i]) != n:
            raise RootSystemError("Cartan matrix is not square")
        if mat[i][i] != 2:
            raise RootSystemError("Cartan matrix diagonal must be 2")
        for j in range(n):
            if i == j:
                continue
            if mat[i][j] not in (0, -1):
                raise RootSystemError("not simply-laced: off-diagonal entries must be 0 or -1")
            if mat[i][j] != mat[j][i]:
                raise RootSystemError("not simply-laced: Cartan matrix must be symmetric")


def _edges(label: str) -> Tuple[int, List[Tuple[int, int]]]:
    # Bourbaki labelling, 1-based node numbers
    if len(label) < 2 or label[0] not in "ADE" or not label[1:].isdigit():
        raise RootSystemError(f"unknown Cartan type {label!r}")
    kind, n = label[0], int(label[1:])
    if label not in SUPPORTED:
        raise RootSystemError(f"unsupported Cartan type {label!r}")
    if kind == "A":
        return n, [(i, i + 1) for i in range(1, n)]
    if kind == "D":
        return n, [(i, i + 1) for i in range(1, n - 1)] + [(n - 2, n)]
    # E_n: chain 1-3-4-...-n with 2 attached to 4
    chain = [1] + list(range(3, n + 1))
    return n, [(chain[k], chain[k + 1]) for k in range(len(chain) - 1)] + [(2, 4)]


def cartan_datum(label: str) -> CartanDatum:
    n, edges = _edges(label)
    mat = [[2 if i == j else 0 for j in range(n)] for i in range(n)]
    for a, b in edges:
        mat[a - 1][b - 1] = -1
        mat[b - 1][a - 1] = -1
    return CartanDatum(label, n, tuple(tuple(r) for r in mat))


@dataclass(frozen=True)
class Root:
    coeffs: Tuple[int, ...]

    @property
    def height(self) -> int:
        return sum(self.coeffs)

    @property
    def is_positive(self) -> bool:
        return all(c >= 0 for c in self.coeffs) and any(self.coeffs)

    def __neg__(self) -> "Root":
        return Root(tuple(-c for c in self.coeffs))

    def __add__(self, other: "Root") -> "Root":
        return Root(tuple(a + b for a, b in zip(self.coeffs, other.coeffs)))

    def __sub__(self, other: "Root") -> "Root":
        return Root(tuple(a - b for a, b in zip(self.coeffs, other.coeffs)))

    def __str__(self) -> str:
        return "(" + ",".join(str(c) for c in self.coeffs) + ")"


def root_height(r: Root) -> int:
    return r.height


def _order_key(c: Tuple[int, ...]):
    return (sum(c), tuple(-x for x in c))


@dataclass(eq=False)
class RootSystem:
    cartan: CartanDatum
    roots: List[Root]
    positive_count: int
    index: Dict[Tuple[int, ...], int]
    # sum_idx[i, j] = index of roots[i] + roots[j], or -1
    sum_idx: np.ndarray
    # structure constants N[i, j] for roots[i] + roots[j] a root, else 0
    struct: Optional[np.ndarray] = None
    extraspecial: Dict[int, Tuple[int, int]] = field(default_factory=dict)

    @property
    def rank(self) -> int:
        return self.cartan.rank

    @property
    def type_label(self) -> str:
        return self.cartan.type_label

    def __len__(self) -> int:
        return len(self.roots)

    def neg(self, i: int) -> int:
        n = self.positive_count
        return i + n if i < n else i - n

    def is_positive(self, i: int) -> bool:
        return i < self.positive_count

    def find(self, coeffs: Sequence[int]) -> int:
        try:
            return self.index[tuple(int(c) for c in coeffs)]
        except KeyError:
            raise RootSystemError(f"{tuple(coeffs)} is not a root of {self.type_label}") from None

    def simple(self, j: int) -> int:
        """Index of the simple root alpha_j (1-based j)."""
        if not 1 <= j <= self.rank:
            raise RootSystemError(f"simple index {j} out of range 1..{self.rank}")
        return j - 1

    def sum_table(self, i: int, j: int) -> Optional[int]:
        s = int(self.sum_idx[i, j])
        return None if s < 0 else s

    def pairing(self, i: int, j: int) -> int:
        """<roots[i], roots[j]^vee>; the form is symmetric here."""
        return int(self.gram[i, j])

    @property
    def coeff_matrix(self) -> np.ndarray:
        if not hasattr(self, "_coeffs"):
            self._coeffs = np.array([r.coeffs for r in self.roots], dtype=np.int64)
        return self._coeffs

    @property
    def gram(self) -> np.ndarray:
        if not hasattr(self, "_gram"):
            c = self.coeff_matrix
            a = np.array(self.cartan.cartan_matrix, dtype=np.int64)
            self._gram = c @ a @ c.T
        return self._gram

    @property
    def highest_root(self) -> Root:
        return self.roots[self.positive_count - 1]

    def heights(self) -> np.ndarray:
        return self.coeff_matrix.sum(axis=1)

    def N(self, i: int, j: int) -> int:
        if self.struct is None:
            raise RootSystemError("structure constants not computed")
        return int(self.struct[i, j])

    def dump(self) -> str:
        lines = []
        for r in self.roots:
            lines.append(" ".join(str(c) for c in r.coeffs) + f"  {r.height}")
        return "\n".join(lines)


def generate_roots(cartan: CartanDatum) -> RootSystem:
    validate_cartan(cartan.cartan_matrix)
    n = cartan.rank
    a = cartan.cartan_matrix
    simple = [tuple(1 if k == j else 0 for k in range(n)) for j in range(n)]
    found = set(simple)
    layer = list(simple)
    # grow by simple roots; in simply-laced type beta + alpha_j is a root
    # iff <beta, alpha_j> = -1 for positive beta != alpha_j
    while layer:
        nxt = []
        for b in layer:
            for j in range(n):
                pair = sum(b[k] * a[k][j] for k in range(n))
                if pair == -1:
                    c = tuple(b[k] + (1 if k == j else 0) for k in range(n))
                    if c not in found:
                        found.add(c)
                        nxt.append(c)
        layer = nxt
    pos = sorted(found, key=_order_key)
    roots = [Root(c) for c in pos] + [Root(tuple(-x for x in c)) for c in pos]
    index = {r.coeffs: i for i, r in enumerate(roots)}
    m = len(roots)
    coeffs = np.array([r.coeffs for r in roots], dtype=np.int64)
    sum_idx = np.full((m, m), -1, dtype=np.int32)
    for i in range(m):
        s = coeffs[i] + coeffs
        for j in range(m):
            k = index.get(tuple(s[j].tolist()))
            if k is not None:
                sum_idx[i, j] = k
    return RootSystem(cartan, roots, len(pos), index, sum_idx)


def simple_reflection(rs: RootSystem, r: Root, j: int) -> Root:
    if not 1 <= j <= rs.rank:
        raise RootSystemError(f"simple index {j} out of range 1..{rs.rank}")
    a = rs.cartan.cartan_matrix
    pair = sum(r.coeffs[k] * a[k][j - 1] for k in range(rs.rank))
    c = list(r.coeffs)
    c[j - 1] -= pair
    return Root(tuple(c))


def reflection_permutation(rs: RootSystem, j: int) -> np.ndarray:
    """s_j as a permutation of root indices."""
    if not 1 <= j <= rs.rank:
        raise RootSystemError(f"simple index {j} out of range 1..{rs.rank}")
    c = rs.coeff_matrix.copy()
    pair = rs.gram[:, j - 1]
    c[:, j - 1] -= pair
    return np.array([rs.index[tuple(row)] for row in c.tolist()], dtype=np.int64)


def _positive_pair_constant(rs: RootSystem, table: Dict[Tuple[int, int], int], x: int, y: int) -> int:
    """N_{x,y} for arbitrary roots, reduced to positive pairs already in table."""
    if rs.sum_idx[x, y] < 0:
        return 0
    px, py = rs.is_positive(x), rs.is_positive(y)
    if px and py:
        if (x, y) in table:
            return table[(x, y)]
        return -table[(y, x)]
    if not px and not py:
        return -_positive_pair_constant(rs, table, rs.neg(x), rs.neg(y))
    # mixed signs: with z = -(x+y), N_{x,y} = N_{y,z} = N_{z,x}
    z = rs.neg(int(rs.sum_idx[x, y]))
    if px:
        # z positive iff x+y negative
        if rs.is_positive(z):
            return _positive_pair_constant(rs, table, z, x)
        return _positive_pair_constant(rs, table, y, z)
    if rs.is_positive(z):
        return _positive_pair_constant(rs, table, y, z)
    return _positive_pair_constant(rs, table, z, x)


def compute_structure_constants(rs: RootSystem) -> RootSystem:
    """Fill rs.struct using extraspecial pairs (sign +1) in root order."""
    n = rs.positive_count
    table: Dict[Tuple[int, int], int] = {}
    extra: Dict[int, Tuple[int, int]] = {}
    for xi in range(n):
        pairs = [(a, int(rs.sum_idx[xi, rs.neg(a)])) for a in range(xi)
                 if 0 <= rs.sum_idx[xi, rs.neg(a)] < n]
        pairs = [(a, b) for a, b in pairs if a < b]
        if not pairs:
            continue
        alpha, beta = min(pairs)
        extra[xi] = (alpha, beta)
        table[(alpha, beta)] = 1
        for gamma, delta in pairs:
            if gamma == alpha:
                continue
            # alpha + beta - gamma - delta = 0 gives
            # N_{g,d} = N_{b,-g} N_{a,-d} + N_{-g,a} N_{b,-d}
            t1 = _positive_pair_constant(rs, table, beta, rs.neg(gamma)) * \
                _positive_pair_constant(rs, table, alpha, rs.neg(delta))
            t2 = _positive_pair_constant(rs, table, rs.neg(gamma), alpha) * \
                _positive_pair_constant(rs, table, beta, rs.neg(delta))
            val = t1 + t2
            if val not in (1, -1):
                raise RootSystemError(f"structure constant inconsistency at root {xi}")
            table[(gamma, delta)] = val
    m = len(rs.roots)
    struct = np.zeros((m, m), dtype=np.int8)
    for x in range(m):
        for y in range(m):
            if rs.sum_idx[x, y] >= 0:
                struct[x, y] = _positive_pair_constant(rs, table, x, y)
    rs.struct = struct
    rs.extraspecial = extra
    return rs


@lru_cache(maxsize=None)
def root_system(label: str) -> RootSystem:
    """Cached root system with structure constants for a type label."""
    return compute_structure_constants(generate_roots(cartan_datum(label)))


def jacobi_defect(rs: RootSystem) -> int:
    """Count root triples violating the Jacobi identity of the Chevalley basis.

    Triples involving Cartan elements hold by additivity of the pairing,
    so only e_a, e_b, e_c are checked.
    """
    S = rs.sum_idx.astype(np.int64)
    Nm = rs.struct.astype(np.int64)
    G = rs.gram
    m = len(rs.roots)
    neg = np.array([rs.neg(i) for i in range(m)])
    bad = 0
    idx = np.arange(m)
    for a in range(m):
        b = idx[:, None]
        c = idx[None, :]

        def br(x, y, z):
            # coefficient of the root x+y+z in [e_x, [e_y, e_z]] (x+y+z a root)
            yz = S[y, z]
            inner = np.where(yz >= 0, Nm[y, z], 0)
            outer = np.where(yz >= 0, Nm[x, np.maximum(yz, 0)], 0)
            val = inner * outer
            # y = -z: [e_x, h_y] = -<x, y> e_x
            val = val + np.where(z == neg[y], -G[x, y], 0)
            return val

        av = np.full((m, m), a)
        total = br(av, b, c) + br(b, c, av) + br(c, av, b)
        s = S[a][:, None]
        s = np.where(s >= 0, S[np.maximum(s, 0), c], -1)
        bad += int(np.count_nonzero((s >= 0) & (total != 0)))
    return bad
