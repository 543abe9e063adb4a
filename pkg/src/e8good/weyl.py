"""Weyl group elements as permutations of the root list.

Also hosts conjugacy-class identification against a shipped class
catalog and the Lusztig-map predicate ``hooks_into``.
"""
from __future__ import annotations

from collections import deque
from dataclasses import dataclass
from functools import lru_cache
from pathlib import Path
from typing import Dict, Iterable, List, Optional, Sequence, Tuple, Union

import numpy as np

from .rootsystem import RootSystem, RootSystemError, reflection_permutation, root_system

DEFAULT_ORBIT_BUDGET = 10**6
PRIMES = ("2", "3", "5", ">=7")


class WeylError(ValueError):
    pass


class AmbiguousClass(WeylError):
    pass


class NoClassMatch(WeylError):
    pass


@lru_cache(maxsize=None)
def _simple_perms(label: str) -> Tuple[np.ndarray, ...]:
    rs = root_system(label)
    return tuple(reflection_permutation(rs, j) for j in range(1, rs.rank + 1))


class WeylElement:
    """Element of W acting on root indices; perm[i] is the index of w(root i)."""

    __slots__ = ("label", "perm", "_length", "_key")

    def __init__(self, label: str, perm: np.ndarray):
        self.label = label
        self.perm = np.asarray(perm, dtype=np.int64)
        self.perm.setflags(write=False)
        self._length: Optional[int] = None
        self._key: Optional[bytes] = None

    @property
    def rs(self) -> RootSystem:
        return root_system(self.label)

    @property
    def rank(self) -> int:
        return self.rs.rank

    @property
    def key(self) -> bytes:
        if self._key is None:
            self._key = self.perm[: self.rank].tobytes()
        return self._key

    def __eq__(self, other) -> bool:
        return isinstance(other, WeylElement) and self.label == other.label and self.key == other.key

    def __hash__(self) -> int:
        return hash((self.label, self.key))

    def __mul__(self, other: "WeylElement") -> "WeylElement":
        return WeylElement(self.label, self.perm[other.perm])

    def inverse(self) -> "WeylElement":
        inv = np.empty_like(self.perm)
        inv[self.perm] = np.arange(len(self.perm))
        return WeylElement(self.label, inv)

    @property
    def length(self) -> int:
        if self._length is None:
            n = self.rs.positive_count
            self._length = int(np.count_nonzero(self.perm[:n] >= n))
        return self._length

    def sends_negative(self, i: int) -> bool:
        return int(self.perm[i]) >= self.rs.positive_count

    def reduced_word(self) -> List[int]:
        return reduced_word(self)

    def __repr__(self) -> str:
        return f"WeylElement({self.label}, {self.reduced_word()})"


def identity(label: str) -> WeylElement:
    return WeylElement(label, np.arange(len(root_system(label).roots)))


def simple_element(label: str, j: int) -> WeylElement:
    perms = _simple_perms(label)
    if not 1 <= j <= len(perms):
        raise WeylError(f"simple index {j} out of range 1..{len(perms)}")
    return WeylElement(label, perms[j - 1])


def word_to_element(label: str, word: Sequence[int]) -> WeylElement:
    perms = _simple_perms(label)
    n = len(perms)
    p = np.arange(len(perms[0]))
    for j in word:
        if not 1 <= j <= n:
            raise WeylError(f"simple index {j} out of range 1..{n}")
        p = p[perms[j - 1]]
    return WeylElement(label, p)


def length(w: WeylElement) -> int:
    return w.length


def is_reduced(label: str, word: Sequence[int]) -> bool:
    return word_to_element(label, word).length == len(word)


def right_descents(w: WeylElement) -> List[int]:
    n = w.rs.positive_count
    return [j for j in range(1, w.rank + 1) if w.perm[j - 1] >= n]


def reduced_word(w: WeylElement) -> List[int]:
    """Descent walk: repeatedly strip the smallest right descent."""
    perms = _simple_perms(w.label)
    n = w.rs.positive_count
    p = w.perm
    out: List[int] = []
    while True:
        for j in range(len(perms)):
            if p[j] >= n:
                out.append(j + 1)
                p = p[perms[j]]
                break
        else:
            break
    out.reverse()
    return out


def longest_element(label: str) -> WeylElement:
    rs = root_system(label)
    n = rs.positive_count
    # w_0 sends every positive root to a negative one; build it by descent
    w = identity(label)
    perms = _simple_perms(label)
    while True:
        for j in range(rs.rank):
            if w.perm[j] < n:
                w = WeylElement(label, w.perm[perms[j]])
                break
        else:
            return w


def conjugate_by_simple(w: WeylElement, j: int) -> WeylElement:
    s = _simple_perms(w.label)[j - 1]
    return WeylElement(w.label, s[w.perm[s]])


def char_matrix(w: WeylElement) -> np.ndarray:
    """Matrix of w on the root lattice in the simple-root basis (columns = w(alpha_j))."""
    rs = w.rs
    return rs.coeff_matrix[w.perm[: rs.rank]].T.copy()


def char_poly(w: WeylElement) -> Tuple[int, ...]:
    """Characteristic polynomial det(xI - w), coefficients from x^n down to x^0."""
    return _faddeev_leverrier(char_matrix(w))


def _faddeev_leverrier(a: np.ndarray) -> Tuple[int, ...]:
    n = a.shape[0]
    a = [[int(x) for x in row] for row in a.tolist()]
    coeffs = [1]
    m = [[0] * n for _ in range(n)]
    c = 1
    for k in range(1, n + 1):
        # M_k = A M_{k-1} + c_{k-1} I
        for i in range(n):
            m[i][i] += c
        am = [[sum(a[i][t] * m[t][j] for t in range(n)) for j in range(n)] for i in range(n)]
        tr = sum(am[i][i] for i in range(n))
        if tr % k:
            raise WeylError("non-integral characteristic polynomial")
        c = -tr // k
        coeffs.append(c)
        m = am
    return tuple(coeffs)


def cyclic_shift_minimize(w: WeylElement, budget: int = DEFAULT_ORBIT_BUDGET) -> WeylElement:
    return cyclic_shift_minimize_tracked(w, budget)[0]


def cyclic_shift_minimize_tracked(
    w: WeylElement, budget: int = DEFAULT_ORBIT_BUDGET
) -> Tuple[WeylElement, List[int]]:
    """Return (w', c) with w' = c w c^{-1} of minimal length in the class of w.

    c is returned as a word in simple reflections.  The search explores the
    cyclic-shift class (conjugations by simple reflections that do not
    increase length) and restarts whenever a shorter element appears.
    """
    cur, cur_conj = w, []
    visited = 0
    while True:
        seen = {cur.key: cur_conj}
        queue = deque([(cur, cur_conj)])
        found = None
        while queue and found is None:
            x, cx = queue.popleft()
            for j in range(1, x.rank + 1):
                y = conjugate_by_simple(x, j)
                visited += 1
                if visited > budget:
                    raise AmbiguousClass("cyclic-shift budget exhausted")
                if y.length < x.length:
                    found = (y, [j] + cx)
                    break
                if y.length == x.length and y.key not in seen:
                    seen[y.key] = [j] + cx
                    queue.append((y, [j] + cx))
        if found is None:
            return cur, cur_conj
        cur, cur_conj = found


def cyclic_shift_class(w: WeylElement, budget: int = DEFAULT_ORBIT_BUDGET) -> Dict[bytes, WeylElement]:
    """All elements reachable from w by length-preserving simple conjugations."""
    seen = {w.key: w}
    queue = deque([w])
    while queue:
        x = queue.popleft()
        for j in range(1, x.rank + 1):
            y = conjugate_by_simple(x, j)
            if y.length == x.length and y.key not in seen:
                seen[y.key] = y
                if len(seen) > budget:
                    raise AmbiguousClass("orbit exploration budget exhausted")
                queue.append(y)
    return seen


@dataclass(frozen=True)
class ClassLabel:
    name: str
    min_length: int
    representative_word: Tuple[int, ...]
    char_poly: Tuple[int, ...]


def validate_class_label(label: str, c: ClassLabel) -> None:
    w = word_to_element(label, c.representative_word)
    if w.length != len(c.representative_word) or w.length != c.min_length:
        raise WeylError(f"class {c.name}: representative is not reduced of length {c.min_length}")
    if char_poly(w) != c.char_poly:
        raise WeylError(f"class {c.name}: characteristic polynomial mismatch")


def data_dir() -> Path:
    import os

    env = os.environ.get("E8GOOD_DATA")
    return Path(env) if env else Path(__file__).resolve().parent / "data"


def read_records(path) -> List[Dict[str, str]]:
    """Blank-line separated blocks of 'key: value' lines; '#' starts a comment."""
    out = []
    for block in Path(path).read_text().split("\n\n"):
        rec: Dict[str, str] = {}
        for line in block.splitlines():
            line = line.split("#", 1)[0].rstrip()
            if not line.strip():
                continue
            if ":" not in line:
                raise ValueError(f"malformed record line {line!r} in {path}")
            k, v = line.split(":", 1)
            rec[k.strip()] = v.strip()
        if rec:
            out.append(rec)
    return out


def load_catalog(label: str, path: Optional[Path] = None) -> List[ClassLabel]:
    """Read a class catalog: name | min_length | word | char poly coefficients."""
    path = path or data_dir() / f"classes_{label}.dat"
    out = []
    for line in Path(path).read_text().splitlines():
        line = line.split("#", 1)[0].strip()
        if not line:
            continue
        parts = [p.strip() for p in line.split("|")]
        if len(parts) != 4:
            raise WeylError(f"malformed catalog line: {line!r}")
        name, ml, word, cp = parts
        out.append(ClassLabel(name, int(ml), tuple(int(x) for x in word.split()),
                              tuple(int(x) for x in cp.split())))
    return out


def identify_class(w: WeylElement, catalog: Sequence[ClassLabel],
                   budget: int = DEFAULT_ORBIT_BUDGET) -> ClassLabel:
    cp = char_poly(w)
    cands = [c for c in catalog if c.char_poly == cp]
    if not cands:
        raise NoClassMatch(f"no catalog class with characteristic polynomial {cp}")
    wmin = cyclic_shift_minimize(w, budget)
    if len(cands) == 1:
        # the catalog may be partial: at least the minimal length must agree
        if cands[0].min_length != wmin.length:
            raise NoClassMatch(f"minimal length {wmin.length} does not match class {cands[0].name}")
        return cands[0]
    hits = []
    for c in cands:
        if c.min_length != wmin.length:
            continue
        rep = cyclic_shift_minimize(word_to_element(w.label, c.representative_word), budget)
        hits.append((c, rep))
    if not hits:
        raise NoClassMatch("no candidate of matching minimal length")
    orbit = cyclic_shift_class(wmin, budget)
    found = [c for c, rep in hits if rep.key in orbit]
    if len(found) == 1:
        return found[0]
    raise AmbiguousClass(f"cannot separate classes {[c.name for c, _ in hits]}")


def normalize_p(p: Union[int, str]) -> str:
    s = str(p).strip()
    if s in ("2", "3", "5"):
        return s
    if s in (">=7", "7+", "≥7"):
        return ">=7"
    if s.isdigit() and int(s) >= 7:
        return ">=7"
    raise WeylError(f"unsupported characteristic {p!r}")


@dataclass
class LusztigMapTable:
    type_label: str
    entries: Dict[Tuple[str, str], str]
    catalog: List[ClassLabel]

    def image(self, weyl_class: str, p) -> str:
        key = (weyl_class, normalize_p(p))
        if key not in self.entries:
            raise WeylError(f"no Lusztig-map entry for class {weyl_class!r} at p={key[1]}")
        return self.entries[key]

    def unipotent_classes(self, p) -> List[str]:
        pp = normalize_p(p)
        return sorted({v for (k, q), v in self.entries.items() if q == pp})

    def preimages(self, unipotent: str, p) -> List[ClassLabel]:
        pp = normalize_p(p)
        names = {k for (k, q), v in self.entries.items() if q == pp and v == unipotent}
        return [c for c in self.catalog if c.name in names]

    def class_by_name(self, name: str) -> ClassLabel:
        for c in self.catalog:
            if c.name == name:
                return c
        raise WeylError(f"unknown Weyl class {name!r}")


def load_lusztig_map(label: str = "E8", path: Optional[Path] = None,
                     catalog: Optional[List[ClassLabel]] = None) -> LusztigMapTable:
    """Read the map file: weyl class | p | unipotent class."""
    path = path or data_dir() / f"lusztig_{label}.dat"
    catalog = catalog if catalog is not None else load_catalog(label)
    names = {c.name for c in catalog}
    entries: Dict[Tuple[str, str], str] = {}
    for line in Path(path).read_text().splitlines():
        line = line.split("#", 1)[0].strip()
        if not line:
            continue
        parts = [x.strip() for x in line.split("|")]
        if len(parts) != 3:
            raise WeylError(f"malformed map line: {line!r}")
        wc, p, o = parts
        if wc not in names:
            raise WeylError(f"map refers to unknown Weyl class {wc!r}")
        ps = PRIMES if p == "*" else tuple(normalize_p(x) for x in p.split(","))
        for q in ps:
            entries[(wc, q)] = o
    return LusztigMapTable(label, entries, catalog)


@lru_cache(maxsize=None)
def default_lusztig_map(label: str = "E8") -> LusztigMapTable:
    return load_lusztig_map(label)


def hooks_into(w: WeylElement, O: str, p, table: Optional[LusztigMapTable] = None) -> bool:
    table = table or default_lusztig_map(w.label)
    pre = table.preimages(O, p)
    if not pre:
        raise WeylError(f"unknown unipotent class {O!r} for p={normalize_p(p)}")
    try:
        cls = identify_class(w, table.catalog)
    except NoClassMatch:
        return False
    if table.image(cls.name, p) != O:
        return False
    if cyclic_shift_minimize(w).length != w.length:
        return False
    return w.length == min(c.min_length for c in pre)
