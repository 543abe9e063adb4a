"""Determine the unknown roots of unity in m(u, w) by non-negativity.

Each case is a table with one row per class a of the component group A.
A row is a linear form in the unknowns x_chi (one per irreducible character
chi of A) with exact cyclotomic coefficients, divided by a positive
prefactor.  Every row must be a non-negative real number; the solver
enumerates every assignment that survives and groups solutions that differ
only by moving the base point u to u_z for a central z in A.
"""
from __future__ import annotations

from dataclasses import dataclass, field
from fractions import Fraction
from math import gcd
from pathlib import Path
from typing import Dict, List, Optional, Sequence, Tuple, Union

import numpy as np

from .comptables import Cyc, FiniteGroupTable, cyclotomic_poly, table_for
from .weyl import data_dir, read_records

__all__ = [
    "SolverError", "UnknownSpec", "Axiom", "LinearForm", "MExpressionTable", "SolverReport",
    "build_regular_expressions", "load_irregular_expressions", "solve", "run_case",
    "solve_all", "centralizer_from_m", "load_registry", "CaseRecord", "p_bucket",
    "THEOREM_EXCEPTIONS", "verdict_of",
]

ENUMERATION_BOUND = 20_000_000
CONDITIONAL_LABEL = "D8(a3) (q = -1 mod 3)"

# classes without a unique good G^F-class, per characteristic bucket
THEOREM_EXCEPTIONS: Dict[str, List[str]] = {
    ">=7": [CONDITIONAL_LABEL, "E7(a1)+A1", "D6(a1)+A1"],
    "5": [CONDITIONAL_LABEL, "E7(a1)+A1", "D6(a1)+A1"],
    "3": ["E7(a1)+A1", "D6(a1)+A1"],
    "2": [CONDITIONAL_LABEL],
}


class SolverError(ValueError):
    pass


def _lcm(a: int, b: int) -> int:
    return a * b // gcd(a, b)


def p_bucket(p: Union[int, str]) -> str:
    """Map a characteristic to its registry bucket: '2', '3', '5' or '>=7'."""
    s = str(p).strip().replace(" ", "")
    if s in (">=7", "7+"):
        return ">=7"
    try:
        n = int(s)
    except ValueError:
        raise SolverError(f"bad characteristic {p!r}") from None
    if n < 2 or any(n % d == 0 for d in range(2, int(n ** 0.5) + 1)):
        raise SolverError(f"characteristic must be prime, got {n}")
    return str(n) if n <= 5 else ">=7"


# ---------------------------------------------------------------- data types

@dataclass(frozen=True)
class UnknownSpec:
    name: str
    kind: str = "sign"            # sign | root
    max_order: int = 2
    fixed_value: Optional[Cyc] = None

    def __post_init__(self):
        if self.kind not in ("sign", "root"):
            raise SolverError(f"unknown kind {self.kind!r}")
        if self.kind == "sign" and self.max_order != 2:
            object.__setattr__(self, "max_order", 2)
        if self.fixed_value is not None and not any(v == self.fixed_value for v in self.domain()):
            raise SolverError(f"fixed value of {self.name} outside its domain")

    def domain(self) -> List[Cyc]:
        return [Cyc.zeta(self.max_order, k) for k in range(self.max_order)]


@dataclass(frozen=True)
class Axiom:
    kind: str                    # fixed | equal | qmod3 | positive
    args: Tuple[str, ...] = ()
    value: Optional[Cyc] = None
    tag: str = "PAPER"

    def __str__(self) -> str:
        if self.kind == "fixed":
            return f"{self.args[0]} = {self.value}"
        if self.kind == "equal":
            return f"{self.args[0]} = {self.args[1]}"
        if self.kind == "qmod3":
            return f"{self.args[0]} = q mod 3"
        return self.kind


@dataclass
class LinearForm:
    const: Cyc
    coeffs: Dict[str, Cyc]

    def evaluate(self, assignment: Dict[str, Cyc]) -> Cyc:
        total = self.const
        for name, c in self.coeffs.items():
            total = total + c * assignment[name]
        return total

    def format(self) -> str:
        parts = []
        if self.const != 0:
            parts.append(str(self.const))
        for name, c in self.coeffs.items():
            if c == 0:
                continue
            cs = str(c)
            if cs == "1":
                parts.append(name)
            elif cs == "-1":
                parts.append("-" + name)
            elif any(ch in cs[1:] for ch in "+-"):
                parts.append(f"({cs})*{name}")
            else:
                parts.append(f"{cs}*{name}")
        if not parts:
            return "0"
        out = parts[0]
        for t in parts[1:]:
            out += " - " + t[1:] if t.startswith("-") else " + " + t
        return out


@dataclass
class MExpressionTable:
    case_name: str
    group: FiniteGroupTable
    prefactor: str
    rows: List[Tuple[str, LinearForm]]
    unknowns: List[UnknownSpec]
    char_of: Dict[str, str]              # unknown name -> character name
    axioms: List[Axiom] = field(default_factory=list)
    pattern: str = "regular"

    def unknown(self, name: str) -> UnknownSpec:
        for u in self.unknowns:
            if u.name == name:
                return u
        raise SolverError(f"unknown {name!r} not declared in {self.case_name}")

    def check(self) -> None:
        names = {u.name for u in self.unknowns}
        if len(self.rows) != len(self.group.classes):
            raise SolverError("row count differs from the number of classes")
        for _, form in self.rows:
            missing = set(form.coeffs) - names
            if missing:
                raise SolverError(f"undeclared unknowns {sorted(missing)}")

    def format(self) -> str:
        w = max(len(a) for a, _ in self.rows)
        head = f"a{' ' * (w - 1)}  m((u)_a, w) / {self.prefactor}"
        return "\n".join([head] + [f"{a.ljust(w)}  {form.format()}" for a, form in self.rows])


@dataclass
class SolverReport:
    case_name: str
    solutions: List[Dict[str, Cyc]]
    row_values: List[Dict[str, Fraction]]
    good_rows: List[List[str]]           # rows with strictly positive value
    good_classes: List[List[str]]        # positive rows at central classes
    orbits: List[List[int]]              # solution indices grouped by base-point translation
    canonical: List[int]                 # one representative per orbit (identity row positive)
    undetermined: List[str]
    unresolved: int = 0
    unresolved_assignments: List[Dict[str, Cyc]] = field(default_factory=list)
    silent: List[str] = field(default_factory=list)   # unknowns absent from every row
    prefactor: str = ""
    verdict: str = ""
    branches: Dict[int, "SolverReport"] = field(default_factory=dict)
    propagation: List[str] = field(default_factory=list)

    @property
    def unique(self) -> bool:
        return len(self.orbits) == 1

    @property
    def positive_row_values(self) -> List[Dict[str, Fraction]]:
        return [{a: v for a, v in vals.items() if v > 0} for vals in self.row_values]

    def base_solution(self) -> Optional[Dict[str, Cyc]]:
        return self.solutions[self.canonical[0]] if self.canonical else None

    def as_dict(self) -> dict:
        d = {
            "case": self.case_name,
            "verdict": self.verdict,
            "prefactor": self.prefactor,
            "unique": self.unique,
            "solutions": [{k: str(v) for k, v in s.items()} for s in self.solutions],
            "row_values": [{k: str(v) for k, v in r.items()} for r in self.row_values],
            "good_rows": self.good_rows,
            "good_classes": self.good_classes,
            "orbits": self.orbits,
            "canonical": self.canonical,
            "undetermined": self.undetermined,
            "unresolved": self.unresolved,
        }
        if self.branches:
            d["branches"] = {str(k): b.as_dict() for k, b in self.branches.items()}
        return d

    def format(self) -> str:
        lines = [f"case {self.case_name}: {self.verdict}"]
        if self.branches:
            for k, b in sorted(self.branches.items()):
                lines.append(f"  q = {k} mod 3: {b.verdict}")
                lines.extend("  " + ln for ln in b._body())
        else:
            lines.extend(self._body())
        return "\n".join(lines)

    def _body(self) -> List[str]:
        out = [f"  {len(self.solutions)} solution(s) in {len(self.orbits)} base-point orbit(s)"]
        for i in self.canonical:
            sol = self.solutions[i]
            out.append("  base point: " + ", ".join(f"{k}={v}" for k, v in sol.items()))
            pos = ", ".join(f"{a}: {v}*{self.prefactor}" for a, v in self.row_values[i].items() if v > 0)
            out.append(f"    positive rows: {pos or 'none'}")
        for name in self.undetermined:
            out.append(f"  NO_INFO {name}")
        if self.unresolved:
            out.append(f"  {self.unresolved} assignment(s) UNRESOLVED (real irrational rows)")
        return out


# ---------------------------------------------------------------- table builders

def build_regular_expressions(group: FiniteGroupTable, unknown_map: Dict[str, UnknownSpec],
                              case_name: str = "", prefactor: str = "f_w(q)",
                              axioms: Sequence[Axiom] = ()) -> MExpressionTable:
    """entry(a) = sum over chi of chi(1) * chi(a) * x_chi."""
    if set(unknown_map) != set(group.char_names):
        raise SolverError("need exactly one unknown per irreducible character")
    rows = []
    for j, cls in enumerate(group.class_names):
        coeffs = {}
        for name, deg, vals in group.characters:
            coeffs[unknown_map[name].name] = vals[j] * deg
        rows.append((cls, LinearForm(Cyc.rational(0), coeffs)))
    t = MExpressionTable(case_name or group.group_label, group, prefactor, rows,
                         [unknown_map[c] for c in group.char_names],
                         {unknown_map[c].name: c for c in group.char_names}, list(axioms), "regular")
    t.check()
    return t


def _parse_terms(spec: str) -> List[Tuple[Fraction, str, str]]:
    terms = []
    for part in spec.split(";"):
        part = part.strip()
        if not part:
            continue
        try:
            w, rest = part.split("*", 1)
            name, char = rest.rsplit("@", 1)
        except ValueError:
            raise SolverError(f"malformed term {part!r}") from None
        terms.append((Fraction(w.strip()), name.strip(), char.strip()))
    return terms


def _irregular_records(path: Optional[Path] = None) -> Dict[str, dict]:
    path = Path(path) if path else data_dir() / "irregular_E8.dat"
    return {r["case"]: r for r in read_records(path) if "case" in r}


def load_irregular_expressions(case_name: str, unknowns: Sequence[UnknownSpec] = (),
                               axioms: Sequence[Axiom] = (), path: Optional[Path] = None) -> MExpressionTable:
    """Entries from the irregular-case file; case_name is 'CLASS @ P'."""
    recs = _irregular_records(path)
    key = case_name
    if key not in recs:
        cls, _, p = case_name.partition("@")
        key = f"{cls.strip()} @ {p_bucket(p)}" if p.strip() else key
    if key not in recs:
        raise SolverError(f"no irregular expressions for {case_name!r}")
    rec = recs[key]
    group = table_for(rec["group"])
    terms = _parse_terms(rec["terms"])
    declared = {u.name: u for u in unknowns}
    char_of: Dict[str, str] = {}
    for _, name, char in terms:
        if char not in group.char_names:
            raise SolverError(f"unknown character {char!r} for {group.group_label}")
        if name != "1":
            char_of[name] = char
            declared.setdefault(name, UnknownSpec(name, "sign"))
    rows = []
    for j, cls in enumerate(group.class_names):
        const = Cyc.rational(0)
        coeffs: Dict[str, Cyc] = {}
        for w, name, char in terms:
            v = group.value(char, cls) * w
            if name == "1":
                const = const + v
            else:
                coeffs[name] = coeffs.get(name, Cyc.rational(0)) + v
        rows.append((cls, LinearForm(const, coeffs)))
    t = MExpressionTable(key, group, rec.get("prefactor", "f_w(q)"), rows, list(declared.values()),
                         char_of, list(axioms), "irregular")
    t.check()
    return t


# ---------------------------------------------------------------- solving

class _Field:
    """Integer coordinates for Q(zeta_M) used by the vectorised search."""

    def __init__(self, M: int):
        self.M = M
        self.phi = len(cyclotomic_poly(M)) - 1
        conj = np.zeros((self.phi, self.phi), dtype=np.int64)
        for i in range(self.phi):
            v = Cyc.zeta(M, -i)
            for j, x in enumerate(v.c):
                if x.denominator != 1:
                    raise SolverError("non-integral conjugation matrix")
                conj[j, i] = int(x)
        self.conj_minus_id = conj - np.eye(self.phi, dtype=np.int64)

    def coords(self, x: Cyc) -> List[Fraction]:
        return list(x.lift(self.M).c)


def _is_real_multiple(c: Cyc, M: int, k: int) -> bool:
    return (c * Cyc.zeta(M, k)).is_real()


def _domains(table: MExpressionTable, axioms: Sequence[Axiom], M: int) -> Dict[str, List[int]]:
    dom = {}
    for u in table.unknowns:
        step = M // u.max_order
        ks = [step * j for j in range(u.max_order)]
        if u.fixed_value is not None:
            ks = [k for k in ks if Cyc.zeta(M, k) == u.fixed_value]
        dom[u.name] = ks
    for ax in axioms:
        if ax.kind == "fixed":
            name = ax.args[0]
            table.unknown(name)
            ks = [k for k in dom[name] if Cyc.zeta(M, k) == ax.value]
            if not ks:
                raise SolverError(f"axiom {ax} leaves {name} with an empty domain")
            dom[name] = ks
        elif ax.kind == "equal":
            a, b = ax.args
            table.unknown(a), table.unknown(b)
            common = sorted(set(dom[a]) & set(dom[b]))
            dom[a], dom[b] = list(common), list(common)
        elif ax.kind == "qmod3":
            raise SolverError("congruence axiom must be resolved before solving (use run_case)")
        elif ax.kind != "positive":
            raise SolverError(f"unknown axiom kind {ax.kind!r}")
    return dom


def _propagate(table: MExpressionTable, dom: Dict[str, List[int]], M: int) -> List[str]:
    """Reality forcing: a lone possibly-complex term in an otherwise real row must be real."""
    log = []
    changed = True
    while changed:
        changed = False
        for cls, form in table.rows:
            if not form.const.is_real():
                continue
            loose = []
            for name, c in form.coeffs.items():
                if c == 0:
                    continue
                if not all(_is_real_multiple(c, M, k) for k in dom[name]):
                    loose.append((name, c))
            if len(loose) != 1:
                continue
            name, c = loose[0]
            keep = [k for k in dom[name] if _is_real_multiple(c, M, k)]
            if keep != dom[name]:
                log.append(f"row {cls}: {name} restricted to {[str(Cyc.zeta(M, k)) for k in keep]}")
                dom[name] = keep
                changed = True
    return log


def _enumerate(table: MExpressionTable, dom: Dict[str, List[int]], fld: _Field,
               equal_pairs: List[Tuple[str, str]], need_positive: bool, bound: int):
    names = [n for n in (u.name for u in table.unknowns) if n in dom]
    sizes = [len(dom[n]) for n in names]
    total = 1
    for s in sizes:
        total *= s
    if total == 0:
        return [], []
    if total > bound:
        raise SolverError(f"domain too large: {total} assignments exceeds bound {bound}")
    R, phi, M = len(table.rows), fld.phi, fld.M
    # common denominator for every coordinate that can appear
    den = 1
    contrib_q = []
    for n in names:
        per_val = []
        for k in dom[n]:
            z = Cyc.zeta(M, k)
            rows = [fld.coords(form.coeffs.get(n, Cyc.rational(0)) * z) for _, form in table.rows]
            for r in rows:
                for x in r:
                    den = _lcm(den, x.denominator)
            per_val.append(rows)
        contrib_q.append(per_val)
    const_q = [fld.coords(form.const) for _, form in table.rows]
    for r in const_q:
        for x in r:
            den = _lcm(den, x.denominator)
    contrib = [np.array([[[int(x * den) for x in r] for r in rows] for rows in per_val], dtype=np.int64)
               for per_val in contrib_q]
    const = np.array([[int(x * den) for x in r] for r in const_q], dtype=np.int64)
    idx_of = {n: i for i, n in enumerate(names)}

    found: List[Dict[str, Cyc]] = []
    unresolved: List[Dict[str, Cyc]] = []
    chunk = max(1, 4_000_000 // max(1, R * phi))
    for start in range(0, total, chunk):
        flat = np.arange(start, min(total, start + chunk), dtype=np.int64)
        digits = []
        rem = flat
        for s in reversed(sizes):
            digits.append(rem % s)
            rem = rem // s
        digits.reverse()
        S = np.broadcast_to(const, (len(flat), R, phi)).copy()
        for i, d in enumerate(digits):
            S += contrib[i][d]
        ok = np.ones(len(flat), dtype=bool)
        for a, b in equal_pairs:
            ia, ib = idx_of[a], idx_of[b]
            va = np.asarray(dom[a])[digits[ia]]
            vb = np.asarray(dom[b])[digits[ib]]
            ok &= va == vb
        real = ~np.any(S @ fld.conj_minus_id.T, axis=2)           # (n, R)
        ok &= real.all(axis=1)
        rational = ~np.any(S[:, :, 1:], axis=2)
        ok &= ~np.any(rational & (S[:, :, 0] < 0), axis=1)
        all_rat = rational.all(axis=1)
        for j in np.nonzero(ok & ~all_rat)[0]:
            unresolved.append({n: Cyc.zeta(M, dom[n][int(digits[i][j])]).reduced() for i, n in enumerate(names)})
        ok &= all_rat
        if need_positive:
            ok &= np.any(S[:, :, 0] > 0, axis=1)
        for j in np.nonzero(ok)[0]:
            found.append({n: Cyc.zeta(M, dom[n][int(digits[i][j])]).reduced() for i, n in enumerate(names)})
    return found, unresolved


def _translate(table: MExpressionTable, sol: Dict[str, Cyc], z: str) -> Dict[str, Cyc]:
    g = table.group
    out = {}
    for name, v in sol.items():
        ch = table.char_of.get(name)
        if ch is None:
            out[name] = v
        else:
            out[name] = (v * g.value(ch, z) * Fraction(1, g.degree(ch))).reduced()
    return out


def _same(a: Dict[str, Cyc], b: Dict[str, Cyc]) -> bool:
    return all(a[k] == b[k] for k in a)


def _row_values(table: MExpressionTable, sol: Dict[str, Cyc]) -> Dict[str, Fraction]:
    out = {}
    for cls, form in table.rows:
        v = form.evaluate(sol)
        if not v.is_rational():
            raise SolverError(f"re-substitution: row {cls} is not rational")
        out[cls] = v.to_fraction()
    return out


def solve(table: MExpressionTable, axioms: Optional[Sequence[Axiom]] = None,
          bound: int = ENUMERATION_BOUND) -> SolverReport:
    """All assignments with every row real and non-negative, plus the axioms."""
    axioms = list(table.axioms if axioms is None else axioms)
    M = 2
    for u in table.unknowns:
        M = _lcm(M, u.max_order)
    for _, form in table.rows:
        for c in [form.const, *form.coeffs.values()]:
            M = _lcm(M, c.reduced().N)
    fld = _Field(M)
    dom = _domains(table, axioms, M)
    # an unknown that no row mentions cannot be pinned; keep it out of the search
    mentioned = {n for _, f in table.rows for n, c in f.coeffs.items() if c != 0}
    silent = [u.name for u in table.unknowns if u.name not in mentioned and len(dom[u.name]) > 1]
    for n in silent:
        del dom[n]
    log = _propagate(table, dom, M)
    equal_pairs = [tuple(a.args) for a in axioms if a.kind == "equal"]
    need_positive = any(a.kind == "positive" for a in axioms)
    equal_pairs = [(a, b) for a, b in equal_pairs if a in dom and b in dom]
    sols, unresolved = _enumerate(table, dom, fld, equal_pairs, need_positive, bound)

    # independent re-check with exact arithmetic
    rows = []
    for s in sols:
        vals = _row_values(table, s)
        if any(v < 0 for v in vals.values()) or (need_positive and not any(v > 0 for v in vals.values())):
            raise SolverError("re-substitution failed")
        for a in axioms:
            if a.kind == "fixed" and a.args[0] in s and s[a.args[0]] != a.value:
                raise SolverError("re-substitution failed on a fixed axiom")
            if a.kind == "equal" and a.args[0] in s and s[a.args[0]] != s[a.args[1]]:
                raise SolverError("re-substitution failed on an equality axiom")
        rows.append(vals)

    g = table.group
    central = g.central_classes()
    ident = g.class_names[0]
    good_rows = [[a for a, v in r.items() if v > 0] for r in rows]
    good_classes = [[a for a in gr if a in central] for gr in good_rows]

    # orbits under translation by central classes
    parent = list(range(len(sols)))

    def find(i):
        while parent[i] != i:
            parent[i] = parent[parent[i]]
            i = parent[i]
        return i

    for i, s in enumerate(sols):
        for z in central:
            t = _translate(table, s, z)
            for j in range(len(sols)):
                if j != i and _same(t, sols[j]):
                    parent[find(j)] = find(i)
    groups: Dict[int, List[int]] = {}
    for i in range(len(sols)):
        groups.setdefault(find(i), []).append(i)
    orbits = sorted(groups.values())
    canonical = []
    for orb in orbits:
        pos = [i for i in orb if rows[i][ident] > 0]
        canonical.append(pos[0] if pos else orb[0])

    normal = [i for i in range(len(sols)) if rows[i][ident] > 0] or list(range(len(sols)))
    undetermined = []
    for u in table.unknowns:
        if u.name in silent:
            undetermined.append(u.name)
            continue
        vals = []
        for i in normal:
            if not any(v == sols[i][u.name] for v in vals):
                vals.append(sols[i][u.name])
        if len(vals) > 1:
            undetermined.append(u.name)

    rep = SolverReport(table.case_name, sols, rows, good_rows, good_classes, orbits, canonical,
                       undetermined, len(unresolved), unresolved, silent, table.prefactor, propagation=log)
    rep.verdict = verdict_of(rep, g)
    return rep


def verdict_of(rep: SolverReport, group: FiniteGroupTable) -> str:
    if not rep.solutions:
        return "UNSATISFIABLE"
    central = group.central_classes()
    if any(not gc for gc in rep.good_classes):
        return "NO_GOOD"
    if len(central) > 1 and all(len(gc) == len(central) for gc in rep.good_classes):
        return "ALL_GOOD"
    if rep.unique and all(len(gc) == 1 for gc in rep.good_classes):
        return "UNIQUE_GOOD"
    return "AMBIGUOUS"


def centralizer_from_m(m_value, bruhat_count, borel_order) -> Fraction:
    """|C(u)| from m(u,w) = |BwB n O_u| * |C(u)| / |B|."""
    if bruhat_count == 0:
        raise SolverError("Bruhat cell count must be non-zero")
    return Fraction(m_value) * Fraction(borel_order) / Fraction(bruhat_count)


# ---------------------------------------------------------------- registry

@dataclass
class CaseRecord:
    classes: List[str]
    buckets: List[str]
    group: str
    pattern: str
    prefactor: str
    unknowns: List[Tuple[str, UnknownSpec]]      # (character, spec)
    axioms: List[Axiom]
    expected: str
    values: Dict[str, Cyc]
    tag: str


def _parse_value(s: str) -> Cyc:
    s = s.strip()
    if s.startswith("z"):
        base, _, k = s[1:].partition("^")
        return Cyc.zeta(int(base), int(k or 1))
    return Cyc.rational(Fraction(s))


def _parse_unknowns(spec: str) -> List[Tuple[str, UnknownSpec]]:
    out = []
    for part in spec.split(";"):
        part = part.strip()
        if not part:
            continue
        char, _, rest = part.partition("=")
        bits = rest.split(":")
        name, kind = bits[0].strip(), (bits[1].strip() if len(bits) > 1 else "sign")
        order = int(bits[2]) if len(bits) > 2 else (24 if kind == "root" else 2)
        out.append((char.strip(), UnknownSpec(name, kind, order)))
    return out


def _parse_axioms(spec: str, tag: str) -> List[Axiom]:
    out = []
    for part in spec.split(";"):
        bits = part.split()
        if not bits:
            continue
        kind = bits[0]
        if kind == "fixed":
            out.append(Axiom("fixed", (bits[1],), _parse_value(bits[2]), tag))
        elif kind == "equal":
            out.append(Axiom("equal", (bits[1], bits[2]), None, tag))
        elif kind == "qmod3":
            out.append(Axiom("qmod3", (bits[1],), None, tag))
        elif kind == "positive":
            out.append(Axiom("positive", (), None, tag))
        else:
            raise SolverError(f"unknown axiom {part!r}")
    return out


def load_registry(path: Optional[Path] = None) -> List[CaseRecord]:
    path = Path(path) if path else data_dir() / "cases_E8.dat"
    out = []
    for rec in read_records(path):
        tag = rec.get("tag", "PAPER")
        values = {}
        for item in rec.get("values", "").split():
            k, _, v = item.partition("=")
            values[k] = _parse_value(v)
        out.append(CaseRecord(
            classes=[c.strip() for c in rec["classes"].split(";") if c.strip()],
            buckets=[p_bucket(b) for b in rec["p"].split()],
            group=rec["group"],
            pattern=rec.get("pattern", "regular"),
            prefactor=rec.get("prefactor", "f_w(q)"),
            unknowns=_parse_unknowns(rec["unknowns"]),
            axioms=_parse_axioms(rec.get("axioms", ""), tag),
            expected=rec.get("expected", "UNIQUE_GOOD"),
            values=values,
            tag=tag,
        ))
    return out


def find_case(unipotent_class: str, p) -> Tuple[CaseRecord, str]:
    bucket = p_bucket(p)
    for rec in load_registry():
        if bucket in rec.buckets and unipotent_class in rec.classes:
            return rec, bucket
    raise SolverError(f"no registry case for class {unipotent_class!r} at p bucket {bucket}")


def build_case_table(rec: CaseRecord, unipotent_class: str, bucket: str) -> MExpressionTable:
    name = f"{unipotent_class} @ {bucket}"
    specs = [u for _, u in rec.unknowns]
    if rec.pattern == "regular":
        return build_regular_expressions(table_for(rec.group), {c: u for c, u in rec.unknowns},
                                         name, rec.prefactor, rec.axioms)
    t = load_irregular_expressions(name, specs, rec.axioms)
    t.case_name = name
    t.char_of = {**{u.name: c for c, u in rec.unknowns}, **t.char_of}
    return t


def run_case(unipotent_class: str, p, qmod3: Optional[int] = None) -> SolverReport:
    """Solve a registry case; congruence axioms split on q mod 3 unless qmod3 is given."""
    rec, bucket = find_case(unipotent_class, p)
    table = build_case_table(rec, unipotent_class, bucket)
    cong = [a for a in table.axioms if a.kind == "qmod3"]
    if not cong:
        return solve(table)
    rest = [a for a in table.axioms if a.kind != "qmod3"]
    branches = {}
    for r in ([qmod3] if qmod3 else [1, 2]):
        if r not in (1, 2):
            raise SolverError("q mod 3 must be 1 or 2 (q is prime to 3 here)")
        val = Cyc.rational(1 if r == 1 else -1)
        axs = rest + [Axiom("fixed", a.args, val, a.tag) for a in cong]
        b = solve(table, axs)
        b.case_name = f"{table.case_name} (q = {r} mod 3)"
        branches[r] = b
    if qmod3:
        return branches[qmod3]
    top = SolverReport(table.case_name, [], [], [], [], [], [], [], prefactor=table.prefactor, branches=branches)
    v1, v2 = branches[1].verdict, branches[2].verdict
    top.verdict = "CONDITIONAL" if (v1 == "UNIQUE_GOOD" and v2 == "NO_GOOD") else f"SPLIT({v1},{v2})"
    return top


def solve_all(p) -> Tuple[List[Tuple[str, SolverReport]], List[str]]:
    """Solve every registry case at p; return reports and the exception list."""
    bucket = p_bucket(p)
    results = []
    for rec in load_registry():
        if bucket not in rec.buckets:
            continue
        for cls in rec.classes:
            results.append((cls, run_case(cls, bucket)))
    exceptions = []
    for cls, rep in results:
        if rep.verdict == "UNIQUE_GOOD":
            continue
        exceptions.append(CONDITIONAL_LABEL if rep.verdict == "CONDITIONAL" else cls)
    order = THEOREM_EXCEPTIONS.get(bucket, [])
    exceptions.sort(key=lambda e: (order.index(e) if e in order else len(order), e))
    return results, exceptions
