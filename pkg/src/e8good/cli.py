"""Command-line interface: ``e8good <command> ...``.

Exit status is 0 on success, 1 when a verification fails and 2 on usage or
data errors.  ``--format json`` prints one JSON object per line.
"""
from __future__ import annotations

import argparse
import json
import random
import sys
import time
from pathlib import Path
from typing import Iterable, List, Optional

from . import __version__

EXIT_OK, EXIT_FAIL, EXIT_USAGE = 0, 1, 2


class _Out:
    def __init__(self, fmt: str):
        self.json = fmt == "json"

    def item(self, obj: dict, text: str) -> None:
        if self.json:
            print(json.dumps(obj, sort_keys=True))
        else:
            print(text)


def _parse_weyl_word(tokens: Iterable[str]) -> List[int]:
    out: List[int] = []
    for tok in tokens:
        for part in tok.replace(",", " ").split():
            part = part.strip("[]")
            if not part:
                continue
            if not part.isdigit():
                raise ValueError(f"bad Weyl word entry {part!r}")
            # a run of digits like 1342 is read one generator per digit
            out.extend(int(ch) for ch in part)
    return out


def _resolve_data_file(name: str) -> Path:
    from .weyl import data_dir

    p = Path(name)
    if p.exists():
        return p
    alt = data_dir() / name
    if alt.exists():
        return alt
    raise FileNotFoundError(f"no such data file: {name}")


# ---------------------------------------------------------------- commands

def cmd_roots(args, out: _Out) -> int:
    from .rootsystem import root_system

    rs = root_system(args.type)
    pos = [r for r in rs.roots if r.is_positive]
    obj = {"type": rs.type_label, "rank": rs.rank, "positive_roots": len(pos), "roots": len(rs.roots),
           "highest_root": list(rs.highest_root.coeffs)}
    text = (f"{rs.type_label}: rank {rs.rank}, {len(rs.roots)} roots ({len(pos)} positive), "
            f"highest root {''.join(map(str, rs.highest_root.coeffs))}")
    if args.list:
        obj["positive"] = [list(r.coeffs) for r in pos]
        text += "\n" + "\n".join(f"{i + 1:4d}  {''.join(map(str, r.coeffs))}  ht {r.height}"
                                 for i, r in enumerate(pos))
    out.item(obj, text)
    return EXIT_OK


def cmd_weyl(args, out: _Out) -> int:
    from .weyl import (default_lusztig_map, identify_class, load_catalog, reduced_word,
                       word_to_element, PRIMES)

    word = _parse_weyl_word(args.word)
    w = word_to_element(args.type, word)
    if args.action == "reduce":
        red = reduced_word(w)
        out.item({"word": word, "reduced": red, "length": w.length},
                 f"length {w.length}: {' '.join(map(str, red)) or '(identity)'}")
        return EXIT_OK
    cat = load_catalog(args.type)
    cls = identify_class(w, cat)
    images = {}
    if args.type == "E8":
        table = default_lusztig_map("E8")
        for p in PRIMES:
            try:
                images[p] = table.image(cls.name, p)
            except ValueError:
                pass
    text = f"class {cls.name} (minimal length {cls.min_length})"
    if images:
        text += "\n" + "\n".join(f"  p {p}: {o}" for p, o in images.items())
    out.item({"word": word, "class": cls.name, "min_length": cls.min_length, "lusztig": images}, text)
    return EXIT_OK


def cmd_lusztig(args, out: _Out) -> int:
    from .weyl import default_lusztig_map, normalize_p

    table = default_lusztig_map("E8")
    names = {c.name for c in table.catalog}
    if args.cls in names:
        o = table.image(args.cls, args.p)
        out.item({"weyl_class": args.cls, "p": normalize_p(args.p), "unipotent": o},
                 f"{args.cls} -> {o} (p {normalize_p(args.p)})")
        return EXIT_OK
    pre = table.preimages(args.cls, args.p)
    if not pre:
        raise ValueError(f"{args.cls!r} is neither a Weyl class nor a unipotent class in the map")
    m = min(c.min_length for c in pre)
    hooked = [c.name for c in pre if c.min_length == m]
    out.item({"unipotent": args.cls, "p": normalize_p(args.p), "preimages": [c.name for c in pre],
              "minimal": hooked},
             f"{args.cls} <- {', '.join(c.name for c in pre)}; minimal length {m}: {', '.join(hooked)}")
    return EXIT_OK


def cmd_hooks(args, out: _Out) -> int:
    from .weyl import hooks_into, word_to_element

    w = word_to_element("E8", _parse_weyl_word([args.word]))
    ok = hooks_into(w, args.cls, args.p)
    out.item({"word": w.reduced_word(), "class": args.cls, "p": str(args.p), "hooks": ok},
             f"{'hooks' if ok else 'does not hook'} into {args.cls}")
    return EXIT_OK if ok else EXIT_FAIL


def cmd_verify_cert(args, out: _Out) -> int:
    from .bruhat import inverse_conjugacy_check, load_certificates, load_inverse_identities, verify_certificate
    from .chevalley import format_word
    from .weyl import read_records

    path = _resolve_data_file(args.file)
    certs = load_certificates(path)
    if args.only:
        certs = [c for c in certs if c.mizuno_name == args.only]
    if args.p is not None:
        certs = [c for c in certs if c.p == args.p]
    others = [r for r in read_records(path) if r.get("kind") in ("lookup", "unproven")]
    if args.only:
        others = [r for r in others if r.get("name") == args.only]
    if args.p is not None:
        others = [r for r in others if str(args.p) == r.get("p", "2")]
    inverses = load_inverse_identities(path)
    if args.only:
        inverses = [i for i in inverses if i.name == args.only]
    if args.p is not None:
        inverses = [i for i in inverses if i.p == args.p]
    if not certs and not others and not inverses:
        raise ValueError("no certificate matches the selection")
    failed = 0
    t0 = time.time()
    for c in certs:
        rep = verify_certificate(c, twist_search=not args.no_twist)
        flags = " ".join(f"{k}={'yes' if v else 'no'}" for k, v in rep.flags().items())
        out.item(rep.as_dict(), f"{c.mizuno_name:6s} {c.class_name:14s} p={c.p} {rep.mode:11s} {flags}")
        failed += not rep.good
    for inv in inverses:
        ok, mode, tw = inverse_conjugacy_check(inv.word, inv.t, inv.v, inv.p, twist_search=not args.no_twist)
        obj = {"name": inv.name, "p": inv.p, "kind": "inverse", "holds": ok, "mode": mode}
        if tw is not None:
            obj["twist"] = format_word(tw)
        out.item(obj, f"{inv.name:6s} {'g z g^-1 = z^-1':14s} p={inv.p} {mode}")
        failed += not ok
    for r in others:
        status = "UNPROVEN" if r["kind"] == "unproven" else "LOOKUP"
        out.item({"name": r.get("name"), "class": r.get("class"), "status": status, "note": r.get("note", "")},
                 f"{r.get('name', '?'):6s} {r.get('class', '?'):14s} {status}")
    if not out.json:
        print(f"{len(certs) + len(inverses) - failed}/{len(certs) + len(inverses)} checks passed in {time.time() - t0:.1f}s")
    return EXIT_FAIL if failed else EXIT_OK


def cmd_search(args, out: _Out) -> int:
    from .chevalley import format_word, parse_word, search_good_conjugator
    from .weyl import data_dir, read_records

    rec = next((r for r in read_records(data_dir() / "certs" / "table6.dat")
                if r.get("name") == args.name and r.get("word")), None)
    if rec is None:
        raise ValueError(f"no stored word for {args.name!r}")
    z = parse_word(rec["word"], 2)
    res = search_good_conjugator(z, args.cls, 2, budget=args.budget)
    if res is None:
        out.item({"name": args.name, "class": args.cls, "found": False, "budget": args.budget},
                 f"{args.name}: no conjugator found within {args.budget} states")
        return EXIT_FAIL
    out.item({"name": args.name, "class": args.cls, "found": True, "omega": res.omega_indices,
              "target": res.target, "explored": res.explored},
             f"{args.name}: g = {format_word(res.conjugator) or '1'}\n"
             f"  target {' '.join(map(str, res.target))} after {res.explored} states")
    return EXIT_OK


def cmd_solve(args, out: _Out) -> int:
    from .signsolver import build_case_table, find_case, run_case

    rep = run_case(args.cls, args.p, args.qmod3)
    rec, bucket = find_case(args.cls, args.p)
    table = build_case_table(rec, args.cls, bucket)
    out.item(rep.as_dict(), table.format() + "\n\n" + rep.format())
    return EXIT_OK if rep.verdict in ("UNIQUE_GOOD", "ALL_GOOD", "CONDITIONAL", "NO_GOOD") else EXIT_FAIL


def cmd_solve_all(args, out: _Out) -> int:
    from .signsolver import THEOREM_EXCEPTIONS, p_bucket, solve_all

    results, exceptions = solve_all(args.p)
    bucket = p_bucket(args.p)
    for cls, rep in results:
        out.item({"class": cls, "p": bucket, "verdict": rep.verdict, "undetermined": rep.undetermined},
                 f"{cls:16s} {rep.verdict}" + (f"  NO_INFO {', '.join(rep.undetermined)}"
                                                if rep.undetermined and not rep.branches else ""))
    match = exceptions == THEOREM_EXCEPTIONS[bucket]
    out.item({"p": bucket, "exceptions": exceptions, "expected": THEOREM_EXCEPTIONS[bucket], "match": match},
             f"exceptions at p {bucket}: {', '.join(exceptions) or 'none'} "
             f"({'matches' if match else 'DIFFERS FROM'} the expected list)")
    return EXIT_OK if match else EXIT_FAIL


def cmd_ree(args, out: _Out) -> int:
    from .reeoracle import build_model, check_all

    m = build_model(args.type, args.q)
    res = check_all(m)
    bad = [r for r in res if not r[-1]]
    for ci, w, lhs, rhs, ok in res:
        if args.verbose:
            out.item({"class": ci, "w": list(w), "lhs": str(lhs), "rhs": str(rhs), "equal": ok},
                     f"  u{ci} w={w}: {lhs} = {rhs} {'ok' if ok else 'MISMATCH'}")
    out.item({"type": args.type, "q": args.q, "order": m.order, "pairs": len(res), "all_equal": not bad},
             f"{args.type} q={args.q}: |G|={m.order}, {len(res)} (u,w) pairs, "
             f"{'all equal' if not bad else f'{len(bad)} mismatches'}")
    return EXIT_FAIL if bad else EXIT_OK


def cmd_selftest(args, out: _Out) -> int:
    from .bruhat import lemma_bwb_check, normal_form, random_word, reconstruct
    from .chevalley import evaluate
    from .comptables import SUPPORTED_GROUPS, table_for, verify_orthogonality
    from .reeoracle import build_model, check_all
    from .rootsystem import jacobi_defect, reflection_permutation, root_system
    from .signsolver import run_case
    from .weyl import longest_element

    import numpy as np

    rng = random.Random(args.seed)
    checks = []

    def record(name, fn):
        t0 = time.time()
        try:
            ok = bool(fn())
            err = ""
        except Exception as exc:  # a crash is a failed check, reported with its message
            ok, err = False, f"{type(exc).__name__}: {exc}"
        checks.append(ok)
        out.item({"check": name, "ok": ok, "error": err, "seconds": round(time.time() - t0, 2)},
                 f"{'PASS' if ok else 'FAIL'}  {name}" + (f"  ({err})" if err else ""))

    rs = root_system("E8")
    record("character tables orthogonal", lambda: all(verify_orthogonality(table_for(g)) for g in SUPPORTED_GROUPS))
    record("E8 Jacobi identity", lambda: jacobi_defect(rs) == 0)
    def involutions():
        for j in range(1, 9):
            s = reflection_permutation(rs, j)
            if (s[s] != np.arange(len(rs.roots))).any():
                return False
        return True
    record("simple reflections are involutions", involutions)
    record("length of w0 is 120", lambda: longest_element("E8").length == 120)

    def cross(p):
        for _ in range(args.words):
            w = random_word(rng, p, 50)
            if reconstruct(normal_form(w)) != evaluate(w):
                return False
        return True
    for p in (2, 3, 5):
        record(f"normal form reconstruction p={p}", lambda p=p: cross(p))

    def lemma(p):
        from .weyl import reduced_word, word_to_element
        for _ in range(args.words):
            raw = [rng.randint(1, 8) for _ in range(rng.randint(1, 20))]
            red = reduced_word(word_to_element("E8", raw))
            coeffs = [rng.randint(1, p - 1) for _ in red]
            if not lemma_bwb_check(red, coeffs, p):
                return False
        return True
    for p in (2, 3, 5):
        record(f"BwB lemma p={p}", lambda p=p: lemma(p))
    for t, q in (("A1", 2), ("A1", 3), ("A1", 4), ("A1", 5), ("A2", 2)):
        record(f"Ree formula {t} q={q}", lambda t=t, q=q: all(r[-1] for r in check_all(build_model(t, q))))
    record("2A4 sign solver", lambda: run_case("2A4", 7).verdict == "UNIQUE_GOOD")
    return EXIT_OK if all(checks) else EXIT_FAIL


# ---------------------------------------------------------------- parser

def _p_arg(s: str):
    s = s.strip()
    return s if s.startswith(">=") else int(s)


def build_parser() -> argparse.ArgumentParser:
    fmt = argparse.ArgumentParser(add_help=False)
    fmt.add_argument("--format", choices=("text", "json"), default=argparse.SUPPRESS,
                     help="output format (default text)")
    ap = argparse.ArgumentParser(prog="e8good", parents=[fmt],
                                 description="Good unipotent elements in E8(q): certificates, solver, oracles.")
    ap.add_argument("--version", action="version", version=f"%(prog)s {__version__}")
    sub = ap.add_subparsers(dest="command", metavar="command")
    sub.required = True

    s = sub.add_parser("roots", parents=[fmt], help="root system summary")
    s.add_argument("type")
    s.add_argument("--list", action="store_true", help="list the positive roots")
    s.set_defaults(func=cmd_roots)

    s = sub.add_parser("weyl", parents=[fmt], help="reduce or classify a Weyl group word")
    s.add_argument("action", choices=("reduce", "classify"))
    s.add_argument("word", nargs="+", help="generators, e.g. '1 3 4 2' or 1342")
    s.add_argument("--type", default="E8")
    s.set_defaults(func=cmd_weyl)

    s = sub.add_parser("lusztig-map", parents=[fmt], help="image or preimages under the Lusztig map")
    s.add_argument("cls", metavar="class")
    s.add_argument("--p", type=_p_arg, required=True)
    s.set_defaults(func=cmd_lusztig)

    s = sub.add_parser("hooks", parents=[fmt], help="does w hook into the unipotent class O")
    s.add_argument("word")
    s.add_argument("cls", metavar="class")
    s.add_argument("--p", type=_p_arg, required=True)
    s.set_defaults(func=cmd_hooks)

    s = sub.add_parser("verify-cert", parents=[fmt], help="verify conjugation certificates")
    s.add_argument("file")
    s.add_argument("--only")
    s.add_argument("--p", type=int)
    s.add_argument("--no-twist", action="store_true", help="EXACT mode only for p != 2")
    s.set_defaults(func=cmd_verify_cert)

    s = sub.add_parser("search-good", parents=[fmt], help="search an omega-conjugator over F_2")
    s.add_argument("name", help="representative name such as z_11")
    s.add_argument("--class", dest="cls", required=True)
    s.add_argument("--budget", type=int, default=20000)
    s.set_defaults(func=cmd_search)

    s = sub.add_parser("solve", parents=[fmt], help="solve the sign problem for one class")
    s.add_argument("cls", metavar="class")
    s.add_argument("--p", type=_p_arg, required=True)
    s.add_argument("--qmod3", type=int, choices=(1, 2))
    s.set_defaults(func=cmd_solve)

    s = sub.add_parser("solve-all", parents=[fmt], help="verdict table for one characteristic")
    s.add_argument("--p", type=_p_arg, required=True)
    s.set_defaults(func=cmd_solve_all)

    s = sub.add_parser("ree-check", parents=[fmt], help="brute-force Ree formula check")
    s.add_argument("--type", choices=("A1", "A2"), required=True)
    s.add_argument("--q", type=int, required=True)
    s.add_argument("--verbose", action="store_true")
    s.set_defaults(func=cmd_ree)

    s = sub.add_parser("selftest", parents=[fmt], help="quick run of the property suites")
    s.add_argument("--words", type=int, default=20)
    s.add_argument("--seed", type=int, default=0)
    s.set_defaults(func=cmd_selftest)
    return ap


def main(argv: Optional[List[str]] = None) -> int:
    ap = build_parser()
    try:
        args = ap.parse_args(argv)
    except SystemExit as exc:
        return EXIT_OK if exc.code in (0, None) else EXIT_USAGE
    out = _Out(getattr(args, "format", "text"))
    if getattr(args, "budget", 1) <= 0:
        print("error: budget must be positive", file=sys.stderr)
        return EXIT_USAGE
    try:
        return args.func(args, out)
    except (ValueError, KeyError, FileNotFoundError) as exc:
        print(f"error: {exc}", file=sys.stderr)
        return EXIT_USAGE


if __name__ == "__main__":
    sys.exit(main())
