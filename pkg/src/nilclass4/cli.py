"""Command-line interface.

    nilclass4 catalog --q 3 [--abelian-only] [--json]
    nilclass4 build --q 3 --label "U4(1,0,0)" [--random-basis SEED]
    nilclass4 invariants ALGEBRA.json
    nilclass4 iso A.json B.json
    nilclass4 canon A.json
    nilclass4 congruence classify --q 3 --type sym|asym
    nilclass4 congruence test --q 3 --a "1,0,0;0,0,0;0,0,0" --b "..."
    nilclass4 equiv a-rho --q 5 --rho 1
    nilclass4 equiv u4 --q 5 --rho 1 --pair1 0,1 --pair2 0,4
    nilclass4 verify --q 2 --suite full

Every command accepts --json; JSON reports carry "schema": "nilclass4/1" and
are byte-identical across runs (timings appear only with --timing).
"""

from __future__ import annotations

import argparse
import json
import random
import sys

from . import catalog as cat
from . import congruence as cong
from . import equiv as eq
from . import iso
from . import linalg as la
from . import verify as ver
from .field import FieldError, FieldSpec, make_field, prime_power
from .regular import (
    InvalidSubgroup,
    algebra_from_json,
    algebra_to_json,
    invariants,
    to_algebra,
)

SCHEMA = "nilclass4/1"


class UsageError(ValueError):
    pass


# -- configuration ---------------------------------------------------------------


def load_config(path: str | None) -> dict:
    """key = value lines; '#' starts a comment.  Known keys: max_q, max_search_nodes."""
    cfg: dict = {}
    if not path:
        return cfg
    with open(path) as fh:
        for n, line in enumerate(fh, 1):
            line = line.split("#", 1)[0].strip()
            if not line:
                continue
            key, sep, value = line.partition("=")
            if not sep:
                raise UsageError(f"{path}:{n}: expected key = value")
            key = key.strip()
            if key not in ("max_q", "max_search_nodes"):
                raise UsageError(f"{path}:{n}: unknown key {key!r}")
            cfg[key] = int(value.strip())
    return cfg


def _field(args) -> FieldSpec:
    bound = args.config.get("max_q")
    if args.p is not None:
        return make_field(args.p, args.e or 1, bound)
    if args.q is None:
        raise UsageError("give --q or --p/--e")
    p, e = prime_power(args.q)
    return make_field(p, e, bound)


def _search_config(args) -> iso.SearchConfig:
    n = args.config.get("max_search_nodes")
    return iso.SearchConfig(n) if n else iso.DEFAULT_CONFIG


# -- output --------------------------------------------------------------------


def _emit(args, command: str, F: FieldSpec | None, result, lines: list[str]) -> None:
    if args.json:
        doc = {"schema": SCHEMA, "command": command}
        if F is not None:
            doc["field"] = F.to_json()
        doc["result"] = result
        print(json.dumps(doc, indent=2, sort_keys=True))
    else:
        print("\n".join(lines))


def _table(headers: list[str], rows: list[list]) -> list[str]:
    cols = [headers] + [[str(x) for x in r] for r in rows]
    widths = [max(len(r[i]) for r in cols) for i in range(len(headers))]
    fmt = lambda r: "  ".join(s.ljust(w) for s, w in zip(r, widths)).rstrip()
    return [fmt(headers), fmt(["-" * w for w in widths])] + [fmt(r) for r in cols[1:]]


def _load_algebra(path: str):
    with (sys.stdin if path == "-" else open(path)) as fh:
        return algebra_from_json(json.load(fh))


def _parse_matrix(F: FieldSpec, text: str) -> la.Mat:
    rows = [r.split(",") for r in text.split(";")]
    if len(rows) != 3 or any(len(r) != 3 for r in rows):
        raise UsageError(f"expected a 3x3 matrix 'a,b,c;d,e,f;g,h,i', got {text!r}")
    return tuple(tuple(F.parse(x) for x in r) for r in rows)


def _parse_pair(F: FieldSpec, text: str) -> tuple:
    parts = text.split(",")
    if len(parts) != 2:
        raise UsageError(f"expected a pair 'b1,b2', got {text!r}")
    pair = tuple(F.parse(x) for x in parts)
    if pair[0] == 1:
        raise UsageError("beta1 must differ from 1")
    return pair


def _mat_lines(F: FieldSpec, M) -> list[str]:
    return ["  [" + " ".join(F.fmt(x).rjust(3) for x in r) + " ]" for r in M]


# -- commands -------------------------------------------------------------------


def cmd_catalog(args) -> int:
    F = _field(args)
    labels = cat.classify(F, abelian_only=args.abelian_only, nonabelian_only=args.nonabelian_only)
    entries, rows = [], []
    for i, label in enumerate(labels):
        R = cat.build_cached(label, F)
        t = invariants(R)
        z = invariants(R, "center")
        entries.append(
            {
                "index": i,
                "label": label.render(F),
                "family": label.family,
                "params": label.params_json(F),
                "abelian": label.abelian,
                "invariants": t.as_dict(),
                "center_invariants": {"d": z.d, "r": z.r},
                "structure_constants": algebra_to_json(to_algebra(R)),
            }
        )
        rows.append([i, label.render(F), "yes" if label.abelian else "no", t.d, t.r, t.k])
    ab = sum(l.abelian for l in labels)
    lines = [f"F_{F.q}: {len(labels)} classes ({ab} abelian, {len(labels) - ab} nonabelian)", ""]
    lines += _table(["#", "label", "abelian", "d", "r", "k"], rows)
    _emit(args, "catalog", F, {"count": len(labels), "abelian": ab, "entries": entries}, lines)
    return 0


def _find_label(F: FieldSpec, text: str):
    for label in cat.classify(F):
        if label.render(F) == text.replace(" ", ""):
            return label
    raise UsageError(f"no catalog entry rendered as {text!r} over F_{F.q} (see `catalog`)")


def cmd_build(args) -> int:
    F = _field(args)
    label = _find_label(F, args.label)
    N = to_algebra(cat.build_cached(label, F))
    if args.random_basis is not None:
        N, _ = iso.random_basis_change(N, random.Random(args.random_basis))
    # this command always writes JSON: its output is meant for the other commands
    print(json.dumps(algebra_to_json(N), indent=2, sort_keys=True))
    return 0


def cmd_invariants(args) -> int:
    N = _load_algebra(args.algebra)
    F = N.field
    iv = iso.invariant_vector(N)
    d = iv.as_dict()
    lines = [f"{k}: {v}" for k, v in d.items()]
    _emit(args, "invariants", F, d, lines)
    return 0


def cmd_iso(args) -> int:
    A, B = _load_algebra(args.a), _load_algebra(args.b)
    if A.field != B.field:
        raise UsageError("the two algebras live over different fields")
    F = A.field
    g = iso.are_isomorphic(A, B, _search_config(args))
    result = {"isomorphic": g is not None, "witness": la.mat_to_json(F, g) if g else None}
    lines = ["isomorphic" if g else "not isomorphic"]
    if g:
        lines += ["witness gbar (v -> v gbar maps the first algebra onto the second):"]
        lines += _mat_lines(F, g)
    _emit(args, "iso", F, result, lines)
    return 0


def cmd_canon(args) -> int:
    N = _load_algebra(args.algebra)
    F = N.field
    label, g = iso.canonical_label_with_witness(N, _search_config(args))
    result = {
        "label": label.render(F),
        "family": label.family,
        "params": label.params_json(F),
        "abelian": label.abelian,
        "witness": la.mat_to_json(F, g),
    }
    lines = [f"label: {label.render(F)}", "witness gbar (input -> catalog algebra):"]
    lines += _mat_lines(F, g)
    _emit(args, "canon", F, result, lines)
    return 0


def cmd_congruence(args) -> int:
    F = _field(args)
    if args.action == "classify":
        classes = cong.classify_congruence(F, args.type)
        listed = cat.pi_S_list(F) if args.type.startswith("sym") else cat.pi_A_list(F)
        where = {cong.orbit_index(F, D): i for i, D in enumerate(listed)}
        entries, rows = [], []
        for i, c in enumerate(classes):
            entries.append(
                {
                    "index": i,
                    "representative": la.mat_to_json(F, c.representative),
                    "orbit_size": c.orbit_size,
                    "symmetric": c.symmetric,
                    "catalog_entry": where.get(i),
                }
            )
            rows.append([i, la.fmt_mat(F, c.representative), c.orbit_size, where.get(i, "-")])
        lines = [f"F_{F.q}: {len(classes)} classes", ""]
        lines += _table(["#", "least member", "orbit size", "catalog entry"], rows)
        _emit(args, "congruence classify", F, {"count": len(classes), "classes": entries}, lines)
        return 0
    A, B = _parse_matrix(F, args.a), _parse_matrix(F, args.b)
    w = cong.proj_congruent(F, A, B)
    result = {
        "congruent": w is not None,
        "P": la.mat_to_json(F, w[0]) if w else None,
        "lambda": F.elem_to_json(w[1]) if w else None,
    }
    lines = ["projectively congruent" if w else "not projectively congruent"]
    if w:
        lines += [f"P A P^T = lambda B with lambda = {F.fmt(w[1])} and P ="] + _mat_lines(F, w[0])
    _emit(args, "congruence test", F, result, lines)
    return 0


def cmd_equiv(args) -> int:
    F = _field(args)
    if args.action == "a-rho":
        rho = F.parse(args.rho)
        classes = eq.a_rho_classes(F, rho)
        result = {
            "rho": F.elem_to_json(rho),
            "count": len(classes),
            "transversal": [[F.elem_to_json(x) for x in c[0]] for c in classes],
            "class_sizes": [len(c) for c in classes],
        }
        rows = [[i, f"({F.fmt(c[0][0])},{F.fmt(c[0][1])})", len(c)] for i, c in enumerate(classes)]
        lines = [f"rho = {F.fmt(rho)}: {len(classes)} classes", ""]
        lines += _table(["#", "representative", "class size"], rows)
        _emit(args, "equiv a-rho", F, result, lines)
        return 0
    rho1 = F.parse(args.rho)
    rho2 = F.parse(args.rho2) if args.rho2 is not None else rho1
    x, y = _parse_pair(F, args.pair1), _parse_pair(F, args.pair2)
    same = eq.u4_conjugate(F, rho1, x, rho2, y)
    g = eq.u4_witness_search(F, rho1, x, rho2, y) if same else None
    result = {"conjugate": same, "witness": la.mat_to_json(F, g) if g else None}
    lines = ["conjugate" if same else "not conjugate"]
    if g:
        lines += ["witness gbar:"] + _mat_lines(F, g)
    _emit(args, "equiv u4", F, result, lines)
    return 0


def cmd_verify(args) -> int:
    F = _field(args)
    results = ver.run_suite(F, args.suite)
    failed = [r for r in results if r.status == ver.FAIL]
    rows = [[r.name, r.status, r.detail] + ([f"{r.seconds:.2f}s"] if args.timing else []) for r in results]
    headers = ["check", "status", "detail"] + (["time"] if args.timing else [])
    lines = [f"F_{F.q}, suite {args.suite}", ""] + _table(headers, rows)
    lines += ["", "FAILED" if failed else "OK"]
    payload = {
        "suite": args.suite,
        "passed": not failed,
        "checks": [r.as_dict(args.timing) for r in results],
    }
    _emit(args, "verify", F, payload, lines)
    return 1 if failed else 0


# -- parser -----------------------------------------------------------------------


def build_parser() -> argparse.ArgumentParser:
    common = argparse.ArgumentParser(add_help=False)
    common.add_argument("--json", action="store_true", help="machine-readable output")
    common.add_argument("--config", metavar="FILE", help="key = value file (max_q, max_search_nodes)")
    common.add_argument("--timing", action="store_true", help="include timings (breaks byte-identical output)")

    fieldopts = argparse.ArgumentParser(add_help=False)
    fieldopts.add_argument("--q", type=int, help="field order")
    fieldopts.add_argument("--p", type=int, help="field characteristic (with --e)")
    fieldopts.add_argument("--e", type=int, help="extension degree (with --p)")

    ap = argparse.ArgumentParser(prog="nilclass4", description=__doc__.split("\n\n")[0])
    sub = ap.add_subparsers(dest="command", required=True)

    p = sub.add_parser("catalog", parents=[common, fieldopts], help="list every class over F_q")
    p.add_argument("--abelian-only", action="store_true")
    p.add_argument("--nonabelian-only", action="store_true")
    p.set_defaults(func=cmd_catalog)

    p = sub.add_parser("build", parents=[common, fieldopts], help="write the algebra of a catalog entry as JSON")
    p.add_argument("--label", required=True, help='rendered label, e.g. "U4(1,0,0)"')
    p.add_argument("--random-basis", type=int, metavar="SEED", help="apply a random change of basis")
    p.set_defaults(func=cmd_build)

    p = sub.add_parser("invariants", parents=[common], help="isomorphism invariants of an algebra")
    p.add_argument("algebra", help="algebra or subgroup JSON file ('-' for stdin)")
    p.set_defaults(func=cmd_invariants)

    p = sub.add_parser("iso", parents=[common], help="decide isomorphism of two algebras")
    p.add_argument("a")
    p.add_argument("b")
    p.set_defaults(func=cmd_iso)

    p = sub.add_parser("canon", parents=[common], help="catalog label of an algebra")
    p.add_argument("algebra")
    p.set_defaults(func=cmd_canon)

    p = sub.add_parser("congruence", parents=[common, fieldopts], help="projective congruence of 3x3 matrices")
    p.add_argument("action", choices=["classify", "test"])
    p.add_argument("--type", default="sym", choices=["sym", "asym", "symmetric", "asymmetric"])
    p.add_argument("--a", help="matrix 'a,b,c;d,e,f;g,h,i' (test)")
    p.add_argument("--b", help="matrix (test)")
    p.set_defaults(func=cmd_congruence)

    p = sub.add_parser("equiv", parents=[common, fieldopts], help="U4 parameter classes")
    p.add_argument("action", choices=["a-rho", "u4"])
    p.add_argument("--rho", default="1")
    p.add_argument("--rho2", help="rho of the second subgroup (u4; default: --rho)")
    p.add_argument("--pair1", help="b1,b2 (u4)")
    p.add_argument("--pair2", help="b1,b2 (u4)")
    p.set_defaults(func=cmd_equiv)

    p = sub.add_parser("verify", parents=[common, fieldopts], help="run the self-check suite")
    p.add_argument("--suite", default="quick", choices=["quick", "full"])
    p.set_defaults(func=cmd_verify)
    return ap


def main(argv: list[str] | None = None) -> int:
    ap = build_parser()
    args = ap.parse_args(argv)
    try:
        args.config = load_config(args.config)
        if args.command == "congruence" and args.action == "test" and not (args.a and args.b):
            raise UsageError("congruence test needs --a and --b")
        if args.command == "equiv" and args.action == "u4" and not (args.pair1 and args.pair2):
            raise UsageError("equiv u4 needs --pair1 and --pair2")
        return args.func(args)
    except (UsageError, FieldError, InvalidSubgroup, cat.CatalogError, iso.SearchLimitExceeded, iso.NoCatalogMatch) as exc:
        print(f"nilclass4: error: {exc}", file=sys.stderr)
        return 2
    except (OSError, json.JSONDecodeError, KeyError) as exc:
        print(f"nilclass4: error: {exc}", file=sys.stderr)
        return 2


if __name__ == "__main__":
    sys.exit(main())
