#!/usr/bin/env python3
"""The U4 parameter classes A_rho: class counts, transitivity of the raw
one-step relation, and whether the explicit finite-field lists are
transversals of the computed classes.

    python scripts/a_rho_sets.py --max-q 32
"""

from __future__ import annotations

import argparse
import json
from dataclasses import asdict, dataclass

from nilclass4 import equiv as eq
from nilclass4.field import FieldError, aux_transversals, field_of_order, prime_power


@dataclass
class ARhoConfig:
    max_q: int = 32
    check_transitivity: bool = True


def prime_powers(limit: int) -> list[int]:
    out = []
    for q in range(2, limit + 1):
        try:
            prime_power(q)
        except FieldError:
            continue
        out.append(q)
    return out


def run_q(q: int, cfg: ARhoConfig) -> dict:
    F = field_of_order(q, cfg.max_q)
    listed = eq.explicit_a_sets(F)
    row = {"q": q, "rho": {}}
    for rho in aux_transversals(F).table_squares:
        reps = sorted(eq.a_rho_rep(F, rho, x) for x in listed[rho])
        row["rho"][F.fmt(rho)] = {
            "classes": len(eq.a_rho_classes(F, rho)),
            "listed": len(listed[rho]),
            "listed_is_transversal": reps == sorted(eq.a_rho_transversal(F, rho)),
            "raw_relation_transitive": eq.is_transitive(F, rho) if cfg.check_transitivity else None,
        }
    total = sum(v["classes"] for v in row["rho"].values())
    row["total"] = total
    row["expected_total"] = 2 * q - 2 if q % 2 == 0 else 2 * q + 1
    return row


def main() -> int:
    ap = argparse.ArgumentParser(description=__doc__, formatter_class=argparse.RawDescriptionHelpFormatter)
    ap.add_argument("--max-q", type=int, default=ARhoConfig().max_q)
    ap.add_argument("--no-transitivity", action="store_true")
    ap.add_argument("--json", action="store_true")
    args = ap.parse_args()
    cfg = ARhoConfig(args.max_q, not args.no_transitivity)
    rows = [run_q(q, cfg) for q in prime_powers(cfg.max_q)]
    good = all(
        r["total"] == r["expected_total"] and all(v["listed_is_transversal"] for v in r["rho"].values())
        for r in rows
    )
    if args.json:
        print(json.dumps({"config": asdict(cfg), "rows": rows}, indent=2))
    else:
        for r in rows:
            per = ", ".join(
                f"rho={k}: {v['classes']} classes, list ok={v['listed_is_transversal']}, transitive={v['raw_relation_transitive']}"
                for k, v in r["rho"].items()
            )
            print(f"q={r['q']:>2}: total {r['total']} (expected {r['expected_total']}); {per}")
    return 0 if good else 1


if __name__ == "__main__":
    raise SystemExit(main())
