#!/usr/bin/env python3
"""Orbit partition of 3x3 matrices under projective congruence, with the
position of each listed symmetric / non-symmetric representative.

    python scripts/congruence_orbits.py --qs 2 3 4 5
"""

from __future__ import annotations

import argparse
import json
import time
from dataclasses import asdict, dataclass, field

from nilclass4 import congruence as cong
from nilclass4 import linalg as la
from nilclass4.field import field_of_order


@dataclass
class OrbitConfig:
    qs: list[int] = field(default_factory=lambda: [2, 3, 4, 5])


def run_q(q: int) -> dict:
    t = time.perf_counter()
    F = field_of_order(q)
    out = {"q": q}
    hits = cong.catalog_orbits(F)
    for kind in ("symmetric", "asymmetric"):
        classes = cong.classify_congruence(F, kind)
        out[kind] = {
            "count": len(classes),
            "orbit_sizes": [c.orbit_size for c in classes],
            "representatives": [la.fmt_mat(F, c.representative) for c in classes],
            "catalog_hits_distinct": sorted(hits[kind]) == list(range(len(classes))),
        }
    out["seconds"] = round(time.perf_counter() - t, 2)
    return out


def main() -> int:
    ap = argparse.ArgumentParser(description=__doc__, formatter_class=argparse.RawDescriptionHelpFormatter)
    ap.add_argument("--qs", type=int, nargs="+", default=OrbitConfig().qs)
    ap.add_argument("--json", action="store_true")
    args = ap.parse_args()
    cfg = OrbitConfig(args.qs)
    rows = [run_q(q) for q in cfg.qs]
    if args.json:
        print(json.dumps({"config": asdict(cfg), "rows": rows}, indent=2))
    else:
        for r in rows:
            s, a = r["symmetric"], r["asymmetric"]
            print(
                f"q={r['q']}: {s['count']} symmetric orbits (listed hit all: {s['catalog_hits_distinct']}), "
                f"{a['count']} non-symmetric orbits (listed hit all: {a['catalog_hits_distinct']}) [{r['seconds']}s]"
            )
    ok = all(r[k]["catalog_hits_distinct"] for r in rows for k in ("symmetric", "asymmetric"))
    return 0 if ok else 1


if __name__ == "__main__":
    raise SystemExit(main())
