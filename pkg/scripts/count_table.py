#!/usr/bin/env python3
"""Class counts over F_q next to the closed forms 11 and 5q+9 / 5q+6.

    python scripts/count_table.py --qs 2 3 4 5 7 8 9 11 13 16
"""

from __future__ import annotations

import argparse
import json
import time
from dataclasses import asdict, dataclass, field

from nilclass4 import catalog as cat
from nilclass4.field import field_of_order


@dataclass
class CountConfig:
    qs: list[int] = field(default_factory=lambda: [2, 3, 4, 5, 7, 8, 9])
    max_q: int = 32


def run(cfg: CountConfig) -> list[dict]:
    rows = []
    for q in cfg.qs:
        t = time.perf_counter()
        F = field_of_order(q, cfg.max_q)
        labels = cat.classify(F)
        for label in labels:
            cat.build_cached(label, F)
        ab = sum(l.abelian for l in labels)
        want_ab, want_na = cat.expected_counts(q)
        rows.append(
            {
                "q": q,
                "abelian": ab,
                "nonabelian": len(labels) - ab,
                "expected": [want_ab, want_na],
                "match": (ab, len(labels) - ab) == (want_ab, want_na),
                "seconds": round(time.perf_counter() - t, 3),
            }
        )
    return rows


def main() -> int:
    ap = argparse.ArgumentParser(description=__doc__, formatter_class=argparse.RawDescriptionHelpFormatter)
    ap.add_argument("--qs", type=int, nargs="+", default=CountConfig().qs)
    ap.add_argument("--max-q", type=int, default=CountConfig().max_q)
    ap.add_argument("--json", action="store_true")
    args = ap.parse_args()
    cfg = CountConfig(qs=args.qs, max_q=args.max_q)
    rows = run(cfg)
    if args.json:
        print(json.dumps({"config": asdict(cfg), "rows": rows}, indent=2))
    else:
        print(f"{'q':>3} {'abelian':>8} {'nonabelian':>11} {'expected':>10} {'ok':>4} {'time':>7}")
        for r in rows:
            exp = f"{r['expected'][0]}+{r['expected'][1]}"
            print(f"{r['q']:>3} {r['abelian']:>8} {r['nonabelian']:>11} {exp:>10} {str(r['match']):>4} {r['seconds']:>6.2f}s")
    return 0 if all(r["match"] for r in rows) else 1


if __name__ == "__main__":
    raise SystemExit(main())
