#!/usr/bin/env python3
"""Pairwise non-isomorphism of the catalog algebras.

Over F_2 every entry gets its exact GL_4(F_2) orbit key; for larger q each
pair is decided by the invariant filter followed by the backtracking search.

    python scripts/pairwise_distinctness.py --qs 2 3 4 5 7
"""

from __future__ import annotations

import argparse
import itertools
import json
import time
from dataclasses import asdict, dataclass, field

from nilclass4 import catalog as cat
from nilclass4 import iso
from nilclass4.field import field_of_order
from nilclass4.regular import to_algebra


@dataclass
class PairwiseConfig:
    qs: list[int] = field(default_factory=lambda: [2, 3, 4, 5])
    max_q: int = 16
    max_search_nodes: int = 5_000_000


def run_q(q: int, cfg: PairwiseConfig) -> dict:
    t = time.perf_counter()
    F = field_of_order(q, cfg.max_q)
    labels = cat.classify(F)
    algs = [to_algebra(cat.build_cached(l, F)) for l in labels]
    pairs = list(itertools.combinations(range(len(algs)), 2))
    if q == 2:
        keys = [iso.gl4_f2_orbit_key(a) for a in algs]
        same = [(i, j) for i, j in pairs if keys[i] == keys[j]]
        method, searched = "orbit keys", 0
    else:
        config = iso.SearchConfig(cfg.max_search_nodes)
        searched = sum(iso.invariant_vector(algs[i]) == iso.invariant_vector(algs[j]) for i, j in pairs)
        same = [(i, j) for i, j in pairs if iso.are_isomorphic(algs[i], algs[j], config) is not None]
        method = "invariants + search"
    return {
        "q": q,
        "entries": len(algs),
        "pairs": len(pairs),
        "searched": searched,
        "isomorphic_pairs": [[labels[i].render(F), labels[j].render(F)] for i, j in same],
        "method": method,
        "seconds": round(time.perf_counter() - t, 2),
    }


def main() -> int:
    ap = argparse.ArgumentParser(description=__doc__, formatter_class=argparse.RawDescriptionHelpFormatter)
    ap.add_argument("--qs", type=int, nargs="+", default=PairwiseConfig().qs)
    ap.add_argument("--max-q", type=int, default=PairwiseConfig().max_q)
    ap.add_argument("--max-search-nodes", type=int, default=PairwiseConfig().max_search_nodes)
    ap.add_argument("--json", action="store_true")
    args = ap.parse_args()
    cfg = PairwiseConfig(args.qs, args.max_q, args.max_search_nodes)
    rows = [run_q(q, cfg) for q in cfg.qs]
    if args.json:
        print(json.dumps({"config": asdict(cfg), "rows": rows}, indent=2))
    else:
        for r in rows:
            verdict = "all distinct" if not r["isomorphic_pairs"] else f"ISOMORPHIC: {r['isomorphic_pairs']}"
            print(
                f"q={r['q']:>2}: {r['entries']} entries, {r['pairs']} pairs "
                f"({r['method']}, {r['searched']} searched) -> {verdict} [{r['seconds']}s]"
            )
    return 0 if all(not r["isomorphic_pairs"] for r in rows) else 1


if __name__ == "__main__":
    raise SystemExit(main())
