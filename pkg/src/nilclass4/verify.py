"""Self-checks of the classification: counts, validity, invariant tables, the
R_D laws, the A_rho transversals, congruence orbits and the isomorphism
cross-checks.  Each check reports PASS, FAIL or SKIP."""

from __future__ import annotations

import itertools
import random
import time
from concurrent.futures import ThreadPoolExecutor
from dataclasses import dataclass

from . import catalog as cat
from . import congruence as cong
from . import equiv as eq
from . import iso
from . import linalg as la
from .field import FieldSpec, aux_transversals
from .regular import (
    RegularSubgroup,
    check_closure,
    check_unipotent,
    invariants,
    is_abelian,
    to_algebra,
)

PASS, FAIL, SKIP = "PASS", "FAIL", "SKIP"


@dataclass(frozen=True)
class CheckResult:
    name: str
    status: str
    detail: str
    seconds: float = 0.0

    def as_dict(self, timing: bool = False) -> dict:
        out = {"name": self.name, "status": self.status, "detail": self.detail}
        if timing:
            out["seconds"] = round(self.seconds, 3)
        return out


def _result(name: str, ok: bool, detail: str) -> tuple:
    return name, PASS if ok else FAIL, detail


# -- individual checks ------------------------------------------------------------


def check_counts(F: FieldSpec):
    labels = cat.classify(F)
    ab = sum(l.abelian for l in labels)
    na = len(labels) - ab
    want = cat.expected_counts(F.q)
    return _result("counts", (ab, na) == want, f"abelian {ab}, nonabelian {na}, expected {want}")


def check_validity(F: FieldSpec):
    bad = []
    for label in cat.classify(F):
        R = cat.build(label, F)
        if not (check_closure(R.delta) and check_unipotent(R.delta)) or is_abelian(R) != label.abelian:
            bad.append(label.render(F))
    n = len(cat.classify(F))
    return _result("validity", not bad, f"{n - len(bad)}/{n} valid" + (f"; bad: {bad}" if bad else ""))


def invariant_table_rows(F: FieldSpec) -> list:
    """(label, expected (d, r, k)) over all admissible parameters of the rows."""
    T = aux_transversals(F)
    rows = [
        (cat.ClassLabel("U3", (0, 1, 0)), (3, 3, 3)),
        (cat.ClassLabel("U3", (0, 1, 1)), (3, 3, 2)),
        (cat.ClassLabel("U3", (1, 0, 0)), (3, 2, 2)),
    ]
    rows += [(cat.ClassLabel("U3", (1, l, 0)), (3, 3, 2)) for l in F.elements() if l not in (0, 1)]
    rhos = T.table_squares
    rows += [(cat.ClassLabel("U4", (r,) + b), (3, 3, 2)) for r in rhos for b in eq.domain(F)]
    if F.p == 2:
        rows += [(cat.ClassLabel("U5", (1, 1, e)), (3, 3, 2)) for e in F.elements()]
    return rows


def check_invariant_table(F: FieldSpec, max_q: int = 5):
    if F.q > max_q:
        return "invariant_table", SKIP, f"invariant table checked for q <= {max_q}"
    bad = []
    rows = invariant_table_rows(F)
    for label, want in rows:
        R = RegularSubgroup(cat.family_delta(F, label.family, label.params))
        full = invariants(R)
        cen = invariants(R, "center")
        if (full.d, full.r, full.k) != want or (cen.d, cen.r) != (2, 1):
            bad.append(label.render(F))
    return _result("invariant_table", not bad, f"{len(rows) - len(bad)}/{len(rows)} rows match" + (f"; bad: {bad}" if bad else ""))


def rd_law_violations(F: FieldSpec, D: la.Mat) -> list:
    R = RegularSubgroup(cat.family_delta(F, "RD", (D,)))
    t = invariants(R)
    rk = la.rank(F, D)
    zero = la.is_zero(D)
    skew = la.add(F, D, la.transpose(D)) == la.zeros(3) and all(D[i][i] == 0 for i in range(3))
    out = []
    if t.k != 4 - rk:
        out.append("k")
    if (t.r == 2) != (not zero):
        out.append("r")
    if (t.d == 2) != skew:
        out.append("d")
    return out


def check_rd_laws(F: FieldSpec, samples: int = 500, seed: int = 0, max_q: int = 5):
    if F.q > max_q:
        return "rd_laws", SKIP, f"random R_D sweep run for q <= {max_q}"
    rng = random.Random(seed)
    bad = 0
    for _ in range(samples):
        if rd_law_violations(F, la.random_matrix(F, 3, rng)):
            bad += 1
    return _result("rd_laws", bad == 0, f"{samples - bad}/{samples} random D obey the laws")


def check_a_rho(F: FieldSpec):
    T = aux_transversals(F)
    sizes = {r: len(eq.a_rho_transversal(F, r)) for r in T.table_squares}
    total = sum(sizes.values())
    want = 2 * F.q - 2 if F.p == 2 else 2 * F.q + 1
    listed = eq.explicit_a_sets(F)
    explicit_ok = all(
        sorted(eq.a_rho_rep(F, r, x) for x in listed[r]) == sorted(eq.a_rho_transversal(F, r))
        for r in T.table_squares
    )
    return _result(
        "a_rho",
        total == want and explicit_ok,
        f"class counts {sizes} total {total} (expected {want}); explicit lists are transversals: {explicit_ok}",
    )


def check_congruence(F: FieldSpec, max_q: int = 5):
    if F.q > max_q:
        return "congruence", SKIP, f"orbit partition run for q <= {max_q}"
    sym = cong.classify_congruence(F, "symmetric")
    asym = cong.classify_congruence(F, "asymmetric")
    orbits = cong.catalog_orbits(F)
    want_asym = 2 * F.q + (3 if F.p == 2 else 5)
    ok = (
        len(sym) == 5
        and len(asym) == want_asym
        and sorted(orbits["symmetric"]) == list(range(5))
        and sorted(orbits["asymmetric"]) == list(range(want_asym))
        and sum(c.orbit_size for c in sym) == F.q**6
        and sum(c.orbit_size for c in asym) == F.q**9 - F.q**6
    )
    return _result(
        "congruence",
        ok,
        f"{len(sym)} symmetric, {len(asym)} non-symmetric orbits; listed representatives hit distinct orbits",
    )


def check_pairwise(F: FieldSpec, max_q: int = 5):
    if F.q > max_q:
        return "pairwise", SKIP, f"pairwise non-isomorphism run for q <= {max_q}"
    algs = [to_algebra(cat.build_cached(l, F)) for l in cat.classify(F)]
    n = len(algs)
    if F.q == 2:
        keys = [iso.gl4_f2_orbit_key(a) for a in algs]
        ok = len(set(keys)) == n
        return _result("pairwise", ok, f"{n} entries, {len(set(keys))} distinct GL_4(F_2) orbits")
    iso_pairs = [
        (i, j) for i, j in itertools.combinations(range(n), 2) if iso.are_isomorphic(algs[i], algs[j]) is not None
    ]
    return _result("pairwise", not iso_pairs, f"{n * (n - 1) // 2} pairs, {len(iso_pairs)} isomorphic")


def u4_items(F: FieldSpec) -> list:
    return [(r, x) for r in aux_transversals(F).table_squares for x in eq.domain(F)]


def check_u4_dual(F: FieldSpec, samples: int | None = None, seed: int = 0, max_q: int = 5):
    if F.q > max_q:
        return "u4_dual", SKIP, f"U4 dual-oracle sweep run for q <= {max_q}"
    items = u4_items(F)
    pairs = list(itertools.combinations_with_replacement(items, 2))
    if samples is not None and samples < len(pairs):
        pairs = random.Random(seed).sample(pairs, samples)
    algs = {it: to_algebra(eq.u4_subgroup(F, *it)) for it in items}
    bad = 0
    for a, b in pairs:
        u = eq.u4_conjugate(F, a[0], a[1], b[0], b[1])
        w = iso.are_isomorphic(algs[a], algs[b])
        bad += u != (w is not None)
    return _result("u4_dual", bad == 0, f"{len(pairs) - bad}/{len(pairs)} pairs agree")


def check_rd_dual(F: FieldSpec, samples: int = 100, seed: int = 0, max_q: int = 3):
    if F.q > max_q:
        return "rd_dual", SKIP, f"R_D dual-oracle sweep run for q <= {max_q}"
    rng = random.Random(seed)
    bad = 0
    for _ in range(samples):
        A = la.random_matrix(F, 3, rng)
        # half the pairs are congruent by construction
        if rng.random() < 0.5:
            P = la.random_invertible(F, 3, rng)
            B = la.scale(F, rng.randrange(1, F.q), la.congruence_act(F, P, A))
        else:
            B = la.random_matrix(F, 3, rng)
        NA = to_algebra(RegularSubgroup(cat.family_delta(F, "RD", (A,))))
        NB = to_algebra(RegularSubgroup(cat.family_delta(F, "RD", (B,))))
        bad += cong.rd_conjugacy(F, A, B) != (iso.are_isomorphic(NA, NB) is not None)
    return _result("rd_dual", bad == 0, f"{samples - bad}/{samples} pairs agree")


def check_canonical(F: FieldSpec, per_entry: int = 10, seed: int = 0, max_q: int = 3):
    if F.q > max_q:
        return "canonical", SKIP, f"canonical-label stability run for q <= {max_q}"
    rng = random.Random(seed)
    bad = 0
    total = 0
    for label in cat.classify(F):
        A = to_algebra(cat.build_cached(label, F))
        for _ in range(per_entry):
            B, _ = iso.random_basis_change(A, rng)
            total += 1
            bad += iso.canonical_label(B) != label
    return _result("canonical", bad == 0, f"{total - bad}/{total} random basis changes relabelled correctly")


QUICK = ("counts", "validity", "invariant_table", "a_rho")
FULL = QUICK + ("rd_laws", "congruence", "pairwise", "u4_dual", "rd_dual", "canonical")

_CHECKS = {
    "counts": check_counts,
    "validity": check_validity,
    "invariant_table": check_invariant_table,
    "a_rho": check_a_rho,
    "rd_laws": check_rd_laws,
    "congruence": check_congruence,
    "pairwise": check_pairwise,
    "u4_dual": lambda F: check_u4_dual(F, samples=500 if F.q == 4 else None),
    "rd_dual": check_rd_dual,
    "canonical": check_canonical,
}


def _run_check(F: FieldSpec, name: str) -> CheckResult:
    t = time.perf_counter()
    try:
        _, status, detail = _CHECKS[name](F)
    except Exception as exc:  # a crashing check is a failed check
        status, detail = FAIL, f"{type(exc).__name__}: {exc}"
    return CheckResult(name, status, detail, time.perf_counter() - t)


def run_suite(F: FieldSpec, suite: str = "quick", workers: int = 4) -> list:
    """Run the checks of a suite concurrently; results keep the suite order."""
    names = {"quick": QUICK, "full": FULL}[suite]
    with ThreadPoolExecutor(max_workers=workers) as pool:
        return list(pool.map(lambda name: _run_check(F, name), names))
