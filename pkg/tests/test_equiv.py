"""The U4 pair relation, its transversals and the U4 conjugacy predicate."""

from __future__ import annotations

import itertools
import random

import pytest

from nilclass4 import equiv as eq
from nilclass4 import linalg as la
from nilclass4.field import aux_transversals, field_of_order, make_field
from nilclass4.iso import are_isomorphic
from nilclass4.regular import conjugate, to_algebra

QS = [2, 3, 4, 5, 7, 8, 9]


def _related_mod_p(p: int, rho: int, x):
    """One-step related pairs over a prime field, straight from the formulas."""
    b1, b2 = x
    out = {(b1, b2), (b1, -b2 % p)}
    for t in range(p):
        g1 = (t * t + b2 * t - rho * b1) % p
        g2 = (t * t + rho) % p
        if g1 == 0 or g2 == 0:
            continue
        f1 = (b1 * t * t + b2 * t - rho) % p
        f2 = (b2 * t * t - 2 * rho * (b1 + 1) * t - rho * b2) % p
        ginv = pow(g1, p - 2, p)
        out.add((f1 * ginv % p, f2 * ginv % p))
        out.add((f1 * ginv % p, -f2 * ginv % p))
    return out


@pytest.mark.parametrize("p,rho", [(3, 1), (3, 2), (5, 1), (5, 2), (7, 1), (7, 6)])
def test_relation_table_prime_fields(p, rho):
    F = make_field(p)
    for x in eq.domain(F):
        assert eq.related(F, rho, x) == _related_mod_p(p, rho, x)


def test_divide_step_examples(F5):
    rng = random.Random(0)
    for _ in range(20):
        x = rng.choice(eq.domain(F5))
        assert eq.divide_step(F5, 1, x, x)
        assert eq.divide_step(F5, 1, x, (x[0], F5.neg[x[1]]))


@pytest.mark.parametrize("q", [3, 4, 5, 9])
def test_conj_polys_identity(q):
    F = field_of_order(q)
    for rho in aux_transversals(F).table_squares:
        for x in eq.domain(F):
            assert eq.ConjPolys.of(F, rho, x).identity_holds(F, x[0])


@pytest.mark.parametrize("q", QS)
def test_cardinalities(q):
    F = field_of_order(q)
    T = aux_transversals(F)
    sizes = [len(eq.a_rho_transversal(F, rho)) for rho in T.table_squares]
    if q % 2 == 0:
        assert sizes == [2 * q - 2]
    else:
        assert sum(sizes) == 2 * q + 1


def test_cardinality_examples():
    assert len(eq.a_rho_transversal(make_field(2, 2), 1)) == 6
    F5 = make_field(5)
    assert sum(len(eq.a_rho_transversal(F5, r)) for r in aux_transversals(F5).table_squares) == 11
    F3 = make_field(3)
    assert len(eq.a_rho_transversal(F3, 1)) + len(eq.a_rho_transversal(F3, 2)) == 7


@pytest.mark.parametrize("q", QS)
def test_classes_partition_domain(q):
    F = field_of_order(q)
    dom = set(eq.domain(F))
    for rho in aux_transversals(F).table_squares:
        classes = eq.a_rho_classes(F, rho)
        flat = [x for c in classes for x in c]
        assert len(flat) == len(dom) and set(flat) == dom
        # the least pair of each class is its representative
        assert eq.a_rho_transversal(F, rho) == [min(c) for c in classes]
        for c in classes:
            for x in c:
                assert eq.a_rho_rep(F, rho, x) == c[0]


@pytest.mark.parametrize("q", [3, 4, 5, 7, 8, 9, 11, 13, 16])
def test_explicit_sets_are_transversals(q):
    F = field_of_order(q)
    listed = eq.explicit_a_sets(F)
    for rho in aux_transversals(F).table_squares:
        reps = sorted(eq.a_rho_rep(F, rho, x) for x in listed[rho])
        assert reps == sorted(eq.a_rho_transversal(F, rho))


@pytest.mark.parametrize("q", [2, 3, 4, 5])
def test_isolated_and_sign_classes(q):
    F = field_of_order(q)
    m1 = F.neg[1]
    for rho in aux_transversals(F).table_squares:
        for x in eq.domain(F):
            # (-1, 0) is alone in its class; in characteristic 2 it is outside the domain
            if F.p != 2:
                assert eq.u4_conjugate(F, rho, (m1, 0), rho, x) == (x == (m1, 0))
            assert eq.u4_conjugate(F, rho, x, rho, (x[0], F.neg[x[1]]))
    if q == 5:
        for lam in F.elements():
            if lam not in (0, 1):
                assert eq.u4_conjugate(F, 1, (lam, 0), 1, (F.inv[lam], 0))


def test_different_rho_never_conjugate(F3):
    assert not eq.u4_conjugate(F3, 1, (0, 0), 2, (0, 0))


@pytest.mark.parametrize("q", QS)
def test_raw_relation_transitive(q):
    # observed: the one-step relation is already an equivalence
    F = field_of_order(q)
    for rho in aux_transversals(F).table_squares:
        assert eq.is_transitive(F, rho)


def test_witness_examples(F5):
    x = (2, 3)
    g = eq.u4_witness_search(F5, 1, x, 1, x)
    assert g is not None
    assert eq.u4_system(F5, 1, x, 1, x, (1, 0, 0, 1))
    assert la.block_diag(la.identity(2), la.identity(2)) == eq.u4_block_matrix(F5, 1, x, (1, 0, 0, 1))
    y = (2, F5.neg[3])
    m1 = F5.neg[1]
    D = ((1, 0, 0, 0), (0, m1, 0, 0), (0, 0, 1, 0), (0, 0, 0, m1))
    assert conjugate(eq.u4_subgroup(F5, 1, x), D) == eq.u4_subgroup(F5, 1, y)
    g = eq.u4_witness_search(F5, 1, x, 1, y)
    assert g is not None and conjugate(eq.u4_subgroup(F5, 1, x), g) == eq.u4_subgroup(F5, 1, y)


@pytest.mark.parametrize("q", [2, 3])
def test_witness_search_matches_predicate(q):
    F = field_of_order(q)
    items = [(r, x) for r in aux_transversals(F).table_squares for x in eq.domain(F)]
    for (r1, x), (r2, y) in itertools.combinations(items, 2):
        g = eq.u4_witness_search(F, r1, x, r2, y)
        assert (g is not None) == eq.u4_conjugate(F, r1, x, r2, y)
        if g is not None:
            assert conjugate(eq.u4_subgroup(F, r1, x), g) == eq.u4_subgroup(F, r2, y)


@pytest.mark.parametrize("q", [3, 4, 5, 7, 8, 9])
def test_hints_land_in_the_class(q):
    F = field_of_order(q)
    T = aux_transversals(F)
    m1, two = F.neg[1], F.from_int(2)
    fired = 0
    for rho in T.table_squares:
        for x in eq.domain(F):
            hints = [
                (eq.hint_f1(F, rho, x), lambda y: y[0] == 0),
                (eq.hint_f2(F, rho, x), lambda y: y[1] == 0),
                (eq.hint_ii(F, rho, x), lambda y: True),
            ]
            if rho == 1:
                hints.append((eq.hint_q3(F, x), lambda y: True))
            if rho == m1:
                hints.append((eq.hint_q1(F, x), lambda y: y in ((m1, 0), (0, 0)) or y[1] == two))
            for y, shape in hints:
                if y is None:
                    continue
                fired += 1
                assert shape(y)
                assert eq.u4_conjugate(F, rho, x, rho, y)
    assert fired > 0


@pytest.mark.parametrize("q", [2, 3])
def test_predicate_agrees_with_isomorphism(q):
    F = field_of_order(q)
    items = [(r, x) for r in aux_transversals(F).table_squares for x in eq.domain(F)]
    algs = {it: to_algebra(eq.u4_subgroup(F, *it)) for it in items}
    for a, b in itertools.combinations_with_replacement(items, 2):
        assert eq.u4_conjugate(F, a[0], a[1], b[0], b[1]) == (are_isomorphic(algs[a], algs[b]) is not None)
