"""Regular subgroups of AGL_4, their invariants and the algebra dictionary."""

from __future__ import annotations

import random

import pytest
from hypothesis import given, strategies as st

from nilclass4 import catalog as cat
from nilclass4 import linalg as la
from nilclass4.field import field_of_order, make_field
from nilclass4.regular import (
    CASE_TABLE,
    DeltaMap,
    InvalidSubgroup,
    NilAlgebra,
    RegularSubgroup,
    algebra_from_json,
    algebra_to_json,
    all_vectors,
    build_lift,
    center_subspace,
    central_jordan_types,
    check_closure,
    conjugate,
    from_algebra,
    invariants,
    is_abelian,
    lift_condition,
    mu,
    to_algebra,
    transform_algebra,
    translation_map,
    zero_algebra,
)


def _R(F, family, params=()):
    return RegularSubgroup(cat.family_delta(F, family, params))


def _tr4(F):
    return RegularSubgroup(translation_map(F, 4))


def _literal_closure(R) -> bool:
    """mu(v) mu(w) is again mu of its first row, checked by matrix products."""
    F, n = R.field, R.n
    vs = list(all_vectors(F, n))
    for v in vs:
        for w in vs:
            prod = la.mul(F, mu(R, v), mu(R, w))
            if prod != mu(R, prod[0][1:]):
                return False
    return True


def test_mu_examples(F2):
    assert mu(_tr4(F2), (0, 0, 0, 0)) == la.identity(5)
    assert mu(_R(F2, "S5"), (1, 0, 0, 0)) == la.jordan_block(5)
    assert mu(_tr4(F2), (1, 0, 0, 0)) == la.add(F2, la.identity(5), la.elementary(5, 1, 2))


def test_closure_on_catalog(small_field):
    for label in cat.classify(small_field):
        assert check_closure(cat.build(label, small_field).delta)


@pytest.mark.parametrize("q", [2, 3])
def test_closure_agrees_with_literal_products(q):
    F = field_of_order(q)
    for label in cat.classify(F)[:12]:
        assert _literal_closure(cat.build(label, F))


def test_random_tensor_rejected():
    F = make_field(3)
    rng = random.Random(7)
    for _ in range(20):
        # strictly upper triangular deltas keep every delta(v) nilpotent
        deltas = tuple(
            tuple(tuple(rng.randrange(3) if c > r else 0 for c in range(4)) for r in range(4))
            for _ in range(4)
        )
        dm = DeltaMap(F, deltas)
        if not check_closure(dm):
            break
    else:  # pragma: no cover
        pytest.fail("no closure violation found in the sample")
    with pytest.raises(InvalidSubgroup):
        RegularSubgroup(dm)


def test_is_abelian_examples(F3):
    assert is_abelian(_tr4(F3))
    assert is_abelian(_R(F3, "S5"))
    assert not is_abelian(_R(F3, "U2", (0, 1, 0, 1, 1)))


@pytest.mark.parametrize("q", [2, 3])
def test_is_abelian_matches_literal_commutation(q):
    F = field_of_order(q)
    vs = list(all_vectors(F, 4))
    for label in cat.classify(F):
        R = cat.build(label, F)
        commute = all(la.mul(F, mu(R, v), mu(R, w)) == la.mul(F, mu(R, w), mu(R, v)) for v in vs for w in vs)
        assert commute == is_abelian(R) == label.abelian


def _literal_center_size(R) -> int:
    F = R.field
    vs = list(all_vectors(F, 4))
    return sum(
        all(la.mul(F, mu(R, v), mu(R, w)) == la.mul(F, mu(R, w), mu(R, v)) for w in vs) for v in vs
    )


def test_center_examples(F3):
    assert len(center_subspace(_R(F3, "S5"))) == 4
    # the center of U3(0,1,0) is a plane; k(R) = 3 counts the kernel of delta instead
    U3 = _R(F3, "U3", (0, 1, 0))
    assert len(center_subspace(U3)) == 2
    assert _literal_center_size(U3) == 9
    for b in [(0, 0), (0, 1), (2, 1)]:
        U4 = _R(F3, "U4", (1,) + b)
        assert len(center_subspace(U4)) == 2
        assert _literal_center_size(U4) == 9


def test_invariant_examples(F2, F3):
    S5 = invariants(_R(F2, "S5"))
    assert (S5.d, S5.r, S5.k) == (5, 4, 1)
    T = invariants(_tr4(F3))
    assert (T.d, T.r, T.k) == (2, 1, 4)
    U = invariants(_R(F3, "U3", (0, 1, 0)))
    assert (U.d, U.r, U.k) == (3, 3, 3)
    with pytest.raises(ValueError):
        invariants(_tr4(F3), "half")


def test_case_table_jordan_types(small_field):
    for label in cat.classify(small_field):
        R = cat.build(label, small_field)
        c = invariants(R, "center")
        assert CASE_TABLE[(c.d, c.r)] in central_jordan_types(R)


def test_to_algebra_examples(F3):
    assert to_algebra(_tr4(F3)) == zero_algebra(F3)
    S5 = to_algebra(_R(F3, "S5"))
    e = [la.unit_vector(4, i) for i in range(4)]
    for i in range(4):
        for j in range(4):
            want = e[i + j + 1] if i + j + 1 < 4 else (0, 0, 0, 0)
            assert S5.mul(e[i], e[j]) == want
    N = to_algebra(_R(F3, "U4", (1, 0, 0)))
    assert N.mul(e[0], e[0]) == e[2]
    assert N.mul(e[0], e[1]) == e[3]
    assert N.mul(e[1], e[1]) == e[2]
    assert N.mul(e[1], e[0]) == (0, 0, 0, 0)


def test_algebra_roundtrip(small_field):
    for label in cat.classify(small_field):
        R = cat.build(label, small_field)
        N = to_algebra(R)
        assert N.is_associative() and N.is_nilpotent()
        assert from_algebra(N) == R
        assert algebra_from_json(algebra_to_json(N)) == N
    assert from_algebra(zero_algebra(small_field)) == _tr4(small_field)


def test_non_associative_rejected(F2):
    c = [[[0] * 4 for _ in range(4)] for _ in range(4)]
    c[0][0] = [0, 1, 0, 0]  # e1 e1 = e2
    c[1][0] = [0, 0, 1, 0]  # e2 e1 = e3, but e1 e2 = 0
    N = NilAlgebra(F2, tuple(tuple(tuple(v) for v in r) for r in c))
    assert not N.is_associative()
    with pytest.raises(InvalidSubgroup):
        from_algebra(N)


@pytest.mark.parametrize("q", [2, 3])
def test_conjugate_is_group_conjugation(q):
    F = field_of_order(q)
    rng = random.Random(q)
    for label in cat.classify(F)[::4]:
        R = cat.build(label, F)
        gbar = la.random_invertible(F, 4, rng)
        g = la.block_diag(la.identity(1), gbar)
        ginv = la.inverse(F, g)
        Rg = conjugate(R, gbar)
        for v in all_vectors(F, 4):
            h = la.mul(F, la.mul(F, ginv, mu(R, v)), g)
            assert h == mu(Rg, h[0][1:])


def test_conjugate_identity(F3):
    R = _R(F3, "U3", (1, 2, 0))
    assert conjugate(R, la.identity(4)) == R


@given(st.sampled_from([2, 3, 4]), st.integers(0, 10**6))
def test_conjugate_preserves_invariants(q, seed):
    F = field_of_order(q)
    rng = random.Random(seed)
    labels = cat.classify(F)
    R = cat.build(labels[rng.randrange(len(labels))], F)
    gbar = la.random_invertible(F, 4, rng)
    Rg = conjugate(R, gbar)
    assert invariants(Rg) == invariants(R)
    assert invariants(Rg, "center") == invariants(R, "center")
    # v -> v gbar carries the algebra of R onto that of R^g
    assert transform_algebra(to_algebra(R), gbar) == to_algebra(Rg)


def test_build_lift(F3):
    tr3 = translation_map(F3, 3)
    rng = random.Random(1)
    for _ in range(10):
        D = la.random_matrix(F3, 3, rng)
        assert lift_condition(F3, tr3, D)
        assert build_lift(tr3, D) == _R(F3, "RD", (D,))
    assert build_lift(tr3, la.zeros(3)) == _tr4(F3)
    D2 = ((1, 0, 0), (0, 1, 0), (0, 0, 0))
    assert invariants(build_lift(tr3, D2)).k == 2


def test_build_lift_condition_failure(F2):
    # over S_(4) (dimension 3, e1 e1 = e2, e1 e2 = e3) the lift needs D to
    # respect the products; the identity matrix does not
    S4 = DeltaMap(
        F2,
        (
            ((0, 1, 0), (0, 0, 1), (0, 0, 0)),
            ((0, 0, 1), (0, 0, 0), (0, 0, 0)),
            ((0, 0, 0), (0, 0, 0), (0, 0, 0)),
        ),
    )
    assert check_closure(S4)
    assert not lift_condition(F2, S4, la.identity(3))
    with pytest.raises(InvalidSubgroup):
        build_lift(S4, la.identity(3))


@pytest.mark.parametrize("q", [2, 3, 4])
def test_batched_d_r_matches_scalar(q):
    from nilclass4.regular import _batch_d_and_r, _d_and_r, projective_points

    F = field_of_order(q)
    for label in cat.classify(F):
        R = cat.build(label, F)
        for basis in ([la.unit_vector(4, i) for i in range(4)], center_subspace(R)):
            pts = list(projective_points(F, basis))
            pairs = [_d_and_r(F, R.delta, v) for v in pts]
            assert _batch_d_and_r(R.delta, pts) == (max(p[0] for p in pairs), max(p[1] for p in pairs))
