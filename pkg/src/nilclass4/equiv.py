"""The relation on pairs (beta1, beta2), beta1 != 1, that decides conjugacy of
the U4(rho, beta1, beta2) subgroups, its class transversals A_rho, and the
polynomial machinery behind the explicit finite-field transversals.
"""

from __future__ import annotations

import itertools
from dataclasses import dataclass
from functools import lru_cache

from . import linalg as la
from .catalog import family_delta
from .field import FieldSpec, _DSU, aux_transversals
from .regular import RegularSubgroup, conjugate

Pair = tuple


@dataclass(frozen=True)
class ConjPolys:
    """Coefficient lists (low degree first) of f1, f2, g1, g2 for fixed rho, beta."""

    f1: tuple
    f2: tuple
    g1: tuple
    g2: tuple

    @classmethod
    def of(cls, F: FieldSpec, rho, pair: Pair) -> "ConjPolys":
        b1, b2 = pair
        m, ng, a = F.mul, F.neg, F.add
        two = F.from_int(2)
        return cls(
            f1=(ng[rho], b2, b1),
            f2=(ng[m[rho][b2]], ng[m[m[two][rho]][a[b1][1]]], b2),
            g1=(ng[m[rho][b1]], b2, 1),
            g2=(rho, 0, 1),
        )

    def identity_holds(self, F: FieldSpec, b1) -> bool:
        """f1 = g1 + (b1 - 1) g2, coefficientwise."""
        c = F.sub(b1, 1)
        return all(
            F.add[g][F.mul[c][h]] == f for f, g, h in zip(self.f1, self.g1, self.g2)
        )


def domain(F: FieldSpec) -> list:
    return [(b1, b2) for b1 in F.elements() if b1 != 1 for b2 in F.elements()]


def move(F: FieldSpec, rho, pair: Pair, t, sign: int = 1):
    """The pair reached from `pair` through parameter t, or None if t is excluded."""
    P = ConjPolys.of(F, rho, pair)
    g1 = F.eval_poly(P.g1, t)
    if g1 == 0 or F.eval_poly(P.g2, t) == 0:
        return None
    b3 = F.div(F.eval_poly(P.f1, t), g1)
    b4 = F.div(F.eval_poly(P.f2, t), g1)
    return (b3, b4 if sign > 0 else F.neg[b4])


def related(F: FieldSpec, rho, pair: Pair) -> set:
    """All pairs y with pair ~ y in one step of the raw relation."""
    b1, b2 = pair
    out = {(b1, b2), (b1, F.neg[b2])}
    for t in F.elements():
        for s in (1, -1):
            y = move(F, rho, pair, t, s)
            if y is not None:
                out.add(y)
    return out


def divide_step(F: FieldSpec, rho, x: Pair, y: Pair) -> bool:
    return y in related(F, rho, x)


@lru_cache(maxsize=None)
def a_rho_classes(F: FieldSpec, rho) -> tuple:
    """Classes of the equivalence closure on (F minus {1}) x F, each sorted,
    listed by their least element."""
    dom = domain(F)
    dsu = _DSU(dom)
    for x in dom:
        for y in related(F, rho, x):
            dsu.union(x, y)
    return tuple(sorted(tuple(sorted(c)) for c in dsu.classes().values()))


def a_rho_transversal(F: FieldSpec, rho) -> list:
    return [c[0] for c in a_rho_classes(F, rho)]


@lru_cache(maxsize=None)
def _class_index(F: FieldSpec, rho) -> dict:
    return {x: i for i, c in enumerate(a_rho_classes(F, rho)) for x in c}


def a_rho_rep(F: FieldSpec, rho, pair: Pair) -> Pair:
    return a_rho_classes(F, rho)[_class_index(F, rho)[pair]][0]


def is_transitive(F: FieldSpec, rho) -> bool:
    """Whether the raw one-step relation is already an equivalence."""
    rel = {x: related(F, rho, x) for x in domain(F)}
    for x, ys in rel.items():
        for y in ys:
            if x not in rel[y] or not rel[y] <= ys:
                return False
    return True


def u4_conjugate(F: FieldSpec, rho1, x: Pair, rho2, y: Pair) -> bool:
    if rho1 != rho2:
        return False
    idx = _class_index(F, rho1)
    return idx[tuple(x)] == idx[tuple(y)]


def u4_subgroup(F: FieldSpec, rho, pair: Pair) -> RegularSubgroup:
    return RegularSubgroup(family_delta(F, "U4", (rho,) + tuple(pair)))


def u4_system(F: FieldSpec, rho1, x: Pair, rho2, y: Pair, a) -> bool:
    """Both conjugation equation blocks and the nondegeneracy condition at a = (a1..a4)."""
    a1, a2, a3, a4 = a
    b1, b2 = x
    b3, b4 = y
    m, ad, sub = F.mul, F.add, F.sub

    def s(*terms):
        return F.sum(terms)

    if ad[m[a1][a3]][m[m[a2][a4]][rho2]] != 0:
        return False
    e1 = s(
        m[m[sub(m[b1][b3], 1)][a2]][a3],
        m[m[m[b4][sub(b1, 1)]][a2]][a4],
        m[m[sub(b1, b3)][a1]][a4],
    )
    e2 = s(
        m[m[m[rho1][rho2]][a2]][a2],
        m[m[rho1][a1]][a1],
        F.neg[m[m[rho2][a4]][a4]],
        F.neg[m[a3][a3]],
    )
    e3 = s(
        m[b2][s(m[m[b3][a2]][a3], m[m[b4][a2]][a4], m[a1][a4])],
        m[b4][sub(m[m[a2][a2]][rho1], m[a4][a4])],
        m[ad[b3][1]][sub(m[m[a1][a2]][rho1], m[a3][a4])],
    )
    if e1 or e2 or e3:
        return False
    det = sub(m[a1][a4], m[a2][a3])
    other = s(m[a1][a1], m[m[a1][a2]][b4], F.neg[m[m[m[a2][a2]][rho2]][b3]])
    return m[det][other] != 0


def u4_block_matrix(F: FieldSpec, rho2, y: Pair, a) -> la.Mat:
    a1, a2, a3, a4 = a
    b3, b4 = y
    m, ad = F.mul, F.add
    bb1 = ad[m[m[rho2][a2]][a2]][m[a1][a1]]
    bb2 = ad[m[m[ad[b3][1]][a1]][a2]][m[m[b4][a2]][a2]]
    bb3 = ad[m[m[rho2][a2]][a4]][m[a1][a3]]
    bb4 = F.sum((m[m[b3][a2]][a3], m[m[b4][a2]][a4], m[a1][a4]))
    return la.block_diag(((a1, a2), (a3, a4)), ((bb1, bb2), (bb3, bb4)))


def u4_witness_search(F: FieldSpec, rho1, x: Pair, rho2, y: Pair):
    """A matrix gbar with U4(rho1, x)^diag(1, gbar) = U4(rho2, y), built from a
    solution of the conjugation system, or None."""
    src = u4_subgroup(F, rho1, x)
    dst = u4_subgroup(F, rho2, y)
    for a in itertools.product(F.elements(), repeat=4):
        if not u4_system(F, rho1, x, rho2, y, a):
            continue
        g = u4_block_matrix(F, rho2, y, a)
        if la.is_invertible(F, g) and conjugate(src, g) == dst:
            return g
    return None


# -- reduction hints -------------------------------------------------------------
#
# Each returns the pair the corresponding normal-form statement predicts, or
# None when its hypotheses do not hold.


def _irreducible_quadratic(F: FieldSpec, coeffs) -> bool:
    return coeffs[2] != 0 and not F.roots(coeffs)


def _good_root(F: FieldSpec, P: ConjPolys, poly):
    for a in F.roots(poly):
        if F.eval_poly(P.g1, a) and F.eval_poly(P.g2, a):
            return a
    return None


def hint_f1(F: FieldSpec, rho, pair: Pair):
    """beta1 = 0 or f1 reducible  =>  conjugate to some (0, lambda)."""
    b1, b2 = pair
    if b1 == 1 or pair == (F.neg[1], 0):
        return None
    if b1 == 0:
        return (0, b2)
    P = ConjPolys.of(F, rho, pair)
    if not F.roots(P.f1):
        return None
    a = _good_root(F, P, P.f1)
    if a is None:
        return None
    return (0, F.div(F.eval_poly(P.f2, a), F.eval_poly(P.g1, a)))


def hint_f2(F: FieldSpec, rho, pair: Pair):
    """f1 irreducible, f2 reducible  =>  conjugate to some (lambda, 0)."""
    b1, b2 = pair
    if F.p == 2 or b1 in (0, 1) or b2 == 0 or pair == (F.neg[1], 0):
        return None
    P = ConjPolys.of(F, rho, pair)
    if not _irreducible_quadratic(F, P.f1) or not F.roots(P.f2):
        return None
    a = _good_root(F, P, P.f2)
    if a is None:
        return None
    return (F.div(F.eval_poly(P.f1, a), F.eval_poly(P.g1, a)), 0)


def _one_step_into(F: FieldSpec, rho, pair: Pair, accept):
    if accept(pair):
        return pair
    for y in sorted(related(F, rho, pair)):
        if accept(y):
            return y
    return None


def hint_q3(F: FieldSpec, pair: Pair):
    """rho = 1 with a square root of -1 available: target in {(-1,0),(0,0)} or (lambda+1, 2 iota)."""
    T = aux_transversals(F)
    if F.p == 2 or T.iota is None:
        return None
    iota = T.iota
    m1 = F.neg[1]
    two_iota = F.mul[F.from_int(2)][iota]
    b1, b2 = pair
    if pair in ((m1, 0), (0, 0)) or b2 == two_iota:
        return pair
    if b2 == F.neg[two_iota]:
        return (b1, two_iota)
    P = ConjPolys.of(F, 1, pair)
    den = F.sub(b2, two_iota)
    a = F.div(F.add[F.mul[F.from_int(2)][b1]][F.mul[iota][b2]], den)
    g1a, g2a = F.eval_poly(P.g1, a), F.eval_poly(P.g2, a)
    if g1a and g2a:
        return (F.div(F.eval_poly(P.f1, a), g1a), F.div(F.eval_poly(P.f2, a), g1a))
    if F.add[F.mul[b2][b2]][F.mul[F.from_int(4)][b1]] == 0:
        return (0, 0)
    return (F.from_int(-3), two_iota)


def hint_q1(F: FieldSpec, pair: Pair):
    """rho = -1 with -1 a non-square: target in {(-1,0),(0,0)} or (lambda+1, 2)."""
    if F.p == 2 or F.is_square(F.neg[1]):
        return None
    m1, two = F.neg[1], F.from_int(2)
    return _one_step_into(
        F, m1, pair, lambda y: y in ((m1, 0), (0, 0)) or (y[1] == two and y[0] != 1)
    )


def hint_ii(F: FieldSpec, rho, pair: Pair):
    """f1, f2 both irreducible: rho = 1 -> (l, theta(l+1)); rho = xi -> (-1, l)."""
    T = aux_transversals(F)
    b1, b2 = pair
    m1 = F.neg[1]
    if F.p == 2 or b1 in (0, 1) or pair == (m1, 0) or T.theta is None:
        return None
    P = ConjPolys.of(F, rho, pair)
    if not (_irreducible_quadratic(F, P.f1) and _irreducible_quadratic(F, P.f2)):
        return None
    th = T.theta
    if rho == 1:
        if b2 == F.mul[th][F.add[b1][1]]:
            return pair
        h = tuple(
            F.sub(f2, F.mul[th][F.add[f1][g1]]) for f1, f2, g1 in zip(P.f1, P.f2, P.g1)
        )
        a = _good_root(F, P, h)
        if a is None:
            return None
        g1a = F.eval_poly(P.g1, a)
        f1a = F.eval_poly(P.f1, a)
        return (F.div(f1a, g1a), F.div(F.mul[th][F.add[f1a][g1a]], g1a))
    if rho == T.table_xi:
        if b1 == m1:
            return pair
        h = tuple(F.add[f1][g1] for f1, g1 in zip(P.f1, P.g1))
        a = _good_root(F, P, h)
        if a is None:
            return None
        return (m1, F.div(F.eval_poly(P.f2, a), F.eval_poly(P.g1, a)))
    return None


# -- the explicit finite-field transversals ------------------------------------------


def explicit_a_sets(F: FieldSpec) -> dict:
    """The explicit A_rho lists for F_q, keyed by rho."""
    T = aux_transversals(F)
    el, nz = list(F.elements()), list(F.nonzero())
    m1 = F.neg[1]
    two = F.from_int(2)
    if F.p == 2:
        a1 = [(0, l) for l in el]
        for a in el:
            if a in (0, 1):
                continue
            kinv = F.inv[T.kappa[a]]
            a1.append((F.add[1][kinv], F.mul[a][kinv]))
        return {1: a1}
    base = [(m1, 0), (0, 0)]
    xi = T.table_xi
    if F.q % 4 == 1:
        two_iota = F.mul[two][T.iota]
        a1 = base + [(F.add[l][1], two_iota) for l in nz]
        axi = (
            base
            + [(0, l) for l in T.N]
            + [(l, 0) for l in T.P]
            + [(m1, l) for l in T.Q]
        )
        return {1: a1, xi: axi}
    th = T.theta
    a1 = (
        base
        + [(0, l) for l in T.N]
        + [(l, 0) for l in T.P]
        + [(l, F.mul[th][F.add[l][1]]) for l in T.S]
    )
    am1 = base + [(F.add[l][1], two) for l in nz]
    return {1: a1, m1: am1}
