"""Isomorphism of nilpotent associative algebras over F_q, which is the same as
conjugacy of the corresponding regular subgroups under diag(1, gbar).

A witness is a matrix gbar with (v gbar) o2 (w gbar) = (v o1 w) gbar.  The
search fixes a generating set x_1..x_s of N1 (lifts of a basis of N1/N1^2),
writes a basis of N1 as words in the x_i, and backtracks over images y_i in
N2.  Candidates for y_i are restricted to elements with the same
isomorphism-invariant signature as x_i; all candidates for one generator are
tested at once with numpy table arithmetic.
"""

from __future__ import annotations

import itertools
import sys
from dataclasses import dataclass, field as dc_field
from functools import lru_cache

import numpy as np

from . import linalg as la
from .field import FieldSpec
from .npfield import Tables, batch_rank, tables
from .regular import NilAlgebra, from_algebra, invariants, transform_algebra


class SearchLimitExceeded(RuntimeError):
    pass


class NoCatalogMatch(RuntimeError):
    pass


@dataclass(frozen=True)
class SearchConfig:
    max_search_nodes: int = 5_000_000


DEFAULT_CONFIG = SearchConfig()


# -- vectorized algebra arithmetic -------------------------------------------------


def _bprod(T: Tables, sparse, X: np.ndarray, Y: np.ndarray, n: int) -> np.ndarray:
    """Row-wise products X[m] o Y[m] from sparse structure constants."""
    out = np.zeros((max(len(X), len(Y)), n), dtype=np.int64)
    for i, j, k, c in sparse:
        t = T.mul[X[:, i], Y[:, j]]
        if c != 1:
            t = T.mul[c][t]
        out[:, k] = T.add[out[:, k], t]
    return out


def _all_vectors(q: int, n: int) -> np.ndarray:
    return np.array(list(itertools.product(range(q), repeat=n)), dtype=np.int64).reshape(-1, n)


# -- per-algebra precomputation ---------------------------------------------------


@dataclass(eq=False)
class _Prepared:
    N: NilAlgebra
    elems: np.ndarray
    sig_ids: np.ndarray  # per element, an index into sigs
    sigs: list
    pools: dict = dc_field(default_factory=dict)  # signature -> element indices
    powers: list = dc_field(default_factory=list)


def _membership(T: Tables, X: np.ndarray, basis, n: int, F: FieldSpec) -> np.ndarray:
    """Mask of rows of X lying in span(basis)."""
    if len(basis) == n:
        return np.ones(len(X), dtype=bool)
    if not basis:
        return ~X.any(axis=1)
    dual = la.nullspace_basis(F, tuple(basis))
    ok = np.ones(len(X), dtype=bool)
    for k in dual:
        acc = np.zeros(len(X), dtype=np.int64)
        for i, ki in enumerate(k):
            if ki:
                acc = T.add[acc, T.mul[ki][X[:, i]]]
        ok &= acc == 0
    return ok


def _levels(T, X, powers, n, F) -> np.ndarray:
    """Largest j with x in N^j (0 for x = 0)."""
    lev = np.zeros(len(X), dtype=np.int64)
    for j, basis in enumerate(powers, start=1):
        lev[_membership(T, X, basis, n, F) & X.any(axis=1)] = j
    return lev


def _left_rows(T, sparse, X, n) -> np.ndarray:
    """(M, n, n): row j is x o e_j."""
    E = np.eye(n, dtype=np.int64)
    return np.stack(
        [_bprod(T, sparse, X, np.broadcast_to(E[j], X.shape), n) for j in range(n)], axis=1
    )


def _right_rows(T, sparse, X, n) -> np.ndarray:
    """(M, n, n): row j is e_j o x."""
    E = np.eye(n, dtype=np.int64)
    return np.stack(
        [_bprod(T, sparse, np.broadcast_to(E[j], X.shape), X, n) for j in range(n)], axis=1
    )


def element_signatures(N: NilAlgebra) -> tuple[np.ndarray, np.ndarray]:
    """All elements of N and, for each, an isomorphism-invariant signature row:
    (level, nilpotency index, rank L_x, rank R_x, dim(xN + Nx), rank L_{x^2},
    level of x^2, dim(ker L_x meet ker R_x))."""
    F, n = N.field, N.dim
    T = tables(F)
    X = _all_vectors(F.q, n)
    sp = N.sparse
    powers = N.powers()
    L = _left_rows(T, sp, X, n)
    R = _right_rows(T, sp, X, n)
    X2 = _bprod(T, sp, X, X, n)
    # least m with x^m = 0 (1 for x = 0)
    nil = np.zeros(len(X), dtype=np.int64)
    P = X.copy()
    for m in range(1, n + 2):
        newly = (nil == 0) & ~P.any(axis=1)
        nil[newly] = m
        P = _bprod(T, sp, P, X, n)
    nil[~X.any(axis=1)] = 1
    L2 = _left_rows(T, sp, X2, n)
    sig = np.stack(
        [
            _levels(T, X, powers, n, F),
            nil,
            batch_rank(T, L),
            batch_rank(T, R),
            batch_rank(T, np.concatenate([L, R], axis=1)),
            batch_rank(T, L2),
            _levels(T, X2, powers, n, F),
            n - batch_rank(T, np.concatenate([L, R], axis=2)),
        ],
        axis=1,
    )
    return X, sig


@lru_cache(maxsize=256)
def _prepare(N: NilAlgebra) -> _Prepared:
    X, sig = element_signatures(N)
    keys = [tuple(int(v) for v in row) for row in sig]
    sigs = sorted(set(keys))
    index = {s: i for i, s in enumerate(sigs)}
    ids = np.array([index[k] for k in keys], dtype=np.int64)
    prep = _Prepared(N, X, ids, sigs, powers=N.powers())
    for i, s in enumerate(sigs):
        prep.pools[s] = np.nonzero(ids == i)[0]
    return prep


# -- invariants -------------------------------------------------------------------


@dataclass(frozen=True)
class InvariantVector:
    abelian: bool
    dim_n2: int
    dim_n3: int
    dim_n4: int
    left_ann: int
    right_ann: int
    center: int
    d: int
    r: int
    k: int
    square_zero_count: int
    signature_counts: tuple

    def as_dict(self) -> dict:
        return {
            "abelian": self.abelian,
            "dim_N2": self.dim_n2,
            "dim_N3": self.dim_n3,
            "dim_N4": self.dim_n4,
            "left_annihilator": self.left_ann,
            "right_annihilator": self.right_ann,
            "center": self.center,
            "d": self.d,
            "r": self.r,
            "k": self.k,
            "square_zero_count": self.square_zero_count,
        }


def _kernel_dim(F: FieldSpec, rows) -> int:
    return len(rows) - la.rank(F, tuple(rows))


@lru_cache(maxsize=1024)
def invariant_vector(N: NilAlgebra) -> InvariantVector:
    F, n = N.field, N.dim
    c = N.c
    pw = N.powers()
    dims = [len(b) for b in pw[1:]] + [0] * 4
    left = [sum((c[i][j] for j in range(n)), ()) for i in range(n)]
    right = [sum((c[j][i] for j in range(n)), ()) for i in range(n)]
    comm = [
        sum((la.vec_add(F, c[i][j], la.vec_scale(F, F.neg[1], c[j][i])) for j in range(n)), ())
        for i in range(n)
    ]
    prep = _prepare(N)
    counts = np.bincount(prep.sig_ids, minlength=len(prep.sigs))
    X2 = _bprod(tables(F), N.sparse, prep.elems, prep.elems, n)
    t = invariants(from_algebra(N))
    return InvariantVector(
        abelian=_kernel_dim(F, comm) == n,
        dim_n2=dims[0],
        dim_n3=dims[1],
        dim_n4=dims[2],
        left_ann=_kernel_dim(F, left),
        right_ann=_kernel_dim(F, right),
        center=_kernel_dim(F, comm),
        d=t.d,
        r=t.r,
        k=t.k,
        square_zero_count=int((~X2.any(axis=1)).sum()),
        signature_counts=tuple((s, int(k)) for s, k in zip(prep.sigs, counts)),
    )


# -- witness checking ------------------------------------------------------------------


def is_witness(N1: NilAlgebra, N2: NilAlgebra, gbar: la.Mat) -> bool:
    """(e_i gbar) o2 (e_j gbar) == (e_i o1 e_j) gbar for all basis pairs, gbar invertible."""
    F, n = N1.field, N1.dim
    if not la.is_invertible(F, gbar):
        return False
    for i in range(n):
        for j in range(n):
            if N2.mul(gbar[i], gbar[j]) != la.vec_mat(F, N1.c[i][j], gbar):
                return False
    return True


# -- the backtracking search -----------------------------------------------------------


@dataclass(frozen=True)
class _Word:
    word: tuple
    value: tuple
    parent: int | None
    gen: int
    maxgen: int


def _choose_generators(prep1: _Prepared, prep2: _Prepared) -> list:
    F, n = prep1.N.field, prep1.N.dim
    n2 = prep1.powers[1] if len(prep1.powers) > 1 else []
    level = np.array([s[0] for s in prep1.sigs])[prep1.sig_ids]
    rarity = {s: len(prep2.pools.get(s, ())) for s in prep1.sigs}
    order = sorted(
        np.nonzero(level == 1)[0].tolist(),
        key=lambda e: (rarity[prep1.sigs[prep1.sig_ids[e]]], e),
    )
    gens: list = []
    span = list(n2)
    for e in order:
        v = tuple(int(x) for x in prep1.elems[e])
        if la.rank(F, tuple(span + [v])) > len(span):
            gens.append(e)
            span.append(v)
            if len(span) == n:
                break
    return gens


def _word_basis(N: NilAlgebra, gen_vals: list) -> tuple[list, list]:
    F, n = N.field, N.dim
    basis = [_Word((g,), v, None, g, g) for g, v in enumerate(gen_vals)]
    relations = []  # (parent index, gen, coefficient vector over basis)
    i = 0
    while i < len(basis):
        for g, gv in enumerate(gen_vals):
            val = N.mul(basis[i].value, gv)
            coeffs = la.solve_row(F, [b.value for b in basis], val)
            if coeffs is None:
                w = basis[i]
                basis.append(_Word(w.word + (g,), val, i, g, max(w.maxgen, g)))
            else:
                relations.append((i, g, coeffs))
        i += 1
    if len(basis) != n:
        raise RuntimeError("generators do not span the algebra")
    return basis, relations


def _rel_level(basis, rel) -> int:
    i, g, coeffs = rel
    lev = max(basis[i].maxgen, g)
    for b, cf in zip(basis, coeffs):
        if cf:
            lev = max(lev, b.maxgen)
    return lev


def _intersection(F: FieldSpec, U: list, V: list) -> list:
    if not U or not V:
        return []
    coeffs = la.left_nullspace_basis(F, tuple(U) + tuple(V))
    return la.row_space_basis(F, [la.lin_comb(F, c[: len(U)], U) for c in coeffs])


def _shift_space(N: NilAlgebra) -> list:
    """RREF basis of the two-sided annihilator of N intersected with N^2."""
    F, n, c = N.field, N.dim, N.c
    rows = tuple(
        sum((c[i][j] for j in range(n)), ()) + sum((c[j][i] for j in range(n)), ())
        for i in range(n)
    )
    ann = la.left_nullspace_basis(F, rows)
    pw = N.powers()
    n2 = pw[1] if len(pw) > 1 else []
    return _intersection(F, la.row_space_basis(F, ann), n2)


def _is_reduced(T: Tables, Y: np.ndarray, W: list) -> np.ndarray:
    """Mask of rows of Y with zero entries at every pivot column of W (RREF)."""
    ok = np.ones(len(Y), dtype=bool)
    for row in W:
        p = next(i for i, x in enumerate(row) if x)
        ok &= Y[:, p] == 0
    return ok


class _Search:
    def __init__(self, prep1: _Prepared, prep2: _Prepared, config: SearchConfig):
        self.p1, self.p2 = prep1, prep2
        self.N1, self.N2 = prep1.N, prep2.N
        self.F, self.n = self.N1.field, self.N1.dim
        self.T = tables(self.F)
        self.config = config
        self.nodes = 0
        self.gens = _choose_generators(prep1, prep2)
        gen_vals = [tuple(int(x) for x in prep1.elems[e]) for e in self.gens]
        self.basis, rels = _word_basis(self.N1, gen_vals)
        s = len(self.gens)
        self.rels_at = [[r for r in rels if _rel_level(self.basis, r) == k] for k in range(s)]
        self.words_at = [[i for i, b in enumerate(self.basis) if b.maxgen == k] for k in range(s)]
        self.upto = [[i for i, b in enumerate(self.basis) if b.maxgen <= k] for k in range(s)]
        # Shifting a generator image by w in W = Ann(N2) meet N2^2 changes no
        # product and keeps the generators independent mod N2^2, so every
        # solution can be moved to one using reduced coset representatives.
        W = _shift_space(self.N2)
        self.pools = []
        for e in self.gens:
            sig = prep1.sigs[prep1.sig_ids[e]]
            idx = prep2.pools.get(sig, np.zeros(0, dtype=np.int64))
            Y = prep2.elems[idx]
            self.pools.append(Y[_is_reduced(self.T, Y, W)])

    def run(self):
        images: dict = {}
        return self._level(0, images)

    def _level(self, k: int, images: dict):
        T, n, sp = self.T, self.n, self.N2.sparse
        Y = self.pools[k]
        M = len(Y)
        if M == 0:
            return None
        self.nodes += M
        if self.nodes > self.config.max_search_nodes:
            raise SearchLimitExceeded(
                f"isomorphism search exceeded {self.config.max_search_nodes} nodes"
            )
        img = {}

        def get(i):
            if i in images:
                return np.broadcast_to(np.array(images[i], dtype=np.int64), (M, n))
            return img[i]

        for i in self.words_at[k]:
            b = self.basis[i]
            if b.parent is None:
                img[i] = Y
            else:
                img[i] = _bprod(T, sp, get(b.parent), self._gen_image(b.gen, k, Y, images, M), n)
        ok = np.ones(M, dtype=bool)
        for i, g, coeffs in self.rels_at[k]:
            lhs = _bprod(T, sp, get(i), self._gen_image(g, k, Y, images, M), n)
            rhs = np.zeros((M, n), dtype=np.int64)
            for b, cf in enumerate(coeffs):
                if cf:
                    rhs = T.add[rhs, T.mul[cf][get(b)]]
            ok &= (lhs == rhs).all(axis=1)
        surv = np.nonzero(ok)[0]
        if len(surv) == 0:
            return None
        stack = np.stack([get(i)[surv] for i in self.upto[k]], axis=1)
        surv = surv[batch_rank(T, stack) == len(self.upto[k])]
        last = k == len(self.gens) - 1
        for m in surv:
            new = dict(images)
            for i in self.words_at[k]:
                new[i] = tuple(int(x) for x in img[i][m])
            if last:
                return self._finish(new)
            found = self._level(k + 1, new)
            if found is not None:
                return found
        return None

    def _gen_image(self, g: int, k: int, Y, images, M):
        if g == k:
            return Y
        # generator g < k has basis index g
        return np.broadcast_to(np.array(images[g], dtype=np.int64), (M, self.n))

    def _finish(self, images: dict):
        F = self.F
        MA = tuple(b.value for b in self.basis)
        MB = tuple(images[i] for i in range(len(self.basis)))
        gbar = la.mul(F, la.inverse(F, MA), MB)
        if not is_witness(self.N1, self.N2, gbar):
            raise RuntimeError("search produced a map that is not an isomorphism")
        return gbar


def are_isomorphic(N1: NilAlgebra, N2: NilAlgebra, config: SearchConfig = DEFAULT_CONFIG):
    """A witness gbar with (v gbar) o2 (w gbar) = (v o1 w) gbar, or None."""
    if N1.field != N2.field or N1.dim != N2.dim:
        raise ValueError("algebras must share field and dimension")
    if invariant_vector(N1) != invariant_vector(N2):
        return None
    n = N1.dim
    if not any(N1.sparse):
        # both are zero algebras here: any invertible map works
        return la.identity(n)
    return _Search(_prepare(N1), _prepare(N2), config).run()


# -- exhaustive oracle over GL_4(F_2) ----------------------------------------------------


@lru_cache(maxsize=None)
def _gl4_f2() -> tuple[np.ndarray, np.ndarray]:
    """All invertible 4x4 binary matrices and their inverses."""
    bits = ((np.arange(1 << 16)[:, None] >> np.arange(15, -1, -1)) & 1).reshape(-1, 4, 4)
    det = np.round(np.linalg.det(bits.astype(float))).astype(np.int64) % 2
    G = bits[det == 1].astype(np.int64)
    # adjugate mod 2 equals the inverse since det = 1
    adj = np.zeros_like(G)
    for i in range(4):
        for j in range(4):
            minor = np.delete(np.delete(G, i, axis=1), j, axis=2)
            adj[:, j, i] = np.round(np.linalg.det(minor.astype(float))).astype(np.int64) % 2
    return G, adj


def _structure_array(N: NilAlgebra) -> np.ndarray:
    return np.array(N.c, dtype=np.int64)


def exhaustive_gl4_f2(N1: NilAlgebra, N2: NilAlgebra):
    """First gbar in GL_4(F_2), by brute force over all 20160, or None."""
    if N1.field.q != 2 or N1.dim != 4:
        raise ValueError("exhaustive oracle is for 4-dimensional algebras over F_2")
    G, _ = _gl4_f2()
    C1, C2 = _structure_array(N1), _structure_array(N2)
    lhs = np.einsum("nbj,ijc->nibc", G, C2) % 2
    lhs = np.einsum("nai,nibc->nabc", G, lhs) % 2
    rhs = np.einsum("abk,nkc->nabc", C1, G) % 2
    ok = np.nonzero((lhs == rhs).all(axis=(1, 2, 3)))[0]
    if len(ok) == 0:
        return None
    gbar = tuple(tuple(int(x) for x in r) for r in G[ok[0]])
    assert is_witness(N1, N2, gbar)
    return gbar


def gl4_f2_orbit_key(N: NilAlgebra) -> bytes:
    """The least transformed structure-constant array over all of GL_4(F_2);
    two algebras are isomorphic iff their keys agree."""
    if N.field.q != 2 or N.dim != 4:
        raise ValueError("orbit keys are for 4-dimensional algebras over F_2")
    G, Ginv = _gl4_f2()
    C = _structure_array(N)
    # v -> v g maps N onto the algebra with constants (e_a g^-1 o e_b g^-1) g
    T = np.einsum("nai,ijk->najk", Ginv, C) % 2
    T = np.einsum("nbj,najk->nabk", Ginv, T) % 2
    T = np.einsum("nabk,nkc->nabc", T, G) % 2
    flat = T.reshape(len(G), -1)
    w = 1 << np.arange(63, -1, -1, dtype=np.uint64)
    codes = (flat.astype(np.uint64) * w).sum(axis=1)
    return int(codes.min()).to_bytes(8, "big")


# -- canonical labels --------------------------------------------------------------------


@lru_cache(maxsize=None)
def _catalog_index(F: FieldSpec) -> tuple:
    from .catalog import build_cached, classify
    from .regular import to_algebra

    out = []
    for label in classify(F):
        A = to_algebra(build_cached(label, F))
        out.append((label, A, invariant_vector(A)))
    return tuple(out)


def canonical_label_with_witness(N: NilAlgebra, config: SearchConfig = DEFAULT_CONFIG):
    """(label, gbar) where gbar maps N onto the catalog algebra of label."""
    F = N.field
    iv = invariant_vector(N)
    matches = []
    for label, A, aiv in _catalog_index(F):
        if aiv != iv:
            continue
        g = are_isomorphic(N, A, config)
        if g is not None:
            matches.append((label, g))
    if not matches:
        raise NoCatalogMatch("no catalog entry is isomorphic to the input algebra")
    if len(matches) > 1:
        names = ", ".join(l.render(F) for l, _ in matches)
        print(f"nilclass4: WARNING: several catalog entries match: {names}", file=sys.stderr)
    return matches[0]


def canonical_label(N: NilAlgebra, config: SearchConfig = DEFAULT_CONFIG):
    return canonical_label_with_witness(N, config)[0]


def random_basis_change(N: NilAlgebra, rng) -> tuple[NilAlgebra, la.Mat]:
    """(N', g) with v -> v g an isomorphism N -> N'."""
    g = la.random_invertible(N.field, N.dim, rng)
    return transform_algebra(N, g), g
