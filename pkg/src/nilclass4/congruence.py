"""Projective congruence of 3x3 matrices: A ~ B iff P A P^T = lambda B for some
invertible P and nonzero scalar lambda.

Two tools live here.  `classify_congruence` partitions every matrix of a
symmetry type into orbits, using vectorized generator actions on integer
codes and connected components of the resulting graph.  `proj_congruent`
decides a single pair and returns an explicit witness via a row-by-row
backtracking search for P.
"""

from __future__ import annotations

import itertools
from dataclasses import dataclass
from functools import lru_cache

import numpy as np
from scipy.sparse import coo_matrix
from scipy.sparse.csgraph import connected_components

from . import linalg as la
from .field import FieldError, FieldSpec, squares_transversal

DEFAULT_CLASSIFY_MAX_Q = 5
DEFAULT_WITNESS_MAX_Q = 16


@dataclass(frozen=True)
class CongruenceClass:
    representative: la.Mat
    orbit_size: int
    symmetric: bool


def is_symmetric(A: la.Mat) -> bool:
    return A == la.transpose(A)


def invariants(F: FieldSpec, A: la.Mat) -> tuple:
    """Projective-congruence invariants: rank, symmetry, and the ranks of A -+ A^T."""
    At = la.transpose(A)
    return (la.rank(F, A), is_symmetric(A), la.rank(F, la.sub(F, A, At)), la.rank(F, la.add(F, A, At)))


# -- integer codes ---------------------------------------------------------------
#
# A matrix is encoded row-major with the (1,1) entry most significant, so the
# numerically least code is the lexicographically least matrix.


def _weights(q: int) -> np.ndarray:
    return q ** np.arange(8, -1, -1, dtype=np.int64)


def encode(F: FieldSpec, A: la.Mat) -> int:
    code = 0
    for x in itertools.chain.from_iterable(A):
        code = code * F.q + x
    return code


def decode(F: FieldSpec, code: int) -> la.Mat:
    flat = []
    for _ in range(9):
        code, r = divmod(code, F.q)
        flat.append(r)
    flat.reverse()
    return tuple(tuple(flat[3 * i : 3 * i + 3]) for i in range(3))


def _decode_all(q: int, codes: np.ndarray) -> np.ndarray:
    digits = (codes[:, None] // _weights(q)[None, :]) % q
    return digits.reshape(-1, 3, 3)


def _encode_all(q: int, X: np.ndarray) -> np.ndarray:
    return X.reshape(-1, 9).astype(np.int64) @ _weights(q)


def _generators(F: FieldSpec) -> list:
    """(kind, data) generating all maps X -> lambda P X P^T."""
    # an additive F_p-basis of F: the elements p^i in index form
    basis = [F.p**i for i in range(F.e)]
    omega = next(w for w in F.nonzero() if _mult_order(F, w) == F.q - 1)
    gens = [("tv", (i, j, c)) for i in range(3) for j in range(3) if i != j for c in basis]
    gens.append(("diag", omega))
    gens.append(("scalar", omega))
    return gens


def _mult_order(F: FieldSpec, w: int) -> int:
    k, x = 1, w
    while x != 1:
        x = F.mul[x][w]
        k += 1
    return k


def _apply(add: np.ndarray, mul: np.ndarray, X: np.ndarray, gen) -> np.ndarray:
    kind, data = gen
    Y = X.copy()
    if kind == "tv":
        i, j, c = data
        Y[:, i, :] = add[Y[:, i, :], mul[c][Y[:, j, :]]]
        Y[:, :, i] = add[Y[:, :, i], mul[c][Y[:, :, j]]]
    elif kind == "diag":
        Y[:, 0, :] = mul[data][Y[:, 0, :]]
        Y[:, :, 0] = mul[data][Y[:, :, 0]]
    else:
        Y = mul[data][Y]
    return Y


def apply_generator(F: FieldSpec, A: la.Mat, gen) -> la.Mat:
    add = np.array(F.add, dtype=np.int64)
    mul = np.array(F.mul, dtype=np.int64)
    Y = _apply(add, mul, np.array([A], dtype=np.int64), gen)[0]
    return tuple(tuple(int(x) for x in r) for r in Y)


@lru_cache(maxsize=None)
def _partition(F: FieldSpec, symmetric_only: bool) -> tuple:
    q = F.q
    add = np.array(F.add, dtype=np.int64)
    mul = np.array(F.mul, dtype=np.int64)
    if symmetric_only:
        # symmetric matrices are determined by their upper triangle
        tri = np.array(list(itertools.product(range(q), repeat=6)), dtype=np.int64)
        X = np.zeros((len(tri), 3, 3), dtype=np.int64)
        for k, (i, j) in enumerate([(0, 0), (0, 1), (0, 2), (1, 1), (1, 2), (2, 2)]):
            X[:, i, j] = tri[:, k]
            X[:, j, i] = tri[:, k]
        codes = np.sort(_encode_all(q, X))
    else:
        codes = np.arange(q**9, dtype=np.int64)
    X = _decode_all(q, codes)
    n = len(codes)
    rows, cols = [], []
    src = np.arange(n, dtype=np.int64)
    for gen in _generators(F):
        img = _encode_all(q, _apply(add, mul, X, gen))
        dst = np.searchsorted(codes, img) if symmetric_only else img
        rows.append(src)
        cols.append(dst)
    r = np.concatenate(rows)
    c = np.concatenate(cols)
    graph = coo_matrix((np.ones(len(r), dtype=np.int8), (r, c)), shape=(n, n)).tocsr()
    ncomp, labels = connected_components(graph, directed=True, connection="weak")
    sizes = np.bincount(labels, minlength=ncomp)
    reps = np.full(ncomp, np.iinfo(np.int64).max, dtype=np.int64)
    np.minimum.at(reps, labels, codes)
    sym = np.all(X == X.transpose(0, 2, 1), axis=(1, 2))
    rep_sym = np.zeros(ncomp, dtype=bool)
    rep_sym[labels] = sym
    order = np.argsort(reps)
    classes = tuple((int(reps[k]), int(sizes[k]), bool(rep_sym[k])) for k in order)
    return classes, codes, labels


def classify_congruence(F: FieldSpec, kind: str = "symmetric", max_q: int = DEFAULT_CLASSIFY_MAX_Q) -> list:
    """Orbit partition of all symmetric or all non-symmetric 3x3 matrices over F,
    each class represented by its lexicographically least member."""
    if kind in ("sym", "symmetric"):
        want = True
    elif kind in ("asym", "asymmetric", "nonsymmetric"):
        want = False
    else:
        raise ValueError(f"unknown matrix type {kind!r}")
    if F.q > max_q:
        raise FieldError(f"orbit partition needs q <= {max_q} (got {F.q})")
    classes, _, _ = _partition(F, want)
    return [
        CongruenceClass(decode(F, code), size, s) for code, size, s in classes if s == want
    ]


def orbit_index(F: FieldSpec, A: la.Mat, max_q: int = DEFAULT_CLASSIFY_MAX_Q) -> int:
    """Index of A's orbit in the (sorted) list of classify_congruence(F, type of A)."""
    want = is_symmetric(A)
    if F.q > max_q:
        raise FieldError(f"orbit partition needs q <= {max_q} (got {F.q})")
    classes, codes, labels = _partition(F, want)
    code = encode(F, A)
    pos = int(np.searchsorted(codes, code)) if want else code
    rep = int(codes[labels == labels[pos]].min())
    same = [c for c, _, s in classes if s == want]
    return same.index(rep)


# -- pairwise decision with a witness ---------------------------------------------


def _bilinear(F: FieldSpec, u, A, v) -> int:
    return F.sum(F.mul[u[i]][F.mul[A[i][j]][v[j]]] for i in range(3) for j in range(3))


def _search(F: FieldSpec, A: la.Mat, target: la.Mat, rows: list, vectors) -> list | None:
    k = len(rows)
    if k == 3:
        return rows
    for p in vectors:
        if la.rank(F, tuple(rows) + (p,)) != k + 1:
            continue
        if _bilinear(F, p, A, p) != target[k][k]:
            continue
        if any(
            _bilinear(F, rows[i], A, p) != target[i][k] or _bilinear(F, p, A, rows[i]) != target[k][i]
            for i in range(k)
        ):
            continue
        found = _search(F, A, target, rows + [p], vectors)
        if found is not None:
            return found
    return None


def proj_congruent(F: FieldSpec, A: la.Mat, B: la.Mat, max_q: int = DEFAULT_WITNESS_MAX_Q):
    """(P, lam) with P A P^T = lam B, or None.

    Replacing P by cP multiplies lam by c^2, so lam runs over a transversal of
    the square classes only.
    """
    if F.q > max_q:
        raise FieldError(f"congruence search needs q <= {max_q} (got {F.q})")
    if invariants(F, A) != invariants(F, B):
        return None
    vectors = [v for v in itertools.product(F.elements(), repeat=3) if any(v)]
    for lam in squares_transversal(F):
        target = la.scale(F, lam, B)
        rows = _search(F, A, target, [], vectors)
        if rows is not None:
            P = la.from_rows(rows)
            assert la.congruence_act(F, P, A) == target
            return P, lam
    return None


def rd_conjugacy(F: FieldSpec, A: la.Mat, B: la.Mat) -> bool:
    """Whether the lifted subgroups R_A and R_B are conjugate."""
    return proj_congruent(F, A, B) is not None


def catalog_orbits(F: FieldSpec) -> dict:
    """Orbit index of each listed representative, keyed by symmetry type."""
    from .catalog import pi_A_list, pi_S_list

    return {
        "symmetric": [orbit_index(F, D) for D in pi_S_list(F)],
        "asymmetric": [orbit_index(F, D) for D in pi_A_list(F)],
    }
