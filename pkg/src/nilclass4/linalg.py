"""Dense exact matrix algebra over a FieldSpec.

Matrices are tuples of row tuples of field elements; vectors are tuples.
Everything is a value: no public function mutates its arguments.  Vectors
multiply matrices from the left (``v @ M``), matching the row-vector
convention of the affine group acting on points (1, v).
"""

from __future__ import annotations

import random
from dataclasses import dataclass

from .field import FieldSpec

Vec = tuple
Mat = tuple


class LinAlgError(ValueError):
    pass


# -- constructors ---------------------------------------------------------


def zeros(n: int, m: int | None = None) -> Mat:
    m = n if m is None else m
    return tuple((0,) * m for _ in range(n))


def identity(n: int) -> Mat:
    return tuple(tuple(1 if i == j else 0 for j in range(n)) for i in range(n))


def elementary(n: int, i: int, j: int, c: int = 1) -> Mat:
    """c * E_{i,j} with 1-based indices, as in the usual notation."""
    return tuple(
        tuple(c if (r, s) == (i - 1, j - 1) else 0 for s in range(n)) for r in range(n)
    )


def from_rows(rows) -> Mat:
    return tuple(tuple(r) for r in rows)


def block_diag(*blocks: Mat) -> Mat:
    n = sum(len(b) for b in blocks)
    out = [[0] * n for _ in range(n)]
    off = 0
    for b in blocks:
        for i, row in enumerate(b):
            for j, x in enumerate(row):
                out[off + i][off + j] = x
        off += len(b)
    return from_rows(out)


def jordan_block(n: int) -> Mat:
    """Upper unitriangular Jordan block J_n."""
    return tuple(
        tuple(1 if j == i or j == i + 1 else 0 for j in range(n)) for i in range(n)
    )


def unit_vector(n: int, i: int) -> Vec:
    return tuple(1 if k == i else 0 for k in range(n))


# -- arithmetic ---------------------------------------------------------


def add(F: FieldSpec, A: Mat, B: Mat) -> Mat:
    a = F.add
    return tuple(tuple(a[x][y] for x, y in zip(ra, rb)) for ra, rb in zip(A, B))


def sub(F: FieldSpec, A: Mat, B: Mat) -> Mat:
    a, ng = F.add, F.neg
    return tuple(tuple(a[x][ng[y]] for x, y in zip(ra, rb)) for ra, rb in zip(A, B))


def scale(F: FieldSpec, c: int, A: Mat) -> Mat:
    m = F.mul[c]
    return tuple(tuple(m[x] for x in r) for r in A)


def transpose(A: Mat) -> Mat:
    return tuple(zip(*A)) if A else A


def mul(F: FieldSpec, A: Mat, B: Mat) -> Mat:
    add_t, mul_t = F.add, F.mul
    cols = list(zip(*B))
    out = []
    for row in A:
        new = []
        for col in cols:
            acc = 0
            for x, y in zip(row, col):
                if x and y:
                    acc = add_t[acc][mul_t[x][y]]
            new.append(acc)
        out.append(tuple(new))
    return tuple(out)


def vec_mat(F: FieldSpec, v: Vec, A: Mat) -> Vec:
    add_t, mul_t = F.add, F.mul
    out = [0] * (len(A[0]) if A else 0)
    for x, row in zip(v, A):
        if x:
            mx = mul_t[x]
            for j, y in enumerate(row):
                if y:
                    out[j] = add_t[out[j]][mx[y]]
    return tuple(out)


def mat_vec(F: FieldSpec, A: Mat, v: Vec) -> Vec:
    """A @ v^T as a tuple."""
    return vec_mat(F, v, transpose(A))


def vec_add(F: FieldSpec, u: Vec, v: Vec) -> Vec:
    a = F.add
    return tuple(a[x][y] for x, y in zip(u, v))


def vec_scale(F: FieldSpec, c: int, v: Vec) -> Vec:
    m = F.mul[c]
    return tuple(m[x] for x in v)


def lin_comb(F: FieldSpec, coeffs, vecs, n: int | None = None) -> Vec:
    n = len(vecs[0]) if n is None else n
    out = (0,) * n
    for c, v in zip(coeffs, vecs):
        if c:
            out = vec_add(F, out, vec_scale(F, c, v))
    return out


def mat_lin_comb(F: FieldSpec, coeffs, mats, n: int) -> Mat:
    out = zeros(n)
    for c, M in zip(coeffs, mats):
        if c:
            out = add(F, out, scale(F, c, M))
    return out


def mat_pow(F: FieldSpec, A: Mat, k: int) -> Mat:
    R = identity(len(A))
    for _ in range(k):
        R = mul(F, R, A)
    return R


def is_zero(A) -> bool:
    return all(not x for row in A for x in row)


# -- elimination --------------------------------------------------------


def rref(F: FieldSpec, A: Mat) -> tuple[Mat, list[int]]:
    """Reduced row echelon form with first-nonzero pivoting."""
    rows = [list(r) for r in A]
    add_t, mul_t, neg, inv = F.add, F.mul, F.neg, F.inv
    pivots: list[int] = []
    r = 0
    ncols = len(rows[0]) if rows else 0
    for c in range(ncols):
        piv = next((i for i in range(r, len(rows)) if rows[i][c]), None)
        if piv is None:
            continue
        rows[r], rows[piv] = rows[piv], rows[r]
        s = inv[rows[r][c]]
        rows[r] = [mul_t[s][x] for x in rows[r]]
        for i in range(len(rows)):
            if i != r and rows[i][c]:
                f = neg[rows[i][c]]
                mf = mul_t[f]
                rows[i] = [add_t[x][mf[y]] for x, y in zip(rows[i], rows[r])]
        pivots.append(c)
        r += 1
        if r == len(rows):
            break
    return from_rows(rows), pivots


def rank(F: FieldSpec, A: Mat) -> int:
    if not A or not A[0]:
        return 0
    return len(rref(F, A)[1])


def inverse(F: FieldSpec, A: Mat) -> Mat:
    n = len(A)
    aug = tuple(tuple(row) + identity(n)[i] for i, row in enumerate(A))
    R, piv = rref(F, aug)
    if piv[:n] != list(range(n)):
        raise LinAlgError("matrix is singular")
    return tuple(row[n:] for row in R)


def is_invertible(F: FieldSpec, A: Mat) -> bool:
    return rank(F, A) == len(A)


def nullspace_basis(F: FieldSpec, A: Mat) -> list[Vec]:
    """Basis of {x : A x^T = 0}."""
    ncols = len(A[0])
    R, piv = rref(F, A)
    free = [c for c in range(ncols) if c not in piv]
    basis = []
    for f in free:
        x = [0] * ncols
        x[f] = 1
        for i, pc in enumerate(piv):
            x[pc] = F.neg[R[i][f]]
        basis.append(tuple(x))
    return basis


def left_nullspace_basis(F: FieldSpec, A: Mat) -> list[Vec]:
    """Basis of {v : v A = 0}."""
    return nullspace_basis(F, transpose(A))


def row_space_basis(F: FieldSpec, vecs) -> list[Vec]:
    vecs = list(vecs)
    if not vecs:
        return []
    R, piv = rref(F, from_rows(vecs))
    return [R[i] for i in range(len(piv))]


def solve_row(F: FieldSpec, basis, v: Vec):
    """Coefficients c with sum(c_i basis_i) = v, or None."""
    if not basis:
        return () if not any(v) else None
    k = len(basis)
    aug = tuple(tuple(basis[i][j] for i in range(k)) + (v[j],) for j in range(len(v)))
    R, piv = rref(F, aug)
    if k in piv:
        return None
    c = [0] * k
    for i, pc in enumerate(piv):
        c[pc] = R[i][k]
    return tuple(c)


# -- nilpotent / unipotent structure -----------------------------------------


@dataclass(frozen=True)
class JordanType:
    partition: tuple[int, ...]

    def __post_init__(self):
        p = self.partition
        if any(s < 1 for s in p) or list(p) != sorted(p, reverse=True):
            raise ValueError(f"not a partition: {p}")


def nilpotency_degree(F: FieldSpec, M: Mat) -> int:
    """Least m >= 1 with M^m = 0 (degree of the minimal polynomial)."""
    n = len(M)
    P = M
    for m in range(1, n + 1):
        if is_zero(P):
            return m
        P = mul(F, P, M)
    raise LinAlgError("matrix is not nilpotent")


def jordan_type(F: FieldSpec, U: Mat) -> JordanType:
    """Jordan block sizes of a unipotent matrix from the ranks of (U - I)^i."""
    n = len(U)
    N = sub(F, U, identity(n))
    ranks = [n]
    P = identity(n)
    for _ in range(n):
        P = mul(F, P, N)
        ranks.append(rank(F, P))
    if ranks[-1] != 0:
        raise LinAlgError("matrix is not unipotent")
    # number of blocks of size >= i is rk(N^{i-1}) - rk(N^i)
    at_least = [ranks[i - 1] - ranks[i] for i in range(1, n + 1)]
    sizes = []
    for i in range(n, 0, -1):
        exact = at_least[i - 1] - (at_least[i] if i < n else 0)
        sizes += [i] * exact
    return JordanType(tuple(sizes))


def congruence_act(F: FieldSpec, P: Mat, A: Mat) -> Mat:
    """P A P^T."""
    if not is_invertible(F, P):
        raise LinAlgError("congruence by a singular matrix")
    return mul(F, mul(F, P, A), transpose(P))


# -- random sampling ----------------------------------------------------------


def random_matrix(F: FieldSpec, n: int, rng: random.Random, m: int | None = None) -> Mat:
    m = n if m is None else m
    return tuple(tuple(rng.randrange(F.q) for _ in range(m)) for _ in range(n))


def random_invertible(F: FieldSpec, n: int, rng: random.Random) -> Mat:
    while True:
        A = random_matrix(F, n, rng)
        if is_invertible(F, A):
            return A


# -- serialization ----------------------------------------------------------


def mat_to_json(F: FieldSpec, A: Mat) -> dict:
    return {"n": len(A), "rows": [[F.elem_to_json(x) for x in r] for r in A]}


def mat_from_json(F: FieldSpec, obj) -> Mat:
    rows = obj["rows"] if isinstance(obj, dict) else obj
    return tuple(tuple(F.elem_from_json(x) for x in r) for r in rows)


def fmt_mat(F: FieldSpec, A: Mat) -> str:
    return ";".join(",".join(F.fmt(x) for x in r) for r in A)
