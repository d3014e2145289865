"""Regular subgroups of AGL_n(F) with linear delta, and nilpotent algebras.

A subgroup R is stored through the images delta(e_1), ..., delta(e_n); its
elements are mu(v) = [[1, v], [0, I + delta(v)]].  The associated nilpotent
algebra has product v o w = v delta(w), so structure constants are
c[i][j] = e_i delta(e_j) and delta(e_j) is right multiplication by e_j.
"""

from __future__ import annotations

import itertools
from dataclasses import dataclass
from functools import cached_property

import numpy as np

from . import linalg as la
from . import npfield as npf
from .field import FieldSpec, field_from_json
from .linalg import Mat, Vec


class InvalidSubgroup(ValueError):
    pass


# (d(Z(R)), r(Z(R))) -> Jordan type of a central element realizing it
CASE_TABLE = {
    (5, 4): (5,),
    (4, 3): (4, 1),
    (3, 3): (3, 2),
    (3, 2): (3, 1, 1),
    (2, 2): (2, 2, 1),
    (2, 1): (2, 1, 1, 1),
}


@dataclass(frozen=True)
class InvariantTriple:
    d: int
    r: int
    k: int

    def as_dict(self) -> dict:
        return {"d": self.d, "r": self.r, "k": self.k}


@dataclass(frozen=True)
class DeltaMap:
    field: FieldSpec
    deltas: tuple  # n matrices, deltas[i] = delta(e_{i+1})

    @property
    def n(self) -> int:
        return len(self.deltas)

    def __call__(self, v: Vec) -> Mat:
        return la.mat_lin_comb(self.field, v, self.deltas, self.n)

    def act(self, v: Vec, w: Vec) -> Vec:
        """v delta(w)."""
        return la.vec_mat(self.field, v, self(w))


def all_vectors(F: FieldSpec, n: int):
    return itertools.product(F.elements(), repeat=n)


def span_vectors(F: FieldSpec, basis):
    """Every vector in the span of basis (with repetition-free enumeration)."""
    n = len(basis[0]) if basis else 0
    if not basis:
        yield ()
        return
    for cs in itertools.product(F.elements(), repeat=len(basis)):
        yield la.lin_comb(F, cs, basis, n)


def projective_points(F: FieldSpec, basis):
    """One nonzero vector per line of span(basis): first nonzero coordinate is 1."""
    k = len(basis)
    if not basis:
        return
    n = len(basis[0])
    for lead in range(k):
        for rest in itertools.product(F.elements(), repeat=k - lead - 1):
            cs = (0,) * lead + (1,) + rest
            yield la.lin_comb(F, cs, basis, n)


def check_closure(dm: DeltaMap) -> bool:
    """delta(v delta(w)) == delta(v) delta(w) on all basis pairs."""
    F, n = dm.field, dm.n
    for i in range(n):
        ei = la.unit_vector(n, i)
        for j in range(n):
            lhs = dm(la.vec_mat(F, ei, dm.deltas[j]))
            rhs = la.mul(F, dm.deltas[i], dm.deltas[j])
            if lhs != rhs:
                return False
    return True


def check_unipotent(dm: DeltaMap, enumerate_limit: int = 625) -> bool:
    """Every delta(v) nilpotent.

    Enumerates F^n when q^n <= enumerate_limit; otherwise checks basis images
    and relies on nilpotency of the associated algebra (for closed delta,
    right multiplications of a nilpotent algebra are nilpotent).
    """
    F, n = dm.field, dm.n
    if F.q**n <= enumerate_limit:
        for v in projective_points(F, [la.unit_vector(n, i) for i in range(n)]):
            if not la.is_zero(la.mat_pow(F, dm(v), n)):
                return False
        return True
    if any(not la.is_zero(la.mat_pow(F, d, n)) for d in dm.deltas):
        return False
    return _algebra_nilpotent(F, _structure_from_deltas(dm))


@dataclass(frozen=True)
class RegularSubgroup:
    delta: DeltaMap

    def __post_init__(self):
        if not check_closure(self.delta):
            raise InvalidSubgroup("delta violates the closure law")
        if not check_unipotent(self.delta):
            raise InvalidSubgroup("delta(v) is not nilpotent for some v")

    @classmethod
    def from_deltas(cls, F: FieldSpec, deltas) -> "RegularSubgroup":
        return cls(DeltaMap(F, tuple(la.from_rows(d) for d in deltas)))

    @property
    def field(self) -> FieldSpec:
        return self.delta.field

    @property
    def n(self) -> int:
        return self.delta.n

    def __eq__(self, other):
        return isinstance(other, RegularSubgroup) and self.delta == other.delta

    def __hash__(self):
        return hash(self.delta)


def mu(R: RegularSubgroup, v: Vec) -> Mat:
    F, n = R.field, R.n
    d = la.add(F, la.identity(n), R.delta(v))
    return ((1,) + tuple(v),) + tuple((0,) + row for row in d)


def is_abelian(R: RegularSubgroup) -> bool:
    dm, n = R.delta, R.n
    for i in range(n):
        for j in range(i + 1, n):
            if dm.deltas[j][i] != dm.deltas[i][j]:  # e_i delta(e_j) vs e_j delta(e_i)
                return False
    return True


def center_subspace(R: RegularSubgroup) -> list[Vec]:
    """Basis of {v : v delta(e_j) = e_j delta(v) for all j}."""
    F, n, ds = R.field, R.n, R.delta.deltas
    # row i of the system: coefficient of v_i, columns indexed by (j, k)
    rows = []
    for i in range(n):
        row = []
        for j in range(n):
            for k in range(n):
                row.append(F.sub(ds[j][i][k], ds[i][j][k]))
        rows.append(tuple(row))
    basis = la.left_nullspace_basis(F, tuple(rows))
    return la.row_space_basis(F, basis) if basis else []


def _d_and_r(F: FieldSpec, dm: DeltaMap, v: Vec) -> tuple[int, int]:
    """(degree of min poly, rank) of mu(v) - I = [[0, v], [0, delta(v)]]."""
    D = dm(v)
    r = la.rank(F, (tuple(v),) + D)
    # (mu(v) - I)^m = [[0, v D^(m-1)], [0, D^m]]
    w, P = tuple(v), D
    m = 1
    while any(w) or not la.is_zero(P):
        w = la.vec_mat(F, w, D)
        P = la.mul(F, P, D)
        m += 1
        if m > dm.n + 2:
            raise InvalidSubgroup("mu(v) is not unipotent")
    return m, r


def _batch_d_and_r(dm: DeltaMap, points: list) -> tuple[int, int]:
    """max over points of (d, r) as in _d_and_r, on all points at once."""
    T = npf.tables(dm.field)
    V = np.array(points, dtype=np.int64)
    D = npf.batch_lincomb(T, V, np.array(dm.deltas, dtype=np.int64))
    r = int(npf.batch_rank(T, np.concatenate([V[:, None, :], D], axis=1)).max())
    w, P = V, D
    m = 1
    while w.any() or P.any():
        w = npf.batch_vecmat(T, w, D)
        P = npf.batch_matmul(T, P, D)
        m += 1
        if m > dm.n + 2:
            raise InvalidSubgroup("mu(v) is not unipotent")
    return m, r


def invariants(R: RegularSubgroup, which: str = "full") -> InvariantTriple:
    """(d, r, k) of R (which='full') or of its center (which='center')."""
    F, n = R.field, R.n
    if which == "full":
        basis = [la.unit_vector(n, i) for i in range(n)]
    elif which == "center":
        basis = center_subspace(R)
    else:
        raise ValueError(f"unknown subgroup part {which!r}")
    # d and r are constant on lines through 0
    points = list(projective_points(F, basis))
    d, r = _batch_d_and_r(R.delta, points) if points else (1, 0)
    images = [sum(R.delta(b), ()) for b in basis]
    k = len(basis) - (la.rank(F, tuple(images)) if images else 0)
    return InvariantTriple(d, r, k)


def central_jordan_types(R: RegularSubgroup) -> set:
    F = R.field
    return {la.jordan_type(F, mu(R, v)).partition for v in span_vectors(F, center_subspace(R))}


# -- algebras ------------------------------------------------------------------


def _structure_from_deltas(dm: DeltaMap):
    n = dm.n
    return tuple(tuple(dm.deltas[j][i] for j in range(n)) for i in range(n))


def _algebra_nilpotent(F: FieldSpec, c) -> bool:
    n = len(c)
    power = [la.unit_vector(n, i) for i in range(n)]
    for _ in range(n + 1):
        if not power:
            return True
        prods = [_product(F, c, x, la.unit_vector(n, j)) for x in power for j in range(n)]
        power = la.row_space_basis(F, [p for p in prods if any(p)])
    return not power


def _product(F: FieldSpec, c, v: Vec, w: Vec) -> Vec:
    n = len(v)
    out = (0,) * n
    for i, vi in enumerate(v):
        if not vi:
            continue
        for j, wj in enumerate(w):
            if wj:
                out = la.vec_add(F, out, la.vec_scale(F, F.mul[vi][wj], c[i][j]))
    return out


@dataclass(frozen=True)
class NilAlgebra:
    """Structure constants: c[i][j] is the coordinate vector of e_i o e_j."""

    field: FieldSpec
    c: tuple

    def __post_init__(self):
        n = len(self.c)
        if any(len(r) != n or any(len(v) != n for v in r) for r in self.c):
            raise InvalidSubgroup("structure constants must be an n x n x n array")

    @property
    def dim(self) -> int:
        return len(self.c)

    def mul(self, v: Vec, w: Vec) -> Vec:
        return _product(self.field, self.c, v, w)

    @cached_property
    def sparse(self) -> tuple:
        """Nonzero structure constants as (i, j, k, c_ij^k)."""
        n = self.dim
        return tuple(
            (i, j, k, self.c[i][j][k])
            for i in range(n)
            for j in range(n)
            for k in range(n)
            if self.c[i][j][k]
        )

    def is_associative(self) -> bool:
        n = self.dim
        es = [la.unit_vector(n, i) for i in range(n)]
        for a, b, d in itertools.product(es, repeat=3):
            if self.mul(self.mul(a, b), d) != self.mul(a, self.mul(b, d)):
                return False
        return True

    def is_nilpotent(self) -> bool:
        return _algebra_nilpotent(self.field, self.c)

    def powers(self) -> list[list[Vec]]:
        """Bases of N, N^2, ..., down to (and excluding) the zero power."""
        n = self.dim
        F = self.field
        out = [[la.unit_vector(n, i) for i in range(n)]]
        while out[-1]:
            prods = [self.mul(x, la.unit_vector(n, j)) for x in out[-1] for j in range(n)]
            nxt = la.row_space_basis(F, [p for p in prods if any(p)])
            if len(out) > n + 1:
                raise InvalidSubgroup("algebra is not nilpotent")
            out.append(nxt)
        return out[:-1]

    def validate(self) -> "NilAlgebra":
        if not self.is_associative():
            raise InvalidSubgroup("algebra is not associative")
        if not self.is_nilpotent():
            raise InvalidSubgroup("algebra is not nilpotent")
        return self


def zero_algebra(F: FieldSpec, n: int = 4) -> NilAlgebra:
    return NilAlgebra(F, tuple(tuple((0,) * n for _ in range(n)) for _ in range(n)))


def to_algebra(R: RegularSubgroup) -> NilAlgebra:
    return NilAlgebra(R.field, _structure_from_deltas(R.delta))


def from_algebra(N: NilAlgebra) -> RegularSubgroup:
    N.validate()
    n = N.dim
    deltas = tuple(tuple(N.c[i][j] for i in range(n)) for j in range(n))
    return RegularSubgroup(DeltaMap(N.field, deltas))


def conjugate(R: RegularSubgroup, gbar: Mat) -> RegularSubgroup:
    """R^g for g = diag(1, gbar): delta'(w) = gbar^-1 delta(w gbar^-1) gbar."""
    F, n = R.field, R.n
    ginv = la.inverse(F, gbar)
    deltas = tuple(la.mul(F, la.mul(F, ginv, R.delta(ginv[j])), gbar) for j in range(n))
    return RegularSubgroup(DeltaMap(F, deltas))


def transform_algebra(N: NilAlgebra, gbar: Mat) -> NilAlgebra:
    """The algebra on F^n for which v -> v gbar is an isomorphism from N."""
    F, n = N.field, N.dim
    ginv = la.inverse(F, gbar)
    c = tuple(
        tuple(la.vec_mat(F, N.mul(ginv[i], ginv[j]), gbar) for j in range(n)) for i in range(n)
    )
    return NilAlgebra(F, c)


def lift_condition(F: FieldSpec, R3: DeltaMap, D: Mat) -> bool:
    """D (e_j delta(e_i))^T == delta(e_j) D e_i^T for all i, j."""
    m = R3.n
    for i in range(m):
        for j in range(m):
            lhs = la.mat_vec(F, D, R3.deltas[i][j])
            rhs = la.mat_vec(F, R3.deltas[j], tuple(D[r][i] for r in range(m)))
            if lhs != rhs:
                return False
    return True


def build_lift(R3: DeltaMap, D: Mat) -> RegularSubgroup:
    """The (m+1)-dimensional subgroup with blocks [[1, X, x], [0, I + delta(X), D X^T], [0, 0, 1]]."""
    F, m = R3.field, R3.n
    if not lift_condition(F, R3, D):
        raise InvalidSubgroup("D does not satisfy the lifting condition")
    deltas = []
    for j in range(m):
        rows = [tuple(R3.deltas[j][i]) + (D[i][j],) for i in range(m)]
        rows.append((0,) * (m + 1))
        deltas.append(tuple(rows))
    deltas.append(la.zeros(m + 1))
    return RegularSubgroup(DeltaMap(F, tuple(deltas)))


def translation_map(F: FieldSpec, n: int) -> DeltaMap:
    return DeltaMap(F, tuple(la.zeros(n) for _ in range(n)))


# -- serialization -----------------------------------------------------------


def subgroup_to_json(R: RegularSubgroup) -> dict:
    F = R.field
    return {"field": F.to_json(), "deltas": [la.mat_to_json(F, d) for d in R.delta.deltas]}


def algebra_to_json(N: NilAlgebra) -> dict:
    F = N.field
    return {
        "field": F.to_json(),
        "dim": N.dim,
        "c": [[[F.elem_to_json(x) for x in v] for v in row] for row in N.c],
    }


def algebra_from_json(obj: dict) -> NilAlgebra:
    """Accepts either the algebra or the subgroup JSON shape."""
    F = field_from_json(obj["field"])
    if "deltas" in obj:
        deltas = tuple(la.mat_from_json(F, d) for d in obj["deltas"])
        return to_algebra(RegularSubgroup(DeltaMap(F, deltas)))
    c = tuple(
        tuple(tuple(F.elem_from_json(x) for x in v) for v in row) for row in obj["c"]
    )
    N = NilAlgebra(F, c)
    if "dim" in obj and obj["dim"] != N.dim:
        raise InvalidSubgroup("dim does not match the structure constants")
    return N.validate()
