"""Representative regular subgroups of AGL_4(F_q) and the full class list.

Every family is written as the lower-right 4x4 block of R - I_5, i.e. as the
matrix delta(x) whose entries are linear forms in x = (x1, x2, x3, x4).
"""

from __future__ import annotations

from dataclasses import dataclass
from functools import lru_cache

from . import linalg as la
from .field import FieldSpec, aux_transversals
from .regular import DeltaMap, RegularSubgroup, is_abelian

FAMILIES = ("S5", "S41", "S32sharp", "U1", "U2", "U3", "U4", "U5", "RD")

_DISPLAY = {"S5": "S(5)", "S41": "S(4,1)", "S32sharp": "S#(3,2)"}


class CatalogError(ValueError):
    pass


@dataclass(frozen=True)
class ClassLabel:
    family: str
    params: tuple = ()
    abelian: bool = False

    def render(self, F: FieldSpec) -> str:
        if self.family in _DISPLAY:
            return _DISPLAY[self.family]
        if self.family == "RD":
            return f"RD[{la.fmt_mat(F, self.params[0])}]"
        return f"{self.family}({','.join(F.fmt(x) for x in self.params)})"

    def params_json(self, F: FieldSpec) -> list:
        if self.family == "RD":
            return [la.mat_to_json(F, self.params[0])]
        return [F.elem_to_json(x) for x in self.params]


# Each builder returns delta(x) as a 4x4 grid of coefficient rows: entry
# (r, s) is a 4-tuple of coefficients of x1..x4.


def _forms(F: FieldSpec, forms: dict) -> tuple:
    """forms maps (row, col) (1-based) -> {var index (1-based): coeff}."""
    grid = [[[0, 0, 0, 0] for _ in range(4)] for _ in range(4)]
    for (r, s), lin in forms.items():
        for var, c in lin.items():
            grid[r - 1][s - 1][var - 1] = F.add[grid[r - 1][s - 1][var - 1]][c]
    return grid


def _deltas_from_forms(F: FieldSpec, grid) -> tuple:
    return tuple(
        tuple(tuple(grid[r][s][var] for s in range(4)) for r in range(4)) for var in range(4)
    )


def _s5(F):
    return {(1, 2): {1: 1}, (1, 3): {2: 1}, (1, 4): {3: 1}, (2, 3): {1: 1}, (2, 4): {2: 1}, (3, 4): {1: 1}}


def _s41(F):
    return {(1, 2): {1: 1}, (1, 3): {2: 1}, (2, 3): {1: 1}}


def _s32sharp(F):
    return {(1, 2): {1: 1}, (1, 4): {2: 1}, (2, 4): {1: 1}, (3, 4): {3: 1}}


def _u1(F, alpha, beta):
    return {(1, 3): {1: 1}, (1, 4): {2: 1}, (2, 3): {2: beta}, (2, 4): {1: 1, 2: alpha}}


def _u2(F, a1, a3, g1, g3, zeta):
    return {
        (1, 2): {1: zeta},
        (1, 4): {1: a1, 2: 1, 3: a3},
        (2, 4): {1: 1},
        (3, 4): {1: g1, 3: g3},
    }


def _u3(F, a3, g1, g3):
    return {(1, 2): {1: 1}, (1, 4): {3: a3}, (3, 4): {1: g1, 3: g3}}


def _u4(F, rho, b1, b2):
    return {(1, 3): {1: 1}, (1, 4): {2: 1}, (2, 3): {2: rho}, (2, 4): {1: b1, 2: b2}}


def _u5(F, a1, a2, b2):
    return {(1, 3): {2: 1}, (1, 4): {1: a1, 2: a2}, (2, 3): {1: 1}, (2, 4): {2: b2}}


def _rd(F, D):
    return {(i, 4): {j: D[i - 1][j - 1] for j in (1, 2, 3)} for i in (1, 2, 3)}


_BUILDERS = {
    "S5": _s5,
    "S41": _s41,
    "S32sharp": _s32sharp,
    "U1": _u1,
    "U2": _u2,
    "U3": _u3,
    "U4": _u4,
    "U5": _u5,
    "RD": _rd,
}

_ARITY = {"S5": 0, "S41": 0, "S32sharp": 0, "U1": 2, "U2": 5, "U3": 3, "U4": 3, "U5": 3, "RD": 1}


def family_delta(F: FieldSpec, family: str, params: tuple) -> DeltaMap:
    """The general family member, without side-condition checks."""
    if family not in _BUILDERS:
        raise CatalogError(f"unknown family {family!r}")
    if len(params) != _ARITY[family]:
        raise CatalogError(f"{family} takes {_ARITY[family]} parameters")
    forms = _BUILDERS[family](F, *params)
    return DeltaMap(F, _deltas_from_forms(F, _forms(F, forms)))


def check_label(label: ClassLabel, F: FieldSpec) -> None:
    """Raise CatalogError when the label's side conditions fail over F."""
    fam, ps = label.family, label.params
    T = aux_transversals(F)
    if fam == "U1" and ps[0] == 1 and F.p != 2:
        raise CatalogError("U1(1, eps) requires characteristic 2")
    if fam == "U3" and ps[0] == 1 and ps[1] == 1:
        raise CatalogError("U3(1, lambda, 0) requires lambda != 1")
    if fam == "U4":
        if ps[0] not in T.table_squares:
            raise CatalogError("U4 requires rho in the square-class transversal")
        if ps[1] == 1:
            raise CatalogError("U4 requires beta1 != 1")
    if fam == "U5" and F.p != 2:
        raise CatalogError("U5 requires characteristic 2")
    if fam == "RD" and (len(ps[0]) != 3 or any(len(r) != 3 for r in ps[0])):
        raise CatalogError("RD needs a 3x3 matrix")


def build(label: ClassLabel, F: FieldSpec) -> RegularSubgroup:
    check_label(label, F)
    R = RegularSubgroup(family_delta(F, label.family, label.params))
    if is_abelian(R) != label.abelian:
        raise CatalogError(f"{label.render(F)}: abelian flag does not match the subgroup")
    return R


# -- projective congruence representatives -------------------------------------


def _E(F, *terms):
    """Sum of c * E_{i,j} for terms (c, i, j)."""
    M = [[0] * 3 for _ in range(3)]
    for c, i, j in terms:
        M[i - 1][j - 1] = F.add[M[i - 1][j - 1]][c]
    return la.from_rows(M)


def pi_S_list(F: FieldSpec) -> list:
    xi = aux_transversals(F).table_xi
    if F.p == 2:
        return [
            _E(F),
            _E(F, (1, 1, 1)),
            _E(F, (1, 1, 1), (1, 2, 2)),
            _E(F, (1, 2, 3), (1, 3, 2)),
            la.identity(3),
        ]
    return [
        _E(F),
        _E(F, (1, 1, 1)),
        _E(F, (1, 1, 1), (1, 2, 2)),
        _E(F, (1, 1, 1), (xi, 2, 2)),
        la.identity(3),
    ]


def pi_A_list(F: FieldSpec) -> list:
    xi = aux_transversals(F).table_xi
    m1 = F.neg[1]
    two = F.from_int(2)
    lam = list(F.elements())
    if F.p == 2:
        return (
            [_E(F, (1, 2, 2), (1, 2, 3), (l, 3, 3)) for l in lam]
            + [_E(F, (1, 1, 1), (1, 2, 2), (1, 2, 3), (l, 3, 3)) for l in lam]
            + [
                _E(F, (1, 1, 3), (1, 2, 3), (1, 3, 2)),
                _E(F, (1, 1, 1), (1, 1, 3), (1, 2, 3), (1, 3, 2)),
                _E(F, (xi, 1, 1), (1, 1, 3), (1, 2, 3), (1, 3, 2), (1, 3, 3)),
            ]
        )
    return (
        [
            _E(F, (1, 2, 3), (m1, 3, 2)),
            _E(F, (1, 1, 1), (1, 2, 3), (m1, 3, 2)),
        ]
        + [_E(F, (1, 2, 2), (1, 2, 3), (l, 3, 3)) for l in lam]
        + [_E(F, (1, 1, 1), (1, 2, 2), (1, 2, 3), (l, 3, 3)) for l in lam]
        + [
            _E(F, (xi, 1, 1), (1, 2, 2), (two, 2, 3), (1, 3, 3)),
            _E(F, (1, 1, 3), (1, 2, 3), (1, 3, 2)),
            _E(F, (1, 1, 1), (1, 1, 3), (1, 2, 3), (1, 3, 2)),
        ]
    )


# -- classification ------------------------------------------------------------


def abelian_labels(F: FieldSpec) -> list:
    T = aux_transversals(F)
    out = [ClassLabel("S5", (), True), ClassLabel("S41", (), True), ClassLabel("S32sharp", (), True)]
    out.append(ClassLabel("U1", (0, 0), True))
    if F.p == 2:
        out += [ClassLabel("U1", (1, eps), True) for eps in T.b_set]
    else:
        out += [ClassLabel("U1", (0, rho), True) for rho in T.table_squares]
    out += [ClassLabel("RD", (D,), True) for D in pi_S_list(F)]
    return out


def nonabelian_labels(F: FieldSpec) -> list:
    from .equiv import a_rho_transversal

    T = aux_transversals(F)
    out = [ClassLabel("U2", (0, 1, 0, 1, 1)), ClassLabel("U2", (0, 1, 0, 0, 1))]
    out += [ClassLabel("U3", (0, 1, 0)), ClassLabel("U3", (0, 1, 1))]
    out += [ClassLabel("U3", (1, lam, 0)) for lam in F.elements() if lam != 1]
    for rho in T.table_squares:
        out += [ClassLabel("U4", (rho, b1, b2)) for b1, b2 in a_rho_transversal(F, rho)]
    if F.p == 2:
        out += [ClassLabel("U5", (1, 1, eps)) for eps in T.b_set]
    out += [ClassLabel("RD", (D,)) for D in pi_A_list(F)]
    return out


@lru_cache(maxsize=None)
def _classify(F: FieldSpec) -> tuple:
    return tuple(abelian_labels(F) + nonabelian_labels(F))


def classify(F: FieldSpec, abelian_only: bool = False, nonabelian_only: bool = False) -> list:
    """Every class of 4-dimensional nilpotent F_q-algebras, abelian entries first, then nonabelian."""
    labels = list(_classify(F))
    if abelian_only:
        labels = [l for l in labels if l.abelian]
    if nonabelian_only:
        labels = [l for l in labels if not l.abelian]
    return labels


def expected_counts(q: int) -> tuple[int, int]:
    """(abelian, nonabelian) class counts over F_q."""
    return 11, (5 * q + 9 if q % 2 else 5 * q + 6)


@lru_cache(maxsize=None)
def build_cached(label: ClassLabel, F: FieldSpec) -> RegularSubgroup:
    return build(label, F)
