"""Finite fields F_q, q = p^e, and the transversal sets used to parameterize
the representative tables.

Elements are plain ints in ``range(q)``.  The int ``sum(c_i * p**i)`` encodes
the polynomial ``sum(c_i * a**i)`` reduced modulo the field modulus, so 0 and 1
are the additive and multiplicative identities and the enumeration order is
just integer order.  All arithmetic goes through precomputed tables.
"""

from __future__ import annotations

import itertools
import os
from dataclasses import dataclass, field
from functools import lru_cache

Fe = int

DEFAULT_MAX_Q = 16


class FieldError(ValueError):
    pass


def max_q_bound() -> int:
    env = os.environ.get("NILCLASS4_MAX_Q")
    return int(env) if env else DEFAULT_MAX_Q


def is_prime(n: int) -> bool:
    if n < 2:
        return False
    return all(n % d for d in range(2, int(n**0.5) + 1))


def prime_power(q: int) -> tuple[int, int]:
    """Return (p, e) with p**e == q, or raise FieldError."""
    for p in range(2, q + 1):
        if q % p == 0:
            e, r = 0, q
            while r % p == 0:
                r //= p
                e += 1
            if r != 1:
                raise FieldError(f"{q} is not a prime power")
            return p, e
    raise FieldError(f"{q} is not a prime power")


# -- polynomials over F_p, coefficient lists low degree first ---------------


def _poly_trim(a: list[int]) -> list[int]:
    while a and a[-1] == 0:
        a.pop()
    return a


def _poly_mod(a: list[int], m: list[int], p: int) -> list[int]:
    a = _poly_trim(list(a))
    inv_lead = pow(m[-1], p - 2, p)
    while len(a) >= len(m):
        c = a[-1] * inv_lead % p
        shift = len(a) - len(m)
        for i, mi in enumerate(m):
            a[shift + i] = (a[shift + i] - c * mi) % p
        _poly_trim(a)
    return a


def _monic_polys(p: int, deg: int):
    for low in itertools.product(range(p), repeat=deg):
        yield list(low) + [1]


def is_irreducible(poly: list[int], p: int) -> bool:
    """Trial division by every monic polynomial of degree 1..deg/2."""
    deg = len(poly) - 1
    for d in range(1, deg // 2 + 1):
        for div in _monic_polys(p, d):
            if not _poly_mod(poly, div, p):
                return False
    return True


def smallest_irreducible(p: int, e: int) -> tuple[int, ...]:
    # low-degree coefficient is the most significant key
    for low in itertools.product(range(p), repeat=e):
        poly = list(low) + [1]
        if is_irreducible(poly, p):
            return tuple(poly)
    raise FieldError(f"no irreducible polynomial of degree {e} over F_{p}")  # pragma: no cover


# -- the field ---------------------------------------------------------------


@dataclass(frozen=True, eq=False)
class FieldSpec:
    """A concrete finite field with lookup tables.

    Two specs compare equal iff they have the same (p, e, modulus).
    """

    p: int
    e: int
    modulus: tuple[int, ...]
    q: int = field(init=False)
    add: tuple[tuple[int, ...], ...] = field(init=False, repr=False)
    mul: tuple[tuple[int, ...], ...] = field(init=False, repr=False)
    neg: tuple[int, ...] = field(init=False, repr=False)
    inv: tuple[int, ...] = field(init=False, repr=False)

    def __post_init__(self):
        p, e = self.p, self.e
        q = p**e
        object.__setattr__(self, "q", q)
        coeffs = [self.coeffs(x) for x in range(q)]
        enc = {tuple(c): x for x, c in enumerate(coeffs)}
        add = tuple(
            tuple(enc[tuple((a + b) % p for a, b in zip(ca, cb))] for cb in coeffs)
            for ca in coeffs
        )
        mul_rows = []
        for ca in coeffs:
            row = []
            for cb in coeffs:
                prod = [0] * (2 * e - 1)
                for i, a in enumerate(ca):
                    if a:
                        for j, b in enumerate(cb):
                            prod[i + j] = (prod[i + j] + a * b) % p
                r = _poly_mod(prod, list(self.modulus), p)
                r = r + [0] * (e - len(r))
                row.append(enc[tuple(r)])
            mul_rows.append(tuple(row))
        mul = tuple(mul_rows)
        neg = tuple(enc[tuple((-a) % p for a in c)] for c in coeffs)
        inv = [0] * q
        for a in range(1, q):
            inv[a] = mul[a].index(1)
        object.__setattr__(self, "add", add)
        object.__setattr__(self, "mul", mul)
        object.__setattr__(self, "neg", neg)
        object.__setattr__(self, "inv", tuple(inv))

    def __eq__(self, other):
        return isinstance(other, FieldSpec) and (self.p, self.e, self.modulus) == (
            other.p,
            other.e,
            other.modulus,
        )

    def __hash__(self):
        return hash((self.p, self.e, self.modulus))

    def __repr__(self):
        return f"FieldSpec(q={self.q}, modulus={list(self.modulus)})"

    # encoding
    def coeffs(self, x: Fe) -> list[int]:
        out = []
        for _ in range(self.e):
            out.append(x % self.p)
            x //= self.p
        return out

    def from_coeffs(self, cs) -> Fe:
        cs = list(cs)
        if len(cs) != self.e or any(not 0 <= c < self.p for c in cs):
            raise FieldError(f"bad coefficient vector {cs} for F_{self.q}")
        return sum(c * self.p**i for i, c in enumerate(cs))

    def from_int(self, n: int) -> Fe:
        """Image of the integer n under Z -> F_p -> F."""
        return n % self.p

    def elements(self) -> range:
        return range(self.q)

    def nonzero(self) -> range:
        return range(1, self.q)

    # arithmetic
    def sub(self, a: Fe, b: Fe) -> Fe:
        return self.add[a][self.neg[b]]

    def div(self, a: Fe, b: Fe) -> Fe:
        if b == 0:
            raise ZeroDivisionError("division by zero in finite field")
        return self.mul[a][self.inv[b]]

    def pow(self, a: Fe, n: int) -> Fe:
        if n < 0:
            a, n = self.inv[a], -n
        r = 1
        for _ in range(n):
            r = self.mul[r][a]
        return r

    def sum(self, xs) -> Fe:
        acc = 0
        add = self.add
        for x in xs:
            acc = add[acc][x]
        return acc

    def is_square(self, a: Fe) -> bool:
        return any(self.mul[w][w] == a for w in self.elements())

    def square_roots(self, a: Fe) -> list[Fe]:
        return [w for w in self.elements() if self.mul[w][w] == a]

    def roots(self, coeffs) -> list[Fe]:
        """Roots in F of the polynomial sum(coeffs[i] t^i)."""
        return [t for t in self.elements() if self.eval_poly(coeffs, t) == 0]

    def eval_poly(self, coeffs, t: Fe) -> Fe:
        acc = 0
        for c in reversed(list(coeffs)):
            acc = self.add[self.mul[acc][t]][c]
        return acc

    def fmt(self, a: Fe) -> str:
        """Human-readable element: an integer for prime fields, else a polynomial in `a`."""
        if self.e == 1:
            return str(a)
        terms = []
        for i, c in reversed(list(enumerate(self.coeffs(a)))):
            if not c:
                continue
            mono = "" if i == 0 else ("a" if i == 1 else f"a^{i}")
            if not mono:
                terms.append(str(c))
            else:
                terms.append(mono if c == 1 else f"{c}{mono}")
        return "+".join(terms) if terms else "0"

    def parse(self, text: str) -> Fe:
        """Inverse of fmt.  Plain integers are residues mod p in a prime field
        and element indices in an extension field."""
        text = text.replace(" ", "")
        if not text:
            raise FieldError("empty field element")
        if "a" not in text:
            n = int(text)
            if self.e == 1:
                return self.from_int(n)
            if not 0 <= n < self.q:
                raise FieldError(f"element index {n} out of range for F_{self.q}")
            return n
        if self.e == 1:
            raise FieldError(f"{text!r}: prime fields take integers")
        cs = [0] * self.e
        for term in text.split("+"):
            if "a" in term:
                coef, _, power = term.partition("a")
                i = int(power[1:]) if power.startswith("^") else 1
                c = int(coef) if coef else 1
            else:
                i, c = 0, int(term)
            if not 0 <= i < self.e:
                raise FieldError(f"{text!r}: degree {i} too large for F_{self.q}")
            cs[i] = (cs[i] + c) % self.p
        return self.from_coeffs(cs)

    def to_json(self) -> dict:
        return {"p": self.p, "e": self.e, "modulus": list(self.modulus)}

    def elem_to_json(self, a: Fe) -> list[int]:
        return self.coeffs(a)

    def elem_from_json(self, obj) -> Fe:
        if isinstance(obj, int):
            if not 0 <= obj < self.q:
                raise FieldError(f"element {obj} out of range for F_{self.q}")
            return obj
        return self.from_coeffs(obj)


@lru_cache(maxsize=None)
def _make_field(p: int, e: int) -> FieldSpec:
    return FieldSpec(p, e, smallest_irreducible(p, e))


def make_field(p: int, e: int = 1, max_q: int | None = None) -> FieldSpec:
    """F_{p^e} with the lexicographically smallest monic irreducible modulus."""
    if not is_prime(p):
        raise FieldError(f"{p} is not prime")
    if e < 1:
        raise FieldError("extension degree must be >= 1")
    bound = max_q_bound() if max_q is None else max_q
    if p**e > bound:
        raise FieldError(f"q = {p**e} exceeds the configured bound {bound}")
    return _make_field(p, e)


def field_of_order(q: int, max_q: int | None = None) -> FieldSpec:
    p, e = prime_power(q)
    return make_field(p, e, max_q)


def field_from_json(obj: dict) -> FieldSpec:
    F = make_field(int(obj["p"]), int(obj.get("e", 1)))
    if "modulus" in obj and tuple(obj["modulus"]) != F.modulus:
        mod = tuple(int(c) for c in obj["modulus"])
        if len(mod) != F.e + 1 or mod[-1] != 1 or not is_irreducible(list(mod), F.p):
            raise FieldError(f"invalid modulus {list(mod)}")
        return FieldSpec(F.p, F.e, mod)
    return F


# -- transversals -------------------------------------------------------------


def squares_transversal(F: FieldSpec) -> list[Fe]:
    """{1} for even q; {1, smallest non-square} for odd q."""
    if F.p == 2:
        return [1]
    sq = {F.mul[w][w] for w in F.elements()}
    return [1, min(x for x in F.nonzero() if x not in sq)]


def artin_schreier_image(F: FieldSpec) -> set[Fe]:
    return {F.add[F.mul[x][x]][x] for x in F.elements()}


def artin_schreier_transversal(F: FieldSpec) -> list[Fe]:
    """Transversal of {l^2 + l} in (F, +): {0, eps} with x^2 + x + eps irreducible."""
    if F.p != 2:
        raise FieldError("B(F) undefined for odd characteristic")
    image = artin_schreier_image(F)
    reps, covered = [], set()
    for x in F.elements():
        if x in covered:
            continue
        reps.append(x)
        covered |= {F.add[x][b] for b in image}
    return reps


class _DSU:
    def __init__(self, items):
        self.parent = {x: x for x in items}

    def find(self, x):
        while self.parent[x] != x:
            self.parent[x] = self.parent[self.parent[x]]
            x = self.parent[x]
        return x

    def union(self, a, b):
        ra, rb = self.find(a), self.find(b)
        if ra != rb:
            # the smaller element stays root so roots are class minima
            if rb < ra:
                ra, rb = rb, ra
            self.parent[rb] = ra

    def classes(self):
        out: dict = {}
        for x in self.parent:
            out.setdefault(self.find(x), []).append(x)
        return out


def star_transversal(F: FieldSpec) -> list[Fe]:
    """Representatives of the classes rho1 ~ (x1^2 + x2^2 rho1)/(x3^2 + x4^2 rho1)."""
    if F.p != 2:
        raise FieldError("C(F) is only defined in characteristic 2")
    squares = squares_transversal(F)
    dsu = _DSU(squares)
    mul, add = F.mul, F.add
    sq = [mul[x][x] for x in F.elements()]
    for r1 in squares:
        for x1, x2, x3, x4 in itertools.product(F.elements(), repeat=4):
            if mul[x1][x4] == mul[x2][x3]:
                continue
            den = add[sq[x3]][mul[sq[x4]][r1]]
            if den == 0:
                continue
            r2 = F.div(add[sq[x1]][mul[sq[x2]][r1]], den)
            if r2 in dsu.parent:
                dsu.union(r1, r2)
    return sorted(dsu.classes())


def _half_set(F: FieldSpec, pool, partner) -> list[Fe]:
    """Pick the earlier element of each pair {x, partner(x)} inside pool."""
    chosen, used = [], set()
    for x in sorted(pool):
        if x in used:
            continue
        chosen.append(x)
        used.add(x)
        used.add(partner(x))
    return chosen


@dataclass(frozen=True)
class Transversals:
    squares: tuple[Fe, ...]
    b_set: tuple[Fe, ...] | None
    c_set: tuple[Fe, ...] | None
    xi: Fe
    table_xi: Fe
    table_squares: tuple[Fe, ...]
    iota: Fe | None = None
    theta: Fe | None = None
    sigma: Fe | None = None
    kappa: dict = field(default_factory=dict)
    M: tuple[Fe, ...] = ()
    N: tuple[Fe, ...] = ()
    P: tuple[Fe, ...] = ()
    Q: tuple[Fe, ...] = ()
    S: tuple[Fe, ...] = ()


@lru_cache(maxsize=None)
def aux_transversals(F: FieldSpec) -> Transversals:
    """All the parameter sets the finite-field tables refer to.

    ``xi`` is the smallest non-square (odd q) or the smallest eps with
    x^2 + x + eps irreducible (even q).  ``table_xi`` is the value used in the
    representative lists: -1 when q = 3 mod 4, otherwise ``xi``.
    """
    q, mul, add, neg, inv = F.q, F.mul, F.add, F.neg, F.inv
    squares = tuple(squares_transversal(F))
    minus_one = neg[1]
    if F.p == 2:
        b_set = tuple(artin_schreier_transversal(F))
        c_set = tuple(star_transversal(F))
        xi = b_set[1]
        table_xi = xi
        table_squares = squares
    else:
        b_set = c_set = None
        xi = squares[1]
        table_xi = minus_one if q % 4 == 3 else xi
        table_squares = (1, table_xi)

    iota = theta = sigma = None
    kappa: dict = {}
    M = N = P = Q = S = ()
    nz = list(F.nonzero())
    sq_nonzero = {mul[w][w] for w in nz}
    if F.p == 2:
        image = artin_schreier_image(F)
        for a in F.elements():
            if a in (0, 1):
                continue
            a2 = mul[a][a]
            forbidden = {mul[a2][b] for b in image}
            kappa[a] = next(k for k in nz if add[mul[k][k]][k] not in forbidden)
        M = tuple(_half_set(F, [x for x in nz if x != 1], lambda x: inv[x]))
    else:
        if q % 4 == 1:
            iota = min(F.square_roots(minus_one))
        for t in F.elements():
            rhs = add[mul[t][t]][1]
            s = next((s for s in nz if mul[mul[s][s]][table_xi] == rhs), None)
            if s is not None:
                theta, sigma = t, s
                break
        pm1 = {1, minus_one}
        M = tuple(_half_set(F, [x for x in nz if x not in pm1], lambda x: inv[x]))
        N = tuple(_half_set(F, nz, lambda x: neg[x]))
        if q % 4 == 1:
            nonsq = {mul[mul[w][w]][xi] for w in F.elements()}
            P = tuple(_half_set(F, [x for x in nz if x not in pm1 | nonsq], lambda x: inv[x]))
            hit = {add[a][mul[inv[a]][xi]] for a in nz}
            Q = tuple(_half_set(F, [x for x in nz if x not in hit], lambda x: neg[x]))
        else:
            P = tuple(_half_set(F, [x for x in nz if x not in pm1 | sq_nonzero], lambda x: inv[x]))
            hit = set()
            for a in nz:
                den = mul[a][add[a][theta]]
                if den:
                    hit.add(F.div(F.sub(1, mul[a][theta]), den))
            S = tuple(_half_set(F, [x for x in nz if x not in pm1 | hit], lambda x: inv[x]))
    return Transversals(
        squares=squares,
        b_set=b_set,
        c_set=c_set,
        xi=xi,
        table_xi=table_xi,
        table_squares=table_squares,
        iota=iota,
        theta=theta,
        sigma=sigma,
        kappa=kappa,
        M=M,
        N=N,
        P=P,
        Q=Q,
        S=S,
    )


def square_class(F: FieldSpec, a: Fe, reps=None) -> tuple[Fe, Fe]:
    """Write a != 0 as omega^2 * rho with rho in reps; return (omega, rho)."""
    if reps is None:
        reps = aux_transversals(F).table_squares
    for rho in reps:
        for w in F.nonzero():
            if F.mul[F.mul[w][w]][rho] == a:
                return w, rho
    raise FieldError(f"{a} has no square-class representative")  # pragma: no cover
