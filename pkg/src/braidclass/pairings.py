"""Q/Z-valued pairings: abelianization, bicharacters and 2-cocycles.

All values are exponents in Q/Z, so the root of unity exp(2 pi i p/q) is
written ``QZ(p, q)`` and multiplication of roots of unity is addition here.
"""
from __future__ import annotations

import itertools
import json
import math
from dataclasses import dataclass, field
from fractions import Fraction
from functools import cached_property
from typing import Callable, Iterable, Sequence

import numpy as np
from sympy.polys.matrices import DomainMatrix
from sympy.polys.domains import ZZ
from sympy.polys.matrices.normalforms import smith_normal_decomp

from .errors import InvalidCocycle, MismatchedParent, NonCommutingPair, ParseError
from .groups import FiniteGroup, Subgroup, derived_subgroup, quotient


class QZ:
    """A rational number modulo 1, kept reduced with 0 <= num < den."""

    __slots__ = ("num", "den")

    def __init__(self, num: int = 0, den: int = 1):
        if den <= 0:
            raise ValueError("denominator must be positive")
        num %= den
        g = math.gcd(num, den)
        if g > 1:
            num //= g
            den //= g
        elif num == 0:
            den = 1
        self.num = num
        self.den = den

    @classmethod
    def of(cls, value) -> "QZ":
        if isinstance(value, QZ):
            return value
        if isinstance(value, str):
            try:
                value = Fraction(value.strip())
            except ValueError as exc:
                raise ParseError(f"bad Q/Z value {value!r}") from exc
        f = Fraction(value)
        return cls(f.numerator, f.denominator)

    def __add__(self, other: "QZ") -> "QZ":
        d = self.den * other.den // math.gcd(self.den, other.den)
        return QZ(self.num * (d // self.den) + other.num * (d // other.den), d)

    def __neg__(self) -> "QZ":
        return QZ(-self.num, self.den)

    def __sub__(self, other: "QZ") -> "QZ":
        return self + (-other)

    def __mul__(self, k: int) -> "QZ":
        return QZ(self.num * int(k), self.den)

    __rmul__ = __mul__

    def __eq__(self, other) -> bool:
        if isinstance(other, int) and other == 0:
            return self.num == 0
        return isinstance(other, QZ) and self.num == other.num and self.den == other.den

    def __hash__(self) -> int:
        return hash((self.num, self.den))

    def __bool__(self) -> bool:
        return self.num != 0

    def __lt__(self, other: "QZ") -> bool:
        return Fraction(self.num, self.den) < Fraction(other.num, other.den)

    def __repr__(self) -> str:
        return f"QZ({self.num}/{self.den})"

    def __str__(self) -> str:
        return f"{self.num}/{self.den}"


ZERO = QZ(0, 1)


@dataclass(frozen=True, eq=False)
class AbelianStructure:
    """Decomposition of ``source`` modulo its commutator subgroup into cyclic
    factors Z/d1 x Z/d2 x ... with d1 | d2 | ...  ``dlog`` maps each element of
    ``source`` (parent index) to its exponent vector."""

    source: Subgroup
    divisors: tuple[int, ...]
    generators: tuple[int, ...]
    dlog: dict[int, tuple[int, ...]] = field(repr=False)

    @property
    def order(self) -> int:
        return math.prod(self.divisors)

    @property
    def rank(self) -> int:
        return len(self.divisors)

    def __eq__(self, other) -> bool:
        return (isinstance(other, AbelianStructure) and self.source == other.source
                and self.divisors == other.divisors
                and self.generators == other.generators)

    def __hash__(self) -> int:
        return hash((self.source, self.generators))

    @cached_property
    def exponent_matrix(self) -> np.ndarray:
        """Row per source element (in source order): its exponent vector."""
        if not self.divisors:
            return np.zeros((self.source.order, 0), dtype=np.int64)
        return np.array([self.dlog[x] for x in self.source.elements], dtype=np.int64)

    def induced_action(self, g: int) -> np.ndarray:
        """Integer matrix A with dlog(g x g^-1) = dlog(x) @ A (mod divisors);
        `g` must normalise the source."""
        G = self.source.parent
        conj = G.conjugation(g)
        return np.array([self.dlog[int(conj[h])] for h in self.generators],
                        dtype=np.int64).reshape(self.rank, self.rank)


def _abelian_invariants(Q: FiniteGroup):
    """Smith-normal-form decomposition of an abelian group Q.  Returns the
    nontrivial invariant factors, generators (Q indices) and a dlog table."""
    gens = list(Q.generators)
    k = len(gens)
    if k == 0:
        return (), (), {0: ()}
    # express every element in the generators, building relations as we go
    coords = {0: (0,) * k}
    relations = []
    for j, g in enumerate(gens):
        base = dict(coords)
        m, cur = 1, g
        while cur not in base:
            m += 1
            cur = int(Q.mul[cur, g])
        # m e_j - coords(m g) is a relation
        rel = [-c for c in base[cur]]
        rel[j] += m
        relations.append(rel)
        for x, v in base.items():
            y = x
            for t in range(1, m):
                y = int(Q.mul[y, g])
                w = list(v)
                w[j] = t
                coords[y] = tuple(w)
    R = DomainMatrix([[ZZ(v) for v in row] for row in relations], (k, k), ZZ)
    D, U, V = smith_normal_decomp(R)
    Dl = D.to_Matrix()
    V = V.to_Matrix()
    diag = [abs(int(Dl[i, i])) for i in range(k)]
    Vinv = V.inv()
    # new generator h_j = sum_i Vinv[j, i] * g_i; new coordinates y = x V
    new_gens = []
    for j in range(k):
        h = 0
        for i in range(k):
            e = int(Vinv[j, i]) % Q.element_orders[gens[i]]
            for _ in range(e):
                h = int(Q.mul[h, gens[i]])
        new_gens.append(h)
    Vn = np.array(V.tolist(), dtype=object)
    keep = [j for j in range(k) if diag[j] != 1]
    dlog = {}
    for x, v in coords.items():
        y = np.array(v, dtype=object) @ Vn
        dlog[x] = tuple(int(y[j]) % diag[j] for j in keep)
    return tuple(diag[j] for j in keep), tuple(new_gens[j] for j in keep), dlog


def abelianize(S: Subgroup | FiniteGroup) -> AbelianStructure:
    if isinstance(S, FiniteGroup):
        S = S.whole()
    cache = S.parent._cache.setdefault("abelianize", {})
    if S.elements in cache:
        return cache[S.elements]
    SG = S.as_group
    D = derived_subgroup(SG.whole())
    Q, proj = quotient(SG, D)
    divisors, qgens, qdlog = _abelian_invariants(Q)
    # lift each quotient generator to its least-index coset representative
    reps = {}
    for local in range(SG.order):
        reps.setdefault(int(proj[local]), local)
    gens = tuple(S.elements[reps[q]] for q in qgens)
    dlog = {S.elements[local]: qdlog[int(proj[local])] for local in range(SG.order)}
    A = AbelianStructure(S, divisors, gens, dlog)
    _check_structure(A)
    cache[S.elements] = A
    return A


def _check_structure(A: AbelianStructure) -> None:
    for h, d in zip(A.generators, A.divisors):
        assert A.source.parent.element_orders[h] % d == 0
    seen = set(A.dlog.values())
    assert len(seen) == A.order


@dataclass(frozen=True, eq=False)
class Bicharacter:
    """Bimultiplicative L x M -> Q/Z given by a matrix on generators of the
    abelianizations: B(x, y) = sum_ij dlog_L(x)_i dlog_M(y)_j m_ij."""

    left: AbelianStructure
    right: AbelianStructure
    matrix: tuple[tuple[QZ, ...], ...]
    invariant: bool = False

    @cached_property
    def _int_form(self):
        denom = 1
        for row in self.matrix:
            for v in row:
                denom = denom * v.den // math.gcd(denom, v.den)
        ints = np.array([[v.num * (denom // v.den) for v in row] for row in self.matrix],
                        dtype=np.int64).reshape(self.left.rank, self.right.rank)
        return denom, ints

    def __call__(self, x: int, y: int) -> QZ:
        denom, ints = self._int_form
        if denom == 1:
            return ZERO
        a = self.left.dlog[x]
        b = self.right.dlog[y]
        s = 0
        for i, ai in enumerate(a):
            if ai:
                row = ints[i]
                for j, bj in enumerate(b):
                    s += ai * bj * int(row[j])
        return QZ(s, denom)

    def value_table(self) -> np.ndarray:
        """Integer table t with B(x, y) = t[i, j] / denom for x = L[i], y = M[j]."""
        denom, ints = self._int_form
        return (self.left.exponent_matrix @ ints @ self.right.exponent_matrix.T) % denom

    @property
    def denominator(self) -> int:
        return self._int_form[0]

    def is_trivial(self) -> bool:
        return all(v.num == 0 for row in self.matrix for v in row)

    def key(self):
        return tuple(Fraction(v.num, v.den) for row in self.matrix for v in row)

    def matrix_strings(self) -> list[list[str]]:
        return [[str(v) for v in row] for row in self.matrix]

    def __eq__(self, other) -> bool:
        return (isinstance(other, Bicharacter) and self.left == other.left
                and self.right == other.right and self.matrix == other.matrix)

    def __hash__(self) -> int:
        return hash(self.matrix)

    def __repr__(self) -> str:
        return f"Bicharacter({self.matrix_strings()})"


def trivial_bicharacter(L: Subgroup, M: Subgroup) -> Bicharacter:
    A, C = abelianize(L), abelianize(M)
    return Bicharacter(A, C, tuple(tuple(ZERO for _ in C.divisors) for _ in A.divisors), True)


def bicharacter_from_function(L: Subgroup, M: Subgroup, f: Pairing,
                              invariant: bool = False) -> Bicharacter:
    """Bicharacter on L x M agreeing with the bimultiplicative ``f`` on the
    abelianization generators (f must kill commutators in either slot)."""
    A, C = abelianize(L), abelianize(M)
    mat = tuple(tuple(f(a, c) for c in C.generators) for a in A.generators)
    return Bicharacter(A, C, mat, invariant)


def _conjugation_acts_trivially(A: AbelianStructure, gens: Sequence[int]) -> bool:
    G = A.source.parent
    for g in gens:
        conj = G.conjugation(g)
        for h in A.generators:
            if A.dlog[int(conj[h])] != A.dlog[h]:
                return False
    return True


def enumerate_bicharacters(L: Subgroup, M: Subgroup,
                           ambient: FiniteGroup | None = None) -> list[Bicharacter]:
    """All bimultiplicative L x M -> Q/Z invariant under simultaneous
    conjugation by `ambient` (L and M must be normalised by it).  Invariance is
    tested on generators only, which suffices by bimultiplicativity."""
    if L.parent != M.parent:
        raise MismatchedParent("L and M must share a parent group")
    A, C = abelianize(L), abelianize(M)
    G = L.parent
    gens = () if ambient is None else G.generators
    if ambient is not None and ambient != G:
        raise MismatchedParent("ambient must be the parent group of L and M")
    # entries on (i, j) are multiples of 1/gcd(d_i, e_j); work with integer
    # numerators over the common denominator E
    gcds = np.array([[math.gcd(d, e) for e in C.divisors] for d in A.divisors],
                    dtype=np.int64).reshape(A.rank, C.rank)
    E = math.lcm(1, *gcds.flat)
    grids = np.meshgrid(*[np.arange(g) * (E // g) for g in gcds.flat], indexing="ij")
    if grids:
        cand = np.stack([x.ravel() for x in grids], axis=-1).reshape(-1, A.rank, C.rank)
    else:
        cand = np.zeros((1, A.rank, C.rank), dtype=np.int64)
    if bool(gens) and not (_conjugation_acts_trivially(A, gens)
                           and _conjugation_acts_trivially(C, gens)):
        keep = np.ones(len(cand), dtype=bool)
        for g in gens:
            alpha, beta = A.induced_action(g), C.induced_action(g)
            moved = np.einsum("ip,kpq,jq->kij", alpha, cand, beta)
            keep &= ((moved - cand) % E == 0).all(axis=(1, 2))
        cand = cand[keep]
    out = []
    for N in cand:
        mat = tuple(tuple(QZ(int(N[i, j]), E) for j in range(C.rank)) for i in range(A.rank))
        out.append(Bicharacter(A, C, mat, ambient is not None))
    return out


def count_bilinear_forms(A: AbelianStructure) -> int:
    return math.prod(math.gcd(d, e) for d in A.divisors for e in A.divisors)


Pairing = Callable[[int, int], QZ]


def radicals(P: Pairing | Bicharacter, L: Iterable[int] | None = None,
             M: Iterable[int] | None = None) -> tuple[list[int], list[int]]:
    """Left and right radicals of a bimultiplicative pairing on L x M.  For a
    Bicharacter L and M default to its own domain."""
    if isinstance(P, Bicharacter):
        L = P.left.source.elements if L is None else L
        M = P.right.source.elements if M is None else M
    L, M = list(L), list(M)
    vals = [[P(x, y) for y in M] for x in L]
    left = [x for x, row in zip(L, vals) if not any(row)]
    right = [y for j, y in enumerate(M) if not any(row[j] for row in vals)]
    return left, right


def nondeg_second_argument(P: Pairing, L: Iterable[int], M: Iterable[int]) -> bool:
    """True iff every g != 1 in L pairs nontrivially with some x in M."""
    M = list(M)
    return all(any(P(g, x) for x in M) for g in L if g != 0)


# -- 2-cocycles ---------------------------------------------------------------

class TwoCocycle:
    """A Q/Z-valued 2-cocycle on H, stored as a table in H's local element
    order: ``table[i][j]`` is mu(H[i], H[j]).  Evaluation takes parent indices."""

    def __init__(self, group: Subgroup, table):
        self.group = group
        n = group.order
        if len(table) != n or any(len(row) != n for row in table):
            raise InvalidCocycle(f"cocycle table must be {n}x{n}")
        self.table = tuple(tuple(QZ.of(v) for v in row) for row in table)

    @classmethod
    def zero(cls, H: Subgroup) -> "TwoCocycle":
        return cls(H, [[ZERO] * H.order for _ in range(H.order)])

    def __call__(self, x: int, y: int) -> QZ:
        li = self.group.local_index
        return self.table[li[x]][li[y]]

    def is_zero(self) -> bool:
        return not any(v for row in self.table for v in row)

    def plus_coboundary(self, beta: Sequence) -> "TwoCocycle":
        """mu + d(beta) with d(beta)(x, y) = beta(x) + beta(y) - beta(xy); beta
        is indexed locally and must vanish at the identity."""
        HG = self.group.as_group
        beta = [QZ.of(b) for b in beta]
        n = HG.order
        tab = [[self.table[i][j] + beta[i] + beta[j] - beta[int(HG.mul[i, j])]
                for j in range(n)] for i in range(n)]
        return TwoCocycle(self.group, tab)

    def to_json(self, group_ref: str = "") -> str:
        return json.dumps({"group": group_ref,
                           "values": [[str(v) for v in row] for row in self.table]})

    def __eq__(self, other) -> bool:
        return (isinstance(other, TwoCocycle) and self.group == other.group
                and self.table == other.table)

    def __hash__(self) -> int:
        return hash(self.table)


def validate_cocycle(mu: TwoCocycle) -> tuple[bool, tuple[int, ...] | None]:
    """Check normalisation and the cocycle identity
    mu(x,y) + mu(xy,z) = mu(y,z) + mu(x,yz); on failure also return the first
    violating triple (parent indices; a pair for normalisation)."""
    H = mu.group
    HG = H.as_group
    n = HG.order
    t = mu.table
    for x in range(n):
        if t[0][x] or t[x][0]:
            return False, (H.elements[0], H.elements[x])
    mul = HG.mul
    for x in range(n):
        tx = t[x]
        for y in range(n):
            xy = int(mul[x, y])
            a = tx[y]
            txy = t[xy]
            ty = t[y]
            for z in range(n):
                if a + txy[z] != ty[z] + tx[int(mul[y, z])]:
                    return False, (H.elements[x], H.elements[y], H.elements[z])
    return True, None


def _commutes(G: FiniteGroup, g: int, x: int) -> bool:
    return G.mul[g, x] == G.mul[x, g]


def alt_of_cocycle(mu: TwoCocycle, g: int, x: int) -> QZ:
    """Alt(mu)(g, x) = mu(x, g) - mu(g, x), defined for commuting g, x."""
    if not _commutes(mu.group.parent, g, x):
        raise NonCommutingPair(f"{g} and {x} do not commute")
    return mu(x, g) - mu(g, x)


def epsilon(mu: TwoCocycle, g: int, x: int) -> QZ:
    """epsilon_g(x) = mu(g x g^-1, g) - mu(g, x)."""
    G = mu.group.parent
    gxg = int(G.mul[G.mul[g, x], G.inv[g]])
    return mu(gxg, g) - mu(g, x)


def bilinear_cocycle(H: Subgroup, weights: dict[tuple[int, int], int] | None = None) -> TwoCocycle:
    """A cocycle pulled back from a bimultiplicative form on H_ab: by default
    mu(x, y) = sum_{i<j} dlog(x)_j dlog(y)_i / gcd(d_i, d_j)."""
    A = abelianize(H)
    if weights is None:
        weights = {(i, j): 1 for i in range(A.rank) for j in range(i + 1, A.rank)}
    table = []
    for x in H.elements:
        a = A.dlog[x]
        row = []
        for y in H.elements:
            b = A.dlog[y]
            s = ZERO
            for (i, j), w in weights.items():
                s = s + QZ(a[j] * b[i] * w, math.gcd(A.divisors[i], A.divisors[j]))
            row.append(s)
        table.append(row)
    return TwoCocycle(H, table)


def load_cocycle(path, H: Subgroup) -> tuple[TwoCocycle, str]:
    """Read ``{"group": ref, "values": [["p/q", ...], ...]}`` and validate it."""
    try:
        with open(path) as fh:
            data = json.load(fh)
        values = data["values"]
        ref = str(data.get("group", ""))
    except (OSError, ValueError, KeyError, TypeError) as exc:
        raise ParseError(f"cannot read cocycle file {path}: {exc}") from exc
    mu = TwoCocycle(H, values)
    ok, witness = validate_cocycle(mu)
    if not ok:
        raise InvalidCocycle(f"cocycle identity fails at {witness}")
    return mu, ref
