"""Exact ordinary character tables via Burnside-Dixon.

Central characters are found as common eigenvectors of the class
multiplication matrices over F_p, with p = 1 (mod exp G), and are then lifted
to cyclotomic values through eigenvalue multiplicities of each element.
"""
from __future__ import annotations

import itertools
import math
import threading
from dataclasses import dataclass
from fractions import Fraction
from typing import Callable, Sequence

import numpy as np
from sympy import factorint, isprime

from .cyclotomic import Cyclotomic
from .errors import BoundExceeded, MismatchedGroup
from .groups import FiniteGroup, Subgroup
from .pairings import QZ, abelianize

CHARTAB_BOUND = 192


class ClassFunction:
    """A function constant on conjugacy classes; ``values[i]`` is the value
    on ``group.conjugacy_classes[i]``."""

    __slots__ = ("group", "values")

    def __init__(self, group: FiniteGroup, values: Sequence[Cyclotomic]):
        if len(values) != len(group.conjugacy_classes):
            raise ValueError("one value per conjugacy class required")
        self.group = group
        self.values = tuple(v if isinstance(v, Cyclotomic) else Cyclotomic.rational(v)
                            for v in values)

    def __call__(self, x: int) -> Cyclotomic:
        return self.values[int(self.group.class_of[x])]

    def degree(self) -> Cyclotomic:
        return self.values[0]

    def _check(self, other: "ClassFunction") -> None:
        if self.group != other.group:
            raise MismatchedGroup("class functions on different groups")

    def __add__(self, other: "ClassFunction") -> "ClassFunction":
        self._check(other)
        return ClassFunction(self.group, [a + b for a, b in zip(self.values, other.values)])

    def __mul__(self, other) -> "ClassFunction":
        if isinstance(other, ClassFunction):
            self._check(other)
            return ClassFunction(self.group, [a * b for a, b in zip(self.values, other.values)])
        return ClassFunction(self.group, [a * other for a in self.values])

    __rmul__ = __mul__

    def conjugate(self) -> "ClassFunction":
        return ClassFunction(self.group, [v.conjugate() for v in self.values])

    def __eq__(self, other) -> bool:
        return (isinstance(other, ClassFunction) and self.group == other.group
                and all(a == b for a, b in zip(self.values, other.values)))

    __hash__ = None

    def __repr__(self) -> str:
        return f"ClassFunction({list(self.values)})"


@dataclass(frozen=True)
class CharacterTable:
    group: FiniteGroup
    irreducibles: tuple[ClassFunction, ...]
    degrees: tuple[int, ...]
    prime: int
    root: int          # image of zeta_exp(G) in F_prime used by the lift
    modular: tuple[tuple[int, ...], ...] = ()   # chi mod p, before lifting

    def __len__(self) -> int:
        return len(self.irreducibles)

    def __getitem__(self, i: int) -> ClassFunction:
        return self.irreducibles[i]

    def reduce_mod_p(self) -> list[list[int]]:
        """The lifted table pushed back to F_p with zeta -> root."""
        p, z = self.prime, self.root
        e = self.group.exponent
        out = []
        for chi in self.irreducibles:
            row = []
            for v in chi.values:
                v = v.lift(e)
                s = 0
                for k, c in enumerate(v.coeffs):
                    if c:
                        s += c.numerator * pow(c.denominator, -1, p) * pow(z, k, p)
                row.append(s % p)
            out.append(row)
        return out

    def to_json(self) -> dict:
        G = self.group
        return {
            "group": G.label,
            "order": G.order,
            "classes": [{"representative": cls[0], "size": len(cls),
                         "name": G.element_name(cls[0])}
                        for cls in G.conjugacy_classes],
            "degrees": list(self.degrees),
            "prime": self.prime,
            "root": self.root,
            "modular": [list(r) for r in self.modular],
            "characters": [[v.to_json() for v in chi.values] for chi in self.irreducibles],
        }

    @classmethod
    def from_json(cls, G: FiniteGroup, data: dict) -> "CharacterTable":
        irr = tuple(ClassFunction(G, [Cyclotomic(v["conductor"], [Fraction(c) for c in v["coeffs"]])
                                      for v in row]) for row in data["characters"])
        return cls(G, irr, tuple(data["degrees"]), data["prime"], data["root"],
                   tuple(tuple(r) for r in data.get("modular", ())))


# -- arithmetic mod p ---------------------------------------------------------

def dixon_prime(order: int, exponent: int) -> int:
    """Least prime p = 1 (mod exponent) with p > 2*ceil(sqrt(order))."""
    bound = 2 * math.isqrt(order - 1) + 2 if order > 1 else 2
    p = exponent + 1
    while p <= bound or not isprime(p):
        p += exponent
    return p


def _primitive_root(p: int) -> int:
    factors = list(factorint(p - 1))
    for g in range(2, p):
        if all(pow(g, (p - 1) // q, p) != 1 for q in factors):
            return g
    return 1  # p == 2


def _nullspace(rows: list[list[int]], ncols: int, p: int) -> list[list[int]]:
    m = [list(r) for r in rows]
    pivots = []
    r = 0
    for c in range(ncols):
        piv = next((i for i in range(r, len(m)) if m[i][c] % p), None)
        if piv is None:
            continue
        m[r], m[piv] = m[piv], m[r]
        inv = pow(m[r][c], -1, p)
        m[r] = [v * inv % p for v in m[r]]
        for i in range(len(m)):
            if i != r and m[i][c] % p:
                f = m[i][c]
                m[i] = [(a - f * b) % p for a, b in zip(m[i], m[r])]
        pivots.append(c)
        r += 1
        if r == len(m):
            break
    free = [c for c in range(ncols) if c not in pivots]
    basis = []
    for f in free:
        v = [0] * ncols
        v[f] = 1
        for i, c in enumerate(pivots):
            v[c] = -m[i][f] % p
        basis.append(v)
    return basis


def _solve_coords(basis: list[list[int]], target: list[int], p: int) -> list[int]:
    """Coordinates of `target` in the span of `basis` (assumed to lie in it)."""
    d = len(basis)
    k = len(target)
    # columns = basis vectors, augmented with target
    aug = [[basis[j][i] for j in range(d)] + [target[i]] for i in range(k)]
    ns = _nullspace(aug, d + 1, p)
    for v in ns:
        if v[d] % p:
            s = pow(-v[d], -1, p)
            return [v[j] * s % p for j in range(d)]
    raise ArithmeticError("target not in span")


def _class_matrices(G: FiniteGroup) -> list[np.ndarray]:
    classes = G.conjugacy_classes
    k = len(classes)
    reps = np.array([c[0] for c in classes], dtype=np.int64)
    mats = []
    for cls in classes:
        xs = np.array(cls, dtype=np.int64)
        y = G.mul[G.inv[xs][:, None], reps[None, :]]
        s = G.class_of[y]
        A = np.zeros((k, k), dtype=np.int64)
        np.add.at(A, (s, np.broadcast_to(np.arange(k), s.shape)), 1)
        mats.append(A)
    return mats


def _split(A: np.ndarray, spaces: list[list[list[int]]], p: int) -> list[list[list[int]]]:
    out = []
    k = A.shape[0]
    for V in spaces:
        d = len(V)
        if d == 1:
            out.append(V)
            continue
        images = [[int(sum(int(A[s, t]) * v[t] for t in range(k)) % p) for s in range(k)]
                  for v in V]
        R = [_solve_coords(V, w, p) for w in images]   # R[i] = coords of A v_i
        # matrix of A on V acting on coordinate columns: M[j][i] = R[i][j]
        pieces = []
        found = 0
        for lam in range(p):
            rows = [[(R[i][j] - (lam if i == j else 0)) % p for i in range(d)]
                    for j in range(d)]
            ns = _nullspace(rows, d, p)
            if ns:
                pieces.append([[sum(c[i] * V[i][t] for i in range(d)) % p for t in range(k)]
                               for c in ns])
                found += len(ns)
                if found == d:
                    break
        if found != d:
            raise ArithmeticError("class matrix not diagonalisable mod p")
        out.extend(pieces)
    return out


_memo: dict[str, CharacterTable] = {}
_lock = threading.Lock()
_disk_cache = None


def set_disk_cache(cache) -> None:
    """Install an object with ``get(key)``/``put(key, value)`` used to persist
    tables; ``None`` disables it."""
    global _disk_cache
    _disk_cache = cache


def character_table(G: FiniteGroup, bound: int = CHARTAB_BOUND) -> CharacterTable:
    if G.order > bound:
        raise BoundExceeded("character table", G.order, bound)
    key = G.table_hash
    with _lock:
        if key in _memo:
            return _memo[key]
    disk_key = ("chartab", key)
    if _disk_cache is not None:
        data = _disk_cache.get(disk_key)
        if data is not None:
            tab = CharacterTable.from_json(G, data)
            with _lock:
                return _memo.setdefault(key, tab)
    tab = _dixon(G)
    if _disk_cache is not None:
        _disk_cache.put(disk_key, tab.to_json())
    with _lock:
        return _memo.setdefault(key, tab)


def _dixon(G: FiniteGroup) -> CharacterTable:
    n = G.order
    e = G.exponent
    classes = G.conjugacy_classes
    k = len(classes)
    p = dixon_prime(n, e)
    z = pow(_primitive_root(p), (p - 1) // e, p)

    spaces = [[[1 if i == j else 0 for i in range(k)] for j in range(k)]]
    for A in _class_matrices(G):
        if all(len(V) == 1 for V in spaces):
            break
        spaces = _split(A, spaces, p)
    if len(spaces) != k:
        raise ArithmeticError("failed to separate the central characters")

    sizes = [len(c) for c in classes]
    inv_class = [int(G.class_of[G.inv[c[0]]]) for c in classes]
    # power maps: class of rep^l
    powers = []
    for c in classes:
        g = c[0]
        o = G.element_orders[g]
        seq, y = [], 0
        for _ in range(o):
            seq.append(int(G.class_of[y]))
            y = int(G.mul[y, g])
        powers.append(seq)

    rows = []
    for (v,) in spaces:
        w0 = v[0]
        omega = [x * pow(w0, -1, p) % p for x in v]
        s = sum(omega[t] * omega[inv_class[t]] * pow(sizes[t], -1, p) for t in range(k)) % p
        deg_sq = n * pow(s, -1, p) % p
        deg = next(d for d in range(1, p // 2 + 1) if d * d % p == deg_sq)
        chi_p = [deg * omega[t] * pow(sizes[t], -1, p) % p for t in range(k)]
        values = []
        for t in range(k):
            o = len(powers[t])
            zo = pow(z, e // o, p)
            inv_o = pow(o, -1, p)
            mult = {}
            for j in range(o):
                m = sum(chi_p[powers[t][l]] * pow(zo, (-j * l) % o, p) for l in range(o)) * inv_o % p
                if m > deg:
                    raise ArithmeticError("eigenvalue multiplicity failed to lift")
                if m:
                    mult[j * (e // o)] = m
            values.append(Cyclotomic.from_exponents(mult, e))
        rows.append((deg, ClassFunction(G, values), tuple(chi_p)))

    rows.sort(key=lambda r: (r[0], tuple(tuple(-c for c in v.coeffs) for v in r[1].values)))
    irr = tuple(chi for _, chi, _ in rows)
    degrees = tuple(d for d, _, _ in rows)
    if sum(d * d for d in degrees) != n:
        raise ArithmeticError("sum of squared degrees differs from the group order")
    return CharacterTable(G, irr, degrees, p, z, tuple(m for _, _, m in rows))


# -- operations on class functions --------------------------------------------

def inner_product(chi: ClassFunction, psi: ClassFunction) -> Cyclotomic:
    chi._check(psi)
    G = chi.group
    total = Cyclotomic.rational(0)
    for cls, a, b in zip(G.conjugacy_classes, chi.values, psi.values):
        if a and b:
            total = total + a * b.conjugate() * len(cls)
    return total / G.order


def multiplicity(chi: ClassFunction, psi: ClassFunction) -> int:
    v = inner_product(chi, psi).to_fraction()
    if v.denominator != 1:
        raise ArithmeticError(f"non-integral inner product {v}")
    return int(v)


def restrict(chi: ClassFunction, H: Subgroup) -> ClassFunction:
    if H.parent != chi.group:
        raise MismatchedGroup("H is not a subgroup of the character's group")
    HG = H.as_group
    return ClassFunction(HG, [chi(H.elements[c[0]]) for c in HG.conjugacy_classes])


def induce(chi: ClassFunction, H: Subgroup) -> ClassFunction:
    """Induce a class function of ``H.as_group`` up to ``H.parent``."""
    HG = H.as_group
    if chi.group != HG:
        raise MismatchedGroup("class function does not live on H")
    G = H.parent
    acc: dict[int, Cyclotomic] = {}
    for cls, v in zip(HG.conjugacy_classes, chi.values):
        if v:
            c = int(G.class_of[H.elements[cls[0]]])
            term = v * len(cls)
            acc[c] = acc[c] + term if c in acc else term
    values = []
    for c, cls in enumerate(G.conjugacy_classes):
        if c in acc:
            values.append(acc[c] * Fraction(G.order, len(cls) * H.order))
        else:
            values.append(Cyclotomic.rational(0))
    return ClassFunction(G, values)


def from_qz_function(G: FiniteGroup, f: Callable[[int], QZ]) -> ClassFunction:
    """Class function exp(2 pi i f(x)) for a Q/Z-valued class function f."""
    vals = []
    for cls in G.conjugacy_classes:
        q = f(cls[0])
        vals.append(Cyclotomic.root_of_unity(q.num, q.den))
    return ClassFunction(G, vals)


def trivial_character(G: FiniteGroup) -> ClassFunction:
    return ClassFunction(G, [Cyclotomic.rational(1)] * len(G.conjugacy_classes))


def regular_character(G: FiniteGroup) -> ClassFunction:
    return ClassFunction(G, [Cyclotomic.rational(G.order)]
                         + [Cyclotomic.rational(0)] * (len(G.conjugacy_classes) - 1))


def linear_characters(G: FiniteGroup) -> list[ClassFunction]:
    """Characters factoring through the abelianization, one per element of
    the dual group."""
    A = abelianize(G)
    out = []
    ranges = [range(d) for d in A.divisors]
    for a in itertools.product(*ranges):
        def f(x, a=a):
            v = QZ(0)
            for ai, xi, d in zip(a, A.dlog[x], A.divisors):
                v = v + QZ(ai * xi, d)
            return v
        out.append(from_qz_function(G, f))
    return out
