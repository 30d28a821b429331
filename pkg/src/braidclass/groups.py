"""Finite groups given by Cayley tables, subgroups, and lattice utilities.

Elements are integer indices ``0 .. order-1`` and element ``0`` is always the
identity.  Every enumeration returns subgroups in canonical order: by order,
then by the sorted element sequence.
"""
from __future__ import annotations

import hashlib
import itertools
from dataclasses import dataclass
from functools import cached_property
from typing import Iterable, Sequence

import numpy as np

from .errors import (BoundExceeded, IndexOutOfRange, InvalidSubgroup,
                     MismatchedParent, NotAGroup, NotNormal)

EXHAUSTIVE_ASSOC_LIMIT = 512
GOURSAT_BOUND = 4096


class FiniteGroup:
    """A finite group stored as an identity-rooted multiplication table.

    ``assoc_check`` records how associativity was established: ``"exhaustive"``,
    ``"sampled"`` (orders above 512) or ``"inherited"`` for subgroups and
    quotients of an already validated group.
    """

    def __init__(self, table, label: str = "", names: Sequence | None = None,
                 *, _trusted: bool = False, seed: int = 0):
        mul = np.array(table, dtype=np.int32)
        if mul.ndim != 2 or mul.shape[0] != mul.shape[1] or mul.shape[0] == 0:
            raise NotAGroup("square non-empty table", (mul.shape,))
        n = mul.shape[0]
        self.order = n
        self.label = label or f"G{n}"
        self.names = list(names) if names is not None else None
        if _trusted:
            self.assoc_check = "inherited"
        else:
            self._validate(mul, seed)
        mul.setflags(write=False)
        self.mul = mul
        inv = np.argmin(mul, axis=1).astype(np.int32)  # row x hits 0 exactly once
        inv.setflags(write=False)
        self.inv = inv
        self.identity = 0
        self._cache: dict = {}

    def _validate(self, mul: np.ndarray, seed: int) -> None:
        n = mul.shape[0]
        if mul.min() < 0 or mul.max() >= n:
            bad = np.argwhere((mul < 0) | (mul >= n))[0]
            raise NotAGroup("closure", tuple(int(v) for v in bad))
        ar = np.arange(n)
        if not (np.array_equal(mul[0], ar) and np.array_equal(mul[:, 0], ar)):
            bad = int(np.flatnonzero((mul[0] != ar) | (mul[:, 0] != ar))[0])
            raise NotAGroup("identity at index 0", (bad,))
        for axis, what in ((1, "row"), (0, "column")):
            srt = np.sort(mul, axis=axis)
            ok = (srt == ar[None, :]) if axis == 1 else (srt == ar[:, None])
            if not ok.all():
                bad = np.argwhere(~ok)[0]
                raise NotAGroup(f"inverses ({what} is not a permutation)",
                                (int(bad[0]) if axis == 1 else int(bad[1]),))
        if n <= EXHAUSTIVE_ASSOC_LIMIT:
            for a in range(n):
                lhs = mul[mul[a]]            # (ab)c indexed [b, c]
                rhs = mul[a][mul]            # a(bc)
                if not np.array_equal(lhs, rhs):
                    b, c = np.argwhere(lhs != rhs)[0]
                    raise NotAGroup("associativity", (a, int(b), int(c)))
            self.assoc_check = "exhaustive"
        else:
            rng = np.random.default_rng(seed)
            samples = 10 * n * n
            for start in range(0, samples, 1 << 20):
                k = min(1 << 20, samples - start)
                a, b, c = rng.integers(0, n, size=(3, k))
                lhs = mul[mul[a, b], c]
                rhs = mul[a, mul[b, c]]
                bad = np.flatnonzero(lhs != rhs)
                if bad.size:
                    i = bad[0]
                    raise NotAGroup("associativity",
                                    (int(a[i]), int(b[i]), int(c[i])))
            self.assoc_check = "sampled"

    @classmethod
    def from_table(cls, table, label: str = "", names=None) -> "FiniteGroup":
        """Build a group from an arbitrary Cayley table, relabelling so that
        the identity becomes element 0."""
        mul = np.array(table, dtype=np.int64)
        if mul.ndim != 2 or mul.shape[0] != mul.shape[1] or mul.shape[0] == 0:
            raise NotAGroup("square non-empty table", (mul.shape,))
        n = mul.shape[0]
        if mul.min() < 0 or mul.max() >= n:
            bad = np.argwhere((mul < 0) | (mul >= n))[0]
            raise NotAGroup("closure", tuple(int(v) for v in bad))
        ar = np.arange(n)
        ids = [e for e in range(n)
               if np.array_equal(mul[e], ar) and np.array_equal(mul[:, e], ar)]
        if not ids:
            raise NotAGroup("identity", ())
        e = ids[0]
        perm = ar.copy()
        perm[0], perm[e] = e, 0          # perm[new] = old, an involution
        relabeled = perm[mul[np.ix_(perm, perm)]]
        if names is not None:
            names = [names[int(perm[i])] for i in range(n)]
        return cls(relabeled, label, names)

    # -- basic structure -------------------------------------------------

    def __repr__(self) -> str:
        return f"FiniteGroup({self.label!r}, order={self.order})"

    def __eq__(self, other) -> bool:
        if self is other:
            return True
        return (isinstance(other, FiniteGroup) and self.order == other.order
                and np.array_equal(self.mul, other.mul))

    def __hash__(self) -> int:
        return hash(self.table_hash)

    @cached_property
    def table_hash(self) -> str:
        return hashlib.sha256(self.mul.astype("<i4").tobytes()).hexdigest()

    def check_element(self, x) -> int:
        x = int(x)
        if not 0 <= x < self.order:
            raise IndexOutOfRange(f"element {x} not in 0..{self.order - 1}")
        return x

    def power(self, x: int, k: int) -> int:
        y = 0
        for _ in range(k % self.element_orders[x]):
            y = int(self.mul[y, x])
        return y

    @cached_property
    def element_orders(self) -> list[int]:
        n = self.order
        orders = [0] * n
        cur = np.arange(n, dtype=np.int32)
        k = 1
        pending = np.ones(n, dtype=bool)
        ar = np.arange(n)
        while pending.any():
            hit = pending & (cur == 0)
            for x in np.flatnonzero(hit):
                orders[int(x)] = k
            pending &= ~hit
            cur = self.mul[cur, ar]
            k += 1
        orders[0] = 1
        return orders

    @cached_property
    def exponent(self) -> int:
        e = 1
        for o in set(self.element_orders):
            e = e * o // np.gcd(e, o)
        return int(e)

    def is_abelian(self) -> bool:
        return bool(np.array_equal(self.mul, self.mul.T))

    @cached_property
    def generators(self) -> tuple[int, ...]:
        return greedy_generators(self, range(self.order))

    def conjugation(self, g: int) -> np.ndarray:
        """Permutation x -> g x g^-1 as an index array."""
        return self.mul[self.mul[g], self.inv[g]]

    @cached_property
    def conjugacy_classes(self) -> list[tuple[int, ...]]:
        """Classes ordered by their least element, which is the class
        representative; class 0 is the identity."""
        n = self.order
        perms = [self.conjugation(g) for g in self.generators]
        label = np.full(n, -1, dtype=np.int64)
        classes = []
        for x in range(n):
            if label[x] >= 0:
                continue
            idx = len(classes)
            label[x] = idx
            orbit = [x]
            frontier = [x]
            while frontier:
                nxt = []
                for p in perms:
                    for y in p[frontier]:
                        if label[y] < 0:
                            label[y] = idx
                            orbit.append(int(y))
                            nxt.append(int(y))
                frontier = nxt
            classes.append(tuple(sorted(orbit)))
        return classes

    @cached_property
    def class_of(self) -> np.ndarray:
        arr = np.empty(self.order, dtype=np.int64)
        for i, cls in enumerate(self.conjugacy_classes):
            arr[list(cls)] = i
        return arr

    @cached_property
    def center(self) -> "Subgroup":
        return centralizer(self, range(self.order))

    def whole(self) -> "Subgroup":
        return Subgroup(self, range(self.order), check=False)

    def trivial(self) -> "Subgroup":
        return Subgroup(self, (0,), check=False)

    def element_name(self, x: int) -> str:
        if self.names is None:
            return str(x)
        return str(self.names[x])


class Subgroup:
    """A subgroup of `parent`, stored as its sorted element sequence."""

    def __init__(self, parent: FiniteGroup, elements: Iterable[int],
                 check: bool = True):
        self.parent = parent
        elems = tuple(sorted({int(x) for x in elements}))
        if check:
            if not elems or elems[0] != 0:
                raise InvalidSubgroup("subgroup must contain the identity")
            if elems[-1] >= parent.order:
                raise IndexOutOfRange(f"element {elems[-1]} out of range")
            arr = np.array(elems)
            prod = parent.mul[np.ix_(arr, arr)]
            if not np.isin(prod, arr).all():
                raise InvalidSubgroup("subset is not closed under multiplication")
        self.elements = elems

    @property
    def order(self) -> int:
        return len(self.elements)

    def __len__(self) -> int:
        return len(self.elements)

    def __iter__(self):
        return iter(self.elements)

    def __contains__(self, x) -> bool:
        return bool(self.mask[int(x)])

    def __eq__(self, other) -> bool:
        return (isinstance(other, Subgroup) and self.elements == other.elements
                and self.parent == other.parent)

    def __hash__(self) -> int:
        return hash(self.elements)

    def __repr__(self) -> str:
        return f"Subgroup(order={self.order}, of {self.parent.label})"

    def sort_key(self):
        return (len(self.elements), self.elements)

    def __lt__(self, other: "Subgroup") -> bool:
        return self.sort_key() < other.sort_key()

    @cached_property
    def mask(self) -> np.ndarray:
        m = np.zeros(self.parent.order, dtype=bool)
        m[list(self.elements)] = True
        m.setflags(write=False)
        return m

    @cached_property
    def bits(self) -> int:
        b = 0
        for x in self.elements:
            b |= 1 << x
        return b

    @cached_property
    def array(self) -> np.ndarray:
        return np.array(self.elements, dtype=np.int64)

    def issubset(self, other: "Subgroup") -> bool:
        return self.bits & other.bits == self.bits

    @cached_property
    def generators(self) -> tuple[int, ...]:
        return greedy_generators(self.parent, self.elements)

    @cached_property
    def local_index(self) -> dict[int, int]:
        return {x: i for i, x in enumerate(self.elements)}

    @cached_property
    def as_group(self) -> FiniteGroup:
        """This subgroup as a group in its own right; local element ``i``
        is parent element ``elements[i]``."""
        arr = self.array
        lookup = np.full(self.parent.order, -1, dtype=np.int64)
        lookup[arr] = np.arange(len(arr))
        table = lookup[self.parent.mul[np.ix_(arr, arr)]]
        names = None
        if self.parent.names is not None:
            names = [self.parent.names[x] for x in self.elements]
        return FiniteGroup(table, f"<{self.order} in {self.parent.label}>",
                           names, _trusted=True)

    def to_local(self, xs: Iterable[int]) -> list[int]:
        li = self.local_index
        return [li[int(x)] for x in xs]

    def from_local(self, xs: Iterable[int]) -> list[int]:
        return [self.elements[int(i)] for i in xs]

    def is_normal(self, ambient: "Subgroup | FiniteGroup | None" = None) -> bool:
        G = self.parent
        gens = (G.generators if ambient is None or isinstance(ambient, FiniteGroup)
                else ambient.generators)
        arr = self.array
        for g in gens:
            if not self.mask[G.conjugation(g)[arr]].all():
                return False
        return True

    def intersection(self, other: "Subgroup") -> "Subgroup":
        _same_parent(self, other)
        return Subgroup(self.parent, np.flatnonzero(self.mask & other.mask),
                        check=False)

    def product_size(self, other: "Subgroup") -> int:
        """|S·T| as a set of products, from |S||T|/|S∩T|."""
        _same_parent(self, other)
        inter = int(np.count_nonzero(self.mask & other.mask))
        return self.order * other.order // inter


def _same_parent(a: Subgroup, b: Subgroup) -> None:
    if a.parent is not b.parent and a.parent != b.parent:
        raise MismatchedParent("subgroups live in different groups")


def _closure_mask(G: FiniteGroup, gens: Sequence[int],
                  start: np.ndarray | None = None) -> np.ndarray:
    if start is None:
        mask = np.zeros(G.order, dtype=bool)
        mask[0] = True
        frontier = np.array([0])
    else:
        mask = start.copy()
        frontier = np.flatnonzero(mask)
    gens = np.asarray(list(gens), dtype=np.int64)
    if gens.size == 0:
        return mask
    while frontier.size:
        new = G.mul[np.ix_(frontier, gens)].ravel()
        new = np.unique(new[~mask[new]])
        mask[new] = True
        frontier = new
    return mask


def greedy_generators(G: FiniteGroup, elements: Iterable[int]) -> tuple[int, ...]:
    """A small generating set for the subgroup on `elements`, preferring
    elements of large order; deterministic."""
    elems = sorted(elements, key=lambda x: (-G.element_orders[x], x))
    mask = np.zeros(G.order, dtype=bool)
    mask[0] = True
    gens: list[int] = []
    for x in elems:
        if not mask[x]:
            gens.append(int(x))
            mask = _closure_mask(G, gens)
    return tuple(gens)


def generate_subgroup(G: FiniteGroup, gens: Iterable[int]) -> Subgroup:
    gens = [G.check_element(x) for x in gens]
    return Subgroup(G, np.flatnonzero(_closure_mask(G, gens)), check=False)


def normal_closure(G: FiniteGroup, elements: Iterable[int]) -> Subgroup:
    els = {G.check_element(x) for x in elements}
    conj = set()
    for x in els:
        conj.update(G.conjugacy_classes[int(G.class_of[x])])
    return generate_subgroup(G, conj)


def join_normal(A: Subgroup, B: Subgroup) -> Subgroup:
    """Join of two subgroups one of which is normal: the product set."""
    _same_parent(A, B)
    prod = np.unique(A.parent.mul[np.ix_(A.array, B.array)])
    return Subgroup(A.parent, prod, check=False)


def normal_subgroups(G: FiniteGroup) -> list[Subgroup]:
    if "normal" in G._cache:
        return G._cache["normal"]
    base = []
    seen = set()
    for cls in G.conjugacy_classes[1:]:
        N = generate_subgroup(G, cls)
        if N.elements not in seen:
            seen.add(N.elements)
            base.append(N)
    triv = G.trivial()
    lattice = {triv.elements: triv}
    for N in base:
        lattice.setdefault(N.elements, N)
    frontier = list(lattice.values())
    while frontier:
        nxt = []
        for A in frontier:
            for N in base:
                if N.issubset(A):
                    continue
                J = join_normal(A, N)
                if J.elements not in lattice:
                    lattice[J.elements] = J
                    nxt.append(J)
        frontier = nxt
    result = sorted(lattice.values(), key=Subgroup.sort_key)
    G._cache["normal"] = result
    return result


def all_subgroups(G: FiniteGroup) -> list[Subgroup]:
    """Every subgroup, as joins of cyclic subgroups."""
    if "all" in G._cache:
        return G._cache["all"]
    cyclic_gens = {}
    for x in range(1, G.order):
        C = generate_subgroup(G, [x])
        cyclic_gens.setdefault(C.bits, x)
    gens_list = sorted(cyclic_gens.values())
    triv = G.trivial()
    found = {triv.bits: triv}
    frontier = [triv]
    while frontier:
        nxt = []
        for S in frontier:
            for g in gens_list:
                if S.mask[g]:
                    continue
                m = _closure_mask(G, list(S.generators) + [g], start=S.mask)
                T = Subgroup(G, np.flatnonzero(m), check=False)
                if T.bits not in found:
                    found[T.bits] = T
                    nxt.append(T)
        frontier = nxt
    result = sorted(found.values(), key=Subgroup.sort_key)
    G._cache["all"] = result
    return result


def centralizer(G: FiniteGroup, S: Iterable[int]) -> Subgroup:
    S = np.array(sorted({G.check_element(s) for s in S}), dtype=np.int64)
    if S.size == 0:
        return G.whole()
    ok = (G.mul[:, S] == G.mul[S, :].T).all(axis=1)
    return Subgroup(G, np.flatnonzero(ok), check=False)


def elementwise_commutes(L: Subgroup, M: Subgroup) -> bool:
    _same_parent(L, M)
    G = L.parent
    gens = np.array(M.generators, dtype=np.int64)
    if gens.size == 0:
        return True
    arr = L.array
    return bool((G.mul[np.ix_(arr, gens)] == G.mul[np.ix_(gens, arr)].T).all())


def derived_subgroup(S: Subgroup) -> Subgroup:
    G = S.parent
    arr = S.array
    # [x, y] = x y x^-1 y^-1 over generators suffices after normal closure in S
    comm = set()
    for x in arr:
        for y in S.generators:
            comm.add(int(G.mul[G.mul[x, y], G.mul[G.inv[x], G.inv[y]]]))
    D = generate_subgroup(G, comm)
    # close under conjugation by S so the result is the full commutator subgroup
    while True:
        conj = set(D.elements)
        for g in S.generators:
            conj.update(int(v) for v in G.conjugation(g)[D.array])
        if len(conj) == D.order:
            return D
        D = generate_subgroup(G, conj)


def quotient(G: FiniteGroup, N: Subgroup) -> tuple[FiniteGroup, np.ndarray]:
    """Coset group G/N with least-index coset representatives; returns the
    quotient and the projection as an index array."""
    if N.parent != G:
        raise MismatchedParent("N is not a subgroup of G")
    if not N.is_normal():
        raise NotNormal("quotient requires a normal subgroup")
    proj = np.full(G.order, -1, dtype=np.int64)
    reps = []
    for x in range(G.order):
        if proj[x] < 0:
            proj[G.mul[x, N.array]] = len(reps)
            reps.append(x)
    reps = np.array(reps, dtype=np.int64)
    table = proj[G.mul[np.ix_(reps, reps)]]
    names = None
    if G.names is not None:
        names = [G.names[int(r)] for r in reps]
    Q = FiniteGroup(table, f"{G.label}/N{N.order}", names, _trusted=True)
    proj.setflags(write=False)
    return Q, proj


def direct_product(G: FiniteGroup, H: FiniteGroup, label: str = "") -> FiniteGroup:
    """G x H with (g, h) encoded as g*|H| + h."""
    m = H.order
    a = np.arange(G.order * m)
    g, h = a // m, a % m
    table = G.mul[g[:, None], g[None, :]] * m + H.mul[h[:, None], h[None, :]]
    names = None
    if G.names is not None or H.names is not None:
        names = [(G.element_name(int(x)), H.element_name(int(y)))
                 for x, y in zip(g, h)]
    return FiniteGroup(table, label or f"{G.label}x{H.label}", names,
                       _trusted=G.assoc_check != "sampled" and H.assoc_check != "sampled")


def product_with_opposite(G: FiniteGroup) -> tuple[FiniteGroup, Subgroup]:
    """G x G^op with (a, b)(c, d) = (ac, db), and the diagonal
    D = {(g, g^-1)}; (a, b) is encoded as a*|G| + b."""
    n = G.order
    x = np.arange(n * n)
    a, b = x // n, x % n
    table = G.mul[a[:, None], a[None, :]] * n + G.mul[b[None, :], b[:, None]]
    names = None
    if G.names is not None:
        names = [(G.element_name(int(p)), G.element_name(int(q)))
                 for p, q in zip(a, b)]
    P = FiniteGroup(table, f"{G.label}x{G.label}^op", names)
    D = Subgroup(P, [g * n + int(G.inv[g]) for g in range(n)], check=False)
    return P, D


def factor_subgroups(P: FiniteGroup, n: int) -> tuple[Subgroup, Subgroup]:
    """G x 1 and 1 x G^op inside P = product_with_opposite(G), |G| = n."""
    left = Subgroup(P, [g * n for g in range(n)], check=False)
    right = Subgroup(P, range(n), check=False)
    return left, right


# -- Goursat enumeration -----------------------------------------------------

@dataclass(frozen=True)
class GoursatDatum:
    M_l: Subgroup
    N_l: Subgroup
    M_r: Subgroup
    N_r: Subgroup
    phi: tuple[int, ...]   # coset index of M_l/N_l -> coset index of M_r/N_r


def isomorphisms(A: FiniteGroup, B: FiniteGroup):
    """Yield every isomorphism A -> B as a tuple of images."""
    if A.order != B.order:
        return
    if sorted(A.element_orders) != sorted(B.element_orders):
        return
    gens = A.generators
    candidates = [[y for y in range(B.order)
                   if B.element_orders[y] == A.element_orders[g]] for g in gens]
    for images in itertools.product(*candidates):
        phi = [-1] * A.order
        phi[0] = 0
        frontier = [0]
        ok = True
        while frontier and ok:
            nxt = []
            for x in frontier:
                for g, img in zip(gens, images):
                    xg = int(A.mul[x, g])
                    target = int(B.mul[phi[x], img])
                    if phi[xg] < 0:
                        phi[xg] = target
                        nxt.append(xg)
                    elif phi[xg] != target:
                        ok = False
                        break
                if not ok:
                    break
            frontier = nxt
        if ok and len(set(phi)) == A.order:
            yield tuple(phi)


def _sections(G: FiniteGroup):
    """(M, N, quotient, projection) for every N normal in M <= G."""
    subs = all_subgroups(G)
    out = []
    for M in subs:
        MG = M.as_group
        for N in subs:
            if not N.issubset(M) or not N.is_normal(M):
                continue
            Q, proj = quotient(MG, Subgroup(MG, M.to_local(N.elements), check=False))
            out.append((M, N, Q, proj))
    return out


def goursat_data(G: FiniteGroup, H: FiniteGroup):
    for Ml, Nl, Ql, pl in _sections(G):
        for Mr, Nr, Qr, pr in _sections(H):
            if Ql.order != Qr.order:
                continue
            for phi in isomorphisms(Ql, Qr):
                yield GoursatDatum(Ml, Nl, Mr, Nr, phi), (pl, pr)


def goursat_subgroups(G: FiniteGroup, H: FiniteGroup,
                      bound: int = GOURSAT_BOUND) -> list[Subgroup]:
    """All subgroups of G x H materialised from Goursat quintuples."""
    if G.order * H.order > bound:
        raise BoundExceeded("goursat product", G.order * H.order, bound)
    P = direct_product(G, H)
    m = H.order
    found = {}
    for datum, (pl, pr) in goursat_data(G, H):
        by_coset: dict[int, list[int]] = {}
        for j, y in enumerate(datum.M_r.elements):
            by_coset.setdefault(int(pr[j]), []).append(y)
        elems = [x * m + y
                 for i, x in enumerate(datum.M_l.elements)
                 for y in by_coset[datum.phi[int(pl[i])]]]
        S = Subgroup(P, elems, check=False)
        found.setdefault(S.elements, S)
    return sorted(found.values(), key=Subgroup.sort_key)
