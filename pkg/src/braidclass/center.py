"""Fusion subcategories of the Drinfeld center Z(G) and transversality to
the Lagrangian algebras k_mu[H].

Simple objects of Z(G) are labelled by a conjugacy class K (through its
least element g_K) and an irreducible character of the centralizer C_G(g_K).
A subcategory is given by a triple (L, M, B): commuting normal subgroups and
a G-invariant bicharacter B on L x M.
"""
from __future__ import annotations

from dataclasses import dataclass
from fractions import Fraction

from .chartab import (CHARTAB_BOUND, ClassFunction, character_table,
                      from_qz_function, induce, multiplicity)
from .errors import InvalidCocycle, InvalidSubgroup, MismatchedGroup
from .groups import (FiniteGroup, Subgroup, centralizer, elementwise_commutes,
                     normal_subgroups)
from .pairings import (Bicharacter, QZ, TwoCocycle, alt_of_cocycle,
                       enumerate_bicharacters, epsilon, nondeg_second_argument,
                       validate_cocycle)


@dataclass(frozen=True)
class SubcategoryTriple:
    ambient: FiniteGroup
    L: Subgroup
    M: Subgroup
    B: Bicharacter

    def sort_key(self):
        return (self.L.sort_key(), self.M.sort_key(), self.B.key())

    def validate(self) -> None:
        if not (self.L.is_normal() and self.M.is_normal()):
            raise InvalidSubgroup("L and M must be normal")
        if not elementwise_commutes(self.L, self.M):
            raise InvalidSubgroup("L and M must commute elementwise")


@dataclass(frozen=True)
class SimpleObjectLabel:
    """V(K, pi): ``class_rep`` is g_K (least element of K) and ``pi_index``
    indexes the character table of C_G(g_K)."""

    group: FiniteGroup
    class_rep: int
    pi_index: int
    fpdim: int

    def is_unit(self) -> bool:
        return self.class_rep == 0 and self.pi_index == 0

    def as_tuple(self) -> tuple[int, int, int]:
        return (self.class_rep, self.pi_index, self.fpdim)


class LagrangianSpec:
    """The pair (H, mu) describing the algebra k_mu[H]."""

    def __init__(self, H: Subgroup, mu: TwoCocycle | None = None):
        if mu is None:
            mu = TwoCocycle.zero(H)
        if mu.group != H:
            raise InvalidCocycle("cocycle lives on a different subgroup")
        ok, witness = validate_cocycle(mu)
        if not ok:
            raise InvalidCocycle(f"cocycle identity fails at {witness}")
        self.H = H
        self.mu = mu

    @property
    def group(self) -> FiniteGroup:
        """H as a group in its own right (local indices)."""
        return self.H.as_group

    def local_mu(self, x: int, y: int) -> QZ:
        return self.mu.table[x][y]


def _centralizer_of(G: FiniteGroup, g: int) -> Subgroup:
    cache = G._cache.setdefault("centralizer", {})
    if g not in cache:
        cache[g] = centralizer(G, [g])
    return cache[g]


def enumerate_subcategory_triples(G: FiniteGroup) -> list[SubcategoryTriple]:
    out = []
    normals = normal_subgroups(G)
    for L in normals:
        for M in normals:
            if not elementwise_commutes(L, M):
                continue
            for B in enumerate_bicharacters(L, M, G):
                out.append(SubcategoryTriple(G, L, M, B))
    return out


def fpdim_triple(t: SubcategoryTriple) -> Fraction:
    return Fraction(t.L.order * t.ambient.order, t.M.order)


def simple_objects_of_center(G: FiniteGroup, bound: int = CHARTAB_BOUND) -> list[SimpleObjectLabel]:
    labels = []
    for cls in G.conjugacy_classes:
        C = _centralizer_of(G, cls[0])
        T = character_table(C.as_group, bound)
        for i, d in enumerate(T.degrees):
            labels.append(SimpleObjectLabel(G, cls[0], i, len(cls) * d))
    return labels


def _constituents(G: FiniteGroup, g: int, M: Subgroup, values: tuple[QZ, ...],
                  bound: int) -> list[int]:
    """Indices of irreducibles of C_G(g) contained in Ind_M^{C_G(g)} of the
    linear character of M with the given values (in M's element order)."""
    key = (g, M.elements, values)
    cache = G._cache.setdefault("constituents", {})
    if key in cache:
        return cache[key]
    C = _centralizer_of(G, g)
    CG = C.as_group
    M_in_C = Subgroup(CG, C.to_local(M.elements), check=False)
    MG = M_in_C.as_group
    lookup = dict(zip(range(M.order), values))
    psi = from_qz_function(MG, lambda y: lookup[y])
    ind = induce(psi, M_in_C)
    T = character_table(CG, bound)
    found = [i for i, pi in enumerate(T.irreducibles) if multiplicity(pi, ind)]
    cache[key] = found
    return found


def simple_objects_of_triple(t: SubcategoryTriple,
                             bound: int = CHARTAB_BOUND) -> list[SimpleObjectLabel]:
    """Labels (K, pi) with K inside L and pi a constituent of
    Ind_M^{C(g_K)} B(g_K, -)."""
    G = t.ambient
    labels = []
    for cls in G.conjugacy_classes:
        g = cls[0]
        if g not in t.L:
            continue
        values = tuple(t.B(g, y) for y in t.M.elements)
        T = character_table(_centralizer_of(G, g).as_group, bound)
        for i in _constituents(G, g, t.M, values, bound):
            labels.append(SimpleObjectLabel(G, g, i, len(cls) * T.degrees[i]))
    total = sum(lab.fpdim ** 2 for lab in labels)
    if total != fpdim_triple(t):
        raise ArithmeticError(f"FPdim check failed: {total} != {fpdim_triple(t)}")
    return labels


@dataclass(frozen=True)
class LagrangianSummand:
    """V(K, eps_{g_K}) inside k_mu[H]; indices are local to H."""

    class_rep: int
    class_size: int
    centralizer: Subgroup          # C_H(g_K), a subgroup of spec.group
    epsilon: dict[int, QZ]         # local element of H -> eps_{g_K}

    def character(self) -> ClassFunction:
        CG = self.centralizer.as_group
        loc = self.centralizer.elements
        return from_qz_function(CG, lambda y: self.epsilon[loc[y]])


def _epsilon_local(spec: LagrangianSpec, g: int, x: int) -> QZ:
    H = spec.H
    return epsilon(spec.mu, H.elements[g], H.elements[x])


def lagrangian_decomposition(spec: LagrangianSpec) -> list[LagrangianSummand]:
    HG = spec.group
    out = []
    for cls in HG.conjugacy_classes:
        g = cls[0]
        C = _centralizer_of(HG, g)
        eps = {x: _epsilon_local(spec, g, x) for x in C.elements}
        for x in C.generators:
            for y in C.elements:
                if eps[int(HG.mul[x, y])] != eps[x] + eps[y]:
                    raise InvalidCocycle(f"epsilon_{g} is not a character at ({x}, {y})")
        out.append(LagrangianSummand(g, len(cls), C, eps))
    assert sum(s.class_size for s in out) == HG.order
    return out


def _epsilon_character(spec: LagrangianSpec, g: int) -> ClassFunction:
    cache = spec.__dict__.setdefault("_eps", {})
    if g not in cache:
        HG = spec.group
        C = _centralizer_of(HG, g)
        loc = C.elements
        cache[g] = from_qz_function(C.as_group, lambda y: _epsilon_local(spec, g, loc[y]))
    return cache[g]


def hom_multiplicity(label: SimpleObjectLabel, spec: LagrangianSpec,
                     bound: int = CHARTAB_BOUND) -> int:
    """dim Hom(V(K, pi), k_mu[H]) = <pi, eps_{g_K}> over C_H(g_K)."""
    HG = spec.group
    if label.group != HG:
        raise MismatchedGroup("label does not live over H")
    cache = spec.__dict__.setdefault("_hom", {})
    key = (label.class_rep, label.pi_index)
    if key not in cache:
        C = _centralizer_of(HG, label.class_rep).as_group
        pi = character_table(C, bound)[label.pi_index]
        cache[key] = multiplicity(pi, _epsilon_character(spec, label.class_rep))
    return cache[key]


def _require_whole(spec: LagrangianSpec, G: FiniteGroup) -> None:
    if spec.H.parent != G or spec.H.order != G.order:
        raise MismatchedGroup("transversality tests need H equal to the triple's group")


def is_transversal_lemma(L: Subgroup, M: Subgroup, B: Bicharacter,
                         spec: LagrangianSpec) -> bool:
    """B - Alt(mu) is non-degenerate in the second argument on L x M."""
    _require_whole(spec, L.parent)
    mu = spec.mu

    def pairing(g, x):
        return B(g, x) - alt_of_cocycle(mu, g, x)
    return nondeg_second_argument(pairing, L.elements, M.elements)


def is_transversal_oracle(L: Subgroup, M: Subgroup, B: Bicharacter,
                          spec: LagrangianSpec, bound: int = CHARTAB_BOUND) -> bool:
    """No non-unit simple of S_G(L, M, B) maps to k_mu[G]; decided with
    character inner products."""
    G = L.parent
    _require_whole(spec, G)
    HG = spec.group
    t = SubcategoryTriple(G, L, M, B)
    for lab in simple_objects_of_triple(t, bound):
        if lab.is_unit():
            continue
        local = SimpleObjectLabel(HG, lab.class_rep, lab.pi_index, lab.fpdim)
        if hom_multiplicity(local, spec, bound):
            return False
    return True
