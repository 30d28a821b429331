"""Braidings on group-theoretical fusion categories.

A braiding on the category attached to (G, H, mu) is the same as a triple
(L, M, B) of the center with LH = MH = G whose pairing B - Alt(mu) is
non-degenerate on (L & H) x (M & H).  The Rep(G), Z(G) and pointed cases
are specialisations.
"""
from __future__ import annotations

import math
import time
from dataclasses import dataclass, field
from fractions import Fraction

import numpy as np

from . import __version__
from .center import (LagrangianSpec, SubcategoryTriple, is_transversal_lemma,
                     is_transversal_oracle)
from .chartab import CHARTAB_BOUND, linear_characters
from .errors import BoundExceeded, InvalidCocycle, InvalidSubgroup
from .groups import (FiniteGroup, Subgroup, direct_product, elementwise_commutes,
                     factor_subgroups, normal_subgroups, product_with_opposite,
                     quotient, derived_subgroup)
from .pairings import (AbelianStructure, TwoCocycle, abelianize,
                       alt_of_cocycle, bicharacter_from_function,
                       count_bilinear_forms, enumerate_bicharacters, radicals,
                       validate_cocycle)

CENTER_BOUND = 24


@dataclass
class BraidingDatum:
    triple: SubcategoryTriple
    context: str
    certificate: dict
    label: str | None = None

    def to_json(self) -> dict:
        t = self.triple
        out = {
            "L": list(t.L.elements),
            "M": list(t.M.elements),
            "B": t.B.matrix_strings(),
            "B_basis": {"L": list(t.B.left.generators), "M": list(t.B.right.generators)},
            "certificate": self.certificate,
        }
        if self.label:
            out["label"] = self.label
        return out


@dataclass
class ClassificationReport:
    input: dict
    data: list[BraidingDatum]
    diagnostics: list[str] = field(default_factory=list)
    meta: dict = field(default_factory=dict)

    @property
    def count(self) -> int:
        return len(self.data)

    def labelled(self, label: str) -> list[BraidingDatum]:
        return [d for d in self.data if d.label == label]

    def to_json(self) -> dict:
        out = {"input": self.input, "count": self.count,
               "braidings": [d.to_json() for d in self.data]}
        if self.diagnostics:
            out["diagnostics"] = self.diagnostics
        out["meta"] = self.meta
        return out


@dataclass(frozen=True)
class UniversalGradingInfo:
    invertible_count: int
    grading_group: AbelianStructure

    @property
    def divisors(self) -> tuple[int, ...]:
        return self.grading_group.divisors


def _group_input(G: FiniteGroup) -> dict:
    return {"group": G.label, "order": G.order, "table_hash": G.table_hash}


def _transport_to_H(H: Subgroup, mu: TwoCocycle):
    """The spec (H, mu) rewritten over H as a group of its own."""
    HG = H.as_group
    return HG, LagrangianSpec(HG.whole(), TwoCocycle(HG.whole(), mu.table))


def classify_group_theoretical(G: FiniteGroup, H: Subgroup, mu: TwoCocycle | None = None,
                               *, certify: bool = True, bound: int = CHARTAB_BOUND,
                               context: str = "GroupTheoretical") -> ClassificationReport:
    start = time.perf_counter()
    if H.parent != G:
        raise InvalidSubgroup("H must be a subgroup of G")
    if mu is None:
        mu = TwoCocycle.zero(H)
    if mu.group != H:
        raise InvalidCocycle("cocycle is not defined on H")
    ok, witness = validate_cocycle(mu)
    if not ok:
        raise InvalidCocycle(f"cocycle identity fails at {witness}")

    # condition (i) prunes L and M before any bicharacter is built
    full = [N for N in normal_subgroups(G) if N.product_size(H) == G.order]
    HG = spec_H = None
    oracle_ok = certify and H.order <= bound
    if certify:
        HG, spec_H = _transport_to_H(H, mu)

    data = []
    for L in full:
        LH = L.intersection(H)
        for M in full:
            if not elementwise_commutes(L, M):
                continue
            MH = M.intersection(H)
            A, C = abelianize(L), abelianize(M)
            XL = np.array([A.dlog[g] for g in LH.elements], dtype=np.int64).reshape(LH.order, A.rank)
            XM = np.array([C.dlog[x] for x in MH.elements], dtype=np.int64).reshape(MH.order, C.rank)
            alt_den, alt_num = _integer_table(
                [[alt_of_cocycle(mu, g, x) for x in MH.elements] for g in LH.elements])
            for B in enumerate_bicharacters(L, M, G):
                denom, ints = B._int_form
                D = math.lcm(denom, alt_den)
                V = (XL @ ints @ XM.T) * (D // denom) - alt_num * (D // alt_den)
                nz = (V % D) != 0
                left = LH.order - int(nz.any(axis=1).sum())
                right = MH.order - int(nz.any(axis=0).sum())
                if left != 1 or right != 1:
                    continue
                cert = {
                    "LH": L.product_size(H), "MH": M.product_size(H),
                    "L_cap_H": LH.order, "M_cap_H": MH.order,
                    "left_radical": left, "right_radical": right,
                }
                # forced by (i) and (ii)
                assert LH.order == MH.order and L.order == M.order, cert
                if certify:
                    cert.update(_certify_at_H(H, HG, spec_H, LH, MH, B, oracle_ok, bound))
                data.append(BraidingDatum(SubcategoryTriple(G, L, M, B), context, cert))
    data.sort(key=lambda d: d.triple.sort_key())
    inp = _group_input(G)
    inp.update({"operation": "gt", "subgroup": list(H.elements),
                "cocycle": None if mu.is_zero() else [[str(v) for v in row] for row in mu.table]})
    return ClassificationReport(inp, data, meta=_meta(start))


def _integer_table(rows) -> tuple[int, np.ndarray]:
    """Common denominator and numerators of a table of QZ values."""
    den = math.lcm(1, *(v.den for row in rows for v in row))
    num = np.array([[v.num * (den // v.den) for v in row] for row in rows], dtype=np.int64)
    return den, num


def _certify_at_H(H, HG, spec, LH, MH, B, oracle_ok, bound) -> dict:
    """Re-check transversality for the restricted triple over H itself."""
    Lh = Subgroup(HG, H.to_local(LH.elements), check=False)
    Mh = Subgroup(HG, H.to_local(MH.elements), check=False)
    el = H.elements
    Bh = bicharacter_from_function(Lh, Mh, lambda a, c: B(el[a], el[c]), True)
    cert = {"lemma": is_transversal_lemma(Lh, Mh, Bh, spec)}
    cert["oracle"] = is_transversal_oracle(Lh, Mh, Bh, spec, bound) if oracle_ok else None
    if not cert["lemma"] or cert["oracle"] is False:
        raise AssertionError(f"transversality certificate failed: {cert}")
    return cert


def certify_triple(G: FiniteGroup, H: Subgroup, mu: TwoCocycle | None,
                   L: Subgroup, M: Subgroup, B) -> dict | None:
    """Check (T1), (T2), (i) and (ii) directly with Q/Z arithmetic, without
    the vectorised path used by the classifier.  Returns the witness record,
    or None when some condition fails."""
    mu = TwoCocycle.zero(H) if mu is None else mu
    if not (L.is_normal() and M.is_normal() and elementwise_commutes(L, M)):
        return None
    for g in G.generators:
        conj = G.conjugation(g)
        for x in L.generators:
            for y in M.generators:
                if B(int(conj[x]), int(conj[y])) != B(x, y):
                    return None
    if L.product_size(H) != G.order or M.product_size(H) != G.order:
        return None
    LH, MH = L.intersection(H), M.intersection(H)
    left, right = radicals(lambda g, x: B(g, x) - alt_of_cocycle(mu, g, x),
                           LH.elements, MH.elements)
    if left != [0] or right != [0]:
        return None
    return {"LH": G.order, "MH": G.order, "L_cap_H": LH.order, "M_cap_H": MH.order,
            "left_radical": 1, "right_radical": 1}


def _meta(start: float) -> dict:
    return {"version": __version__, "elapsed_s": round(time.perf_counter() - start, 6)}


def classify_rep(G: FiniteGroup, **kw) -> ClassificationReport:
    rep = classify_group_theoretical(G, G.whole(), None, context="Rep", **kw)
    rep.input["operation"] = "rep"
    return rep


def classify_center(G: FiniteGroup, bound: int = CENTER_BOUND, **kw) -> ClassificationReport:
    if G.order > bound:
        raise BoundExceeded("center classification", G.order, bound)
    start = time.perf_counter()
    P, D = product_with_opposite(G)
    rep = classify_group_theoretical(P, D, None, context="Center", **kw)
    left, right = factor_subgroups(P, G.order)
    for d in rep.data:
        t = d.triple
        if not t.B.is_trivial():
            continue
        if (t.L, t.M) == (left, right):
            d.label = "standard"
        elif (t.L, t.M) == (right, left):
            d.label = "reverse"
    rep.input = {**_group_input(G), "operation": "center",
                 "product_order": P.order, "diagonal": list(D.elements)}
    rep.meta = _meta(start)
    return rep


def classify_pointed(A: FiniteGroup, **kw) -> ClassificationReport:
    """Braidings on Vec_A; as a group-theoretical category this is (A, 1, 0)."""
    start = time.perf_counter()
    if not A.is_abelian():
        rep = ClassificationReport({**_group_input(A), "operation": "pointed"}, [],
                                   ["NonAbelianPointed"])
        rep.meta = _meta(start)
        return rep
    rep = classify_group_theoretical(A, A.trivial(), None, context="Pointed", **kw)
    rep.input = {**_group_input(A), "operation": "pointed"}
    return rep


def invertibles_of_center(G: FiniteGroup) -> UniversalGradingInfo:
    """Invertible simples of Z(G) are V({z}, chi) with z central and chi
    linear; the universal grading group is their dual."""
    Z = G.center
    count = Z.order * len(linear_characters(G))
    Q, _ = quotient(G, derived_subgroup(G.whole()))
    U = direct_product(Z.as_group, Q)
    grading = abelianize(U)
    if grading.order != count:
        raise ArithmeticError(f"invertible count {count} != |U| {grading.order}")
    return UniversalGradingInfo(count, grading)


def count_gaugings(G: FiniteGroup) -> int:
    return count_bilinear_forms(invertibles_of_center(G).grading_group)


def fiber_fpdim(dim_c, dim_d, grading_order: int) -> Fraction:
    dim_c, dim_d = Fraction(dim_c), Fraction(dim_d)
    if dim_c <= 0 or dim_d <= 0 or grading_order <= 0:
        raise ValueError("dimensions and grading order must be positive")
    return dim_c * dim_d / grading_order
