import json
import random
from fractions import Fraction

import pytest
from hypothesis import given, settings, strategies as st

from braidclass.catalog import catalog_groups
from braidclass.center import enumerate_subcategory_triples, simple_objects_of_center
from braidclass.classify import (certify_triple, classify_center,
                                 classify_group_theoretical, classify_pointed,
                                 classify_rep, count_gaugings, fiber_fpdim,
                                 invertibles_of_center)
from braidclass.errors import BoundExceeded, InvalidCocycle, InvalidSubgroup
from braidclass.groups import (all_subgroups, direct_product, factor_subgroups,
                               product_with_opposite)
from braidclass.pairings import (QZ, TwoCocycle, abelianize, alt_of_cocycle, bilinear_cocycle,
                                 count_bilinear_forms, trivial_bicharacter)

from conftest import G, klein_cocycle, random_cochain, subgroup_of_order

ABELIAN_16 = [g for g in catalog_groups(16) if g.is_abelian()]


def check_report(rep, G_, H, mu=None):
    """Output invariants shared by every classifier."""
    assert rep.count == len(rep.data)
    keys = [d.triple.sort_key() for d in rep.data]
    assert keys == sorted(keys) and len(set(keys)) == len(keys)
    for d in rep.data:
        t = d.triple
        c = d.certificate
        assert c["LH"] == c["MH"] == G_.order
        assert c["left_radical"] == c["right_radical"] == 1
        assert c["L_cap_H"] == c["M_cap_H"] and t.L.order == t.M.order
        assert c["lemma"] is True and c.get("oracle") in (True, None)
        # second route, plain Q/Z arithmetic
        witness = certify_triple(G_, H, mu, t.L, t.M, t.B)
        assert witness == {k: c[k] for k in witness}


# -- examples -------------------------------------------------------------------------

@pytest.mark.parametrize("name,count", [("S3", 3), ("A5", 1), ("Z2", 2), ("Z4", 4),
                                        ("Z1", 1)])
def test_rep_counts(name, count):
    Gr = G(name)
    rep = classify_rep(Gr)
    check_report(rep, Gr, Gr.whole())
    assert rep.count == count
    assert rep.input["operation"] == "rep"


def test_rep_a5_is_symmetric_only():
    rep = classify_rep(G("A5"))
    (d,) = rep.data
    assert d.triple.L.order == d.triple.M.order == 1


def test_rep_s3_data():
    S3 = G("S3")
    rep = classify_rep(S3)
    assert [(d.triple.L.order, d.triple.M.order) for d in rep.data] == [(1, 1), (3, 3), (3, 3)]
    assert sorted(str(d.triple.B.matrix[0][0]) for d in rep.data[1:]) == ["1/3", "2/3"]


def test_gt_examples():
    A5 = G("A5")
    A4 = subgroup_of_order(A5, 12)
    assert classify_group_theoretical(A5, A4).count == 0
    Z2 = G("Z2")
    rep = classify_group_theoretical(Z2, Z2.trivial())
    assert rep.count == 2
    check_report(rep, Z2, Z2.trivial())


@pytest.mark.parametrize("name,count", [("Z1", 1), ("Z2", 16), ("Z3", 81), ("S3", 4)])
def test_center_counts(name, count):
    Gr = G(name)
    rep = classify_center(Gr)
    assert rep.count == count
    # for the trivial group the two triples coincide
    assert len(rep.labelled("standard")) == 1
    assert len(rep.labelled("reverse")) == (0 if Gr.order == 1 else 1)


def test_center_s3_data():
    S3 = G("S3")
    rep = classify_center(S3)
    P, D = product_with_opposite(S3)
    left, right = factor_subgroups(P, 6)
    check_report(rep, P, D)
    triv = [d for d in rep.data if d.triple.B.is_trivial()]
    assert {(d.triple.L, d.triple.M) for d in triv} == {(left, right), (right, left)}
    assert rep.input["operation"] == "center" and rep.input["product_order"] == 36


@pytest.mark.parametrize("name", ["D8", "Q8"])
def test_center_order_eight_against_brute_force(name):
    # no closed-form total is claimed; the raw count is checked against a
    # filter over all 19651 triples of the product's center
    P, D = product_with_opposite(G(name))
    expected = sorted(t.sort_key() for t in enumerate_subcategory_triples(P)
                      if certify_triple(P, D, None, t.L, t.M, t.B) is not None)
    rep = classify_center(G(name), certify=False)
    assert [d.triple.sort_key() for d in rep.data] == expected
    assert rep.count == 1024


def test_center_bound():
    with pytest.raises(BoundExceeded):
        classify_center(G("S5"))
    with pytest.raises(BoundExceeded):
        classify_center(G("S3"), bound=5)


def test_pointed():
    rep = classify_pointed(G("S3"))
    assert rep.count == 0 and rep.diagnostics == ["NonAbelianPointed"]
    assert classify_pointed(G("Z2")).count == 2
    assert classify_pointed(G("Z3")).count == 3


# -- cross-checks --------------------------------------------------------------------------

@pytest.mark.parametrize("A", ABELIAN_16, ids=lambda g: g.label)
def test_rep_equals_pointed_for_abelian(A):
    n = classify_pointed(A).count
    assert classify_rep(A).count == n == count_bilinear_forms(abelianize(A))


@pytest.mark.parametrize("name", ["Z2", "Z3", "Z4", "Z5", "Z6", "Z7", "Z8"])
def test_center_of_cyclic_against_bilinear_forms(name):
    A = G(name)
    square = abelianize(direct_product(A, A))
    assert classify_center(A, certify=False).count == count_bilinear_forms(square)


@pytest.mark.slow
def test_center_of_klein_group():
    A = G("Z2xZ2")
    rep = classify_center(A, certify=False)
    assert rep.count == count_bilinear_forms(abelianize(direct_product(A, A))) == 65536


@pytest.mark.parametrize("Gr", catalog_groups(24), ids=lambda g: g.label)
def test_standard_triple_always_certifies(Gr):
    P, D = product_with_opposite(Gr)
    left, right = factor_subgroups(P, Gr.order)
    B = trivial_bicharacter(left, right)
    assert certify_triple(P, D, None, left, right, B) is not None
    assert certify_triple(P, D, None, right, left, trivial_bicharacter(right, left)) is not None
    # G x 1 commutes with itself only for abelian G
    if not Gr.is_abelian():
        assert certify_triple(P, D, None, left, left, trivial_bicharacter(left, left)) is None


SMALL_CASES = [("S3", 6), ("S3", 3), ("S3", 2), ("S3", 1), ("D8", 4), ("Q8", 4),
               ("Z2xZ2", 4), ("Z2xZ4", 8), ("A4", 4), ("A4", 12), ("D12", 6), ("Z6", 2)]


def cases_with_cocycles():
    for name, k in SMALL_CASES:
        Gr = G(name)
        for H in all_subgroups(Gr):
            if H.order != k:
                continue
            yield Gr, H, None
            b = bilinear_cocycle(H)
            if not b.is_zero():
                yield Gr, H, b
            break


@pytest.mark.parametrize("Gr,H,mu", list(cases_with_cocycles()),
                         ids=lambda v: getattr(v, "label", None) or "")
def test_classifier_matches_brute_force_filter(Gr, H, mu):
    # every triple of the center, filtered by the plain-arithmetic check
    expected = [t.sort_key() for t in enumerate_subcategory_triples(Gr)
                if certify_triple(Gr, H, mu, t.L, t.M, t.B) is not None]
    rep = classify_group_theoretical(Gr, H, mu)
    assert [d.triple.sort_key() for d in rep.data] == sorted(expected)
    check_report(rep, Gr, H, mu)


def test_klein_cocycle_shifts_the_whole_group_pairings():
    # on L = M = K the condition reads: B - Alt(mu) non-degenerate, so the
    # twisted solutions are the untwisted ones shifted by Alt(mu)
    K = G("Z2xZ2")
    W = K.whole()
    mu = klein_cocycle(W)
    plain = classify_group_theoretical(K, W)
    twisted = classify_group_theoretical(K, W, mu)
    assert plain.count == count_bilinear_forms(abelianize(K)) == 16

    def table(B, shift):
        return tuple(B(x, y) + (alt_of_cocycle(mu, x, y) if shift else QZ(0))
                     for x in range(4) for y in range(4))
    whole = lambda rep: [d.triple.B for d in rep.data if d.triple.L.order == 4]
    assert {table(B, True) for B in whole(plain)} == {table(B, False) for B in whole(twisted)}
    assert len(whole(twisted)) == 6


@given(st.sampled_from([("Z2xZ2", 4), ("Z2xZ4", 8), ("D8", 4), ("S3", 3), ("Q8", 4)]),
       st.integers(0, 10 ** 6))
@settings(max_examples=25)
def test_coboundary_invariance(case, seed):
    name, k = case
    Gr = G(name)
    H = next(S for S in all_subgroups(Gr) if S.order == k and S.as_group.is_abelian())
    mu = bilinear_cocycle(H)
    shifted = mu.plus_coboundary(random_cochain(H.order, random.Random(seed)))
    assert classify_group_theoretical(Gr, H, shifted).count == \
        classify_group_theoretical(Gr, H, mu).count


# -- gaugings and dimensions ---------------------------------------------------------------------

@pytest.mark.parametrize("name,count,divisors,gaugings", [
    ("Q8", 8, (2, 2, 2), 512), ("D8", 8, (2, 2, 2), 512), ("S3", 2, (2,), 2),
    ("Z2", 4, (2, 2), 16), ("Z1", 1, (), 1),
])
def test_invertibles_and_gaugings(name, count, divisors, gaugings):
    info = invertibles_of_center(G(name))
    assert info.invertible_count == count
    assert tuple(sorted(info.divisors)) == divisors
    assert count_gaugings(G(name)) == gaugings


@pytest.mark.parametrize("Gr", catalog_groups(24), ids=lambda g: g.label)
def test_invertibles_match_dimension_one_simples(Gr):
    info = invertibles_of_center(Gr)
    ones = sum(1 for l in simple_objects_of_center(Gr) if l.fpdim == 1)
    assert info.invertible_count == ones == info.grading_group.order
    if Gr.is_abelian():
        assert ones == Gr.order ** 2


def test_fiber_fpdim():
    assert fiber_fpdim(6, 6, 2) == 18
    assert fiber_fpdim(5, 7, 1) == 35
    assert fiber_fpdim(36, 36, 36) == 36
    assert fiber_fpdim(Fraction(1, 2), 3, 3) == Fraction(1, 2)
    with pytest.raises(ValueError):
        fiber_fpdim(0, 1, 1)


# -- errors and schema --------------------------------------------------------------------------

def test_errors():
    S3, S4 = G("S3"), G("S4")
    with pytest.raises(InvalidSubgroup):
        classify_group_theoretical(S3, S4.whole())
    K = G("Z2xZ2").whole()
    bad = [[QZ(0)] * 4 for _ in range(4)]
    bad[1][2] = QZ(1, 3)
    with pytest.raises(InvalidCocycle):
        classify_group_theoretical(G("Z2xZ2"), K, TwoCocycle(K, bad))
    with pytest.raises(InvalidCocycle):
        classify_group_theoretical(S3, S3.whole(), TwoCocycle.zero(subgroup_of_order(S3, 3)))


def test_json_schema():
    rep = classify_rep(G("S3"))
    out = json.loads(json.dumps(rep.to_json()))
    assert set(out) == {"input", "count", "braidings", "meta"}
    assert out["count"] == 3 and len(out["braidings"]) == 3
    b = out["braidings"][1]
    assert {"L", "M", "B", "certificate"} <= set(b)
    assert all(isinstance(v, str) for row in b["B"] for v in row)
    assert set(out["meta"]) >= {"version", "elapsed_s"}
    assert classify_pointed(G("S3")).to_json()["diagnostics"] == ["NonAbelianPointed"]
