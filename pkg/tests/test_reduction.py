import itertools

import pytest

from qprincipal.coeff import DomainError
from qprincipal.ncalg import NCPoly, normal_words
from qprincipal.reduction import (build_reduction_data, check_f_conditions, construct_reduced_sheaf,
                                  levi_cleaving_check, mu_condition, reduced_qpb_check,
                                  reduction_data_report, reduction_morphism_report)
from qprincipal.sheaf import build_projective_sheaf, chart_embedding


@pytest.fixture(scope="module")
def rd2():
    return build_reduction_data(2)


@pytest.fixture(scope="module")
def rd3():
    return build_reduction_data(3)


@pytest.fixture(scope="module")
def rs2(rd2):
    return construct_reduced_sheaf(rd2)


def test_beta_and_f_at_n2(rd2):
    B = rd2.H.base
    assert rd2.beta == {2: B.mul(rd2.H.p11inv, B.g("n"))}
    assert rd2.f[1].on_gen(("beta", 2)) == rd2.F.section((1,)).g("x")
    assert rd2.f[2].on_gen(("beta", 2)) == rd2.F.section((2,)).g("y")


def test_beta_relation_n3(rd3):
    B = rd3.H.base
    q = B.param("q")
    b2, b3 = rd3.beta[2], rd3.beta[3]
    assert B.mul(b2, b3) == B.mul(b3, b2) * q ** -1


def test_betas_have_zero_counit_and_are_coinvariant(rd3):
    K = rd3.K
    for d in range(1, 4):
        for w in normal_words(K, d):
            x = rd3.embed(NCPoly(K, {w: K.params.one()}))
            assert rd3.H.counit(x).is_zero()
            assert rd3.is_left_coinvariant(x)


def test_to_beta_roundtrip(rd3):
    K = rd3.K
    for w in itertools.chain.from_iterable(normal_words(K, d) for d in range(3)):
        k = NCPoly(K, {w: K.params.one()})
        assert rd3.to_beta(rd3.embed(k)) == k


def test_reduction_data_reports(rd2, rd3):
    assert reduction_data_report(rd2, degree=4).ok
    assert reduction_data_report(rd3, degree=3).ok
    with pytest.raises(DomainError):
        build_reduction_data(1)


@pytest.mark.parametrize("l", [1, 2])
def test_f_conditions_n2(rd2, l):
    rep = check_f_conditions(rd2, l)
    assert rep.ok, rep.failures[:2]


@pytest.mark.parametrize("l", [1, 2, 3])
def test_f_conditions_n3(rd3, l):
    rep = check_f_conditions(rd3, l, products=False)
    assert rep.ok, rep.failures[:2]


@pytest.mark.parametrize("l", [1, 2, 3])
def test_mu_identity_for_p11(rd3, l):
    # f_l(S(t_1) beta_s t_2) = t^(1) f_l(beta_s) t^(2) = mu_1s f_l(beta_s)
    B, K = rd3.H.base, rd3.K
    t = B.g(("p", 1, 1))
    for s in (2, 3):
        assert not mu_condition(rd3, l, t, K.g(("beta", s)))
        from qprincipal.galois import mu_action
        f = rd3.f[l].on_gen(("beta", s))
        assert mu_action(f, t, rd3.witness(l)) == f * rd3.mu[1, s]


def test_reduced_chart_names(rs2):
    F0 = rs2.F0
    assert F0.section((1,)).names == ("a", "ainv", "c", "D", "Dinv")
    assert F0.section((2,)).names == ("a", "c", "cinv", "D", "Dinv")


@pytest.mark.parametrize("l", [1, 2, 3])
def test_reduction_kills_row_l(rd3, l):
    rs = construct_reduced_sheaf(rd3)
    C = rd3.F.section((l,))
    phi = rs.phi[(l,)]
    emb = chart_embedding(rd3.F.algebra, C)
    for s in (2, 3):
        assert not phi(emb.on_gen(("a", l, s)))
    assert phi(emb.on_gen(("a", l, 1)))


def test_theorem_sections_match_direct_quotient(rs2):
    for I, S in rs2.theorem_sections.items():
        assert S.same_as(rs2.F0.section(I))


def test_reduced_morphisms_n2(rs2):
    rep = reduction_morphism_report(rs2)
    assert rep.ok, rep.failures[:2]


def test_reduced_qpb_n2(rs2):
    rep = reduced_qpb_check(rs2, build_projective_sheaf(2))
    assert rep.ok, rep.failures[:2]
    checks = " ".join(r["check"] for r in rep.records)
    assert "gamma0_1" in checks and "gamma0_2" in checks


def test_levi_cleaving(rd2):
    assert levi_cleaving_check(rd2).ok
