import pytest

from qprincipal.coeff import DomainError
from qprincipal.ncalg import cdv, generic_mu, sudbery
from qprincipal.sheaf import (b_chart_iso_check, build_bundle_sheaf, build_projective_sheaf, chart_iso,
                              chart_iso_check, classical_limit_check, cocycle_report,
                              functoriality_failures, gluing_check, identity_iso, qpb_check,
                              restriction_report, same_side_violations)


@pytest.fixture(scope="module")
def F2():
    return build_bundle_sheaf(2)


@pytest.fixture(scope="module")
def F3():
    return build_bundle_sheaf(3)


@pytest.fixture(scope="module")
def F3loc():
    return build_bundle_sheaf(3, transitions="localization")


def names(F):
    return [F.section(I).names for I in F.cover.opens]


def test_projective_line_charts():
    B = build_projective_sheaf(2)
    assert names(B) == [("z",), ("w",), ("z", "zinv")]
    with pytest.raises(DomainError):
        build_projective_sheaf(1)


def test_projective_classical_limit():
    assert classical_limit_check(build_projective_sheaf(3)).ok


def test_bundle_sections_n2(F2):
    assert names(F2) == [("a", "ainv", "c", "x", "D", "Dinv"), ("a", "c", "cinv", "y", "D", "Dinv"),
                         ("a", "ainv", "c", "cinv", "x", "D", "Dinv")]


def test_restriction_from_second_chart_routes_through_psi(F2):
    r = F2.restriction((2,), (1, 2))
    tgt = r.target
    assert r.on_gen("y") == tgt.g("x")
    assert r.on_gen("cinv") == tgt.g("cinv")


@pytest.mark.parametrize("n", [2, 3])
def test_restrictions_are_comodule_algebra_maps(n, F2, F3):
    rep = restriction_report(F2 if n == 2 else F3)
    assert rep.ok, rep.failures[:2]


def test_functoriality_with_localization_transitions(F3loc):
    assert functoriality_failures(F3loc) == []
    assert cocycle_report(F3loc).ok


@pytest.mark.xfail(strict=True, reason="the chart changes D -> -D, u -> a a^-1 u do not compose on triple overlaps")
def test_functoriality_with_psi_transitions(F3):
    assert functoriality_failures(F3) == []


@pytest.mark.parametrize("l,m", [(1, 2), (2, 1), (1, 3), (3, 1), (2, 3), (3, 2)])
def test_psi_n3(l, m, F3):
    rep = chart_iso_check(chart_iso(F3, l, m))
    assert rep.ok, rep.failures[:2]


def test_psi_generator_images(F3):
    psi = chart_iso(F3, 1, 2).forward
    T = psi.target
    for j in (2, 3):
        assert psi.on_gen(("nu", 1, j)) == T.g(("nu", 1, j))
        want = T.product([T.g(("a", 2, 1)), T.g(("inv", "a", 1, 1)), T.g(("u", 1, j))])
        assert psi.on_gen(("u", 2, j)) == want


def test_identity_iso(F2):
    C = F2.section((1,))
    assert chart_iso_check(identity_iso(C, F2.chart_coaction(1))).ok


def test_qpb_n2(F2):
    rep = qpb_check(F2, build_projective_sheaf(2), degree=3)
    assert rep.ok, rep.failures[:2]


def test_b_generators_match_base_names(F2):
    C1, C2 = F2.section((1,)), F2.section((2,))
    from qprincipal.sheaf import base_to_chart, coinvariant_generators
    B = build_projective_sheaf(2)
    z = base_to_chart(B.section((1,)), C1).on_gen("z")
    w = base_to_chart(B.section((2,)), C2).on_gen("w")
    assert z == C1.mul(C1.g("ainv"), C1.g("c"))
    assert w == C2.mul(C2.g("cinv"), C2.g("a"))
    assert list(coinvariant_generators(C1).values()) == [z]


@pytest.mark.parametrize("n,l", [(3, 1), (3, 2), (3, 3), (4, 3), (4, 4)])
def test_b_chart_iso_sudbery(n, l):
    assert b_chart_iso_check(n, l).ok


def test_b_chart_iso_out_of_range():
    with pytest.raises(DomainError):
        b_chart_iso_check(3, 4)


def test_generic_theta_breaks_index_shift():
    A = cdv(6)
    assert same_side_violations(A.meta["mu"], 6)
    assert not all(b_chart_iso_check(6, l, A).ok for l in range(1, 7))
    assert not same_side_violations(sudbery(6).meta["mu"], 6)


def test_triangle_factor_makes_n3_pass():
    A = generic_mu(3)
    assert all(b_chart_iso_check(3, l, A).ok for l in range(1, 4))


def test_gluing_surrogate_localization():
    F = build_bundle_sheaf(2, transitions="localization")
    assert gluing_check(F).ok


def test_gluing_surrogate_psi_disagrees_on_b(F2):
    rep = gluing_check(F2)
    bad = {r["check"] for r in rep.failures}
    assert "b agrees on U_12" in bad and "a agrees on U_12" not in bad
    assert rep.records[-1]["ok"]  # independence holds either way


def test_classical_limit_bundle(F2):
    assert classical_limit_check(F2).ok
