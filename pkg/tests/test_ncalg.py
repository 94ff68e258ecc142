import random

import pytest
import sympy as sp
from hypothesis import given, settings
from hypothesis import strategies as st

import oracles
from qprincipal.coeff import DomainError
from qprincipal.ncalg import (InvalidHopfIdeal, NCPoly, Presentation, UnsupportedLocalization,
                              adjoin_inverse, cdv, check_confluence, determinant_terms, gl2_multi,
                              gln_multi, normal_words, pbw_count, preset, quotient,
                              random_element, specialization_failures, sudbery, tensor)
from qprincipal.sheaf import chart_algebra

p_, q_ = sp.symbols("p q")


def entries(P, x):
    return oracles.ncpoly_to_entries(x)


# -- presets -------------------------------------------------------------------

def test_sudbery2_d_a_commute(sud2):
    assert sud2.mul(sud2.g("d"), sud2.g("a")) == sud2.word_poly("ad")


def test_gl2_multi_correction_rule():
    P = gl2_multi()
    got = P.mul(P.g("d"), P.g("a"))
    p, q = P.param("p"), P.param("q")
    assert got == P.word_poly("ad") - P.word_poly("bc", p - q ** -1)
    assert P.format(got) == "a*d - (p - q^-1)*b*c"


def test_sudbery3_rule_a21_a13(sud3):
    got = sud3.mul(sud3.g(("a", 2, 1)), sud3.g(("a", 1, 3)))
    assert got == sud3.word_poly([("a", 1, 3), ("a", 2, 1)], sud3.param("q", -2))


def test_preset_domain_errors():
    with pytest.raises(DomainError):
        sudbery(0)
    with pytest.raises(DomainError):
        cdv(2)


def test_n1_is_commutative_laurent_ring():
    P = sudbery(1)
    a = P.g(("a", 1, 1))
    assert P.mul(a, P.g("Dinv")) == P.one()
    assert P.mul(P.g("D"), P.g("Dinv")) == P.one()


# -- normalize / mul -------------------------------------------------------------

def test_normalize_ada_against_oracle():
    P = gl2_multi()
    got = P.normalize(P.word_poly("ada"))
    rules = oracles.gln_relations(2, qsym=lambda i, j: q_, u=p_ * q_)
    want = oracles.normalize(rules, {((1, 1), (2, 2), (1, 1)): 1})
    assert oracles.same(entries(P, got), want)
    # the frozen value, and its single-parameter limit
    p, q = P.param("p"), P.param("q")
    assert got == P.word_poly("aad") - P.word_poly("abc", p - q ** -1)
    S = P.specialize({"p": P.params.without(["p"]).var("q", -1)})
    assert S.normalize(S.word_poly("ada")) == S.word_poly("aad")


def test_unit_and_small_products():
    P = gl2_multi()
    assert P.normalize(P.word_poly(())) == P.one()
    assert P.mul(P.g("a"), P.g("b")) == P.word_poly("ab")
    assert P.mul(P.g("b"), P.g("a")) == P.word_poly("ab", P.param("p", -1))
    assert P.mul(P.g("D"), P.g("Dinv")) == P.one()
    assert P.mul(P.g("Dinv"), P.g("D")) == P.one()


@pytest.mark.parametrize("n", [2, 3])
def test_gln_multi_words_against_oracle(n):
    P = gln_multi(n)
    rules = oracles.gln_relations(n)
    rng = random.Random(n)
    entries_ = [(i, k) for i in range(1, n + 1) for k in range(1, n + 1)]
    for _ in range(15):
        w = tuple(rng.choice(entries_) for _ in range(3))
        got = P.normalize(P.word_poly([("a",) + e for e in w]))
        assert oracles.same(entries(P, got), oracles.normalize(rules, {w: 1})), w


@pytest.mark.parametrize("n", [2, 3, 4])
def test_sudbery_words_against_oracle(n):
    P = sudbery(n)
    rules = oracles.mu_relations(n, oracles.sudbery_mu())
    rng = random.Random(10 + n)
    entries_ = [(i, k) for i in range(1, n + 1) for k in range(1, n + 1)]
    for _ in range(15):
        w = tuple(rng.choice(entries_) for _ in range(3))
        got = P.normalize(P.word_poly([("a",) + e for e in w]))
        assert oracles.same(entries(P, got), oracles.normalize(rules, {w: 1})), w


def test_sudbery_relations_match_table(sud3):
    # a_ik a_il = q^-1 a_il a_ik ; a_ik a_jk = q a_jk a_ik ; a_il a_jk = q^2 a_jk a_il ; a_ik a_jl = a_jl a_ik
    P, q = sud3, sud3.param("q")
    a = lambda i, j: P.g(("a", i, j))
    for (x, y, c) in [(a(1, 1), a(1, 2), q ** -1), (a(1, 1), a(2, 1), q),
                      (a(1, 2), a(2, 1), q ** 2), (a(1, 1), a(2, 2), P.params.one())]:
        assert P.mul(x, y) == P.mul(y, x) * c


def test_mul_alphabet_mismatch():
    from qprincipal.coeff import StructuralError
    A, B = sudbery(2), sudbery(3)
    with pytest.raises(StructuralError):
        A.g("a") + B.g(("a", 1, 1))


# -- determinant -------------------------------------------------------------------

@pytest.mark.parametrize("n", [2, 3])
def test_determinant_row_form_against_oracle(n):
    P = gln_multi(n)
    rules = oracles.gln_relations(n)
    u = sp.Symbol("u")
    sign = lambda i, j: -u / sp.Symbol(f"q_{i}{j}")
    want = oracles.determinant(rules, n, "row", sign)
    got = NCPoly(P, determinant_terms(P, n, "row"))
    assert oracles.same(entries(P, got), want)
    col = oracles.determinant(rules, n, "column", lambda i, j: -sp.Symbol(f"q_{i}{j}"))
    assert oracles.same(want, col)


# -- confluence -----------------------------------------------------------------

@pytest.mark.parametrize("kind,n", [("sudbery", 3), ("gl2_multi", 2), ("gln_multi", 3), ("cdv", 4)])
def test_shipped_presets_are_confluent(kind, n):
    rep = check_confluence(preset(kind, None if kind == "gl2_multi" else n), 3, samples=100)
    assert rep.ok, rep.witness()


def test_dropped_correction_term_breaks_confluence():
    P = gl2_multi()
    da = (P.gen("d"), P.gen("a"))
    rules = dict(P.rules)
    rules[da] = {w: c for w, c in rules[da].items() if w == (P.gen("a"), P.gen("d"))}
    broken = Presentation(P.params, P.keys, P.names, rules, P.divisors, weights=P.weights,
                          inverses=P.inverses, meta=P.meta, check=False)
    rep = check_confluence(broken, 3, samples=50)
    assert not rep.ok and rep.witness() is not None


def test_confluence_rejects_small_degree_bound(sud2):
    with pytest.raises(DomainError):
        check_confluence(sud2, 2)


# -- inverses, tensors, quotients ----------------------------------------------------

def test_chart_inverse_rules_of_sudbery3():
    C = chart_algebra(sudbery(3), 2)
    inv = C.g(("inv", "a", 2, 1))
    mu = C.meta["mu"]
    for j in (1, 3):
        x = C.g(("a", j, 1))
        # a_j1 a_21^-1 = mu_11 mu_2j a_21^-1 a_j1
        assert C.mul(x, inv) == C.mul(inv, x) * mu[2, j]
    assert C.mul(inv, C.g(("a", 2, 1))) == C.one()


def test_gl2_chart_two_inverse_rule():
    C = chart_algebra(sudbery(2), 2)
    q = C.param("q")
    assert C.mul(C.g("a"), C.g("cinv")) == C.mul(C.g("cinv"), C.g("a")) * q ** -1


def test_adjoin_inverse_quantum_plane():
    from qprincipal.dsl import parse_presentation
    Q = adjoin_inverse(parse_presentation("params q\ngenerators x y\ny*x = q*x*y\n"), "x")
    x, y, xi = Q.g("x"), Q.g("y"), Q.g("xinv")
    assert Q.mul(x, xi) == Q.one() and Q.mul(xi, x) == Q.one()
    assert Q.mul(y, xi) == Q.mul(xi, y) * Q.param("q", -1)


def test_adjoin_inverse_refuses_correction_terms():
    with pytest.raises(UnsupportedLocalization):
        adjoin_inverse(gl2_multi(), ("a", 1, 1))


def test_tensor_legs_commute():
    P = gl2_multi()
    T = tensor(P, P)
    from qprincipal.maps import tensor_elem
    a1 = tensor_elem(T, [P.g("a"), P.one()])
    t2 = tensor_elem(T, [P.one(), P.g("b")])
    assert T.mul(a1, t2) == T.mul(t2, a1) == tensor_elem(T, [P.g("a"), P.g("b")])
    x = T.mul(tensor_elem(T, [P.g("b"), P.g("b")]), tensor_elem(T, [P.g("a"), P.g("b")]))
    assert x == tensor_elem(T, [P.word_poly("ab"), P.word_poly("bb")]) * P.param("p", -1)


def test_parabolic_quotient_and_invalid_ideal(sud3):
    from qprincipal.galois import parabolic_hopf
    from qprincipal.hopf import standard_hopf
    H = parabolic_hopf(standard_hopf(sud3))
    assert all(not H.base.has(("a", s, 1)) for s in (2, 3))
    with pytest.raises(InvalidHopfIdeal):
        quotient(gl2_multi(), [("D",)])  # D Dinv = 1 leaves the ideal


# -- normal words and random properties --------------------------------------------------

@pytest.mark.parametrize("n,d", [(2, 3), (2, 4), (3, 3)])
def test_pbw_counts(n, d):
    P = sudbery(n)
    alphabet = [g for g, k in enumerate(P.keys) if k[0] == "a"]
    words = list(normal_words(P, d, alphabet))
    assert len(words) == pbw_count(n * n, d) == sp.binomial(n * n + d - 1, d)
    assert all(list(w) == sorted(w) for w in words)


@pytest.mark.parametrize("kind,n", [("gl2_multi", None), ("gln_multi", 3), ("sudbery", 3), ("cdv", 4)])
def test_specialization_commutes(kind, n):
    P = preset(kind, n)
    assert specialization_failures(P, {k: 1 for k in P.params.names}, samples=40) == []


@pytest.mark.parametrize("kind,n", [("gl2_multi", None), ("sudbery", 3), ("generic_mu", 3)])
@settings(max_examples=25)
@given(seed=st.integers(0, 10 ** 6))
def test_associativity_and_idempotence(kind, n, seed):
    P = preset(kind, n)
    rng = random.Random(seed)
    x, y, z = (random_element(P, rng, terms=2, degree=2) for _ in range(3))
    assert P.mul(x, P.mul(y, z)) == P.mul(P.mul(x, y), z)
    assert P.normalize(P.normalize(P.mul(x, y))) == P.mul(x, y)


@pytest.mark.parametrize("kind,n", [("gl2_multi", None), ("sudbery", 3), ("cdv", 4)])
@settings(max_examples=20)
@given(seed=st.integers(0, 10 ** 6))
def test_classical_limit_commutative(kind, n, seed):
    P = preset(kind, n)
    S = P.specialize({k: 1 for k in P.params.names})
    rng = random.Random(seed)
    x, y = (random_element(S, rng, terms=2, degree=2) for _ in range(2))
    assert S.mul(x, y) == S.mul(y, x)
