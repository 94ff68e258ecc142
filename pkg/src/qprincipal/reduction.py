"""Reduction of the bundle from the parabolic quotient H to its Levi quotient H0."""
from __future__ import annotations

import itertools
from typing import Dict, Mapping

from .coeff import DomainError, StructuralError
from .galois import (CheckReport, Coaction, GL2Basis, TranslationWitness, centralizer_check,
                     cleaving_check, comodule_map_failures, gl2_cleaving_maps,
                     is_coinvariant, levi_hopf, mu_action, standard_witness)
from .hopf import HopfStructure, leg_map
from .maps import LinMap, compose, recast, rule_residuals, split_legs, tensor_elem
from .ncalg import NCPoly, Presentation, normal_words, quotient, tensor
from .sheaf import (SheafModel, _label, build_bundle_sheaf, chart_embedding,
                    coinvariant_generators, qpb_check)


class ReductionData:
    """``H``, ``H0 = H/(p_1s)``, the left ``H0``-coinvariants ``beta_s = p11^-1 p_1s``
    and the maps ``f_l: beta_s -> nu^(l)_1s``."""

    def __init__(self, F: SheafModel, hs: HopfStructure, H: HopfStructure, H0: HopfStructure):
        self.F = F
        self.n = F.n
        self.hs, self.H, self.H0 = hs, H, H0
        self.pr0 = H0.projection
        self.mu = F.algebra.meta["mu"]
        B = H.base
        self.beta = {s: B.mul(H.p11inv, B.g(("p", 1, s))) for s in range(2, self.n + 1)}
        self.K = _beta_algebra(self.n, self.mu, B.params)
        self.embed = LinMap(self.K, B, {("beta", s): b for s, b in self.beta.items()}, name="beta -> H")
        self.f = {l: self._f(l) for l in range(1, self.n + 1)}
        self._lead: Dict[tuple, tuple] = {}
        self._lead_degree = -1
        self._witness: Dict[int, TranslationWitness] = {}
        self._left = None

    def _f(self, l: int) -> LinMap:
        C = self.F.section((l,))
        return LinMap(self.K, C, {("beta", s): C.g(("nu", 1, s)) for s in range(2, self.n + 1)},
                      name=f"f_{l}")

    # -- left H0-coaction on H ------------------------------------------------
    @property
    def left_coaction(self) -> LinMap:
        """``h -> pr0(h_1) (x) h_2`` as a map ``H -> H0 (x) H``."""
        if self._left is None:
            T = tensor(self.H0.base, self.H.base)
            self._left = compose(leg_map(self.H.T2, T, [self.pr0, None], [0, 1]), self.H.delta)
        return self._left

    def is_left_coinvariant(self, x: NCPoly) -> bool:
        T = self.left_coaction.target
        return self.left_coaction(x) == tensor_elem(T, [self.H0.base.one(), x])

    # -- expressing coinvariants through the beta's ---------------------------
    def _extend_leads(self, degree: int):
        K = self.K
        for d in range(self._lead_degree + 1, degree + 1):
            for w in normal_words(K, d):
                img = self.embed(NCPoly(K, {w: K.params.one()}))
                lead, c = img.leading()
                if lead in self._lead:
                    raise StructuralError("beta monomials share a leading word")
                self._lead[lead] = (w, img, c)
        self._lead_degree = max(self._lead_degree, degree)

    def to_beta(self, x: NCPoly, max_degree: int = 6) -> NCPoly:
        """The element of the beta algebra mapping to ``x`` (leading-term elimination)."""
        K = self.K
        out: Dict[tuple, object] = {}
        self._extend_leads(2)
        while x:
            lead, c = x.leading()
            while lead not in self._lead and self._lead_degree < max_degree:
                self._extend_leads(self._lead_degree + 1)
            if lead not in self._lead:
                raise StructuralError(f"{x.pres.format(x)} is not a polynomial in the beta's")
            w, img, c0 = self._lead[lead]
            k = c * c0.inverse()
            out[w] = out.get(w, K.params.zero()) + k
            x = x - img * k
        return NCPoly(K, {w: c for w, c in out.items() if c})

    def witness(self, l: int) -> TranslationWitness:
        if l not in self._witness:
            c = self.F.chart_coaction(l)
            C = c.source
            self._witness[l] = standard_witness(c, self.hs, chart_embedding(self.F.algebra, C), ell=l)
        return self._witness[l]


def _beta_algebra(n: int, mu: Mapping, params) -> Presentation:
    idx = list(range(2, n + 1))
    names = ["beta" if n == 2 else f"beta[{s}]" for s in idx]
    rels = []
    for a, b in itertools.combinations(range(len(idx)), 2):
        r, s = idx[a], idx[b]
        # beta_s beta_r = mu_rs beta_r beta_s
        rels.append({(b, a): params.one(), (a, b): -mu[r, s]})
    return Presentation.from_relations(params, [("beta", s) for s in idx], names, rels,
                                       meta={"kind": "beta", "n": n})


def build_reduction_data(n: int, F: SheafModel | None = None) -> ReductionData:
    """Construct and certify the reduction data; raises StructuralError on any failure."""
    if n < 2:
        raise DomainError("reduction needs n >= 2")
    F = F if F is not None else build_bundle_sheaf(n)
    hs, H = F.hopf_pair()
    rd = ReductionData(F, hs, H, levi_hopf(H))
    rep = reduction_data_report(rd, degree=2)
    if not rep.ok:
        raise StructuralError(f"reduction data rejected: {rep.failures[0]}")
    return rd


def reduction_data_report(rd: ReductionData, degree: int = 4) -> CheckReport:
    """Left coinvariance of beta monomials, the beta relations, the counit and the f_l relations."""
    rep = CheckReport(f"reduction data n={rd.n}")
    K = rd.K
    bad = rule_residuals(rd.embed)
    rep.add("beta's satisfy beta_s beta_r = mu_rs beta_r beta_s in H", not bad, bad[0] if bad else None)
    for d in range(1, degree + 1):
        for w in normal_words(K, d):
            x = rd.embed(NCPoly(K, {w: K.params.one()}))
            label = K.word_str(w)
            rep.add(f"{label} left H0-coinvariant", rd.is_left_coinvariant(x), rd.left_coaction(x))
            rep.add(f"eps({label}) = 0", not rd.H.counit(x), rd.H.counit(x))
    for l, f in rd.f.items():
        bad = rule_residuals(f)
        rep.add(f"f_{l} respects the beta relations", not bad, bad[0] if bad else None)
    return rep


# -- conditions on f_l ---------------------------------------------------------

def _mu_lhs(rd: ReductionData, h: NCPoly, k: NCPoly) -> NCPoly:
    """``S(h_1) k h_2`` in H."""
    H, B = rd.H, rd.H.base
    out = B.zero()
    for coef, (w1, w2) in split_legs(H.T2, H.coproduct(h)):
        left = H.S(NCPoly(B, {w1: B.params.one()}))
        out = out + B.product([left, k, NCPoly(B, {w2: B.params.one()})]) * coef
    return out


def mu_condition(rd: ReductionData, l: int, h: NCPoly, k: NCPoly) -> NCPoly:
    """``f_l(S(h_1) k h_2) - tau1(h) f_l(k) tau2(h)`` for ``k`` in the beta algebra."""
    f = rd.f[l]
    lhs = f(rd.to_beta(_mu_lhs(rd, h, rd.embed(k))))
    rhs = mu_action(f(k), h, rd.witness(l))
    return lhs - rhs


def comodule_condition(rd: ReductionData, l: int, k: NCPoly) -> NCPoly:
    """``delta(f_l(k)) - (f_l (x) id) Delta(k)``."""
    c = rd.F.chart_coaction(l)
    f, H, B = rd.f[l], rd.H, rd.H.base
    grouped: Dict[tuple, NCPoly] = {}
    for coef, (w1, w2) in split_legs(H.T2, H.coproduct(rd.embed(k))):
        grouped[w2] = grouped.get(w2, B.zero()) + NCPoly(B, {w1: coef})
    rhs = c.T.zero()
    for w2, x in grouped.items():
        rhs = rhs + c.elem(f(rd.to_beta(x)), NCPoly(B, {w2: B.params.one()}))
    return c(f(k)) - rhs


def check_f_conditions(rd: ReductionData, l: int, products: bool = True) -> CheckReport:
    """Centralizer, module, comodule and gluing conditions for ``f_l``."""
    if not 1 <= l <= rd.n:
        raise DomainError(f"chart index {l} out of range")
    F, K, B = rd.F, rd.K, rd.H.base
    C = F.section((l,))
    f = rd.f[l]
    rep = CheckReport(f"conditions on f_{l}")
    bgens = list(coinvariant_generators(C).values())
    betas = [K.g(("beta", s)) for s in range(2, rd.n + 1)]
    ks = list(betas)
    if products:
        ks += [K.mul(x, y) for x, y in itertools.product(betas, repeat=2)]
    live = [g for g in range(len(B.keys)) if g not in B.eliminated()]
    for k in ks:
        kname = K.format(k)
        rep.add(f"f({kname}) centralizes the b's", centralizer_check(f(k), bgens))
        for g in live:
            res = mu_condition(rd, l, B.g(g), k)
            rep.add(f"module condition h={B.names[g]}, k={kname}", not res, res)
        res = comodule_condition(rd, l, k)
        rep.add(f"comodule condition k={kname}", not res, res)
        for m in range(1, rd.n + 1):
            if m == l:
                continue
            I = tuple(sorted((l, m)))
            here = F.restriction((l,), I)(f(k))
            there = F.restriction((m,), I)(rd.f[m](k))
            rep.add(f"gluing on U_{_label(I)}, k={kname}", here == there, here - there)
    if products:
        # module condition on products of generators of H
        for g1, g2 in itertools.combinations(live, 2):
            h = B.mul(B.g(g1), B.g(g2))
            res = mu_condition(rd, l, h, betas[0])
            rep.add(f"module condition h={B.names[g1]}*{B.names[g2]}, k={K.format(betas[0])}",
                    not res, res)
    # beta_s Dt^-1 versus nu_1s D^-1
    Dtinv, Dinv = B.g(("Dtinv",)), C.g(("Dinv",))
    for s in range(2, rd.n + 1):
        fh = B.commutation_factor(rd.beta[s], Dtinv)
        fa = C.commutation_factor(C.g(("nu", 1, s)), Dinv)
        rep.add(f"beta_{s} and nu_1{s} commute alike with the inverse determinant",
                fh is not None and fh == fa, (fh, fa))
    return rep


# -- the reduced sheaf ------------------------------------------------------------

class ReducedSheaf:
    """``F0`` with its reduction morphisms ``phi_U: F(U) -> F0(U)``."""

    def __init__(self, rd: ReductionData, F0: SheafModel, phi: Dict, theorem_sections: Dict):
        self.rd = rd
        self.F0 = F0
        self.phi = phi
        self.theorem_sections = theorem_sections

    def __repr__(self):
        return f"<ReducedSheaf {self.F0.name}: {len(self.phi)} opens>"


def _nu_keys(n: int):
    return [("nu", 1, s) for s in range(2, n + 1)]


def reduced_chart(C: Presentation) -> Presentation:
    """``A_l / (nu_1s)``."""
    Q, proj = quotient(C, _nu_keys(C.meta["n"]), kind="reduced chart")
    Q.meta.pop("minor", None)
    if "u" in C.meta:
        Q.meta["u"] = {js: proj(recast(u, C)) for js, u in C.meta["u"].items()}
    return Q


def _quotient_map(S: Presentation, Q: Presentation) -> LinMap:
    return LinMap(S, Q, {k: (Q.g(k) if Q.has(k) else Q.zero()) for k in S.keys}, name="phi")


def build_reduced_sheaf(F: SheafModel, H0: HopfStructure) -> SheafModel:
    """``F0(U_l) = A_l/(nu^(l)_1s)`` built directly, with the descended chart changes."""
    n = F.n
    charts = {}

    def chart(l):
        if l not in charts:
            charts[l] = reduced_chart(F.section((l,)))
        return charts[l]

    def transition(F0, I, l, m):
        src, tgt = F0.section(I, l), F0.section(I, m)
        psi = F.transition(I, l, m)
        down = _quotient_map(F.section(I, m), tgt)
        return LinMap(src, tgt, {k: down(psi.on_gen(k)) for k in src.keys}, name=f"Psi0_{l}{m}")

    def coaction(F0, I, anchor):
        S0 = F0.section(I, anchor)
        c = F.coaction(I, anchor)
        T = tensor(S0, H0.base)
        down = leg_map(c.T, T, [_quotient_map(c.source, S0), H0.projection], [0, 1])
        return Coaction(S0, H0, {k: down(c.map.on_gen(k)) for k in S0.keys}, T=T,
                        name=f"H0-coaction on F0(U_{_label(I)})")

    def chart_coaction(l):
        return F0.coaction((l,))

    F0 = SheafModel(n, chart, lambda l, m: ("a", m, 1), transition, name=f"F0_GL{n}",
                    coaction=coaction, hopf_pair=lambda: (F.hopf_pair()[0], H0),
                    chart_coaction=chart_coaction)
    F0.algebra = F.algebra
    return F0


def construct_reduced_sheaf(rd: ReductionData, F: SheafModel | None = None) -> ReducedSheaf:
    """Quotient every ``F(U_I)`` by the ideal generated by ``rho_{i,I}(f_i(beta_s))``.

    The ideal generators are computed through every chart ``i`` in ``I``; they
    must agree and be (scalar multiples of) generators, so the quotient is a
    zero-rewrite quotient.  The result is compared with the direct ``F0``.
    """
    F = F if F is not None else rd.F
    F0 = build_reduced_sheaf(F, rd.H0)
    phi, theorem = {}, {}
    betas = [rd.K.g(("beta", s)) for s in range(2, rd.n + 1)]
    for I in F.cover.opens:
        S = F.section(I)
        killed = None
        for i in I:
            rho = F.restriction((i,), I)
            keys = []
            for b in betas:
                img = rho(rd.f[i](b))
                (w, c), = img.terms.items() if len(img.terms) == 1 else [((), None)]
                if len(w) != 1:
                    raise StructuralError(f"ideal generator {S.format(img)} is not a generator")
                keys.append(S.keys[w[0]])
            if killed is not None and keys != killed:
                raise StructuralError(f"ideal on U_{_label(I)} depends on the chart")
            killed = keys
        Q, _ = quotient(S, killed, kind="reduced chart")
        if not Q.same_as(F0.section(I)):
            raise StructuralError(f"theorem violation: reduced section on U_{_label(I)} differs from F0")
        theorem[I] = Q
        phi[I] = _quotient_map(S, F0.section(I))
    return ReducedSheaf(rd, F0, phi, theorem)


def reduction_morphism_report(rs: ReducedSheaf) -> CheckReport:
    """Each ``phi`` is an algebra map, an H0-comodule map and sends b's to coinvariants;
    ``phi o rho = rho0 o phi`` on generators."""
    F, F0, rd = rs.rd.F, rs.F0, rs.rd
    rep = CheckReport("reduction morphisms")
    for I, phi in rs.phi.items():
        S = phi.source
        bad = rule_residuals(phi)
        rep.add(f"phi_{_label(I)} algebra map", not bad, bad[0] if bad else None)
        c = F.coaction(I)
        T = tensor(S, rd.H0.base)
        down = leg_map(c.T, T, [None, rd.pr0], [0, 1])
        induced = Coaction(S, rd.H0, {k: down(c.map.on_gen(k)) for k in S.keys}, T=T, check=False)
        bad = comodule_map_failures(phi, induced, F0.coaction(I))
        rep.add(f"phi_{_label(I)} H0-comodule map", not bad, bad[:1] or None)
        if len(I) == 1:
            c0 = F0.coaction(I)
            for j, b in coinvariant_generators(S).items():
                rep.add(f"phi_{_label(I)}(b_{j}) H0-coinvariant", is_coinvariant(phi(b), c0))
    for K, I in F.cover.pairs():
        left = compose(rs.phi[I], F.restriction(K, I))
        right = compose(F0.restriction(K, I), rs.phi[K])
        S = F.section(K)
        bad = [S.names[g] for g in range(len(S.keys)) if left.images[g] != right.images[g]]
        rep.add(f"phi o rho = rho0 o phi for U_{_label(K)} > U_{_label(I)}", not bad, bad[:1] or None)
    return rep


def reduced_qpb_check(rs: ReducedSheaf, base: SheafModel, degree: int = 3) -> CheckReport:
    """qpb_check for ``F0`` over ``H0``; at ``n = 2`` also the cleaving maps of both charts."""
    F0, rd = rs.F0, rs.rd
    rep = CheckReport(f"{F0.name} over {base.name}")
    rep.extend(qpb_check(F0, base, degree=degree))
    rep.extend(reduction_morphism_report(rs))
    if F0.n == 2:
        H0 = rd.H0
        basis = GL2Basis(H0)
        tests = basis.monomials(range(-3, 4), range(-3, 4))
        C2 = F0.section((2,))
        phi1 = rs.phi[(1,)]
        g1 = _gamma0_1(H0, F0, phi1)
        rep.extend(cleaving_check(g1, None, F0.chart_coaction(1), tests), prefix="gamma0_1: ")
        g2, g2bar, _ = gl2_cleaving_maps(H0, C2, None)
        rep.extend(cleaving_check(g2, g2bar, F0.chart_coaction(2), tests), prefix="gamma0_2: ")
    return rep


def _gamma0_1(H0: HopfStructure, F0: SheafModel, phi1: LinMap):
    """``t -> a, s -> u, Dt^-1 -> D^-1`` pushed to the reduced first chart."""
    from .galois import LinMapHtoA
    from .sheaf import chart_u
    F_chart = phi1.source
    C0 = phi1.target
    images = {}
    for k in H0.base.keys:
        if k[0] == "p":
            i, j = k[1], k[2]
            x = F_chart.g(("a", 1, 1)) if (i, j) == (1, 1) else chart_u(F_chart, i, j)
            images[k] = phi1(x)
        elif k[0] == "Dt":
            images[k] = C0.g(("D",))
        elif k[0] == "Dtinv":
            images[k] = C0.g(("Dinv",))
    return LinMapHtoA(H0, C0, images=images, name="gamma0_1")


def levi_cleaving_check(rd: ReductionData) -> CheckReport:
    """``j(pbar_ij) = p_ij`` is a left H0-comodule algebra map ``H0 -> H`` with
    convolution inverse ``jbar = S o j`` (so ``jbar(pbar_11) = p_11^-1``)."""
    H, H0 = rd.H, rd.H0
    B, B0 = H.base, H0.base
    rep = CheckReport("H over its left H0-coinvariants is cleft")
    j = LinMap(B0, B, {k: B.g(k) for k in B0.keys}, name="j")
    bad = rule_residuals(j)
    rep.add("j is an algebra map", not bad, bad[0] if bad else None)
    rep.add("jbar(pbar_11) = p_11^-1", H.S(B.g(("p", 1, 1))) == H.p11inv)
    lam = rd.left_coaction
    lifted = leg_map(H0.T2, lam.target, [None, j], [0, 1])
    for g in range(len(B0.keys)):
        if g in B0.eliminated():
            continue
        h = B0.g(g)
        ok = lam(j(h)) == lifted(H0.coproduct(h))
        rep.add(f"j left comodule map on {B0.names[g]}", ok)
        eps = B.one() * H0.counit(h)
        left = right = B.zero()
        for coef, (w1, w2) in split_legs(H0.T2, H0.coproduct(h)):
            x, y = (j(NCPoly(B0, {w: B0.params.one()})) for w in (w1, w2))
            left = left + B.mul(H.S(x), y) * coef
            right = right + B.mul(x, H.S(y)) * coef
        rep.add(f"(jbar * j)({B0.names[g]}) = eps", left == eps, left - eps)
        rep.add(f"(j * jbar)({B0.names[g]}) = eps", right == eps, right - eps)
    return rep
