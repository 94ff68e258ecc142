"""Comodule algebras: coactions, coinvariants, the canonical map and cleaving maps."""
from __future__ import annotations

import itertools
from fractions import Fraction
from typing import Callable, Dict, Iterable, List, Mapping, Sequence

from .coeff import DomainError, LaurentPoly, StructuralError
from .hopf import HopfStructure, induce_quotient_hopf, leg_map, place, quantum_minor
from .maps import LinMap, rule_residuals, split_legs, tensor_elem
from .ncalg import NCPoly, Presentation, tensor


class CheckReport:
    """Named pass/fail records, in insertion order."""

    def __init__(self, name: str = ""):
        self.name = name
        self.records: List[dict] = []

    def add(self, check: str, ok: bool, witness=None, cite: str = ""):
        rec = {"check": check, "ok": bool(ok)}
        if cite:
            rec["cite"] = cite
        if not ok and witness is not None:
            rec["witness"] = str(witness)
        self.records.append(rec)
        return ok

    def extend(self, other: "CheckReport", prefix: str = ""):
        for r in other.records:
            r = dict(r)
            r["check"] = prefix + r["check"]
            self.records.append(r)

    @property
    def ok(self) -> bool:
        return all(r["ok"] for r in self.records)

    @property
    def failures(self) -> List[dict]:
        return [r for r in self.records if not r["ok"]]

    def __len__(self):
        return len(self.records)

    def __repr__(self):
        bad = len(self.failures)
        return f"<CheckReport {self.name}: {len(self.records) - bad}/{len(self.records)} ok>"


# -- the parabolic quotient ------------------------------------------------

def _parabolic_rename(n: int) -> dict:
    small = {(1, 1): "t", (1, 2): "n", (2, 2): "s"}
    ren = {}
    for i in range(1, n + 1):
        for j in range(1, n + 1):
            name = small.get((i, j), f"p{i}{j}") if n == 2 else f"p[{i}][{j}]"
            ren[("a", i, j)] = (("p", i, j), name)
    ren[("D",)] = (("Dt",), "Dt")
    ren[("Dinv",)] = (("Dtinv",), "Dtinv")
    return ren


def parabolic_hopf(hs: HopfStructure) -> HopfStructure:
    """Quotient by the first column below the diagonal: ``a_s1 = 0`` for ``s >= 2``.

    The result carries ``projection`` (the quotient map) and ``p11inv``,
    the inverse of the grouplike ``p_11`` as ``M_11 Dt^-1``.
    """
    A = hs.base
    n = A.meta["n"]
    killed = [("a", s, 1) for s in range(2, n + 1)]
    H, proj = induce_quotient_hopf(hs, killed, rename=_parabolic_rename(n), kind="parabolic")
    H.base.meta["n"] = n
    if n == 1:
        minor = H.base.one()
    else:
        minor = proj(quantum_minor(A, list(range(2, n + 1)), list(range(2, n + 1))))
    inv = H.base.mul(minor, H.base.g(("Dtinv",)))
    p11 = H.base.g(("p", 1, 1))
    if H.base.mul(p11, inv) != H.base.one() or H.base.mul(inv, p11) != H.base.one():
        raise StructuralError("p11 is not inverted by its cofactor")
    H.p11inv = inv
    return H


def levi_hopf(H: HopfStructure) -> HopfStructure:
    """Further quotient killing the first row off the diagonal: ``p_1s = 0``."""
    n = H.base.meta["n"]
    killed = [("p", 1, s) for s in range(2, n + 1)]
    ren = {}
    for k, name in zip(H.base.keys, H.base.names):
        ren[k] = (k, name + "0")
    H0, proj = induce_quotient_hopf(H, killed, rename=ren, kind="levi")
    H0.base.meta["n"] = n
    H0.p11inv = proj(H.p11inv)
    return H0


# -- coactions -------------------------------------------------------------

class Coaction:
    """Right coaction ``A -> A (x) H`` given on generators, extended multiplicatively."""

    def __init__(self, source: Presentation, hopf: HopfStructure, images: Mapping,
                 T: Presentation | None = None, name: str = "", check: bool = True):
        self.source = source
        self.hopf = hopf
        self.T = T if T is not None else tensor(source, hopf.base)
        self.map = LinMap(source, self.T, images, name=name or "coaction")
        self._T3 = None
        if check:
            bad = self.failures()
            if bad:
                raise StructuralError(f"invalid coaction: {bad[0]}")

    def __call__(self, x: NCPoly) -> NCPoly:
        return self.map(x)

    @property
    def T3(self) -> Presentation:
        if self._T3 is None:
            self._T3 = tensor(self.source, self.hopf.base, self.hopf.base)
        return self._T3

    def counit_leg(self, x: NCPoly) -> NCPoly:
        """``(id (x) eps)`` applied to an element of ``A (x) H``."""
        A, H = self.source, self.hopf.base
        out = A.zero()
        for c, (w0, w1) in split_legs(self.T, x):
            e = self.hopf.counit(NCPoly(H, {w1: H.params.one()}))
            if e:
                out = out + NCPoly(A, {w0: c * e})
        return out

    def failures(self) -> List[str]:
        bad = [f"relation {r}" for r, _ in rule_residuals(self.map)]
        lhs_map = leg_map(self.T, self.T3, [self.map, None], [0, 2])
        rhs_map = leg_map(self.T, self.T3, [None, self.hopf.delta], [0, 1])
        A = self.source
        for g in range(len(A.keys)):
            if g in A.eliminated():
                continue
            d = self.map.images[g]
            if lhs_map(d) != rhs_map(d):
                bad.append(f"coassociativity on {A.names[g]}")
            if self.counit_leg(d) != A.g(g):
                bad.append(f"counit on {A.names[g]}")
        return bad

    def elem(self, a: NCPoly, h: NCPoly) -> NCPoly:
        return tensor_elem(self.T, [a, h])


def build_coaction(pres: Presentation, hs: HopfStructure, proj: LinMap) -> Coaction:
    """``(id (x) proj) o Delta`` on generators."""
    T = tensor(pres, proj.target)
    to_T = leg_map(hs.T2, T, [None, proj], [0, 1])
    images = {g: to_T(hs.delta.images[g]) for g in range(len(pres.keys))}
    return Coaction(pres, proj.hopf, images, T=T, name="coaction")


def comodule_map_failures(f: LinMap, c_src: Coaction, c_tgt: Coaction) -> List[str]:
    """Generators on which ``delta o f != (f (x) id) o delta``."""
    lifted = leg_map(c_src.T, c_tgt.T, [f, None], [0, 1])
    src = f.source
    bad = []
    for g in range(len(src.keys)):
        if g in src.eliminated():
            continue
        if c_tgt(f.images[g]) != lifted(c_src.map.images[g]):
            bad.append(src.names[g])
    return bad


def is_coinvariant(x: NCPoly, c: Coaction) -> bool:
    return c(x) == c.elem(x, c.hopf.base.one())


def canonical_map(elt: NCPoly, c: Coaction) -> NCPoly:
    """``a' (x) a  ->  a' a_(0) (x) a_(1)`` on ``A (x) A``."""
    A, T = c.source, c.T
    TAA = elt.pres
    out = T.zero()
    for coef, (w0, w1) in split_legs(TAA, elt):
        left = place(T, 0, NCPoly(A, {w0: coef}))
        out = out + T.mul(left, c(NCPoly(A, {w1: A.params.one()})))
    return out


def coinvariant_basis_up_to_degree(c: Coaction, d: int, alphabet: Sequence | None = None,
                                   grading: Callable | None = None) -> List[NCPoly]:
    """Basis of the coinvariants spanned by normal words of length ``<= 2d``.

    A coinvariant monomial pairs every letter with an inverse letter, so base
    degree ``d`` corresponds to chart words of length ``2d``.  The linear system
    is solved exactly over the rational function field of the single parameter,
    one block per value of ``grading`` (a coaction-preserved degree of words;
    by default the row degree of chart generators).
    """
    import sympy

    from .ncalg import normal_words
    A = c.source
    if len(A.params.names) > 1:
        raise DomainError("coinvariant elimination needs a single-parameter presentation")
    sym = sympy.Symbol(A.params.names[0]) if A.params.names else None
    if grading is None:
        grading = _row_grading(A)
    blocks: Dict = {}
    for k in range(2 * d + 1):
        for w in normal_words(A, k, alphabet):
            blocks.setdefault(grading(w), []).append(w)
    one_H = c.hopf.base.one()
    basis = []
    for _, words in sorted(blocks.items(), key=lambda kv: repr(kv[0])):
        columns = []
        for w in words:
            x = NCPoly(A, {w: A.params.one()})
            columns.append((c(x) - c.elem(x, one_H)).terms)
        rows = sorted({t for col in columns for t in col})
        if not rows:
            basis += [NCPoly(A, {w: A.params.one()}) for w in words]
            continue
        M = sympy.Matrix(len(rows), len(words), lambda i, j: _to_sympy(columns[j].get(rows[i]), sym))
        for vec in M.nullspace():
            den = sympy.lcm([sympy.fraction(sympy.together(v))[1] for v in vec])
            terms = {w: _from_sympy(sympy.cancel(v * den), sym, A.params)
                     for w, v in zip(words, vec) if v != 0}
            basis.append(NCPoly(A, terms))
    return basis


def _row_grading(A: Presentation) -> Callable:
    rows = {}
    for g, k in enumerate(A.keys):
        if k[0] == "a":
            rows[g] = {k[1]: 1}
        elif k[0] == "inv":
            rows[g] = {k[2]: -1}
        elif k[0] == "u":
            rows[g] = {k[1]: 1}
        elif k[0] in ("D", "Dinv"):
            rows[g] = {0: 1 if k[0] == "D" else -1}
        else:
            rows[g] = {}

    def grade(w):
        tot = {}
        for g in w:
            for i, e in rows[g].items():
                tot[i] = tot.get(i, 0) + e
        return tuple(sorted((i, e) for i, e in tot.items() if e))
    return grade


def _to_sympy(c: LaurentPoly | None, sym):
    import sympy
    out = sympy.Integer(0)
    for exps, v in (c.terms.items() if c is not None else ()):
        term = sympy.Rational(v.numerator, v.denominator)
        for e in exps:
            term *= sym ** e
        out += term
    return out


def _from_sympy(v, sym, params) -> LaurentPoly:
    import sympy
    if sym is None:
        r = sympy.Rational(v)
        return params.const(Fraction(int(r.p), int(r.q)))
    num, den = sympy.fraction(sympy.together(v))
    shift = sympy.Poly(den, sym)
    if len(shift.terms()) != 1:
        raise DomainError(f"non-Laurent coefficient {v}")
    (e0,), c0 = shift.terms()[0]
    out = {}
    for (e,), coef in sympy.Poly(num, sym).terms():
        r = sympy.Rational(coef) / sympy.Rational(c0)
        out[(e - e0,)] = Fraction(int(r.p), int(r.q))
    return LaurentPoly(params, out)


# -- translation map ---------------------------------------------------------

class MissingWitness(KeyError):
    pass


class TranslationWitness:
    """Representatives in ``A (x) A`` of the translation map on ``H``.

    Seeds are given on generators of ``H``; on a normal word the representative
    is assembled with ``tau(hk) = tau1(k) tau1(h) (x) tau2(h) tau2(k)``.
    """

    def __init__(self, c: Coaction, seeds: Mapping):
        self.coaction = c
        self.A = c.source
        self.H = c.hopf.base
        self.TAA = tensor(self.A, self.A)
        self.seeds = {self.H.gen(k): v for k, v in seeds.items()}
        self._words: Dict[tuple, NCPoly] = {(): tensor_elem(self.TAA, [self.A.one(), self.A.one()])}

    def pairs(self, x: NCPoly):
        """``(coef, left, right)`` for the terms of an ``A (x) A`` element."""
        A = self.A
        for c, (w0, w1) in split_legs(self.TAA, x):
            yield c, NCPoly(A, {w0: A.params.one()}), NCPoly(A, {w1: A.params.one()})

    def compose(self, th: NCPoly, tk: NCPoly) -> NCPoly:
        """The representative of ``hk`` from those of ``h`` and ``k``."""
        A, out = self.A, self.TAA.zero()
        for c1, x1, x2 in self.pairs(th):
            for c2, y1, y2 in self.pairs(tk):
                out = out + tensor_elem(self.TAA, [A.mul(y1, x1), A.mul(x2, y2)]) * (c1 * c2)
        return out

    def of_word(self, w: tuple) -> NCPoly:
        hit = self._words.get(w)
        if hit is None:
            if w[-1] not in self.seeds:
                raise MissingWitness(f"no translation witness for {self.H.names[w[-1]]}")
            hit = self.compose(self.of_word(w[:-1]), self.seeds[w[-1]])
            self._words[w] = hit
        return hit

    def __call__(self, h: NCPoly) -> NCPoly:
        out = self.TAA.zero()
        for w, c in h.terms.items():
            out = out + self.of_word(w) * c
        return out

    def mutated(self, key, factor=-1) -> "TranslationWitness":
        """Copy with one seed rescaled (for sensitivity tests)."""
        seeds = {self.H.keys[g]: v for g, v in self.seeds.items()}
        seeds[key] = seeds[key] * factor
        return TranslationWitness(self.coaction, seeds)


def standard_witness(c: Coaction, hs: HopfStructure, embed: LinMap | None = None,
                     ell: int | None = None) -> TranslationWitness:
    """Seeds ``a_l1^-1 (x) a_l1`` for ``p11``, ``sum_k S(a_ik) (x) a_kr`` for ``p_ir``,
    ``D (x) D^-1`` for ``Dt^-1`` and ``D^-1 (x) D`` for ``Dt``.

    ``embed`` carries elements of the matrix algebra into the comodule algebra
    (identity when ``c`` is the coaction on the matrix algebra itself).
    """
    A, H = c.source, c.hopf.base
    n = H.meta["n"]
    B = hs.base
    f = embed if embed is not None else LinMap(B, A, {k: A.g(k) for k in B.keys})
    TAA = tensor(A, A)
    el = lambda x, y: tensor_elem(TAA, [x, y])
    seeds = {}
    for k in H.keys:
        if k[0] == "p":
            i, r = k[1], k[2]
            if (i, r) == (1, 1) and ell is not None:
                seeds[k] = el(A.g(("inv", "a", ell, 1)), A.g(("a", ell, 1)))
                continue
            tot = TAA.zero()
            for j in range(1, n + 1):
                tot = tot + el(f(hs.S(B.g(("a", i, j)))), f(B.g(("a", j, r))))
            seeds[k] = tot
        elif k == ("Dtinv",):
            seeds[k] = el(f(B.g(("D",))), f(B.g(("Dinv",))))
        elif k == ("Dt",):
            seeds[k] = el(f(B.g(("Dinv",))), f(B.g(("D",))))
    return TranslationWitness(c, seeds)


def _one_tensor(c: Coaction, h: NCPoly) -> NCPoly:
    return c.elem(c.source.one(), h)


def surjectivity_witness_check(c: Coaction, w: TranslationWitness, products: int = 1) -> CheckReport:
    """``chi(tau(h)) = 1 (x) h`` for every generator ``h`` and products of ``products + 1`` of them."""
    rep = CheckReport("canonical map surjectivity")
    H = c.hopf.base
    live = [g for g in range(len(H.keys)) if g not in H.eliminated()]
    for g in live:
        h = H.g(g)
        got = canonical_map(w(h), c)
        rep.add(f"chi(tau({H.names[g]})) = 1 (x) {H.names[g]}", got == _one_tensor(c, h), got)
    for k in range(2, products + 2):
        for word in itertools.product(live, repeat=k):
            h = H.normalize(H.word_poly(word))
            if not h:
                continue
            # compose along the word, independently of normal ordering in H
            tau = w.of_word(())
            for g in word:
                tau = w.compose(tau, w.seeds[g])
            got = canonical_map(tau, c)
            label = "*".join(H.names[g] for g in word)
            rep.add(f"chi(tau({label})) = 1 (x) {label}", got == _one_tensor(c, h), got)
    return rep


def translation_properties_check(c: Coaction, w: TranslationWitness, h: NCPoly,
                                 k: NCPoly | None = None) -> CheckReport:
    """(p1), (p2) and the product rule for ``tau``, compared after applying ``chi``.

    Both sides of each identity live in ``A (x)_B A (x) H``; applying ``chi`` to
    the first two legs gives elements of ``A (x) H (x) H`` that can be compared
    in normal form.
    """
    hs = c.hopf
    H = hs.base
    T3 = c.T3
    rep = CheckReport("translation map properties")
    tau = w(h)
    d = hs.coproduct(h)

    def chi_then(tau_elt, h_leg: NCPoly) -> NCPoly:
        return T3.mul(place(T3, 0, canonical_map(tau_elt, c)), place(T3, 2, h_leg))

    # (p1): tau1(h) (x) tau2(h)_(0) (x) tau2(h)_(1) = tau(h_(1)) (x) h_(2)
    lhs = T3.zero()
    dd = leg_map(c.T, T3, [c.map, None], [0, 2])
    for coef, x, y in w.pairs(tau):
        lhs = lhs + T3.mul(place(T3, 0, x), dd(c(y))) * coef
    rhs = T3.zero()
    for coef, (w1, w2) in split_legs(hs.T2, d):
        rhs = rhs + chi_then(w(NCPoly(H, {w1: coef})), NCPoly(H, {w2: H.params.one()}))
    rep.add("p1", lhs == rhs, lhs - rhs)

    # (p2): tau(h_(2)) (x) S(h_(1)) = tau1(h)_(0) (x) tau2(h) (x) tau1(h)_(1)
    if hs.antipode is not None:
        lhs = T3.zero()
        for coef, (w1, w2) in split_legs(hs.T2, d):
            lhs = lhs + chi_then(w(NCPoly(H, {w2: coef})), hs.S(NCPoly(H, {w1: H.params.one()})))
        rhs = T3.zero()
        swap = leg_map(c.T, T3, [None, None], [0, 2])
        for coef, x, y in w.pairs(tau):
            rhs = rhs + T3.mul(swap(c(x)), place(T3, 0, c(y))) * coef
        rep.add("p2", lhs == rhs, lhs - rhs)

    if k is not None:
        direct = canonical_map(w(H.mul(h, k)), c)
        composed = canonical_map(w.compose(w(h), w(k)), c)
        rep.add("tau(hk) = tau1(k) tau1(h) (x) tau2(h) tau2(k)", direct == composed
                and direct == _one_tensor(c, H.mul(h, k)), direct - composed)
    return rep


def mu_action(x: NCPoly, h: NCPoly, w: TranslationWitness) -> NCPoly:
    """``x <| h = tau1(h) x tau2(h)``; meaningful on the centralizer of the coinvariants."""
    A = w.A
    out = A.zero()
    for coef, l, r in w.pairs(w(h)):
        out = out + A.product([l, x, r]) * coef
    return out


def centralizer_check(x: NCPoly, bgens: Iterable[NCPoly]) -> bool:
    A = x.pres
    return all(A.mul(x, b) == A.mul(b, x) for b in bgens)


# -- linear maps H -> A -------------------------------------------------------

class PatternError(ValueError):
    pass


class LinMapHtoA:
    """Linear map from a Hopf algebra to an algebra.

    Either an algebra map given on generators (``images``), or a rule on a
    monomial basis: ``pattern(word)`` returns ``(exponents, scale)`` with
    ``word = scale * basis(exponents)``, and ``rule(*exponents)`` is the image
    of the basis element.  Words outside the pattern are an error.
    """

    def __init__(self, hopf: HopfStructure, target: Presentation, images: Mapping | None = None,
                 rule: Callable | None = None, pattern: Callable | None = None,
                 anti: bool = False, name: str = ""):
        self.hopf = hopf
        self.target = target
        self.name = name
        if images is not None:
            self.kind = "algebra"
            self.linmap = LinMap(hopf.base, target, images, anti=anti, name=name)
        elif rule is not None and pattern is not None:
            self.kind = "basis"
            self.linmap = None
        else:
            raise StructuralError("give generator images or a basis rule with its pattern")
        self.rule, self.pattern = rule, pattern
        self._cache: Dict[tuple, NCPoly] = {}

    @classmethod
    def from_linmap(cls, hopf: HopfStructure, f: LinMap, name: str = "") -> "LinMapHtoA":
        m = cls.__new__(cls)
        m.hopf, m.target, m.name, m.kind, m.linmap = hopf, f.target, name, "algebra", f
        m.rule = m.pattern = None
        m._cache = {}
        return m

    def word(self, w: tuple) -> NCPoly:
        hit = self._cache.get(w)
        if hit is None:
            H = self.hopf.base
            if self.kind == "algebra":
                hit = self.linmap(NCPoly(H, {w: H.params.one()}))
            else:
                got = self.pattern(w)
                if got is None:
                    raise PatternError(f"{self.name}: {H.word_str(w)} is not a basis monomial")
                exps, scale = got
                hit = self.rule(*exps) * scale
            self._cache[w] = hit
        return hit

    def __call__(self, h: NCPoly) -> NCPoly:
        out = self.target.zero()
        for w, c in h.terms.items():
            out = out + self.word(w) * c
        return out


def unit_counit_map(hopf: HopfStructure, target: Presentation) -> LinMapHtoA:
    H = hopf.base
    return LinMapHtoA.from_linmap(hopf, LinMap(H, target, {g: target.scalar(hopf.counit(H.g(g)))
                                                            for g in range(len(H.keys))}), "eps")


def convolution(f: LinMapHtoA, g: LinMapHtoA, hs: HopfStructure, h: NCPoly) -> NCPoly:
    """``(f * g)(h) = f(h_(1)) g(h_(2))``."""
    A = f.target
    out = A.zero()
    for coef, (w1, w2) in split_legs(hs.T2, hs.coproduct(h)):
        out = out + A.mul(f.word(w1), g.word(w2)) * coef
    return out


def cleaving_check(gamma: LinMapHtoA, gamma_inv: LinMapHtoA | None, c: Coaction,
                   test_set: Iterable[NCPoly]) -> CheckReport:
    """Comodule property and both convolution identities on each test element."""
    hs = c.hopf
    A, H = c.source, hs.base
    rep = CheckReport(f"cleaving {gamma.name}")
    if gamma.kind == "algebra":
        bad = rule_residuals(gamma.linmap)
        rep.add(f"{gamma.name} extends to an algebra map", not bad, bad[0][0] if bad else None)
        if gamma_inv is None:
            from .maps import compose
            gamma_inv = LinMapHtoA.from_linmap(hs, compose(gamma.linmap, hs.antipode),
                                               f"{gamma.name} o S")
    if gamma_inv is None:
        raise StructuralError("a convolution inverse is needed for a basis-rule map")
    for h in test_set:
        label = H.format(h)
        lhs = c(gamma(h))
        rhs = c.T.zero()
        for coef, (w1, w2) in split_legs(hs.T2, hs.coproduct(h)):
            rhs = rhs + c.elem(gamma.word(w1), NCPoly(H, {w2: coef}))
        rep.add(f"comodule map on {label}", lhs == rhs, lhs - rhs)
        e = A.scalar(hs.counit(h))
        got = convolution(gamma, gamma_inv, hs, h)
        rep.add(f"gamma * gamma^-1 on {label}", got == e, got)
        got = convolution(gamma_inv, gamma, hs, h)
        rep.add(f"gamma^-1 * gamma on {label}", got == e, got)
    return rep


# -- GL(2): the monomial basis Dt^p t^m n^r and the cleaving maps --------------

def _power(pres: Presentation, x: NCPoly, xinv: NCPoly, k: int) -> NCPoly:
    base = x if k >= 0 else xinv
    return pres.product([base] * abs(k)) if k else pres.one()


class GL2Basis:
    """The basis ``Dt^p t^m n^r`` (``p, m`` integers, ``r >= 0``) of the parabolic
    quotient of GL(2), or ``Dt^p t^m`` for its diagonal quotient."""

    def __init__(self, H: HopfStructure):
        self.hopf = H
        B = H.base
        self.B = B
        self.t = next(k for k in B.keys if k[:3] == ("p", 1, 1))
        self.n = next((k for k in B.keys if k[:3] == ("p", 1, 2)), None)
        self.s = next(k for k in B.keys if k[:3] == ("p", 2, 2))
        self.Dt = next(k for k in B.keys if k[0] == "Dt")
        self.Dtinv = next(k for k in B.keys if k[0] == "Dtinv")
        self._pattern: Dict[tuple, tuple] = {}

    def element(self, p: int, m: int, r: int = 0) -> NCPoly:
        B = self.B
        if r and self.n is None:
            raise DomainError("no n in this quotient")
        D = _power(B, B.g(self.Dt), B.g(self.Dtinv), p)
        t = _power(B, B.g(self.t), self.hopf.p11inv, m)
        nn = B.product([B.g(self.n)] * r) if r else B.one()
        return B.product([D, t, nn])

    def pattern(self, w: tuple):
        """``((p, m, r), scale)`` with ``word = scale * element(p, m, r)``, or None."""
        if w in self._pattern:
            return self._pattern[w]
        B = self.B
        order = [self.t, self.n, self.s, self.Dtinv]
        idx = [B.gen(k) if k is not None else None for k in order]
        counts = [0, 0, 0, 0]
        pos = 0
        for g in w:
            if g not in idx[pos:]:
                self._pattern[w] = None
                return None
            pos = idx.index(g)
            counts[pos] += 1
        i, j, k, l = counts
        exps = (k - l, i - k, j)
        elt = self.element(*exps)
        got = None
        if len(elt.terms) == 1 and w in elt.terms:
            got = (exps, elt.terms[w].inverse())
        self._pattern[w] = got
        return got

    def monomials(self, p_range, m_range, r_range=(0,)) -> List[NCPoly]:
        return [self.element(p, m, r) for p in p_range for m in m_range for r in r_range]


def gl2_cleaving_maps(H: HopfStructure, C: Presentation, A: Presentation):
    """``gamma_2: Dt^p t^m n^r -> (-q)^p D^p c^m d^r`` and its convolution inverse
    ``Dt^p t^m n^r -> (-1)^p q^(-p + r(r-1)) d^r c^-m D^(-r-p)`` on the chart at ``a_21``.

    On the diagonal quotient (no ``n``) these become ``gamma^0_2`` and its inverse.
    """
    from .sheaf import chart_embedding
    basis = GL2Basis(H)
    q = C.param("q")
    phi = chart_embedding(A, C) if A is not None else None
    c, cinv = C.g(("a", 2, 1)), C.g(("inv", "a", 2, 1))
    D, Dinv = C.g(("D",)), C.g(("Dinv",))
    d = phi.on_gen(("a", 2, 2)) if phi is not None else C.zero()

    def sgn(p):
        return -1 if p % 2 else 1

    def gamma(p, m, r=0):
        return C.product([_power(C, D, Dinv, p), _power(C, c, cinv, m), C.product([d] * r)]) \
            * (q ** p * sgn(p))

    def gamma_bar(p, m, r=0):
        return C.product([C.product([d] * r), _power(C, c, cinv, -m), _power(C, D, Dinv, -r - p)]) \
            * (q ** (-p + r * (r - 1)) * sgn(p))

    zero = basis.n is None
    g = LinMapHtoA(H, C, rule=gamma, pattern=basis.pattern, name="gamma0_2" if zero else "gamma_2")
    gb = LinMapHtoA(H, C, rule=gamma_bar, pattern=basis.pattern,
                    name="gamma0_2 bar" if zero else "gamma_2 bar")
    return g, gb, basis


def chart_one_cleaving(H: HopfStructure, C: Presentation, A: Presentation) -> LinMapHtoA:
    """``gamma_1: p_1j -> a_1j, p_rs -> u_rs, Dt^-1 -> D^-1`` as an algebra map into the first chart.

    Works for any quotient of the parabolic algebra whose generators are among
    ``p_ij``, ``Dt``, ``Dt^-1`` (killed generators simply have no image).
    """
    from .sheaf import chart_embedding, chart_u
    phi = chart_embedding(A, C)
    images = {}
    for k in H.base.keys:
        if k[0] == "p":
            i, j = k[1], k[2]
            images[k] = phi.on_gen(("a", 1, j)) if i == 1 else chart_u(C, i, j)
        elif k[0] == "Dt":
            images[k] = C.g(("D",))
        elif k[0] == "Dtinv":
            images[k] = C.g(("Dinv",))
    return LinMapHtoA(H, C, images=images, name="gamma_1")


def coproduct_power_formulas_check(H: HopfStructure, c2: Coaction, A: Presentation,
                                   r_max: int = 6) -> CheckReport:
    """``Delta(n^r)`` and ``delta_2(d^r)`` against their binomial closed forms."""
    from math import comb

    from .sheaf import chart_embedding
    rep = CheckReport("coproduct powers")
    basis = GL2Basis(H)
    B, T2 = H.base, H.T2
    C = c2.source
    q = B.param("q")
    n_ = B.g(basis.n)
    t = B.g(basis.t)
    d = chart_embedding(A, C).on_gen(("a", 2, 2))
    c = C.g(("a", 2, 1))
    for r in range(r_max + 1):
        direct = H.coproduct(B.product([n_] * r)) if r else tensor_elem(T2, [B.one(), B.one()])
        closed = T2.zero()
        closed_d = c2.T.zero()
        for j in range(r + 1):
            coef = q ** (j * (r - j)) * comb(r, j)
            right = basis.element(r - j, j - r, j)
            left = B.product([B.product([t] * j), B.product([n_] * (r - j))])
            closed = closed + tensor_elem(T2, [left, right]) * coef
            left_d = C.product([C.product([c] * j), C.product([d] * (r - j))])
            closed_d = closed_d + c2.elem(left_d, right) * coef
        rep.add(f"Delta(n^{r})", direct == closed, direct - closed)
        got = c2(C.product([d] * r)) if r else c2.elem(C.one(), B.one())
        rep.add(f"delta_2(d^{r})", got == closed_d, got - closed_d)
    return rep
