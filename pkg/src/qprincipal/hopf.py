"""Bialgebra and Hopf structure on presented matrix algebras and their quotients."""
from __future__ import annotations

import itertools
from typing import Dict, List, Sequence

from .coeff import DomainError, LaurentPoly, ParamSet
from .maps import LinMap, embed_leg, rule_residuals, split_legs, tensor_elem
from .ncalg import (InvalidHopfIdeal, NCPoly, Presentation, determinant_terms, permutation_sign,
                    quotient, tensor)


def scalar_presentation(params: ParamSet) -> Presentation:
    """The coefficient ring as a presentation with no generators."""
    return Presentation(params, [], [], meta={"kind": "scalars"})


def place(T: Presentation, start: int, x: NCPoly) -> NCPoly:
    """Embed ``x`` (plain or tensor element) into ``T`` starting at leg ``start``."""
    src = x.pres
    if not src.keys:  # scalar
        return T.scalar(x.terms.get((), src.params.zero()).embed(T.params))
    if src.legs is None:
        return embed_leg(T, start, x)
    out = {}
    for w, c in x.terms.items():
        nw = []
        for leg, (off, size) in enumerate(src.legs):
            toff = T.legs[start + leg][0]
            nw += [g - off + toff for g in w if off <= g < off + size]
        out[tuple(nw)] = c.embed(T.params)
    return NCPoly(T, out)


def leg_map(T_src: Presentation, T_tgt: Presentation, maps: Sequence, starts: Sequence[int]) -> LinMap:
    """Apply ``maps[i]`` to leg ``i`` of ``T_src`` and place the result at leg ``starts[i]``."""
    images = {}
    for leg, (off, size) in enumerate(T_src.legs):
        f = maps[leg]
        for g in range(size):
            img = f.images[g] if f is not None else T_src.meta["factors"][leg].g(g)
            images[off + g] = place(T_tgt, starts[leg], img)
    return LinMap(T_src, T_tgt, images)


def multiply_legs(T: Presentation, x: NCPoly, maps: Sequence, target: Presentation) -> NCPoly:
    """``sum c * f_0(w_0) * f_1(w_1) * ...`` for ``x = sum c w_0 (x) w_1 (x) ...``."""
    out = target.zero()
    for c, parts in split_legs(T, x):
        term = target.scalar(c)
        for f, w in zip(maps, parts):
            src = f.source
            term = target.mul(term, f(NCPoly(src, {w: src.params.one()})))
        out = out + term
    return out


class HopfStructure:
    """Coproduct, counit and (optional) antipode given on generators."""

    def __init__(self, base: Presentation, delta_images: Dict, eps_images: Dict,
                 antipode_images: Dict | None = None, name: str = "", check: bool = True,
                 T2: Presentation | None = None):
        self.base = base
        self.name = name or base.meta.get("kind", "hopf")
        self.T2 = T2 if T2 is not None else tensor(base, base)
        self.K = scalar_presentation(base.params)
        self.delta = LinMap(base, self.T2, delta_images, name="coproduct")
        self.eps = LinMap(base, self.K, {k: self.K.scalar(v) for k, v in eps_images.items()},
                          name="counit")
        self.antipode = None
        if antipode_images is not None:
            self.antipode = LinMap(base, base, antipode_images, anti=True, name="antipode")
        self._T3 = None
        if check:
            for f in (self.delta, self.eps):
                bad = rule_residuals(f)
                if bad:
                    raise InvalidHopfIdeal(f"{f.name} does not respect relation {bad[0][0]}")

    @property
    def T3(self) -> Presentation:
        if self._T3 is None:
            self._T3 = tensor(self.base, self.base, self.base)
        return self._T3

    def coproduct(self, x: NCPoly) -> NCPoly:
        return self.delta(x)

    def counit(self, x: NCPoly) -> LaurentPoly:
        return self.eps(x).terms.get((), self.base.params.zero())

    def S(self, x: NCPoly) -> NCPoly:
        if self.antipode is None:
            raise DomainError(f"{self.name} has no antipode")
        return self.antipode(x)

    def identity_map(self) -> LinMap:
        return LinMap(self.base, self.base, {g: self.base.g(g) for g in range(len(self.base.keys))})

    def unit_counit(self) -> LinMap:
        return LinMap(self.base, self.base, {g: self.base.scalar(self.counit(self.base.g(g)))
                                             for g in range(len(self.base.keys))})

    def __repr__(self):
        return f"<HopfStructure {self.name} on {self.base!r}>"


# -- constructors ---------------------------------------------------------

def _n_of(pres: Presentation) -> int:
    n = pres.meta.get("n")
    if n is None:
        raise DomainError("not a GL(n) preset")
    return n


def matrix_coproduct_images(pres: Presentation, T2: Presentation) -> Dict:
    n = _n_of(pres)
    images = {}
    for i in range(1, n + 1):
        for j in range(1, n + 1):
            images[("a", i, j)] = sum((tensor_elem(T2, [pres.g(("a", i, k)), pres.g(("a", k, j))])
                                       for k in range(1, n + 1)), T2.zero())
    for key in (("D",), ("Dinv",)):
        if key in pres.index:
            images[key] = tensor_elem(T2, [pres.g(key), pres.g(key)])
    return images


def matrix_counit_images(pres: Presentation) -> Dict:
    n = _n_of(pres)
    images = {("a", i, j): int(i == j) for i in range(1, n + 1) for j in range(1, n + 1)}
    for key in (("D",), ("Dinv",)):
        if key in pres.index:
            images[key] = 1
    return images


def antipode_gl2_images(pres: Presentation) -> Dict:
    """S(a) = d Dinv, S(b) = -p^-1 b Dinv, S(c) = -p c Dinv, S(d) = a Dinv."""
    if _n_of(pres) != 2:
        raise DomainError("the explicit antipode formula is for n = 2")
    p = pres.meta["pfun"](1, 2)
    Di = pres.g("Dinv")
    a, b, c, d = (pres.g(("a", i, j)) for i, j in ((1, 1), (1, 2), (2, 1), (2, 2)))
    return {("a", 1, 1): d * Di, ("a", 1, 2): (b * Di) * (-p.inverse()),
            ("a", 2, 1): (c * Di) * (-p), ("a", 2, 2): a * Di,
            ("D",): Di, ("Dinv",): pres.g("D")}


def quantum_minor(pres: Presentation, rows: Sequence[int], cols: Sequence[int]) -> NCPoly:
    """Row-form determinant of the submatrix on ``rows`` x ``cols`` (original parameter labels)."""
    pfun = pres.meta["pfun"]
    one = pres.params.one()
    out = pres.zero()
    for perm in itertools.permutations(cols):
        sign = permutation_sign(perm, pfun, one)
        out = out + pres.product(pres.g(("a", r, c)) for r, c in zip(rows, perm)) * sign
    return out


def cofactor_antipode_images(pres: Presentation) -> Dict:
    """S(a_ij) = c_ij M_ji Dinv with scalars c_ij fixed by sum_k S(a_ik) a_kj = delta_ij.

    Only for presets without correction terms (u = 1 families), where the
    column-i Laplace pieces have disjoint supports.  The result is verified on
    both convolution axioms before being returned.
    """
    n = _n_of(pres)
    if n == 1:
        return {("a", 1, 1): pres.g("Dinv"), ("Dinv",): pres.g(("a", 1, 1))}
    if "mu" not in pres.meta:
        raise DomainError("cofactor antipode needs a preset without correction terms")
    det = NCPoly(pres, determinant_terms(pres, n, "row"))
    Di = pres.g("Dinv")
    images = {("D",): Di, ("Dinv",): pres.g("D")}
    idx = range(1, n + 1)
    for i in idx:
        for k in idx:
            minor = quantum_minor(pres, [r for r in idx if r != k], [c for c in idx if c != i])
            piece = minor * pres.g(("a", k, i))
            w, coef = piece.leading()
            target = det.coefficient(w)
            if not target:
                raise DomainError(f"Laplace piece for a[{k}][{i}] not found in the determinant")
            # Dinv a_ki = f a_ki Dinv
            c = target * (coef * pres.meta["det_factor"][k, i]).inverse()
            images[("a", i, k)] = minor * Di * c
    return images


def standard_hopf(pres: Presentation, with_antipode: bool = True) -> HopfStructure:
    """Matrix coproduct, counit and antipode on a GL(n) preset."""
    T2 = tensor(pres, pres)
    n = _n_of(pres)
    delta = matrix_coproduct_images(pres, T2)
    eps = matrix_counit_images(pres)
    S = None
    if with_antipode:
        if n == 2:
            S = antipode_gl2_images(pres)
        elif "mu" in pres.meta or n == 1:
            S = cofactor_antipode_images(pres)
    hs = HopfStructure(pres, delta, eps, S, name=pres.meta.get("kind", "gl"), T2=T2)
    if S is not None:
        bad = antipode_failures(hs)
        if bad:
            raise DomainError(f"antipode ansatz fails: {bad[0]}")
    return hs


# -- operations -------------------------------------------------------------

def coproduct(x: NCPoly, hs: HopfStructure) -> NCPoly:
    return hs.coproduct(x)


def counit(x: NCPoly, hs: HopfStructure) -> LaurentPoly:
    return hs.counit(x)


def quantum_determinant(pres: Presentation, form: str = "row") -> NCPoly:
    n = _n_of(pres)
    if n > 6:
        raise DomainError("quantum determinant refused for n > 6")
    if n == 1:
        return pres.g(("a", 1, 1))
    return NCPoly(pres, determinant_terms(pres, n, form))


def antipode_gl2(x: NCPoly, hs: HopfStructure) -> NCPoly:
    if _n_of(hs.base) != 2:
        raise DomainError("antipode_gl2 needs n = 2")
    if hs.antipode is None:
        raise DomainError("no antipode attached")
    return hs.S(x)


def check_grouplike(x: NCPoly, hs: HopfStructure) -> bool:
    dx = hs.coproduct(x)
    xx = tensor_elem(hs.T2, [x, x])
    return hs.T2.normalize(dx - xx).is_zero() and hs.counit(x) == 1


def generators_of(pres: Presentation) -> List[int]:
    dead = pres.eliminated()
    return [g for g in range(len(pres.keys)) if g not in dead]


def coassociativity_failures(hs: HopfStructure) -> List[str]:
    T2, T3 = hs.T2, hs.T3
    left = leg_map(T2, T3, [hs.delta, None], [0, 2])
    right = leg_map(T2, T3, [None, hs.delta], [0, 1])
    bad = []
    for g in generators_of(hs.base):
        d = hs.delta.images[g]
        if left(d) != right(d):
            bad.append(hs.base.names[g])
    return bad


def counit_failures(hs: HopfStructure) -> List[str]:
    A = hs.base
    ident = hs.identity_map()
    eps_as_A = LinMap(A, A, {g: A.scalar(hs.counit(A.g(g))) for g in range(len(A.keys))})
    bad = []
    for g in generators_of(A):
        d = hs.delta.images[g]
        x = A.g(g)
        if multiply_legs(hs.T2, d, [eps_as_A, ident], A) != x:
            bad.append(f"(eps x id) on {A.names[g]}")
        if multiply_legs(hs.T2, d, [ident, eps_as_A], A) != x:
            bad.append(f"(id x eps) on {A.names[g]}")
    return bad


def antipode_failures(hs: HopfStructure) -> List[str]:
    A = hs.base
    ident = hs.identity_map()
    bad = []
    for g in generators_of(A):
        d = hs.delta.images[g]
        e = A.scalar(hs.counit(A.g(g)))
        if multiply_legs(hs.T2, d, [hs.antipode, ident], A) != e:
            bad.append(f"S(h1) h2 on {A.names[g]}")
        if multiply_legs(hs.T2, d, [ident, hs.antipode], A) != e:
            bad.append(f"h1 S(h2) on {A.names[g]}")
    return bad


def induce_quotient_hopf(hs: HopfStructure, killed, rename=None, kind: str | None = None):
    """Quotient by a Hopf ideal generated by generators; returns ``(HopfStructure, projection)``."""
    Q, proj = quotient(hs.base, killed, rename=rename, kind=kind)
    TQ = tensor(Q, Q)
    pp = leg_map(hs.T2, TQ, [proj, proj], [0, 1])
    kill = {hs.base.gen(k) for k in killed}
    for g in sorted(kill):
        if pp(hs.delta.images[g]):
            raise InvalidHopfIdeal(f"not a coideal: coproduct of {hs.base.names[g]} survives the quotient")
        if hs.counit(hs.base.g(g)):
            raise InvalidHopfIdeal(f"counit of {hs.base.names[g]} is nonzero")
        if hs.antipode is not None and proj(hs.S(hs.base.g(g))):
            raise InvalidHopfIdeal(f"antipode of {hs.base.names[g]} leaves the ideal")
    old_of = dict(enumerate(g for g in range(len(hs.base.keys)) if g not in kill))
    delta, eps, S = {}, {}, ({} if hs.antipode is not None else None)
    for qg, og in old_of.items():
        delta[qg] = NCPoly(TQ, pp(hs.delta.images[og]).terms)
        eps[qg] = hs.counit(hs.base.g(og))
        if S is not None:
            S[qg] = proj(hs.S(hs.base.g(og)))
    qhs = HopfStructure(Q, delta, eps, S, name=Q.meta.get("kind", "quotient"), T2=TQ)
    qhs.parent = hs
    qhs.projection = proj
    proj.hopf = qhs
    return qhs, proj
