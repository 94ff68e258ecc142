"""Algebra maps given by generator images, and tensor-leg helpers."""
from __future__ import annotations

from typing import Callable, Dict, List, Mapping, Sequence

from .coeff import LaurentPoly, StructuralError
from .ncalg import NCPoly, Presentation, _add_into


class LinMap:
    """Linear map determined by generator images.

    ``anti=True`` makes it an anti-homomorphism (words are read backwards).
    ``coeff`` optionally transforms coefficients (e.g. a specialization).
    """

    def __init__(self, source: Presentation, target: Presentation,
                 images: Mapping, anti: bool = False,
                 coeff: Callable[[LaurentPoly], LaurentPoly] | None = None, name: str = ""):
        self.source = source
        self.target = target
        self.images: Dict[int, NCPoly] = {}
        for k, v in images.items():
            g = source.gen(k)
            if not isinstance(v, NCPoly):
                v = target.scalar(v)
            self.images[g] = v
        missing = [source.names[g] for g in range(len(source.keys)) if g not in self.images]
        if missing:
            raise StructuralError(f"no image for generators {missing}")
        self.anti = anti
        self.coeff = coeff
        self.name = name
        self._word_cache: Dict[tuple, NCPoly] = {(): target.one()}

    def _coeff(self, c: LaurentPoly) -> LaurentPoly:
        if self.coeff is not None:
            return self.coeff(c)
        if c.params != self.target.params:
            return c.embed(self.target.params)
        return c

    def word(self, w: tuple) -> NCPoly:
        hit = self._word_cache.get(w)
        if hit is not None:
            return hit
        head = self.word(w[:-1])
        img = self.images[w[-1]]
        val = self.target.mul(img, head) if self.anti else self.target.mul(head, img)
        self._word_cache[w] = val
        return val

    def __call__(self, p: NCPoly) -> NCPoly:
        out: dict = {}
        for w, c in p.terms.items():
            cc = self._coeff(c)
            for w2, c2 in self.word(w).terms.items():
                _add_into(out, w2, cc * c2)
        return NCPoly(self.target, out)

    def on_gen(self, key) -> NCPoly:
        return self.images[self.source.gen(key)]

    def __repr__(self):
        kind = "anti-map" if self.anti else "map"
        return f"<LinMap {self.name or kind}: {self.source!r} -> {self.target!r}>"


def compose(g: LinMap, f: LinMap, name: str = "") -> LinMap:
    """``g o f``; anti-ness multiplies."""
    if f.target is not g.source and not f.target.same_alphabet(g.source):
        raise StructuralError("maps are not composable")
    images = {k: g(v) for k, v in f.images.items()}
    coeff = None
    if f.coeff is not None or g.coeff is not None:
        coeff = lambda c: g._coeff(f._coeff(c))
    return LinMap(f.source, g.target, images, anti=(f.anti != g.anti), coeff=coeff, name=name)


def rule_residuals(f: LinMap) -> List[tuple]:
    """Relations of the source not respected by ``f``: ``(relation text, residual)``."""
    src = f.source
    bad = []
    for lhs, rhs in list(src.rules.items()) + list(src.divisors):
        res = f(NCPoly(src, {lhs: src.params.one()})) - f(NCPoly(src, rhs))
        if res:
            bad.append((src.rule_str(lhs), res))
    return bad


def recast(p: NCPoly, pres: Presentation, normalize: bool = True) -> NCPoly:
    """Move ``p`` into a presentation sharing its generator keys (e.g. a localization)."""
    if p.pres is pres:
        return p
    src = p.pres
    table = [pres.gen(k) for k in src.keys]
    out = {}
    for w, c in p.terms.items():
        _add_into(out, tuple(table[g] for g in w), c.embed(pres.params) if c.params != pres.params else c)
    out = NCPoly(pres, out)
    return pres.normalize(out) if normalize else out


def check_algebra_map(f: LinMap) -> bool:
    return not rule_residuals(f)


def identity(pres: Presentation) -> LinMap:
    return LinMap(pres, pres, {g: pres.g(g) for g in range(len(pres.keys))}, name="id")


# -- tensor legs -------------------------------------------------------------

def embed_leg(T: Presentation, leg: int, p: NCPoly) -> NCPoly:
    """Place an element of the ``leg``-th factor into the tensor product."""
    off, size = T.legs[leg]
    out = {}
    for w, c in p.terms.items():
        out[tuple(g + off for g in w)] = c.embed(T.params) if c.params != T.params else c
    return NCPoly(T, out)


def tensor_elem(T: Presentation, factors: Sequence[NCPoly]) -> NCPoly:
    """``f_0 (x) f_1 (x) ...``; concatenating normal leg words stays normal."""
    cur = {(): T.params.one()}
    for leg, p in enumerate(factors):
        off = T.legs[leg][0]
        nxt = {}
        for w1, c1 in cur.items():
            for w2, c2 in p.terms.items():
                c2 = c2.embed(T.params) if c2.params != T.params else c2
                _add_into(nxt, w1 + tuple(g + off for g in w2), c1 * c2)
        cur = nxt
    return NCPoly(T, cur)


def split_legs(T: Presentation, p: NCPoly):
    """Iterate ``(coeff, [leg words])`` over the terms of a tensor element."""
    for w, c in p.terms.items():
        parts = []
        for off, size in T.legs:
            parts.append(tuple(g - off for g in w if off <= g < off + size))
        yield c, parts


def tensor_map(T_src: Presentation, T_tgt: Presentation, maps: Sequence[LinMap]) -> LinMap:
    """Leg-wise tensor product of maps."""
    images = {}
    for leg, (off, size) in enumerate(T_src.legs):
        f = maps[leg]
        for g in range(size):
            images[off + g] = embed_leg(T_tgt, leg, f.images[g])
    return LinMap(T_src, T_tgt, images, name="tensor")


def leg_swap_elem(T: Presentation, p: NCPoly, perm: Sequence[int], T_out: Presentation) -> NCPoly:
    """Permute legs: output leg ``i`` receives input leg ``perm[i]``."""
    out = T_out.zero()
    for c, parts in split_legs(T, p):
        out = out + tensor_elem(T_out, [NCPoly(T_out.meta["factors"][i], {parts[perm[i]]: T_out.params.one()})
                                        for i in range(len(perm))]) * c
    return out
