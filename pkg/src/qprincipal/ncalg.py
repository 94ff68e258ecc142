"""Presented noncommutative algebras with a terminating rewriting system.

A :class:`Presentation` carries two kinds of relations.

* Rewrite rules ``lhs -> rhs`` matched on contiguous subwords.  Every word of
  ``rhs`` is smaller than ``lhs`` in the weighted graded-lexicographic order
  (weighted degree first, then generator index).  These are the q-commutation
  rules, so that rewrite-normal words are the sorted (PBW) words.
* Divisor relations ``lead = tail`` whose sorted leading word is matched as a
  sub-multiset.  This is left Groebner reduction inside the PBW algebra; it is
  used for normal elements such as ``det * Dinv - 1`` whose leading word is
  not a contiguous block of sorted words.

Normal forms are computed by inserting letters one at a time into an already
rewrite-normal word (memoized), followed by divisor reduction.
"""
from __future__ import annotations

import heapq
import itertools
import random
import sys
from collections import Counter
from fractions import Fraction
from typing import Dict, Hashable, Iterable, List, Mapping, Sequence, Tuple

from .coeff import DomainError, LaurentPoly, ParamSet, StructuralError

sys.setrecursionlimit(max(sys.getrecursionlimit(), 20000))

Word = Tuple[int, ...]
Terms = Dict[Word, LaurentPoly]


class RewriteError(ValueError):
    """A relation could not be oriented into a terminating rule."""


class UnsupportedLocalization(ValueError):
    """The generator does not q-commute with every other generator."""


class InvalidHopfIdeal(ValueError):
    """The killed generators do not give a consistent quotient / coideal."""


def word_key(w: Word):
    return (len(w), w)


def _add_into(out: dict, w, c):
    v = out.get(w)
    v = c if v is None else v + c
    if v:
        out[w] = v
    else:
        out.pop(w, None)


class NCPoly:
    """Linear combination of words with Laurent coefficients."""

    __slots__ = ("pres", "terms")

    def __init__(self, pres: "Presentation", terms: Mapping[Word, LaurentPoly] | None = None):
        self.pres = pres
        self.terms = {w: c for w, c in (terms or {}).items() if c}

    def _other(self, other) -> "NCPoly":
        if isinstance(other, NCPoly):
            if other.pres is not self.pres and not self.pres.same_alphabet(other.pres):
                raise StructuralError("polynomials over different presentations")
            return other
        return self.pres.scalar(other)

    def __add__(self, other):
        other = self._other(other)
        out = dict(self.terms)
        for w, c in other.terms.items():
            _add_into(out, w, c)
        return NCPoly(self.pres, out)

    __radd__ = __add__

    def __neg__(self):
        return NCPoly(self.pres, {w: -c for w, c in self.terms.items()})

    def __sub__(self, other):
        return self + (-self._other(other))

    def __rsub__(self, other):
        return (-self) + other

    def __mul__(self, other):
        if isinstance(other, (int, Fraction, LaurentPoly)):
            c = self.pres._coeff(other)
            return NCPoly(self.pres, {w: v * c for w, v in self.terms.items()})
        return self.pres.mul(self, self._other(other))

    def __rmul__(self, other):
        if isinstance(other, (int, Fraction, LaurentPoly)):
            return self * other
        return NotImplemented

    def __pow__(self, k: int):
        if k < 0:
            raise DomainError("negative power of a noncommutative polynomial")
        result = self.pres.one()
        for _ in range(k):
            result = result * self
        return result

    def __eq__(self, other):
        if isinstance(other, (int, Fraction, LaurentPoly)):
            other = self.pres.scalar(other)
        if not isinstance(other, NCPoly):
            return NotImplemented
        return self.terms == other.terms

    def __hash__(self):
        return hash(frozenset(self.terms.items()))

    def is_zero(self) -> bool:
        return not self.terms

    def __bool__(self):
        return bool(self.terms)

    def degree(self) -> int:
        return max((len(w) for w in self.terms), default=-1)

    def coefficient(self, word) -> LaurentPoly:
        w = tuple(self.pres.gen(x) for x in word)
        return self.terms.get(w, self.pres.params.zero())

    def leading(self) -> Tuple[Word, LaurentPoly]:
        w = max(self.terms, key=self.pres.key)
        return w, self.terms[w]

    def __str__(self):
        return self.pres.format(self)

    def __repr__(self):
        return f"NCPoly({self})"


def _is_block(lead: Word) -> bool:
    """True if every sorted word divisible by ``lead`` contains it contiguously."""
    letters = sorted(set(lead))
    return len(letters) == 1 or (len(letters) == 2 and letters[1] == letters[0] + 1)


class Presentation:
    """Ordered generators, rewrite rules, divisor relations and parameters.

    ``keys`` are structured identifiers such as ``("a", 1, 2)`` or
    ``("Dinv",)``; ``names`` are the display names used by the printer and
    the parser.
    """

    def __init__(self, params: ParamSet, keys: Sequence[Hashable], names: Sequence[str],
                 rules: Mapping[Word, Terms] | None = None,
                 divisors: Sequence[Tuple[Word, Terms]] | None = None,
                 weights: Sequence[int] | None = None,
                 inverses: Mapping[int, int] | None = None,
                 meta: dict | None = None, aliases: Mapping[str, int] | None = None,
                 legs: Sequence[Tuple[int, int]] | None = None, check: bool = True):
        if len(keys) != len(names):
            raise StructuralError("keys and names must have the same length")
        if len(set(names)) != len(names):
            raise StructuralError(f"duplicate generator name in {names}")
        if len(set(keys)) != len(keys):
            raise StructuralError("duplicate generator key")
        self.params = params
        self.keys = tuple(keys)
        self.names = tuple(names)
        self.weights = tuple(weights) if weights else (1,) * len(self.keys)
        self._unit_weights = all(x == 1 for x in self.weights)
        self.index = {k: i for i, k in enumerate(self.keys)}
        self.name_index = {n: i for i, n in enumerate(self.names)}
        for alias, i in (aliases or {}).items():
            self.name_index.setdefault(alias, i)
        self.aliases = dict(aliases or {})
        self.inverses = dict(inverses or {})
        self.meta = dict(meta or {})
        self.legs = tuple(legs) if legs else None
        self.rules: Dict[Word, Terms] = {}
        for lhs, rhs in (rules or {}).items():
            self.rules[tuple(lhs)] = {tuple(w): c for w, c in rhs.items() if c}
        self.divisors: List[Tuple[Word, Terms]] = []
        for lead, tail in (divisors or ()):
            self.divisors.append((tuple(lead), {tuple(w): c for w, c in tail.items() if c}))
        if check:
            self._check_rules()
        self._by_last: Dict[int, List[Word]] = {}
        for lhs in sorted(self.rules, key=self.key):
            self._by_last.setdefault(lhs[-1], []).append(lhs)
        self._div_leads = [Counter(lead) for lead, _ in self.divisors]
        self._cache: Dict[Tuple[Word, int], Terms] = {}
        self._div_cache: Dict[Word, Terms | None] = {}
        self._one = params.one()

    # -- order -----------------------------------------------------------
    def key(self, w: Word):
        if self._unit_weights:
            return (len(w), w)
        return (sum(self.weights[g] for g in w), w)

    def _check_rules(self):
        n = len(self.keys)
        for lhs, rhs in list(self.rules.items()) + list(self.divisors):
            if not lhs or any(not 0 <= g < n for g in lhs):
                raise RewriteError(f"relation lhs {lhs} not over the alphabet")
            for w, c in rhs.items():
                if any(not 0 <= g < n for g in w):
                    raise RewriteError(f"relation rhs word {w} not over the alphabet")
                if self.key(w) >= self.key(lhs):
                    raise RewriteError(
                        f"relation {self.word_str(lhs)} -> ... has rhs word {self.word_str(w)} "
                        "not smaller in the graded order")
                if c.params != self.params:
                    raise StructuralError("coefficient over a foreign parameter set")

    # -- construction from relations ----------------------------------------
    @classmethod
    def from_relations(cls, params, keys, names, relations: Iterable[Terms],
                       directed: bool = False, **kw) -> "Presentation":
        """Orient each relation (``sum = 0``) at its leading word, interreducing.

        A relation whose leading coefficient is not a unit of the Laurent ring
        cannot be oriented and raises :class:`RewriteError`.  Leading words that
        are unsorted or a contiguous block become rewrite rules, other sorted
        leading words become divisor relations.  The result is inter-reduced,
        so equal inputs in any order give structurally equal presentations
        (as long as each prefix of the input is consistent).
        """
        kw.setdefault("check", True)
        pres = cls(params, keys, names, {}, **kw)
        rules: Dict[Word, Terms] = {}
        divisors: Dict[Word, Terms] = {}
        for rel in relations:
            red = pres.normalize_terms(rel)
            if not red:
                continue
            lt = max(red, key=pres.key)
            c = red[lt]
            if not c.is_monomial():
                raise RewriteError(
                    f"cannot orient relation at {pres.word_str(lt)}: coefficient {c} is not a unit")
            inv = c.inverse()
            tail = {w: -(v * inv) for w, v in red.items() if w != lt}
            sorted_lt = list(lt) == sorted(lt)
            if not sorted_lt or _is_block(lt):
                rules[lt] = tail
            else:
                divisors[lt] = tail
            pres = cls(params, keys, names, rules, list(divisors.items()), **kw)
        return pres.interreduced()

    def interreduced(self) -> "Presentation":
        """Drop redundant relations and fully reduce every right-hand side."""
        rules = {}
        for lhs, rhs in self.rules.items():
            redundant = any(o != lhs and len(o) < len(lhs) and _contains(lhs, o) for o in self.rules)
            if not redundant:
                rules[lhs] = rhs
        divs = []
        for i, (lead, tail) in enumerate(self.divisors):
            lc = Counter(lead)
            if any(j != i and not (Counter(o) - lc) for j, (o, _) in enumerate(self.divisors)):
                continue
            if not self.is_rewrite_normal(lead):
                continue
            divs.append((lead, tail))
        base = self.with_relations(rules, divs)
        rules = {lhs: base.normalize_terms(rhs) for lhs, rhs in rules.items()}
        divs2 = []
        for lead, tail in divs:
            others = base.with_relations(rules, [d for d in divs if d[0] != lead])
            divs2.append((lead, others.normalize_terms(tail)))
        return self.with_relations(rules, divs2)

    def with_relations(self, rules, divisors=None, **changes) -> "Presentation":
        kw = dict(weights=self.weights, inverses=self.inverses, meta=self.meta,
                  aliases=self.aliases, legs=self.legs)
        kw.update(changes)
        divisors = self.divisors if divisors is None else divisors
        return Presentation(self.params, self.keys, self.names, rules, divisors, **kw)

    # -- alphabet ------------------------------------------------------------
    def __len__(self):
        return len(self.keys)

    def gen(self, key) -> int:
        if isinstance(key, int):
            if not 0 <= key < len(self.keys):
                raise KeyError(f"generator index {key} out of range")
            return key
        if key in self.index:
            return self.index[key]
        if isinstance(key, str) and key in self.name_index:
            return self.name_index[key]
        raise KeyError(f"unknown generator {key!r}")

    def has(self, key) -> bool:
        try:
            self.gen(key)
            return True
        except KeyError:
            return False

    def g(self, key) -> NCPoly:
        """The generator as a normalized element."""
        return self.normalize({(self.gen(key),): self._one})

    def inv(self, key) -> NCPoly:
        g = self.gen(key)
        if g not in self.inverses:
            raise DomainError(f"{self.names[g]} has no inverse generator")
        return self.g(self.inverses[g])

    def word_poly(self, word: Sequence, coeff=None) -> NCPoly:
        """Un-normalized single word (generators given by key, name or index)."""
        w = tuple(self.gen(x) for x in word)
        c = self._one if coeff is None else self._coeff(coeff)
        return NCPoly(self, {w: c})

    def monomial(self, *factors) -> NCPoly:
        """Normalized product; a factor is a key or a list ``[key, power]``."""
        result = self.one()
        for f in factors:
            key, k = (f[0], f[1]) if isinstance(f, list) else (f, 1)
            x = self.g(key) if k >= 0 else self.inv(key)
            for _ in range(abs(k)):
                result = self.mul(result, x)
        return result

    def _coeff(self, c) -> LaurentPoly:
        if isinstance(c, LaurentPoly):
            if c.params != self.params:
                return c.embed(self.params)
            return c
        return self.params.const(c)

    def one(self) -> NCPoly:
        return NCPoly(self, {(): self._one})

    def zero(self) -> NCPoly:
        return NCPoly(self, {})

    def scalar(self, c) -> NCPoly:
        c = self._coeff(c)
        return NCPoly(self, {(): c} if c else {})

    def param(self, name: str, exp: int = 1) -> LaurentPoly:
        return self.params.var(name, exp)

    def same_alphabet(self, other: "Presentation") -> bool:
        return self.keys == other.keys and self.params == other.params

    def same_as(self, other: "Presentation") -> bool:
        """Structural equality: parameters, ordered alphabet, weights and relations."""
        return (self.params == other.params and self.names == other.names
                and self.weights == other.weights and self.rules == other.rules
                and dict(self.divisors) == dict(other.divisors))

    def eliminated(self) -> set:
        """Generators rewritten away by single-letter rules."""
        return {lhs[0] for lhs in self.rules if len(lhs) == 1}

    # -- normal forms ------------------------------------------------------
    def is_rewrite_normal(self, word: Word) -> bool:
        for i in range(len(word)):
            for lhs in self._by_last.get(word[i], ()):
                L = len(lhs)
                if L <= i + 1 and word[i + 1 - L:i + 1] == lhs:
                    return False
        return True

    def _divisor_for(self, word: Word):
        if not self.divisors:
            return None
        wc = Counter(word)
        for i, lc in enumerate(self._div_leads):
            if not (lc - wc):
                return i
        return None

    def is_normal(self, word: Word) -> bool:
        return self.is_rewrite_normal(word) and self._divisor_for(word) is None

    def _append(self, w: Word, g: int) -> Terms:
        key = (w, g)
        hit = self._cache.get(key)
        if hit is not None:
            return hit
        ww = w + (g,)
        result = None
        for lhs in self._by_last.get(g, ()):
            L = len(lhs)
            if L <= len(ww) and ww[-L:] == lhs:
                prefix = ww[:-L]
                result = {}
                for rw, c in self.rules[lhs].items():
                    for nw, c2 in self._mul_words(prefix, rw).items():
                        _add_into(result, nw, c * c2)
                break
        if result is None:
            result = {ww: self._one}
        self._cache[key] = result
        return result

    def _mul_words(self, w: Word, v: Word) -> Terms:
        cur: Terms = {w: self._one}
        for g in v:
            nxt: Terms = {}
            for ww, c in cur.items():
                for w2, c2 in self._append(ww, g).items():
                    _add_into(nxt, w2, c * c2)
            cur = nxt
            if not cur:
                break
        return cur

    def _div_replace(self, w: Word):
        """Rewrite-normal terms equal to ``w`` modulo a divisor, or None."""
        if w in self._div_cache:
            return self._div_cache[w]
        i = self._divisor_for(w)
        if i is None:
            self._div_cache[w] = None
            return None
        lead, tail = self.divisors[i]
        rest = Counter(w) - Counter(lead)
        comp = tuple(sorted(rest.elements()))
        rel = {lead: self._one}
        for tw, tc in tail.items():
            _add_into(rel, tw, -tc)
        h: Terms = {}
        for rw, rc in rel.items():
            for w2, c2 in self._mul_words(comp, rw).items():
                _add_into(h, w2, rc * c2)
        lam = h.pop(w, None)
        if lam is None or not lam.is_monomial() or any(self.key(x) > self.key(w) for x in h):
            raise RewriteError(f"divisor reduction of {self.word_str(w)} is not leading-term exact")
        lam_inv = lam.inverse()
        out = {x: -(c * lam_inv) for x, c in h.items()}
        self._div_cache[w] = out
        return out

    def _reduce_divisors(self, terms: Terms) -> Terms:
        if not self.divisors:
            return terms
        out: Terms = {}
        work = dict(terms)
        heap = [(_neg_key(self.key(w)), w) for w in work]
        heapq.heapify(heap)
        while heap:
            _, w = heapq.heappop(heap)
            c = work.pop(w, None)
            if c is None:
                continue
            rep = self._div_replace(w)
            if rep is None:
                out[w] = c
                continue
            for w2, c2 in rep.items():
                if w2 not in work:
                    heapq.heappush(heap, (_neg_key(self.key(w2)), w2))
                _add_into(work, w2, c * c2)
        return out

    def nf_word(self, word: Word) -> Terms:
        return self._reduce_divisors(self._mul_words((), tuple(word)))

    def normalize_terms(self, terms: Mapping[Word, LaurentPoly]) -> Terms:
        out: Terms = {}
        for w, c in terms.items():
            if not c:
                continue
            w = tuple(w)
            if self.is_rewrite_normal(w):
                _add_into(out, w, c)
                continue
            for w2, c2 in self._mul_words((), w).items():
                _add_into(out, w2, c * c2)
        return self._reduce_divisors(out)

    def normalize(self, p) -> NCPoly:
        terms = p.terms if isinstance(p, NCPoly) else p
        return NCPoly(self, self.normalize_terms(terms))

    def mul(self, p: NCPoly, r: NCPoly) -> NCPoly:
        for x in (p, r):
            if x.pres is not self and not self.same_alphabet(x.pres):
                raise StructuralError("alphabet mismatch")
        # words are appended letter by letter, which needs a normal left factor
        if not all(self.is_rewrite_normal(w) for w in p.terms):
            p = self.normalize(p)
        out: Terms = {}
        for w1, c1 in p.terms.items():
            for w2, c2 in r.terms.items():
                c = c1 * c2
                for w, c3 in self._mul_words(w1, w2).items():
                    _add_into(out, w, c * c3)
        return NCPoly(self, self._reduce_divisors(out))

    def product(self, factors: Iterable[NCPoly]) -> NCPoly:
        result = self.one()
        for f in factors:
            result = self.mul(result, f)
        return result

    def commutation_factor(self, x: NCPoly, y: NCPoly):
        """Scalar ``c`` with ``x*y = c*y*x``, or ``None`` if there is none."""
        xy = self.mul(x, y)
        yx = self.mul(y, x)
        if not yx:
            return None if xy else self._one
        w, lead = yx.leading()
        if w not in xy.terms or not lead.is_monomial():
            return None
        factor = xy.terms[w] * lead.inverse()
        return factor if (yx * factor) == xy else None

    # -- printing ------------------------------------------------------------
    def word_str(self, w: Word) -> str:
        if not w:
            return "1"
        out = []
        for g, grp in itertools.groupby(w):
            k = len(list(grp))
            out.append(self.names[g] if k == 1 else f"{self.names[g]}^{k}")
        return "*".join(out)

    def _monomial_str(self, w: Word) -> str:
        if self.legs is None:
            return self.word_str(w)
        parts = []
        for leg, (off, size) in enumerate(self.legs):
            sub = tuple(g for g in w if off <= g < off + size)
            factor = self.meta["factors"][leg]
            parts.append("(" + factor.word_str(tuple(g - off for g in sub)) + ")")
        return " (#) ".join(parts)

    def format(self, p: NCPoly) -> str:
        if not p.terms:
            return "0"
        out = []
        for i, w in enumerate(sorted(p.terms, key=self.key)):
            c = p.terms[w]
            mono = self._monomial_str(w) if (w or self.legs) else ""
            if c.is_monomial():
                neg = next(iter(c.terms.values())) < 0
                cs = str(-c if neg else c)
                if not mono:
                    body = cs
                elif cs == "1":
                    body = mono
                else:
                    body = f"{cs}*{mono}"
            else:
                neg = c.sorted_terms()[0][1] < 0
                cs = str(-c if neg else c)
                body = f"({cs})" + (f"*{mono}" if mono else "")
            if i == 0:
                out.append(("-" if neg else "") + body)
            else:
                out.append((" - " if neg else " + ") + body)
        return "".join(out)

    def rule_str(self, lhs: Word) -> str:
        rhs = self.rules.get(lhs)
        if rhs is None:
            rhs = dict(self.divisors)[lhs]
        return f"{self.word_str(lhs)} = {self.format(NCPoly(self, rhs))}"

    def relation_lines(self) -> List[str]:
        return [self.rule_str(l) for l in self.rules] + [self.rule_str(l) for l, _ in self.divisors]

    def __repr__(self):
        kind = self.meta.get("kind", "custom")
        return (f"<Presentation {kind}: {len(self.keys)} generators, {len(self.rules)} rules, "
                f"{len(self.divisors)} divisor relations>")

    # -- specialization ----------------------------------------------------
    def specialize(self, bindings: Mapping[str, object], target: ParamSet | None = None) -> "Presentation":
        if target is None:
            target = self.params.without(bindings)
            for v in bindings.values():
                if isinstance(v, LaurentPoly):
                    target = target.union(v.params)
        sp = lambda terms: {w: c.specialize(bindings, target) for w, c in terms.items()}
        rules = {lhs: sp(rhs) for lhs, rhs in self.rules.items()}
        divs = [(lead, sp(tail)) for lead, tail in self.divisors]
        meta = {k: v for k, v in self.meta.items() if not k.startswith("_")}
        if "mu" in meta:
            meta["mu"] = {k: v.specialize(bindings, target) for k, v in meta["mu"].items()}
        meta["specialized_from"] = self
        meta["bindings"] = dict(bindings)
        return Presentation(target, self.keys, self.names, rules, divs, weights=self.weights,
                            inverses=self.inverses, meta=meta, aliases=self.aliases, legs=self.legs)

    def specialize_poly(self, p: NCPoly, spres: "Presentation") -> NCPoly:
        """Image of ``p`` in a specialization ``spres`` of this presentation (not renormalized)."""
        b = spres.meta["bindings"]
        return NCPoly(spres, {w: c.specialize(b, spres.params) for w, c in p.terms.items()})


def _neg_key(k):
    # max-heap on (weight, word): negate the weight, invert word order
    return (-k[0], tuple(-g for g in k[1]) + (1,))


def _contains(word: Word, sub: Word) -> bool:
    L = len(sub)
    return any(word[i:i + L] == sub for i in range(len(word) - L + 1))


# ---------------------------------------------------------------------------
# confluence
# ---------------------------------------------------------------------------

class ConfluenceReport:
    def __init__(self):
        self.pairs_checked = 0
        self.divisor_checks = 0
        self.random_checked = 0
        self.failures: List[Tuple[str, str]] = []

    @property
    def ok(self) -> bool:
        return not self.failures

    def witness(self):
        return self.failures[0] if self.failures else None

    def __repr__(self):
        status = "pass" if self.ok else f"fail at {self.failures[0][0]}"
        return (f"<Confluence {status}: {self.pairs_checked} overlaps, {self.divisor_checks} divisor checks, "
                f"{self.random_checked} random words>")


def _rhs_then_nf(pres: Presentation, prefix: Word, rhs: Terms, suffix: Word) -> Terms:
    out: Terms = {}
    for w, c in rhs.items():
        for w2, c2 in pres.nf_word(prefix + w + suffix).items():
            _add_into(out, w2, c * c2)
    return out


def critical_pairs(pres: Presentation):
    """Overlap and inclusion ambiguities ``(word, (i, lhs1), (j, lhs2))`` of the rewrite rules."""
    by_first: Dict[int, List[Word]] = {}
    for lhs in pres.rules:
        by_first.setdefault(lhs[0], []).append(lhs)
    for u in pres.rules:
        for k in range(1, len(u)):
            for v in by_first.get(u[-k], ()):
                if len(v) > k and v[:k] == u[-k:]:
                    yield u + v[k:], (0, u), (len(u) - k, v)
        for v in pres.rules:
            if v != u and len(v) <= len(u):
                for i in range(len(u) - len(v) + 1):
                    if u[i:i + len(v)] == v:
                        yield u, (0, u), (i, v)


def random_reduce(pres: Presentation, word: Word, rng: random.Random) -> Terms:
    """Rewrite choosing a random redex at every step (no memo), then divisor-reduce."""
    out: Terms = {}
    stack = [(tuple(word), pres._one)]
    while stack:
        w, c = stack.pop()
        redexes = []
        for i in range(len(w)):
            for lhs in pres._by_last.get(w[i], ()):
                L = len(lhs)
                if L <= i + 1 and w[i + 1 - L:i + 1] == lhs:
                    redexes.append((i + 1 - L, lhs))
        if not redexes:
            _add_into(out, w, c)
            continue
        pos, lhs = rng.choice(redexes)
        for rw, rc in pres.rules[lhs].items():
            stack.append((w[:pos] + rw + w[pos + len(lhs):], c * rc))
    return pres._reduce_divisors(out)


def _relation_terms(pres, lead, tail) -> Terms:
    rel = {lead: pres._one}
    for w, c in tail.items():
        _add_into(rel, w, -c)
    return rel


def _live_generators(pres):
    dead = pres.eliminated()
    return [g for g in range(len(pres.keys)) if g not in dead]


def check_confluence(pres: Presentation, degree_bound: int = 3, samples: int = 200,
                     seed: int = 0) -> ConfluenceReport:
    """Certify the rewriting system behind ``pres``.

    * every overlap / inclusion ambiguity of the rewrite rules resolves;
    * every divisor relation is two-sided (``r*x`` and ``x*r`` reduce to 0)
      and pairs of divisor relations have resolving S-polynomials;
    * random-strategy reductions and reassociated products of random words
      agree with ``nf``.
    """
    if degree_bound < 3:
        raise DomainError("degree_bound must be at least 3")
    rep = ConfluenceReport()
    for word, (i, u), (j, v) in critical_pairs(pres):
        rep.pairs_checked += 1
        r1 = _rhs_then_nf(pres, word[:i], pres.rules[u], word[i + len(u):])
        r2 = _rhs_then_nf(pres, word[:j], pres.rules[v], word[j + len(v):])
        if r1 != r2:
            rep.failures.append((pres.word_str(word),
                                 f"{pres.format(NCPoly(pres, r1))} != {pres.format(NCPoly(pres, r2))}"))
    live = _live_generators(pres)
    for lead, tail in pres.divisors:
        rel = NCPoly(pres, _relation_terms(pres, lead, tail))
        for x in live:
            gx = NCPoly(pres, {(x,): pres._one})
            for side, val in (("right", pres.mul(rel, gx)), ("left", pres.mul(gx, rel))):
                rep.divisor_checks += 1
                if val:
                    rep.failures.append((pres.word_str(lead),
                                         f"divisor relation not two-sided ({side} by {pres.names[x]}): {val}"))
    for (l1, t1), (l2, t2) in itertools.combinations(pres.divisors, 2):
        rep.divisor_checks += 1
        lcm = Counter(l1) | Counter(l2)
        m = tuple(sorted(lcm.elements()))
        vals = []
        for lead, tail in ((l1, t1), (l2, t2)):
            comp = tuple(sorted((lcm - Counter(lead)).elements()))
            h = {}
            for rw, rc in _relation_terms(pres, lead, tail).items():
                for w2, c2 in pres._mul_words(comp, rw).items():
                    _add_into(h, w2, rc * c2)
            lam = h[m]
            vals.append(NCPoly(pres, {w: c * lam.inverse() for w, c in h.items()}))
        s = pres.normalize(vals[0] - vals[1])
        if s:
            rep.failures.append((pres.word_str(m), f"divisor S-polynomial does not reduce: {s}"))
    rng = random.Random(seed)
    if live:
        for _ in range(samples):
            d = rng.randint(1, degree_bound)
            w = tuple(rng.choice(live) for _ in range(d))
            rep.random_checked += 1
            if random_reduce(pres, w, rng) != pres.nf_word(w):
                rep.failures.append((pres.word_str(w), "random-order reduction differs from nf"))
            k = rng.randint(0, d)
            x = NCPoly(pres, pres.nf_word(w[:k]))
            y = NCPoly(pres, pres.nf_word(w[k:]))
            if pres.mul(x, y) != NCPoly(pres, pres.nf_word(w)):
                rep.failures.append((pres.word_str(w), "reassociated product differs from nf"))
    return rep


def random_element(pres: Presentation, rng: random.Random, terms: int = 3, degree: int = 4) -> NCPoly:
    """Sum of random words with small integer coefficients times random parameter monomials."""
    live = _live_generators(pres)
    out: Terms = {}
    for _ in range(rng.randint(1, terms)):
        w = tuple(rng.choice(live) for _ in range(rng.randint(0, degree)))
        exps = {name: rng.randint(-2, 2) for name in pres.params.names}
        c = LaurentPoly.monomial(pres.params, exps, rng.choice([-3, -2, -1, 1, 2, 3]))
        _add_into(out, w, c)
    return NCPoly(pres, out)


def specialization_failures(pres: Presentation, bindings: Mapping[str, object], samples: int = 200,
                            seed: int = 0, degree: int = 4) -> List[str]:
    """Random elements on which normalize-then-specialize differs from specialize-then-normalize."""
    sp = pres.specialize(bindings)
    rng = random.Random(seed)
    bad = []
    for _ in range(samples):
        x = random_element(pres, rng, degree=degree)
        one = pres.specialize_poly(pres.normalize(x), sp)
        other = sp.normalize(pres.specialize_poly(x, sp))
        if sp.normalize(one) != other:
            bad.append(pres.format(x))
    return bad


# ---------------------------------------------------------------------------
# presets
# ---------------------------------------------------------------------------

def _letter_names(n):
    if n == 2:
        return {(1, 1): "a", (1, 2): "b", (2, 1): "c", (2, 2): "d"}
    return {(i, j): f"a[{i}][{j}]" for i in range(1, n + 1) for j in range(1, n + 1)}


def mu_matrix_from_q(params: ParamSet, n: int, qfun) -> dict:
    """mu[i,j] = q_ij (i<j), 1 (i=j), q_ji^-1 (i>j)."""
    mu = {}
    one = params.one()
    for i in range(1, n + 1):
        for j in range(1, n + 1):
            if i < j:
                mu[i, j] = qfun(i, j)
            elif i == j:
                mu[i, j] = one
            else:
                mu[i, j] = qfun(j, i).inverse()
    return mu


def det_commutation_factor(n, i, k, qfun, pfun, one):
    """Scalar f with a_ik D = f D a_ik for the multiparameter determinant."""
    f = one
    for a in range(1, k):
        f = f * qfun(a, k)
    for b in range(1, i):
        f = f * qfun(b, i).inverse()
    for g in range(k + 1, n + 1):
        f = f * pfun(k, g)
    for d in range(i + 1, n + 1):
        f = f * pfun(i, d).inverse()
    return f


def permutation_sign(perm, sfun, one):
    """prod over inversions (alpha < beta, perm[beta] < perm[alpha]) of -s(perm[beta], perm[alpha])."""
    s = one
    for a in range(len(perm)):
        for b in range(a + 1, len(perm)):
            if perm[b] < perm[a]:
                s = s * (-sfun(perm[b], perm[a]))
    return s


def gl_swap_relations(idx, n, qfun, pfun) -> List[Terms]:
    """Commutation relations of the multiparameter quantum matrices, as ``y*x - rhs``."""
    one = None
    rels = []
    A = lambda i, j: idx[("a", i, j)]
    agen = [("a", i, j) for i in range(1, n + 1) for j in range(1, n + 1)]
    for x, y in itertools.combinations(agen, 2):
        (_, r1, c1), (_, r2, c2) = x, y  # x before y in row-major order
        if r1 == r2:
            lhs, rhs = (A(r2, c2), A(r1, c1)), {(A(r1, c1), A(r2, c2)): pfun(c1, c2).inverse()}
        elif c1 == c2:
            lhs, rhs = (A(r2, c2), A(r1, c1)), {(A(r1, c1), A(r2, c2)): qfun(r1, r2).inverse()}
        elif c1 > c2:
            i, l, j, k = r1, c1, r2, c2
            lhs, rhs = (A(j, k), A(i, l)), {(A(i, l), A(j, k)): pfun(k, l) * qfun(i, j).inverse()}
        else:
            i, k, j, l = r1, c1, r2, c2
            ratio = pfun(i, j) * pfun(k, l).inverse()
            lhs, rhs = (A(j, l), A(i, k)), {(A(i, k), A(j, l)): ratio}
            corr = -(ratio * (pfun(k, l) - qfun(k, l).inverse()))
            if corr:
                rhs[(A(i, l), A(j, k))] = corr
        one = one or next(iter(rhs.values())).params.one()
        rel = {lhs: one}
        for w, c in rhs.items():
            rel[w] = -c
        rels.append(rel)
    return rels


def _gl_build(n, params, qfun, pfun, kind, mu=None, extra_meta=None):
    if n < 1:
        raise DomainError("n must be >= 1")
    one = params.one()
    names = _letter_names(n)
    keys = [("a", i, j) for i in range(1, n + 1) for j in range(1, n + 1)]
    gnames = [names[k[1], k[2]] for k in keys]
    meta = {"kind": kind, "n": n, "qfun": qfun, "pfun": pfun}
    if mu is not None:
        meta["mu"] = dict(mu)
    meta.update(extra_meta or {})
    if n == 1:
        # commutative Laurent ring in a11; the determinant is a11 itself
        keys.append(("Dinv",))
        gnames.append("Dinv")
        rels = [{(0, 1): one, (): -one}, {(1, 0): one, (): -one}]
        meta["det_factor"] = {(1, 1): one}
        meta.setdefault("mu", {(1, 1): one})
        return Presentation.from_relations(params, keys, gnames, rels, inverses={0: 1, 1: 0},
                                           meta=meta, aliases={"D": 0})
    keys += [("D",), ("Dinv",)]
    gnames += ["D", "Dinv"]
    idx = {k: i for i, k in enumerate(keys)}
    D, Di = idx[("D",)], idx[("Dinv",)]
    weights = [1] * len(keys)
    weights[D] = n + 1
    rels = gl_swap_relations(idx, n, qfun, pfun)
    dfac = {}
    for i in range(1, n + 1):
        for k in range(1, n + 1):
            f = det_commutation_factor(n, i, k, qfun, pfun, one)
            dfac[i, k] = f
            # Dinv a_ik = f a_ik Dinv
            rels.append({(Di, idx[("a", i, k)]): one, (idx[("a", i, k)], Di): -f})
    meta["det_factor"] = dfac
    kw = dict(weights=weights, inverses={D: Di, Di: D}, meta=meta)
    swaps = Presentation.from_relations(params, keys, gnames, rels, **kw)
    det = determinant_terms(swaps, n, "row")
    drel = {(D,): one}
    for w, c in det.items():
        drel[w] = -c
    rels += [drel, {(D, Di): one, (): -one}, {(Di, D): one, (): -one}]
    return Presentation.from_relations(params, keys, gnames, rels, **kw)


def determinant_terms(pres: Presentation, n: int, form: str) -> Terms:
    """Permutation expansion of the quantum determinant, normalized in ``pres``."""
    if form not in ("row", "column"):
        raise DomainError(f"unknown determinant form {form!r}")
    qfun, pfun = pres.meta["qfun"], pres.meta["pfun"]
    one = pres.params.one()
    out: Terms = {}
    for perm in itertools.permutations(range(1, n + 1)):
        if form == "row":
            sign = permutation_sign(perm, pfun, one)
            word = tuple(pres.index[("a", r + 1, perm[r])] for r in range(n))
        else:
            sign = permutation_sign(perm, qfun, one)
            word = tuple(pres.index[("a", perm[r], r + 1)] for r in range(n))
        for w, c in pres.nf_word(word).items():
            _add_into(out, w, sign * c)
    return out


def gl2_multi() -> Presentation:
    """Two-parameter GL(2) in the parameters q and p (p = u/q)."""
    params = ParamSet(["p", "q"])
    qv = params.var("q")
    pv = params.var("p")
    return _gl_build(2, params, lambda i, j: qv, lambda i, j: pv, "gl2_multi")


def gln_multi(n: int) -> Presentation:
    """Multiparameter GL(n): parameters q_ij (i<j) and u, with p_ij = u / q_ij."""
    if n < 1:
        raise DomainError("n must be >= 1")
    names = [f"q_{i}{j}" for i in range(1, n + 1) for j in range(i + 1, n + 1)] + ["u"]
    params = ParamSet(names)
    u = params.var("u")
    qfun = lambda i, j: params.var(f"q_{i}{j}")
    pfun = lambda i, j: u * params.var(f"q_{i}{j}", -1)
    return _gl_build(n, params, qfun, pfun, "gln_multi")


def sudbery(n: int) -> Presentation:
    """One-parameter case q_ij = q, p_ij = q^-1."""
    if n < 1:
        raise DomainError("n must be >= 1")
    params = ParamSet(["q"])
    q = params.var("q")
    qi = params.var("q", -1)
    mu = mu_matrix_from_q(params, n, lambda i, j: q)
    return _gl_build(n, params, lambda i, j: q, lambda i, j: qi, "sudbery", mu=mu)


def mu_preset(n: int, params: ParamSet, mu: Mapping, kind: str = "mu", extra_meta=None) -> Presentation:
    """u = 1 family: a_ik a_jl = mu_ij mu_lk a_jl a_ik, no correction terms."""
    qfun = lambda i, j: mu[i, j]
    pfun = lambda i, j: mu[j, i]
    return _gl_build(n, params, qfun, pfun, kind, mu=dict(mu), extra_meta=extra_meta)


def cdv_pairing(n: int):
    """The involution j -> j' with j' = m + j for j <= m and 2m+1 fixed."""
    m = n // 2
    prime = {}
    for j in range(1, m + 1):
        prime[j] = m + j
        prime[m + j] = j
    if n % 2:
        prime[n] = n
    return prime


def cdv_theta_basis(n: int, pairing=None):
    """Solve theta_ij = -theta_ji and theta_ij = -theta_i'j for integer exponent patterns.

    Returns (free parameter names, map (i, j) -> {name: exponent}) so that
    mu_ij = prod name^exponent.  Signed union-find over the unknowns.
    """
    prime = pairing or cdv_pairing(n)
    parent = {}

    def find(x):
        sign = 1
        while parent[x][0] != x:
            nxt, s = parent[x]
            sign *= s
            x = nxt
        return x, sign

    zero = set()

    def union(x, y, s):  # theta_x = s * theta_y
        rx, sx = find(x)
        ry, sy = find(y)
        if rx == ry:
            if sx != s * sy:
                zero.add(rx)
            return
        parent[rx] = (ry, sx * s * sy)
        if rx in zero:
            zero.add(ry)

    cells = [(i, j) for i in range(1, n + 1) for j in range(1, n + 1)]
    for x in cells:
        parent[x] = (x, 1)
    for i, j in cells:
        union((i, j), (j, i), -1)
        union((i, j), (prime[i], j), -1)
    dead = {find(z)[0] for z in zero}
    classes: Dict[tuple, list] = {}
    for x in cells:
        r, sgn = find(x)
        if r not in dead:
            classes.setdefault(r, []).append((x, sgn))
    # name each class after its smallest upper-triangular cell
    rep = {}
    for r, members in classes.items():
        upper = [(x, sgn) for x, sgn in members if x[0] < x[1]]
        rep[r] = min(upper or members)
    roots = sorted(classes, key=lambda r: rep[r][0])
    pname = {r: f"mu_{rep[r][0][0]}{rep[r][0][1]}" for r in roots}
    expr = {}
    for x in cells:
        r, sgn = find(x)
        expr[x] = {pname[r]: sgn * rep[r][1]} if r in pname else {}
    return [pname[r] for r in roots], expr


def cdv(n: int, pairing=None) -> Presentation:
    """mu_ij = exp(-2 pi i theta_ij) as formal symbols with theta_ij = -theta_i'j."""
    if n <= 2:
        raise DomainError("cdv requires n > 2")
    names, expr = cdv_theta_basis(n, pairing)
    params = ParamSet(names)
    mu = {k: LaurentPoly.monomial(params, e) for k, e in expr.items()}
    return mu_preset(n, params, mu, kind="cdv")


def generic_mu(n: int) -> Presentation:
    """Independent mu_ij (i<j): the multiparameter family at u = 1."""
    names = [f"mu_{i}{j}" for i in range(1, n + 1) for j in range(i + 1, n + 1)]
    params = ParamSet(names)
    mu = mu_matrix_from_q(params, n, lambda i, j: params.var(f"mu_{i}{j}"))
    return mu_preset(n, params, mu, kind="generic_mu")


PRESETS = ("gl2_multi", "gln_multi", "sudbery", "cdv", "generic_mu")


def preset(kind: str, n: int | None = None) -> Presentation:
    if kind == "gl2_multi":
        if n not in (None, 2):
            raise DomainError("gl2_multi has n = 2")
        return gl2_multi()
    if n is None:
        raise DomainError(f"preset {kind!r} needs n")
    builders = {"gln_multi": gln_multi, "sudbery": sudbery, "cdv": cdv, "generic_mu": generic_mu}
    if kind not in builders:
        raise DomainError(f"unknown preset {kind!r}")
    return builders[kind](n)


# ---------------------------------------------------------------------------
# constructions
# ---------------------------------------------------------------------------

def swap_factor(pres: Presentation, g: int, x: int):
    """c with g x = c x g from a single pure swap rule, or None."""
    if g == x:
        return pres._one
    hi, lo = (g, x) if g > x else (x, g)
    rhs = pres.rules.get((hi, lo))
    if rhs is None or len(rhs) != 1 or (lo, hi) not in rhs:
        return None
    c = rhs[(lo, hi)]  # hi lo = c lo hi
    if not c.is_monomial():
        return None
    return c if g == hi else c.inverse()


def adjoin_inverse(pres: Presentation, key, name: str | None = None, new_key=None) -> Presentation:
    """Ore localization at a generator that q-commutes with every live generator.

    The generator must not occur in the leading word of a divisor relation;
    otherwise the localized divisor system would need completion.
    """
    g = pres.gen(key)
    for lhs, rhs in pres.rules.items():
        if g in lhs and len(lhs) > 1:
            pure = (len(lhs) == 2 and len(rhs) == 1 and (lhs[1], lhs[0]) in rhs)
            if not pure:
                raise UnsupportedLocalization(f"{pres.names[g]} occurs in rule {pres.rule_str(lhs)}")
    for lead, _ in pres.divisors:
        if g in lead:
            raise UnsupportedLocalization(
                f"{pres.names[g]} occurs in the leading word of {pres.rule_str(lead)}")
    dead = pres.eliminated()
    if g in dead:
        raise UnsupportedLocalization(f"{pres.names[g]} is rewritten away")
    factors = {}
    for x in range(len(pres.keys)):
        if x == g or x in dead or pres.inverses.get(g) == x:
            continue
        c = swap_factor(pres, g, x)
        if c is None:
            raise UnsupportedLocalization(f"{pres.names[g]} and {pres.names[x]} do not q-commute")
        factors[x] = c  # g x = c x g
    gk = pres.keys[g]
    new_key = new_key or ("inv",) + (gk if isinstance(gk, tuple) else (gk,))
    name = name or f"{pres.names[g]}inv"
    pos = g + 1
    shift = lambda i: i if i < pos else i + 1
    keys = list(pres.keys[:pos]) + [new_key] + list(pres.keys[pos:])
    names = list(pres.names[:pos]) + [name] + list(pres.names[pos:])
    weights = list(pres.weights[:pos]) + [1] + list(pres.weights[pos:])
    gi = pos
    mv = lambda terms: {tuple(shift(x) for x in w): c for w, c in terms.items()}
    rules: Dict[Word, Terms] = {tuple(shift(x) for x in lhs): mv(rhs) for lhs, rhs in pres.rules.items()}
    divs = [(tuple(shift(x) for x in lead), mv(tail)) for lead, tail in pres.divisors]
    one = pres._one
    gn = shift(g)
    rules[(gn, gi)] = {(): one}
    rules[(gi, gn)] = {(): one}
    for x, c in factors.items():
        xn = shift(x)
        # g x = c x g  =>  x g^-1 = c g^-1 x
        if gi > xn:
            rules[(gi, xn)] = {(xn, gi): c.inverse()}
        else:
            rules[(xn, gi)] = {(gi, xn): c}
    inverses = {shift(a): shift(b) for a, b in pres.inverses.items()}
    inverses[gn] = gi
    inverses[gi] = gn
    aliases = {a: shift(i) for a, i in pres.aliases.items()}
    meta = {k: v for k, v in pres.meta.items() if not k.startswith("_")}
    meta["localized"] = pres.meta.get("localized", ()) + (gk,)
    return Presentation(pres.params, keys, names, rules, divs, weights=weights, inverses=inverses,
                        meta=meta, aliases=aliases)


def tensor(*presentations: Presentation, legs: int | None = None) -> Presentation:
    """Tensor product: leg-tagged alphabet, legs commute, per-leg relations inherited."""
    if legs is not None and len(presentations) == 1:
        presentations = presentations * legs
    if len(presentations) < 2:
        raise DomainError("tensor needs at least two legs")
    params = presentations[0].params
    for p in presentations[1:]:
        params = params.union(p.params)
    keys, names, weights, rules, divs, inverses, leginfo = [], [], [], {}, [], {}, []
    off = 0
    for leg, p in enumerate(presentations):
        leginfo.append((off, len(p.keys)))
        keys += [(leg, k) for k in p.keys]
        names += [f"{nm}@{leg}" for nm in p.names]
        weights += list(p.weights)
        mv = lambda terms, off=off: {tuple(x + off for x in w): c.embed(params) for w, c in terms.items()}
        for lhs, rhs in p.rules.items():
            rules[tuple(x + off for x in lhs)] = mv(rhs)
        for lead, tail in p.divisors:
            divs.append((tuple(x + off for x in lead), mv(tail)))
        for a, b in p.inverses.items():
            inverses[a + off] = b + off
        off += len(p.keys)
    one = params.one()
    for (o1, s1), (o2, s2) in itertools.combinations(leginfo, 2):
        for x in range(o1, o1 + s1):
            for y in range(o2, o2 + s2):
                rules[(y, x)] = {(x, y): one}
    meta = {"kind": "tensor", "factors": tuple(presentations)}
    return Presentation(params, keys, names, rules, divs, weights=weights, inverses=inverses,
                        meta=meta, legs=leginfo)


def quotient(pres: Presentation, killed: Iterable, rename: Mapping | None = None,
             kind: str | None = None, check: bool = True):
    """Kill generators; returns ``(quotient presentation, projection LinMap)``.

    Every relation is reduced modulo the killed generators and re-oriented at
    its leading word.  The result must again pass :func:`check_confluence`,
    otherwise :class:`InvalidHopfIdeal` is raised.  ``rename`` maps old keys to
    ``(new key, new name)``.
    """
    from .maps import LinMap

    kill = {pres.gen(k) for k in killed}
    for a, b in pres.inverses.items():
        if (a in kill) != (b in kill):
            raise InvalidHopfIdeal(f"cannot kill {pres.names[a if a in kill else b]} and keep its inverse")
    survivors = [i for i in range(len(pres.keys)) if i not in kill]
    new_index = {old: i for i, old in enumerate(survivors)}
    rename = dict(rename or {})
    keys = [rename.get(pres.keys[i], (pres.keys[i], pres.names[i]))[0] for i in survivors]
    names = [rename.get(pres.keys[i], (pres.keys[i], pres.names[i]))[1] for i in survivors]
    weights = [pres.weights[i] for i in survivors]
    relations = []
    for lhs, tail in list(pres.rules.items()) + list(pres.divisors):
        red = {}
        for w, c in _relation_terms(pres, lhs, tail).items():
            if any(x in kill for x in w):
                continue
            red[tuple(new_index[x] for x in w)] = c
        if red:
            relations.append(red)
    inverses = {new_index[a]: new_index[b] for a, b in pres.inverses.items() if a in new_index}
    aliases = {a: new_index[i] for a, i in pres.aliases.items() if i in new_index}
    meta = {k: v for k, v in pres.meta.items() if not k.startswith("_")}
    meta.update(kind=kind or f"{pres.meta.get('kind', 'custom')}/quotient", parent=pres,
                killed=tuple(pres.keys[i] for i in sorted(kill)))
    try:
        q = Presentation.from_relations(pres.params, keys, names, relations, weights=weights,
                                        inverses=inverses, meta=meta, aliases=aliases)
    except RewriteError as exc:
        raise InvalidHopfIdeal(f"quotient relations cannot be oriented: {exc}") from exc
    if check:
        rep = check_confluence(q, 3, samples=60)
        if not rep.ok:
            raise InvalidHopfIdeal(f"quotient rewriting system is not confluent at {rep.failures[0][0]}")
    images = {old: (q.zero() if old in kill else q.g(new_index[old])) for old in range(len(pres.keys))}
    return q, LinMap(pres, q, images, name="projection")


def pbw_count(n_gens: int, degree: int) -> int:
    """Number of sorted words of the given degree (multiset coefficient)."""
    from math import comb
    return comb(n_gens + degree - 1, degree)


def normal_words(pres: Presentation, degree: int, alphabet: Sequence | None = None):
    """Enumerate normal words of a given length over a sub-alphabet."""
    alphabet = sorted(pres.gen(x) for x in (alphabet if alphabet is not None else range(len(pres.keys))))
    # when every descending pair is rewritten, only sorted words can be normal
    sorted_only = all((y, x) in pres.rules for x, y in itertools.combinations(alphabet, 2))
    cands = (itertools.combinations_with_replacement(alphabet, degree) if sorted_only
             else itertools.product(alphabet, repeat=degree))
    return [w for w in cands if pres.is_normal(w)]
