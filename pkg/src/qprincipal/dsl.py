"""Text input for elements and presentations.

Expressions::

    expr    := ['-'] term (('+' | '-') term)*
    term    := factor ('*' factor)*
    factor  := '-' factor | power
    power   := atom ['^' ['-'] INT]
    atom    := NUMBER | IDENT | group
    group   := '(' expr ')' ['(#)' '(' expr ')' ...]

A group followed by ``(#)`` is a tensor product; each leg is read in the
corresponding factor of a tensor presentation.  Products are not normalized.
"""
from __future__ import annotations

import re
from dataclasses import dataclass
from fractions import Fraction
from typing import Dict, List, Tuple

from .coeff import LaurentPoly, ParamSet
from .ncalg import NCPoly, Presentation, RewriteError


class ParseError(ValueError):
    """Lexing or parsing failure at ``line:col`` (1-based)."""

    def __init__(self, msg: str, line: int = 1, col: int = 1):
        super().__init__(f"{line}:{col}: {msg}")
        self.msg, self.line, self.col = msg, line, col


MAX_EXPONENT = 4096


class UnknownIdentifier(ParseError):
    pass


class UnorientableRelation(ParseError):
    pass


# -- lexer -------------------------------------------------------------------

_TOKEN = re.compile(r"""
    (?P<ws>[ \t]+)
  | (?P<tensor>\(\#\))
  | (?P<num>\d+(?:/\d+)?)
  | (?P<ident>[A-Za-z_][A-Za-z0-9_]*(?:\[\d+\])*[A-Za-z0-9_]*)
  | (?P<op>[-+*^()=])
""", re.VERBOSE)


@dataclass
class Token:
    kind: str
    text: str
    line: int
    col: int


def tokenize(text: str, line: int = 1, col: int = 0) -> List[Token]:
    """Tokens of ``text``; ``col`` offsets reported columns (text cut from a longer line)."""
    out, pos = [], 0
    while pos < len(text):
        m = _TOKEN.match(text, pos)
        if m is None:
            raise ParseError(f"unexpected character {text[pos]!r}", line, col + pos + 1)
        kind = m.lastgroup
        if kind != "ws":
            out.append(Token(m.group() if kind == "op" else kind, m.group(), line, col + pos + 1))
        pos = m.end()
    out.append(Token("end", "", line, col + len(text) + 1))
    return out


# -- syntax tree ----------------------------------------------------------------

@dataclass
class Num:
    value: Fraction


@dataclass
class Name:
    name: str
    tok: Token


@dataclass
class Neg:
    arg: object


@dataclass
class Sum:
    terms: List[Tuple[int, object]]  # (sign, node)


@dataclass
class Prod:
    factors: List[object]


@dataclass
class Pow:
    base: object
    exp: int
    tok: Token


@dataclass
class Tensor:
    legs: List[object]
    tok: Token


_WANT = {"end": "end of input", "num": "a number"}


class _Parser:
    def __init__(self, tokens: List[Token]):
        self.toks = tokens
        self.i = 0

    @property
    def tok(self) -> Token:
        return self.toks[self.i]

    def take(self, kind: str | None = None) -> Token:
        t = self.tok
        if kind is not None and t.kind != kind:
            want = _WANT.get(kind, repr(kind))
            got = "end of input" if t.kind == "end" else repr(t.text)
            raise ParseError(f"expected {want}, got {got}", t.line, t.col)
        self.i += 1
        return t

    def expr(self):
        terms = []
        sign = 1
        if self.tok.kind == "-":
            self.take()
            sign = -1
        terms.append((sign, self.term()))
        while self.tok.kind in ("+", "-"):
            sign = 1 if self.take().kind == "+" else -1
            terms.append((sign, self.term()))
        return terms[0][1] if len(terms) == 1 and terms[0][0] == 1 else Sum(terms)

    def term(self):
        factors = [self.factor()]
        while self.tok.kind == "*":
            self.take()
            factors.append(self.factor())
        return factors[0] if len(factors) == 1 else Prod(factors)

    def factor(self):
        if self.tok.kind == "-":
            self.take()
            return Neg(self.factor())
        return self.power()

    def power(self):
        base = self.atom()
        if self.tok.kind == "^":
            t = self.take()
            sign = 1
            if self.tok.kind == "-":
                self.take()
                sign = -1
            n = self.take("num")
            if "/" in n.text:
                raise ParseError("exponent must be an integer", n.line, n.col)
            if int(n.text) > MAX_EXPONENT:
                raise ParseError(f"exponent above {MAX_EXPONENT}", n.line, n.col)
            return Pow(base, sign * int(n.text), t)
        return base

    def atom(self):
        t = self.tok
        if t.kind == "num":
            self.take()
            if "/" in t.text and Fraction(t.text.split("/")[1]) == 0:
                raise ParseError("zero denominator", t.line, t.col)
            return Num(Fraction(t.text))
        if t.kind == "ident":
            self.take()
            return Name(t.text, t)
        if t.kind == "(":
            self.take()
            inner = self.expr()
            self.take(")")
            if self.tok.kind != "tensor":
                return inner
            legs = [inner]
            while self.tok.kind == "tensor":
                self.take()
                self.take("(")
                legs.append(self.expr())
                self.take(")")
            return Tensor(legs, t)
        got = "end of input" if t.kind == "end" else repr(t.text)
        raise ParseError(f"unexpected {got}", t.line, t.col)


def parse_ast(text: str, line: int = 1, col: int = 0):
    if not text.strip():
        raise ParseError("empty expression", line, col + 1)
    p = _Parser(tokenize(text, line, col))
    node = p.expr()
    p.take("end")
    return node


# -- lowering --------------------------------------------------------------------

def _concat(pres: Presentation, x: NCPoly, y: NCPoly) -> NCPoly:
    out: Dict[tuple, LaurentPoly] = {}
    for w1, c1 in x.terms.items():
        for w2, c2 in y.terms.items():
            w = w1 + w2
            out[w] = out[w] + c1 * c2 if w in out else c1 * c2
    return NCPoly(pres, {w: c for w, c in out.items() if c})


class _Lowering:
    def __init__(self, pres: Presentation):
        self.pres = pres
        self.lookup = {nm: g for g, nm in enumerate(pres.names)}
        self.lookup.update(pres.aliases)

    def scalar(self, c) -> NCPoly:
        return self.pres.scalar(c)

    def __call__(self, node) -> NCPoly:
        P = self.pres
        if isinstance(node, Num):
            return self.scalar(node.value)
        if isinstance(node, Name):
            if P.legs is None and node.name in self.lookup:
                return NCPoly(P, {(self.lookup[node.name],): P.params.one()})
            if node.name in P.params.names:
                return self.scalar(P.params.var(node.name))
            t = node.tok
            if P.legs is not None:
                raise UnknownIdentifier(f"{node.name!r}: tensor elements need (#) legs", t.line, t.col)
            raise UnknownIdentifier(f"unknown identifier {node.name!r}", t.line, t.col)
        if isinstance(node, Neg):
            return -self(node.arg)
        if isinstance(node, Sum):
            out = P.zero()
            for sign, t in node.terms:
                out = out + self(t) if sign > 0 else out - self(t)
            return out
        if isinstance(node, Prod):
            out = P.one()
            for f in node.factors:
                out = _concat(P, out, self(f))
            return out
        if isinstance(node, Pow):
            return self.power(node)
        if isinstance(node, Tensor):
            return self.tensor(node)
        raise TypeError(node)

    def power(self, node: Pow) -> NCPoly:
        P, k, t = self.pres, node.exp, node.tok
        base = self(node.base)
        if not base.terms:
            if k > 0:
                return base
            raise ParseError("zero has no inverse", t.line, t.col)
        if len(base.terms) != 1:
            raise ParseError("exponent on a sum", t.line, t.col)
        (w, c), = base.terms.items()
        if k < 0:
            if not w:
                return self.scalar(c ** k)
            inv = []
            for g in reversed(w):
                if g not in P.inverses:
                    raise ParseError(f"{P.names[g]} has no inverse generator", t.line, t.col)
                inv.append(P.inverses[g])
            if not c.is_monomial():
                raise ParseError("cannot invert a non-monomial coefficient", t.line, t.col)
            w, c, k = tuple(inv), c.inverse(), -k
        return NCPoly(P, {w * k: c ** k})

    def tensor(self, node: Tensor) -> NCPoly:
        from .maps import tensor_elem
        P, t = self.pres, node.tok
        if P.legs is None or len(P.legs) != len(node.legs):
            raise ParseError("tensor legs do not match the presentation", t.line, t.col)
        factors = P.meta["factors"]
        return tensor_elem(P, [_Lowering(f)(leg) for f, leg in zip(factors, node.legs)])


def parse_expr(text: str, pres: Presentation, line: int = 1, col: int = 0) -> NCPoly:
    """Read an element of ``pres``; the result is not normalized."""
    return _Lowering(pres)(parse_ast(text, line, col))


def print_expr(p: NCPoly) -> str:
    """Canonical text; ``parse_expr`` reads it back to the same terms."""
    return p.pres.format(p)


# -- presentation files ------------------------------------------------------------

def parse_presentation(text: str) -> Presentation:
    """Read a presentation file.

    Line-oriented, ``#`` starts a comment.  The header is either
    ``preset NAME [N]`` (relations below are added to the preset) or
    ``params NAMES...``.  Then ``generators NAMES...`` (repeatable, order
    matters), ``weight NAME W``, ``inverse NAME NAME`` and relation lines
    ``LHS = RHS``.
    """
    from .ncalg import preset
    lines = [(i + 1, raw.split("#", 1)[0].rstrip()) for i, raw in enumerate(text.splitlines())]
    lines = [(i, ln) for i, ln in lines if ln.strip()]
    if not lines:
        raise ParseError("missing header", 1, 1)
    lineno, head = lines[0]
    words = head.split()
    base = None
    if words[0] == "preset" and len(words) in (2, 3):
        try:
            base = preset(words[1], int(words[2]) if len(words) == 3 else None)
        except (ValueError, KeyError) as exc:
            raise ParseError(str(exc), lineno, 1) from exc
        params = base.params
    elif words[0] == "params":
        params = ParamSet(words[1:])
    else:
        raise ParseError("header must be 'preset NAME [N]' or 'params NAMES...'", lineno, 1)

    names: List[str] = list(base.names) if base else []
    weights: Dict[str, int] = {}
    inverses: List[Tuple[str, str]] = []
    relations: List[Tuple[int, str]] = []
    for lineno, ln in lines[1:]:
        words = ln.split()
        if "=" in ln:
            relations.append((lineno, ln))
        elif words[0] == "generators":
            if base is not None:
                raise ParseError("a preset fixes its generators", lineno, 1)
            for w in words[1:]:
                if w in names:
                    raise ParseError(f"duplicate generator {w!r}", lineno, ln.index(w) + 1)
                if w in params.names:
                    raise ParseError(f"generator {w!r} clashes with a parameter", lineno, ln.index(w) + 1)
                names.append(w)
        elif words[0] == "weight" and len(words) == 3:
            if not re.fullmatch(r"-?\d+", words[2]):
                raise ParseError("weight must be an integer", lineno, ln.index(words[2], 6) + 1)
            weights[words[1]] = int(words[2])
        elif words[0] == "inverse" and len(words) == 3:
            inverses.append((words[1], words[2]))
        else:
            raise ParseError(f"cannot read line {ln.strip()!r}", lineno, 1)

    if base is not None:
        if weights or inverses:
            raise ParseError("a preset fixes weights and inverses", lines[0][0], 1)
        free = base
        keys = list(base.keys)
        wts = list(base.weights)
        inv = dict(base.inverses)
        kw = dict(meta={k: v for k, v in base.meta.items() if not k.startswith("_")},
                  aliases=base.aliases)
    else:
        keys = [key_of_name(nm) for nm in names]
        for nm in list(weights) + [x for pair in inverses for x in pair]:
            if nm not in names:
                raise ParseError(f"undeclared generator {nm!r}", lines[0][0], 1)
        wts = [weights.get(nm, 1) for nm in names]
        idx = {nm: i for i, nm in enumerate(names)}
        inv = {}
        for a, b in inverses:
            inv[idx[a]], inv[idx[b]] = idx[b], idx[a]
        kw = dict(meta={"kind": "file"})
        free = Presentation(params, keys, names, {}, weights=wts, inverses=inv)

    rels = []
    if base is not None:
        rels = [_relation(base, lhs, rhs) for lhs, rhs in base.rules.items()]
        rels += [_relation(base, lhs, rhs) for lhs, rhs in base.divisors]
    for lineno, ln in relations:
        lhs_text, sep, rhs_text = ln.partition("=")
        if "=" in rhs_text:
            raise ParseError("more than one '=' in a relation", lineno, ln.index("=", len(lhs_text) + 1) + 1)
        try:
            lhs = parse_expr(lhs_text, free, lineno)
            rhs = parse_expr(rhs_text, free, lineno, len(lhs_text) + 1)
        except UnknownIdentifier as exc:
            raise UnknownIdentifier(f"undeclared parameter or generator: {exc.msg}", exc.line,
                                    exc.col) from None
        shared = set(lhs.terms) & set(rhs.terms)
        if shared:
            w = sorted(shared)[0]
            raise UnorientableRelation(f"{free.word_str(w)} appears on both sides", lineno, 1)
        rels.append(dict((lhs - rhs).terms))
    try:
        return Presentation.from_relations(params, keys, names, rels, weights=wts, inverses=inv, **kw)
    except RewriteError as exc:
        raise UnorientableRelation(str(exc), relations[-1][0] if relations else 1, 1) from exc


_INDEXED = re.compile(r"^([A-Za-z_]+)((?:\[\d+\])+)(inv)?$")


def key_of_name(name: str) -> tuple:
    """``a[1][2] -> ("a", 1, 2)``, ``a[2][1]inv -> ("inv", "a", 2, 1)``, ``D -> ("D",)``."""
    m = _INDEXED.match(name)
    if m is None:
        return (name,)
    key = (m.group(1), *map(int, re.findall(r"\d+", m.group(2))))
    return ("inv", *key) if m.group(3) else key


def _relation(pres: Presentation, lhs, rhs) -> Dict:
    rel = {lhs: pres.params.one()}
    for w, c in rhs.items():
        rel[w] = rel.get(w, pres.params.zero()) - c
    return rel


def print_presentation(pres: Presentation, header: str | None = None) -> str:
    """Text form readable by :func:`parse_presentation`."""
    out = []
    if header:
        out += [f"# {line}" for line in header.splitlines()]
    out.append("params " + " ".join(pres.params.names))
    out.append("generators " + " ".join(pres.names))
    for nm, w in zip(pres.names, pres.weights):
        if w != 1:
            out.append(f"weight {nm} {w}")
    for a, b in sorted(pres.inverses.items()):
        if a < b:
            out.append(f"inverse {pres.names[a]} {pres.names[b]}")
    out += pres.relation_lines()
    return "\n".join(out) + "\n"
