"""Exact multivariate Laurent polynomials with rational coefficients.

Every algebra in the package uses these as its coefficient ring.  The
parameters (``q``, ``u``, ``q_12``, ...) are commuting and invertible, so
exponents may be negative.
"""
from __future__ import annotations

from fractions import Fraction
from typing import Iterable, Mapping, Union

Rational = Union[int, Fraction]


class StructuralError(ValueError):
    """Operands live over different parameter sets."""


class DomainError(ValueError):
    """A value outside the domain of an operation (zero binding, n < 1, ...)."""


class ParamSet:
    """Ordered tuple of parameter names; exponent vectors follow this order."""

    __slots__ = ("names", "_index")

    def __init__(self, names: Iterable[str] = ()):
        names = tuple(names)
        if len(set(names)) != len(names):
            raise DomainError(f"duplicate parameter names in {names}")
        self.names = names
        self._index = {n: i for i, n in enumerate(names)}

    def __len__(self):
        return len(self.names)

    def __iter__(self):
        return iter(self.names)

    def __contains__(self, name):
        return name in self._index

    def index(self, name: str) -> int:
        return self._index[name]

    def __eq__(self, other):
        return isinstance(other, ParamSet) and self.names == other.names

    def __hash__(self):
        return hash(self.names)

    def __repr__(self):
        return f"ParamSet({', '.join(self.names)})"

    def union(self, other: "ParamSet") -> "ParamSet":
        extra = [n for n in other.names if n not in self._index]
        return ParamSet(self.names + tuple(extra)) if extra else self

    def without(self, names: Iterable[str]) -> "ParamSet":
        drop = set(names)
        return ParamSet(n for n in self.names if n not in drop)

    # convenience constructors
    def var(self, name: str, exp: int = 1) -> "LaurentPoly":
        return LaurentPoly.var(self, name, exp)

    def const(self, c: Rational) -> "LaurentPoly":
        return LaurentPoly.const(self, c)

    def one(self) -> "LaurentPoly":
        return LaurentPoly.const(self, 1)

    def zero(self) -> "LaurentPoly":
        return LaurentPoly(self, {})


class LaurentPoly:
    """Immutable Laurent polynomial: ``{exponent tuple: Fraction}``, zeros pruned."""

    __slots__ = ("params", "terms", "_hash")

    def __init__(self, params: ParamSet, terms: Mapping[tuple, Rational] | None = None):
        self.params = params
        clean = {}
        if terms:
            k = len(params)
            for e, c in terms.items():
                if len(e) != k:
                    raise StructuralError(f"exponent vector {e} does not match {params}")
                if c:
                    clean[tuple(e)] = Fraction(c)
        self.terms = clean
        self._hash = None

    @classmethod
    def _raw(cls, params, terms):
        obj = cls.__new__(cls)
        obj.params = params
        obj.terms = terms
        obj._hash = None
        return obj

    @classmethod
    def const(cls, params: ParamSet, c: Rational) -> "LaurentPoly":
        c = Fraction(c)
        return cls._raw(params, {(0,) * len(params): c} if c else {})

    @classmethod
    def var(cls, params: ParamSet, name: str, exp: int = 1) -> "LaurentPoly":
        e = [0] * len(params)
        e[params.index(name)] = exp
        return cls._raw(params, {tuple(e): Fraction(1)})

    @classmethod
    def monomial(cls, params: ParamSet, exps: Mapping[str, int], c: Rational = 1):
        e = [0] * len(params)
        for name, k in exps.items():
            e[params.index(name)] += k
        return cls(params, {tuple(e): c})

    # -- predicates ---------------------------------------------------------
    def is_zero(self) -> bool:
        return not self.terms

    def __bool__(self):
        return bool(self.terms)

    def is_constant(self) -> bool:
        return not self.terms or (len(self.terms) == 1 and not any(next(iter(self.terms))))

    def is_one(self) -> bool:
        return self.is_constant() and self.constant_value() == 1

    def is_monomial(self) -> bool:
        return len(self.terms) == 1

    def constant_value(self) -> Fraction:
        if not self.terms:
            return Fraction(0)
        if not self.is_constant():
            raise DomainError(f"{self} is not a constant")
        return next(iter(self.terms.values()))

    # -- arithmetic ---------------------------------------------------------
    def _coerce(self, other) -> "LaurentPoly":
        if isinstance(other, LaurentPoly):
            if other.params is not self.params and other.params != self.params:
                raise StructuralError(f"parameter sets differ: {self.params} vs {other.params}")
            return other
        if isinstance(other, (int, Fraction)):
            return LaurentPoly.const(self.params, other)
        return NotImplemented

    def __add__(self, other):
        other = self._coerce(other)
        if other is NotImplemented:
            return other
        out = dict(self.terms)
        for e, c in other.terms.items():
            v = out.get(e, 0) + c
            if v:
                out[e] = v
            else:
                out.pop(e, None)
        return LaurentPoly._raw(self.params, out)

    __radd__ = __add__

    def __neg__(self):
        return LaurentPoly._raw(self.params, {e: -c for e, c in self.terms.items()})

    def __sub__(self, other):
        other = self._coerce(other)
        if other is NotImplemented:
            return other
        return self + (-other)

    def __rsub__(self, other):
        return (-self) + other

    def __mul__(self, other):
        other = self._coerce(other)
        if other is NotImplemented:
            return other
        if not self.terms or not other.terms:
            return LaurentPoly._raw(self.params, {})
        out: dict = {}
        for e1, c1 in self.terms.items():
            for e2, c2 in other.terms.items():
                e = tuple(a + b for a, b in zip(e1, e2))
                v = out.get(e, 0) + c1 * c2
                if v:
                    out[e] = v
                else:
                    out.pop(e, None)
        return LaurentPoly._raw(self.params, out)

    __rmul__ = __mul__

    def inverse(self) -> "LaurentPoly":
        """Inverse of a monomial (the only units of the Laurent ring)."""
        if len(self.terms) != 1:
            raise DomainError(f"{self} is not a unit of the Laurent ring")
        (e, c), = self.terms.items()
        return LaurentPoly._raw(self.params, {tuple(-x for x in e): 1 / c})

    def __truediv__(self, other):
        other = self._coerce(other)
        return self * other.inverse()

    def __pow__(self, k: int):
        if k < 0:
            return self.inverse() ** (-k)
        result = LaurentPoly.const(self.params, 1)
        base = self
        while k:
            if k & 1:
                result = result * base
            base = base * base
            k >>= 1
        return result

    def __eq__(self, other):
        if isinstance(other, (int, Fraction)):
            return self.terms == LaurentPoly.const(self.params, other).terms
        if not isinstance(other, LaurentPoly):
            return NotImplemented
        return self.params == other.params and self.terms == other.terms

    def __hash__(self):
        if self._hash is None:
            self._hash = hash((self.params, frozenset(self.terms.items())))
        return self._hash

    # -- substitution -------------------------------------------------------
    def embed(self, params: ParamSet) -> "LaurentPoly":
        """Same polynomial over a superset of parameters."""
        if params == self.params:
            return self
        pos = [params.index(n) for n in self.params.names]
        k = len(params)
        out = {}
        for e, c in self.terms.items():
            v = [0] * k
            for i, x in zip(pos, e):
                v[i] = x
            out[tuple(v)] = c
        return LaurentPoly._raw(params, out)

    def specialize(self, bindings: Mapping[str, "LaurentPoly | Rational"],
                   target: ParamSet | None = None) -> "LaurentPoly":
        """Substitute parameters exactly.

        Values may be rationals or Laurent polynomials; a parameter raised to a
        negative power needs a monomial (invertible) value.
        """
        for name, v in bindings.items():
            if name not in self.params:
                raise StructuralError(f"unknown parameter {name!r}")
            if (isinstance(v, LaurentPoly) and v.is_zero()) or (not isinstance(v, LaurentPoly) and v == 0):
                raise DomainError(f"cannot bind invertible parameter {name!r} to zero")
        if target is None:
            target = self.params.without(bindings)
            for v in bindings.values():
                if isinstance(v, LaurentPoly):
                    target = target.union(v.params)
        vals = {}
        for name, v in bindings.items():
            vals[self.params.index(name)] = (v.embed(target) if isinstance(v, LaurentPoly)
                                             else LaurentPoly.const(target, v))
        keep = [(i, target.index(n)) for i, n in enumerate(self.params.names) if i not in vals]
        result = LaurentPoly._raw(target, {})
        k = len(target)
        for e, c in self.terms.items():
            v = [0] * k
            for i, j in keep:
                v[j] = e[i]
            term = LaurentPoly._raw(target, {tuple(v): c})
            for i, val in vals.items():
                if e[i]:
                    term = term * (val ** e[i])
            result = result + term
        return result

    # -- printing -----------------------------------------------------------
    def sorted_terms(self):
        return sorted(self.terms.items(), key=lambda t: t[0], reverse=True)

    def _mono_str(self, e) -> str:
        parts = []
        for name, x in zip(self.params.names, e):
            if x == 1:
                parts.append(name)
            elif x:
                parts.append(f"{name}^{x}")
        return "*".join(parts)

    def __str__(self):
        if not self.terms:
            return "0"
        out = []
        for i, (e, c) in enumerate(self.sorted_terms()):
            mono = self._mono_str(e)
            neg = c < 0
            a = -c if neg else c
            if mono:
                body = mono if a == 1 else f"{a}*{mono}"
            else:
                body = str(a)
            if i == 0:
                out.append(("-" if neg else "") + body)
            else:
                out.append((" - " if neg else " + ") + body)
        return "".join(out)

    def __repr__(self):
        return f"LaurentPoly({self})"


def laurent_arith(a: LaurentPoly, b: LaurentPoly, op: str) -> LaurentPoly:
    """Functional form of ring operations; ``op`` is ``add``, ``mul`` or ``neg``."""
    if op == "add":
        return a + b
    if op == "mul":
        return a * b
    if op == "neg":
        return -a
    raise ValueError(f"unknown op {op!r}")


def specialize(a: LaurentPoly, bindings, target: ParamSet | None = None) -> LaurentPoly:
    return a.specialize(bindings, target)
