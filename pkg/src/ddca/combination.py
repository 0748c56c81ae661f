"""Immutable finite linear combinations with polynomial coefficients."""

from __future__ import annotations

from fractions import Fraction
from typing import Callable, Dict, Hashable, Iterable, Mapping, Tuple

from .arith import ParamPoly, to_rat

Coef = ParamPoly


def _coef(value) -> ParamPoly:
    return value if isinstance(value, ParamPoly) else ParamPoly.const(value)


def accumulate(target: Dict[Hashable, ParamPoly], key: Hashable, coef: ParamPoly) -> None:
    """In-place target[key] += coef, dropping zeros."""
    old = target.get(key)
    if old is None:
        if coef:
            target[key] = coef
        return
    new = old + coef
    if new:
        target[key] = new
    else:
        del target[key]


class LinComb:
    """A vector over the parameter polynomial ring with hashable basis keys.

    Subclasses add an algebra product by overriding `_mul_keys`.
    """

    __slots__ = ("terms",)

    def __init__(self, terms: Mapping[Hashable, object] = None):
        clean: Dict[Hashable, ParamPoly] = {}
        if terms:
            for key, value in terms.items():
                value = _coef(value)
                if value:
                    clean[key] = value
        self.terms = clean

    @classmethod
    def _raw(cls, terms: Dict[Hashable, ParamPoly]):
        obj = cls.__new__(cls)
        obj.terms = terms
        return obj

    def _like(self, terms: Dict[Hashable, ParamPoly]):
        """New element of the same kind (subclasses with extra state override)."""
        return type(self)._raw(terms)

    @classmethod
    def basis(cls, key: Hashable, coef=1):
        return cls({key: coef})

    def is_zero(self) -> bool:
        return not self.terms

    def __bool__(self) -> bool:
        return bool(self.terms)

    def __add__(self, other):
        if not isinstance(other, LinComb):
            if other == 0:
                return self
            return NotImplemented
        out = dict(self.terms)
        for key, value in other.terms.items():
            accumulate(out, key, value)
        return self._like(out)

    def __radd__(self, other):
        if other == 0:
            return self
        return NotImplemented

    def __neg__(self):
        return self._like({k: -v for k, v in self.terms.items()})

    def __sub__(self, other):
        if not isinstance(other, LinComb):
            if other == 0:
                return self
            return NotImplemented
        out = dict(self.terms)
        for key, value in other.terms.items():
            accumulate(out, key, -value)
        return self._like(out)

    def scale(self, factor):
        factor = _coef(factor)
        if not factor:
            return self._like({})
        if factor == 1:
            return self
        return self._like({k: v * factor for k, v in self.terms.items()})

    def __rmul__(self, other):
        if isinstance(other, (int, Fraction, ParamPoly)):
            return self.scale(other)
        return NotImplemented

    def __mul__(self, other):
        if isinstance(other, (int, Fraction, ParamPoly)):
            return self.scale(other)
        if not isinstance(other, LinComb):
            return NotImplemented
        out: Dict[Hashable, ParamPoly] = {}
        for ka, va in self.terms.items():
            for kb, vb in other.terms.items():
                coef = va * vb
                for key, c in self._mul_keys(ka, kb, other).items():
                    accumulate(out, key, coef * c)
        return self._like(out)

    def __truediv__(self, other):
        return self.scale(1 / to_rat(other))

    def _mul_keys(self, a, b, other) -> Mapping[Hashable, ParamPoly]:
        raise TypeError(f"{type(self).__name__} has no associative product")

    def commutator(self, other):
        return self * other - other * self

    def __eq__(self, other):
        if isinstance(other, LinComb):
            return self.terms == other.terms
        if other == 0:
            return not self.terms
        return NotImplemented

    def __hash__(self):
        return hash(frozenset(self.terms.items()))

    def coefficient(self, key: Hashable) -> ParamPoly:
        return self.terms.get(key, ParamPoly())

    def map_coefficients(self, fn: Callable[[ParamPoly], ParamPoly]):
        return self._like({k: c for k, c in ((k, fn(v)) for k, v in self.terms.items()) if c})

    def substitute(self, assignment: Mapping[str, object]):
        return self.map_coefficients(lambda c: c.substitute(assignment))

    def items(self) -> Iterable[Tuple[Hashable, ParamPoly]]:
        return self.terms.items()

    def sorted_items(self):
        return sorted(self.terms.items(), key=lambda kv: repr(kv[0]))

    def _format_key(self, key) -> str:
        return repr(key)

    def __str__(self) -> str:
        if not self.terms:
            return "0"
        parts = []
        for key, coef in self.sorted_items():
            parts.append(f"({coef})*{self._format_key(key)}")
        return " + ".join(parts)

    def __repr__(self) -> str:
        return f"{type(self).__name__}({str(self)})"
