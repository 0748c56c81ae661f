"""Noncommutative expressions: structural trees, expanded polynomials, and
homomorphic evaluation into concrete algebras."""

from __future__ import annotations

from dataclasses import dataclass
from fractions import Fraction
from typing import Callable, Dict, Mapping, Optional, Tuple

from .arith import ParamPoly
from .combination import LinComb, accumulate


class EvaluationError(ValueError):
    pass


class NcExpr:
    """Base class of expression nodes.  Nodes are frozen and hashable."""

    def __add__(self, other):
        return lin((1, self), (1, as_expr(other)))

    def __radd__(self, other):
        return lin((1, as_expr(other)), (1, self))

    def __sub__(self, other):
        return lin((1, self), (-1, as_expr(other)))

    def __rsub__(self, other):
        return lin((1, as_expr(other)), (-1, self))

    def __neg__(self):
        return lin((-1, self))

    def __mul__(self, other):
        if isinstance(other, (int, Fraction, ParamPoly)):
            return lin((other, self))
        return Prod(self, as_expr(other))

    def __rmul__(self, other):
        if isinstance(other, (int, Fraction, ParamPoly)):
            return lin((other, self))
        return Prod(as_expr(other), self)

    def __truediv__(self, other):
        return lin((Fraction(1) / Fraction(other), self))


@dataclass(frozen=True)
class Gen(NcExpr):
    name: str

    def __str__(self):
        return self.name


@dataclass(frozen=True)
class Scalar(NcExpr):
    """A scalar multiple of the unit."""
    value: ParamPoly

    def __str__(self):
        return f"({self.value})"


@dataclass(frozen=True)
class Comm(NcExpr):
    left: NcExpr
    right: NcExpr

    def __str__(self):
        return f"[{self.left}, {self.right}]"


@dataclass(frozen=True)
class Prod(NcExpr):
    left: NcExpr
    right: NcExpr

    def __str__(self):
        return f"{_wrap(self.left)}*{_wrap(self.right)}"


@dataclass(frozen=True)
class Lin(NcExpr):
    terms: Tuple[Tuple[ParamPoly, NcExpr], ...]

    def __str__(self):
        if not self.terms:
            return "0"
        return " + ".join(f"({c})*{_wrap(e)}" if c != 1 else _wrap(e) for c, e in self.terms)


def _wrap(e: NcExpr) -> str:
    return f"({e})" if isinstance(e, Lin) else str(e)


def as_expr(value) -> NcExpr:
    if isinstance(value, NcExpr):
        return value
    if isinstance(value, str):
        return Gen(value)
    return Scalar(ParamPoly.coerce(value))


def lin(*pairs) -> NcExpr:
    """Linear combination of (coefficient, expression) pairs, flattening nested sums."""
    flat: Dict[NcExpr, ParamPoly] = {}
    order = []
    for coef, expr in pairs:
        coef = ParamPoly.coerce(coef)
        expr = as_expr(expr)
        if isinstance(expr, Lin):
            inner = [(coef * c, e) for c, e in expr.terms]
        else:
            inner = [(coef, expr)]
        for c, e in inner:
            if e not in flat:
                order.append(e)
                flat[e] = c
            else:
                flat[e] = flat[e] + c
    terms = tuple((flat[e], e) for e in order if flat[e])
    if len(terms) == 1 and terms[0][0] == 1:
        return terms[0][1]
    return Lin(terms)


ZERO = Lin(())


def comm(a, b) -> NcExpr:
    return Comm(as_expr(a), as_expr(b))


def ad(x, y, times: int = 1) -> NcExpr:
    """ad_x^times (y)."""
    out = as_expr(y)
    x = as_expr(x)
    for _ in range(times):
        out = Comm(x, out)
    return out


def generators_of(expr: NcExpr) -> set:
    if isinstance(expr, Gen):
        return {expr.name}
    if isinstance(expr, (Comm, Prod)):
        return generators_of(expr.left) | generators_of(expr.right)
    if isinstance(expr, Lin):
        out = set()
        for _, e in expr.terms:
            out |= generators_of(e)
        return out
    return set()


def substitute_parameters(expr: NcExpr, params: Mapping[str, object]) -> NcExpr:
    if not params:
        return expr
    if isinstance(expr, Scalar):
        return Scalar(expr.value.substitute(params))
    if isinstance(expr, Comm):
        return Comm(substitute_parameters(expr.left, params), substitute_parameters(expr.right, params))
    if isinstance(expr, Prod):
        return Prod(substitute_parameters(expr.left, params), substitute_parameters(expr.right, params))
    if isinstance(expr, Lin):
        return lin(*((c.substitute(params), substitute_parameters(e, params)) for c, e in expr.terms))
    return expr


# expanded noncommutative polynomials ---------------------------------------

class NcPoly(LinComb):
    """Finite combination of generator words; the empty word is the unit."""

    __slots__ = ()

    @staticmethod
    def word(*names: str) -> "NcPoly":
        return NcPoly({tuple(names): 1})

    @staticmethod
    def unit(coef=1) -> "NcPoly":
        return NcPoly({(): coef})

    def _mul_keys(self, a, b, other):
        return {a + b: ParamPoly.const(1)}

    def bracket(self, other: "NcPoly") -> "NcPoly":
        return self * other - other * self

    def degree(self, weights: Optional[Mapping[str, int]] = None) -> int:
        weights = weights or {}
        return max((sum(weights.get(g, 1) for g in w) for w in self.terms), default=-1)

    def _format_key(self, key) -> str:
        return "*".join(key) if key else "1"


def expand(expr: NcExpr, cache: Optional[dict] = None) -> NcPoly:
    """Eager expansion of a tree into a noncommutative polynomial."""
    cache = {} if cache is None else cache
    if expr in cache:
        return cache[expr]
    if isinstance(expr, Gen):
        out = NcPoly.word(expr.name)
    elif isinstance(expr, Scalar):
        out = NcPoly.unit(expr.value)
    elif isinstance(expr, Comm):
        a, b = expand(expr.left, cache), expand(expr.right, cache)
        out = a * b - b * a
    elif isinstance(expr, Prod):
        out = expand(expr.left, cache) * expand(expr.right, cache)
    elif isinstance(expr, Lin):
        acc: Dict = {}
        for c, e in expr.terms:
            for w, v in expand(e, cache).terms.items():
                accumulate(acc, w, v * c)
        out = NcPoly._raw(acc)
    else:
        raise EvaluationError(f"unknown node {expr!r}")
    cache[expr] = out
    return out


# models ---------------------------------------------------------------------

class Model:
    """An algebra handle for homomorphic evaluation.

    Associative models evaluate commutators as ab - ba; Lie models use their
    own bracket and reject products.
    """

    def __init__(self, name: str, unit: Callable[[], object] = None,
                 bracket: Callable[[object, object], object] = None, associative: bool = True):
        self.name = name
        self._unit = unit
        self._bracket = bracket
        self.associative = associative

    def one(self):
        if self._unit is None:
            raise EvaluationError(f"model {self.name} has no unit")
        return self._unit()

    def scalar(self, value: ParamPoly):
        return self.one().scale(value)

    def bracket(self, a, b):
        if self._bracket is not None:
            return self._bracket(a, b)
        return a * b - b * a

    def mul(self, a, b):
        if not self.associative:
            raise EvaluationError(f"model {self.name} is a Lie algebra; products are undefined")
        return a * b

    def __repr__(self):
        return f"Model({self.name})"


def evaluate(expr, assignment: Mapping[str, object], model: Model,
             params: Optional[Mapping[str, object]] = None, cache: Optional[dict] = None):
    """Evaluate an expression tree or NcPoly in a model."""
    params = dict(params or {})
    if isinstance(expr, NcPoly):
        return _evaluate_poly(expr, assignment, model, params)
    missing = generators_of(expr) - set(assignment)
    if missing:
        raise EvaluationError(f"no image given for generators {sorted(missing)}")
    cache = {} if cache is None else cache

    def coef(c: ParamPoly) -> ParamPoly:
        return c.substitute(params) if params else c

    def go(e: NcExpr):
        hit = cache.get(e)
        if hit is not None:
            return hit
        if isinstance(e, Gen):
            out = assignment[e.name]
        elif isinstance(e, Scalar):
            out = model.scalar(coef(e.value))
        elif isinstance(e, Comm):
            out = model.bracket(go(e.left), go(e.right))
        elif isinstance(e, Prod):
            out = model.mul(go(e.left), go(e.right))
        elif isinstance(e, Lin):
            out = None
            for c, sub in e.terms:
                piece = go(sub).scale(coef(c))
                out = piece if out is None else out + piece
            if out is None:
                out = model.scalar(ParamPoly())
        else:
            raise EvaluationError(f"unknown node {e!r}")
        cache[e] = out
        return out

    return go(expr)


def _evaluate_poly(poly: NcPoly, assignment, model: Model, params):
    missing = {g for w in poly.terms for g in w} - set(assignment)
    if missing:
        raise EvaluationError(f"no image given for generators {sorted(missing)}")
    out = model.scalar(ParamPoly())
    prefix_cache: Dict[tuple, object] = {(): model.one()}
    for word, c in poly.terms.items():
        if word not in prefix_cache:
            value = model.one()
            for i in range(1, len(word) + 1):
                w = word[:i]
                if w not in prefix_cache:
                    prefix_cache[w] = model.mul(prefix_cache[word[: i - 1]], assignment[word[i - 1]])
            value = prefix_cache[word]
        else:
            value = prefix_cache[word]
        out = out + value.scale(c.substitute(params) if params else c)
    return out
