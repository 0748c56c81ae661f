"""Concrete algebras used as models.

* the Poisson Lie algebra of polynomials in q, p and its monomials with
  exponents affine in a symbol l;
* the one-variable Weyl algebra of differential operators x^a d^b;
* universal enveloping algebras by PBW straightening over a carrier Lie algebra;
* U(sl2) modulo a fixed Casimir value (lambda^2 - 1)/2.
"""

from __future__ import annotations

from fractions import Fraction
from functools import lru_cache
from math import comb, factorial
from typing import Callable, Dict, Hashable, List, Mapping, Optional, Tuple

from .arith import ParamPoly, P, ArithError
from .combination import LinComb, accumulate
from .ncexpr import Model, evaluate

ONE = ParamPoly.const(1)


# Poisson algebra --------------------------------------------------------------

def po_monomial_bracket(a: Tuple[int, int], b: Tuple[int, int]) -> Tuple[Optional[Tuple[int, int]], int]:
    """Bracket of q^k p^l and q^m p^n: (lm - nk) q^{k+m-1} p^{l+n-1}."""
    k, l = a
    m, n = b
    coef = l * m - n * k
    if not coef:
        return None, 0
    return (k + m - 1, l + n - 1), coef


class PoElement(LinComb):
    """Polynomial in q, p with keys (a, b) for q^a p^b; the unit monomial is K."""

    __slots__ = ()

    @staticmethod
    def monomial(a: int, b: int, coef=1) -> "PoElement":
        return PoElement({(a, b): coef})

    def bracket(self, other: "PoElement") -> "PoElement":
        out: Dict = {}
        for ka, va in self.terms.items():
            for kb, vb in other.terms.items():
                key, c = po_monomial_bracket(ka, kb)
                if key is not None:
                    accumulate(out, key, va * vb * c)
        return PoElement._raw(out)

    def gradings(self) -> set:
        return {a + b - 2 for a, b in self.terms}

    def is_even(self) -> bool:
        return all((a + b) % 2 == 0 for a, b in self.terms)

    def _format_key(self, key) -> str:
        a, b = key
        if key == (0, 0):
            return "K"
        return "*".join(s for s in (_pw("q", a), _pw("p", b)) if s)


def _pw(name: str, e: int) -> str:
    return "" if e == 0 else (name if e == 1 else f"{name}^{e}")


def po_bracket(x: PoElement, y: PoElement) -> PoElement:
    return x.bracket(y)


PO_K = PoElement.monomial(0, 0)
PO_P = PoElement.monomial(0, 1)
PO_Q = PoElement.monomial(1, 0)
PO_E = PoElement.monomial(2, 0, Fraction(-1, 2))
PO_F = PoElement.monomial(0, 2, Fraction(1, 2))
PO_H = PO_E.bracket(PO_F)
PO_R = PoElement.monomial(3, 0, Fraction(1, 6))


class SymbolicPoMonomial:
    """coef * q^a p^b where a, b are affine in l with integer coefficients
    and coef is a polynomial in l."""

    __slots__ = ("a", "b", "coef")

    def __init__(self, a, b, coef=1):
        self.a = _affine(a)
        self.b = _affine(b)
        self.coef = ParamPoly.coerce(coef)

    def specialize(self, l_value: int) -> PoElement:
        a = int(self.a.evaluate({"l": l_value}))
        b = int(self.b.evaluate({"l": l_value}))
        if a < 0 or b < 0:
            raise ArithError("negative exponent after specialization")
        return PoElement.monomial(a, b, self.coef.evaluate({"l": l_value}))

    def scale(self, factor) -> "SymbolicPoMonomial":
        return SymbolicPoMonomial(self.a, self.b, self.coef * ParamPoly.coerce(factor))

    def key(self):
        return (self.a, self.b)

    def __eq__(self, other):
        return isinstance(other, SymbolicPoMonomial) and (self.a, self.b, self.coef) == (other.a, other.b, other.coef)

    def __hash__(self):
        return hash((self.a, self.b, self.coef))

    def __repr__(self):
        return f"({self.coef})*q^({self.a})*p^({self.b})"


def _affine(value) -> ParamPoly:
    poly = ParamPoly.coerce(value)
    if poly.degree("l") > 1 or any(v != "l" for v in poly.variables()):
        raise ArithError("exponent must be affine in l")
    for _, c in poly.terms():
        if c.denominator != 1:
            raise ArithError("exponent coefficients must be integers")
    return poly


def po_bracket_symbolic(x: SymbolicPoMonomial, y: SymbolicPoMonomial) -> List[SymbolicPoMonomial]:
    coef = (x.b * y.a - y.b * x.a) * x.coef * y.coef
    if coef.is_zero():
        return []
    return [SymbolicPoMonomial(x.a + y.a - 1, x.b + y.b - 1, coef)]


# Weyl algebra ---------------------------------------------------------------------

@lru_cache(maxsize=None)
def weyl_monomial_product(a: int, b: int, c: int, d: int) -> Tuple[Tuple[Tuple[int, int], int], ...]:
    """(x^a d^b)(x^c d^d) in normal order: sum_j C(b,j) c!/(c-j)! x^{a+c-j} d^{b+d-j}."""
    out = []
    for j in range(min(b, c) + 1):
        coef = comb(b, j) * factorial(c) // factorial(c - j)
        out.append(((a + c - j, b + d - j), coef))
    return tuple(out)


class WeylElement(LinComb):
    """Normal-ordered differential operator, keys (a, b) for x^a d^b."""

    __slots__ = ()

    @staticmethod
    def monomial(a: int, b: int, coef=1) -> "WeylElement":
        return WeylElement({(a, b): coef})

    @staticmethod
    def one() -> "WeylElement":
        return WeylElement({(0, 0): 1})

    def _mul_keys(self, ka, kb, other):
        return {key: ParamPoly.const(c) for key, c in weyl_monomial_product(ka[0], ka[1], kb[0], kb[1])}

    def _format_key(self, key) -> str:
        a, b = key
        return "*".join(s for s in (_pw("x", a), _pw("d", b)) if s) or "1"


def weyl_product(x: WeylElement, y: WeylElement) -> WeylElement:
    return x * y


def weyl_leading_symbol(x: WeylElement) -> PoElement:
    if x.is_zero():
        raise ArithError("the zero operator has no leading symbol")
    top = max(a + b for a, b in x.terms)
    return PoElement({k: v for k, v in x.terms.items() if sum(k) == top})


WEYL_X = WeylElement.monomial(1, 0)
WEYL_D = WeylElement.monomial(0, 1)


def weyl_images() -> Dict[str, WeylElement]:
    """Images of the generators under the differential-operator realization."""
    one = WeylElement.one()
    return {
        "K": one,
        "p": WEYL_D,
        "q": WEYL_X,
        "e": WeylElement.monomial(2, 0, Fraction(-1, 2)),
        "f": WeylElement.monomial(0, 2, Fraction(1, 2)),
        "r": WeylElement.monomial(3, 0, Fraction(1, 6)),
    }


# enveloping algebras ---------------------------------------------------------------

class LieCarrier:
    """A Lie algebra with a totally ordered basis and a bracket on basis keys."""

    def __init__(self, name: str, order: Callable[[Hashable], tuple],
                 bracket: Callable[[Hashable, Hashable], Mapping[Hashable, ParamPoly]],
                 fmt: Callable[[Hashable], str] = repr):
        self.name = name
        self.order = order
        self._bracket = bracket
        self.fmt = fmt
        self._bracket_cache: Dict = {}
        self._mono_key_cache: Dict = {}
        self._mono_mono_cache: Dict = {}

    def bracket(self, a, b) -> Mapping[Hashable, ParamPoly]:
        key = (a, b)
        hit = self._bracket_cache.get(key)
        if hit is None:
            hit = {k: ParamPoly.coerce(v) for k, v in self._bracket(a, b).items() if v}
            self._bracket_cache[key] = hit
        return hit

    def mono_times_key(self, mono: tuple, g) -> Dict[tuple, ParamPoly]:
        cache_key = (mono, g)
        hit = self._mono_key_cache.get(cache_key)
        if hit is not None:
            return hit
        order = self.order
        if not mono or order(mono[-1]) >= order(g):
            out = {mono + (g,): ONE}
        else:
            last = mono[-1]
            prefix = mono[:-1]
            out: Dict[tuple, ParamPoly] = {}
            for m1, c1 in self.mono_times_key(prefix, g).items():
                for m2, c2 in self.mono_times_key(m1, last).items():
                    accumulate(out, m2, c1 * c2)
            for k, c in self.bracket(last, g).items():
                for m, c2 in self.mono_times_key(prefix, k).items():
                    accumulate(out, m, c * c2)
        self._mono_key_cache[cache_key] = out
        return out

    def mono_times_mono(self, a: tuple, b: tuple) -> Dict[tuple, ParamPoly]:
        cache_key = (a, b)
        hit = self._mono_mono_cache.get(cache_key)
        if hit is not None:
            return hit
        if not b:
            out = {a: ONE}
        else:
            head = self.mono_times_mono(a, b[:-1])
            out = {}
            for m, c in head.items():
                for m2, c2 in self.mono_times_key(m, b[-1]).items():
                    accumulate(out, m2, c * c2)
        self._mono_mono_cache[cache_key] = out
        return out

    def clear_caches(self) -> None:
        self._mono_key_cache.clear()
        self._mono_mono_cache.clear()

    def __repr__(self):
        return f"LieCarrier({self.name})"


def _po_bracket_keys(a, b):
    key, c = po_monomial_bracket(a, b)
    return {} if key is None else {key: c}


def _weyl_bracket_keys(a, b):
    out: Dict = {}
    for key, c in weyl_monomial_product(a[0], a[1], b[0], b[1]):
        out[key] = out.get(key, 0) + c
    for key, c in weyl_monomial_product(b[0], b[1], a[0], a[1]):
        out[key] = out.get(key, 0) - c
    return {k: v for k, v in out.items() if v}


_SL2_ORDER = {"e": 0, "h": 1, "f": 2}
_SL2_BRACKET = {
    ("e", "f"): {"h": 1}, ("f", "e"): {"h": -1},
    ("h", "e"): {"e": 2}, ("e", "h"): {"e": -2},
    ("h", "f"): {"f": -2}, ("f", "h"): {"f": 2},
}

PO_CARRIER = LieCarrier("po", lambda k: (k[0] + k[1], k[0]), _po_bracket_keys,
                        lambda k: PoElement()._format_key(k))
WEYL_LIE_CARRIER = LieCarrier("weyl-lie", lambda k: (k[0] + k[1], k[0]), _weyl_bracket_keys,
                              lambda k: "1L" if k == (0, 0) else WeylElement()._format_key(k))
SL2_CARRIER = LieCarrier("sl2", lambda k: _SL2_ORDER[k], lambda a, b: _SL2_BRACKET.get((a, b), {}),
                         str)


class CarrierMismatchError(ValueError):
    pass


class UEnvElement(LinComb):
    """Element of U(g) in PBW form: keys are nonincreasing tuples of basis keys."""

    __slots__ = ("carrier",)

    def __init__(self, carrier: LieCarrier, terms=None):
        super().__init__(terms)
        self.carrier = carrier

    def _like(self, terms):
        obj = UEnvElement.__new__(UEnvElement)
        obj.terms = terms
        obj.carrier = self.carrier
        return obj

    @staticmethod
    def one(carrier: LieCarrier) -> "UEnvElement":
        return UEnvElement(carrier, {(): 1})

    @staticmethod
    def generator(carrier: LieCarrier, key, coef=1) -> "UEnvElement":
        return UEnvElement(carrier, {(key,): coef})

    @staticmethod
    def from_lie(carrier: LieCarrier, element: LinComb) -> "UEnvElement":
        return UEnvElement(carrier, {(k,): v for k, v in element.terms.items()})

    def __mul__(self, other):
        if isinstance(other, UEnvElement):
            if other.carrier is not self.carrier:
                raise CarrierMismatchError("enveloping algebras over different carriers")
            out: Dict = {}
            for ka, va in self.terms.items():
                for kb, vb in other.terms.items():
                    coef = va * vb
                    for key, c in self.carrier.mono_times_mono(ka, kb).items():
                        accumulate(out, key, coef * c)
            return self._like(out)
        return super().__mul__(other)

    def times_basis(self, key, coef=ONE) -> "UEnvElement":
        """Right multiplication by a single basis element of the carrier."""
        out: Dict = {}
        for mono, v in self.terms.items():
            vc = v * coef
            for m, c in self.carrier.mono_times_key(mono, key).items():
                accumulate(out, m, vc * c)
        return self._like(out)

    def __eq__(self, other):
        if isinstance(other, UEnvElement):
            return self.carrier is other.carrier and self.terms == other.terms
        return super().__eq__(other)

    __hash__ = LinComb.__hash__

    def pbw_length(self) -> int:
        return max((len(m) for m in self.terms), default=-1)

    def _format_key(self, key) -> str:
        return "*".join(self.carrier.fmt(k) for k in key) if key else "1"


def uenv_product(x: UEnvElement, y: UEnvElement) -> UEnvElement:
    return x * y


def upo_images(carrier: LieCarrier = PO_CARRIER) -> Dict[str, UEnvElement]:
    """Canonical images of the generators in U(po) (or U of the Weyl Lie algebra)."""
    gen = lambda a, b, c=1: UEnvElement.generator(carrier, (a, b), c)
    return {
        "K": gen(0, 0),
        "p": gen(0, 1),
        "q": gen(1, 0),
        "e": gen(2, 0, Fraction(-1, 2)),
        "f": gen(0, 2, Fraction(1, 2)),
        "r": gen(3, 0, Fraction(1, 6)),
    }


# U(sl2) modulo a Casimir value ------------------------------------------------------

class GlLambdaElement(LinComb):
    """Element of U(sl2)/(C - (lam^2-1)/2), C = ef + fe + h^2/2.

    Keys (a, b, c) stand for f^a h^b e^c with min(a, c) = 0.  The Casimir value
    is a polynomial (symbolic lam by default).
    """

    __slots__ = ("casimir",)

    def __init__(self, terms=None, casimir: Optional[ParamPoly] = None):
        super().__init__(terms)
        self.casimir = default_casimir() if casimir is None else ParamPoly.coerce(casimir)
        if any(a and c for a, _, c in self.terms):
            reduced = _gl_reduce_terms(self.terms, self.casimir)
            self.terms = reduced

    def _like(self, terms):
        obj = GlLambdaElement.__new__(GlLambdaElement)
        obj.terms = terms
        obj.casimir = self.casimir
        return obj

    @staticmethod
    def one(casimir=None) -> "GlLambdaElement":
        return GlLambdaElement({(0, 0, 0): 1}, casimir)

    @staticmethod
    def generator(name: str, casimir=None) -> "GlLambdaElement":
        key = {"f": (1, 0, 0), "h": (0, 1, 0), "e": (0, 0, 1)}[name]
        return GlLambdaElement({key: 1}, casimir)

    def __mul__(self, other):
        if isinstance(other, GlLambdaElement):
            if other.casimir != self.casimir:
                raise CarrierMismatchError("different Casimir values")
            out: Dict = {}
            for ka, va in self.terms.items():
                for kb, vb in other.terms.items():
                    coef = va * vb
                    for key, c in _gl_mono_mono(ka, kb, self.casimir).items():
                        accumulate(out, key, coef * c)
            return self._like(out)
        return super().__mul__(other)

    def __eq__(self, other):
        if isinstance(other, GlLambdaElement):
            return self.casimir == other.casimir and self.terms == other.terms
        return super().__eq__(other)

    __hash__ = LinComb.__hash__

    def _format_key(self, key) -> str:
        a, b, c = key
        return "*".join(s for s in (_pw("f", a), _pw("h", b), _pw("e", c)) if s) or "1"


def default_casimir() -> ParamPoly:
    lam = P("lam")
    return (lam * lam - 1) * Fraction(1, 2)


_H_POWERS: Dict[Tuple[int, int], Tuple[int, ...]] = {}


def _shifted_h_power(b: int, shift: int) -> Tuple[int, ...]:
    """Coefficients of (h + shift)^b in powers of h."""
    key = (b, shift)
    hit = _H_POWERS.get(key)
    if hit is None:
        hit = tuple(comb(b, j) * shift ** (b - j) for j in range(b + 1))
        _H_POWERS[key] = hit
    return hit


_GL_CACHE: Dict = {}


def _gl_reduce(key, casimir: ParamPoly) -> Dict[tuple, ParamPoly]:
    """Rewrite f^a h^b e^c with a, c >= 1 using fe = (C - h - h^2/2)/2."""
    a, b, c = key
    if not (a and c):
        return {key: ONE}
    cache_key = ("red", key, casimir)
    hit = _GL_CACHE.get(cache_key)
    if hit is not None:
        return hit
    out: Dict = {}
    half = Fraction(1, 2)
    for j, cj in enumerate(_shifted_h_power(b, 2)):
        if not cj:
            continue
        # f^{a-1} h^j (C/2 - h/2 - h^2/4) e^{c-1}
        for extra, coef in ((0, casimir * half), (1, ParamPoly.const(-half)), (2, ParamPoly.const(Fraction(-1, 4)))):
            if coef.is_zero():
                continue
            for k2, v2 in _gl_reduce((a - 1, j + extra, c - 1), casimir).items():
                accumulate(out, k2, coef * cj * v2)
    _GL_CACHE[cache_key] = out
    return out


def _gl_reduce_terms(terms, casimir):
    out: Dict = {}
    for key, v in terms.items():
        for k2, c2 in _gl_reduce(key, casimir).items():
            accumulate(out, k2, v * c2)
    return out


def _gl_times_generator(key, g: str, casimir: ParamPoly) -> Dict[tuple, ParamPoly]:
    cache_key = ("gen", key, g, casimir)
    hit = _GL_CACHE.get(cache_key)
    if hit is not None:
        return hit
    a, b, c = key
    raw: Dict = {}
    if g == "e":
        raw[(a, b, c + 1)] = ONE
    elif g == "h":
        accumulate(raw, (a, b + 1, c), ONE)
        if c:
            accumulate(raw, (a, b, c), ParamPoly.const(-2 * c))
    elif g == "f":
        # f^a h^b e^c f = f^{a+1} (h-2)^b e^c + c f^a h^b (h - c + 1) e^{c-1}
        for j, cj in enumerate(_shifted_h_power(b, -2)):
            if cj:
                accumulate(raw, (a + 1, j, c), ParamPoly.const(cj))
        if c:
            accumulate(raw, (a, b + 1, c - 1), ParamPoly.const(c))
            if c - 1:
                accumulate(raw, (a, b, c - 1), ParamPoly.const(-c * (c - 1)))
    else:
        raise ValueError(f"unknown sl2 generator {g}")
    out = _gl_reduce_terms(raw, casimir)
    _GL_CACHE[cache_key] = out
    return out


def _gl_mono_mono(ka, kb, casimir) -> Dict[tuple, ParamPoly]:
    cache_key = ("mono", ka, kb, casimir)
    hit = _GL_CACHE.get(cache_key)
    if hit is not None:
        return hit
    word = ["f"] * kb[0] + ["h"] * kb[1] + ["e"] * kb[2]
    cur: Dict = {ka: ONE}
    for g in word:
        nxt: Dict = {}
        for key, v in cur.items():
            for k2, c2 in _gl_times_generator(key, g, casimir).items():
                accumulate(nxt, k2, v * c2)
        cur = nxt
    _GL_CACHE[cache_key] = cur
    return cur


def gl_lambda_images(casimir=None) -> Dict[str, GlLambdaElement]:
    """Generator images for the even relation set: sl2 triple, K -> 1, d1 -> e^2/2."""
    e = GlLambdaElement.generator("e", casimir)
    return {
        "K": GlLambdaElement.one(casimir),
        "e": e,
        "h": GlLambdaElement.generator("h", casimir),
        "f": GlLambdaElement.generator("f", casimir),
        "d1": (e * e).scale(Fraction(1, 2)),
    }


def casimir_element(x: GlLambdaElement = None) -> GlLambdaElement:
    """ef + fe + h^2/2 computed inside the quotient (should reduce to the scalar)."""
    cas = None if x is None else x.casimir
    e = GlLambdaElement.generator("e", cas)
    f = GlLambdaElement.generator("f", cas)
    h = GlLambdaElement.generator("h", cas)
    return e * f + f * e + (h * h).scale(Fraction(1, 2))


# models -----------------------------------------------------------------------------------

def weyl_model() -> Model:
    return Model("weyl", unit=WeylElement.one)


def po_lie_model() -> Model:
    return Model("po", unit=lambda: PO_K, bracket=po_bracket, associative=False)


def uenv_model(carrier: LieCarrier = PO_CARRIER) -> Model:
    return Model(f"U({carrier.name})", unit=lambda: UEnvElement.one(carrier))


def gl_lambda_model(casimir=None) -> Model:
    return Model("gl(lambda)", unit=lambda: GlLambdaElement.one(casimir))


def evaluate_nc(expr, assignment: Mapping[str, object], model: Model,
                params: Optional[Mapping[str, object]] = None):
    """Homomorphic evaluation of an expression tree or NcPoly in a model."""
    return evaluate(expr, assignment, model, params)
