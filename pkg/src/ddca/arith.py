"""Exact arithmetic substrate.

Parameter polynomials with rational coefficients, reduced rational functions,
exact linear algebra over the rationals and over polynomial entries, and
Lagrange fitting of univariate polynomials.
"""

from __future__ import annotations

from fractions import Fraction
from typing import Dict, Iterable, List, Mapping, Optional, Sequence, Tuple, Union

# Fixed global variable order.  Earlier symbols are more significant in the
# lexicographic term order used for canonical printing and leading terms.
VARIABLES: Tuple[str, ...] = ("n", "t", "k", "c", "lam", "K", "l", "s1", "s2", "s3", "nu")

_ALIASES = {
    "λ": "lam", "lambda": "lam", "ν": "nu",
    "s₁": "s1", "s₂": "s2", "s₃": "s3",
}

_BITS = 10
_MASK = (1 << _BITS) - 1
_NVARS = len(VARIABLES)
_SHIFT = {name: _BITS * (_NVARS - 1 - i) for i, name in enumerate(VARIABLES)}


class ArithError(ValueError):
    pass


class MissingVariableError(ArithError):
    pass


class InconsistentSamplesError(ArithError):
    pass


class ShapeError(ArithError):
    pass


def canonical_symbol(name: str) -> str:
    name = _ALIASES.get(name, name)
    if name not in _SHIFT:
        raise ArithError(f"unknown parameter symbol {name!r}")
    return name


def to_rat(value) -> Fraction:
    """Parse ints, Fractions and strings such as '3/4' into a Fraction."""
    if isinstance(value, Fraction):
        return value
    if isinstance(value, int):
        return Fraction(value)
    if isinstance(value, str):
        return Fraction(value.strip())
    if isinstance(value, ParamPoly) and value.is_constant():
        return value.constant_value()
    raise ArithError(f"cannot interpret {value!r} as an exact rational")


def _pack(exponents: Mapping[str, int]) -> int:
    code = 0
    for name, e in exponents.items():
        if e < 0 or e > _MASK:
            raise ArithError("exponent out of range")
        if e:
            code += e << _SHIFT[canonical_symbol(name)]
    return code


def _unpack(code: int) -> Tuple[int, ...]:
    return tuple((code >> (_BITS * (_NVARS - 1 - i))) & _MASK for i in range(_NVARS))


def _exp_of(code: int, name: str) -> int:
    return (code >> _SHIFT[name]) & _MASK


Scalar = Union[int, Fraction]


class ParamPoly:
    """Sparse multivariate polynomial over Q in the fixed parameter symbols.

    Monomials are packed into single integers so that multiplication of
    monomials is integer addition and the integer order is the lex order.
    """

    __slots__ = ("_terms", "_hash")

    def __init__(self, terms: Optional[Dict[int, Fraction]] = None):
        self._terms: Dict[int, Fraction] = terms if terms is not None else {}
        self._hash = None

    # construction -----------------------------------------------------
    @staticmethod
    def const(value) -> "ParamPoly":
        value = to_rat(value)
        return ParamPoly({0: value} if value else {})

    @staticmethod
    def var(name: str, power: int = 1) -> "ParamPoly":
        return ParamPoly({_pack({name: power}): Fraction(1)})

    @staticmethod
    def from_terms(terms: Mapping[Tuple[int, ...], Scalar]) -> "ParamPoly":
        """Build from a map of full-length exponent tuples (fixed order) to coefficients."""
        out: Dict[int, Fraction] = {}
        for exps, coef in terms.items():
            if len(exps) != _NVARS:
                raise ShapeError("exponent vector length must match the variable count")
            code = _pack(dict(zip(VARIABLES, exps)))
            value = out.get(code, Fraction(0)) + to_rat(coef)
            if value:
                out[code] = value
            else:
                out.pop(code, None)
        return ParamPoly(out)

    @staticmethod
    def coerce(value) -> "ParamPoly":
        if isinstance(value, ParamPoly):
            return value
        return ParamPoly.const(value)

    # inspection -------------------------------------------------------
    def is_zero(self) -> bool:
        return not self._terms

    def __bool__(self) -> bool:
        return bool(self._terms)

    def is_constant(self) -> bool:
        return not self._terms or (len(self._terms) == 1 and 0 in self._terms)

    def constant_value(self) -> Fraction:
        if not self.is_constant():
            raise ArithError("polynomial is not constant")
        return self._terms.get(0, Fraction(0))

    def constant_term(self) -> Fraction:
        return self._terms.get(0, Fraction(0))

    def terms(self) -> List[Tuple[Tuple[int, ...], Fraction]]:
        """Exponent-vector/coefficient pairs in descending lex order."""
        return [(_unpack(c), self._terms[c]) for c in sorted(self._terms, reverse=True)]

    def raw_terms(self) -> Dict[int, Fraction]:
        return self._terms

    def variables(self) -> List[str]:
        used = set()
        for code in self._terms:
            for name in VARIABLES:
                if _exp_of(code, name):
                    used.add(name)
        return [v for v in VARIABLES if v in used]

    def degree(self, name: Optional[str] = None) -> int:
        if not self._terms:
            return -1
        if name is None:
            return max(sum(_unpack(c)) for c in self._terms)
        name = canonical_symbol(name)
        return max(_exp_of(c, name) for c in self._terms)

    def leading(self) -> Tuple[int, Fraction]:
        code = max(self._terms)
        return code, self._terms[code]

    def leading_coefficient(self) -> Fraction:
        return self.leading()[1]

    def coefficients_in(self, name: str) -> Dict[int, "ParamPoly"]:
        """Split as a polynomial in one variable with polynomial coefficients."""
        name = canonical_symbol(name)
        shift = _SHIFT[name]
        out: Dict[int, Dict[int, Fraction]] = {}
        for code, coef in self._terms.items():
            e = (code >> shift) & _MASK
            out.setdefault(e, {})[code - (e << shift)] = coef
        return {e: ParamPoly(t) for e, t in out.items()}

    def content(self) -> Fraction:
        """Positive rational content: gcd of numerators over lcm of denominators."""
        from math import gcd
        num = 0
        den = 1
        for c in self._terms.values():
            num = gcd(num, c.numerator)
            den = den * c.denominator // gcd(den, c.denominator)
        return Fraction(num, den) if num else Fraction(0)

    # arithmetic -------------------------------------------------------
    def __add__(self, other) -> "ParamPoly":
        if not isinstance(other, ParamPoly):
            other = ParamPoly.const(other)
        if not other._terms:
            return self
        if not self._terms:
            return other
        out = dict(self._terms)
        for code, coef in other._terms.items():
            v = out.get(code)
            if v is None:
                out[code] = coef
            else:
                v += coef
                if v:
                    out[code] = v
                else:
                    del out[code]
        return ParamPoly(out)

    __radd__ = __add__

    def __neg__(self) -> "ParamPoly":
        return ParamPoly({c: -v for c, v in self._terms.items()})

    def __sub__(self, other) -> "ParamPoly":
        if not isinstance(other, ParamPoly):
            other = ParamPoly.const(other)
        return self + (-other)

    def __rsub__(self, other) -> "ParamPoly":
        return ParamPoly.coerce(other) - self

    def scale(self, factor) -> "ParamPoly":
        factor = to_rat(factor)
        if not factor:
            return ParamPoly()
        if factor == 1:
            return self
        return ParamPoly({c: v * factor for c, v in self._terms.items()})

    def __mul__(self, other) -> "ParamPoly":
        if not isinstance(other, ParamPoly):
            if isinstance(other, (int, Fraction)):
                return self.scale(other)
            return NotImplemented
        a, b = self._terms, other._terms
        if not a or not b:
            return ParamPoly()
        if len(b) == 1 and 0 in b:
            return self.scale(b[0])
        if len(a) == 1 and 0 in a:
            return other.scale(a[0])
        out: Dict[int, Fraction] = {}
        get = out.get
        for ca, va in a.items():
            for cb, vb in b.items():
                code = ca + cb
                out[code] = get(code, 0) + va * vb
        return ParamPoly({c: v for c, v in out.items() if v})

    def __rmul__(self, other) -> "ParamPoly":
        if isinstance(other, (int, Fraction)):
            return self.scale(other)
        return NotImplemented

    def __truediv__(self, other) -> "ParamPoly":
        if isinstance(other, ParamPoly):
            if other.is_constant():
                other = other.constant_value()
            else:
                return self.exact_divide(other)
        other = to_rat(other)
        if not other:
            raise ZeroDivisionError("division by zero")
        return self.scale(1 / other)

    def __pow__(self, exponent: int) -> "ParamPoly":
        if exponent < 0:
            raise ArithError("negative power of a polynomial")
        result = ParamPoly.const(1)
        base = self
        while exponent:
            if exponent & 1:
                result = result * base
            exponent >>= 1
            if exponent:
                base = base * base
        return result

    def exact_divide(self, divisor: "ParamPoly") -> "ParamPoly":
        """Quotient of an exact multivariate division; raises if not exact."""
        if divisor.is_zero():
            raise ZeroDivisionError("division by the zero polynomial")
        lead_code, lead_coef = divisor.leading()
        lead_exps = _unpack(lead_code)
        remainder = dict(self._terms)
        quotient: Dict[int, Fraction] = {}
        while remainder:
            code = max(remainder)
            exps = _unpack(code)
            if any(e < d for e, d in zip(exps, lead_exps)):
                raise ArithError("polynomial division is not exact")
            qcode = code - lead_code
            qcoef = remainder[code] / lead_coef
            quotient[qcode] = qcoef
            for dcode, dcoef in divisor._terms.items():
                c = qcode + dcode
                v = remainder.get(c, 0) - qcoef * dcoef
                if v:
                    remainder[c] = v
                else:
                    remainder.pop(c, None)
        return ParamPoly(quotient)

    # comparison -------------------------------------------------------
    def __eq__(self, other) -> bool:
        if isinstance(other, ParamPoly):
            return self._terms == other._terms
        if isinstance(other, (int, Fraction)):
            return self.is_constant() and self.constant_value() == other
        return NotImplemented

    def __hash__(self) -> int:
        if self._hash is None:
            self._hash = hash(frozenset(self._terms.items()))
        return self._hash

    # evaluation -------------------------------------------------------
    def evaluate(self, assignment: Mapping[str, object]) -> Fraction:
        values = {canonical_symbol(k): to_rat(v) for k, v in assignment.items()}
        missing = [v for v in self.variables() if v not in values]
        if missing:
            raise MissingVariableError(f"no value given for {', '.join(missing)}")
        total = Fraction(0)
        for code, coef in self._terms.items():
            term = coef
            for name in VARIABLES:
                e = _exp_of(code, name)
                if e:
                    term *= values[name] ** e
            total += term
        return total

    def substitute(self, assignment: Mapping[str, object]) -> "ParamPoly":
        """Replace some variables by rationals or polynomials."""
        subs = {canonical_symbol(k): ParamPoly.coerce(v) for k, v in assignment.items()}
        powers: Dict[Tuple[str, int], ParamPoly] = {}
        out = ParamPoly()
        for code, coef in self._terms.items():
            keep = code
            factor = ParamPoly.const(coef)
            for name, value in subs.items():
                e = _exp_of(code, name)
                if e:
                    keep -= e << _SHIFT[name]
                    key = (name, e)
                    if key not in powers:
                        powers[key] = value ** e
                    factor = factor * powers[key]
            out = out + ParamPoly({keep: Fraction(1)}) * factor
        return out

    # printing -----------------------------------------------------------
    def __str__(self) -> str:
        if not self._terms:
            return "0"
        pieces = []
        for code in sorted(self._terms, reverse=True):
            coef = self._terms[code]
            mono = []
            for name in VARIABLES:
                e = _exp_of(code, name)
                if e == 1:
                    mono.append(name)
                elif e:
                    mono.append(f"{name}^{e}")
            mono_s = "*".join(mono)
            sign = "-" if coef < 0 else "+"
            mag = abs(coef)
            if not mono_s:
                body = str(mag)
            elif mag == 1:
                body = mono_s
            else:
                body = f"{mag}*{mono_s}"
            pieces.append((sign, body))
        first_sign, first_body = pieces[0]
        text = ("-" if first_sign == "-" else "") + first_body
        for sign, body in pieces[1:]:
            text += f" {sign} {body}"
        return text

    def __repr__(self) -> str:
        return f"ParamPoly({str(self)!r})"


def P(value) -> ParamPoly:
    """Shorthand: a constant polynomial or a named variable."""
    if isinstance(value, str) and value.strip().isidentifier():
        return ParamPoly.var(canonical_symbol(value.strip()))
    return ParamPoly.coerce(value)


def parse_poly(text: str) -> ParamPoly:
    """Parse the canonical printed form (sums of products of name^e and rationals)."""
    text = text.replace(" ", "")
    if text in ("", "0"):
        return ParamPoly()
    out = ParamPoly()
    i = 0
    chunks: List[Tuple[int, str]] = []
    sign = 1
    buf = ""
    while i < len(text):
        ch = text[i]
        if ch in "+-" and buf and not buf.endswith("^"):
            chunks.append((sign, buf))
            sign = 1 if ch == "+" else -1
            buf = ""
        elif ch in "+-" and not buf:
            sign = sign * (1 if ch == "+" else -1)
        else:
            buf += ch
        i += 1
    if buf:
        chunks.append((sign, buf))
    for sgn, chunk in chunks:
        term = ParamPoly.const(sgn)
        for factor in chunk.split("*"):
            if "^" in factor:
                base, exp = factor.split("^")
                term = term * ParamPoly.var(canonical_symbol(base), int(exp))
            elif factor[0].isdigit():
                term = term * ParamPoly.const(Fraction(factor))
            else:
                term = term * ParamPoly.var(canonical_symbol(factor))
        out = out + term
    return out


def poly_eval(p: ParamPoly, assignment: Mapping[str, object]) -> Fraction:
    return p.evaluate(assignment)


# rational functions -------------------------------------------------------

def _to_sympy(polys: Sequence[ParamPoly]):
    from sympy import QQ
    from sympy.polys.rings import ring

    names = sorted({v for p in polys for v in p.variables()}, key=VARIABLES.index)
    if not names:
        return None, None, names
    R, *_ = ring(",".join(names), QQ)
    idx = [VARIABLES.index(v) for v in names]
    elems = []
    for p in polys:
        d = {}
        for exps, coef in p.terms():
            d[tuple(exps[i] for i in idx)] = QQ(coef.numerator, coef.denominator)
        elems.append(R.from_dict(d) if d else R.zero)
    return R, elems, names


def _from_sympy(elem, names: Sequence[str]) -> ParamPoly:
    out: Dict[int, Fraction] = {}
    for exps, coef in elem.terms():
        code = _pack(dict(zip(names, exps)))
        out[code] = Fraction(int(coef.numerator), int(coef.denominator))
    return ParamPoly(out)


def poly_gcd(a: ParamPoly, b: ParamPoly) -> ParamPoly:
    """Monic-up-to-constant gcd of two polynomials (delegates to sympy)."""
    if a.is_zero():
        return b
    if b.is_zero():
        return a
    if a.is_constant() or b.is_constant():
        return ParamPoly.const(1)
    _, (sa, sb), names = _to_sympy([a, b])
    return _from_sympy(sa.gcd(sb), names)


class RatFunc:
    """Reduced quotient of parameter polynomials with a normalized denominator."""

    __slots__ = ("num", "den")

    def __init__(self, num, den=1, _reduced: bool = False):
        num = ParamPoly.coerce(num)
        den = ParamPoly.coerce(den)
        if den.is_zero():
            raise ZeroDivisionError("rational function with zero denominator")
        if not _reduced:
            num, den = _reduce(num, den)
        self.num = num
        self.den = den

    def is_zero(self) -> bool:
        return self.num.is_zero()

    def __add__(self, other) -> "RatFunc":
        other = as_ratfunc(other)
        if self.den == other.den:
            return RatFunc(self.num + other.num, self.den)
        return RatFunc(self.num * other.den + other.num * self.den, self.den * other.den)

    __radd__ = __add__

    def __neg__(self) -> "RatFunc":
        return RatFunc(-self.num, self.den, _reduced=True)

    def __sub__(self, other) -> "RatFunc":
        return self + (-as_ratfunc(other))

    def __rsub__(self, other) -> "RatFunc":
        return as_ratfunc(other) - self

    def __mul__(self, other) -> "RatFunc":
        other = as_ratfunc(other)
        return RatFunc(self.num * other.num, self.den * other.den)

    __rmul__ = __mul__

    def inverse(self) -> "RatFunc":
        if self.num.is_zero():
            raise ZeroDivisionError("inverse of zero")
        return RatFunc(self.den, self.num)

    def __truediv__(self, other) -> "RatFunc":
        return self * as_ratfunc(other).inverse()

    def __rtruediv__(self, other) -> "RatFunc":
        return as_ratfunc(other) * self.inverse()

    def __pow__(self, e: int) -> "RatFunc":
        if e < 0:
            return self.inverse() ** (-e)
        return RatFunc(self.num ** e, self.den ** e, _reduced=True)

    def __eq__(self, other) -> bool:
        if not isinstance(other, RatFunc):
            try:
                other = as_ratfunc(other)
            except ArithError:
                return NotImplemented
        return self.num == other.num and self.den == other.den

    def __hash__(self) -> int:
        return hash((self.num, self.den))

    def substitute(self, assignment: Mapping[str, object]) -> "RatFunc":
        def conv(v):
            return v if isinstance(v, RatFunc) else RatFunc(ParamPoly.coerce(v))
        subs = {k: conv(v) for k, v in assignment.items()}
        return _substitute_rat(self.num, subs) / _substitute_rat(self.den, subs)

    def evaluate(self, assignment: Mapping[str, object]) -> Fraction:
        d = self.den.evaluate(assignment)
        if not d:
            raise ZeroDivisionError("denominator vanishes at this point")
        return self.num.evaluate(assignment) / d

    def __str__(self) -> str:
        if self.den == 1:
            return str(self.num)
        return f"({self.num})/({self.den})"

    def __repr__(self) -> str:
        return f"RatFunc({str(self)!r})"


def _substitute_rat(p: ParamPoly, subs: Mapping[str, RatFunc]) -> RatFunc:
    total = RatFunc(0)
    for exps, coef in p.terms():
        term = RatFunc(ParamPoly.const(coef))
        rest: Dict[str, int] = {}
        for name, e in zip(VARIABLES, exps):
            if not e:
                continue
            if name in subs:
                term = term * subs[name] ** e
            else:
                rest[name] = e
        if rest:
            term = term * RatFunc(ParamPoly({_pack(rest): Fraction(1)}))
        total = total + term
    return total


def _reduce(num: ParamPoly, den: ParamPoly) -> Tuple[ParamPoly, ParamPoly]:
    if num.is_zero():
        return ParamPoly(), ParamPoly.const(1)
    g = poly_gcd(num, den)
    if not g.is_constant():
        num = num.exact_divide(g)
        den = den.exact_divide(g)
    lc = den.leading_coefficient()
    if lc != 1:
        num = num.scale(1 / lc)
        den = den.scale(1 / lc)
    return num, den


def as_ratfunc(value) -> RatFunc:
    if isinstance(value, RatFunc):
        return value
    return RatFunc(ParamPoly.coerce(value), _reduced=False)


def ratfunc_normalize(num, den) -> RatFunc:
    return RatFunc(num, den)


# fitting -------------------------------------------------------------------

def fit_polynomial(samples: Iterable[Tuple[object, object]], degree_bound: int,
                   variable: str = "n") -> ParamPoly:
    """Lagrange interpolation through the first degree_bound+1 samples.

    Any further samples must lie on the fitted polynomial.
    """
    pts = [(to_rat(x), to_rat(y)) for x, y in samples]
    if len(pts) < degree_bound + 1:
        raise ArithError("not enough samples for the requested degree bound")
    if len({x for x, _ in pts}) != len(pts):
        raise ArithError("sample abscissae must be distinct")
    base = pts[: degree_bound + 1]
    coeffs = [Fraction(0)] * (degree_bound + 1)
    for i, (xi, yi) in enumerate(base):
        # basis polynomial prod_{j != i} (x - xj)/(xi - xj), built in coefficient form
        basis = [Fraction(1)]
        denom = Fraction(1)
        for j, (xj, _) in enumerate(base):
            if j == i:
                continue
            basis = [Fraction(0)] + basis
            for d in range(len(basis) - 1):
                basis[d] -= xj * basis[d + 1]
            denom *= xi - xj
        for d, b in enumerate(basis):
            coeffs[d] += yi * b / denom
    var = canonical_symbol(variable)
    poly = ParamPoly({_pack({var: d}): c for d, c in enumerate(coeffs) if c})
    for x, y in pts[degree_bound + 1:]:
        if poly.evaluate({var: x}) != y:
            raise InconsistentSamplesError(
                f"sample ({x}, {y}) is off the fitted polynomial of degree <= {degree_bound}")
    return poly


def integer_roots(p: ParamPoly, variable: str) -> List[int]:
    """All integer roots of a univariate polynomial (rational root test)."""
    from math import gcd
    var = canonical_symbol(variable)
    if p.is_zero():
        raise ArithError("the zero polynomial has every integer as a root")
    others = [v for v in p.variables() if v != var]
    if others:
        raise ArithError("polynomial is not univariate")
    coeffs = {e: c.constant_value() for e, c in p.coefficients_in(var).items()}
    lcm = 1
    for c in coeffs.values():
        lcm = lcm * c.denominator // gcd(lcm, c.denominator)
    ints = {e: int(c * lcm) for e, c in coeffs.items()}
    low = min(ints)
    roots = [0] if low > 0 else []
    const = ints[low]
    candidates = set()
    a = abs(const)
    d = 1
    while d * d <= a:
        if a % d == 0:
            candidates.update({d, a // d})
        d += 1
    for cand in sorted(candidates):
        for r in (cand, -cand):
            if sum(c * r ** (e - low) for e, c in ints.items()) == 0:
                roots.append(r)
    return sorted(set(roots))


# linear algebra ------------------------------------------------------------

class LinearSolution:
    """Result of an exact solve: rank, echelon data, a particular solution and a kernel basis."""

    def __init__(self, rank: int, rref: List[List], pivots: List[int],
                 particular: Optional[List], nullspace: List[List], consistent: bool):
        self.rank = rank
        self.rref = rref
        self.pivots = pivots
        self.particular = particular
        self.nullspace = nullspace
        self.consistent = consistent

    def __repr__(self) -> str:
        return f"LinearSolution(rank={self.rank}, consistent={self.consistent})"


def _rref_fractions(rows: List[List[Fraction]], ncols: int) -> Tuple[List[List[Fraction]], List[int]]:
    rows = [list(r) for r in rows]
    pivots: List[int] = []
    r = 0
    for col in range(ncols):
        pivot = next((i for i in range(r, len(rows)) if rows[i][col]), None)
        if pivot is None:
            continue
        rows[r], rows[pivot] = rows[pivot], rows[r]
        inv = 1 / rows[r][col]
        rows[r] = [v * inv for v in rows[r]]
        for i in range(len(rows)):
            if i != r and rows[i][col]:
                f = rows[i][col]
                rows[i] = [a - f * b for a, b in zip(rows[i], rows[r])]
        pivots.append(col)
        r += 1
        if r == len(rows):
            break
    return rows, pivots


def _check_shape(A: Sequence[Sequence], b: Optional[Sequence]) -> int:
    if not A:
        return 0
    ncols = len(A[0])
    if any(len(row) != ncols for row in A):
        raise ShapeError("ragged matrix")
    if b is not None and len(b) != len(A):
        raise ShapeError("right-hand side length differs from the row count")
    return ncols


def bareiss_rank(A: Sequence[Sequence[ParamPoly]]) -> Tuple[int, List[List[ParamPoly]]]:
    """Fraction-free Bareiss elimination over polynomial entries.

    Returns the rank over the fraction field and the fraction-free echelon rows
    (each divided by its rational content).
    """
    rows = [[ParamPoly.coerce(v) for v in row] for row in A]
    if not rows:
        return 0, []
    ncols = len(rows[0])
    prev = ParamPoly.const(1)
    r = 0
    for col in range(ncols):
        pivot = next((i for i in range(r, len(rows)) if not rows[i][col].is_zero()), None)
        if pivot is None:
            continue
        rows[r], rows[pivot] = rows[pivot], rows[r]
        pv = rows[r][col]
        for i in range(r + 1, len(rows)):
            f = rows[i][col]
            rows[i] = [(pv * a - f * b).exact_divide(prev) if not prev == 1 else pv * a - f * b
                       for a, b in zip(rows[i], rows[r])]
        prev = pv
        r += 1
        if r == len(rows):
            break
    echelon = []
    for row in rows[:r]:
        content = Fraction(0)
        for v in row:
            if not v.is_zero():
                c = v.content()
                content = c if not content else _frac_gcd(content, c)
        echelon.append([v.scale(1 / content) for v in row] if content else row)
    return r, echelon


def _frac_gcd(a: Fraction, b: Fraction) -> Fraction:
    from math import gcd
    return Fraction(gcd(a.numerator, b.numerator),
                    a.denominator * b.denominator // gcd(a.denominator, b.denominator))


def determinant(A: Sequence[Sequence]) -> ParamPoly:
    """Determinant via Bareiss; entries may be rationals or polynomials."""
    rows = [[ParamPoly.coerce(v) for v in row] for row in A]
    size = len(rows)
    if any(len(r) != size for r in rows):
        raise ShapeError("determinant of a non-square matrix")
    if size == 0:
        return ParamPoly.const(1)
    sign = 1
    prev = ParamPoly.const(1)
    for k in range(size - 1):
        if rows[k][k].is_zero():
            swap = next((i for i in range(k + 1, size) if not rows[i][k].is_zero()), None)
            if swap is None:
                return ParamPoly()
            rows[k], rows[swap] = rows[swap], rows[k]
            sign = -sign
        for i in range(k + 1, size):
            for j in range(k + 1, size):
                rows[i][j] = (rows[k][k] * rows[i][j] - rows[i][k] * rows[k][j]).exact_divide(prev)
        prev = rows[k][k]
    return rows[-1][-1] if sign == 1 else -rows[-1][-1]


def solve_linear_exact(A: Sequence[Sequence], b: Optional[Sequence] = None) -> LinearSolution:
    """Exact solve of A x = b (or just the echelon data if b is None).

    Rational matrices use Gauss-Jordan elimination.  Polynomial matrices use
    fraction-free elimination for the rank; solutions are then rational functions.
    """
    ncols = _check_shape(A, b)
    poly_entries = any(isinstance(v, ParamPoly) and not v.is_constant() for row in A for v in row) or (
        b is not None and any(isinstance(v, ParamPoly) and not v.is_constant() for v in b))
    if poly_entries:
        return _solve_polynomial(A, b, ncols)
    rows = [[to_rat(v) for v in row] + ([to_rat(b[i])] if b is not None else [])
            for i, row in enumerate(A)]
    width = ncols + (1 if b is not None else 0)
    rref, pivots = _rref_fractions(rows, width)
    consistent = True
    if b is not None and ncols in pivots:
        consistent = False
        pivots = [p for p in pivots if p != ncols]
    rank = len(pivots)
    particular = None
    if b is not None and consistent:
        particular = [Fraction(0)] * ncols
        for i, col in enumerate(pivots):
            particular[col] = rref[i][ncols]
    free = [c for c in range(ncols) if c not in pivots]
    nullspace = []
    for fcol in free:
        vec = [Fraction(0)] * ncols
        vec[fcol] = Fraction(1)
        for i, col in enumerate(pivots):
            vec[col] = -rref[i][fcol]
        nullspace.append(vec)
    return LinearSolution(rank, [row[:ncols] for row in rref[:rank]], pivots, particular,
                          nullspace, consistent)


def _solve_polynomial(A, b, ncols: int) -> LinearSolution:
    rank, echelon = bareiss_rank([[ParamPoly.coerce(v) for v in row] for row in A])
    # Gauss-Jordan over the fraction field for the solution data.
    rows = [[as_ratfunc(v) for v in row] + ([as_ratfunc(b[i])] if b is not None else [])
            for i, row in enumerate(A)]
    width = ncols + (1 if b is not None else 0)
    pivots: List[int] = []
    r = 0
    for col in range(width):
        pivot = next((i for i in range(r, len(rows)) if not rows[i][col].is_zero()), None)
        if pivot is None:
            continue
        rows[r], rows[pivot] = rows[pivot], rows[r]
        inv = rows[r][col].inverse()
        rows[r] = [v * inv for v in rows[r]]
        for i in range(len(rows)):
            if i != r and not rows[i][col].is_zero():
                f = rows[i][col]
                rows[i] = [x - f * y for x, y in zip(rows[i], rows[r])]
        pivots.append(col)
        r += 1
        if r == len(rows):
            break
    consistent = not (b is not None and ncols in pivots)
    pivots = [p for p in pivots if p < ncols]
    if len(pivots) != rank:
        raise ArithError("fraction-free and fraction-field ranks disagree")
    particular = None
    if b is not None and consistent:
        particular = [RatFunc(0)] * ncols
        for i, col in enumerate(pivots):
            particular[col] = rows[i][ncols]
    nullspace = []
    for fcol in (c for c in range(ncols) if c not in pivots):
        vec = [RatFunc(0)] * ncols
        vec[fcol] = RatFunc(1)
        for i, col in enumerate(pivots):
            vec[col] = -rows[i][fcol]
        nullspace.append(vec)
    return LinearSolution(rank, echelon, pivots, particular, nullspace, consistent)


def matrix_rank(A: Sequence[Sequence]) -> int:
    return solve_linear_exact(A).rank


class SparseEchelon:
    """Incremental exact rank of sparse rational vectors.

    Vectors are dicts from hashable column keys to rationals.  Each stored row
    has a distinct leading column (the smallest column index in registration
    order) with coefficient 1.
    """

    def __init__(self):
        self._index: Dict[object, int] = {}
        self._pivots: Dict[int, Dict[int, Fraction]] = {}

    @property
    def rank(self) -> int:
        return len(self._pivots)

    def _encode(self, vec: Mapping[object, object]) -> Dict[int, Fraction]:
        out = {}
        for key, value in vec.items():
            if not value:
                continue
            idx = self._index.get(key)
            if idx is None:
                idx = len(self._index)
                self._index[key] = idx
            out[idx] = value if isinstance(value, Fraction) else to_rat(value)
        return out

    def reduce(self, vec: Mapping[object, object]) -> Dict[int, Fraction]:
        work = self._encode(vec)
        pivots = self._pivots
        while work:
            lead = min(work)
            row = pivots.get(lead)
            if row is None:
                return work
            factor = work[lead]
            for col, v in row.items():
                nv = work.get(col, 0) - factor * v
                if nv:
                    work[col] = nv
                else:
                    work.pop(col, None)
        return work

    def add(self, vec: Mapping[object, object]) -> bool:
        """Insert a vector; True iff it raised the rank."""
        residue = self.reduce(vec)
        if not residue:
            return False
        lead = min(residue)
        inv = 1 / residue[lead]
        self._pivots[lead] = {c: v * inv for c, v in residue.items()}
        return True

    def contains(self, vec: Mapping[object, object]) -> bool:
        return not self.reduce(vec)


def kernel_basis(A: Sequence[Sequence]) -> List[List[Fraction]]:
    return solve_linear_exact(A).nullspace


def minors(A: Sequence[Sequence], size: int) -> List[Tuple[Tuple[int, ...], Tuple[int, ...], ParamPoly]]:
    """All size x size minors with their row and column index sets."""
    from itertools import combinations
    out = []
    for rs in combinations(range(len(A)), size):
        for cs in combinations(range(len(A[0])), size):
            out.append((rs, cs, determinant([[A[r][c] for c in cs] for r in rs])))
    return out


__all__ = [
    "VARIABLES", "ParamPoly", "RatFunc", "P", "parse_poly", "poly_eval", "fit_polynomial",
    "solve_linear_exact", "ratfunc_normalize", "poly_gcd", "SparseEchelon", "determinant",
    "minors", "integer_roots", "bareiss_rank", "matrix_rank", "kernel_basis", "to_rat",
    "ArithError", "MissingVariableError", "InconsistentSamplesError", "ShapeError",
    "LinearSolution", "as_ratfunc",
]
