"""Finite-rank rational Cherednik algebras (type A) and their ℤ/2 wreath
analogue (type B), with exact PBW normal forms.

Elements are stored in the order x-monomial, y-monomial, group element.
Commutators [y_i, x_j] are computed from the symplectic form and the list of
reflections, so both types share one rewriting kernel.

Spherical elements (e·h·e) have their own compact representation,
`SphericalElement`, indexed by orbit representatives of monomials.
"""

from __future__ import annotations

import itertools
import json
import math
from dataclasses import dataclass
from fractions import Fraction
from functools import lru_cache
from typing import Dict, Iterable, List, Mapping, Optional, Tuple

from .arith import ArithError, P, ParamPoly, parse_poly
from .combination import LinComb, accumulate

Exps = Tuple[int, ...]
KINDS = ("A", "B")


class CherednikError(ArithError):
    pass


class DegreeExceedsRankError(CherednikError):
    pass


class BudgetExceededError(CherednikError):
    pass


# group elements --------------------------------------------------------------

@dataclass(frozen=True, order=True)
class GroupElem:
    """(σ, ε) acting by x_i ↦ ε_i x_{σ(i)}; σ in one-line notation, 0-based."""

    perm: Tuple[int, ...]
    signs: Tuple[int, ...]

    @staticmethod
    def identity(n: int) -> "GroupElem":
        return GroupElem(tuple(range(n)), (1,) * n)

    @staticmethod
    def transposition(n: int, i: int, j: int) -> "GroupElem":
        perm = list(range(n))
        perm[i], perm[j] = perm[j], perm[i]
        return GroupElem(tuple(perm), (1,) * n)

    @staticmethod
    def sign_flip(n: int, i: int) -> "GroupElem":
        signs = [1] * n
        signs[i] = -1
        return GroupElem(tuple(range(n)), tuple(signs))

    def __post_init__(self):
        if sorted(self.perm) != list(range(len(self.perm))) or len(self.signs) != len(self.perm):
            raise CherednikError(f"not a signed permutation: {self.perm}, {self.signs}")

    @property
    def n(self) -> int:
        return len(self.perm)

    def __mul__(self, other: "GroupElem") -> "GroupElem":
        s, e = self.perm, self.signs
        return GroupElem(tuple(s[i] for i in other.perm),
                         tuple(other.signs[i] * e[other.perm[i]] for i in range(len(s))))

    def inverse(self) -> "GroupElem":
        inv = [0] * self.n
        for i, j in enumerate(self.perm):
            inv[j] = i
        return GroupElem(tuple(inv), tuple(self.signs[inv[j]] for j in range(self.n)))

    def is_identity(self) -> bool:
        return self.perm == tuple(range(self.n)) and all(s == 1 for s in self.signs)

    def act(self, exps: Exps) -> Tuple[Exps, int]:
        """Image of a monomial Π v_i^{a_i} (v = x or y) as (exponents, sign)."""
        out = [0] * len(exps)
        sign = 1
        for i, a in enumerate(exps):
            if a:
                out[self.perm[i]] = a
                if self.signs[i] < 0 and a & 1:
                    sign = -sign
        return tuple(out), sign

    def permutation_sign(self) -> int:
        seen, sign = set(), 1
        for start in range(self.n):
            if start in seen:
                continue
            length, j = 0, start
            while j not in seen:
                seen.add(j)
                j = self.perm[j]
                length += 1
            if length % 2 == 0:
                sign = -sign
        return sign

    def __str__(self) -> str:
        if self.is_identity():
            return "1"
        body = ",".join(str(p + 1) for p in self.perm)
        flips = "".join(f"g{i + 1}" for i, s in enumerate(self.signs) if s < 0)
        return f"w[{body}]" + (f"*{flips}" if flips else "")


def group_elements(n: int, kind: str) -> List[GroupElem]:
    signs = [(1,) * n] if kind == "A" else list(itertools.product((1, -1), repeat=n))
    return [GroupElem(p, s) for p in itertools.permutations(range(n)) for s in signs]


def _unit_vec(n: int, i: int) -> Exps:
    return tuple(1 if j == i else 0 for j in range(n))


def _add(a: Exps, b: Exps) -> Exps:
    return tuple(u + v for u, v in zip(a, b))


# the algebra ---------------------------------------------------------------------

class CherAlgebra:
    """H_{t,k}(n) (kind "A") or H_{t,k,c}(n, ℤ/2) (kind "B")."""

    def __init__(self, n: int, kind: str = "A", t=None, k=None, c=None):
        if kind not in KINDS:
            raise CherednikError(f"unknown type {kind!r}")
        if n < 1:
            raise CherednikError("rank must be positive")
        self.n = n
        self.kind = kind
        self.t = ParamPoly.coerce(P("t") if t is None else t)
        self.k = ParamPoly.coerce(P("k") if k is None else k)
        self.c = ParamPoly.coerce((P("c") if c is None else c) if kind == "B" else 0)
        self.identity = GroupElem.identity(n)
        self.zero_exps: Exps = (0,) * n
        self._comm = self._commutator_table()
        self._yx_memo: Dict[Tuple[Exps, Exps], Dict] = {}
        self._yix_memo: Dict[Tuple[int, Exps], Dict] = {}
        self._group: Optional[List[GroupElem]] = None

    # defining relations ---------------------------------------------------------
    def reflections(self) -> List[GroupElem]:
        """Σ: conjugates of the transposition s_12 inside the group."""
        n, out = self.n, []
        for i in range(n):
            for j in range(i + 1, n):
                s = GroupElem.transposition(n, i, j)
                out.append(s)
                if self.kind == "B":
                    out.append(s * GroupElem.sign_flip(n, i) * GroupElem.sign_flip(n, j))
        return out

    def sign_reflections(self) -> List[GroupElem]:
        """Σ_C: conjugates of γ_n (empty in type A)."""
        if self.kind == "A":
            return []
        return [GroupElem.sign_flip(self.n, i) for i in range(self.n)]

    @staticmethod
    def omega(a: Tuple[str, int, int], b: Tuple[str, int, int]) -> int:
        """Symplectic form on single letters (letter, index, sign): ω(y_i, x_j) = δ_ij."""
        (la, ia, sa), (lb, ib, sb) = a, b
        if ia != ib or la == lb:
            return 0
        return sa * sb * (1 if la == "y" else -1)

    def _omega_lin(self, left: List[Tuple[str, int, int]], right: List[Tuple[str, int, int]]) -> int:
        return sum(self.omega(a, b) for a in left for b in right)

    def _one_minus(self, s: GroupElem, letter: str, i: int) -> List[Tuple[str, int, int]]:
        return [(letter, i, 1), (letter, s.perm[i], -s.signs[i])]

    def _commutator_table(self):
        n = self.n
        sigma, sigma_c = self.reflections(), self.sign_reflections()
        table = {}
        for i in range(n):
            for j in range(n):
                terms: Dict[GroupElem, ParamPoly] = {}
                base = self.omega(("y", i, 1), ("x", j, 1))
                if base:
                    accumulate(terms, self.identity, self.t * base)
                for s in sigma:
                    w = self._omega_lin([("y", i, 1)], self._one_minus(s, "x", j))
                    if w:
                        accumulate(terms, s, self.k * (-w))
                for s in sigma_c:
                    # c / (1 - T_C) with T_C = -1
                    w = self._omega_lin(self._one_minus(s, "y", i), self._one_minus(s, "x", j))
                    if w:
                        accumulate(terms, s, self.c * Fraction(-w, 2))
                table[(i, j)] = list(terms.items())
        return table

    def commutator_yx(self, i: int, j: int) -> "CherElement":
        """[y_i, x_j] as an element of the group algebra."""
        return CherElement(self, {(self.zero_exps, self.zero_exps, g): c for g, c in self._comm[(i, j)]})

    def group(self) -> List[GroupElem]:
        if self._group is None:
            self._group = group_elements(self.n, self.kind)
        return self._group

    # rewriting kernel -------------------------------------------------------------
    def _yi_times_x(self, i: int, C: Exps) -> Dict[Tuple[Exps, GroupElem], ParamPoly]:
        """Correction terms of y_i·x^C = x^C·y_i + Σ coef·x^D·g."""
        key = (i, C)
        hit = self._yix_memo.get(key)
        if hit is not None:
            return hit
        out: Dict[Tuple[Exps, GroupElem], ParamPoly] = {}
        n = self.n
        for j in range(n):
            cj = C[j]
            if not cj:
                continue
            for used in range(cj):
                prefix = C[:j] + (used,) + (0,) * (n - j - 1)
                suffix = (0,) * j + (cj - used - 1,) + C[j + 1:]
                for g, coef in self._comm[(i, j)]:
                    moved, sign = g.act(suffix)
                    accumulate(out, (_add(prefix, moved), g), coef * sign if sign < 0 else coef)
        self._yix_memo[key] = out
        return out

    def yx(self, B: Exps, C: Exps) -> Dict[Tuple[Exps, Exps, GroupElem], ParamPoly]:
        """Normal form of y^B·x^C as {(x-exps, y-exps, g): coef}."""
        key = (B, C)
        hit = self._yx_memo.get(key)
        if hit is not None:
            return hit
        if not any(B) or not any(C):
            out = {(C, B, self.identity): ParamPoly.const(1)}
            self._yx_memo[key] = out
            return out
        i = max(idx for idx, b in enumerate(B) if b)
        rest = B[:i] + (B[i] - 1,) + B[i + 1:]
        out: Dict[Tuple[Exps, Exps, GroupElem], ParamPoly] = {}
        for (A2, B2, g2), c2 in self.yx(rest, C).items():
            target = g2.perm[i]
            B3 = B2[:target] + (B2[target] + 1,) + B2[target + 1:]
            accumulate(out, (A2, B3, g2), c2 if g2.signs[i] > 0 else -c2)
        for (D, g), c in self._yi_times_x(i, C).items():
            for (A2, B2, g2), c2 in self.yx(rest, D).items():
                accumulate(out, (A2, B2, g2 * g), c * c2)
        self._yx_memo[key] = out
        return out

    def clear_caches(self) -> None:
        self._yx_memo.clear()
        self._yix_memo.clear()

    # constructors -------------------------------------------------------------------
    def one(self) -> "CherElement":
        return CherElement(self, {(self.zero_exps, self.zero_exps, self.identity): 1})

    def scalar(self, value) -> "CherElement":
        return self.one().scale(ParamPoly.coerce(value))

    def x(self, i: int) -> "CherElement":
        """x_i with 1-based index."""
        return CherElement(self, {(_unit_vec(self.n, i - 1), self.zero_exps, self.identity): 1})

    def y(self, i: int) -> "CherElement":
        return CherElement(self, {(self.zero_exps, _unit_vec(self.n, i - 1), self.identity): 1})

    def group_element(self, g: GroupElem) -> "CherElement":
        if g.n != self.n or (self.kind == "A" and any(s < 0 for s in g.signs)):
            raise CherednikError(f"{g} is not in the group of {self}")
        return CherElement(self, {(self.zero_exps, self.zero_exps, g): 1})

    def s(self, i: int, j: int) -> "CherElement":
        return self.group_element(GroupElem.transposition(self.n, i - 1, j - 1))

    def gamma(self, i: int) -> "CherElement":
        return self.group_element(GroupElem.sign_flip(self.n, i - 1))

    def normal_form(self, word: Iterable) -> "CherElement":
        """Product of a word of generators: ("x", i), ("y", i), ("s", i, j), ("g", i)
        or GroupElem instances (indices 1-based)."""
        out = self.one()
        for letter in word:
            if isinstance(letter, GroupElem):
                factor = self.group_element(letter)
            elif letter[0] == "x":
                factor = self.x(letter[1])
            elif letter[0] == "y":
                factor = self.y(letter[1])
            elif letter[0] == "s":
                factor = self.s(letter[1], letter[2])
            elif letter[0] == "g":
                factor = self.gamma(letter[1])
            else:
                raise CherednikError(f"unknown generator {letter!r}")
            out = out * factor
        return out

    def __repr__(self) -> str:
        return f"CherAlgebra(n={self.n}, type={self.kind})"


class CherElement(LinComb):
    """Σ coef · x^A y^B g, keys (A, B, g)."""

    __slots__ = ("algebra",)

    def __init__(self, algebra: CherAlgebra, terms: Mapping = None):
        super().__init__(terms)
        self.algebra = algebra

    def _like(self, terms):
        obj = CherElement.__new__(CherElement)
        obj.terms = terms
        obj.algebra = self.algebra
        return obj

    def __mul__(self, other):
        if isinstance(other, (int, Fraction, ParamPoly)):
            return self.scale(other)
        if not isinstance(other, CherElement):
            return NotImplemented
        if other.algebra is not self.algebra:
            raise CherednikError("elements of different algebras")
        alg = self.algebra
        out: Dict = {}
        for (A, B, g), ca in self.terms.items():
            for (C, D, h), cb in other.terms.items():
                C2, sc = g.act(C)
                D2, sd = g.act(D)
                gh = g * h
                base = ca * cb
                if sc * sd < 0:
                    base = -base
                for (A2, B2, g2), c2 in alg.yx(B, C2).items():
                    D3, s3 = g2.act(D2)
                    coef = base * c2
                    accumulate(out, (_add(A, A2), _add(B2, D3), g2 * gh), -coef if s3 < 0 else coef)
        return self._like(out)

    def degree(self) -> int:
        return max((sum(A) + sum(B) for A, B, _ in self.terms), default=-1)

    def leading_symbol(self) -> Dict[Tuple[Exps, Exps], ParamPoly]:
        """Top x,y-degree part with group elements dropped (the symbol of e·h·e)."""
        d = self.degree()
        out: Dict = {}
        for (A, B, g), c in self.terms.items():
            if sum(A) + sum(B) == d:
                accumulate(out, (A, B), c)
        return out

    def _format_key(self, key) -> str:
        A, B, g = key
        parts = [f"x{i + 1}^{a}" if a > 1 else f"x{i + 1}" for i, a in enumerate(A) if a]
        parts += [f"y{i + 1}^{b}" if b > 1 else f"y{i + 1}" for i, b in enumerate(B) if b]
        if not g.is_identity():
            parts.append(str(g))
        return "*".join(parts) or "1"


def normal_form(algebra: CherAlgebra, word: Iterable) -> CherElement:
    return algebra.normal_form(word)


def symmetrizer(algebra: CherAlgebra, sign_character: bool = False) -> CherElement:
    """Averaging idempotent e; with sign_character, the antisymmetrizer of S_n."""
    group = algebra.group()
    weight = Fraction(1, len(group))
    z = algebra.zero_exps
    return CherElement(algebra, {(z, z, g): weight * (g.permutation_sign() if sign_character else 1)
                                 for g in group})


# spherical elements -------------------------------------------------------------

Pair = Tuple[int, int]
Orbit = Tuple[Pair, ...]


def orbit_of(A: Exps, B: Exps) -> Orbit:
    return tuple(sorted(zip(A, B), reverse=True))


@lru_cache(maxsize=None)
def orbit_size(rep: Orbit) -> int:
    size = math.factorial(len(rep))
    for _, group in itertools.groupby(rep):
        size //= math.factorial(len(list(group)))
    return size


@lru_cache(maxsize=None)
def orbit_monomials(rep: Orbit) -> Tuple[Tuple[Exps, Exps], ...]:
    seen = sorted(set(itertools.permutations(rep)))
    return tuple((tuple(a for a, _ in p), tuple(b for _, b in p)) for p in seen)


def _vanishes(alg: CherAlgebra, rep: Orbit) -> bool:
    """A monomial whose stabilizer acts by -1 averages to zero (type B odd slots)."""
    return alg.kind == "B" and any((a + b) & 1 for a, b in rep)


class SphericalElement(LinComb):
    """An element F·e of e·H·e with F invariant, stored as Σ β_ρ·O_ρ where O_ρ is
    the sum of the distinct monomials in the orbit of the representative ρ."""

    __slots__ = ("algebra",)

    def __init__(self, algebra: CherAlgebra, terms: Mapping = None):
        super().__init__(terms)
        self.algebra = algebra

    def _like(self, terms):
        obj = SphericalElement.__new__(SphericalElement)
        obj.terms = terms
        obj.algebra = self.algebra
        return obj

    @staticmethod
    def unit(algebra: CherAlgebra) -> "SphericalElement":
        return SphericalElement(algebra, {((0, 0),) * algebra.n: 1})

    @staticmethod
    def symmetrize(algebra: CherAlgebra, monomials: Mapping[Tuple[Exps, Exps], object]) -> "SphericalElement":
        """e·(Σ c·x^A y^B)·e, i.e. the average of the group images."""
        out: Dict[Orbit, ParamPoly] = {}
        for (A, B), c in monomials.items():
            rep = orbit_of(A, B)
            if _vanishes(algebra, rep):
                continue
            accumulate(out, rep, ParamPoly.coerce(c) / orbit_size(rep))
        return SphericalElement._raw_with(algebra, out)

    @staticmethod
    def _raw_with(algebra, terms):
        obj = SphericalElement.__new__(SphericalElement)
        obj.terms = terms
        obj.algebra = algebra
        return obj

    def monomials(self) -> Dict[Tuple[Exps, Exps], ParamPoly]:
        out: Dict = {}
        for rep, c in self.terms.items():
            for mono in orbit_monomials(rep):
                out[mono] = c
        return out

    def __mul__(self, other):
        if isinstance(other, (int, Fraction, ParamPoly)):
            return self.scale(other)
        if not isinstance(other, SphericalElement):
            return NotImplemented
        alg = self.algebra
        if other.algebra is not alg:
            raise CherednikError("elements of different algebras")
        right = other.monomials()
        accum: Dict[Tuple[Exps, Exps], ParamPoly] = {}
        for rep, beta in self.terms.items():
            A = tuple(a for a, _ in rep)
            B = tuple(b for _, b in rep)
            weight = beta * orbit_size(rep)
            for (C, D), gamma in right.items():
                base = weight * gamma
                for (A2, B2, g2), c2 in alg.yx(B, C).items():
                    D2, sign = g2.act(D)
                    coef = base * c2
                    accumulate(accum, (_add(A, A2), _add(B2, D2)), -coef if sign < 0 else coef)
        return SphericalElement.symmetrize(alg, accum)

    def to_cher(self) -> CherElement:
        """Explicit F·e in the full algebra (expensive: multiplies by e)."""
        alg = self.algebra
        plain = CherElement(alg, {(A, B, alg.identity): c for (A, B), c in self.monomials().items()})
        return plain * symmetrizer(alg)

    @staticmethod
    def from_cher(element: CherElement) -> "SphericalElement":
        """Read off F from an element of the form F·e (checked)."""
        alg = element.algebra
        ident = {(A, B): c for (A, B, g), c in element.terms.items() if g.is_identity()}
        size = len(alg.group())
        candidate = SphericalElement.symmetrize(alg, {k: v * size for k, v in ident.items()})
        candidate = SphericalElement._raw_with(
            alg, {r: c for r, c in candidate.terms.items()})
        if candidate.to_cher() != element:
            raise CherednikError("element is not of the form F·e with F invariant")
        return candidate

    def degree(self) -> int:
        return max((sum(a + b for a, b in rep) for rep in self.terms), default=-1)

    def top_part(self) -> "SphericalElement":
        d = self.degree()
        return self._like({r: c for r, c in self.terms.items() if sum(a + b for a, b in r) == d})

    def _format_key(self, rep) -> str:
        return "O" + "".join(f"({a},{b})" for a, b in rep if a or b) if any(a or b for a, b in rep) else "e"

    def to_json(self) -> dict:
        return {"n": self.algebra.n, "type": self.algebra.kind,
                "terms": [{"x": [a for a, _ in rep], "y": [b for _, b in rep], "coef": str(c)}
                          for rep, c in sorted(self.terms.items())]}


def cher_to_json(element: CherElement) -> dict:
    return {"n": element.algebra.n, "type": element.algebra.kind,
            "terms": [{"x": list(A), "y": list(B), "perm": [p + 1 for p in g.perm],
                       "signs": list(g.signs), "coef": str(c)}
                      for (A, B, g), c in sorted(element.terms.items())]}


def spherical_from_json(algebra: CherAlgebra, data: dict) -> SphericalElement:
    terms = {}
    for item in data["terms"]:
        terms[tuple(zip(item["x"], item["y"]))] = parse_poly(item["coef"])
    return SphericalElement(algebra, terms)


# T elements -------------------------------------------------------------------------

@dataclass(frozen=True)
class TIndex:
    """A multiset of pairs (r, q) with r + q > 0, stored as sorted (pair, multiplicity)."""

    items: Tuple[Tuple[Pair, int], ...]

    @staticmethod
    def of(mapping: Mapping[Pair, int] = None, **_) -> "TIndex":
        clean = {}
        for pair, mult in (mapping or {}).items():
            r, q = pair
            if r < 0 or q < 0 or r + q == 0 or mult < 0:
                raise CherednikError(f"bad T index entry {pair}↦{mult}")
            if mult:
                clean[(r, q)] = clean.get((r, q), 0) + mult
        return TIndex(tuple(sorted(clean.items())))

    @staticmethod
    def unit() -> "TIndex":
        return TIndex(())

    def as_dict(self) -> Dict[Pair, int]:
        return dict(self.items)

    @property
    def weight(self) -> int:
        return sum((r + q) * m for (r, q), m in self.items)

    @property
    def size(self) -> int:
        return sum(m for _, m in self.items)

    def factors(self) -> List[Pair]:
        return [pair for pair, m in self.items for _ in range(m)]

    def __add__(self, other: "TIndex") -> "TIndex":
        merged = self.as_dict()
        for pair, m in other.items:
            merged[pair] = merged.get(pair, 0) + m
        return TIndex.of(merged)

    def __str__(self) -> str:
        if not self.items:
            return "{}"
        return "{" + ", ".join(f"({r},{q})↦{m}" for (r, q), m in self.items) + "}"

    def to_json(self):
        return [[r, q, m] for (r, q), m in self.items]

    @staticmethod
    def from_json(data) -> "TIndex":
        return TIndex.of({(r, q): m for r, q, m in data})


def indices_of_weight(L: int) -> List[TIndex]:
    """All T indices with w(m) = L."""
    pairs_by_deg = {d: [(r, d - r) for r in range(d, -1, -1)] for d in range(1, L + 1)}
    out: List[TIndex] = []

    def rec(remaining, max_deg, acc):
        if remaining == 0:
            out.append(TIndex.of(_count(acc)))
            return
        for d in range(min(remaining, max_deg), 0, -1):
            for pair in pairs_by_deg[d]:
                if acc and (d == sum(acc[-1])) and pair > acc[-1]:
                    continue
                rec(remaining - d, d, acc + [pair])

    rec(L, L, [])
    return sorted(set(out), key=lambda m: m.items)


def _count(pairs: List[Pair]) -> Dict[Pair, int]:
    out: Dict[Pair, int] = {}
    for p in pairs:
        out[p] = out.get(p, 0) + 1
    return out


def _single_slot_shuffles(algebra: CherAlgebra, r: int, q: int) -> Dict[Tuple[Exps, Exps], ParamPoly]:
    """(1/(r+q)!)·Σ_σ (shuffle word in x_1, y_1), normal-ordered, group dropped."""
    L = r + q
    total: Dict[Tuple[Exps, Exps], ParamPoly] = {}
    letters = ["x"] * r + ["y"] * q
    words = set(itertools.permutations(letters))
    mult = math.factorial(r) * math.factorial(q)
    x1, y1 = algebra.x(1), algebra.y(1)
    for word in words:
        elem = algebra.one()
        for letter in word:
            elem = elem * (x1 if letter == "x" else y1)
        for (A, B, g), c in elem.terms.items():
            accumulate(total, (A, B), c * Fraction(mult, math.factorial(L)))
    return total


def build_T(algebra: CherAlgebra, r: int, q: int) -> SphericalElement:
    """T_{r,q,n}: the spherical projection of Σ_i (all shuffles of r x_i's and q y_i's)/(r+q)!.

    For type B and odd r+q this is the e·(...)·e projection, which vanishes."""
    if r < 0 or q < 0 or r + q < 1:
        raise CherednikError("build_T needs r + q ≥ 1")
    key = ("T", r, q)
    cache = _spherical_cache(algebra)
    if key not in cache:
        single = _single_slot_shuffles(algebra, r, q)
        cache[key] = SphericalElement.symmetrize(algebra, single).scale(algebra.n)
    return cache[key]


def _spherical_cache(algebra: CherAlgebra) -> dict:
    cache = getattr(algebra, "_spherical_cache", None)
    if cache is None:
        cache = {}
        algebra._spherical_cache = cache
    return cache


def build_Tm(algebra: CherAlgebra, m: TIndex, budget: int = 16) -> SphericalElement:
    """T_n(m) = (1/|m|!)·Σ over orderings of the |m| factors T_{r,q,n}."""
    if m.weight > budget:
        raise BudgetExceededError(f"w(m) = {m.weight} exceeds budget {budget}")
    cache = _spherical_cache(algebra)
    key = ("Tm", m)
    if key in cache:
        return cache[key]
    factors = m.factors()
    if not factors:
        out = SphericalElement.unit(algebra)
    elif len(factors) == 1:
        out = build_T(algebra, *factors[0])
    else:
        total = None
        arrangements = set(itertools.permutations(factors))
        for order in arrangements:
            prod = build_T(algebra, *order[0])
            for pair in order[1:]:
                prod = prod * build_T(algebra, *pair)
            total = prod if total is None else total + prod
        weight = Fraction(1, math.factorial(len(factors)))
        for pair, mult in m.items:
            weight *= math.factorial(mult)
        out = total.scale(weight)
    cache[key] = out
    return out


def power_sum_product(algebra: CherAlgebra, m: TIndex) -> SphericalElement:
    """Π P_{r,q,n}^{m_{r,q}} as a (commutative) orbit combination."""
    n = algebra.n
    current: Dict[Tuple[Exps, Exps], Fraction] = {(algebra.zero_exps, algebra.zero_exps): Fraction(1)}
    for r, q in m.factors():
        nxt: Dict[Tuple[Exps, Exps], Fraction] = {}
        for (A, B), c in current.items():
            for i in range(n):
                key = (A[:i] + (A[i] + r,) + A[i + 1:], B[:i] + (B[i] + q,) + B[i + 1:])
                nxt[key] = nxt.get(key, 0) + c
        current = nxt
    out: Dict[Orbit, ParamPoly] = {}
    for (A, B), c in current.items():
        rep = orbit_of(A, B)
        out[rep] = ParamPoly.const(c)  # invariant: every monomial of an orbit has equal coefficient
    return SphericalElement(algebra, out)


def _peel_matrix(algebra: CherAlgebra, L: int):
    """Cached rational inverse data for the leading symbols of weight-L T indices."""
    cache = _spherical_cache(algebra)
    key = ("peel", L)
    if key in cache:
        return cache[key]
    indices = indices_of_weight(L)
    symbols = [power_sum_product(algebra, m) for m in indices]
    rows = sorted({rep for s in symbols for rep in s.terms})
    matrix = [[s.terms[rep].constant_value() if rep in s.terms else Fraction(0) for s in symbols]
              for rep in rows]
    # choose independent rows and invert that square block
    chosen, inverse = _left_inverse(matrix, len(indices))
    cache[key] = (indices, rows, chosen, inverse)
    return cache[key]


def _left_inverse(matrix: List[List[Fraction]], ncols: int):
    chosen: List[int] = []
    echelon: List[Tuple[int, List[Fraction]]] = []
    for row_idx, row in enumerate(matrix):
        vec = list(row)
        for pivot, prow in echelon:
            if vec[pivot]:
                f = vec[pivot]
                vec = [a - f * b for a, b in zip(vec, prow)]
        pivot = next((i for i, v in enumerate(vec) if v), None)
        if pivot is None:
            continue
        inv = 1 / vec[pivot]
        vec = [v * inv for v in vec]
        echelon.append((pivot, vec))
        chosen.append(row_idx)
        if len(chosen) == ncols:
            break
    if len(chosen) < ncols:
        raise DegreeExceedsRankError("leading symbols are dependent: rank too small for this degree")
    square = [[matrix[r][c] for c in range(ncols)] + [Fraction(int(i == j)) for j in range(ncols)]
              for i, r in enumerate(chosen)]
    for col in range(ncols):
        piv = next(r for r in range(col, ncols) if square[r][col])
        square[col], square[piv] = square[piv], square[col]
        inv = 1 / square[col][col]
        square[col] = [v * inv for v in square[col]]
        for r in range(ncols):
            if r != col and square[r][col]:
                f = square[r][col]
                square[r] = [a - f * b for a, b in zip(square[r], square[col])]
    return chosen, [row[ncols:] for row in square]


def decompose_T_basis(element: SphericalElement, n: Optional[int] = None) -> Dict[TIndex, ParamPoly]:
    """Coordinates of a spherical element in the basis {T_n(m)} (unit index = e)."""
    alg = element.algebra
    if n is not None and n != alg.n:
        raise CherednikError("rank mismatch")
    if alg.kind != "A":
        raise CherednikError("T-basis decomposition is implemented for type A")
    if element.degree() > alg.n:
        raise DegreeExceedsRankError(f"degree {element.degree()} exceeds rank {alg.n}")
    coords: Dict[TIndex, ParamPoly] = {}
    remainder = element
    while remainder:
        L = remainder.degree()
        if L == 0:
            accumulate(coords, TIndex.unit(), remainder.terms[((0, 0),) * alg.n])
            break
        indices, rows, chosen, inverse = _peel_matrix(alg, L)
        top = remainder.top_part()
        rhs = [top.terms.get(rows[r], ParamPoly()) for r in chosen]
        step = None
        for idx, m in enumerate(indices):
            coef = ParamPoly()
            for j, value in enumerate(rhs):
                if inverse[idx][j] and value:
                    coef = coef + value * inverse[idx][j]
            if coef:
                accumulate(coords, m, coef)
                piece = build_Tm(alg, m).scale(coef)
                step = piece if step is None else step + piece
        new = remainder - step if step is not None else remainder
        if new and new.degree() >= L:
            raise CherednikError("top degree did not cancel: element is not in the T span")
        remainder = new
    return coords


def recompose(algebra: CherAlgebra, coords: Mapping[TIndex, object]) -> SphericalElement:
    out = SphericalElement(algebra, {})
    for m, c in coords.items():
        out = out + build_Tm(algebra, m).scale(ParamPoly.coerce(c))
    return out


def coords_to_json(coords: Mapping[TIndex, ParamPoly]) -> list:
    return [{"m": m.to_json(), "poly": str(c)} for m, c in sorted(coords.items(), key=lambda kv: kv[0].items)]


# group-algebra centre ----------------------------------------------------------------

def omega_central(n: int) -> CherElement:
    """Ω_n = Σ_{i<j} s_ij in the group algebra of S_n."""
    alg = CherAlgebra(n, "A", t=0, k=0)
    out = CherElement(alg, {})
    for i in range(1, n + 1):
        for j in range(i + 1, n + 1):
            out = out + alg.s(i, j)
    return out


def omega_checks(n: int) -> Dict[str, bool]:
    omega = omega_central(n)
    alg = omega.algebra
    central = all((omega * alg.s(i, i + 1)) == (alg.s(i, i + 1) * omega) for i in range(1, n))
    e_plus, e_minus = symmetrizer(alg), symmetrizer(alg, sign_character=True)
    pairs = n * (n - 1) // 2
    return {"central": central,
            "trivial": omega * e_plus == e_plus.scale(pairs),
            "sign": omega * e_minus == e_minus.scale(-pairs)}


def dump_json(data) -> str:
    return json.dumps(data, indent=2, sort_keys=True)


# generator images and relation checks at finite rank ---------------------------------

def spherical_model(algebra: CherAlgebra):
    from .ncexpr import Model
    return Model(f"eH(n={algebra.n}, {algebra.kind})", unit=lambda: SphericalElement.unit(algebra))


def beta_images(algebra: CherAlgebra, three_generators: bool = False) -> Dict[str, SphericalElement]:
    """Images of the presentation generators in the spherical subalgebra."""
    half = Fraction(1, 2)
    e = build_T(algebra, 2, 0).scale(-half)
    f = build_T(algebra, 0, 2).scale(half)
    K = SphericalElement.unit(algebra).scale(algebra.n)
    if algebra.kind == "B":
        return {"K": K, "e": e, "f": f, "h": e * f - f * e,
                "d1": build_T(algebra, 4, 0).scale(Fraction(1, 8))}
    images = {"p": build_T(algebra, 0, 1), "f": f, "r": build_T(algebra, 3, 0).scale(Fraction(1, 6))}
    if not three_generators:
        images.update({"K": K, "q": build_T(algebra, 1, 0), "e": e})
    return images


def expected_s_values(kind: str, n, k=None, lam=None) -> Dict[str, ParamPoly]:
    """The s-parameters of the deformation family realized at rank n (t = 1)."""
    k = P("k") if k is None else ParamPoly.coerce(k)
    n = ParamPoly.coerce(n)
    kk = k * (k + 1)
    if kind == "A":
        return {"s1": 1 + kk * (1 - n), "s2": kk}
    lam = P("lam") if lam is None else ParamPoly.coerce(lam)
    base = kk + 1
    return {"s1": 4 * kk * n + lam ** 2 - 4 * base,
            "s2": 4 * kk * n + lam ** 2 - 9 * base,
            "s3": kk}


def verify_beta_finite(kind: str, n: int, k=None, lam=None, three_generators: bool = False,
                       tensor_order: str = "right"):
    """Check every relation of the deformed presentation on the spherical images at rank n."""
    from .freealg import relation_set, verify_relations_in_model
    k = P("k") if k is None else k
    c = 0
    if kind == "B":
        lam = P("lam") if lam is None else lam
        c = ParamPoly.coerce(lam) - Fraction(1, 2)
    algebra = CherAlgebra(n, kind, t=1, k=k, c=c)
    params = expected_s_values(kind, n, k, lam)
    rel_kind = "a-s1s2" if kind == "A" else "a-typeB"
    relations = relation_set(rel_kind, three_generators, tensor_order=tensor_order)
    report = verify_relations_in_model(rel_kind, params, spherical_model(algebra), beta_images(algebra, three_generators),
                                       three_generators=three_generators, relations=relations)
    report.title = f"type {kind} relations at rank n={n}"
    for name, value in params.items():
        report.note(f"{name} = {value}")
    if kind == "B":
        s1, s2, s3 = params["s1"], params["s2"], params["s3"]
        report.add("s1 - s2 = 5(s3 + 1)", (s1 - s2 - 5 * (s3 + 1)).is_zero())
    return report


def fit_psi2_coefficients(n: int, k=None, lam=None, tensor_order: str = "right") -> Optional[Tuple[ParamPoly, ParamPoly]]:
    """Write the type-B degree-6 relation's left side at rank n as a*e^2 + b*d1.

    Returns (a, b), or None when the left side is not in that span."""
    from .freealg import relation_set
    from .ncexpr import evaluate
    k = P("k") if k is None else k
    lam = P("lam") if lam is None else lam
    algebra = CherAlgebra(n, "B", t=1, k=k, c=ParamPoly.coerce(lam) - Fraction(1, 2))
    images = beta_images(algebra)
    rel = next(r for r in relation_set("a-typeB", tensor_order=tensor_order) if r.name == "psi2'")
    lhs = evaluate(rel.lhs, images, spherical_model(algebra))
    e2, d1 = images["e"] * images["e"], images["d1"]
    # e^2 is the only one of the two with a two-factor orbit term
    key = next(key for key in e2.terms if key not in d1.terms)
    a = lhs.coefficient(key) / e2.coefficient(key)
    rest = lhs - e2.scale(a)
    dkey = next(iter(d1.terms))
    b = rest.coefficient(dkey) / d1.coefficient(dkey)
    if rest - d1.scale(b):
        return None
    return a, b
