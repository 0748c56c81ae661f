"""Finite-dimensional sl2-modules built from words in weighted symbols.

A symbol family X of type V_m has members X_1..X_{m+1} with
f X_i = X_{i+1}, e X_{i+1} = i (m - i + 1) X_i and h X_i = (m - 2(i-1)) X_i.
Vectors are combinations of tensor, wedge or symmetric words of members.
"""

from __future__ import annotations

from dataclasses import dataclass, field
from fractions import Fraction
from itertools import combinations, combinations_with_replacement, product
from typing import Dict, List, Optional, Sequence, Tuple

from .arith import ParamPoly, P, solve_linear_exact
from .combination import LinComb, accumulate

KINDS = ("tensor", "wedge", "symmetric")


class UndefinedImageError(ValueError):
    pass


class NotHighestWeightError(ValueError):
    pass


@dataclass(frozen=True, order=True)
class WeightedSymbol:
    """Member `index` (1-based) of a symbol family of sl2-type V_m."""

    degree: int
    family: str
    index: int
    m: int

    @property
    def weight(self) -> int:
        return self.m - 2 * (self.index - 1)

    @property
    def name(self) -> str:
        return f"{self.family}{self.index}"

    def f_image(self) -> Optional[Tuple[int, "WeightedSymbol"]]:
        if self.index > self.m:
            return None
        return 1, WeightedSymbol(self.degree, self.family, self.index + 1, self.m)

    def e_image(self) -> Optional[Tuple[int, "WeightedSymbol"]]:
        if self.index == 1:
            return None
        i = self.index - 1
        return i * (self.m - i + 1), WeightedSymbol(self.degree, self.family, i, self.m)

    def __str__(self) -> str:
        return self.name


@dataclass(frozen=True)
class SymbolFamily:
    """A named copy of V_m whose highest member sits in a given grading degree."""

    name: str
    m: int
    degree: int

    def member(self, index: int) -> WeightedSymbol:
        if not 1 <= index <= self.m + 1:
            raise ValueError(f"{self.name} has members 1..{self.m + 1}")
        return WeightedSymbol(self.degree, self.name, index, self.m)

    def members(self) -> List[WeightedSymbol]:
        return [self.member(i) for i in range(1, self.m + 2)]

    def __call__(self, index: int) -> WeightedSymbol:
        return self.member(index)


def canonical_word(kind: str, word: Tuple[WeightedSymbol, ...]) -> Tuple[int, Tuple[WeightedSymbol, ...]]:
    """Sign and canonical representative of a word (sign 0 for vanishing wedges)."""
    if kind == "tensor":
        return 1, word
    if kind == "symmetric":
        return 1, tuple(sorted(word))
    if kind == "wedge":
        if len(set(word)) < len(word):
            return 0, word
        order = sorted(range(len(word)), key=lambda i: word[i])
        # parity of the sorting permutation
        sign = 1
        seen = [False] * len(word)
        for start in range(len(word)):
            if seen[start]:
                continue
            length = 0
            j = start
            while not seen[j]:
                seen[j] = True
                j = order[j]
                length += 1
            if length % 2 == 0:
                sign = -sign
        return sign, tuple(word[i] for i in order)
    raise ValueError(f"unknown word kind {kind}")


class Sl2Vector(LinComb):
    """Combination of words of one kind; keys are canonical words."""

    __slots__ = ("kind",)

    def __init__(self, kind: str, terms=None):
        if kind not in KINDS:
            raise ValueError(f"unknown word kind {kind}")
        clean: Dict = {}
        for word, coef in (terms or {}).items():
            word = tuple(word)
            sign, cw = canonical_word(kind, word)
            if sign:
                accumulate(clean, cw, ParamPoly.coerce(coef) * sign)
        super().__init__(clean)
        self.kind = kind

    def _like(self, terms):
        obj = Sl2Vector.__new__(Sl2Vector)
        obj.terms = terms
        obj.kind = self.kind
        return obj

    @staticmethod
    def symbol(sym: WeightedSymbol, coef=1) -> "Sl2Vector":
        return Sl2Vector("tensor", {(sym,): coef})

    def weights(self) -> set:
        return {sum(s.weight for s in w) for w in self.terms}

    def weight(self) -> int:
        ws = self.weights()
        if len(ws) != 1:
            raise ValueError("vector is not weight-homogeneous")
        return ws.pop()

    def __eq__(self, other):
        if isinstance(other, Sl2Vector):
            return self.terms == other.terms and (self.kind == other.kind or not self.terms)
        return super().__eq__(other)

    __hash__ = LinComb.__hash__

    def _format_key(self, key) -> str:
        sep = {"tensor": "⊗", "wedge": "∧", "symmetric": "·"}[self.kind]
        return sep.join(s.name for s in key) if key else "1"


def wedge(*symbols: WeightedSymbol) -> Sl2Vector:
    return Sl2Vector("wedge", {tuple(symbols): 1})


def tensor(*symbols: WeightedSymbol) -> Sl2Vector:
    return Sl2Vector("tensor", {tuple(symbols): 1})


def sym(*symbols: WeightedSymbol) -> Sl2Vector:
    return Sl2Vector("symmetric", {tuple(symbols): 1})


def combine(kind: str, pairs) -> Sl2Vector:
    """Sum of coefficient * word over (coefficient, word) pairs."""
    return Sl2Vector(kind, {}) + sum((Sl2Vector(kind, {tuple(w): c}) for c, w in pairs), Sl2Vector(kind, {}))


def act(generator: str, v: Sl2Vector) -> Sl2Vector:
    """Leibniz action of e, f or h on a word vector."""
    if generator == "h":
        out = {}
        for word, coef in v.terms.items():
            w = sum(s.weight for s in word)
            if w:
                out[word] = coef * w
        return v._like(out)
    if generator not in ("e", "f"):
        raise ValueError(f"unknown sl2 generator {generator}")
    out: Dict = {}
    for word, coef in v.terms.items():
        for pos, s in enumerate(word):
            image = s.f_image() if generator == "f" else s.e_image()
            if image is None:
                continue
            scalar, new = image
            sign, cw = canonical_word(v.kind, word[:pos] + (new,) + word[pos + 1:])
            if sign:
                accumulate(out, cw, coef * (scalar * sign))
    return v._like(out)


@dataclass(frozen=True)
class WordSpace:
    """Tensor product of families, or a wedge/symmetric power of one family."""

    kind: str
    families: Tuple[SymbolFamily, ...]

    def basis(self) -> List[Tuple[WeightedSymbol, ...]]:
        if self.kind == "tensor":
            return [tuple(w) for w in product(*(f.members() for f in self.families))]
        fam = self.families[0]
        if any(f != fam for f in self.families):
            raise ValueError("wedge and symmetric powers need a single family")
        chooser = combinations if self.kind == "wedge" else combinations_with_replacement
        return [tuple(w) for w in chooser(fam.members(), len(self.families))]

    def weight_basis(self, weight: int) -> List[Tuple[WeightedSymbol, ...]]:
        return [w for w in self.basis() if sum(s.weight for s in w) == weight]

    def dimension(self) -> int:
        return len(self.basis())


def highest_weight_vectors(space: WordSpace, weight: int) -> List[Sl2Vector]:
    """Basis of ker(e) in the given weight space (integral, primitive)."""
    source = space.weight_basis(weight)
    if not source:
        return []
    images = [act("e", Sl2Vector(space.kind, {w: 1})) for w in source]
    targets = sorted({w for img in images for w in img.terms}, key=lambda w: tuple(w))
    if not targets:
        return [Sl2Vector(space.kind, {w: 1}) for w in source]
    matrix = [[img.terms.get(t, ParamPoly()).constant_value() for img in images] for t in targets]
    kernel = solve_linear_exact(matrix).nullspace
    out = []
    for vec in kernel:
        vec = _primitive(vec)
        out.append(Sl2Vector(space.kind, {w: c for w, c in zip(source, vec) if c}))
    return out


def _primitive(vec: Sequence[Fraction]) -> List[Fraction]:
    from math import gcd
    den = 1
    for c in vec:
        den = den * c.denominator // gcd(den, c.denominator)
    ints = [int(c * den) for c in vec]
    g = 0
    for c in ints:
        g = gcd(g, c)
    lead = next(c for c in ints if c)
    g = g if lead > 0 else -g
    return [Fraction(c, g) for c in ints]


def weight_multiplicities(space: WordSpace) -> Dict[int, int]:
    """Number of highest weight vectors per weight, i.e. the V_m decomposition."""
    weights = sorted({sum(s.weight for s in w) for w in space.basis()}, reverse=True)
    return {w: len(highest_weight_vectors(space, w)) for w in weights if w >= 0}


def f_orbit(v: Sl2Vector) -> List[Sl2Vector]:
    if not act("e", v).is_zero():
        raise NotHighestWeightError("e does not annihilate the vector")
    m = v.weight()
    orbit = [v]
    for _ in range(m):
        orbit.append(act("f", orbit[-1]))
    if any(x.is_zero() for x in orbit):
        raise NotHighestWeightError("orbit vanishes early")
    if not act("f", orbit[-1]).is_zero():
        raise NotHighestWeightError("f^(m+1) does not annihilate the vector")
    return orbit


# the named families ----------------------------------------------------------------

K_FAM = SymbolFamily("K", 0, -2)
A_FAM = SymbolFamily("a", 1, -1)      # a1 = q, a2 = p
B_FAM = SymbolFamily("b", 2, 0)       # b1 = e, b_i = ad_f^{i-1} e
C_FAM = SymbolFamily("c", 3, 1)       # c1 = r (type A), q^3/6
D_FAM = SymbolFamily("d", 4, 2)       # type A: d1 = c2 ^ c1; type B: d1 = q^4/8
G_FAM = SymbolFamily("g", 6, 4)       # type B: g1 = d2 ^ d1


@dataclass
class RhsTerm:
    """coefficient * K^k_power * (image of the target module's orbit member)."""

    coefficient: ParamPoly
    k_power: int
    target: Sl2Vector
    target_name: str


@dataclass
class RelationModule:
    name: str
    ambient: str
    hw: Sl2Vector
    sl2_type: int
    rhs: List[RhsTerm] = field(default_factory=list)

    @property
    def members(self) -> List[Sl2Vector]:
        return f_orbit(self.hw)

    def check(self) -> bool:
        return (act("e", self.hw).is_zero()
                and act("h", self.hw) == self.hw.scale(self.sl2_type)
                and len(self.members) == self.sl2_type + 1)


def _c(i):
    return C_FAM.member(i)


def _d(i):
    return D_FAM.member(i)


def _g(i):
    return G_FAM.member(i)


def type_a_modules() -> Dict[str, RelationModule]:
    phi1 = wedge(_c(1), _c(4)) - wedge(_c(2), _c(3))
    psi4 = tensor(_d(1), _c(1))
    psi1 = (tensor(_d(1), _c(4)).scale(-4) + tensor(_d(2), _c(3)).scale(3)
            - tensor(_d(3), _c(2)).scale(2) + tensor(_d(4), _c(1)))
    chi1 = wedge(_d(3), _d(2)).scale(3) - wedge(_d(4), _d(1)).scale(2)
    # e-annihilated vector of weight 2 in n1 ⊗ b-1 (with c_i = f^{i-1} c1, a2 = f a1)
    alpha1 = tensor(_c(2), A_FAM.member(1)) - tensor(_c(1), A_FAM.member(2)).scale(3)
    alpha2 = tensor(_c(1), A_FAM.member(1))
    return {
        "phi1": RelationModule("phi1", "Λ²n1", phi1, 0),
        "psi4": RelationModule("psi4", "phi2⊗n1", psi4, 7),
        "psi1": RelationModule("psi1", "phi2⊗n1", psi1, 1),
        "chi1": RelationModule("chi1", "Λ²phi2", chi1, 2),
        "alpha1": RelationModule("alpha1", "n1⊗b-1", alpha1, 2),
        "alpha2": RelationModule("alpha2", "n1⊗b-1", alpha2, 4),
    }


def type_b_modules() -> Dict[str, RelationModule]:
    phi1p = wedge(_d(2), _d(3)).scale(3) - wedge(_d(1), _d(4)).scale(2)
    psi5p = tensor(_g(1), _d(1))
    psi2p = (tensor(_g(4), _d(1)) - tensor(_g(3), _d(2)).scale(3)
             + tensor(_g(2), _d(3)).scale(5) - tensor(_g(1), _d(4)).scale(5))
    return {
        "phi1'": RelationModule("phi1'", "Λ²n2", phi1p, 2),
        "psi5'": RelationModule("psi5'", "phi2'⊗n2", psi5p, 10),
        "psi2'": RelationModule("psi2'", "phi2'⊗n2", psi2p, 4),
    }


CATALOG_KINDS = ("po-A", "A-s1s2", "po-B", "A-s1s2s3")


def relation_catalog(kind: str) -> List[RelationModule]:
    """Relation modules with their deformation right-hand sides."""
    s1, s2, s3 = P("s1"), P("s2"), P("s3")
    b1 = Sl2Vector.symbol(B_FAM.member(1))
    a1 = Sl2Vector.symbol(A_FAM.member(1))
    a1sq = sym(A_FAM.member(1), A_FAM.member(1))
    unit = Sl2Vector("tensor", {(): 1})
    if kind in ("po-A", "A-s1s2"):
        mods = type_a_modules()
        out = [mods["phi1"], mods["psi4"], mods["psi1"], mods["chi1"]]
        if kind == "A-s1s2":
            mods["phi1"].rhs = [RhsTerm(s1 * Fraction(-1, 2), 1, unit, "1")]
            mods["psi1"].rhs = [RhsTerm(s1 * 15, 0, a1, "b-1")]
            mods["chi1"].rhs = [RhsTerm(s1 * 90, 0, b1, "b0"), RhsTerm(s2 * 42, 1, b1, "b0"),
                                RhsTerm(s2 * 21, 0, a1sq, "beta1")]
        return out
    if kind in ("po-B", "A-s1s2s3"):
        mods = type_b_modules()
        out = [mods["phi1'"], mods["psi5'"], mods["psi2'"]]
        if kind == "A-s1s2s3":
            e_sq = sym(B_FAM.member(1), B_FAM.member(1))
            mods["phi1'"].rhs = [RhsTerm(s1 * 6, 0, b1, "b0")]
            mods["psi2'"].rhs = [RhsTerm(s3 * 24, 0, e_sq, "alpha'"),
                                 RhsTerm(s2 * 288, 0, Sl2Vector.symbol(_d(1)), "n2")]
        return out
    raise ValueError(f"unknown catalog kind {kind!r}; expected one of {CATALOG_KINDS}")
