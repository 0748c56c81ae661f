"""Symbolic-in-n spherical calculus for the rational Cherednik algebra of type A.

Elements of e·H·e are handled as admissible sums Σ_{i_1..i_s} w(x_{i_u}, y_{i_u})·e
with the number of particles n kept as a polynomial variable.  Internally every
normal-ordered element is stored in the *injective* basis

    M_ρ = Σ_{i: slots → [n] injective} Π_c x_{i_c}^{a_c} y_{i_c}^{b_c} · e,

keyed by the sorted tuple ρ of nonzero pairs (a_c, b_c).  In that basis a group
element s_ab produced by a commutator simply swaps two slot labels of the word
to its right, so no case analysis over coinciding indices is needed; a slot
that ends up carrying no letters is summed out with the factor (n - #other slots).
"""

from __future__ import annotations

import hashlib
import itertools
import json
import math
import os
import tempfile
from fractions import Fraction
from typing import Dict, Iterable, List, Mapping, Optional, Sequence, Tuple

from .arith import ParamPoly, P, fit_polynomial, parse_poly
from .cherednik import TIndex
from .combination import LinComb, accumulate
from .ncexpr import Model
from .report import VerificationReport, timed

Pair = Tuple[int, int]
Key = Tuple[Pair, ...]
Labeled = Tuple[Tuple[int, ...], Tuple[int, ...]]

N = P("n")
T_PAR = P("t")
K_PAR = P("k")
ONE = ParamPoly.const(1)

DEFAULT_BUDGET = 16


class AdmissibleError(ArithmeticError):
    pass


class NonCancellationError(AdmissibleError):
    """The top degree survived a reduction step (an internal inconsistency)."""


class BudgetExceededError(AdmissibleError):
    pass


# admissible sums (unrestricted index ranges) ---------------------------------------

Letter = Tuple[str, int]


class AdmTerm:
    """C·Σ_{i_1..i_s} a(1)_{i_u(1)} ... a(l)_{i_u(l)} e with free (unrestricted) indices."""

    __slots__ = ("coefficient", "word", "slot_count")

    def __init__(self, coefficient, word: Sequence[Letter], slot_count: Optional[int] = None):
        self.coefficient = ParamPoly.coerce(coefficient)
        self.word = tuple((str(l), int(s)) for l, s in word)
        used = max((s for _, s in self.word), default=0)
        self.slot_count = used if slot_count is None else int(slot_count)
        if self.slot_count < used or any(l not in "xy" or s < 1 for l, s in self.word):
            raise AdmissibleError(f"malformed admissible term {self.word} / {self.slot_count}")

    def __eq__(self, other):
        return (isinstance(other, AdmTerm) and self.word == other.word
                and self.slot_count == other.slot_count and self.coefficient == other.coefficient)

    def __hash__(self):
        return hash((self.word, self.slot_count, self.coefficient))

    def __repr__(self):
        body = "".join(f"{l}{s}" for l, s in self.word) or "1"
        return f"AdmTerm({self.coefficient}·Σ[{self.slot_count}] {body})"


def canonicalize(term: AdmTerm) -> AdmTerm:
    """Renumber slots by first occurrence; each unused slot becomes a factor n."""
    relabel: Dict[int, int] = {}
    for _, s in term.word:
        if s not in relabel:
            relabel[s] = len(relabel) + 1
    unused = term.slot_count - len(relabel)
    return AdmTerm(term.coefficient * N ** unused, [(l, relabel[s]) for l, s in term.word], len(relabel))


class AdmSum(LinComb):
    """A finite sum of canonical admissible words (free indices) with (n, t, k) coefficients."""

    @staticmethod
    def of(terms: Iterable[AdmTerm]) -> "AdmSum":
        out: Dict[Tuple[Letter, ...], ParamPoly] = {}
        for t in terms:
            c = canonicalize(t)
            accumulate(out, c.word, c.coefficient)
        return AdmSum._raw(out)

    @staticmethod
    def unit() -> "AdmSum":
        return AdmSum._raw({(): ONE})

    def adm_terms(self) -> List[AdmTerm]:
        return [AdmTerm(c, w) for w, c in self.terms.items()]

    def _mul_keys(self, a, b, other):
        return {concat_words(a, b): ONE}

    def _format_key(self, key) -> str:
        return "Σ " + ("".join(f"{l}{s}" for l, s in key) or "1")


def concat_words(a: Tuple[Letter, ...], b: Tuple[Letter, ...]) -> Tuple[Letter, ...]:
    shift = max((s for _, s in a), default=0)
    return canonicalize(AdmTerm(1, a + tuple((l, s + shift) for l, s in b))).word


def product(a: AdmSum, b: AdmSum) -> AdmSum:
    """Concatenation product of admissible sums (slot sets disjointly united)."""
    return a * b


# set partitions ------------------------------------------------------------------------

def set_partitions(items: Sequence[int]):
    items = list(items)
    if not items:
        yield []
        return
    first, rest = items[0], items[1:]
    for part in set_partitions(rest):
        yield [[first]] + part
        for i in range(len(part)):
            yield part[:i] + [[first] + part[i]] + part[i + 1:]


def _mobius(partition) -> int:
    out = 1
    for block in partition:
        size = len(block)
        out *= (-1) ** (size - 1) * math.factorial(size - 1)
    return out


# the injective-basis engine -----------------------------------------------------------

def key_of(labeled: Labeled) -> Key:
    return tuple(sorted(p for p in zip(*labeled) if p != (0, 0)))


def _finish(labeled: Labeled, n_value=None, one=ONE):
    """Canonical key plus the factor from summing out empty slots."""
    pairs = list(zip(*labeled))
    used = sum(1 for p in pairs if p != (0, 0))
    factor = one
    n = N if n_value is None else n_value
    for s in range(len(pairs), used, -1):
        factor = factor * (n - (s - 1))
    return tuple(sorted(p for p in pairs if p != (0, 0))), factor


def _swap(vec: Tuple[int, ...], a: int, b: int) -> Tuple[int, ...]:
    v = list(vec)
    v[a], v[b] = v[b], v[a]
    return tuple(v)


class Engine:
    """Normal ordering in the injective basis with parameters (n, t, k); caches per instance."""

    def __init__(self, t=None, k=None, n=None):
        values = [v for v in (t, k, n) if v is not None and not isinstance(v, ParamPoly)]
        # with every parameter a number, inner loops run on plain Fractions
        self.numeric = len(values) == 3
        if self.numeric:
            vals = [Fraction(v) for v in (t, k, n)]
            if all(v.denominator == 1 for v in vals):
                vals = [int(v) for v in vals]
            self.t, self.k, self.n_value = vals
            self.one = vals[0] ** 0
        else:
            self.t = T_PAR if t is None else ParamPoly.coerce(t)
            self.k = K_PAR if k is None else ParamPoly.coerce(k)
            self.n_value = None if n is None else ParamPoly.coerce(n)
            self.one = ONE
        self.n = None if n is None else ParamPoly.coerce(n)
        self._y_memo: Dict = {}
        self._mm_memo: Dict = {}
        self._t_memo: Dict = {}
        self._sc_memo: Dict = {}

    def specialize_poly(self, p: ParamPoly) -> ParamPoly:
        return p if self.n is None else p.substitute({"n": self.n})

    def _out(self, c) -> ParamPoly:
        return ParamPoly.const(c) if self.numeric else c

    def _finish(self, labeled: Labeled):
        return _finish(labeled, self.n_value, self.one)

    # one letter y_a pushed into a normal monomial x^C y^D
    def _y_rules(self, a: int, C: Tuple[int, ...]):
        """y_a·x^C as a list of (new x-exponents, action on the y-exponents, coefficient).

        The action is ("y", a): add y_a; ("id",); ("swap", b): swap slots a, b;
        ("new",): move slot a to a fresh last slot."""
        key = (a, C)
        hit = self._y_memo.get(key)
        if hit is not None:
            return hit
        s = len(C)
        acc: Dict[tuple, object] = {(C, ("y",)): self.one}
        t, k = self.t, self.k
        for b in range(s):
            cb = C[b]
            for used in range(cb):
                before = C[:b] + (used,) + (0,) * (s - b - 1)
                after = (0,) * b + (cb - used - 1,) + C[b + 1:]
                if b != a:
                    moved = _swap(after, a, b)
                    accumulate(acc, (tuple(p + q for p, q in zip(before, moved)), ("swap", b)), k)
                    continue
                accumulate(acc, (tuple(p + q for p, q in zip(before, after)), ("id",)), t)
                for c in range(s):
                    if c == a:
                        continue
                    moved = _swap(after, a, c)
                    accumulate(acc, (tuple(p + q for p, q in zip(before, moved)), ("swap", c)), -k)
                # a fresh slot distinct from all existing ones
                after2 = after[:a] + (0,) + after[a + 1:] + (after[a],)
                accumulate(acc, (tuple(p + q for p, q in zip(before + (0,), after2)), ("new",)), -k)
        rules = [(C2, act, c) for (C2, act), c in acc.items()]
        self._y_memo[key] = rules
        return rules

    def y_times(self, a: int, C: Tuple[int, ...], D: Tuple[int, ...]) -> Dict[Labeled, object]:
        """Normal form of y_a·x^C y^D over the labeled slots of (C, D)."""
        out: Dict[Labeled, object] = {}
        for C2, act, c in self._y_rules(a, C):
            kind = act[0]
            if kind == "y":
                D2 = D[:a] + (D[a] + 1,) + D[a + 1:]
            elif kind == "id":
                D2 = D
            elif kind == "swap":
                D2 = _swap(D, a, act[1])
            else:
                D2 = D[:a] + (0,) + D[a + 1:] + (D[a],)
            accumulate(out, (C2, D2), c)
        return out

    def normal_labeled(self, word: Sequence[Letter], slots: int) -> Dict[Key, ParamPoly]:
        """Normal form of an injective-index word (0-based slots) in the M basis."""
        current: Dict[Labeled, ParamPoly] = {((0,) * slots, (0,) * slots): self.one}
        for letter, a in reversed(word):
            nxt: Dict[Labeled, ParamPoly] = {}
            for (C, D), c in current.items():
                if letter == "x":
                    accumulate(nxt, (C[:a] + (C[a] + 1,) + C[a + 1:], D), c)
                    continue
                for lab, c2 in self.y_times(a, C, D).items():
                    accumulate(nxt, lab, c * c2)
            current = nxt
        out: Dict[Key, ParamPoly] = {}
        for lab, c in current.items():
            key, factor = self._finish(lab)
            accumulate(out, key, c * factor)
        return {key: self._out(c) for key, c in out.items()}

    def yx_block(self, B: Tuple[int, ...], C: Tuple[int, ...], D: Tuple[int, ...]) -> Dict[Labeled, ParamPoly]:
        """Normal form of y^B x^C y^D over a common labeled slot set."""
        current: Dict[Labeled, ParamPoly] = {(C, D): self.one}
        for a in range(len(B) - 1, -1, -1):
            for _ in range(B[a]):
                nxt: Dict[Labeled, ParamPoly] = {}
                for (C1, D1), c in current.items():
                    if not any(C1):
                        D2 = D1[:a] + (D1[a] + 1,) + D1[a + 1:]
                        accumulate(nxt, (C1, D2), c)
                        continue
                    for lab, c2 in self.y_times(a, C1, D1).items():
                        accumulate(nxt, lab, c * c2)
                current = nxt
        return current

    def mul_keys(self, rho: Key, sigma: Key) -> Dict[Key, ParamPoly]:
        """M_ρ · M_σ in the M basis."""
        memo_key = (rho, sigma)
        hit = self._mm_memo.get(memo_key)
        if hit is not None:
            return hit
        s1, s2 = len(rho), len(sigma)
        out: Dict[Key, ParamPoly] = {}
        A = tuple(a for a, _ in rho)
        B = tuple(b for _, b in rho)
        if not any(b for b in B) or not any(c for c, _ in sigma):
            # nothing to reorder: y^B never meets an x of σ
            for pairs, coef in _merge_slots(rho, sigma, self.n_value, self.one):
                accumulate(out, pairs, coef)
            out = {key: self._out(c) for key, c in out.items()}
            self._mm_memo[memo_key] = out
            return out
        for matched in range(min(s1, s2) + 1):
            for src in itertools.combinations(range(s2), matched):
                for dst in itertools.permutations(range(s1), matched):
                    target = dict(zip(src, dst))
                    width = s1 + s2 - matched
                    C = [0] * width
                    D = [0] * width
                    fresh = s1
                    for j, (c, d) in enumerate(sigma):
                        slot = target.get(j)
                        if slot is None:
                            slot = fresh
                            fresh += 1
                        C[slot] += c
                        D[slot] += d
                    Aw = A + (0,) * (width - s1)
                    Bw = B + (0,) * (width - s1)
                    for (C2, D2), c in self.yx_block(Bw, tuple(C), tuple(D)).items():
                        Aw2 = Aw + (0,) * (len(C2) - width)
                        key, factor = self._finish((tuple(p + q for p, q in zip(Aw2, C2)), D2))
                        accumulate(out, key, c * factor)
        out = {key: self._out(c) for key, c in out.items()}
        self._mm_memo[memo_key] = out
        return out

    def multiply(self, u: Mapping[Key, ParamPoly], v: Mapping[Key, ParamPoly]) -> Dict[Key, ParamPoly]:
        out: Dict[Key, ParamPoly] = {}
        for ka, ca in u.items():
            for kb, cb in v.items():
                coef = ca * cb
                for key, c in self.mul_keys(ka, kb).items():
                    accumulate(out, key, coef * c)
        return out

    # T elements
    def expand_single(self, r: int, q: int) -> Dict[Key, ParamPoly]:
        key = ("T", r, q)
        hit = self._t_memo.get(key)
        if hit is not None:
            return hit
        out: Dict[Key, ParamPoly] = {}
        words = set(itertools.permutations("x" * r + "y" * q))
        weight = Fraction(math.factorial(r) * math.factorial(q), math.factorial(r + q))
        for word in words:
            for k2, c in self.normal_labeled([(l, 0) for l in word], 1).items():
                accumulate(out, k2, c * weight)
        self._t_memo[key] = out
        return out

    def expand_T(self, m: TIndex) -> Dict[Key, ParamPoly]:
        hit = self._t_memo.get(m)
        if hit is not None:
            return hit
        factors = m.factors()
        if not factors:
            out = {(): ONE}
        elif len(factors) == 1:
            out = self.expand_single(*factors[0])
        else:
            out = {}
            for order in set(itertools.permutations(factors)):
                prod = self.expand_single(*order[0])
                for pair in order[1:]:
                    prod = self.multiply(prod, self.expand_single(*pair))
                for key, c in prod.items():
                    accumulate(out, key, c)
            weight = Fraction(1, math.factorial(len(factors)))
            for _, mult in m.items:
                weight *= math.factorial(mult)
            out = {key: c * weight for key, c in out.items()}
        self._t_memo[m] = out
        return out

    def reduce_to_T(self, element: Mapping[Key, ParamPoly]) -> Dict[TIndex, ParamPoly]:
        """T-basis coordinates by peeling top-degree, most-slot keys."""
        remainder = dict(element)
        coords: Dict[TIndex, ParamPoly] = {}
        bound = max((_degree(k) for k in remainder), default=0)
        while remainder:
            rho = max(remainder, key=lambda k: (_degree(k), len(k), k))
            coef = remainder[rho]
            if not rho:
                accumulate(coords, TIndex.unit(), coef)
                del remainder[rho]
                continue
            m = TIndex.of(_count(rho))
            accumulate(coords, m, coef)
            for key, c in self.expand_T(m).items():
                accumulate(remainder, key, -coef * c)
            if rho in remainder:
                raise NonCancellationError(f"top term {rho} did not cancel")
        for m, c in coords.items():
            if c.degree("n") > bound:
                raise NonCancellationError(f"n-degree {c.degree('n')} of coordinate {m} exceeds {bound}")
        return coords

    def structure_constants(self, m1: TIndex, m2: TIndex) -> Dict[TIndex, ParamPoly]:
        key = (m1, m2)
        hit = self._sc_memo.get(key)
        if hit is None:
            hit = self.reduce_to_T(self.multiply(self.expand_T(m1), self.expand_T(m2)))
            self._sc_memo[key] = hit
        return hit

    def from_adm(self, element: AdmSum) -> Dict[Key, ParamPoly]:
        """M-basis normal form of a sum of free-index words (inclusion–exclusion over coincidences)."""
        out: Dict[Key, ParamPoly] = {}
        for word, coef in element.terms.items():
            slots = max((s for _, s in word), default=0)
            for part in set_partitions(range(1, slots + 1)):
                block_of = {s: i for i, block in enumerate(part) for s in block}
                merged = [(l, block_of[s]) for l, s in word]
                for key, c in self.normal_labeled(merged, len(part)).items():
                    accumulate(out, key, self.specialize_poly(coef) * c)
        return out


def _merge_slots(rho: Key, sigma: Key, n_value, one):
    """Commutative product of injective sums: merge slots along every partial injection."""
    s1, s2 = len(rho), len(sigma)
    for matched in range(min(s1, s2) + 1):
        # only slot counts change the factor; the new slots are all distinct from old ones
        for src in itertools.combinations(range(s2), matched):
            for dst in itertools.permutations(range(s1), matched):
                pairs = list(rho)
                for j, i in zip(src, dst):
                    pairs[i] = (pairs[i][0] + sigma[j][0], pairs[i][1] + sigma[j][1])
                pairs.extend(sigma[j] for j in range(s2) if j not in src)
                yield tuple(sorted(pairs)), one


def _degree(key: Key) -> int:
    return sum(a + b for a, b in key)


def _count(pairs: Iterable[Pair]) -> Dict[Pair, int]:
    out: Dict[Pair, int] = {}
    for p in pairs:
        out[p] = out.get(p, 0) + 1
    return out


def injective_to_free(element: Mapping[Key, ParamPoly]) -> AdmSum:
    """Rewrite Σ c·M_ρ as free-index normal words x^A y^B via Möbius inversion."""
    out: Dict[Tuple[Letter, ...], ParamPoly] = {}
    for rho, coef in element.items():
        for part in set_partitions(range(len(rho))):
            merged = sorted(tuple(map(sum, zip(*(rho[i] for i in block)))) for block in part)
            accumulate(out, normal_word(tuple(merged)), coef * _mobius(part))
    return AdmSum._raw(out)


def normal_word(key: Key) -> Tuple[Letter, ...]:
    """x-letters slot by slot, then y-letters slot by slot."""
    xs = tuple(("x", i + 1) for i, (a, _) in enumerate(key) for _ in range(a))
    ys = tuple(("y", i + 1) for i, (_, b) in enumerate(key) for _ in range(b))
    return canonicalize(AdmTerm(1, xs + ys, len(key))).word


# module-level default engine (symbolic n, t, k) -----------------------------------

_ENGINE: Optional[Engine] = None


def default_engine() -> Engine:
    global _ENGINE
    if _ENGINE is None:
        _ENGINE = Engine()
    return _ENGINE


def normal_order(a: AdmSum, engine: Optional[Engine] = None) -> AdmSum:
    """Rewrite every word as x's before y's (the PBW order of x^A y^B)."""
    engine = engine or default_engine()
    return injective_to_free(engine.from_adm(a))


def expand_T(m: TIndex, engine: Optional[Engine] = None, budget: int = DEFAULT_BUDGET) -> AdmSum:
    if m.weight > budget:
        raise BudgetExceededError(f"w(m) = {m.weight} exceeds budget {budget}")
    return injective_to_free((engine or default_engine()).expand_T(m))


class TVector(LinComb):
    """Coordinates in the basis {T(m)} with polynomial coefficients (K absorbed as n)."""

    __slots__ = ("engine",)

    def __init__(self, terms=None, engine: Optional[Engine] = None):
        super().__init__(terms)
        self.engine = engine or default_engine()

    def _like(self, terms):
        obj = TVector.__new__(TVector)
        obj.terms = terms
        obj.engine = self.engine
        return obj

    @staticmethod
    def T(m, coef=1, engine: Optional[Engine] = None) -> "TVector":
        if not isinstance(m, TIndex):
            m = TIndex.of(m)
        return TVector({m: coef}, engine)

    @staticmethod
    def unit(engine: Optional[Engine] = None) -> "TVector":
        return TVector({TIndex.unit(): 1}, engine)

    def _mul_keys(self, a, b, other):
        return structure_constants(a, b, engine=self.engine)

    def _format_key(self, key) -> str:
        return f"T{key}"

    def max_weight(self) -> int:
        return max((m.weight for m in self.terms), default=-1)

    def to_json(self) -> list:
        return [{"m": m.to_json(), "poly": str(c)} for m, c in sorted(self.terms.items(), key=lambda kv: kv[0].items)]


def reduce_to_T(a: AdmSum, engine: Optional[Engine] = None) -> TVector:
    engine = engine or default_engine()
    return TVector(engine.reduce_to_T(engine.from_adm(a)), engine)


# structure constants with an on-disk cache -------------------------------------------

def cache_dir(explicit: Optional[str] = None) -> Optional[str]:
    return explicit or os.environ.get("DDCA_CACHE_DIR") or None


def _cache_path(directory: str, engine: Engine, m1: TIndex, m2: TIndex) -> str:
    tag = json.dumps([m1.to_json(), m2.to_json(), str(engine.t), str(engine.k),
                      None if engine.n is None else str(engine.n)])
    return os.path.join(directory, hashlib.sha256(tag.encode()).hexdigest()[:32] + ".json")


def structure_constants(m1: TIndex, m2: TIndex, engine: Optional[Engine] = None,
                        budget: int = DEFAULT_BUDGET, cache: Optional[str] = None) -> Dict[TIndex, ParamPoly]:
    """Coordinates of T(m1)·T(m2) in the T basis."""
    if m1.weight + m2.weight > budget:
        raise BudgetExceededError(f"w(m1) + w(m2) = {m1.weight + m2.weight} exceeds budget {budget}")
    engine = engine or default_engine()
    directory = cache_dir(cache)
    path = _cache_path(directory, engine, m1, m2) if directory else None
    on_disk = bool(path) and os.path.exists(path)
    coords = engine._sc_memo.get((m1, m2))
    if coords is not None and (on_disk or not path):
        return coords
    if coords is None and on_disk:
        with open(path) as fh:
            data = json.load(fh)
        coords = {TIndex.from_json(item["m"]): parse_poly(item["poly"]) for item in data["coords"]}
        engine._sc_memo[(m1, m2)] = coords
        return coords
    if coords is None:
        coords = engine.structure_constants(m1, m2)
    if path:
        os.makedirs(directory, exist_ok=True)
        # write-then-rename keeps concurrent writers of the same key harmless
        fd, tmp = tempfile.mkstemp(dir=directory, suffix=".tmp")
        with os.fdopen(fd, "w") as fh:
            json.dump(structure_constants_json(m1, m2, coords), fh)
        os.replace(tmp, path)
    return coords


def structure_constants_json(m1: TIndex, m2: TIndex, coords: Mapping[TIndex, ParamPoly]) -> dict:
    return {"m1": m1.to_json(), "m2": m2.to_json(),
            "coords": [{"m": m.to_json(), "poly": str(c)}
                       for m, c in sorted(coords.items(), key=lambda kv: kv[0].items)]}


def specialize(v, n0, t0, k0) -> Dict[TIndex, Fraction]:
    """Coordinate-wise evaluation at (n, t, k) = (n0, t0, k0); zero coordinates dropped."""
    terms = v.terms if isinstance(v, LinComb) else v
    out = {}
    for m, c in terms.items():
        value = c.evaluate({"n": n0, "t": t0, "k": k0})
        if value:
            out[m] = value
    return out


# the presentation images and symbolic verification ------------------------------------

def tvector_model(engine: Optional[Engine] = None) -> Model:
    engine = engine or default_engine()
    return Model("D(t,k) in the T basis", unit=lambda: TVector.unit(engine))


def beta_tvectors(engine: Optional[Engine] = None, three_generators: bool = False) -> Dict[str, TVector]:
    half = Fraction(1, 2)
    T = lambda r, q, c=1: TVector.T({(r, q): 1}, c, engine)  # noqa: E731
    images = {"p": T(0, 1), "f": T(0, 2, half), "r": T(3, 0, Fraction(1, 6))}
    if not three_generators:
        images.update({"K": TVector.unit(engine).scale(N if engine is None or engine.n is None else engine.n),
                       "q": T(1, 0), "e": T(2, 0, -half)})
    return images


def symbolic_s_values(n=None, k=None) -> Dict[str, ParamPoly]:
    n = N if n is None else ParamPoly.coerce(n)
    k = K_PAR if k is None else ParamPoly.coerce(k)
    kk = k * (k + 1)
    return {"s1": 1 + kk * (1 - n), "s2": kk}


def _slot_bound(rel_expr, images) -> int:
    return 2 * sum(1 for _ in _leaves(rel_expr)) + 2


def _leaves(expr):
    from .ncexpr import Gen, Comm, Prod, Lin
    if isinstance(expr, Gen):
        yield expr
    elif isinstance(expr, (Comm, Prod)):
        yield from _leaves(expr.left)
        yield from _leaves(expr.right)
    elif isinstance(expr, Lin):
        for _, sub in expr.terms:
            yield from _leaves(sub)


def _residual(relation, images, model, params):
    from .ncexpr import evaluate, substitute_parameters
    return evaluate(substitute_parameters(relation.expr, params), images, model)


def verify_beta_symbolic(mode: str = "full", three_generators: bool = False,
                         budget: int = DEFAULT_BUDGET, samples: Optional[Sequence[int]] = None) -> VerificationReport:
    """All relations of the deformed type-A presentation on the T-basis images, t = 1."""
    from .freealg import relation_set
    if mode not in ("full", "sample-and-fit"):
        raise ValueError(f"unknown mode {mode!r}")
    report = VerificationReport(f"symbolic relations ({mode})")
    relations = relation_set("a-s1s2", three_generators)
    with timed(report):
        engine = Engine(t=1)
        e, f = beta_tvectors(engine)["e"], beta_tvectors(engine)["f"]
        report.add("[β(e), β(f)] = T(1,1)", (e * f - f * e) == TVector.T({(1, 1): 1}, 1, engine))
        p, T30 = TVector.T({(0, 1): 1}, 1, engine), TVector.T({(3, 0): 1}, 1, engine)
        report.add("[T(0,1), T(3,0)] = 3 T(2,0)", (p * T30 - T30 * p) == TVector.T({(2, 0): 1}, 3, engine))
        use_full = mode == "full"
        for rel in relations:
            certified = None
            if use_full:
                try:
                    images = beta_tvectors(engine, three_generators)
                    res = _residual(rel, images, tvector_model(engine), symbolic_s_values())
                    if res.max_weight() > budget:
                        raise BudgetExceededError("budget")
                    report.add(rel.name, res.is_zero(), "" if res.is_zero() else f"residual {res}", mode="full")
                    continue
                except BudgetExceededError:
                    report.note(f"{rel.name}: budget exceeded, falling back to sample-and-fit")
            certified = _sample_and_fit(rel, three_generators, samples)
            report.add(rel.name, certified[0], certified[1], mode="sample-and-fit")
    return report


def _sample_and_fit(rel, three_generators, samples):
    """Vanishing at enough integer n, certified through per-coefficient interpolation."""
    bound = _slot_bound(rel.expr, None)
    points = list(samples) if samples else list(range(2, bound + 4))
    if len(points) < bound + 1:
        return False, f"need {bound + 1} sample points, got {len(points)}"
    values: Dict[Tuple[TIndex, tuple], Dict[int, Fraction]] = {}
    for n0 in points:
        engine = Engine(t=1, n=n0)
        images = beta_tvectors(engine, three_generators)
        res = _residual(rel, images, tvector_model(engine), symbolic_s_values(n=n0))
        for m, c in res.terms.items():
            for mono, coef in c.terms():
                values.setdefault((m, mono), {})[n0] = coef
    fitted = {}
    for (m, mono), by_n in values.items():
        poly = fit_polynomial([(n0, by_n.get(n0, 0)) for n0 in points], bound, "n")
        if poly:
            fitted[m] = poly
    if not fitted:
        return True, f"vanishes at {len(points)} points, n-degree <= {bound}"
    m, poly = next(iter(fitted.items()))
    return False, f"coordinate {m} fits a nonzero polynomial {poly}"


# elements in the injective basis (used for word-rank tables) -------------------------

class SphericalSum(LinComb):
    """A normal-ordered element Σ c_ρ·M_ρ, multiplied by the engine it carries."""

    __slots__ = ("engine",)

    def __init__(self, terms=None, engine: Optional[Engine] = None):
        super().__init__(terms)
        self.engine = engine or default_engine()

    def _like(self, terms):
        obj = SphericalSum.__new__(SphericalSum)
        obj.terms = terms
        obj.engine = self.engine
        return obj

    def _mul_keys(self, a, b, other):
        return self.engine.mul_keys(a, b)

    def _format_key(self, key) -> str:
        return "M" + "".join(f"({a},{b})" for a, b in key) if key else "e"

    @staticmethod
    def T(m, coef=1, engine: Optional[Engine] = None) -> "SphericalSum":
        engine = engine or default_engine()
        if not isinstance(m, TIndex):
            m = TIndex.of(m)
        return SphericalSum(engine.expand_T(m), engine).scale(coef)

    def to_T(self) -> TVector:
        return TVector(self.engine.reduce_to_T(self.terms), self.engine)


def ddca_word_images(k=Fraction(1, 2), t=1, n=None) -> Tuple[Dict[str, SphericalSum], SphericalSum]:
    """Images of p, f, r in D_{t,k} (n formal unless given) and the unit."""
    engine = Engine(t=t, k=k, n=n)
    half = Fraction(1, 2)
    images = {"p": SphericalSum.T({(0, 1): 1}, 1, engine),
              "f": SphericalSum.T({(0, 2): 1}, half, engine),
              "r": SphericalSum.T({(3, 0): 1}, Fraction(1, 6), engine)}
    return images, SphericalSum({(): 1}, engine)


def ddca_rank_images(k=Fraction(1, 2), t=1, n=None) -> Tuple[Dict[str, SphericalSum], SphericalSum]:
    """Images with the same word-span ranks as ddca_word_images, in integer arithmetic when possible.

    x ↦ αx identifies H_{t,k} with H_{αt,αk}, and rescaling a generator's image by a
    nonzero constant rescales each word's image, so neither changes any rank.  α is
    chosen to clear the denominators of t and k; generator images drop their constants."""
    t, k = Fraction(t), Fraction(k)
    alpha = math.lcm(t.denominator, k.denominator)
    engine = Engine(t=t * alpha, k=k * alpha, n=n)
    images = {"p": SphericalSum.T({(0, 1): 1}, 1, engine),
              "f": SphericalSum.T({(0, 2): 1}, 1, engine),
              "r": SphericalSum.T({(3, 0): 1}, 1, engine)}
    return images, SphericalSum({(): 1}, engine)
