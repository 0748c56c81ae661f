"""Young diagram contents, the partition algebra, and the Ω-eigenvalue interpolation in ν."""

from __future__ import annotations

import itertools
from dataclasses import dataclass
from typing import Dict, Iterable, List, Sequence, Tuple

from .arith import P, ParamPoly, fit_polynomial
from .combination import LinComb
from .report import VerificationReport, timed

NU = P("nu")


class InvalidRankError(ValueError):
    pass


class SizeMismatchError(ValueError):
    pass


# Young diagrams ---------------------------------------------------------------------

@dataclass(frozen=True)
class YoungDiagram:
    rows: Tuple[int, ...] = ()

    def __post_init__(self):
        rows = tuple(int(r) for r in self.rows)
        if any(r <= 0 for r in rows) or any(a < b for a, b in zip(rows, rows[1:])):
            raise ValueError(f"not a Young diagram: {rows}")
        object.__setattr__(self, "rows", rows)

    @property
    def size(self) -> int:
        return sum(self.rows)

    @property
    def length(self) -> int:
        return len(self.rows)

    def boxes(self) -> Iterable[Tuple[int, int]]:
        for i, r in enumerate(self.rows, start=1):
            for j in range(1, r + 1):
                yield i, j

    def __str__(self) -> str:
        return "(" + ",".join(map(str, self.rows)) + ")" if self.rows else "∅"


def content(lam: YoungDiagram) -> int:
    return sum(j - i for i, j in lam.boxes())


def pad(lam: YoungDiagram, n: int) -> YoungDiagram:
    """λ|_n = (n - |λ|, λ_1, λ_2, ...), defined for n ≥ λ_1 + |λ|."""
    first = lam.rows[0] if lam.rows else 0
    if n < first + lam.size:
        raise InvalidRankError(f"n = {n} < λ_1 + |λ| = {first + lam.size}")
    return YoungDiagram(((n - lam.size),) + lam.rows if n > lam.size else lam.rows)


def omega_interpolated(lam: YoungDiagram, nu=None) -> ParamPoly:
    nu = NU if nu is None else ParamPoly.coerce(nu)
    s = lam.size
    return (content(lam) - s) + (nu - s) * (nu - s - 1) / 2


def partitions_of(size: int) -> List[YoungDiagram]:
    out: List[YoungDiagram] = []

    def rec(remaining, cap, acc):
        if remaining == 0:
            out.append(YoungDiagram(tuple(acc)))
            return
        for r in range(min(remaining, cap), 0, -1):
            rec(remaining - r, r, acc + [r])

    rec(size, size, [])
    return out


def interpolation_consistency(lam: YoungDiagram, samples: Sequence[int]) -> VerificationReport:
    """Fit a quadratic through (n, ct(λ|_n)) and compare with the closed form in ν."""
    report = VerificationReport(f"Ω interpolation for λ = {lam}")
    with timed(report):
        valid = [n for n in samples if n >= (lam.rows[0] if lam.rows else 0) + lam.size]
        if len(valid) < 3:
            raise InvalidRankError("need at least 3 valid sample ranks")
        points = [(n, content(pad(lam, n))) for n in valid]
        fitted = fit_polynomial(points, 2, "nu")
        expected = omega_interpolated(lam)
        report.add("fitted polynomial equals the closed form", fitted == expected,
                   f"fit {fitted}, closed form {expected}")
    return report


# partition diagrams ----------------------------------------------------------------------

Block = Tuple[int, ...]


@dataclass(frozen=True)
class PartitionDiagram:
    """A set partition of n top points (1..n) and m bottom points (n+1..n+m)."""

    n: int
    m: int
    blocks: Tuple[Block, ...]

    def __post_init__(self):
        blocks = tuple(sorted(tuple(sorted(b)) for b in self.blocks if b))
        points = sorted(p for b in blocks for p in b)
        if points != list(range(1, self.n + self.m + 1)):
            raise ValueError(f"blocks do not partition 1..{self.n + self.m}: {blocks}")
        object.__setattr__(self, "blocks", blocks)

    @staticmethod
    def identity(n: int) -> "PartitionDiagram":
        return PartitionDiagram(n, n, tuple((i, n + i) for i in range(1, n + 1)))

    @staticmethod
    def singletons(n: int, m: int) -> "PartitionDiagram":
        return PartitionDiagram(n, m, tuple((i,) for i in range(1, n + m + 1)))

    def __str__(self) -> str:
        def name(p):
            return str(p) if p <= self.n else f"{p - self.n}'"
        return "{" + ", ".join("{" + ",".join(name(p) for p in b) + "}" for b in self.blocks) + "}"


def all_diagrams(n: int, m: int) -> List[PartitionDiagram]:
    return [PartitionDiagram(n, m, tuple(tuple(b) for b in part))
            for part in _set_partitions(list(range(1, n + m + 1)))]


def _set_partitions(items: List[int]):
    if not items:
        yield []
        return
    first, rest = items[0], items[1:]
    for part in _set_partitions(rest):
        yield [[first]] + part
        for i in range(len(part)):
            yield part[:i] + [[first] + part[i]] + part[i + 1:]


def bell_number(k: int) -> int:
    """Bell numbers through the Bell triangle."""
    row = [1]
    for _ in range(k):
        nxt = [row[-1]]
        for v in row:
            nxt.append(nxt[-1] + v)
        row = nxt
    return row[0]


def compose_diagrams(mu: PartitionDiagram, lam: PartitionDiagram, nu=None) -> "PartitionElement":
    """φ_ν(μ, λ) = ν^{l(μ,λ)} μ·λ for λ ∈ P(n, m), μ ∈ P(m, k)."""
    if mu.n != lam.m:
        raise SizeMismatchError(f"cannot stack P({mu.n},{mu.m}) on P({lam.n},{lam.m})")
    nu = NU if nu is None else ParamPoly.coerce(nu)
    n, m, k = lam.n, lam.m, mu.m
    # global labels: rows n, m, k in that order
    parent = list(range(n + m + k + 1))

    def find(x):
        while parent[x] != x:
            parent[x] = parent[parent[x]]
            x = parent[x]
        return x

    def union(a, b):
        parent[find(a)] = find(b)

    for block in lam.blocks:
        for p in block[1:]:
            union(block[0], p)
    for block in mu.blocks:
        glob = [p + n for p in block]  # μ's row m lands on the middle row
        for p in glob[1:]:
            union(glob[0], p)
    components: Dict[int, List[int]] = {}
    for p in range(1, n + m + k + 1):
        components.setdefault(find(p), []).append(p)
    middle = range(n + 1, n + m + 1)
    loops = 0
    blocks = []
    for comp in components.values():
        outer = [p if p <= n else p - m for p in comp if p not in middle]
        if outer:
            blocks.append(tuple(outer))
        else:
            loops += 1
    return PartitionElement({PartitionDiagram(n, k, tuple(blocks)): nu ** loops})


class PartitionElement(LinComb):
    """A ℚ[ν]-combination of partition diagrams; x*y means x stacked on top of y."""

    def _mul_keys(self, a, b, other):
        return compose_diagrams(a, b).terms

    def _format_key(self, key) -> str:
        return str(key)


def verify_associativity(n: int = 2) -> VerificationReport:
    report = VerificationReport(f"partition algebra associativity, P({n},{n})")
    with timed(report):
        diagrams = [PartitionElement({d: 1}) for d in all_diagrams(n, n)]
        bad = 0
        for a, b, c in itertools.product(diagrams, repeat=3):
            if (a * b) * c != a * (b * c):
                bad += 1
        report.add(f"(ab)c = a(bc) on all {len(diagrams) ** 3} triples", bad == 0, f"{bad} failures")
    return report


def verify_bell_counts(max_total: int = 6) -> VerificationReport:
    report = VerificationReport("partition diagram counts")
    with timed(report):
        for total in range(max_total + 1):
            for n in range(total + 1):
                count = len(all_diagrams(n, total - n))
                report.add(f"|P({n},{total - n})| = Bell({total})", count == bell_number(total), str(count))
    return report


def verify_padding_identity(max_size: int = 6, max_n: int = 20) -> VerificationReport:
    report = VerificationReport("content of padded diagrams")
    with timed(report):
        bad = []
        for size in range(max_size + 1):
            for lam in partitions_of(size):
                first = lam.rows[0] if lam.rows else 0
                for n in range(first + size, max_n + 1):
                    if content(pad(lam, n)) != omega_interpolated(lam, n).constant_value():
                        bad.append((str(lam), n))
        report.add("ct(λ|_n) = ct(λ) - |λ| + (n-|λ|)(n-|λ|-1)/2", not bad, f"failures: {bad[:5]}" if bad else "")
    return report


def run_all(max_size: int = 4) -> VerificationReport:
    report = VerificationReport("Deligne category combinatorics")
    with timed(report):
        for size in range(max_size + 1):
            for lam in partitions_of(size):
                first = lam.rows[0] if lam.rows else 0
                start = first + size
                report.extend(interpolation_consistency(lam, list(range(start, start + 4))), prefix=f"λ = {lam}")
        for sub in (verify_padding_identity(), verify_bell_counts(), verify_associativity(2)):
            report.extend(sub, prefix=sub.title)
    return report
