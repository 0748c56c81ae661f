"""Composite verification routines that combine several modules."""

from __future__ import annotations

import itertools
from fractions import Fraction
from typing import Iterable, Optional, Sequence, Tuple

from .arith import P, ParamPoly
from .freealg import RankTable, verify_relations_in_model, word_rank_table
from .liealg import (PO_CARRIER, WEYL_LIE_CARRIER, UEnvElement, WeylElement, gl_lambda_images,
                     gl_lambda_model, upo_images, weyl_images, weyl_model)
from .report import VerificationReport, timed


def _comm(a, b):
    return a * b - b * a


def verify_weyl_model() -> VerificationReport:
    """The differential-operator realization: ad_f-string of r, the degree-2 value, all relations."""
    report = VerificationReport("Weyl model", topic="Weyl algebra as a deformation of po")
    with timed(report):
        im = weyl_images()
        f, r = im["f"], im["r"]
        x_d = WeylElement.monomial(1, 1)
        half = Fraction(1, 2)
        ad1 = _comm(f, r)
        ad2 = _comm(f, ad1)
        ad3 = _comm(f, ad2)
        want1 = (WeylElement.monomial(2, 1) + WeylElement.monomial(1, 0)).scale(half)
        want2 = WeylElement.monomial(1, 2) + WeylElement.monomial(0, 1)
        report.add("ad_f(r) = (x^2 d + x)/2", ad1 == want1, str(ad1))
        report.add("ad_f^2(r) = x d^2 + d", ad2 == want2, str(ad2))
        report.add("ad_f^3(r) = d^3", ad3 == WeylElement.monomial(0, 3), str(ad3))
        value = _comm(r, ad3) - _comm(ad1, ad2)
        report.add("[r, ad_f^3 r] - [ad_f r, ad_f^2 r] = -1/2", value == WeylElement.one().scale(-half), str(value))
        report.add("[e, f] = x d + 1/2", _comm(im["e"], f) == x_d + WeylElement.one().scale(half))
        sub = verify_relations_in_model("a-s1s2", {"s1": 1, "s2": 0}, weyl_model(), im)
        report.extend(sub, prefix="relation")
    return report


def verify_gl_lambda(casimir=None) -> VerificationReport:
    """Type-B relations in U(sl2) modulo the Casimir (lam^2 - 1)/2 with s = (lam^2-4, lam^2-9, 0)."""
    report = VerificationReport("gl(lambda) model", topic="Feigin's gl(lambda) as a type-B quotient")
    lam = P("lam")
    with timed(report):
        params = {"s1": lam * lam - 4, "s2": lam * lam - 9, "s3": 0}
        sub = verify_relations_in_model("a-typeB", params, gl_lambda_model(casimir), gl_lambda_images(casimir))
        report.extend(sub, prefix="relation")
        for name, value in params.items():
            report.note(f"{name} = {value}")
    return report


def oracle_equivalence(max_weight: int = 6, ranks: Sequence[int] = (2, 3, 4),
                       ks: Sequence = (0, Fraction(1, 2), 1), engine=None) -> VerificationReport:
    """Symbolic structure constants against explicit finite-rank products.

    For each index pair with total weight <= max_weight, the product T(m1) T(m2)
    built at rank n is compared with the specialized symbolic expansion
    recomposed in the same finite-rank algebra. Comparing elements rather than
    coordinates keeps the check meaningful when the weight exceeds the rank."""
    from .admissible import default_engine, specialize, structure_constants
    from .cherednik import CherAlgebra, build_Tm, indices_of_weight, recompose

    report = VerificationReport("structure constants vs finite rank", topic="symbolic calculus vs finite rank")
    engine = engine or default_engine()
    with timed(report):
        pairs = [(m1, m2) for w1 in range(1, max_weight) for w2 in range(1, max_weight - w1 + 1)
                 for m1 in indices_of_weight(w1) for m2 in indices_of_weight(w2)]
        symbolic = {(m1, m2): structure_constants(m1, m2, engine) for m1, m2 in pairs}
        for n0, k0 in itertools.product(ranks, ks):
            algebra = CherAlgebra(n0, "A", t=1, k=k0)
            bad = []
            for m1, m2 in pairs:
                direct = build_Tm(algebra, m1) * build_Tm(algebra, m2)
                via = recompose(algebra, specialize(symbolic[m1, m2], n0, 1, k0))
                if direct != via:
                    bad.append(f"{m1}*{m2}")
            report.add(f"n = {n0}, k = {k0}: {len(pairs)} products agree", not bad,
                       f"mismatches: {', '.join(bad[:5])}" if bad else "")
    return report


def _broken_weyl_lie_images():
    images = dict(upo_images(WEYL_LIE_CARRIER))
    gen = lambda a, b, c: UEnvElement.generator(WEYL_LIE_CARRIER, (a, b), c)  # noqa: E731
    images["r"] = gen(3, 0, Fraction(1, 6)) + gen(2, 0, 1)
    return images


FLATNESS_MODELS = ("upo", "weyl", "ddca", "broken")


def flatness_table(L: int = 8, models: Iterable[str] = FLATNESS_MODELS, n=3, k=Fraction(1, 2),
                   control_by: int = 4) -> Tuple[RankTable, VerificationReport]:
    """Word-filtration rank columns on p, f, r for the reference and its candidate deformations.

    "upo" is U(po), "weyl" is U of the Weyl algebra with its commutator bracket,
    "ddca" the spherical calculus at (n, k) with t = 1, and "broken" the Weyl
    images with r replaced by a non-homogeneous element."""
    from .admissible import ddca_rank_images

    models = list(models)
    assignments = []
    for name in models:
        if name == "upo":
            assignments.append((name, upo_images(PO_CARRIER), UEnvElement.one(PO_CARRIER)))
        elif name == "weyl":
            assignments.append((name, upo_images(WEYL_LIE_CARRIER), UEnvElement.one(WEYL_LIE_CARRIER)))
        elif name == "ddca":
            images, one = ddca_rank_images(k=k, n=n)
            assignments.append((name, images, one))
        elif name == "broken":
            assignments.append((name, _broken_weyl_lie_images(), UEnvElement.one(WEYL_LIE_CARRIER)))
        else:
            raise ValueError(f"unknown model {name!r}; expected one of {FLATNESS_MODELS}")
    report = VerificationReport(f"word-filtration ranks up to length {L}", topic="flatness via word ranks")
    report.params.update({"max_length": L, "n": str(n), "k": str(k), "models": ",".join(models)})
    with timed(report):
        table = word_rank_table(assignments, L)
        if "upo" in table.columns:
            for name in models:
                if name in ("upo", "broken"):
                    continue
                diff = table.first_difference("upo", name)
                report.add(f"{name} column equals the U(po) column", diff is None,
                           f"{name} {table.columns[name]} vs upo {table.columns['upo']}"
                           + (f"; first difference at length {diff}" if diff else ""))
            if "broken" in table.columns:
                diff = table.first_difference("upo", "broken")
                report.add(f"broken control diverges by length {control_by}",
                           diff is not None and diff <= control_by,
                           f"first difference at length {diff}")
    return table, report


def parse_rational(text: Optional[str]):
    """"symbolic" or None -> None, otherwise an exact rational (int when integral)."""
    if text is None or text == "symbolic":
        return None
    value = Fraction(text)
    return int(value) if value.denominator == 1 else value


def as_param(value, name: str):
    return P(name) if value is None else ParamPoly.coerce(value)
