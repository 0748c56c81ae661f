"""Command-line driver for the verification suites."""

from __future__ import annotations

import os
import re
import sys
from concurrent.futures import ProcessPoolExecutor
from dataclasses import dataclass, field
from typing import Callable, Dict, List, Optional

import click

from .report import TOOL_VERSION, VerificationReport, timed
from .suites import parse_rational

SUITES = ("po-presentation", "appendix-b", "typeA-beta-finite", "typeA-beta-symbolic", "typeB-beta",
          "weyl-model", "gl-lambda", "galois", "deligne", "rank-table", "structure-constants",
          "oracle-equivalence")

# rank-table and oracle-equivalence are the slow ones; they still belong to --all
ALL_SUITES = SUITES

_TINDEX_PART = re.compile(r"\(\s*(\d+)\s*,\s*(\d+)\s*\)(?:\s*\^\s*(\d+))?")


class ConfigError(click.UsageError):
    pass


@dataclass
class SuiteConfig:
    suite: str
    max_degree: Optional[int] = None
    max_length: Optional[int] = None
    rank: Optional[int] = None
    k: Optional[str] = None
    lam: Optional[str] = None
    mode: str = "full"
    seed: int = 0
    threads: int = 1
    budget: int = 16
    cache_dir: Optional[str] = None
    models: List[str] = field(default_factory=list)

    def validate(self) -> "SuiteConfig":
        if self.suite not in SUITES:
            raise ConfigError(f"unknown suite {self.suite!r}; choose from {', '.join(SUITES)}")
        for name in ("max_degree", "max_length", "rank", "threads", "budget"):
            value = getattr(self, name)
            if value is not None and value <= 0:
                raise ConfigError(f"{name.replace('_', '-')} must be positive")
        for name in ("k", "lam"):
            try:
                parse_rational(getattr(self, name))
            except (ValueError, ZeroDivisionError):
                raise ConfigError(f"{name} must be an exact rational or 'symbolic', got {getattr(self, name)!r}")
        if self.mode not in ("full", "sample-and-fit"):
            raise ConfigError(f"unknown mode {self.mode!r}")
        return self

    def params(self) -> Dict[str, str]:
        out = {"seed": str(self.seed), "t": "1"}
        for name in ("max_degree", "max_length", "rank", "k", "lam"):
            value = getattr(self, name)
            if value is not None:
                out[name] = str(value)
        if self.suite == "typeA-beta-symbolic":
            out["mode"] = self.mode
        return out


def parse_tindex(spec: str):
    """Comma-separated "(r,q)^mult" items, e.g. "(1,0)^2,(0,1)"."""
    from .cherednik import CherednikError, TIndex
    text = spec.strip()
    if text in ("", "{}", "1"):
        return TIndex.unit()
    counts: Dict = {}
    pos = 0
    while pos < len(text):
        match = _TINDEX_PART.match(text, pos)
        if not match:
            raise ConfigError(f"cannot parse T index {spec!r} at position {pos}")
        r, q, mult = int(match.group(1)), int(match.group(2)), int(match.group(3) or 1)
        counts[(r, q)] = counts.get((r, q), 0) + mult
        pos = match.end()
        while pos < len(text) and text[pos] in ", ":
            pos += 1
    try:
        return TIndex.of(counts)
    except CherednikError as exc:
        raise ConfigError(str(exc))


def _ranks(cfg: SuiteConfig, default):
    return [cfg.rank] if cfg.rank else list(default)


def _suite_po_presentation(cfg):
    from .freealg import verify_presentations
    D = cfg.max_degree or 8
    return verify_presentations(max_a=D, max_b=min(D, 5))


def _suite_appendix_b(cfg):
    from .freealg import appendixB_verify
    return appendixB_verify()


def _suite_typeA_finite(cfg):
    from .cherednik import verify_beta_finite
    report = VerificationReport("type A relations at finite rank", topic="type A main theorem at finite rank")
    with timed(report):
        for n in _ranks(cfg, (2, 3, 4)):
            report.extend(verify_beta_finite("A", n, parse_rational(cfg.k)), prefix=f"n = {n}")
    return report


def _suite_typeA_symbolic(cfg):
    from .admissible import verify_beta_symbolic
    return verify_beta_symbolic(cfg.mode, budget=cfg.budget)


def _suite_typeB(cfg):
    from .cherednik import verify_beta_finite
    from .galois import verify_typeB_param_identities
    report = VerificationReport("type B relations at finite rank", topic="type B presentation at finite rank")
    with timed(report):
        for n in _ranks(cfg, (2, 3)):
            report.extend(verify_beta_finite("B", n, parse_rational(cfg.k), parse_rational(cfg.lam)),
                          prefix=f"n = {n}")
        ids = verify_typeB_param_identities()
        report.add("s1 - s2 = 5(s3 + 1) symbolically",
                   all(c.passed for c in ids.checks if c.name.startswith("s1 - s2 = 5(s3")))
    return report


def _suite_weyl(cfg):
    from .suites import verify_weyl_model
    return verify_weyl_model()


def _suite_gl(cfg):
    from .suites import verify_gl_lambda
    return verify_gl_lambda()


def _suite_galois(cfg):
    from .galois import run_all
    return run_all()


def _suite_deligne(cfg):
    from .deligne import run_all
    return run_all(cfg.max_degree or 4)


def _suite_rank_table(cfg):
    from .suites import FLATNESS_MODELS, flatness_table
    k = parse_rational(cfg.k)
    table, report = flatness_table(cfg.max_length or 8, cfg.models or FLATNESS_MODELS,
                                   n=cfg.rank or 3, k=k if k is not None else parse_rational("1/2"))
    for name, column in table.columns.items():
        report.note(f"{name}: {column}")
    return report


def _suite_structure_constants(cfg):
    from .admissible import N, T_PAR, TVector, default_engine, structure_constants
    from .cherednik import TIndex
    report = VerificationReport("symbolic structure constants", topic="symbolic calculus in n")
    engine = default_engine()
    T = TIndex.of
    with timed(report):
        sc = structure_constants(T({(1, 0): 1}), T({(1, 0): 1}), engine)
        report.add("T(1,0) T(1,0) = T({(1,0)^2})", sc == {T({(1, 0): 2}): 1},
                   ", ".join(f"{m}: {c}" for m, c in sc.items()))
        comm = TVector.T({(0, 1): 1}, 1, engine) * TVector.T({(1, 0): 1}, 1, engine) \
            - TVector.T({(1, 0): 1}, 1, engine) * TVector.T({(0, 1): 1}, 1, engine)
        report.add("[T(0,1), T(1,0)] = n t", comm == TVector.unit(engine).scale(N * T_PAR), str(comm))
        bound = cfg.max_degree or 4
        pairs = [(r, d - r) for d in range(1, bound + 1) for r in range(d + 1)]
        bad = []
        for a in pairs:
            for b in pairs:
                m1, m2 = T({a: 1}), T({b: 1})
                c12 = structure_constants(m1, m2, engine)
                c21 = structure_constants(m2, m1, engine)
                diff = {m: c12.get(m, 0) - c21.get(m, 0) for m in set(c12) | set(c21)}
                diff = {m: c for m, c in diff.items() if c}
                top = sum(a) + sum(b) - 2
                coef = a[1] * b[0] - b[1] * a[0]
                merged = (a[0] + b[0] - 1, a[1] + b[1] - 1)
                if not coef:
                    want = {}
                elif merged == (0, 0):
                    want = {TIndex.unit(): T_PAR * N * coef}
                else:
                    want = {T({merged: 1}): T_PAR * coef}
                if any(m.weight > top for m in diff) or {m: c for m, c in diff.items() if m.weight == top} != want:
                    bad.append(f"{a},{b}")
        report.add(f"leading term of [T(a), T(b)] is (q1 r2 - q2 r1) T(a+b-(1,1)) for r+q <= {bound}",
                   not bad, f"failures: {bad[:5]}" if bad else f"{len(pairs) ** 2} pairs")
    return report


def _suite_oracle(cfg):
    from .suites import oracle_equivalence
    ks = [parse_rational(cfg.k)] if cfg.k not in (None, "symbolic") else None
    kwargs = {"max_weight": cfg.max_degree or 6}
    if cfg.rank:
        kwargs["ranks"] = [cfg.rank]
    if ks:
        kwargs["ks"] = ks
    return oracle_equivalence(**kwargs)


RUNNERS: Dict[str, Callable[[SuiteConfig], VerificationReport]] = {
    "po-presentation": _suite_po_presentation,
    "appendix-b": _suite_appendix_b,
    "typeA-beta-finite": _suite_typeA_finite,
    "typeA-beta-symbolic": _suite_typeA_symbolic,
    "typeB-beta": _suite_typeB,
    "weyl-model": _suite_weyl,
    "gl-lambda": _suite_gl,
    "galois": _suite_galois,
    "deligne": _suite_deligne,
    "rank-table": _suite_rank_table,
    "structure-constants": _suite_structure_constants,
    "oracle-equivalence": _suite_oracle,
}


def _resource_errors():
    from .admissible import BudgetExceededError as AdmBudget
    from .cherednik import BudgetExceededError as CherBudget, DegreeExceedsRankError
    from .freealg import ResourceLimitError
    return (AdmBudget, CherBudget, DegreeExceedsRankError, ResourceLimitError, MemoryError)


def run_suite(cfg: SuiteConfig) -> VerificationReport:
    cfg.validate()
    if cfg.cache_dir:
        os.environ["DDCA_CACHE_DIR"] = cfg.cache_dir
    try:
        report = RUNNERS[cfg.suite](cfg)
    except _resource_errors() as exc:
        report = VerificationReport(cfg.suite)
        report.skip(cfg.suite, f"resource limit: {exc}")
    report.title = cfg.suite
    if not report.topic:
        report.topic = report.checks[0].topic if report.checks and report.checks[0].topic else cfg.suite
    report.params.update(cfg.params())
    return report


def merge_reports(title: str, reports: List[VerificationReport]) -> VerificationReport:
    merged = VerificationReport(title, topic="all suites")
    for rep in reports:
        merged.extend(rep, prefix=rep.title)
        merged.seconds += rep.seconds
    return merged


def render(report: VerificationReport, fmt: str) -> str:
    if fmt == "json":
        return report.to_json() + "\n"
    if fmt == "csv":
        return report.to_csv()
    return report.to_text() + "\n"


def _write(text: str, out: Optional[str]) -> None:
    if out:
        with open(out, "w", encoding="utf-8") as fh:
            fh.write(text)
    else:
        click.echo(text, nl=False)


def _exit_code(report: VerificationReport, strict: bool) -> int:
    ok = report.strict_passed() if strict else report.passed
    return 0 if ok else 1


@click.group()
@click.version_option(TOOL_VERSION)
@click.option("--seed", type=int, default=0, show_default=True, help="Seed recorded in every report.")
@click.option("--threads", type=int, default=1, show_default=True, help="Worker processes for report --all.")
@click.option("--format", "fmt", type=click.Choice(["json", "csv", "text"]), default="text", show_default=True)
@click.option("--cache-dir", type=click.Path(file_okay=False), default=None,
              help="Structure-constant cache (default: $DDCA_CACHE_DIR, else none).")
@click.option("--strict", is_flag=True, help="Treat skipped checks as failures.")
@click.pass_context
def main(ctx, seed, threads, fmt, cache_dir, strict):
    """Exact verification suites for deformed double current algebras."""
    if threads <= 0:
        raise ConfigError("threads must be positive")
    ctx.obj = {"seed": seed, "threads": threads, "fmt": fmt, "strict": strict,
               "cache_dir": cache_dir or os.environ.get("DDCA_CACHE_DIR")}


@main.command()
@click.option("--suite", required=True, type=click.Choice(SUITES))
@click.option("--max-degree", type=int, default=None)
@click.option("--max-length", type=int, default=None)
@click.option("--rank", type=int, default=None)
@click.option("--k", "k", default=None, help="Exact rational or 'symbolic'.")
@click.option("--lambda", "lam", default=None, help="Exact rational or 'symbolic'.")
@click.option("--mode", type=click.Choice(["full", "sample-and-fit"]), default="full", show_default=True)
@click.option("--out", type=click.Path(dir_okay=False), default=None)
@click.pass_obj
def verify(obj, suite, max_degree, max_length, rank, k, lam, mode, out):
    """Run one suite and print its report."""
    cfg = SuiteConfig(suite, max_degree, max_length, rank, k, lam, mode, obj["seed"], obj["threads"],
                      cache_dir=obj["cache_dir"])
    report = run_suite(cfg)
    _write(render(report, obj["fmt"]), out)
    sys.exit(_exit_code(report, obj["strict"]))


@main.command("structure-constants")
@click.option("--m1", required=True, help='T index, e.g. "(1,0)^2,(0,1)".')
@click.option("--m2", required=True)
@click.option("--out", type=click.Path(dir_okay=False), default=None)
@click.option("--budget", type=int, default=16, show_default=True)
@click.pass_obj
def structure_constants_cmd(obj, m1, m2, out, budget):
    """Coordinates of T(m1) T(m2) in the T basis, polynomial in n, t, k."""
    import json
    from .admissible import BudgetExceededError, structure_constants, structure_constants_json
    a, b = parse_tindex(m1), parse_tindex(m2)
    try:
        coords = structure_constants(a, b, budget=budget, cache=obj["cache_dir"])
    except BudgetExceededError as exc:
        raise click.ClickException(str(exc))
    data = structure_constants_json(a, b, coords)
    if obj["fmt"] == "csv":
        lines = ["m,poly"] + [f"\"{c['m']}\",\"{c['poly']}\"" for c in data["coords"]]
        text = "\n".join(lines) + "\n"
    elif obj["fmt"] == "text":
        text = "".join(f"{c['m']}: {c['poly']}\n" for c in data["coords"])
    else:
        text = json.dumps(data, indent=2, sort_keys=True) + "\n"
    _write(text, out)


@main.command("rank-table")
@click.option("--presentation", default="a-s1s2", show_default=True,
              type=click.Choice(["a-s1s2", "po"]), help="Type-A generators p, f, r.")
@click.option("--models", default=",".join(("upo", "weyl", "ddca", "broken")), show_default=True)
@click.option("--max-length", type=int, default=8, show_default=True)
@click.option("--rank", type=int, default=3, show_default=True)
@click.option("--k", "k", default="1/2", show_default=True)
@click.option("--out", type=click.Path(dir_okay=False), default=None)
@click.pass_obj
def rank_table(obj, presentation, models, max_length, rank, k, out):
    """Word-filtration rank columns on p, f, r."""
    import json
    from .suites import FLATNESS_MODELS, flatness_table
    names = [m.strip() for m in models.split(",") if m.strip()]
    unknown = [m for m in names if m not in FLATNESS_MODELS]
    if unknown or max_length <= 0:
        raise ConfigError(f"models must come from {FLATNESS_MODELS} and max-length must be positive")
    value = parse_rational(k)
    # reference column last in the csv header
    ordered = [m for m in names if m != "upo"] + (["upo"] if "upo" in names else [])
    table, report = flatness_table(max_length, ordered, n=rank, k=value)
    if obj["fmt"] == "csv":
        text = table.to_csv()
    elif obj["fmt"] == "json":
        text = json.dumps({"lengths": table.lengths, "columns": table.columns,
                           "report": report.to_dict()}, indent=2, sort_keys=True) + "\n"
    else:
        text = table.to_csv().replace(",", "\t") + render(report, "text")
    _write(text, out)
    sys.exit(_exit_code(report, obj["strict"]) if report.checks else 0)


def _run_named(args):
    name, seed, cache = args
    return run_suite(SuiteConfig(name, seed=seed, cache_dir=cache))


@main.command()
@click.option("--all", "run_all", is_flag=True, required=True, help="Run every suite.")
@click.option("--out", type=click.Path(dir_okay=False), default=None)
@click.option("--skip", multiple=True, type=click.Choice(SUITES), help="Leave a suite out.")
@click.pass_obj
def report(obj, run_all, out, skip):
    """Run every suite and write one merged report."""
    names = [s for s in ALL_SUITES if s not in skip]
    jobs = [(n, obj["seed"], obj["cache_dir"]) for n in names]
    if obj["threads"] > 1:
        with ProcessPoolExecutor(max_workers=obj["threads"]) as pool:
            reports = list(pool.map(_run_named, jobs))
    else:
        reports = [_run_named(j) for j in jobs]
    merged = merge_reports("all", reports)
    merged.params.update({"seed": str(obj["seed"]), "suites": ",".join(names)})
    _write(render(merged, obj["fmt"]), out)
    sys.exit(_exit_code(merged, obj["strict"]))


if __name__ == "__main__":
    main()
