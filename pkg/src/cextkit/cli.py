"""Command line interface.

Every command prints a short human summary, or with ``--json`` a canonical
JSON report.  Exit codes: 0 pass, 1 checked false, 2 parse error, 3 budget
exceeded, 4 precondition violated.
"""
from __future__ import annotations

import functools
import json
import sys
import time
from concurrent.futures import ProcessPoolExecutor
from pathlib import Path

import click

from . import __version__, kernels
from .errors import BudgetExceeded, GroupOrderError, NotAnExtension, PreconditionError
from .formats import (FormatError, canonical_json, diagram_to_dict, group_from_spec,
                      parse_diagram, parse_simplicial, serialize_diagram, serialize_simplicial)

EXIT_PASS, EXIT_FALSE, EXIT_PARSE, EXIT_BUDGET, EXIT_PRECONDITION = 0, 1, 2, 3, 4

DEFAULT_CONFIG = {
    "cap": None,                 # enumeration candidates; None keeps library defaults
    "jobs": 1,
    "corpus": None,
    "classify_max_order": 32,    # |A|·|Z| ceiling for exhaustive classification
    "cohomology_max_base": 6,
    "cohomology_max_coeff": 8,
}

GRID_Z = ["C1", "C2", "C3", "C4", "C2×C2", "C5", "C6", "S3"]
GRID_A = ["C2", "C3", "C4", "C2×C2"]

DATA_DIR = Path(__file__).with_name("data")


class Halt(Exception):
    def __init__(self, code: int, message: str, report: dict | None = None):
        super().__init__(message)
        self.code = code
        self.report = report


# ------------------------------------------------------------------ config

def load_config(path: str | None, overrides: dict) -> dict:
    cfg = dict(DEFAULT_CONFIG)
    if path:
        try:
            data = json.loads(Path(path).read_text(encoding="utf-8"))
        except (OSError, json.JSONDecodeError) as exc:
            raise Halt(EXIT_PARSE, f"config {path}: {exc}")
        unknown = set(data) - set(DEFAULT_CONFIG)
        if unknown:
            raise Halt(EXIT_PARSE, f"config {path}: unknown keys {sorted(unknown)}")
        cfg.update(data)
    cfg.update({k: v for k, v in overrides.items() if v is not None})
    return cfg


def _report_config(cfg: dict) -> dict:
    """The part of the config that can change results (never jobs)."""
    return {k: v for k, v in sorted(cfg.items()) if k not in ("jobs", "corpus")}


def _cmd_name() -> str:
    ctx = click.get_current_context(silent=True)
    return ctx.info_name if ctx is not None else "cextkit"


def common_options(fn):
    @click.option("--jobs", type=click.IntRange(1), default=None, help="Worker processes.")
    @click.option("--cap", type=click.IntRange(1), default=None,
                  help="Ceiling on enumeration candidates.")
    @click.option("--corpus", type=click.Path(file_okay=False), default=None,
                  help="Directory of extra diagram and simplicial files.")
    @click.option("--json", "as_json", is_flag=True, help="Print the JSON report.")
    @click.option("--timing", is_flag=True, help="Include wall-clock timing in the report.")
    @click.option("--config", "config_path", type=click.Path(dir_okay=False), default=None,
                  help="JSON config file; flags take precedence.")
    @functools.wraps(fn)
    def wrapper(jobs, cap, corpus, as_json, timing, config_path, **kwargs):
        try:
            cfg = load_config(config_path, {"jobs": jobs, "cap": cap, "corpus": corpus})
            kernels.set_global_cap(cfg["cap"])
            t0 = time.perf_counter()
            report, lines, code = fn(cfg=cfg, **kwargs)
            if timing:
                report["timing"] = {"seconds": round(time.perf_counter() - t0, 3)}
        except Halt as h:
            code, lines = h.code, [f"error: {h}"]
            report = h.report or {"command": _cmd_name(), "error": str(h)}
            report["exit_code"] = code
        except FormatError as exc:
            code, lines = EXIT_PARSE, [f"parse error: {exc}"]
            report = {"command": _cmd_name(), "error": str(exc), "exit_code": code}
        except (BudgetExceeded, GroupOrderError) as exc:
            code, lines = EXIT_BUDGET, [f"budget exceeded: {exc}"]
            report = {"command": _cmd_name(), "error": str(exc), "exit_code": code}
        except NotAnExtension as exc:
            code, lines = EXIT_PRECONDITION, [f"not an extension: {exc}"]
            report = {"command": _cmd_name(), "error": str(exc),
                      "witness": {"subset": bin(exc.subset) if exc.subset is not None else None,
                                  "missed": list(exc.witness) if exc.witness else None},
                      "exit_code": code}
        except PreconditionError as exc:
            code, lines = EXIT_PRECONDITION, [f"precondition violated: {exc}"]
            report = {"command": _cmd_name(), "error": str(exc), "exit_code": code}
        finally:
            kernels.set_global_cap(None)
        if as_json:
            click.echo(canonical_json(report), nl=False)
        else:
            for ln in lines:
                click.echo(ln, err=code in (EXIT_PARSE, EXIT_BUDGET, EXIT_PRECONDITION))
        sys.exit(code)

    return wrapper


# ----------------------------------------------------------------- helpers

def resolve_path(arg: str) -> Path:
    """A path as given, else a file of that name in the bundled data."""
    p = Path(arg)
    if p.exists():
        return p
    q = DATA_DIR / arg
    if q.exists():
        return q
    raise FormatError(f"no such file: {arg}")


def resolve_group(arg: str):
    p = Path(arg)
    if p.suffix == ".json" or p.exists():
        from .formats import parse_group_file
        return parse_group_file(resolve_path(arg))
    return group_from_spec(arg)


def elem_label(G, g: int) -> str:
    labels = getattr(G, "labels", None)
    return labels[g] if labels is not None else str(g)


def _group_summary(G) -> dict:
    from .corpus import group_name
    return {"order": G.order, "structure": group_name(G)}


# ---------------------------------------------------------------- commands

@click.group()
@click.version_option(__version__, prog_name="cextkit")
def main():
    """Higher central extensions of finite groups: checks, classification, torsors."""


@main.command("cohomology")
@click.argument("Z")
@click.argument("A")
@click.argument("degree", type=int)
@common_options
def cohomology(cfg, z, a, degree):
    """H^DEGREE(Z, A) with trivial action, from the cochain complex."""
    from .classify import cohomology_group
    Z, A = resolve_group(z), resolve_group(a)
    if not A.is_abelian():
        raise PreconditionError(f"coefficient group {a} is not abelian")
    if degree not in (1, 2, 3):
        raise PreconditionError("degree must be 1, 2 or 3")
    H = cohomology_group(Z, A, degree, caps={"max_base": cfg["cohomology_max_base"],
                                            "max_coeff": cfg["cohomology_max_coeff"]})
    report = {"command": "cohomology", "inputs": {"Z": z, "A": a, "degree": degree},
              "config": _report_config(cfg),
              "verdict": {"invariant_factors": list(H.invariant_factors), "order": H.order,
                          "text": str(H)}}
    return report, [str(H)], EXIT_PASS


@main.command("check-central")
@click.argument("diagram")
@common_options
def check_central(cfg, diagram):
    """Decide whether a cubic extension is central."""
    from .centrality import check_product_decomposition, is_H_central
    from .cubes import direction, require_extension
    F = parse_diagram(resolve_path(diagram))
    require_extension(F)
    rep = is_H_central(F)
    X = F.top_object
    report = {"command": "check-central", "inputs": {"diagram": diagram, "degree": F.n},
              "config": _report_config(cfg), "verdict": {"central": rep.central}}
    if not rep.central:
        k, l, c = rep.witness
        I = rep.subset
        report["witnesses"] = {"subset": bin(I), "complement": bin(F.top & ~I),
                               "pair": [elem_label(X, k), elem_label(X, l)],
                               "commutator": elem_label(X, c)}
        line = (f"not central: [{elem_label(X, k)}, {elem_label(X, l)}] = {elem_label(X, c)} "
                f"for the kernel meets over {bin(I)} and {bin(F.top & ~I)}")
        return report, [line], EXIT_FALSE
    A = direction(F)
    report["verdict"]["direction"] = {"order": A.order, "structure": _group_summary(A.group)["structure"]}
    lines = [f"central; direction of order {A.order}"]
    if F.n >= 1:
        try:
            cert = check_product_decomposition(F, 0)
            report["certificate"] = {
                "puncture": bin(0), "ok": cert.ok,
                "checks": {k: bool(v) for k, v in sorted(cert.checks.items())},
                "diamonds": int(cert.box.order) if cert.box is not None else None,
                "punctured": int(cert.punctured.order) if cert.punctured is not None else None}
            if cert.box is not None and cert.punctured is not None:
                lines.append(f"product decomposition at 0b0: |□| = {cert.box.order} = "
                             f"{A.order}·{cert.punctured.order}")
        except BudgetExceeded as exc:
            report["certificate"] = {"skipped": str(exc)}
            lines.append("product decomposition skipped: budget exceeded")
    return report, lines, EXIT_PASS


def _sort_key_rep(cl):
    return (-cl.representative.X.exponent, cl.name)


@main.command("classify")
@click.argument("Z")
@click.argument("A")
@common_options
def classify(cfg, z, a):
    """Classify central extensions of Z by the abelian group A up to equivalence."""
    from .classify import classify_centr1
    Z, A = resolve_group(z), resolve_group(a)
    if not A.is_abelian():
        raise PreconditionError(f"kernel group {a} is not abelian")
    G = classify_centr1(Z, A, cap=cfg["classify_max_order"])
    inv = G.invariants()
    gtxt = " ⊕ ".join(f"Z/{d}" for d in inv) if inv else "0"
    order = sorted(range(G.order), key=lambda i: _sort_key_rep(G.classes[i]))
    names = [G.classes[i].name for i in order]
    noun = "class" if G.order == 1 else "classes"
    line = f"{G.order} {noun}; group {gtxt}; representatives {', '.join(names)}"
    report = {"command": "classify", "inputs": {"Z": z, "A": a}, "config": _report_config(cfg),
              "verdict": {"classes": G.order, "group": list(inv), "text": line,
                          "law_violations": G.law_violations()},
              "classes": [{"name": G.classes[i].name, "order": G.classes[i].representative.X.order,
                           "cocycles": len(G.classes[i].members), "neutral": i == G.neutral}
                          for i in order],
              "baer_table": [[order.index(int(G.table[i, j])) for j in order] for i in order]}
    code = EXIT_PASS if not G.law_violations() else EXIT_FALSE
    return report, [line], code


@main.command("centralise")
@click.argument("diagram")
@click.option("-o", "--output", type=click.Path(dir_okay=False), default=None,
              help="Write the centralised diagram here instead of stdout.")
@common_options
def centralise_cmd(cfg, diagram, output):
    """Divide the top object by the centralisation obstruction."""
    from .cubes import centralisation_obstruction, centralise, require_extension
    F = parse_diagram(resolve_path(diagram))
    require_extension(F)
    L = centralisation_obstruction(F)
    C = centralise(F)
    text = serialize_diagram(C)
    report = {"command": "centralise", "inputs": {"diagram": diagram},
              "config": _report_config(cfg),
              "verdict": {"obstruction_order": L.order, "top_order_before": F.top_object.order,
                          "top_order_after": C.top_object.order},
              "diagram": diagram_to_dict(C)}
    summary = (f"centralised: top object of order {F.top_object.order} -> {C.top_object.order}"
               f" (obstruction of order {L.order})")
    if output:
        Path(output).write_text(text, encoding="utf-8")
        return report, [summary, f"written to {output}"], EXIT_PASS
    return report, [text.rstrip("\n"), summary], EXIT_PASS


@main.command("torsor-check")
@click.argument("simplicial")
@common_options
def torsor_check_cmd(cfg, simplicial):
    """Certify that a truncated simplicial group is a torsor."""
    from .simplicial import torsor_check
    T = parse_simplicial(resolve_path(simplicial))
    cert = torsor_check(T)
    report = {"command": "torsor-check", "inputs": {"file": simplicial, "truncation": T.t},
              "config": _report_config(cfg),
              "verdict": {"torsor": cert.ok, "n": cert.n,
                          "axioms": {k: bool(v) for k, v in sorted(cert.axioms.items())}}}
    if cert.direction is not None:
        report["verdict"]["direction_order"] = int(cert.direction.order)
    failed = [k for k, v in cert.axioms.items() if not v]
    if cert.ok:
        return report, [f"torsor; n = {cert.n}; all axioms hold"], EXIT_PASS
    if cert.witnesses:
        report["witnesses"] = {k: str(v) for k, v in sorted(cert.witnesses.items())}
    return report, [f"not a torsor; failed: {', '.join(failed)}"], EXIT_FALSE


# ------------------------------------------------------------------ verify

def _n1_item(args):
    z, a, max_order, cap = args
    from .classify import verify_main_theorem
    from .corpus import named_group
    kernels.set_global_cap(cap)
    r = verify_main_theorem(named_group(z), named_group(a), cap=max_order)
    return {"suite": "n1", "item": f"{z} {a}", "ok": bool(r.ok), "classes": r.classes,
            "h2": list(r.h2.invariant_factors)}


@functools.lru_cache(maxsize=None)
def _n2_corpus():
    from .corpus import extensions_n1, extensions_n2, torsor_corpus
    return torsor_corpus(), extensions_n1() + extensions_n2(8)


def _torsor_vs_central(T, label):
    from .centrality import is_H_central
    from .simplicial import torsor_check
    cert = torsor_check(T)
    cen = bool(is_H_central(T.underlying_cube()))
    return {"suite": "n2-torsor", "item": label, "ok": cert.ok == cen,
            "torsor": cert.ok, "central": cen}


def _higher_centrality(F, label):
    from .centrality import check_product_decomposition, is_H_central
    cen = bool(is_H_central(F))
    dec = [bool(check_product_decomposition(F, I)) for I in range(F.top + 1)]
    return {"suite": "n2-decomposition", "item": label, "ok": all(d == cen for d in dec),
            "central": cen, "decomposes": dec}


def _n2_item(args):
    kind, idx, cap = args
    kernels.set_global_cap(cap)
    torsors, exts = _n2_corpus()
    if kind == "torsor":
        return _torsor_vs_central(torsors[idx], f"torsor#{idx} {torsors[idx].name}")
    return _higher_centrality(exts[idx], f"ext#{idx} {exts[idx].name}")


def _corpus_items(directory: str | None):
    if not directory:
        return []
    from .formats import parse_any
    from .simplicial import TruncatedSimplicialGroup
    out = []
    for p in sorted(Path(directory).glob("*.json")):
        obj = parse_any(p)
        if isinstance(obj, TruncatedSimplicialGroup):
            out.append(_torsor_vs_central(obj, p.name))
        elif hasattr(obj, "top"):
            if obj.n <= 2:
                out.append(_higher_centrality(obj, p.name))
    return out


def _run(fn, items, jobs):
    if jobs <= 1 or len(items) < 2:
        return [fn(it) for it in items]
    with ProcessPoolExecutor(max_workers=jobs) as ex:
        return list(ex.map(fn, items, chunksize=max(1, len(items) // (4 * jobs))))


@main.command("verify")
@click.argument("suite", type=click.Choice(["n1", "n2", "all"]))
@common_options
def verify(cfg, suite):
    """Run the classification grid (n1) and the torsor and decomposition suites (n2)."""
    results = []
    if suite in ("n1", "all"):
        items = [(z, a, cfg["classify_max_order"], cfg["cap"]) for z in GRID_Z for a in GRID_A]
        results += _run(_n1_item, items, cfg["jobs"])
    if suite in ("n2", "all"):
        torsors, exts = _n2_corpus()
        items = [("torsor", i, cfg["cap"]) for i, T in enumerate(torsors) if T.t <= 1]
        items += [("ext", i, cfg["cap"]) for i in range(len(exts))]
        results += _run(_n2_item, items, cfg["jobs"])
        results += _corpus_items(cfg["corpus"])
    failed = [r for r in results if not r["ok"]]
    by_suite: dict[str, list] = {}
    for r in results:
        by_suite.setdefault(r["suite"], []).append(r["ok"])
    lines = [f"{s}: {sum(v)}/{len(v)} ok" for s, v in by_suite.items()]
    lines += [f"FAIL {r['suite']} {r['item']}" for r in failed]
    report = {"command": "verify", "inputs": {"suite": suite}, "config": _report_config(cfg),
              "verdict": {"ok": not failed,
                          "suites": {s: {"passed": sum(v), "total": len(v)}
                                     for s, v in by_suite.items()}},
              "results": results}
    return report, lines, EXIT_PASS if not failed else EXIT_FALSE


# ------------------------------------------------------------------ corpus

@main.command("export-corpus")
@click.argument("directory", type=click.Path(file_okay=False))
@click.option("--limit", type=int, default=None, help="Files per family.")
def export_corpus(directory, limit):
    """Write the generated diagram and torsor corpora as JSON files."""
    from .corpus import extensions_n1, extensions_n2, torsor_corpus
    out = Path(directory)
    out.mkdir(parents=True, exist_ok=True)
    count = 0
    families = [("ext1", extensions_n1(), serialize_diagram),
                ("ext2", extensions_n2(8), serialize_diagram),
                ("torsor", torsor_corpus(), serialize_simplicial)]
    for tag, objs, ser in families:
        for i, obj in enumerate(objs[:limit] if limit else objs):
            (out / f"{tag}-{i:04d}.json").write_text(ser(obj), encoding="utf-8")
            count += 1
    click.echo(f"wrote {count} files to {out}")


if __name__ == "__main__":  # pragma: no cover
    main()
