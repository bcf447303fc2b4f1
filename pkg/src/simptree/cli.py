"""Command line: analyze a complex or rooted tree, run verification suites,
scan the power-regularity bound.

Exit codes: 0 when every check passes, 1 when a check fails, 2 on parse or
resource errors.
"""

from __future__ import annotations

import argparse
import json
import sys
from math import ceil
from pathlib import Path
from typing import Optional

from . import __version__
from .errors import PreconditionError, ResourceError, SimptreeError, StructuralError
from .homology import DEFAULT_MAX_LATTICE, BettiTable, FieldSpec, OracleCaps, graded_betti, set_default_caps
from .monomial import DEFAULT_MAX_GENERATORS, ideal_power
from .powers import power_reg_broom, power_reg_perfect_top
from .rooted import (
    RootedTree,
    alpha_bound,
    classify,
    clean_form,
    is_perfect,
    reg_broom,
    reg_formula_perfect,
    reg_recursive,
    reg_upper_bound_general,
    t_paths,
    t_path_ideal,
    tree_stats,
)
from .simplicial import SimplicialComplex
from .suites import SUITES, RunConfig, SuiteResult, _run_one, run_parts

EXIT_OK, EXIT_FAIL, EXIT_ERROR = 0, 1, 2
ORACLE_VERTEX_CAP = 40
TSV_WIDTH = 100


def _config(args) -> RunConfig:
    return RunConfig(
        t=args.t,
        s=args.s,
        characteristic=args.char,
        seed=args.seed,
        jobs=args.jobs,
        max_facets=args.max_facets,
        max_gens=args.max_gens,
        max_lattice=args.max_lattice,
        count=getattr(args, "count", None),
        mode=getattr(args, "mode", "tree"),
    )


def _meta(config: RunConfig) -> dict:
    return {
        "version": __version__,
        "characteristic": config.characteristic,
        "seed": config.seed,
        "caps": {"max_gens": config.max_gens, "max_lattice": config.max_lattice,
                 "max_facets": config.max_facets},
    }


def _read(path: str) -> str:
    try:
        return Path(path).read_text()
    except OSError as e:
        raise StructuralError(f"cannot read {path}: {e.strerror}") from e


def _short(x) -> str:
    s = x if isinstance(x, str) else json.dumps(x, sort_keys=True, separators=(",", ":"))
    return s if len(s) <= TSV_WIDTH else s[: TSV_WIDTH - 3] + "..."


def _emit(report: dict, tsv: str, args):
    if args.format == "json":
        text = json.dumps(report, sort_keys=True, indent=1) + "\n"
    else:
        text = tsv
    if args.out:
        Path(args.out).write_text(text)
    else:
        sys.stdout.write(text)


def _kv_tsv(meta: dict, rows: list[tuple]) -> str:
    lines = [f"# {k}\t{_short(v)}" for k, v in sorted(meta.items())]
    lines += [f"{k}\t{_short(v)}" for k, v in rows]
    return "\n".join(lines) + "\n"


# --------------------------------------------------------------------------
# analyze-complex


def analyze_complex(cx: SimplicialComplex, config: RunConfig) -> dict:
    field = config.field
    I = cx.facet_ideal()
    forest = cx.is_forest()
    order = cx.good_leaf_order()
    pure = cx.is_pure()
    rep = {
        "facets": cx.to_json()["facets"],
        "dropped_vertices": list(cx.dropped),
        "dimension": cx.dimension(),
        "pure": pure,
        "forest": forest,
        "good_leaf_order": order,
        "codim1_connected": cx.is_connected_codim_one() if pure else None,
    }
    ip = cx.intersection_property()
    rep["intersection"] = ip.holds
    rep["intersection_reason"] = ip.code()
    table = graded_betti(I, field)
    rep["betti"] = table.to_json()
    rep["reg"] = table.regularity()
    rep["adjacent_order"] = cx.adjacent_good_leaf_order() if ip.holds else None
    if config.s:
        rep["power_reg"] = {str(s): graded_betti(ideal_power(I, s, config.max_gens), field).regularity()
                            for s in range(1, config.s + 1)}
    rep["checks"] = {}
    return rep


# --------------------------------------------------------------------------
# analyze-tree


def analyze_tree(G: RootedTree, config: RunConfig) -> dict:
    if config.t is None:
        raise PreconditionError("analyze-tree needs --t")
    t = config.t
    field = config.field
    h = G.height
    I = t_path_ideal(G, t)
    cls = classify(G)
    C = clean_form(G, t)
    rep = {
        "tree": G.to_json(),
        "t": t,
        "stats": tree_stats(G).to_json(),
        "classification": cls.to_json(),
        "clean_form": {"parent": list(C.parent), "labels": list(C.labels)},
        "generators": [list(p) for p in t_paths(G, t)],
        "recursion": reg_recursive(G, t),
    }
    closed = {}
    bounds = {}
    if is_perfect(G) and h >= 1 and ceil((h + 1) / 2) <= t <= h + 1:
        closed["perfect"] = reg_formula_perfect(G, t)
    if cls.broom and 2 <= t <= h + 1:
        closed["broom"] = reg_broom(G, t)
    if h >= 1 and ceil((h + 1) / 2) <= t <= h + 1:
        bounds["general"] = reg_upper_bound_general(G, t)
    if h >= t - 1 and t >= 1:
        bounds["alpha"] = alpha_bound(G, t)
    rep["closed_forms"] = closed
    rep["bounds"] = bounds
    oracle = None
    if G.n <= ORACLE_VERTEX_CAP:
        try:
            oracle = graded_betti(I, field).quotient_regularity() if not I.is_zero() else 0
        except ResourceError as e:
            rep["oracle_skipped"] = str(e)
    else:
        rep["oracle_skipped"] = f"more than {ORACLE_VERTEX_CAP} vertices"
    rep["oracle"] = oracle
    checks = {}
    if oracle is not None:
        checks["recursion_eq_oracle"] = rep["recursion"] == oracle
        for k, v in closed.items():
            checks[f"{k}_eq_oracle"] = v == oracle
        for k, v in bounds.items():
            checks[f"{k}_bound_ge_oracle"] = v >= oracle
    if config.s and 2 <= t <= h + 1 and oracle is not None:
        s = config.s
        powers = {}
        try:
            powers["oracle"] = graded_betti(ideal_power(I, s, config.max_gens), field).quotient_regularity()
            if cls.broom:
                powers["broom"] = power_reg_broom(G, t, s)
            if is_perfect(G) and t == h + 1:
                powers["perfect_top"] = power_reg_perfect_top(G, s)
            for k, v in powers.items():
                if k != "oracle":
                    checks[f"power_{k}_eq_oracle"] = v == powers["oracle"]
        except ResourceError as e:
            powers["skipped"] = str(e)
        rep["power"] = {"s": s, **powers}
    rep["checks"] = checks
    return rep


# --------------------------------------------------------------------------
# verify and conjecture-scan


def suite_report(result: SuiteResult, config: RunConfig) -> dict:
    return {
        **_meta(config),
        "suite": result.name,
        "status": result.status,
        "counts": result.counts(),
        "records": result.records,
    }


def suite_tsv(result: SuiteResult, config: RunConfig) -> str:
    head = {**_meta(config), "suite": result.name, "status": result.status, "counts": result.counts()}
    lines = [f"# {k}\t{_short(v)}" for k, v in sorted(head.items())]
    lines.append("part\tid\tstatus\tdetail")
    for r in result.records:
        detail = {k: v for k, v in r.items() if k not in ("part", "id", "status")}
        lines.append(f'{r["part"]}\t{r["id"]}\t{r["status"]}\t{_short(detail)}')
    return "\n".join(lines) + "\n"


def _status_exit(status: str) -> int:
    return {"pass": EXIT_OK, "fail": EXIT_FAIL}.get(status, EXIT_ERROR)


def cmd_verify(args) -> int:
    config = _config(args)
    result = run_parts(args.suite, SUITES[args.suite], config)
    _emit(suite_report(result, config), suite_tsv(result, config), args)
    print(f"{args.suite}: {result.status} {json.dumps(result.counts(), sort_keys=True)}", file=sys.stderr)
    return _status_exit(result.status)


def cmd_conjecture_scan(args) -> int:
    config = _config(args)
    if args.inputs:
        set_default_caps(OracleCaps(config.max_lattice))
        records = []
        for idx, path in enumerate(args.inputs):
            cx = SimplicialComplex.from_json(_read(path))
            records.append(_run_one(("conjectureScan", idx, cx.to_json(), config)))
        result = SuiteResult("conjectureScan", records)
    else:
        result = run_parts("conjectureScan", ["conjectureScan"], config)
    done = [r for r in result.records if r["status"] == "pass"]
    summary = {
        "instances": len(result.records),
        "min_slack": min((r["min_slack"] for r in done), default=None),
        "findings": sum(r["findings"] for r in done),
    }
    report = suite_report(result, config)
    report["summary"] = summary
    tsv = [f"# {k}\t{_short(v)}" for k, v in sorted({**_meta(config), **summary}.items())]
    tsv.append("id\tscope\ts\treg\tbound\tslack\tflag")
    for r in result.records:
        if r["status"] != "pass":
            tsv.append(f'{r["id"]}\t-\t-\t-\t-\t-\t{r["status"].upper()}: {_short(r.get("error", ""))}')
            continue
        for row in r["rows"]:
            flag = "FINDING" if row["finding"] else ""
            tsv.append(f'{r["id"]}\t{row["scope"]}\t{row["s"]}\t{row["reg"]}\t{row["bound"]}\t{row["slack"]}\t{flag}')
    _emit(report, "\n".join(tsv) + "\n", args)
    print(f"conjecture-scan: {json.dumps(summary, sort_keys=True)}", file=sys.stderr)
    # negative slack is reported, never an error
    return EXIT_OK if result.status == "pass" else EXIT_ERROR


def cmd_analyze(args) -> int:
    config = _config(args)
    set_default_caps(OracleCaps(config.max_lattice))
    text = _read(args.input)
    if args.command == "analyze-complex":
        rep = analyze_complex(SimplicialComplex.from_json(text), config)
    else:
        rep = analyze_tree(RootedTree.from_json(text), config)
    report = {**_meta(config), **rep}
    rows = [(k, v) for k, v in rep.items() if k not in ("betti",)]
    tsv = _kv_tsv(_meta(config), rows)
    if "betti" in rep:
        tsv += "# betti (rows i, columns j - i)\n" + BettiTable.from_json(rep["betti"]).to_tsv()
    _emit(report, tsv, args)
    return EXIT_OK if all(rep["checks"].values()) else EXIT_FAIL


# --------------------------------------------------------------------------
# argument parsing


def _common(p: argparse.ArgumentParser):
    p.add_argument("--t", type=int, default=None, help="path length")
    p.add_argument("--s", type=int, default=None, help="largest power to examine")
    p.add_argument("--char", type=int, default=0, help="field characteristic, 0 or a prime")
    p.add_argument("--seed", type=int, default=1)
    p.add_argument("--jobs", type=int, default=1)
    p.add_argument("--max-facets", type=int, default=None)
    p.add_argument("--max-gens", type=int, default=DEFAULT_MAX_GENERATORS)
    p.add_argument("--max-lattice", type=int, default=DEFAULT_MAX_LATTICE)
    p.add_argument("--format", choices=("json", "tsv"), default="json")
    p.add_argument("--out", default=None, help="write the report here instead of stdout")


def build_parser() -> argparse.ArgumentParser:
    ap = argparse.ArgumentParser(prog="simptree", description=__doc__.splitlines()[0])
    ap.add_argument("--version", action="version", version=f"simptree {__version__}")
    sub = ap.add_subparsers(dest="command", required=True)

    p = sub.add_parser("analyze-complex", help="forest structure, Betti table and reg of a facet ideal")
    p.add_argument("input")
    _common(p)

    p = sub.add_parser("analyze-tree", help="path ideal of a rooted tree: formulas, bounds, oracle")
    p.add_argument("input")
    _common(p)

    p = sub.add_parser("verify", help="run a verification suite")
    p.add_argument("suite", choices=sorted(SUITES))
    p.add_argument("--count", type=int, default=None, help="number of random instances")
    _common(p)

    p = sub.add_parser("conjecture-scan", help="slack of the power-regularity bound on random trees")
    p.add_argument("inputs", nargs="*", help="complex files; random corpus when omitted")
    p.add_argument("--count", type=int, default=None)
    p.add_argument("--mode", choices=("tree", "forest", "pure", "ip"), default="tree")
    _common(p)
    return ap


def main(argv: Optional[list[str]] = None) -> int:
    args = build_parser().parse_args(argv)
    try:
        FieldSpec(args.char)
    except ValueError as e:
        print(f"error: {e}", file=sys.stderr)
        return EXIT_ERROR
    try:
        if args.command == "verify":
            return cmd_verify(args)
        if args.command == "conjecture-scan":
            return cmd_conjecture_scan(args)
        return cmd_analyze(args)
    except (StructuralError, ResourceError) as e:
        print(f"error: {e}", file=sys.stderr)
        return EXIT_ERROR
    except SimptreeError as e:
        print(f"error: {type(e).__name__}: {e}", file=sys.stderr)
        return EXIT_ERROR


if __name__ == "__main__":
    sys.exit(main())
