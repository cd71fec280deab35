"""Command-line front end.

Exit codes: 0 answer produced (or "true"), 1 answer "false", 2 input error,
3 the two checking engines disagreed.
"""

from __future__ import annotations

import argparse
import json
import sys
import time
from collections import Counter

from . import formula as fm
from . import kripke as kr
from . import reduction as rd
from . import superint as si
from .lattice import rn_index, rn_index_dag

EXIT_TRUE, EXIT_FALSE, EXIT_INPUT, EXIT_DISAGREE = 0, 1, 2, 3


class InputError(Exception):
    pass


def _bool(out, value: bool) -> int:
    print("true" if value else "false", file=out)
    return EXIT_TRUE if value else EXIT_FALSE


def _read_formula(args) -> fm.Formula:
    if getattr(args, "dag", None):
        with open(args.dag) as fh:
            return fm.parse_dag(fh.read()).unfold()
    if args.formula is None:
        raise InputError("a formula (or --dag FILE) is required")
    text = sys.stdin.read() if args.formula == "-" else args.formula
    return fm.parse(text)


def _index(args):
    if getattr(args, "dag", None):
        with open(args.dag) as fh:
            return rn_index_dag(fm.parse_dag(fh.read()))
    return rn_index(_read_formula(args))


def _model(args) -> kr.KripkeModel:
    if not args.model:
        raise InputError("--model FILE is required")
    m = kr.load_model(args.model)
    problems = kr.validate(m)
    if problems:
        raise InputError("invalid model: " + "; ".join(map(str, problems[:5])))
    return m


def _graph(args) -> rd.SliceGraph:
    if not args.graph:
        raise InputError("--graph FILE is required")
    g = rd.load_graph(args.graph)
    problems = rd.validate_slice_graph(g)
    if problems:
        raise InputError("invalid slice graph: " + "; ".join(map(str, problems[:5])))
    return g


def _emit_model(m: kr.KripkeModel, fmt: str, out) -> None:
    if fmt == "json":
        json.dump(kr.model_to_json(m), out, indent=1)
        out.write("\n")
    elif fmt == "dot":
        out.write(kr.model_to_dot(m, hide_implied=True))
    else:
        h = kr.model_indices(m)
        out.write("state\tin_valuation\th\tsuccessors\n")
        for s in m.states:
            succ = ",".join(x for x in m.successors(s) if x != s)
            out.write(f"{s}\t{int(s in m.valuation)}\t{h[s]}\t{succ}\n")


# --- verbs -----------------------------------------------------------------------------

def cmd_normalize(args, out):
    idx = _index(args)
    if args.format == "json":
        print(json.dumps({"index": str(idx), "kind": idx.kind, "rank": idx.rank}), file=out)
    else:
        print(idx, file=out)
    return EXIT_TRUE


def cmd_valid(args, out):
    logic = si.parse_logic(args.logic)
    return _bool(out, si.is_valid_in(logic, _read_formula(args)))


def cmd_check(args, out):
    f = _read_formula(args)
    m = _model(args)
    if args.state is None:
        raise InputError("--state NAME is required")
    if args.state not in m.position:
        raise InputError(f"unknown state {args.state!r}")
    logic = si.parse_logic(args.logic)
    if not si.admissible(logic, m):
        raise InputError(f"model is not admissible for {logic.label}")
    fast = brute = None
    if args.engine in ("fast", "both"):
        fast = kr.check_fast(m, args.state, f)
    if args.engine in ("brute", "both"):
        brute = kr.check_brute(m, args.state, f)
    if fast is not None and brute is not None and fast != brute:
        print(f"engines disagree: fast={fast} brute={brute}", file=sys.stderr)
        return EXIT_DISAGREE
    return _bool(out, fast if fast is not None else brute)


def cmd_canonical(args, out):
    if args.n < 1:
        raise InputError("n must be >= 1")
    _emit_model(kr.canonical(args.n), args.format, out)
    return EXIT_TRUE


def cmd_model_index(args, out):
    m = _model(args)
    h = kr.model_indices(m)
    if args.state is not None:
        if args.state not in h:
            raise InputError(f"unknown state {args.state!r}")
        print(h[args.state], file=out)
    else:
        for s in m.states:
            print(f"{s}\t{h[s]}", file=out)
    return EXIT_TRUE


def cmd_reduce(args, out):
    g = _graph(args)
    if args.format == "text":
        rep = rd.verify_reduction(g, args.rank_cap)
        out.write(rep.to_text())
        return EXIT_TRUE
    if args.format == "dot":
        out.write(rd.reduction_to_dot(g))
        return EXIT_TRUE
    f, m, start = rd.mc_instance(g, args.rank_cap)
    doc = kr.model_to_json(m)
    doc["start"] = start
    doc["formula_index"] = str(rd.decision_index(g.m))
    json.dump(doc, out, indent=1)
    out.write("\n")
    return EXIT_TRUE


def cmd_apath(args, out):
    g = _graph(args)
    x = args.source or g.s
    y = args.target or g.t
    for v in (x, y):
        if v not in g.slice_of:
            raise InputError(f"unknown node {v!r}")
    return _bool(out, rd.apath(g, x, y))


def cmd_gen_slice_graph(args, out):
    g = rd.gen_slice_graph(args.slices, args.width, args.density, args.seed)
    if args.format == "dot":
        out.write(rd.graph_to_dot(g))
    else:
        json.dump(rd.graph_to_json(g), out, indent=1)
        out.write("\n")
    return EXIT_TRUE


def bench_rows(slices, width, density, trials, seed, rank_cap=fm.DEFAULT_RANK_CAP):
    rows = []
    for k in range(trials):
        g = rd.gen_slice_graph(slices, width, density, seed * 100003 + k)
        f, m, start = rd.mc_instance(g, rank_cap)
        expect = rd.apath(g, g.s, g.t)
        fs, bs = Counter(), Counter()
        t0 = time.perf_counter()
        fast = kr.check_fast(m, start, f, fs)
        t1 = time.perf_counter()
        brute = kr.check_brute(m, start, f, bs)
        t2 = time.perf_counter()
        rows.append({
            "trial": k,
            "nodes": g.n,
            "states": len(m),
            "formula_len": fm.length(f),
            "apath": expect,
            "fast": fast,
            "brute": brute,
            "agree": fast == brute == expect,
            "fast_ms": (t1 - t0) * 1e3,
            "brute_ms": (t2 - t1) * 1e3,
            "fast_visits": fs["h_clusters"] + fs["h_edges"],
            "brute_visits": bs["brute_visits"],
        })
    return rows


BENCH_COLUMNS = ("trial", "nodes", "states", "formula_len", "apath", "fast", "brute",
                 "agree", "fast_ms", "brute_ms", "fast_visits", "brute_visits")


def cmd_bench(args, out):
    rows = bench_rows(args.slices, args.width, args.density, args.trials, args.seed, args.rank_cap)
    if args.format == "json":
        json.dump(rows, out, indent=1)
        out.write("\n")
    else:
        out.write("\t".join(BENCH_COLUMNS) + "\n")
        for r in rows:
            cells = [f"{r[c]:.3f}" if isinstance(r[c], float) else str(r[c]).lower()
                     if isinstance(r[c], bool) else str(r[c]) for c in BENCH_COLUMNS]
            out.write("\t".join(cells) + "\n")
        agree = sum(r["agree"] for r in rows)
        out.write(f"# agreement {agree}/{len(rows)}\n")
    if args.figure:
        from .plotting import plot_bench

        plot_bench(rows, args.figure,
                   f"m={args.slices}, width={args.width}, density={args.density}")
        print(f"# figure {args.figure}", file=sys.stderr)
    return EXIT_TRUE if all(r["agree"] for r in rows) else EXIT_DISAGREE


def cmd_classes(args, out):
    logic = si.parse_logic(args.logic)
    if si.allowed_indices(logic) is None:
        raise InputError("classes needs a logic with finitely many model indices")
    if args.format == "json":
        points = sorted(si.allowed_indices(logic))
        json.dump({
            "logic": logic.label,
            "indices": points,
            "classes": [{"pattern": c.bits(), "representative": str(c.representative),
                         "members": [str(x) for x in c.members]} for c in si.classes(logic)],
        }, out, indent=1)
        out.write("\n")
    else:
        out.write(si.classes_table(logic))
    return EXIT_TRUE


# --- parser ----------------------------------------------------------------------------

def build_parser() -> argparse.ArgumentParser:
    common = argparse.ArgumentParser(add_help=False)
    common.add_argument("--model")
    common.add_argument("--state")
    common.add_argument("--graph")
    common.add_argument("--engine", choices=("fast", "brute", "both"), default="fast")
    common.add_argument("--logic", default="ipc")
    common.add_argument("--format", choices=("json", "dot", "text"), default="text")
    common.add_argument("--seed", type=int, default=0)
    common.add_argument("--slices", type=int, default=4)
    common.add_argument("--width", type=int, default=3)
    common.add_argument("--density", type=float, default=0.5)
    common.add_argument("--trials", type=int, default=20)
    common.add_argument("--rank-cap", type=int, default=fm.DEFAULT_RANK_CAP)

    p = argparse.ArgumentParser(prog="ipc1", description=__doc__.splitlines()[0])
    sub = p.add_subparsers(dest="verb", required=True)

    def verb(name, fn, help_):
        sp = sub.add_parser(name, parents=[common], help=help_)
        sp.set_defaults(fn=fn)
        return sp

    for name, fn, help_ in (("normalize", cmd_normalize, "print the RN index of a formula"),
                            ("valid", cmd_valid, "validity in ipc or an extension"),
                            ("check", cmd_check, "model-check a formula at a state")):
        sp = verb(name, fn, help_)
        sp.add_argument("formula", nargs="?", help="formula text, '-' for stdin")
        sp.add_argument("--dag", help="read a shared-subterm formula file instead")
    sp = verb("canonical", cmd_canonical, "emit the canonical model H_n")
    sp.add_argument("n", type=int)
    verb("model-index", cmd_model_index, "model index of one or all states")
    verb("reduce", cmd_reduce, "slice graph to model-checking instance")
    sp = verb("apath", cmd_apath, "alternating reachability in a slice graph")
    sp.add_argument("--from", dest="source")
    sp.add_argument("--to", dest="target")
    verb("gen-slice-graph", cmd_gen_slice_graph, "random slice graph")
    sp = verb("bench", cmd_bench, "fast vs brute-force timings on reduction instances")
    sp.add_argument("--figure", help="also write a matplotlib figure to this path")
    verb("classes", cmd_classes, "equivalence classes of a finite extension")
    return p


INPUT_ERRORS = (InputError, fm.FormulaSyntaxError, fm.DagError, fm.SizeLimitExceeded,
                kr.InvalidModel, rd.InvalidSliceGraph, rd.BadParameters, si.AxiomIsBot,
                ValueError, OSError, json.JSONDecodeError)


def run(argv=None, out=None) -> int:
    out = out or sys.stdout
    parser = build_parser()
    try:
        args = parser.parse_args(argv)
    except SystemExit as exc:
        return EXIT_INPUT if exc.code else EXIT_TRUE
    try:
        return args.fn(args, out)
    except INPUT_ERRORS as exc:
        print(f"error: {exc}", file=sys.stderr)
        return EXIT_INPUT


def main():
    sys.exit(run())


if __name__ == "__main__":
    main()
