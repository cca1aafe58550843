"""Command line entry point: ``rqrao {solve,verify,bench,gen}``."""

from __future__ import annotations

import argparse
import csv
import json
import logging
import os
import sys
import time
from pathlib import Path
from typing import Any, Sequence

import numpy as np

from .graph import Graph, GraphError, generate, read_graph
from .rng import stream
from .solver import (
    RqraoParams,
    brute_solve,
    qrao_solve,
    rank_two_solve,
    rqaoa_solve,
    rqrao_solve,
    tree_rounding_solve,
)
from .solver.report import SolveReport

ALGORITHMS = ("rqrao", "tree", "qrao", "rqaoa", "rank2", "brute")

log = logging.getLogger("rqrao")


class UsageError(ValueError):
    pass


def parse_gen(text: str) -> dict[str, Any]:
    """A generator spec from JSON, a JSON file path or ``key=value,key=value``."""
    text = text.strip()
    if text.startswith("{"):
        return json.loads(text)
    if text.endswith(".json") and Path(text).is_file():
        return json.loads(Path(text).read_text())
    spec: dict[str, Any] = {}
    for part in filter(None, text.split(",")):
        if "=" not in part:
            raise UsageError(f"generator spec item {part!r} is not key=value")
        k, v = part.split("=", 1)
        try:
            spec[k.strip()] = json.loads(v)
        except json.JSONDecodeError:
            spec[k.strip()] = v.strip()
    return spec


def _load(args) -> tuple[Graph, dict[str, Any]]:
    if bool(args.graph) == bool(args.gen):
        raise UsageError("give exactly one of --graph or --gen")
    if args.graph:
        return read_graph(args.graph), {"graph": str(args.graph)}
    spec = parse_gen(args.gen)
    return generate(spec), {"gen": spec}


def _threads(args) -> int:
    if args.threads is not None:
        t = args.threads
    else:
        t = int(os.environ.get("RQRAO_THREADS", "1"))
    if t < 1:
        raise UsageError("threads must be >= 1")
    return t


def _params(args) -> RqraoParams:
    try:
        return RqraoParams(m=args.m, ensemble=args.ensemble, scale=args.scale, chi=args.chi,
                           bf_threshold=args.bf_threshold)
    except ValueError as exc:
        raise UsageError(str(exc)) from exc


def run_seed(seed: int, run: int) -> int:
    """Seed of run ``run`` under master seed ``seed``."""
    return int(stream(seed, run).integers(0, 2**63 - 1))


def solve_once(g: Graph, algo: str, p: RqraoParams, seed: int, threads: int = 1) -> SolveReport:
    if algo == "rqrao":
        return rqrao_solve(g, p, seed, threads)
    if algo == "tree":
        return tree_rounding_solve(g, p, seed, threads)
    if algo == "qrao":
        return qrao_solve(g, p.m, p.chi, seed, p.optimizer)
    if algo == "rqaoa":
        return rqaoa_solve(g, p.bf_threshold, seed)
    if algo == "rank2":
        return rank_two_solve(g, rng=seed)
    if algo == "brute":
        return brute_solve(g)
    raise UsageError(f"unknown algorithm {algo!r}")


def _dump(obj: Any, out: str | None) -> None:
    text = json.dumps(obj, indent=2, sort_keys=True) + "\n"
    if out:
        Path(out).write_text(text, encoding="utf-8")
    else:
        sys.stdout.write(text)


def cmd_solve(args) -> int:
    g, source = _load(args)
    if args.repeat < 1:
        raise UsageError("repeat must be >= 1")
    p = _params(args)
    threads = _threads(args)
    reps, runs, timing = [], [], []
    for r in range(args.repeat):
        rep = solve_once(g, args.algo, p, run_seed(args.seed, r), threads)
        rep.check(g)
        reps.append(rep)
        d = rep.to_dict(timing=True)
        timing.append(d.pop("timing"))
        runs.append(d)
    best = max(range(len(runs)), key=lambda i: runs[i]["weight"])
    report = {
        "command": "solve",
        "input": source,
        "nodes": g.num_nodes,
        "edges": g.num_edges,
        "algorithm": args.algo,
        "params": p.to_dict(),
        "seed": args.seed,
        "repeat": args.repeat,
        "runs": runs,
        "best": {"run": best, "weight": runs[best]["weight"], "bits": runs[best]["bits"]},
        "timing": {"runs": timing},
    }
    if args.out:
        _dump(report, args.out)
    if args.telemetry:
        Path(args.telemetry).write_text(reps[best].telemetry_csv(), encoding="utf-8")
    print(f"best weight {runs[best]['weight']:g} (run {best} of {args.repeat})")
    return 0


def cmd_verify(args) -> int:
    from .verify import run_verify

    ok, report = run_verify(args.instances, args.seed, args.strict)
    report["command"] = "verify"
    _dump(report, args.out)
    for name, s in report["suites"].items():
        status = "ok" if s["passed"] else ("FAIL" if s["gating"] or args.strict else "discrepancy")
        print(f"{status:11s} {name:26s} max gap {s['max_gap']:.3e} (tol {s['tolerance']:.0e})", file=sys.stderr)
    if not ok:
        print("failing: " + ", ".join(report["failing"]), file=sys.stderr)
    return 0 if ok else 1


def fit_exponent(n: Sequence[float], seconds: Sequence[float]) -> float:
    """Least-squares slope of ``log t`` against ``log n``."""
    n, t = np.asarray(n, dtype=float), np.asarray(seconds, dtype=float)
    keep = np.isfinite(t) & (t > 0)
    if np.unique(n[keep]).size < 2:
        return float("nan")
    return float(np.polyfit(np.log(n[keep]), np.log(t[keep]), 1)[0])


def cmd_bench(args) -> int:
    base = parse_gen(args.gen) if args.gen else {"kind": "3regular", "weights": "pm1"}
    sizes = [int(x) for x in args.sizes.split(",")]
    algos = args.algos.split(",")
    for a in algos:
        if a not in ALGORITHMS:
            raise UsageError(f"unknown algorithm {a!r}")
    p = _params(args)
    threads = _threads(args)
    rows = []
    for n in sizes:
        for i in range(args.instances):
            spec = dict(base, n=n, seed=int(stream(args.seed, n, i).integers(2**31)))
            g = generate(spec)
            cuts: dict[str, float] = {}
            for a in dict.fromkeys(["rank2"] + algos):
                t0 = time.perf_counter()
                try:
                    cuts[a] = solve_once(g, a, p, run_seed(args.seed, i), threads).weight
                except Exception as exc:  # noqa: BLE001 - recorded as an NA row
                    log.warning("%s on n=%d graph %d failed: %s", a, n, i, exc)
                    cuts[a] = float("nan")
                secs = time.perf_counter() - t0
                if a in algos:
                    ref = cuts.get("rank2", float("nan"))
                    rel = cuts[a] / ref if ref and np.isfinite(ref) else float("nan")
                    rows.append({"algorithm": a, "n": n, "graph": i, "cut": cuts[a], "relative_cut": rel,
                                 "seconds": secs})
    fh = open(args.out, "w", newline="", encoding="utf-8") if args.out else sys.stdout
    try:
        w = csv.DictWriter(fh, ["algorithm", "n", "graph", "cut", "relative_cut", "seconds"], lineterminator="\n")
        w.writeheader()
        for r in rows:
            w.writerow({k: ("NA" if isinstance(v, float) and not np.isfinite(v) else v) for k, v in r.items()})
    finally:
        if fh is not sys.stdout:
            fh.close()
    for a in algos:
        sel = [r for r in rows if r["algorithm"] == a]
        beta = fit_exponent([r["n"] for r in sel], [r["seconds"] for r in sel])
        print(f"fit {a} time ~ n^{beta:.3f}", file=sys.stderr)
    return 0


def cmd_gen(args) -> int:
    g = generate(parse_gen(args.gen))
    text = g.to_json() if args.format == "json" else g.to_rudy()
    if args.out:
        Path(args.out).write_text(text, encoding="utf-8")
    else:
        sys.stdout.write(text)
    return 0


def _add_params(p: argparse.ArgumentParser) -> None:
    d = RqraoParams()
    p.add_argument("--m", type=int, default=d.m, help="bits per qubit, 1..3")
    p.add_argument("--ensemble", type=int, default=d.ensemble, help="trials per round (N)")
    p.add_argument("--scale", type=float, default=d.scale, help="shrinkage in standard deviations (S)")
    p.add_argument("--chi", type=int, default=d.chi, help="MPS bond dimension")
    p.add_argument("--bf-threshold", type=int, default=d.bf_threshold, help="brute-force below this many nodes (M)")
    p.add_argument("--seed", type=int, default=0, help="master seed")
    p.add_argument("--threads", type=int, default=None, help="trial workers (default: $RQRAO_THREADS or 1)")


def build_parser() -> argparse.ArgumentParser:
    ap = argparse.ArgumentParser(prog="rqrao", description="MAX-CUT by recursive quantum random access optimization")
    ap.add_argument("-v", "--verbose", action="store_true")
    sub = ap.add_subparsers(dest="command", required=True)

    s = sub.add_parser("solve", help="solve one graph")
    s.add_argument("--graph", help="rudy/Gset file")
    s.add_argument("--gen", help="generator spec: JSON, JSON file or key=value list")
    s.add_argument("--algo", choices=ALGORITHMS, default="rqrao")
    s.add_argument("--repeat", type=int, default=1)
    s.add_argument("--out", help="JSON report path")
    s.add_argument("--telemetry", help="per-round CSV of the best run")
    _add_params(s)
    s.set_defaults(func=cmd_solve)

    v = sub.add_parser("verify", help="run the identity suites")
    v.add_argument("--instances", type=int, default=50)
    v.add_argument("--seed", type=int, default=0)
    v.add_argument("--strict", action="store_true", help="also gate on the published statements that fail")
    v.add_argument("--out", help="JSON report path (default stdout)")
    v.set_defaults(func=cmd_verify)

    b = sub.add_parser("bench", help="size sweep against the rank-two baseline")
    b.add_argument("--gen", help="base generator spec; n and seed are filled in")
    b.add_argument("--sizes", default="50,100,200")
    b.add_argument("--instances", type=int, default=3)
    b.add_argument("--algos", default="rqrao,rank2")
    b.add_argument("--out", help="CSV path (default stdout)")
    _add_params(b)
    b.set_defaults(func=cmd_bench)

    g = sub.add_parser("gen", help="write a generated graph")
    g.add_argument("--gen", required=True)
    g.add_argument("--format", choices=("rudy", "json"), default="rudy")
    g.add_argument("--out")
    g.set_defaults(func=cmd_gen)
    return ap


def main(argv: Sequence[str] | None = None) -> int:
    ap = build_parser()
    args = ap.parse_args(argv)
    logging.basicConfig(level=logging.INFO if args.verbose else logging.WARNING, format="%(levelname)s %(message)s")
    try:
        return args.func(args)
    except UsageError as exc:
        ap.print_usage(sys.stderr)
        print(f"rqrao: error: {exc}", file=sys.stderr)
        return 2
    except (OSError, GraphError) as exc:
        print(f"rqrao: {exc}", file=sys.stderr)
        return 1


if __name__ == "__main__":
    sys.exit(main())
