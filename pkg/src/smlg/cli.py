"""``smlg`` command-line front end.

Exit codes: 0 success, 1 usage error, 2 file/parse error, 3 verification
failure.
"""

from __future__ import annotations

import argparse
import json
import os
import sys
import time
from concurrent.futures import ProcessPoolExecutor
from dataclasses import asdict, dataclass, field
from pathlib import Path

import numpy as np

from . import bitshift, oracle, qgraph, qtext
from .errors import GenerationError, NotADag, NotLevelDag, ParseError, SmlgError, UsageError
from .graph import LevelDag, build_level_dag, format_pattern, parse_ldag, parse_patterns, serialize_ldag

EXIT_OK, EXIT_USAGE, EXIT_IO, EXIT_VERIFY = 0, 1, 2, 3
DEFAULT_C = 10


class CliUsageError(Exception):
    pass


class _Parser(argparse.ArgumentParser):
    def error(self, message):
        self.print_usage(sys.stderr)
        self.exit(EXIT_USAGE, f"{self.prog}: error: {message}\n")


@dataclass
class RunReport:
    engine: str
    instances: list
    answers: list
    seed: int
    c: int
    flags: dict
    gates: int | None = None
    wall_time_s: float | None = None
    invariants: dict | None = None
    extra: dict = field(default_factory=dict)

    def render(self, fmt: str) -> str:
        d = {k: v for k, v in asdict(self).items() if v is not None and v != {}}
        if fmt == "json":
            return json.dumps(d, sort_keys=True, indent=2)
        return "\n".join(f"{k}: {json.dumps(v, sort_keys=True)}" for k, v in d.items())


def _default_seed() -> int:
    raw = os.environ.get("SMLG_SEED")
    if raw is None:
        return 0
    try:
        return int(raw)
    except ValueError:
        raise CliUsageError(f"SMLG_SEED must be an integer, got {raw!r}") from None


def _read(path: str) -> str:
    try:
        return Path(path).read_text(encoding="utf-8")
    except OSError as exc:
        raise FileNotFoundError(f"cannot read {path}: {exc.strerror}") from exc


def _first_line(text: str) -> str:
    for line in text.splitlines():
        if line.strip() and not line.lstrip().startswith("#"):
            return line.strip()
    return ""


def _make_trace(enabled: bool):
    if not enabled:
        return None
    return lambda line: print(line, file=sys.stderr)


# -- match-text ---------------------------------------------------------------


def cmd_match_text(args) -> int:
    text = _first_line(_read(args.text))
    pattern = _first_line(_read(args.pattern))
    if not pattern:
        raise CliUsageError("empty pattern")
    start = time.perf_counter()
    gates = None
    extra = {}
    if args.engine == "naive":
        ends = oracle.naive_text_match(text, pattern)
    elif args.engine == "shift-and":
        ends = bitshift.shift_and_text(text, pattern)
    else:
        try:
            res = qtext.run_quantum_text(
                text, pattern, c=args.c, seed=args.seed, k_mode=args.k_mode,
                doubling=args.doubling, trace=_make_trace(args.trace),
            )
        except UsageError as exc:
            raise CliUsageError(f"quantum-sim text engine needs binary text and pattern: {exc}") from exc
        ends = [] if res.end is None else [res.end]
        gates = res.gates
        extra = {"tracks": res.n_tracks, "rounds": res.search.rounds, "k_draws": res.search.draws}
    elapsed = time.perf_counter() - start
    if ends:
        print(f"yes {ends[0] if args.engine == 'quantum-sim' else ' '.join(map(str, ends))}")
    else:
        print("no")
    if args.report:
        rep = RunReport(
            engine=args.engine, instances=[args.text, args.pattern], answers=[ends],
            seed=args.seed, c=args.c, flags=_flags(args), gates=gates,
            wall_time_s=elapsed if args.timing else None, extra=extra,
        )
        print(rep.render(args.report))
    return EXIT_OK


# -- match-dag ----------------------------------------------------------------


def _match_one(g: LevelDag, pattern: tuple, args) -> tuple[bool, dict]:
    info: dict = {}
    if args.engine == "dp":
        return oracle.dp_match(g, pattern)[0], info
    if args.engine == "shift-and":
        return bitshift.shift_and_level_dag(g, pattern), info
    if len(pattern) == 1:
        info["routed"] = "label-scan"
        return qgraph.label_scan(g, pattern), info
    res = qgraph.run_quantum_smlg(
        g, pattern, c=args.c, seed=args.seed, pad_mode=args.pad, k_mode=args.k_mode,
        doubling=args.doubling, check_invariants=args.check_invariants,
        trace=_make_trace(args.trace),
    )
    info.update(gates=res.gates, marked=res.marked, tracks=res.n_tracks,
                rounds=res.search.rounds, k_draws=res.search.draws)
    if res.invariants is not None:
        info["invariants"] = res.invariants.summary()
        if args.trace:
            for name, d in res.invariants.summary().items():
                print(f"check={name} passed={d['passed']} total={d['total']}", file=sys.stderr)
        if not res.invariants.ok:
            info["invariant_failures"] = res.invariants.failures
    return res.answer, info


def cmd_match_dag(args) -> int:
    g = parse_ldag(_read(args.graph))
    patterns = parse_patterns(_read(args.pattern))
    if not patterns:
        raise CliUsageError("pattern file is empty")
    start = time.perf_counter()
    answers, infos = [], []
    for p in patterns:
        ans, info = _match_one(g, p, args)
        answers.append(ans)
        infos.append(info)
        print("yes" if ans else "no")
    elapsed = time.perf_counter() - start
    if args.report:
        gates = sum(i.get("gates", 0) for i in infos) if args.engine == "quantum-sim" else None
        inv = [i["invariants"] for i in infos if "invariants" in i] or None
        rep = RunReport(
            engine=args.engine, instances=[args.graph, args.pattern],
            answers=["yes" if a else "no" for a in answers], seed=args.seed, c=args.c,
            flags=_flags(args), gates=gates, wall_time_s=elapsed if args.timing else None,
            invariants={"per_pattern": inv} if inv else None,
            extra={"per_pattern": [{k: v for k, v in i.items() if k != "invariants"} for i in infos]},
        )
        print(rep.render(args.report))
    bad = any("invariant_failures" in i for i in infos)
    return EXIT_VERIFY if bad else EXIT_OK


def _flags(args) -> dict:
    skip = {"func", "report", "timing"}
    return {k: v for k, v in sorted(vars(args).items()) if k not in skip}


# -- gen ----------------------------------------------------------------------


def write_instance(out: Path, inst: oracle.Instance) -> None:
    (out / f"{inst.id}.ldag").write_text(serialize_ldag(inst.graph), encoding="utf-8")
    (out / f"{inst.id}.pat").write_text(format_pattern(inst.pattern) + "\n", encoding="utf-8")


def cmd_gen(args) -> int:
    out = Path(args.out)
    out.mkdir(parents=True, exist_ok=True)
    manifest = []
    if args.nodes is not None:
        params = oracle.GenParams(args.nodes, args.levels, args.density, args.alphabet_size or 2, args.seed)
        g = oracle.gen_level_dag(params)
        planted = args.planted == "yes"
        p = oracle.gen_pattern(g, args.pattern_length, planted, args.seed)
        insts = [oracle.Instance(f"inst{args.seed:05d}", g, p, planted, args.seed)]
    else:
        insts = oracle.gen_corpus(
            args.count, seed=args.seed, max_nodes=args.max_nodes, max_m=args.max_m,
            alphabet_size=args.alphabet_size,
        )
    for inst in insts:
        write_instance(out, inst)
        manifest.append({"id": inst.id, "seed": inst.seed, "planted": inst.planted,
                         "nodes": inst.graph.n, "edges": inst.graph.n_edges, "m": len(inst.pattern)})
    (out / "manifest.json").write_text(json.dumps(manifest, indent=1) + "\n", encoding="utf-8")
    print(f"wrote {len(insts)} instances to {out}")
    return EXIT_OK


# -- verify -------------------------------------------------------------------


def check_instance(g: LevelDag, pattern: tuple, c: int = DEFAULT_C, seed: int = 0, seeds: int = 3) -> list[str]:
    """Run every engine and invariant suite; returns a list of problems."""
    problems = []
    truth, _ = oracle.dp_match(g, pattern)
    if g.n <= oracle.MAX_ENUM_NODES and oracle.enumerate_paths_match(g, pattern) != truth:
        problems.append("enumeration disagrees with dp")
    if bitshift.shift_and_level_dag(g, pattern) != truth:
        problems.append("shift-and disagrees with dp")
    if len(pattern) == 1:
        if qgraph.label_scan(g, pattern) != truth:
            problems.append("label scan disagrees with dp")
        return problems
    for pad in qgraph.PAD_MODES:
        if qgraph.marked_nonempty(g, pattern, pad) != truth:
            problems.append(f"quantum marked set ({pad}) disagrees with dp")
    for s in range(seeds):
        res = qgraph.run_quantum_smlg(g, pattern, c=c, seed=seed + s, check_invariants=(s == 0))
        if res.answer and not truth:
            problems.append(f"quantum run answered yes on a no-instance (seed {seed + s})")
        if res.invariants is not None and not res.invariants.ok:
            problems.extend(res.invariants.failures[:3])
    return problems


def _verify_task(item):
    inst_id, ldag_text, pat_text, c, seed = item
    g = parse_ldag(ldag_text)
    out = []
    for k, p in enumerate(parse_patterns(pat_text)):
        probs = check_instance(g, p, c=c, seed=seed)
        if probs:
            out.append((inst_id, k, probs))
    return inst_id, out


def minimize_failure(g: LevelDag, pattern: tuple, still_fails) -> LevelDag:
    """Greedily drop nodes, then edges, while ``still_fails(g, pattern)``."""
    changed = True
    while changed:
        changed = False
        for v in range(g.n):
            keep = [u for u in range(g.n) if u != v]
            idx = {u: k for k, u in enumerate(keep)}
            edges = [(idx[a], idx[b]) for a, b in g.edges() if a != v and b != v]
            try:
                h = build_level_dag([g.labels[u] for u in keep], edges, g.alphabet)
            except (NotADag, NotLevelDag, UsageError):
                continue
            if h.n and still_fails(h, pattern):
                g, changed = h, True
                break
        if changed:
            continue
        for e in g.edges():
            edges = [x for x in g.edges() if x != e]
            try:
                h = build_level_dag(list(g.labels), edges, g.alphabet)
            except (NotADag, NotLevelDag, UsageError):
                continue
            if still_fails(h, pattern):
                g, changed = h, True
                break
    return g


def cmd_verify(args) -> int:
    corpus = Path(args.corpus)
    if not corpus.is_dir():
        raise FileNotFoundError(f"corpus directory {corpus} not found")
    items = []
    for f in sorted(corpus.glob("*.ldag")):
        pat = f.with_suffix(".pat")
        items.append((f.stem, _read(str(f)), _read(str(pat)), args.c, args.seed))
    if not items:
        raise FileNotFoundError(f"no .ldag files in {corpus}")
    if args.jobs > 1:
        with ProcessPoolExecutor(args.jobs) as pool:
            results = list(pool.map(_verify_task, items, chunksize=8))
    else:
        results = [_verify_task(it) for it in items]
    results.sort()
    failures = [f for _, fs in results for f in fs]
    print(f"verified {len(items)} instances: {len(failures)} failing")
    if not failures:
        return EXIT_OK
    fail_dir = corpus / "failures"
    fail_dir.mkdir(exist_ok=True)
    texts = {it[0]: it for it in items}
    for inst_id, k, probs in failures:
        print(f"FAIL {inst_id}[{k}]: " + "; ".join(probs))
        g = parse_ldag(texts[inst_id][1])
        p = parse_patterns(texts[inst_id][2])[k]
        small = minimize_failure(g, p, lambda h, q: bool(check_instance(h, q, c=args.c, seed=args.seed)))
        (fail_dir / f"{inst_id}_{k}.min.ldag").write_text(serialize_ldag(small), encoding="utf-8")
        (fail_dir / f"{inst_id}_{k}.min.pat").write_text(format_pattern(p) + "\n", encoding="utf-8")
    return EXIT_VERIFY


# -- bench --------------------------------------------------------------------


def bench_graph(n_edges_target: int, width: int, seed: int, min_levels: int = 2) -> LevelDag:
    """Level DAG of fixed width whose edge count is close to the target;
    doubling the target doubles the number of levels."""
    levels = max(min_levels, round(n_edges_target / (width * width * 0.5)) + 1)
    params = oracle.GenParams(width * levels, levels, density=0.5, alphabet_size=4, seed=seed)
    return oracle.gen_level_dag(params)


def bench_rows(exps, m: int, width: int, seed: int, c: int) -> list[dict]:
    rows = []
    for e in exps:
        g = bench_graph(1 << e, width, seed + e, min_levels=m)
        # gate counts do not depend on the answer; planted patterns always exist
        pattern = oracle.gen_pattern(g, m, planted=True, seed=seed + e)
        t0 = time.perf_counter()
        res = qgraph.run_quantum_smlg(g, pattern, c=c, seed=seed)
        rows.append({
            "exp": e, "V": g.n, "E": g.n_edges, "m": m, "gates_main": res.gates_main,
            "grover_ops": res.search.ops, "wall_s": time.perf_counter() - t0,
        })
    return rows


def cmd_bench(args) -> int:
    rows = bench_rows(range(args.min_exp, args.max_exp + 1), args.m, args.width, args.seed, args.c)
    size = np.array([r["V"] + r["E"] for r in rows], dtype=float)
    gates = np.array([r["gates_main"] for r in rows], dtype=float)
    slope, intercept = np.polyfit(size, gates, 1)
    print(f"{'exp':>4} {'|V|':>7} {'|E|':>7} {'gates':>9} {'ratio':>6} {'grover':>7} {'wall_s':>8}")
    prev = None
    for r in rows:
        ratio = f"{r['gates_main'] / prev:6.3f}" if prev else "     -"
        wall = f"{r['wall_s']:8.3f}" if args.timing else "       -"
        print(f"{r['exp']:>4} {r['V']:>7} {r['E']:>7} {r['gates_main']:>9} {ratio} {r['grover_ops']:>7} {wall}")
        prev = r["gates_main"]
    print(f"fit: gates = {slope:.4f} * (|V|+|E|) + {intercept:.1f}")
    return EXIT_OK


# -- entry point --------------------------------------------------------------


def build_parser() -> argparse.ArgumentParser:
    p = _Parser(prog="smlg", description="Bit-parallel and simulated-quantum string matching.")
    sub = p.add_subparsers(dest="command", required=True, parser_class=_Parser)

    def common(sp, quantum=True):
        sp.add_argument("--c", type=int, default=DEFAULT_C, help="repetition budget (default: %(default)s)")
        sp.add_argument("--seed", type=int, default=None, help="rng seed (default: $SMLG_SEED or 0)")
        sp.add_argument("--report", choices=("text", "json"), default=None)
        sp.add_argument("--timing", action="store_true", help="include wall time in reports")
        if quantum:
            sp.add_argument("--k-mode", choices=("period", "pattern"), default="period",
                            help="range for the random Grover iteration count")
            sp.add_argument("--doubling", action="store_true",
                            help="add one never-marked index bit before the search")
            sp.add_argument("--trace", action="store_true", help="log every gate to stderr")

    mt = sub.add_parser("match-text", help="match a pattern in a text")
    mt.add_argument("--text", required=True)
    mt.add_argument("--pattern", required=True)
    mt.add_argument("--engine", choices=("naive", "shift-and", "quantum-sim"), default="shift-and")
    common(mt)
    mt.set_defaults(func=cmd_match_text)

    md = sub.add_parser("match-dag", help="match patterns in a level DAG")
    md.add_argument("--graph", required=True)
    md.add_argument("--pattern", required=True)
    md.add_argument("--engine", choices=("dp", "shift-and", "quantum-sim"), default="shift-and")
    md.add_argument("--pad", choices=qgraph.PAD_MODES, default="substates")
    md.add_argument("--check-invariants", action="store_true")
    common(md)
    md.set_defaults(func=cmd_match_dag)

    gn = sub.add_parser("gen", help="generate a seeded corpus")
    gn.add_argument("--out", required=True)
    gn.add_argument("--count", type=int, default=100)
    gn.add_argument("--seed", type=int, default=None)
    gn.add_argument("--max-nodes", type=int, default=24)
    gn.add_argument("--max-m", type=int, default=8)
    gn.add_argument("--alphabet-size", type=int, default=None)
    gn.add_argument("--nodes", type=int, default=None, help="single instance: node count")
    gn.add_argument("--levels", type=int, default=4)
    gn.add_argument("--density", type=float, default=0.3)
    gn.add_argument("--pattern-length", type=int, default=3)
    gn.add_argument("--planted", choices=("yes", "no"), default="yes")
    gn.set_defaults(func=cmd_gen)

    vf = sub.add_parser("verify", help="cross-check all engines on a corpus")
    vf.add_argument("--corpus", required=True)
    vf.add_argument("--jobs", type=int, default=1)
    vf.add_argument("--c", type=int, default=DEFAULT_C)
    vf.add_argument("--seed", type=int, default=None)
    vf.set_defaults(func=cmd_verify)

    bn = sub.add_parser("bench", help="gate counts over doubling graph sizes")
    bn.add_argument("--min-exp", type=int, default=8)
    bn.add_argument("--max-exp", type=int, default=14)
    bn.add_argument("--m", type=int, default=8)
    bn.add_argument("--width", type=int, default=4)
    bn.add_argument("--c", type=int, default=DEFAULT_C)
    bn.add_argument("--seed", type=int, default=None)
    bn.add_argument("--timing", action="store_true")
    bn.set_defaults(func=cmd_bench)
    return p


def main(argv=None) -> int:
    parser = build_parser()
    args = parser.parse_args(argv)
    try:
        if getattr(args, "seed", 0) is None:
            args.seed = _default_seed()
        if getattr(args, "c", 1) < 1:
            raise CliUsageError("--c must be >= 1")
        if args.command == "gen" and args.nodes is None and args.alphabet_size is not None and args.alphabet_size < 1:
            raise CliUsageError("--alphabet-size must be >= 1")
        return args.func(args)
    except CliUsageError as exc:
        print(f"smlg: usage error: {exc}", file=sys.stderr)
        return EXIT_USAGE
    except (OSError, ParseError, NotADag, NotLevelDag) as exc:
        print(f"smlg: {exc}", file=sys.stderr)
        return EXIT_IO
    except (UsageError, GenerationError) as exc:
        print(f"smlg: usage error: {exc}", file=sys.stderr)
        return EXIT_USAGE
    except SmlgError as exc:
        print(f"smlg: {exc}", file=sys.stderr)
        return EXIT_VERIFY


if __name__ == "__main__":
    sys.exit(main())
