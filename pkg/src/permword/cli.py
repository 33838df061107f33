"""Command-line interface: seeded, reproducible experiment runs.

Every subcommand takes --seed and derives all randomness from it, so a
(subcommand, params, seed) triple reproduces its payload bit for bit. Output
is a RunRecord envelope (JSON to --json or stdout); sweep instead emits CSV
with one row per run. Exit codes: 0 success, 1 retry/budget exhaustion,
2 usage errors.
"""

from __future__ import annotations

import argparse
import csv
import hashlib
import io
import json
import math
import os
import sys
import time
from concurrent.futures import ThreadPoolExecutor
from dataclasses import asdict
from datetime import datetime, timezone
from fractions import Fraction

import numpy as np

from . import compare as compare_mod
from . import repgap
from . import shrink as shrink_mod
from . import synth as synth_mod
from . import walk as walk_mod
from .errors import PermwordError
from .kernels import convolve_steps
from .perm import (
    Permutation,
    format_permutation,
    parse_permutation,
    random_even,
    random_uniform,
)
from .schreier import TupleGraph, estimate_gap
from .word import expanded_length, node_count, serialize

SUBCOMMANDS = (
    "shrink",
    "synth",
    "schreier-gap",
    "gap-exact",
    "gap-brute",
    "mix-exact",
    "compare",
    "sweep",
)

_BUILD_ID: str | None = None


def build_id() -> str:
    """Stable hex digest of the package sources, a git-style build tag."""
    global _BUILD_ID
    if _BUILD_ID is None:
        root = os.path.dirname(__file__)
        hasher = hashlib.sha1()
        for name in sorted(os.listdir(root)):
            if name.endswith((".py", ".pyx")):
                with open(os.path.join(root, name), "rb") as fh:
                    hasher.update(name.encode())
                    hasher.update(fh.read())
        _BUILD_ID = hasher.hexdigest()[:12]
    return _BUILD_ID


def _jsonable(x):
    if isinstance(x, Fraction):
        return str(x)
    if isinstance(x, np.integer):
        return int(x)
    if isinstance(x, np.floating):
        return float(x)
    if isinstance(x, np.ndarray):
        return [_jsonable(v) for v in x.tolist()]
    if isinstance(x, dict):
        return {str(k): _jsonable(v) for k, v in x.items()}
    if isinstance(x, (list, tuple)):
        return [_jsonable(v) for v in x]
    return x


def _seeded_pair(n: int, seed: int) -> tuple[Permutation, Permutation, np.random.Generator]:
    rng = np.random.default_rng(seed)
    return random_uniform(n, rng), random_uniform(n, rng), rng


# -- subcommand runners -------------------------------------------------------------


def run_gap_exact(args) -> dict:
    res = repgap.spectral_gap_exact(args.n)
    return {
        "n": res.n,
        "gap": res.gap,
        "second_eigenvalue": res.second_eigenvalue,
        "attained_at": [list(lam) for lam in res.attaining],
    }


def run_gap_brute(args) -> dict:
    eig = repgap.cayley_spectrum_bruteforce(args.n)
    vals = repgap.distinct_values(eig)
    ratios = sorted(
        {repgap.char_ratio_3cycle(lam) for lam in repgap.partitions(args.n)},
        reverse=True,
    )
    diff = None
    if len(vals) == len(ratios):
        diff = max(abs(v - float(r)) for v, r in zip(vals, ratios))
    return {
        "n": args.n,
        "distinct_eigenvalues": vals,
        "char_ratios": ratios,
        "max_abs_diff": diff,
    }


def run_schreier_gap(args) -> dict:
    g, h, rng = _seeded_pair(args.n, args.seed)
    graph = TupleGraph(g, h, args.ell)
    est = estimate_gap(graph, iters=args.max_iters, tol=args.tol, rng=rng)
    return {
        "n": args.n,
        "ell": args.ell,
        "num_vertices": graph.num_vertices,
        "lambda1": est.lambda1,
        "gap": est.gap,
        "residual": est.residual,
        "iterations": est.iterations,
        "converged": est.converged,
    }


def _mix_measure(args) -> walk_mod.WalkMeasure:
    n = args.n
    if args.walk == "3cycles":
        if args.group == "sym":
            raise ValueError("3-cycle walk on sym never mixes (parity obstruction)")
        return walk_mod.three_cycle_lazy_measure(n)
    if args.walk == "adjacent":
        if args.group == "alt":
            raise ValueError("adjacent transpositions are odd, not inside alt")
        return walk_mod.adjacent_transposition_lazy_measure(n)
    if args.walk == "transpositions":
        if args.group == "alt":
            raise ValueError("transpositions are odd, not inside alt")
        return walk_mod.transposition_lazy_measure(n)
    if not args.gens:
        raise ValueError("--walk custom needs --gens '(..);(..)'")
    gens = [parse_permutation(s, degree=n) for s in args.gens.split(";")]
    if args.group == "alt" and any(not p.is_even() for p in gens):
        raise ValueError("custom generators must be even inside alt")
    closure = walk_mod.generated_elements(gens)
    size = math.factorial(n) // (2 if args.group == "alt" else 1)
    if len(closure) != size:
        raise ValueError("custom generators do not generate the chosen group")
    support: list[Permutation] = []
    for p in gens:
        for q in (p, p.inverse()):
            if q not in support:
                support.append(q)
    return walk_mod.lazy_measure(support)


def run_mix_exact(args) -> dict:
    group = walk_mod.DenseGroup(args.group, args.n)
    m = _mix_measure(args)
    strong = walk_mod.strong_mixing_time(m, group, cap=args.cap)
    idx, probs = walk_mod.transition_tables(m, group)
    dist = np.zeros(group.size)
    dist[group.identity_index] = 1.0
    u = 1.0 / group.size
    table = []
    for k in range(min(strong, args.table_max) + 1):
        assert abs(dist.sum() - 1.0) <= 1e-9
        table.append(
            {
                "k": k,
                "l1": walk_mod.lp_norm(dist - u, 1),
                "l2": walk_mod.lp_norm(dist - u, 2),
                "linf": walk_mod.lp_norm(dist - u, math.inf),
            }
        )
        dist = convolve_steps(dist, idx, probs, 1)
    payload = {
        "n": args.n,
        "group": args.group,
        "walk": args.walk,
        "strong_mixing_time": strong,
        "k_vs_distance": table,
    }
    if args.eps is not None:
        t2 = walk_mod.mixing_time_lp(m, group, args.eps / group.size, 2, cap=args.cap)
        payload["argu"] = {
            "eps": args.eps,
            "t2": t2,
            "ok": walk_mod.check_argu(m, group, args.eps, cap=args.cap),
        }
    return payload


def run_shrink(args) -> dict:
    g, h, rng = _seeded_pair(args.n, args.seed)
    config = shrink_mod.ShrinkConfig(budget_coefficient=args.budget_c)
    res = shrink_mod.shrink_support(g, h, rng, config)
    return {
        "n": args.n,
        "seed": args.seed,
        "success": True,
        "support": res.element.support_size(),
        "iterations": res.iterations,
        "support_trace": list(res.support_trace),
        "trial_counts": list(res.trial_counts),
        "expanded_length": expanded_length(res.word),
        "node_count": node_count(res.word),
        "long_cycle_length": res.long_cycle.length,
    }


def run_synth(args) -> dict:
    g, h, rng = _seeded_pair(args.n, args.seed)
    ctx = synth_mod.prepare_context(g, h, rng)
    if args.target == "random-even":
        target = random_even(args.n, rng)
    else:
        target = parse_permutation(args.target, degree=args.n)
    word = synth_mod.synthesize(ctx, target)
    payload = {
        "n": args.n,
        "seed": args.seed,
        "target": format_permutation(target),
        "success": True,
        "expanded_length": expanded_length(word),
        "node_count": node_count(word),
    }
    if args.emit_word:
        payload["word"] = serialize(word)
    return payload


def run_compare(args) -> dict:
    g, h, rng = _seeded_pair(args.n, args.seed)
    ctx = None
    if args.n > compare_mod.MAX_BFS_DEGREE:
        ctx = synth_mod.prepare_context(g, h, rng)
    rep = compare_mod.comparison_report(
        g, h, ctx, args.mode, rng, per_generator=args.per_generator
    )
    out = asdict(rep)
    out["gap_lower_bound"] = (
        float(out["gap_lower_bound"])
        if isinstance(out["gap_lower_bound"], Fraction)
        else out["gap_lower_bound"]
    )
    return out


RUNNERS = {
    "gap-exact": run_gap_exact,
    "gap-brute": run_gap_brute,
    "schreier-gap": run_schreier_gap,
    "mix-exact": run_mix_exact,
    "shrink": run_shrink,
    "synth": run_synth,
    "compare": run_compare,
}


# -- sweep --------------------------------------------------------------------------


def _sweep_argv(sub: str, n: int, seed: int, params: dict) -> list[str]:
    argv = [sub, "--n", str(n), "--seed", str(seed)]
    for key, val in params.items():
        flag = "--" + str(key).replace("_", "-")
        if isinstance(val, bool):
            if val:
                argv.append(flag)
        else:
            argv.extend([flag, str(val)])
    return argv


def _sweep_one(parser, sub: str, n: int, seed: int, params: dict) -> tuple:
    try:
        args = parser.parse_args(_sweep_argv(sub, n, seed, params))
        payload = RUNNERS[sub](args)
        text = json.dumps(_jsonable(payload), sort_keys=True, separators=(",", ":"))
        return n, seed, True, "", text
    except SystemExit:
        return n, seed, False, "usage error", ""
    except (PermwordError, ValueError, AssertionError) as exc:
        return n, seed, False, f"{type(exc).__name__}: {exc}", ""


def run_sweep(args) -> str:
    """Cross-product runner; returns CSV text. Failed rows are flagged, the
    sweep itself still exits 0."""
    with open(args.config, encoding="utf-8") as fh:
        cfg = json.load(fh)
    sub = cfg["subcommand"]
    if sub not in RUNNERS:
        raise ValueError(f"sweep cannot drive subcommand {sub!r}")
    n_lo, n_hi = cfg["n_range"]
    s_lo, s_hi = cfg["seed_range"]
    params = cfg.get("params", {})
    jobs = [
        (n, seed)
        for n in range(int(n_lo), int(n_hi) + 1)
        for seed in range(int(s_lo), int(s_hi) + 1)
    ]
    parser = build_parser()
    threads = int(os.environ.get("PERMWORD_THREADS", "0") or 0)
    if threads <= 0:
        threads = min(4, os.cpu_count() or 1)
    out = io.StringIO()
    writer = csv.writer(out)
    writer.writerow(["n", "seed", "ok", "error", "payload"])
    if jobs:
        with ThreadPoolExecutor(max_workers=threads) as pool:
            rows = pool.map(
                lambda job: _sweep_one(parser, sub, job[0], job[1], params), jobs
            )
            for row in rows:
                writer.writerow(row)
    return out.getvalue()


# -- parser and dispatch ------------------------------------------------------------


def build_parser() -> argparse.ArgumentParser:
    parser = argparse.ArgumentParser(
        prog="permword",
        description="Random generators of permutation groups: words, walks, gaps.",
    )
    subs = parser.add_subparsers(dest="subcommand", required=True)

    def add(name: str, **kwargs):
        sp = subs.add_parser(name, **kwargs)
        sp.add_argument("--seed", type=int, default=0, help="RNG seed (default 0)")
        sp.add_argument("--json", dest="json_path", default=None, metavar="PATH",
                        help="write the RunRecord here instead of stdout")
        return sp

    sp = add("gap-exact", help="exact 3-cycle walk gap on Alt(n) from character ratios")
    sp.add_argument("--n", type=int, required=True)

    sp = add("gap-brute", help="dense Cayley spectrum vs character ratios, n <= 6")
    sp.add_argument("--n", type=int, required=True)

    sp = add("schreier-gap", help="estimated tuple-action gap for a seeded pair")
    sp.add_argument("--n", type=int, required=True)
    sp.add_argument("--ell", type=int, default=3)
    sp.add_argument("--max-iters", type=int, default=4000)
    sp.add_argument("--tol", type=float, default=1e-8)

    sp = add("mix-exact", help="exact distribution evolution on a dense group")
    sp.add_argument("--n", type=int, required=True)
    sp.add_argument("--group", choices=("alt", "sym"), default="alt")
    sp.add_argument("--walk", choices=("3cycles", "adjacent", "transpositions", "custom"),
                    default="3cycles")
    sp.add_argument("--gens", default=None,
                    help="semicolon-separated cycle forms for --walk custom")
    sp.add_argument("--eps", type=float, default=None,
                    help="also report the l2-vs-linf mixing comparison at this eps")
    sp.add_argument("--cap", type=int, default=100_000)
    sp.add_argument("--table-max", type=int, default=200,
                    help="cap on rows of the k-vs-distance table")

    sp = add("shrink", help="small-support element for a seeded random pair")
    sp.add_argument("--n", type=int, required=True)
    sp.add_argument("--budget-c", type=float, default=10.0,
                    help="word budget coefficient c in ceil(c n log2(n)^3)")

    sp = add("synth", help="synthesize a target permutation as a generator word")
    sp.add_argument("--n", type=int, required=True)
    sp.add_argument("--target", default="random-even",
                    help="'random-even' or an explicit cycle form like '(1 2 3)'")
    sp.add_argument("--emit-word", action="store_true",
                    help="include the serialized word in the payload")

    sp = add("compare", help="comparison constant A and transferred gap bound")
    sp.add_argument("--n", type=int, required=True)
    sp.add_argument("--mode", default="exact", help="'exact' or 'sample:M'")
    sp.add_argument("--per-generator", action="store_true",
                    help="normalize by 1/p(s) instead of 1/p(S)")

    sp = add("sweep", help="cross-product of (n, seed) for one subcommand, CSV out")
    sp.add_argument("--config", required=True,
                    help="JSON: {subcommand, n_range, seed_range, params}")
    sp.add_argument("--out", default=None, help="CSV path (default stdout)")

    return parser


def _emit(text: str, path: str | None) -> None:
    if path:
        with open(path, "w", encoding="utf-8") as fh:
            fh.write(text)
    else:
        sys.stdout.write(text)
        if not text.endswith("\n"):
            sys.stdout.write("\n")


def dispatch(argv: list[str]) -> int:
    parser = build_parser()
    try:
        args = parser.parse_args(argv)
    except SystemExit as exc:
        return 0 if exc.code in (0, None) else 2

    if args.subcommand == "sweep":
        try:
            text = run_sweep(args)
        except (OSError, KeyError, ValueError, json.JSONDecodeError) as exc:
            print(f"error: {exc}", file=sys.stderr)
            return 2
        _emit(text, args.out)
        return 0

    started = datetime.now(timezone.utc).isoformat()
    t0 = time.perf_counter()
    try:
        payload = RUNNERS[args.subcommand](args)
        code = 0
    except PermwordError as exc:
        payload = {"success": False, "error": type(exc).__name__, "message": str(exc)}
        code = 1
    except ValueError as exc:
        print(f"error: {exc}", file=sys.stderr)
        return 2
    params = {
        k: _jsonable(v)
        for k, v in vars(args).items()
        if k not in ("subcommand", "json_path")
    }
    record = {
        "subcommand": args.subcommand,
        "params": params,
        "seed": args.seed,
        "timestamp": started,
        "build_id": build_id(),
        "wall_ms": round((time.perf_counter() - t0) * 1000.0, 3),
        "payload": _jsonable(payload),
    }
    _emit(json.dumps(record, indent=2, sort_keys=True), args.json_path)
    return code


def main() -> None:
    sys.exit(dispatch(sys.argv[1:]))


if __name__ == "__main__":
    main()
