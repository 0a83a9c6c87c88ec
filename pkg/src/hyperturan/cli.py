"""Command-line entry point: ``hyperturan <command> ...``.

Every command writes one self-describing record to stdout, either as
``key: value`` lines (``--format text``) or as a JSON object
(``--format json``). Diagnostics go to stderr. Exit codes: 0 success,
1 a checked property was violated, 2 usage or parse error, 3 scale guard.
"""

from __future__ import annotations

import argparse
import json
import logging
import math
import os
import sys
import time
from fractions import Fraction
from pathlib import Path
from typing import Any, Sequence

import numpy as np

from . import extremal as ex
from . import verify as vf
from .entropy import (EntropyError, alphas, build_distribution, chain_rule_residual, entropy, entropy_gap,
                      marginal, optimal_entropy_identity)
from .families import TrianglePattern, find_triangle, gen_T
from .hypercore import (HypergraphError, RGraph, blowup, complete_graph, degree_profile, find_r_partition,
                        format_hg, is_2_covered, is_partial_steiner, read_hg, write_hg)
from .lagrangian import EXACT_MAX_N, MaximizeConfig, ScaleGuardError, check_opt_structure, maximize

THREADS_ENV = "HYPERTURAN_THREADS"
WEIGHT_SUM_TOL = 1e-6
FORMAT_VERSION = 1

EXIT_OK, EXIT_VIOLATED, EXIT_USAGE, EXIT_GUARD = 0, 1, 2, 3

log = logging.getLogger("hyperturan")


class UsageError(Exception):
    pass


# --- encoding ------------------------------------------------------------------

def _plain(v: Any) -> Any:
    """Convert report values into JSON-compatible data with a fixed layout."""
    if isinstance(v, bool) or v is None or isinstance(v, (int, str)):
        return v
    if isinstance(v, float):
        return v if math.isfinite(v) else str(v)
    if isinstance(v, Fraction):
        return f"{v.numerator}/{v.denominator}"
    if isinstance(v, np.generic):
        return _plain(v.item())
    if isinstance(v, RGraph):
        return {"n": v.n, "r": v.r, "edges": [list(e) for e in v.edges]}
    if isinstance(v, dict):
        return {str(k): _plain(x) for k, x in v.items()}
    if isinstance(v, (list, tuple, np.ndarray)):
        return [_plain(x) for x in v]
    raise TypeError(f"cannot encode {type(v).__name__}")


def _text_value(v: Any) -> str:
    if isinstance(v, dict):
        return json.dumps(v, sort_keys=False, separators=(", ", ": "))
    if isinstance(v, list):
        return " ".join(_text_value(x) if not isinstance(x, (list, dict)) else json.dumps(x) for x in v)
    if v is None:
        return "none"
    if isinstance(v, bool):
        return "true" if v else "false"
    return str(v)


def render(record: dict, fmt: str) -> str:
    data = _plain({"format_version": FORMAT_VERSION, **record})
    if fmt == "json":
        return json.dumps(data, indent=2) + "\n"
    return "".join(f"{k}: {_text_value(v)}\n" for k, v in data.items())


# --- input helpers ---------------------------------------------------------------

def read_weights(path: str | Path, n: int) -> np.ndarray:
    """One decimal per line; renormalised if the sum is within ``1e-6`` of one."""
    vals = []
    for lineno, raw in enumerate(Path(path).read_text().splitlines(), 1):
        line = raw.strip()
        if not line or line.startswith("#"):
            continue
        try:
            vals.append(float(line))
        except ValueError:
            raise UsageError(f"{path}:{lineno}: not a number: {line!r}") from None
    w = np.array(vals, dtype=np.float64)
    if len(w) != n:
        raise UsageError(f"{path}: expected {n} weights, found {len(w)}")
    if np.any(w < 0) or not np.all(np.isfinite(w)):
        raise UsageError(f"{path}: weights must be finite and nonnegative")
    total = math.fsum(w)
    if abs(total - 1.0) > WEIGHT_SUM_TOL:
        raise UsageError(f"{path}: weights sum to {total!r}, more than {WEIGHT_SUM_TOL} away from 1")
    return w / total


def _int_list(text: str) -> list[int]:
    try:
        return [int(t) for t in text.replace(",", " ").split()]
    except ValueError:
        raise argparse.ArgumentTypeError(f"expected comma-separated integers, got {text!r}") from None


def _default_threads() -> int:
    raw = os.environ.get(THREADS_ENV, "1")
    try:
        k = int(raw)
    except ValueError:
        k = 0
    if k < 1:
        raise UsageError(f"{THREADS_ENV} must be a positive integer, got {raw!r}")
    return k


def _positive(kind):
    def conv(text):
        try:
            v = kind(text)
        except ValueError:
            raise argparse.ArgumentTypeError(f"not a number: {text!r}") from None
        if not v > 0:
            raise argparse.ArgumentTypeError(f"must be positive: {text!r}")
        return v
    return conv


def _maximize_config(a) -> MaximizeConfig:
    return MaximizeConfig(mode=a.mode, restarts=a.restarts, tol=a.tol, seed=a.seed, threads=a.threads)


def _vector(x) -> list[float]:
    return [] if x is None else [float(v) for v in np.asarray(x)]


# --- commands --------------------------------------------------------------------

def cmd_gen(a) -> tuple[dict | None, int, str | None]:
    if a.turan:
        n, r = a.turan
        H = ex.gen_turan(n, r)
    elif a.complete:
        n, r = a.complete
        H = complete_graph(n, r)
    elif a.triangle:
        H = gen_T(*a.triangle)
    elif a.fano:
        H = ex.gen_fano()
    elif a.affine9:
        H = ex.gen_affine_plane()
    else:
        H = read_hg(a.blowup)
        sizes = a.sizes or [1] * H.n
        H = blowup(H, sizes)
    text = format_hg(H)
    if a.output:
        write_hg(H, a.output)
        return {"command": "gen", "path": str(a.output), "n": H.n, "r": H.r, "edges": len(H)}, EXIT_OK, None
    return None, EXIT_OK, text


def cmd_check(a):
    H = read_hg(a.graph)
    pat = TrianglePattern.parse(a.pattern, H.r)
    w = find_triangle(H, pat)
    prof = degree_profile(H)
    part = find_r_partition(H)
    rec = {
        "command": "check",
        "graph": {"n": H.n, "r": H.r, "edges": len(H)},
        "pattern": pat.name,
        "free": w is None,
        "witness": None if w is None else [list(e) for e in w],
        "two_covered": is_2_covered(H),
        "partial_steiner": is_partial_steiner(H),
        "r_partite": part is not None,
        "degree": {"min": prof.min, "max": prof.max, "avg": prof.avg},
    }
    code = EXIT_VIOLATED if a.expect_free and w is not None else EXIT_OK
    return rec, code, None


def cmd_lagrangian(a):
    H = read_hg(a.graph)
    res = maximize(H, _maximize_config(a))
    rec = {
        "command": "lagrangian",
        "graph": {"n": H.n, "r": H.r, "edges": len(H)},
        "mode": res.mode,
        "value": res.value,
        "exact_value": res.exact_value,
        "support": list(res.support),
        "vector": _vector(res.maximizer),
        "kkt_residual": res.kkt_residual,
        "off_support_slack": res.off_support_slack,
        "tolerance": a.tol,
        "certified": res.certified,
        "faces_examined": res.faces_examined,
        "restarts": res.restarts_used,
        "seed": a.seed,
        "distinct_maximizers": len(res.maximizers),
        "structure": check_opt_structure(H, res).verdict,
    }
    return rec, EXIT_OK, None


def cmd_entropy(a):
    H = read_hg(a.graph)
    x = read_weights(a.weights, H.n)
    D = build_distribution(H, x)
    gaps = [entropy_gap(D, j) for j in range(1, H.r + 1)]
    rec = {
        "command": "entropy",
        "log_base": 2,
        "graph": {"n": H.n, "r": H.r, "edges": len(H)},
        "beta": D.beta,
        "log2_beta": math.log2(D.beta),
        "H_joint": entropy(D.atoms),
        "H_prefix": [entropy(marginal(D, j)) for j in range(1, H.r + 1)],
        "alpha": alphas(D),
        "gap_residual": [g.residual for g in gaps],
        "chain_rule_residual": max(chain_rule_residual(D, j) for j in range(1, H.r + 1)),
        "weights_gap_to_log2_beta": entropy(D.atoms) - H.r * entropy(marginal(D, 1)) - math.log2(D.beta),
    }
    if H.n <= EXACT_MAX_N and not a.skip_optimum:
        ident = optimal_entropy_identity(H, MaximizeConfig(seed=a.seed, threads=a.threads))
        rec["optimum_identity_residual"] = ident.residual
        rec["optimum_alpha"] = alphas(ident.distribution)
    else:
        rec["optimum_identity_residual"] = None
    return rec, EXIT_OK, None


def cmd_extremal(a):
    pat = TrianglePattern.parse(a.pattern, a.r)
    t0 = time.perf_counter()
    rep = ex.ex_search(a.n, a.r, pat, incomplete=a.incomplete, trials=a.trials, seed=a.seed)
    rec = {
        "command": "extremal",
        "n": a.n,
        "r": a.r,
        "pattern": pat.name,
        "complete": rep.complete,
        "max_edges": rep.max_edges,
        "witness_classes": len(rep.witnesses),
        "labelled_witnesses": rep.labelled_witnesses,
        "nodes_explored": rep.nodes_explored,
        "largest_visited": rep.max_visited,
        "witnesses": [[list(e) for e in W.edges] for W in rep.witnesses],
    }
    if a.timings:
        rec["wall_time_s"] = time.perf_counter() - t0
    if a.witnesses:
        out = Path(a.witnesses)
        out.mkdir(parents=True, exist_ok=True)
        for k, W in enumerate(rep.witnesses):
            write_hg(W, out / f"ex_{a.n}_{a.r}_{pat.name.replace(':', '-')}_{k}.hg")
    return rec, EXIT_OK, None


def cmd_symmetrize(a):
    H = read_hg(a.graph)
    s = ex.symmetrize_decompose(H)
    rec = {
        "command": "symmetrize",
        "graph": {"n": H.n, "r": H.r, "edges": len(H)},
        "classes": [list(c) for c in s.classes],
        "sizes": list(s.sizes),
        "pattern": s.pattern_graph,
        "symmetrized": s.is_symmetrized,
    }
    if a.pattern_out:
        write_hg(s.pattern_graph, a.pattern_out)
    return rec, EXIT_OK, None


def cmd_verify(a):
    results = vf.run_suite(a.suite)
    rows = []
    for r in results:
        row = {"id": r.cid, "title": r.title, "passed": r.passed, "hard": r.hard, "detail": r.detail}
        if a.timings:
            row["seconds"] = round(r.seconds, 3)
        rows.append(row)
    hard_fail = any(not r.passed for r in results if r.hard)
    if a.format == "text":
        lines = [f"suite: {a.suite}"] + [r.line() + ("" if r.hard else " [soft]") for r in results]
        lines.append(f"result: {'FAIL' if hard_fail else 'PASS'}")
        return None, EXIT_VIOLATED if hard_fail else EXIT_OK, "\n".join(lines) + "\n"
    rec = {"command": "verify", "suite": a.suite, "criteria": rows, "passed": not hard_fail}
    return rec, EXIT_VIOLATED if hard_fail else EXIT_OK, None


def cmd_survey(a):
    cfg = MaximizeConfig(mode="exact" if a.n_max <= EXACT_MAX_N else "heuristic", restarts=a.restarts,
                         seed=a.seed, threads=a.threads)
    rep = ex.l_intersect_lagrangian_survey(a.r, a.L, a.n_max, cfg)
    rec = {
        "command": "survey",
        "r": a.r,
        "L": list(rep.L),
        "n_max": a.n_max,
        "best": {n: v for n, v in rep.best.items()},
        "maximal_families": rep.families,
        "attains_1_over_r_pow_r": rep.attains_target,
        "certified": rep.certified,
        "witnesses": {n: [[list(e) for e in G.edges] for G in ws] for n, ws in rep.witnesses.items()},
    }
    return rec, EXIT_OK, None


# --- parser ----------------------------------------------------------------------

def build_parser() -> argparse.ArgumentParser:
    common = argparse.ArgumentParser(add_help=False)
    common.add_argument("--format", choices=("text", "json"), default="text")
    common.add_argument("--seed", type=int, default=0)
    common.add_argument("--threads", type=_positive(int), default=None,
                        help=f"worker threads (default from ${THREADS_ENV}, else 1)")
    common.add_argument("--timings", action="store_true", help="include wall-clock times (breaks byte-identical output)")
    common.add_argument("-v", "--verbose", action="store_true")

    p = argparse.ArgumentParser(prog="hyperturan", description="Hypergraph Turán workbench.")
    sub = p.add_subparsers(dest="command", required=True)

    g = sub.add_parser("gen", parents=[common], help="generate a hypergraph in .hg format")
    src = g.add_mutually_exclusive_group(required=True)
    src.add_argument("--turan", nargs=2, type=int, metavar=("N", "R"))
    src.add_argument("--complete", nargs=2, type=int, metavar=("N", "R"))
    src.add_argument("--triangle", nargs=2, type=int, metavar=("R", "I"))
    src.add_argument("--fano", action="store_true")
    src.add_argument("--affine9", action="store_true")
    src.add_argument("--blowup", metavar="FILE")
    g.add_argument("--sizes", type=_int_list, help="class sizes for --blowup")
    g.add_argument("-o", "--output")
    g.set_defaults(func=cmd_gen)

    c = sub.add_parser("check", parents=[common], help="scan for a forbidden triangle pattern")
    c.add_argument("graph")
    c.add_argument("--pattern", required=True, help="delta | cfam | tfam | weak | t:<r>:<i>")
    c.add_argument("--expect-free", action="store_true")
    c.set_defaults(func=cmd_check)

    lg = sub.add_parser("lagrangian", parents=[common], help="maximise the Lagrangian polynomial")
    lg.add_argument("graph")
    lg.add_argument("--mode", choices=("exact", "heuristic"), default="exact")
    lg.add_argument("--restarts", type=_positive(int), default=8)
    lg.add_argument("--tol", type=_positive(float), default=1e-9)
    lg.set_defaults(func=cmd_lagrangian)

    en = sub.add_parser("entropy", parents=[common], help="entropy identities for given weights")
    en.add_argument("graph")
    en.add_argument("weights")
    en.add_argument("--skip-optimum", action="store_true", help="do not solve for the optimum")
    en.set_defaults(func=cmd_entropy)

    e = sub.add_parser("extremal", parents=[common], help="exhaustive extremal search")
    e.add_argument("--n", type=_positive(int), required=True)
    e.add_argument("--r", type=_positive(int), required=True)
    e.add_argument("--pattern", required=True)
    e.add_argument("--incomplete", action="store_true", help="greedy lower bound beyond the guard")
    e.add_argument("--trials", type=_positive(int), default=2000)
    e.add_argument("--witnesses", metavar="DIR")
    e.set_defaults(func=cmd_extremal)

    s = sub.add_parser("symmetrize", parents=[common], help="twin-class decomposition")
    s.add_argument("graph")
    s.add_argument("--pattern-out")
    s.set_defaults(func=cmd_symmetrize)

    v = sub.add_parser("verify", parents=[common], help="run the acceptance battery")
    v.add_argument("--suite", choices=vf.SUITES, default="quick")
    v.set_defaults(func=cmd_verify)

    sv = sub.add_parser("survey", parents=[common], help="Lagrangians of L-intersecting graphs")
    sv.add_argument("--r", type=_positive(int), required=True)
    sv.add_argument("--L", type=_int_list, required=True, help="allowed intersection sizes, e.g. 0,1")
    sv.add_argument("--n-max", type=_positive(int), required=True)
    sv.add_argument("--restarts", type=_positive(int), default=4)
    sv.set_defaults(func=cmd_survey)
    return p


def main(argv: Sequence[str] | None = None) -> int:
    parser = build_parser()
    try:
        a = parser.parse_args(argv)
    except SystemExit as exc:  # argparse exits 2 on usage errors, 0 on --help
        return int(exc.code or 0)
    logging.basicConfig(level=logging.INFO if a.verbose else logging.WARNING, stream=sys.stderr,
                        format="%(levelname)s %(name)s: %(message)s")
    try:
        if a.threads is None:
            a.threads = _default_threads()
        rec, code, raw = a.func(a)
    except ScaleGuardError as exc:
        print(f"error: scale guard: {exc}", file=sys.stderr)
        return EXIT_GUARD
    except (UsageError, HypergraphError, EntropyError, OSError) as exc:
        print(f"error: {exc}", file=sys.stderr)
        return EXIT_USAGE
    if raw is not None:
        sys.stdout.write(raw)
    if rec is not None:
        sys.stdout.write(render(rec, a.format))
    return code


if __name__ == "__main__":  # pragma: no cover
    sys.exit(main())
