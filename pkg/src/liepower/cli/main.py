"""``liepower`` command-line entry point."""

from __future__ import annotations

import argparse
import json
import random
import sys
import time
from concurrent.futures import ThreadPoolExecutor
from dataclasses import dataclass
from typing import Callable

from .. import cecomplex, connectivity
from ..exactlinalg import ExactMatrix, RingSpec
from ..functors import LiePower, UnsupportedRing, apply_on_morphism, lyndon_words, standard_bracketing, witt_dimension
from ..functors.words import format_bracketing, format_word
from ..simplicial import ResourceCap, TruncationTooShallow, apply_functor, eilenberg_maclane, homotopy_groups
from .parser import ParseError, parse_functor_expr

SCHEMA = 1
EXIT_OK, EXIT_VIOLATED, EXIT_USAGE = 0, 1, 2
SLOW_SHARPNESS_N = 3


class UsageError(ValueError):
    pass


@dataclass
class RunConfig:
    ring: RingSpec
    truncation: int | None
    max_dim: int | None
    threads: int
    fmt: str
    seed: int
    deterministic: bool

    def __post_init__(self):
        if self.max_dim is not None and self.max_dim < 1:
            raise UsageError("--max-dim must be positive")
        if self.threads < 1:
            raise UsageError("--threads must be positive")
        if self.truncation is not None and self.truncation < 0:
            raise UsageError("--truncation must be nonnegative")


@dataclass
class Outcome:
    inputs: dict
    results: object
    verdict: str
    truncation: int | None = None
    rows: list[dict] | None = None  # flat form for tsv


def int_range(text: str) -> list[int]:
    """``"3"``, ``"2-5"`` or ``"1,3,4-6"``."""
    out: list[int] = []
    try:
        for part in text.split(","):
            if "-" in part[1:]:
                a, b = part.split("-", 1)
                out.extend(range(int(a), int(b) + 1))
            else:
                out.append(int(part))
    except ValueError:
        raise argparse.ArgumentTypeError(f"not an integer range: {text!r}") from None
    return out


def ring_list(text: str) -> list[RingSpec]:
    try:
        return [RingSpec.parse(t) for t in text.split(",")]
    except ValueError as exc:
        raise argparse.ArgumentTypeError(str(exc)) from None


def run_cells(fn: Callable, cells: list, threads: int) -> list:
    """Evaluate independent cells, returning results in input order."""
    if threads <= 1 or len(cells) <= 1:
        return [fn(c) for c in cells]
    with ThreadPoolExecutor(max_workers=threads) as pool:
        return list(pool.map(fn, cells))


def combine_verdicts(verdicts: list[str]) -> str:
    if connectivity.VIOLATED in verdicts:
        return connectivity.VIOLATED
    if connectivity.INCONCLUSIVE in verdicts:
        return connectivity.INCONCLUSIVE
    return connectivity.VERIFIED


# commands


def cmd_witt(args, cfg: RunConfig) -> Outcome:
    dim = witt_dimension(args.rank, args.degree)
    return Outcome({"rank": args.rank, "degree": args.degree}, {"dimension": dim}, "Computed", rows=[{"dimension": dim}])


def cmd_lyndon(args, cfg: RunConfig) -> Outcome:
    words = lyndon_words(args.rank, args.degree)
    rows = [{"word": format_word(w), "bracketing": format_bracketing(standard_bracketing(w))} for w in words]
    return Outcome({"rank": args.rank, "degree": args.degree}, {"count": len(words), "basis": rows}, "Computed", rows=rows)


def cmd_ce(args, cfg: RunConfig) -> Outcome:
    cells = [(n, d) for n in args.n for d in args.rank]

    def one(cell):
        n, d = cell
        hom = cecomplex.ce_homology(n, d, cfg.ring)
        dims = {str(i): cecomplex.ce_dimension(n, i, d) for i in range(1, n + 1)}
        acyclic = all(g.is_trivial for g in hom.values())
        return {"n": n, "rank": d, "dims": dims, "homology": {str(i): g.to_json() for i, g in hom.items()}, "acyclic": acyclic}

    res = run_cells(one, cells, cfg.threads)
    verdict = connectivity.VERIFIED if all(r["acyclic"] for r in res) else connectivity.VIOLATED
    rows = [{"n": r["n"], "rank": r["rank"], "acyclic": r["acyclic"]} for r in res]
    return Outcome({"n": args.n, "rank": args.rank}, res, verdict, rows=rows)


def cmd_pi(args, cfg: RunConfig) -> Outcome:
    F = parse_functor_expr(args.functor)
    N = cfg.truncation if cfg.truncation is not None else args.max_i + 1
    cap = cfg.max_dim if cfg.max_dim is not None else connectivity.default_max_dim(cfg.ring)
    X = apply_functor(F, eilenberg_maclane(cfg.ring, args.em, N), max_dim=cap)
    groups = homotopy_groups(X, args.max_i)
    res = {"functor": str(F), "dims": X.dims(), "pi": {str(i): g.to_json() for i, g in enumerate(groups)}}
    rows = [{"i": i, "pi": str(g), "free_rank": g.free_rank, "torsion": " ".join(map(str, g.torsion))} for i, g in enumerate(groups)]
    return Outcome({"functor": args.functor, "em": args.em, "max_i": args.max_i}, res, "Computed", N, rows)


def cmd_verify(args, cfg: RunConfig, rings: list[RingSpec]) -> Outcome:
    cells = [(ring, n, k) for ring in rings for n in args.n for k in args.k]
    fn = connectivity.verify_lie_connectivity if args.family == "lie" else connectivity.verify_exterior_connectivity

    def one(cell):
        ring, n, k = cell
        return fn(n, k, ring, truncation=cfg.truncation, max_dim=cfg.max_dim)

    reports = run_cells(one, cells, cfg.threads)
    res = [r.to_json() for r in reports]
    rows = [
        {"family": args.family, "n": r.functor.degree, "k": r.k, "ring": r.ring.name, "bound": r.bound, "truncation": r.truncation,
         "verdict": r.verdict, "violated_degree": r.violated_degree}
        for r in reports
    ]
    trunc = reports[0].truncation if len(reports) == 1 else cfg.truncation
    inputs = {"family": args.family, "n": args.n, "k": args.k, "rings": [r.name for r in rings]}
    return Outcome(inputs, res, combine_verdicts([r.verdict for r in reports]), trunc, rows)


def cmd_sharpness(args, cfg: RunConfig, rings: list[RingSpec]) -> Outcome:
    cells = [(ring, n, k) for ring in rings for n in args.n for k in args.k]
    slow = [c for c in cells if c[1] >= SLOW_SHARPNESS_N]
    if slow and not args.slow:
        raise UsageError(f"cells with n >= {SLOW_SHARPNESS_N} are slow; pass --slow to run them")

    def one(cell):
        ring, n, k = cell
        return connectivity.sharpness_witness(n, k, ring, truncation=cfg.truncation, max_dim=cfg.max_dim)

    reports = run_cells(one, cells, cfg.threads)
    rows = [
        {"n": r.n, "k": r.k, "ring": r.ring.name, "degree": r.degree, "pi": "" if r.group is None else str(r.group),
         "cycle": r.is_cycle, "boundary": r.is_boundary, "verdict": r.verdict}
        for r in reports
    ]
    trunc = reports[0].truncation if len(reports) == 1 else cfg.truncation
    inputs = {"n": args.n, "k": args.k, "rings": [r.name for r in rings]}
    return Outcome(inputs, [r.to_json() for r in reports], combine_verdicts([r.verdict for r in reports]), trunc, rows)


def cmd_lambda_basis(args, cfg: RunConfig) -> Outcome:
    mons = connectivity.lambda_basis(args.i, args.n, args.bound, min_index=args.min_index)
    rows = [{"monomial": str(m), "indices": list(m.indices)} for m in mons]
    inputs = {"i": args.i, "n": args.n, "bound": args.bound, "min_index": args.min_index}
    return Outcome(inputs, {"count": len(mons), "monomials": rows}, "Computed", rows=rows)


def cmd_restricted(args, cfg: RunConfig) -> Outcome:
    if cfg.ring.characteristic != 2:
        raise UnsupportedRing("restricted Lie powers are only defined over F2")
    rep = connectivity.verify_restricted_iso(
        args.n, args.k, args.i, truncation=cfg.truncation, max_dim=cfg.max_dim, convention=args.convention
    )
    rows = [{"i": r.i, "degree": r.degree, "pi_dim": r.computed_dim, "lambda_count": r.lambda_count, "match": r.match} for r in rep.rows]
    inputs = {"n": args.n, "k": args.k, "i": args.i, "convention": args.convention}
    return Outcome(inputs, rep.to_json(), rep.verdict, rep.truncation, rows)


def cmd_selftest(args, cfg: RunConfig) -> Outcome:
    """Fast consistency checks: CE acyclicity, small connectivity cells, random functoriality."""
    rng = random.Random(cfg.seed)
    checks: list[tuple[str, bool]] = []
    for n in range(2, 5):
        hom = cecomplex.ce_homology(n, 2, cfg.ring)
        checks.append((f"ce n={n} d=2 acyclic", all(g.is_trivial for g in hom.values())))
    for n in (2, 3, 4):
        r = connectivity.verify_lie_connectivity(n, 0, cfg.ring, max_dim=cfg.max_dim)
        checks.append((f"L^{n} k=0 connectivity", r.verdict == connectivity.VERIFIED))
    for trial in range(3):
        a, b, c = (rng.randint(1, 3) for _ in range(3))
        f = _random_matrix(rng, cfg.ring, b, a)
        g = _random_matrix(rng, cfg.ring, c, b)
        F = LiePower(rng.randint(2, 4))
        ok = apply_on_morphism(F, g @ f) == apply_on_morphism(F, g) @ apply_on_morphism(F, f)
        checks.append((f"functoriality {F} trial {trial}", ok))
    rows = [{"check": name, "ok": ok} for name, ok in checks]
    verdict = connectivity.VERIFIED if all(ok for _, ok in checks) else connectivity.VIOLATED
    return Outcome({"seed": cfg.seed}, rows, verdict, rows=rows)


def _random_matrix(rng: random.Random, ring: RingSpec, rows: int, cols: int) -> ExactMatrix:
    hi = 3 if ring.characteristic == 0 else ring.characteristic - 1
    return ExactMatrix.from_dense(ring, [[rng.randint(-hi, hi) for _ in range(cols)] for _ in range(rows)])


# output


def render(doc: dict, outcome: Outcome, fmt: str) -> str:
    if fmt == "json":
        return json.dumps(doc, indent=2, ensure_ascii=False)
    rows = outcome.rows or []
    if fmt == "tsv":
        if not rows:
            return ""
        keys = list(rows[0])
        lines = ["\t".join(keys)]
        lines += ["\t".join("" if r.get(k) is None else str(r.get(k)) for k in keys) for r in rows]
        return "\n".join(lines)
    head = f"{doc['command']}  ring={doc['ring']}  truncation={doc['truncation']}  verdict={doc['verdict']}"
    body = ["  " + "  ".join(f"{k}={v}" for k, v in r.items()) for r in rows]
    return "\n".join([head, *body])


def exit_code(verdict: str) -> int:
    if verdict in (connectivity.VERIFIED, "Computed"):
        return EXIT_OK
    if verdict == connectivity.VIOLATED:
        return EXIT_VIOLATED
    return EXIT_USAGE


def build_parser() -> argparse.ArgumentParser:
    common = argparse.ArgumentParser(add_help=False)
    common.add_argument("--ring", default="z", help="z, f2, f3 or fp:<p> (comma list allowed for grids)")
    common.add_argument("--truncation", type=int, default=None, help="simplicial truncation (default: minimal sound value)")
    common.add_argument("--max-dim", type=int, default=None, help="largest component rank to build")
    common.add_argument("--threads", type=int, default=1)
    common.add_argument("--format", choices=("json", "tsv", "pretty"), default="json")
    common.add_argument("--seed", type=int, default=0)
    common.add_argument("--deterministic", action="store_true", help="report wall_time_ms as 0 for byte-stable output")

    p = argparse.ArgumentParser(prog="liepower", description="Lie powers, CE complexes and connectivity checks")
    sub = p.add_subparsers(dest="command", required=True)

    s = sub.add_parser("witt", parents=[common], help="dimension of L^n(R^d)")
    s.add_argument("--rank", type=int, required=True)
    s.add_argument("--degree", type=int, required=True)

    s = sub.add_parser("lyndon", parents=[common], help="Lyndon words and standard bracketings")
    s.add_argument("--rank", type=int, required=True)
    s.add_argument("--degree", type=int, required=True)

    s = sub.add_parser("ce", parents=[common], help="homology of the weight-n CE complex")
    s.add_argument("--n", type=int_range, required=True)
    s.add_argument("--rank", type=int_range, required=True)

    s = sub.add_parser("pi", parents=[common], help="homotopy groups of F(K(R,m))")
    s.add_argument("--functor", required=True)
    s.add_argument("--em", type=int, required=True, help="m in K(R,m)")
    s.add_argument("--max-i", type=int, required=True)

    s = sub.add_parser("verify-connectivity", parents=[common], help="check the connectivity bound on K(R,k+1)")
    s.add_argument("--family", choices=("lie", "exterior"), default="lie")
    s.add_argument("--n", type=int_range, required=True)
    s.add_argument("--k", type=int_range, required=True)

    s = sub.add_parser("sharpness", parents=[common], help="build and certify the iterated [s0 x, s1 x] witness")
    s.add_argument("--n", type=int_range, required=True)
    s.add_argument("--k", type=int_range, required=True)
    s.add_argument("--slow", action="store_true", help=f"allow cells with n >= {SLOW_SHARPNESS_N}")

    s = sub.add_parser("lambda-basis", parents=[common], help="enumerate admissible lambda monomials")
    s.add_argument("--i", type=int, required=True)
    s.add_argument("--n", type=int, required=True)
    s.add_argument("--bound", type=int, required=True)
    s.add_argument("--min-index", type=int, choices=(0, 1), default=1)

    s = sub.add_parser("restricted-check", parents=[common], help="compare restricted Lie power homotopy with lambda counts")
    s.add_argument("--n", type=int, required=True)
    s.add_argument("--k", type=int, required=True)
    s.add_argument("--i", type=int_range, required=True)
    s.add_argument("--convention", choices=connectivity.LAMBDA_CONVENTIONS, default="printed")

    sub.add_parser("selftest", parents=[common], help="quick internal consistency checks")
    return p


def main(argv: list[str] | None = None) -> int:
    parser = build_parser()
    try:
        args = parser.parse_args(argv)
    except SystemExit as exc:
        return EXIT_OK if exc.code == 0 else EXIT_USAGE
    start = time.perf_counter()
    try:
        rings = ring_list(args.ring)
        cfg = RunConfig(rings[0], args.truncation, args.max_dim, args.threads, args.format, args.seed, args.deterministic)
        if len(rings) > 1 and args.command not in ("verify-connectivity", "sharpness"):
            raise UsageError(f"{args.command} takes a single ring")
        handlers = {
            "witt": cmd_witt,
            "lyndon": cmd_lyndon,
            "ce": cmd_ce,
            "pi": cmd_pi,
            "lambda-basis": cmd_lambda_basis,
            "restricted-check": cmd_restricted,
            "selftest": cmd_selftest,
        }
        if args.command == "verify-connectivity":
            outcome = cmd_verify(args, cfg, rings)
        elif args.command == "sharpness":
            outcome = cmd_sharpness(args, cfg, rings)
        else:
            outcome = handlers[args.command](args, cfg)
    except (UsageError, ParseError, UnsupportedRing, TruncationTooShallow, ResourceCap, argparse.ArgumentTypeError, ValueError) as exc:
        print(f"liepower {args.command}: {exc}", file=sys.stderr)
        return EXIT_USAGE
    elapsed = 0 if args.deterministic else round((time.perf_counter() - start) * 1000)
    doc = {
        "schema": SCHEMA,
        "command": args.command,
        "inputs": outcome.inputs,
        "ring": ",".join(r.name for r in rings),
        "truncation": outcome.truncation if outcome.truncation is not None else args.truncation,
        "results": outcome.results,
        "verdict": outcome.verdict,
        "wall_time_ms": elapsed,
    }
    text = render(doc, outcome, args.format)
    if text:
        sys.stdout.write(text + "\n")
    return exit_code(outcome.verdict)
