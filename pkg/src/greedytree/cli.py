"""Command-line front end.

Exit codes: 0 success, 1 usage error, 2 computation error, 3 a hard check
failed (a proven inequality or a reproduced figure claim).
"""

from __future__ import annotations

import argparse
import json
import os
import sys
from dataclasses import dataclass
from pathlib import Path

import numpy as np

from . import experiments as ex
from .bounds import bounds_for
from .degseq import parse_sequence
from .errors import GreedyTreeError, NotGraphicTree, TooSmall
from .metrics import terminal_wiener, tvwwi, vwwi, wiener
from .spectral import (
    DEFAULT_MAX_ITER,
    DEFAULT_TOL,
    dsr,
    rd_ab_matrix,
    spectral_radius,
    tdsr,
    tdsr_ab_closed,
    terr_ab,
    tlb_ab_closed,
)
from .tree import (
    DEFAULT_BUDGET,
    GeneratingTuple,
    WeightedTree,
    build_bfs_tree,
    build_huffman,
    from_edgelist,
    to_dot,
    to_edgelist,
)

OUTPUT_ENV = "GREEDYTREE_OUTPUT_DIR"
TERR_CEILING = 0.03
ERR_CEILING = 0.06


class UsageError(Exception):
    pass


class HardCheckFailed(Exception):
    pass


@dataclass(frozen=True)
class RunConfig:
    tolerance: float = DEFAULT_TOL
    max_iter: int = DEFAULT_MAX_ITER
    budget: int = DEFAULT_BUDGET
    rng_seed: int = 42
    output_dir: Path = Path(".")
    workers: int = 1

    def __post_init__(self):
        if self.tolerance <= 0:
            raise UsageError("--tol must be positive")
        if self.max_iter < 1:
            raise UsageError("--max-iter must be >= 1")
        if self.budget < 1:
            raise UsageError("--budget must be >= 1")
        if self.workers < 1:
            raise UsageError("--workers must be >= 1")

    def path(self, name: str) -> Path:
        p = Path(name)
        return p if p.is_absolute() else self.output_dir / p


class _Parser(argparse.ArgumentParser):
    def error(self, message):
        raise UsageError(f"{self.prog}: {message}")


def _g(x: float) -> str:
    return f"{x:.12g}"


def _floats(text: str) -> list[float]:
    try:
        return [float(t) for t in text.split(",") if t.strip()]
    except ValueError:
        raise UsageError(f"cannot parse weights {text!r}") from None


def _write(cfg: RunConfig, name: str, text: str) -> Path:
    p = cfg.path(name)
    p.parent.mkdir(parents=True, exist_ok=True)
    p.write_text(text)
    return p


def _tree_arg(args):
    if args.tree:
        return from_edgelist(Path(args.tree).read_text())
    if not args.seq:
        raise UsageError("give a degree sequence or --tree FILE")
    return build_bfs_tree(parse_sequence(args.seq))


def _weights_for(tree, text: str | None):
    if text is None:
        return WeightedTree.unit(tree)
    w = _floats(text)
    if len(w) == tree.order:
        return WeightedTree(tree, tuple(w))
    if len(w) == len(tree.leaves):
        full = [0.0] * tree.order
        for v, x in zip(tree.leaves, w):
            full[v] = x
        return WeightedTree(tree, tuple(full))
    raise UsageError(f"{len(w)} weights: need {tree.order} (all vertices) or {len(tree.leaves)} (leaves)")


# --- subcommands -----------------------------------------------------------


def cmd_validate(args, cfg):
    s = parse_sequence(args.seq)
    print(f"sequence {s}")
    print(f"N {s.order}")
    print(f"n {s.leaf_count}")


def cmd_bfs(args, cfg):
    t = build_bfs_tree(parse_sequence(args.seq))
    sys.stdout.write(to_edgelist(t))
    if args.dot:
        _write(cfg, args.dot, to_dot(t, "BFS"))


def cmd_huffman(args, cfg):
    s = parse_sequence(args.seq)
    w = _floats(args.weights)
    if len(w) == s.order:
        gt = GeneratingTuple(s, tuple(w))
    elif len(w) == s.leaf_count:
        gt = GeneratingTuple.from_leaf_weights(s, w)
    else:
        raise UsageError(f"{len(w)} weights: need {s.order} or {s.leaf_count}")
    h = build_huffman(gt)
    sys.stdout.write(to_edgelist(h.tree))
    if args.dot:
        _write(cfg, args.dot, to_dot(h, "Huffman"))


def cmd_indices(args, cfg):
    t = _tree_arg(args)
    wt = _weights_for(t, args.weights)
    print(f"WI {wiener(t)}")
    print(f"TWI {terminal_wiener(t)}")
    v, tv = vwwi(wt), tvwwi(wt)
    print(f"VWWI {v if isinstance(v, int) else _g(v)}")
    print(f"TVWWI {tv if isinstance(tv, int) else _g(tv)}")


def cmd_spectral(args, cfg):
    t = _tree_arg(args)
    fn = tdsr if args.terminal else dsr
    r = fn(t, cfg.tolerance, cfg.max_iter)
    print(f"radius {_g(r.radius)}")
    print("perron " + ",".join(_g(x) for x in r.perron))
    print(f"iterations {r.iterations}")
    print(f"residual {r.residual:.3e}")


def cmd_bounds(args, cfg):
    rep = bounds_for(parse_sequence(args.seq), cfg.tolerance, cfg.max_iter)
    print(json.dumps(rep.to_dict(), indent=2))


def cmd_closed_ab(args, cfg):
    a, b = args.a, args.b
    if a < 1 or b < 1:
        raise UsageError("A and B must be >= 1")
    closed = tdsr_ab_closed(a, b)
    numeric = spectral_radius(rd_ab_matrix(a, b), cfg.tolerance, cfg.max_iter)
    tree_rep = bounds_for(parse_sequence(f"1^{a + b},2^{a},{a + b}"), cfg.tolerance, cfg.max_iter)
    print(f"a {a} b {b}")
    print(f"TUB closed {_g(closed)}")
    print(f"TUB block-matrix {_g(numeric.radius)}")
    print(f"TUB greedy-tree {_g(tree_rep.tub)}")
    print(f"TLB closed {_g(tlb_ab_closed(a, b))}")
    print(f"TLB greedy-tree {_g(tree_rep.tlb)}")
    print(f"TErr closed {_g(terr_ab(a, b))}")
    print(f"TErr greedy-tree {_g(tree_rep.terr)}")
    print(f"max deviation {abs(closed - tree_rep.tub):.3e}")


def cmd_scan(args, cfg):
    if args.metric == "terr":
        recs = ex.scan_terr(args.max_n, cfg.tolerance, cfg.max_iter, cfg.workers)
        summary = ex.envelope_summary(recs, "ab")
        hard = summary["max"] <= TERR_CEILING and summary["all_attained"]
        summary["ceiling"] = TERR_CEILING
    else:
        recs = ex.scan_err(args.max_n, cfg.tolerance, cfg.max_iter, cfg.workers)
        summary = ex.envelope_summary(recs, "starlike")
        hard = summary["all_attained"]
        summary["ceiling"] = ERR_CEILING
        summary["exceeds_ceiling"] = summary["max"] > ERR_CEILING
        if summary["exceeds_ceiling"]:
            print(f"warning: max Err {summary['max']:.6f} exceeds {ERR_CEILING}", file=sys.stderr)
    summary["records"] = len(recs)
    _write(cfg, args.csv, ex.records_to_csv(recs))
    if args.svg:
        title = "TErr vs N" if args.metric == "terr" else "Err vs N"
        _write(cfg, args.svg, ex.records_to_svg(recs, summary["family"], title))
    print(json.dumps(summary, indent=2))
    if not hard:
        raise HardCheckFailed(f"scan {args.metric}: envelope or ceiling check failed")


def cmd_verify(args, cfg):
    if args.max_n is not None:
        from .degseq import enumerate_tree_sequences

        seqs = [s for n in range(2, args.max_n + 1) for s in enumerate_tree_sequences(n)]
    elif args.seq:
        seqs = [parse_sequence(args.seq)]
    else:
        raise UsageError("give a degree sequence or --max-n N")
    counter = []
    for s in seqs:
        try:
            rep = ex.verify_conjectures(s, cfg.budget, cfg.tolerance, cfg.max_iter)
        except ex.TheoremViolation as exc:
            raise HardCheckFailed(str(exc)) from exc
        print(json.dumps(rep.to_dict(), sort_keys=True))
        if not (rep.conjecture1_holds and rep.conjecture2_holds):
            counter.append(rep.to_dict())
    if counter:
        p = _write(cfg, "counterexamples.json", json.dumps(counter, indent=2, sort_keys=True))
        print(f"{len(counter)} counterexample(s) written to {p}", file=sys.stderr)


def cmd_probe(args, cfg):
    s = parse_sequence(args.seq)
    k = args.samples
    if args.kind == "lemma1":
        rep = ex.probe_lemma1(s, k, cfg.rng_seed, cfg.budget, cfg.tolerance, cfg.max_iter)
    elif args.kind == "theorem2":
        rep = ex.probe_theorem2(s, k, cfg.rng_seed, cfg.budget)
    elif args.kind == "theorem5":
        rep = ex.probe_theorem5(s, k, cfg.rng_seed, cfg.budget)
    else:
        rep = ex.probe_perturbation(s, cfg.rng_seed, k)
    print(rep.to_json())
    if not rep.ok:
        raise HardCheckFailed(f"probe {args.kind}: {len(rep.violations)} violation(s)")


def build_parser() -> argparse.ArgumentParser:
    p = _Parser(prog="greedytree", description="Greedy-tree bounds on (terminal) distance spectral radius.")
    p.add_argument("--tol", type=float, default=DEFAULT_TOL, help="relative residual tolerance")
    p.add_argument("--max-iter", type=int, default=DEFAULT_MAX_ITER)
    p.add_argument("--budget", type=int, default=DEFAULT_BUDGET, help="max labeled trees to decode")
    p.add_argument("--seed", type=int, default=42)
    p.add_argument("--output-dir", default=os.environ.get(OUTPUT_ENV, "."))
    p.add_argument("--workers", type=int, default=os.cpu_count() or 1)
    sub = p.add_subparsers(dest="command", required=True, parser_class=_Parser)

    c = sub.add_parser("validate", help="normalize and check a degree sequence")
    c.add_argument("seq")
    c.set_defaults(fn=cmd_validate)

    c = sub.add_parser("bfs", help="greedy (BFS) tree of a sequence")
    c.add_argument("seq")
    c.add_argument("--dot")
    c.set_defaults(fn=cmd_bfs)

    c = sub.add_parser("huffman", help="generalized Huffman tree")
    c.add_argument("seq")
    c.add_argument("--weights", required=True, help="N per-vertex weights or n leaf weights")
    c.add_argument("--dot")
    c.set_defaults(fn=cmd_huffman)

    for name, fn, help_ in (
        ("indices", cmd_indices, "WI, TWI, VWWI, TVWWI"),
        ("spectral", cmd_spectral, "distance spectral radius"),
    ):
        c = sub.add_parser(name, help=help_)
        c.add_argument("seq", nargs="?")
        c.add_argument("--tree", help="edge-list file instead of a sequence")
        if name == "indices":
            c.add_argument("--weights")
        else:
            c.add_argument("--terminal", action="store_true")
        c.set_defaults(fn=fn)

    c = sub.add_parser("bounds", help="LB/UB/TLB/TUB report as JSON")
    c.add_argument("seq")
    c.set_defaults(fn=cmd_bounds)

    c = sub.add_parser("closed-ab", help="closed forms for d(a,b) with numeric cross-check")
    c.add_argument("a", type=int)
    c.add_argument("b", type=int)
    c.set_defaults(fn=cmd_closed_ab)

    c = sub.add_parser("scan", help="error scan over all sequences (figure data)")
    c.add_argument("metric", choices=["terr", "err"])
    c.add_argument("--max-n", type=int, required=True)
    c.add_argument("--csv", required=True)
    c.add_argument("--svg")
    c.set_defaults(fn=cmd_scan)

    c = sub.add_parser("verify", help="exhaustive conjecture check")
    c.add_argument("seq", nargs="?")
    c.add_argument("--max-n", type=int)
    c.set_defaults(fn=cmd_verify)

    c = sub.add_parser("probe", help="randomized inequality probes")
    c.add_argument("kind", choices=["lemma1", "theorem2", "perturbation", "theorem5"])
    c.add_argument("seq")
    c.add_argument("--samples", type=int, default=100)
    c.set_defaults(fn=cmd_probe)
    return p


def run(argv: list[str] | None = None) -> int:
    try:
        args = build_parser().parse_args(argv)
        cfg = RunConfig(
            tolerance=args.tol,
            max_iter=args.max_iter,
            budget=args.budget,
            rng_seed=args.seed,
            output_dir=Path(args.output_dir),
            workers=args.workers,
        )
        args.fn(args, cfg)
    except (UsageError, NotGraphicTree, TooSmall) as exc:
        print(f"error: {type(exc).__name__}: {exc}", file=sys.stderr)
        return 1
    except HardCheckFailed as exc:
        print(f"check failed: {exc}", file=sys.stderr)
        return 3
    except (GreedyTreeError, ValueError, OSError) as exc:
        print(f"error: {type(exc).__name__}: {exc}", file=sys.stderr)
        return 2
    except SystemExit as exc:
        # --help
        return int(exc.code or 0)
    return 0


def main() -> None:
    np.set_printoptions(precision=12)
    sys.exit(run())
