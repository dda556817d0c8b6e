"""Command-line entry point.

Exit status: 0 on success, 1 on bad input, 2 when a size guard refuses the job.
"""

from __future__ import annotations

import argparse
import logging
import random
import sys
from dataclasses import dataclass
from pathlib import Path
from typing import Optional, Sequence

from .core import GuardError, InputError, TwoStructure, UnsupportedError
from .decomposition import canonical_form, canonical_text, decompose, group_others
from .formats import (
    parse_graph_file,
    parse_implications,
    read_relational,
    read_transactional,
    render_dot,
    render_graph_file,
    render_implications,
    render_lattice_report,
    render_tree_text,
)
from .gaifman import (
    apply_lower_threshold,
    build_exponential,
    build_linear,
    build_standard,
    build_thresholded,
    count_cooccurrences,
    filter_items,
)
from .implications import ImplicationSet, enumerate_closed_sets, generate_implications
from .oracle import MAX_ORACLE_VERTICES, brute_force_tree
from .reconstruction import ReconstructionError, reconstruct

log = logging.getLogger("gaifman_clans")

EXIT_OK, EXIT_INPUT, EXIT_GUARD = 0, 1, 2
KINDS = ("relational", "transactional", "graph", "implications")
VARIANTS = ("standard", "threshold", "linear", "exp")
SUFFIX_KINDS = {".csv": "relational", ".txt": "transactional", ".basket": "transactional",
                ".graph": "graph", ".g": "graph", ".imp": "implications"}


@dataclass
class RunConfig:
    input: Path
    kind: str
    variant: str = "standard"
    threshold: Optional[int] = None
    interval: Optional[int] = None
    lower_threshold: Optional[int] = None
    min_count: Optional[int] = None
    top_items: Optional[int] = None
    others_min: Optional[int] = None
    order_seed: Optional[int] = None
    keep_empty: bool = False

    def __post_init__(self):
        if self.kind not in KINDS:
            raise InputError(f"unknown input kind {self.kind!r}")
        if self.variant not in VARIANTS:
            raise InputError(f"unknown variant {self.variant!r}")
        if self.variant == "threshold" and self.threshold is None:
            raise InputError("--variant threshold needs --threshold")
        if self.variant == "linear" and self.interval is None:
            raise InputError("--variant linear needs --interval")
        for name in ("threshold", "interval", "lower_threshold", "min_count", "top_items"):
            value = getattr(self, name)
            if value is not None and value < 1:
                raise InputError(f"--{name.replace('_', '-')} must be positive")
        if self.others_min is not None and self.others_min < 2:
            raise InputError("--others-min must be at least 2")
        if self.min_count is not None and self.top_items is not None:
            raise InputError("use either --min-count or --top-items, not both")


def load_structure(cfg: RunConfig) -> TwoStructure:
    """Graph file as is; datasets go through filtering, counting and the chosen variant."""
    text = cfg.input.read_text(encoding="utf-8")
    if cfg.kind == "graph":
        return parse_graph_file(text)
    if cfg.kind == "implications":
        raise InputError("implication files do not define a structure; use 'reconstruct'")
    data = read_relational(text, cfg.keep_empty) if cfg.kind == "relational" else read_transactional(text)
    if cfg.min_count is not None or cfg.top_items is not None:
        data = filter_items(data, min_count=cfg.min_count, top_n=cfg.top_items)
    counts = count_cooccurrences(data)
    log.info("%d transactions over %d items", len(data), len(data.universe))
    if cfg.lower_threshold is not None:
        counts = apply_lower_threshold(counts, cfg.lower_threshold)
    if cfg.variant == "threshold":
        return build_thresholded(counts, cfg.threshold)
    if cfg.variant == "linear":
        return build_linear(counts, cfg.interval)
    if cfg.variant == "exp":
        return build_exponential(counts)
    return build_standard(counts)


def insertion_order(n: int, seed: Optional[int]) -> list[int]:
    order = list(range(n))
    if seed is not None:
        random.Random(seed).shuffle(order)
    return order


def _emit(text: str, out: Optional[Path]) -> None:
    if out is None:
        sys.stdout.write(text)
    else:
        out.write_text(text, encoding="utf-8")


def cmd_decompose(cfg: RunConfig, args) -> int:
    s = load_structure(cfg)
    tree = decompose(s, insertion_order(s.n, cfg.order_seed))
    if cfg.others_min is not None:
        tree = group_others(tree, cfg.others_min)
    if args.format == "dot":
        text = render_dot(tree)
    elif args.format == "canonical":
        text = canonical_text(canonical_form(tree, normalize_colors=False)) + "\n"
    else:
        text = render_tree_text(tree)
    _emit(text, args.out)
    return EXIT_OK


def _implication_input(cfg: RunConfig) -> ImplicationSet:
    if cfg.kind == "implications":
        return parse_implications(cfg.input.read_text(encoding="utf-8"))
    return generate_implications(load_structure(cfg))


def cmd_implications(cfg: RunConfig, args) -> int:
    _emit(render_implications(_implication_input(cfg)), args.out)
    return EXIT_OK


def cmd_closures(cfg: RunConfig, args) -> int:
    lattice = enumerate_closed_sets(_implication_input(cfg), max_universe=args.max_items)
    _emit(render_lattice_report(lattice), args.out)
    return EXIT_OK


def cmd_reconstruct(cfg: RunConfig, args) -> int:
    b = _implication_input(cfg)
    _emit(render_graph_file(reconstruct(b, args.seed_present)), args.out)
    return EXIT_OK


def cmd_oracle_check(cfg: RunConfig, args) -> int:
    s = load_structure(cfg)
    fast = canonical_form(decompose(s, insertion_order(s.n, cfg.order_seed)), normalize_colors=False)
    slow = canonical_form(brute_force_tree(s, guard=args.max_items), normalize_colors=False)
    if fast == slow:
        _emit("agree: " + canonical_text(fast) + "\n", args.out)
        return EXIT_OK
    _emit(f"MISMATCH\nincremental: {canonical_text(fast)}\nbrute force: {canonical_text(slow)}\n", args.out)
    return EXIT_INPUT


def build_parser() -> argparse.ArgumentParser:
    parser = argparse.ArgumentParser(
        prog="gaifman-clans",
        description="Clan decompositions of Gaifman graphs and their implications.",
    )
    parser.add_argument("-v", "--verbose", action="store_true")
    common = argparse.ArgumentParser(add_help=False)
    common.add_argument("input", type=Path)
    common.add_argument("--input-kind", choices=KINDS, help="default: guessed from the file suffix")
    common.add_argument("--variant", choices=VARIANTS, default="standard")
    common.add_argument("--threshold", type=int, help="co-occurrence cutoff for --variant threshold")
    common.add_argument("--interval", type=int, help="bucket width for --variant linear")
    common.add_argument("--lower-threshold", type=int, help="zero out counts below this before bucketing")
    common.add_argument("--min-count", type=int, help="keep items occurring at least this often")
    common.add_argument("--top-items", type=int, help="keep the N most frequent items (ties kept)")
    common.add_argument("--keep-empty", action="store_true", help="treat empty CSV cells as values")
    common.add_argument("--order-seed", type=int, help="shuffle the insertion order with this seed")
    common.add_argument("--out", type=Path, help="write here instead of stdout")

    sub = parser.add_subparsers(dest="command", required=True)
    p = sub.add_parser("decompose", parents=[common], help="strong-clan decomposition tree")
    p.add_argument("--others-min", type=int, help="collapse >= K disconnected leaves into Others(K)")
    p.add_argument("--format", choices=("dot", "text", "canonical"), default="dot")
    p.set_defaults(func=cmd_decompose)

    p = sub.add_parser("implications", parents=[common], help="clan implications xy -> D(x,y)")
    p.set_defaults(func=cmd_implications)

    p = sub.add_parser("closures", parents=[common], help="closed-set lattice report")
    p.add_argument("--max-items", type=int, default=16)
    p.set_defaults(func=cmd_closures)

    p = sub.add_parser("reconstruct", parents=[common], help="graph from modular implications")
    seed = p.add_mutually_exclusive_group()
    seed.add_argument("--seed-present", dest="seed_present", action="store_true", default=True,
                      help="the first pair is an edge (default)")
    seed.add_argument("--seed-absent", dest="seed_present", action="store_false")
    p.set_defaults(func=cmd_reconstruct)

    p = sub.add_parser("oracle-check", parents=[common], help="compare against the brute-force tree")
    p.add_argument("--max-items", type=int, default=MAX_ORACLE_VERTICES)
    p.set_defaults(func=cmd_oracle_check)
    return parser


def _config(args) -> RunConfig:
    kind = args.input_kind or SUFFIX_KINDS.get(args.input.suffix.lower())
    if kind is None:
        raise InputError(f"cannot tell the input kind of {args.input}; pass --input-kind")
    return RunConfig(
        input=args.input,
        kind=kind,
        variant=args.variant,
        threshold=args.threshold,
        interval=args.interval,
        lower_threshold=args.lower_threshold,
        min_count=args.min_count,
        top_items=args.top_items,
        others_min=getattr(args, "others_min", None),
        order_seed=args.order_seed,
        keep_empty=args.keep_empty,
    )


def main(argv: Optional[Sequence[str]] = None) -> int:
    args = build_parser().parse_args(argv)
    logging.basicConfig(level=logging.INFO if args.verbose else logging.WARNING,
                        format="%(levelname)s: %(message)s")
    try:
        return args.func(_config(args), args)
    except GuardError as e:
        print(f"error: {e}", file=sys.stderr)
        return EXIT_GUARD
    except (InputError, UnsupportedError, ReconstructionError, OSError, UnicodeDecodeError) as e:
        print(f"error: {e}", file=sys.stderr)
        return EXIT_INPUT


if __name__ == "__main__":
    sys.exit(main())
