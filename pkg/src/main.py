"""
Command-line entry point for the cw3-iso toolkit
"""
import argparse
import logging
import logging.config
import sys
from pathlib import Path
from typing import Optional, Sequence

sys.path.insert(0, str(Path(__file__).parent.parent))
from config import ensure_directories, get_config
from utils import format_mapping, timed, validate_input_format

from src.chlrr.decompose import DecomposeConfig
from src.chlrr.expression import graph_to_expression
from src.chlrr.labg import build_labg
from src.chlrr.memo import MemoConfig, memo_manager
from src.decomposition.export import md_tree_report, md_tree_to_dot, skeleton_report, skeleton_to_dot
from src.decomposition.modular import modular_decomposition
from src.decomposition.split import skeleton
from src.errors import (
    CW3IsoError,
    ExpressionSyntaxError,
    InputFormatError,
    MalformedExpressionError,
    PreconditionError,
)
from src.graphs.io import read_graph_file
from src.isomorphism.engine import EngineConfig, iso_cw3, profile_runtime
from src.kexpr.generator import random_expression
from src.kexpr.grammar import parse_text, to_text
from src.kexpr.tree import evaluate
from src.models.reports import (
    InputGraphFile,
    IsoReport,
    LabeledGraphReport,
    LabelingReport,
    LabGReport,
    Verdict,
)

EXIT_USAGE = 64
EXIT_DATAERR = 65

logger = logging.getLogger(__name__)


def setup_logging():
    """Setup logging configuration"""
    ensure_directories()
    config = get_config()
    logging.config.dictConfig(config["logging"])
    return logging.getLogger(__name__)


class _Parser(argparse.ArgumentParser):
    """ArgumentParser that exits with EX_USAGE on bad command lines."""

    def error(self, message):
        self.print_usage(sys.stderr)
        self.exit(EXIT_USAGE, f"{self.prog}: error: {message}\n")


def _format(value: str) -> str:
    if not validate_input_format(value):
        raise argparse.ArgumentTypeError(f"unknown format {value!r} (expected edgelist or graph6)")
    return value.strip().lower()


def _read(path: str, fmt: str) -> InputGraphFile:
    with timed(f"read {path}"):
        return read_graph_file(path, fmt)


def _engine_config(args) -> EngineConfig:
    settings = get_config()
    engine = settings["engine"]
    threads = args.threads if args.threads is not None else engine["threads"]
    decompose = DecomposeConfig(threads=threads, **settings["decompose"])
    reduction = getattr(args, "reduction", None) or engine["reduction"]
    return EngineConfig(threads=threads, reduction=reduction, verify=engine["verify"], decompose=decompose)


def cmd_iso(args) -> int:
    g, h = _read(args.graph_g, args.format), _read(args.graph_h, args.format)
    with timed("iso_cw3"):
        result = iso_cw3(g.graph, h.graph, g.colors, h.colors, config=_engine_config(args))
    pairs = None
    if result.is_isomorphic and args.witness:
        pairs = [(g.names[v], h.names[w]) for v, w in sorted(result.witness.items())]
    if args.json:
        print(IsoReport(verdict=result.verdict, witness=pairs, reason=result.reason).model_dump_json(indent=2))
    else:
        print(result.verdict.value)
        if pairs is not None:
            for line in format_mapping(result.witness, g.names, h.names):
                print(line)
    return result.verdict.exit_code


def cmd_eval(args) -> int:
    text = Path(args.expression).read_text(encoding="utf-8")
    lg = evaluate(parse_text(text))
    g = lg.graph
    if args.json:
        report = LabeledGraphReport(
            n=g.n,
            m=g.m,
            edges=[(g.name(u), g.name(v)) for u, v in g.edges],
            labels={g.name(v): lg.labels[v] for v in g.vertices()},
        )
        print(report.model_dump_json(indent=2))
    else:
        print(f"{g.n} {g.m}")
        for u, v in g.edges:
            print(f"{g.name(u)} {g.name(v)}")
        print("labels " + " ".join(f"{g.name(v)}:{lg.labels[v]}" for v in g.vertices()))
    return 0


def cmd_decompose(args) -> int:
    src = _read(args.graph, args.format)
    outcome = graph_to_expression(src.graph, config=_engine_config(args).decompose)
    if outcome.exceeded:
        print(Verdict.CLIQUEWIDTH_EXCEEDED.value)
        logger.info(f"decompose: {outcome.reason}")
        return Verdict.CLIQUEWIDTH_EXCEEDED.exit_code
    print(to_text(outcome.tree))
    return 0


def cmd_mdtree(args) -> int:
    src = _read(args.graph, args.format)
    tree = modular_decomposition(src.graph)
    print(md_tree_to_dot(tree) if args.dot else md_tree_report(tree).model_dump_json(indent=2))
    return 0


def cmd_skeleton(args) -> int:
    src = _read(args.graph, args.format)
    sk = skeleton(src.graph)
    print(skeleton_to_dot(src.graph, sk) if args.dot else skeleton_report(src.graph, sk).model_dump_json(indent=2))
    return 0


def cmd_labg(args) -> int:
    src = _read(args.graph, args.format)
    g = src.graph
    candidates = [
        LabelingReport(
            provenance=cand.provenance.rule.value,
            source=[g.name(v) for v in cand.provenance.source],
            labels={g.name(v): cand.graph.labels[v] for v in g.vertices()},
        )
        for cand in build_labg(g)
    ]
    print(LabGReport(candidates=candidates).model_dump_json(indent=2))
    return 0


def cmd_gen_expr(args) -> int:
    print(to_text(random_expression(args.n, args.k, seed=args.seed)))
    return 0


def cmd_profile(args) -> int:
    cli = get_config()["cli"]
    sizes = args.sizes or cli["profile_sizes"]
    repeats = args.repeats or cli["profile_repeats"]
    report = profile_runtime(sizes, repeats=repeats, seed=args.seed, config=_engine_config(args))
    print(report.model_dump_json(indent=2))
    return 0


def build_parser() -> argparse.ArgumentParser:
    default_format = get_config()["cli"]["default_format"]
    parser = _Parser(prog="cw3iso", description="Isomorphism for graphs of clique-width at most three")
    commands = parser.add_subparsers(dest="command", required=True)

    def graph_command(name: str, handler, help_text: str) -> argparse.ArgumentParser:
        sub = commands.add_parser(name, help=help_text)
        sub.add_argument("graph")
        sub.add_argument("--format", type=_format, default=default_format)
        sub.set_defaults(handler=handler)
        return sub

    iso = commands.add_parser("iso", help="decide isomorphism of two graphs")
    iso.add_argument("graph_g")
    iso.add_argument("graph_h")
    iso.add_argument("--format", type=_format, default=default_format)
    iso.add_argument("--witness", action="store_true", help="print the vertex bijection")
    iso.add_argument("--json", action="store_true")
    iso.add_argument("--threads", type=int)
    iso.add_argument("--reduction", choices=["modular", "pendant"])
    iso.set_defaults(handler=cmd_iso)

    ev = commands.add_parser("eval", help="evaluate a k-expression file")
    ev.add_argument("expression")
    ev.add_argument("--json", action="store_true")
    ev.set_defaults(handler=cmd_eval)

    dec = graph_command("decompose", cmd_decompose, "print a k-expression for a graph")
    dec.add_argument("--threads", type=int)
    graph_command("mdtree", cmd_mdtree, "dump the modular decomposition").add_argument("--dot", action="store_true")
    graph_command("skeleton", cmd_skeleton, "dump the split skeleton").add_argument("--dot", action="store_true")
    graph_command("labg", cmd_labg, "dump the candidate labelings of a prime graph")

    gen = commands.add_parser("gen-expr", help="print a random k-expression")
    gen.add_argument("n", type=int)
    gen.add_argument("k", type=int)
    gen.add_argument("--seed", type=int)
    gen.set_defaults(handler=cmd_gen_expr)

    prof = commands.add_parser("profile", help="time iso_cw3 on random graphs")
    prof.add_argument("--sizes", type=int, nargs="+")
    prof.add_argument("--repeats", type=int)
    prof.add_argument("--seed", type=int, default=0)
    prof.add_argument("--threads", type=int)
    prof.set_defaults(handler=cmd_profile)
    return parser


def main(argv: Optional[Sequence[str]] = None) -> int:
    setup_logging()
    args = build_parser().parse_args(argv)
    memo_manager.initialize(MemoConfig(**get_config()["memo"]))
    try:
        return args.handler(args)
    except (InputFormatError, ExpressionSyntaxError, MalformedExpressionError, PreconditionError, OSError,
            UnicodeDecodeError) as e:
        logger.error(f"{args.command}: {e}")
        print(f"cw3iso {args.command}: {e}", file=sys.stderr)
        return EXIT_DATAERR
    except CW3IsoError:
        logger.exception(f"{args.command} failed")
        raise
    finally:
        memo_manager.close()


if __name__ == "__main__":
    sys.exit(main())
