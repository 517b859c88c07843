# src/main_engine.py

import argparse
import json
import logging
import sys
from dataclasses import asdict
from pathlib import Path
from typing import Callable, Dict, List, Optional

# Internal Core Imports
from src.core.certificate import verify_certificate
from src.core.config_loader import ConfigLoader
from src.core.constants import Defaults, ExitCode, RunStatus
from src.core.errors import ExtractionError
from src.core.generators import (gen_disjoint_biclique, gen_random_min_degree, gen_tree_blowup,
                                 random_tree_edges)
from src.core.graph import graph_stats
from src.core.hypothesis_ledger import HypothesisLedger
from src.core.oracle import pl_exact, pl_greedy
from src.core.pipeline import extract_planar
from src.core.regularity import RegularityParams, build_decomposition, choose_cluster_count
from src.io.certificate_store import load_certificate, save_certificate
from src.io.edge_list import read_edge_list, read_labels, write_edge_list, write_labels

# Standardized Logging Format for the Audit Trail
logging.basicConfig(
    level=logging.INFO,
    format='%(asctime)s [%(levelname)s] %(name)s: %(message)s'
)
logger = logging.getLogger("Extractor.Main")


def _tree_edges(shape: str, r: int, seed: int) -> List[tuple]:
    if shape == "path":
        return [(i, i + 1) for i in range(r - 1)]
    if shape == "star":
        return [(0, i) for i in range(1, r)]
    return random_tree_edges(r, seed)


# --- subcommands ---

def cmd_gen(args: argparse.Namespace) -> ExitCode:
    labels = None
    if args.family == "biclique":
        g = gen_disjoint_biclique(args.k, args.t)
        labels = [v // args.t for v in range(g.n)]
    elif args.family == "blowup":
        g, labels = gen_tree_blowup(_tree_edges(args.tree, args.parts, args.seed),
                                    [args.size] * args.parts, args.noise, args.seed)
    else:
        g = gen_random_min_degree(args.n, args.dmin, args.seed)
    write_edge_list(g, args.output)
    if args.labels:
        if labels is None:
            logger.warning("⚠️ Random graphs carry no planted partition; no sidecar written.")
        else:
            write_labels(labels, args.labels)
    return ExitCode.OK


def cmd_extract(args: argparse.Namespace) -> ExitCode:
    g = read_edge_list(args.input)
    config = ConfigLoader.load(
        args.gamma, args.config,
        eps=args.eps, d=args.d, delta=args.delta, seed=args.seed,
        waive_size_check=args.waive_size_check or None,
        waive_degree_check=args.waive_degree_check or None,
        allow_low_degree=args.allow_low_degree or None,
    )
    ledger = HypothesisLedger()
    certificate = extract_planar(g, args.gamma, config, ledger)
    save_certificate(certificate, args.output)
    if args.audit:
        ledger.write_audit(args.audit, f"extract {Path(args.input).name}",
                           {"gamma": args.gamma, "status": certificate.status.value,
                            "edges": certificate.edge_count, "bound": certificate.claimed_bound})
    if certificate.status is RunStatus.SUCCESS:
        return ExitCode.OK
    return ExitCode.STAGE_FAILURE


def cmd_verify(args: argparse.Namespace) -> ExitCode:
    g = read_edge_list(args.input)
    certificate = load_certificate(args.certificate)
    report = verify_certificate(g, certificate)
    print(json.dumps({"passed": report.passed, "checks": report.checks,
                      "violations": report.violations}, indent=1))
    return ExitCode.OK if report.passed else ExitCode.VERIFICATION_FAILURE


def cmd_oracle(args: argparse.Namespace) -> ExitCode:
    g = read_edge_list(args.input)
    result = pl_greedy(g, args.seed) if args.greedy else pl_exact(g, node_budget=args.budget)
    print(json.dumps({"value": result.value, "exact": result.exact,
                      "nodes_explored": result.nodes_explored,
                      "witness": [list(e) for e in result.witness]}))
    return ExitCode.OK


def cmd_stats(args: argparse.Namespace) -> ExitCode:
    stats = graph_stats(read_edge_list(args.input))
    print(json.dumps(asdict(stats)))
    return ExitCode.OK


def cmd_decompose(args: argparse.Namespace) -> ExitCode:
    g = read_edge_list(args.input)
    params = RegularityParams(eps=args.eps, d=args.d)
    if args.labels:
        labels = read_labels(args.labels, g.n)
    else:
        _, labels = choose_cluster_count(g, params, args.max_clusters, args.seed)
    decomposition = build_decomposition(g, labels, params, args.seed)
    print(json.dumps(decomposition.report(), indent=1))
    return ExitCode.OK


COMMANDS: Dict[str, Callable[[argparse.Namespace], ExitCode]] = {
    "gen": cmd_gen,
    "extract": cmd_extract,
    "verify": cmd_verify,
    "oracle": cmd_oracle,
    "stats": cmd_stats,
    "decompose": cmd_decompose,
}


def build_parser() -> argparse.ArgumentParser:
    parser = argparse.ArgumentParser(
        prog="planar-extract",
        description="Large planar subgraphs of dense graphs, with verifiable certificates.")
    sub = parser.add_subparsers(dest="command", required=True)

    gen = sub.add_parser("gen", help="emit a structured instance in edge-list format")
    gen.add_argument("family", choices=["biclique", "blowup", "random"])
    gen.add_argument("-k", type=int, default=1, help="biclique copies")
    gen.add_argument("-t", type=int, default=8, help="biclique side size")
    gen.add_argument("--tree", choices=["path", "star", "random"], default="path")
    gen.add_argument("--parts", type=int, default=3)
    gen.add_argument("--size", type=int, default=100)
    gen.add_argument("--noise", type=float, default=0.0)
    gen.add_argument("--n", type=int, default=100)
    gen.add_argument("--dmin", type=int, default=40)
    gen.add_argument("--seed", type=int, default=0)
    gen.add_argument("--labels", type=Path, help="write the planted partition sidecar here")
    gen.add_argument("-o", "--output", type=Path, required=True)

    extract = sub.add_parser("extract", help="run the pipeline and write a certificate")
    extract.add_argument("-i", "--input", type=Path, required=True)
    extract.add_argument("--gamma", type=float, required=True)
    extract.add_argument("--eps", type=float)
    extract.add_argument("--d", type=float)
    extract.add_argument("--delta", type=float)
    extract.add_argument("--seed", type=int)
    extract.add_argument("--waive-size-check", action="store_true")
    extract.add_argument("--waive-degree-check", action="store_true",
                         help="embed even when the guest degree exceeds sqrt(n)/ln(n)")
    extract.add_argument("--allow-low-degree", action="store_true")
    extract.add_argument("--config", type=Path, help="alternative pipeline defaults file")
    extract.add_argument("--audit", type=Path, help="prepend the hypothesis audit to this Markdown file")
    extract.add_argument("-o", "--output", type=Path, required=True)

    verify = sub.add_parser("verify", help="independently check a certificate")
    verify.add_argument("-i", "--input", type=Path, required=True)
    verify.add_argument("-c", "--certificate", type=Path, required=True)

    oracle = sub.add_parser("oracle", help="planarity number by branch and bound")
    oracle.add_argument("-i", "--input", type=Path, required=True)
    oracle.add_argument("--budget", type=int, default=Defaults.ORACLE_NODE_BUDGET)
    oracle.add_argument("--greedy", action="store_true", help="randomized lower bound instead")
    oracle.add_argument("--seed", type=int, default=0)

    stats = sub.add_parser("stats", help="n, e, minimum degree, component sizes")
    stats.add_argument("-i", "--input", type=Path, required=True)

    decompose = sub.add_parser("decompose", help="partition, pair verdicts and reduced graph")
    decompose.add_argument("-i", "--input", type=Path, required=True)
    decompose.add_argument("--labels", type=Path, help="use this partition instead of the heuristic")
    decompose.add_argument("--eps", type=float, default=Defaults.EPS)
    decompose.add_argument("--d", type=float, default=Defaults.D)
    decompose.add_argument("--max-clusters", type=int, default=Defaults.MAX_CLUSTERS)
    decompose.add_argument("--seed", type=int, default=0)
    return parser


def run_engine(argv: Optional[List[str]] = None) -> int:
    """
    Dispatches one subcommand. Exit codes: 0 success, 1 verification
    failure, 2 pipeline stage failure, 3 input error.
    """
    args = build_parser().parse_args(argv)
    try:
        return int(COMMANDS[args.command](args))
    except ExtractionError as e:
        logger.critical(f"Input rejected at stage {e.stage}: {e}")
        return int(ExitCode.INPUT_ERROR)
    except ValueError as e:
        logger.critical(f"❌ Invalid parameter: {e}")
        return int(ExitCode.INPUT_ERROR)
    except OSError as e:
        logger.critical(f"❌ I/O failure: {e}")
        return int(ExitCode.INPUT_ERROR)


if __name__ == "__main__":  # pragma: no cover
    sys.exit(run_engine())
