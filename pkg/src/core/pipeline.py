# src/core/pipeline.py

"""
End-to-end extraction of a large planar subgraph from a graph with minimum
degree gamma * n.

Partition -> reduced graph -> case split. A small reduced component yields a
tripartite triangulation and a recursive call on the rest; otherwise every
reduced component becomes one spanning quadrangulation of its cleaned
clusters, embedded through the idealized blow-up, and the leftover vertices
are inserted into bags.
"""

import logging
from dataclasses import dataclass
from typing import Dict, List, Optional, Sequence

from src.core.certificate import (QUADRANGULATION, TRIANGULATION, Certificate,
                                  CertificateComponent)
from src.core.constants import HypothesisStatus, RunStatus
from src.core.embed import (arrangeability_at, bag_last_ordering, embed_tripartite,
                            gen_tripartite_triangulation, greedy_blowup_embed)
from src.core.errors import (BoundNotMet, ConfigurationError, ExtractionError, LowMinimumDegree,
                             PartitionPoor)
from src.core.graph import Graph, input_hash
from src.core.hypothesis_ledger import HypothesisLedger
from src.core.quad import (BlowupInstance, QuadResult, build_quadrangulation, execute_insertions,
                           plan_insertions)
from src.core.regularity import (RegularDecomposition, build_decomposition, choose_cluster_count,
                                 outside_degree_violations, superregularize)
from src.core.structure import (AllLarge, PipelineConfig, SmallComponent, as_fraction,
                                bounded_spanning_tree, case_split)

logger = logging.getLogger("Extractor.Pipeline")


@dataclass(slots=True)
class _Subproblem:
    graph: Graph
    original: List[int]
    depth: int


class _Extraction:
    """Mutable state of one run: certificate components and the hypothesis ledger."""

    __slots__ = ['g', 'config', 'ledger', 'components', 'insertions', 'case']

    def __init__(self, g: Graph, config: PipelineConfig, ledger: HypothesisLedger):
        self.g = g
        self.config = config
        self.ledger = ledger
        self.components: List[CertificateComponent] = []
        self.insertions: List[tuple] = []
        self.case: Optional[int] = None

    # --- stages ---

    def decompose(self, sub: _Subproblem) -> RegularDecomposition:
        params = self.config.params
        seed = self.config.seed + 7919 * sub.depth
        _, labels = choose_cluster_count(sub.graph, params, self.config.max_clusters, seed,
                                         self.config.similarity_threshold)
        exceptional = labels.count(-1)
        if not self.ledger.check("exceptional set",
                                 exceptional <= params.eps * sub.graph.n,
                                 f"|V_0|={exceptional}, eps*n={params.eps * sub.graph.n:.1f}"):
            raise PartitionPoor(f"|V_0|={exceptional} exceeds eps*n", exceptional=exceptional)
        decomposition = build_decomposition(sub.graph, labels, params, seed,
                                            self.config.regularity_restarts)
        if not self.ledger.check("reduced minimum degree", decomposition.delta_reduced > 0,
                                 f"delta(R)={decomposition.delta_reduced}, r={decomposition.r}"):
            raise PartitionPoor("reduced graph has an isolated cluster",
                                r=decomposition.r, reduced_edges=decomposition.reduced.e)
        violators = outside_degree_violations(sub.graph, decomposition, params)
        self.ledger.check("outside-pair degree",
                          not violators,
                          f"{len(violators)} vertex(es) with more than (eps+d)n edges outside "
                          f"regular dense pairs", waived=True)
        return decomposition

    def solve(self, sub: _Subproblem) -> None:
        if sub.graph.n == 0:
            return
        logger.info(f"🚀 Solving subproblem: n={sub.graph.n}, depth={sub.depth}")
        decomposition = self.decompose(sub)
        split = case_split(decomposition.reduced, decomposition.delta_reduced)
        if isinstance(split, SmallComponent):
            if sub.depth < self.config.max_recursion_depth:
                self.case = self.case or 1
                self.triangulate(sub, decomposition, split)
                return
            self.ledger.record("recursion depth", HypothesisStatus.WAIVED,
                               f"depth cap {self.config.max_recursion_depth} reached; "
                               f"small component handled by quadrangulation")
            split = AllLarge(components=decomposition.reduced.components())
        self.case = self.case or 2
        self.quadrangulate(sub, decomposition, split)

    def triangulate(self, sub: _Subproblem, decomposition: RegularDecomposition,
                    split: SmallComponent) -> None:
        i, j, l = split.triangle
        clusters = decomposition.clusters
        t3 = gen_tripartite_triangulation(self.config.s)
        embedding = embed_tripartite(sub.graph, clusters[i], clusters[j], clusters[l], t3,
                                     seed=self.config.seed + sub.depth,
                                     restarts=self.config.embed_restarts)
        to_original = {x: sub.original[v] for x, v in embedding.mapping.items()}
        rotation = t3.rotation.relabel(to_original)
        self.components.append(CertificateComponent(
            kind=TRIANGULATION,
            vertices=rotation.vertices,
            edges=rotation.edges(),
            rotation=rotation,
        ))
        used = set(embedding.mapping.values())
        rest = [v for v in range(sub.graph.n) if v not in used]
        remainder, local = sub.graph.induced(rest)
        logger.info(f"🔁 Recursing on G - V(T): {remainder.n} vertices remain")
        self.solve(_Subproblem(graph=remainder, original=[sub.original[v] for v in local],
                               depth=sub.depth + 1))

    def quadrangulate(self, sub: _Subproblem, decomposition: RegularDecomposition,
                      split: AllLarge) -> None:
        config = self.config
        k = config.k
        leftovers = list(decomposition.exceptional_set)
        quads: List[QuadResult] = []
        for index, component in enumerate(split.components):
            quad, removed = self.quadrangulate_component(sub, decomposition, component, index)
            quads.append(quad)
            leftovers.extend(removed)

        bags = [b for q in quads for b in q.bags]
        plan = plan_insertions(bags, sorted(leftovers), sub.graph, k, sub.graph.n)
        execute_insertions(quads, plan, sub.graph)
        for q in quads:
            self.emit_quadrangulation(sub, q)

    def quadrangulate_component(self, sub: _Subproblem, decomposition: RegularDecomposition,
                                component: Sequence[int], index: int):
        config = self.config
        seed = config.seed + 104729 * sub.depth + 31 * index
        reduced_part, cluster_ids = decomposition.reduced.induced(component)
        tree = bounded_spanning_tree(reduced_part, config.k + 1).relabel(dict(enumerate(cluster_ids)))
        self.ledger.check("spanning tree degree", tree.max_degree() <= 8 * (config.k + 1),
                          f"component {index}: max degree {tree.max_degree()}, "
                          f"{tree.swap_count} swap(s)")

        clusters = {i: decomposition.clusters[i] for i in cluster_ids}
        cleaned = superregularize(sub.graph, clusters, tree, config.params, config.k)
        kept = {v for members in cleaned.values() for v in members}
        removed = [v for i in cluster_ids for v in clusters[i] if v not in kept]

        guest_parts: Dict[int, List[int]] = {}
        offset = 0
        for i in sorted(cleaned):
            guest_parts[i] = list(range(offset, offset + len(cleaned[i])))
            offset += len(cleaned[i])
        quad = build_quadrangulation(BlowupInstance(parts=guest_parts, tree=tree),
                                     waive_size_check=config.waive_size_check)
        for message in quad.diagnostics:
            self.ledger.record("quadrangulation", HypothesisStatus.WAIVED,
                               f"component {index}: {message}")

        guest = Graph.from_edges(offset, quad.plane.edges())
        members = [m for b in quad.bags for m in b.members]
        order = bag_last_ordering(guest, members)
        self.ledger.record("arrangeability", HypothesisStatus.VERIFIED,
                           f"component {index}: ordering achieves {arrangeability_at(guest, order)}")
        embedding = greedy_blowup_embed(guest, guest_parts, sub.graph, cleaned, order, seed,
                                        restarts=config.embed_restarts,
                                        waive_degree_check=config.waive_degree_check,
                                        deferred=members)
        for message in embedding.diagnostics:
            self.ledger.record("embedding degree", HypothesisStatus.WAIVED,
                               f"component {index}: {message}")
        if not embedding.diagnostics:
            self.ledger.record("embedding degree", HypothesisStatus.VERIFIED,
                               f"component {index}: max degree {guest.max_degree()} within sqrt(n)/ln(n)")
        return quad.relabel(embedding.mapping), removed

    def emit_quadrangulation(self, sub: _Subproblem, q: QuadResult) -> None:
        to_original = {v: sub.original[v] for v in q.plane.rot}
        rotation = q.plane.freeze().relabel(to_original)
        self.components.append(CertificateComponent(
            kind=QUADRANGULATION,
            vertices=rotation.vertices,
            edges=rotation.edges(),
            rotation=rotation,
            bags=[b.relabel(to_original) for b in q.bags],
        ))
        self.insertions.extend((to_original[v], to_original[a], to_original[b])
                               for v, a, b in q.insertions)


def extract_planar(g: Graph, gamma: float, config: Optional[PipelineConfig] = None,
                   ledger: Optional[HypothesisLedger] = None) -> Certificate:
    """
    Certificate of a planar subgraph with at least 2n - 4k edges, or a FAILED
    certificate naming the stage that broke. Invalid gamma raises OutOfRange;
    a config built for a different gamma raises ConfigurationError.
    """
    config = config or PipelineConfig.from_gamma(gamma)
    if config.gamma != gamma:
        raise ConfigurationError(f"configuration was built for gamma={config.gamma}, run asks for {gamma}")
    ledger = ledger if ledger is not None else HypothesisLedger()
    k = config.k
    bound = 2 * g.n - 4 * k
    logger.info(f"🛰️ Extraction start: n={g.n}, e={g.e}, gamma={gamma}, k={k}, bound={bound}")
    run = _Extraction(g, config, ledger)
    try:
        threshold = as_fraction(gamma) * g.n
        holds = ledger.check("minimum degree", g.min_degree() >= threshold,
                             f"delta(G)={g.min_degree()}, gamma*n={float(threshold):.1f}",
                             waived=config.allow_low_degree)
        if not holds and not config.allow_low_degree:
            raise LowMinimumDegree(f"delta(G)={g.min_degree()} below gamma*n={float(threshold):.1f}",
                                   min_degree=g.min_degree())
        run.solve(_Subproblem(graph=g, original=list(range(g.n)), depth=0))
        total = sum(len(c.edges) for c in run.components)
        if total < bound:
            raise BoundNotMet(f"{total} edges below 2n - 4k = {bound}", edges=total, bound=bound,
                              components=len(run.components))
    except ExtractionError as e:
        logger.error(f"❌ Stage {e.stage} failed: {e}")
        return Certificate.failed(g, gamma, k, e, ledger.to_list())

    certificate = Certificate(
        input_hash=input_hash(g), n=g.n, gamma=gamma, k=k, case=run.case or 2,
        status=RunStatus.SUCCESS, components=run.components, insertions=run.insertions,
        edge_count=total, claimed_bound=bound, hypotheses=ledger.to_list(),
    )
    logger.info(f"✅ Extraction complete: {total} edges >= {bound} over "
                f"{len(run.components)} component(s), case {certificate.case}")
    return certificate
