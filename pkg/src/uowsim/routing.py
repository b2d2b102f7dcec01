"""Route selection over a network graph: CRP, DRP and SRP.

CRP sees the whole graph and runs Dijkstra on BER-derived edge weights.
DRP and SRP are greedy walks that only look at the current node's
neighborhood: DRP always moves to the unvisited neighbor with the lowest
link BER, SRP first discards neighbors outside the axis-aligned quadrant
(relative to the current node) that contains the target.

Every protocol tallies ``evaluations``, the number of candidate-edge BER
examinations it performed.  That count is the deterministic complexity
metric of a run; wall-clock time is measured elsewhere.

All functions are pure with respect to the (immutable) graph, so concurrent
calls are safe.
"""

import heapq
import math
from dataclasses import dataclass
from enum import Enum

from .channel import e2e_ber as fold_e2e_ber
from .topology import NetworkGraph


class Protocol(Enum):
    CRP = "crp"
    DRP = "drp"
    SRP = "srp"


class WeightMode(Enum):
    """Edge-weight choices for CRP.

    PAPER_SUM uses the link BER itself, so Dijkstra minimizes the plain sum
    of per-hop error probabilities.  EXACT_LOG uses -ln(1 - 2*ber), whose
    sum-minimizing path provably has the least end-to-end BER; links with
    ber >= 0.5 carry no information and are treated as absent.
    """

    PAPER_SUM = "paper"
    EXACT_LOG = "exact"


class FailureReason(Enum):
    DEAD_END = "dead_end"
    EMPTY_QUADRANT = "empty_quadrant"
    DISCONNECTED = "disconnected"
    HOP_LIMIT = "hop_limit"


@dataclass(frozen=True)
class Route:
    """A selected loop-free path with its per-hop and end-to-end figures."""

    hops: tuple[int, ...]
    hop_bers: tuple[float, ...]
    hop_distances: tuple[float, ...]
    e2e_ber: float
    evaluations: int

    @property
    def hop_count(self) -> int:
        return len(self.hop_bers)

    @property
    def total_distance(self) -> float:
        return sum(self.hop_distances)


@dataclass(frozen=True)
class RoutingOutcome:
    """Either a route or a failure reason, plus the evaluation tally."""

    route: Route | None
    failure_reason: FailureReason | None
    evaluations: int

    def __post_init__(self):
        if (self.route is None) == (self.failure_reason is None):
            raise ValueError("exactly one of route / failure_reason must be set")

    @property
    def success(self) -> bool:
        return self.route is not None


def edge_weight(ber: float, mode: WeightMode) -> float:
    """Dijkstra weight of a link; +inf marks a link absent under the mode."""
    if mode is WeightMode.PAPER_SUM:
        return ber
    if ber >= 0.5:
        return math.inf
    return -math.log1p(-2.0 * ber)


def _check_ids(graph: NetworkGraph, source: int, target: int):
    for node_id in (source, target):
        if not graph.has_node(node_id):
            raise ValueError(f"unknown node id {node_id}")


def _empty_route(node_id: int) -> RoutingOutcome:
    route = Route(hops=(node_id,), hop_bers=(), hop_distances=(), e2e_ber=0.0, evaluations=0)
    return RoutingOutcome(route=route, failure_reason=None, evaluations=0)


def _finish(graph: NetworkGraph, hops: list[int], evaluations: int) -> RoutingOutcome:
    qualities = [graph.quality(u, v) for u, v in zip(hops, hops[1:])]
    route = Route(
        hops=tuple(hops),
        hop_bers=tuple(q.ber for q in qualities),
        hop_distances=tuple(q.distance for q in qualities),
        e2e_ber=fold_e2e_ber(q.ber for q in qualities),
        evaluations=evaluations,
    )
    _check_route(graph, route)
    return RoutingOutcome(route=route, failure_reason=None, evaluations=evaluations)


def _fail(reason: FailureReason, evaluations: int) -> RoutingOutcome:
    return RoutingOutcome(route=None, failure_reason=reason, evaluations=evaluations)


def _check_route(graph: NetworkGraph, route: Route):
    """Route invariants, enforced on every constructed route."""
    if len(set(route.hops)) != len(route.hops):
        raise AssertionError(f"route revisits a node: {route.hops}")
    for u, v in zip(route.hops, route.hops[1:]):
        if not graph.has_edge(u, v):
            raise AssertionError(f"route uses missing edge ({u}, {v})")
    expected = fold_e2e_ber(route.hop_bers)
    if not math.isclose(route.e2e_ber, expected, rel_tol=1e-12, abs_tol=1e-15):
        raise AssertionError(
            f"route e2e_ber {route.e2e_ber} inconsistent with fold {expected}"
        )


def crp(
    graph: NetworkGraph,
    source: int,
    target: int,
    mode: WeightMode = WeightMode.EXACT_LOG,
) -> RoutingOutcome:
    """Centralized routing: least-total-weight path by Dijkstra.

    Ties in path weight resolve toward lower node ids (heap keys are
    (distance, id) and neighbors relax in id order), so the outcome is
    reproducible across platforms.  Each examined incident edge of a
    settled node counts one evaluation.
    """
    _check_ids(graph, source, target)
    if source == target:
        return _empty_route(source)

    dist = {source: 0.0}
    prev = {}
    settled = set()
    evaluations = 0
    heap = [(0.0, source)]
    while heap:
        d, u = heapq.heappop(heap)
        if u in settled:
            continue
        settled.add(u)
        for v, quality in graph.neighbor_items(u):
            evaluations += 1
            if v in settled:
                continue
            weight = edge_weight(quality.ber, mode)
            if math.isinf(weight):
                continue
            candidate = d + weight
            if candidate < dist.get(v, math.inf):
                dist[v] = candidate
                prev[v] = u
                heapq.heappush(heap, (candidate, v))

    if target not in settled:
        return _fail(FailureReason.DISCONNECTED, evaluations)
    hops = [target]
    while hops[-1] != source:
        hops.append(prev[hops[-1]])
    hops.reverse()
    return _finish(graph, hops, evaluations)


def drp(graph: NetworkGraph, source: int, target: int) -> RoutingOutcome:
    """Distributed routing: greedy walk to the min-BER unvisited neighbor.

    Visited nodes are never re-entered; the walk aborts when the current
    node has no unvisited neighbor (dead end) or after N-1 hops.  Ties on
    BER break toward the lower node id.
    """
    _check_ids(graph, source, target)
    if source == target:
        return _empty_route(source)

    visited = {source}
    hops = [source]
    current = source
    evaluations = 0
    for _ in range(graph.node_count - 1):
        candidates = [
            (v, quality)
            for v, quality in graph.neighbor_items(current)
            if v not in visited
        ]
        evaluations += len(candidates)
        if not candidates:
            return _fail(FailureReason.DEAD_END, evaluations)
        current, _ = min(candidates, key=lambda item: (item[1].ber, item[0]))
        hops.append(current)
        visited.add(current)
        if current == target:
            return _finish(graph, hops, evaluations)
    return _fail(FailureReason.HOP_LIMIT, evaluations)


def srp(
    graph: NetworkGraph,
    source: int,
    target: int,
    fallback: bool = False,
) -> RoutingOutcome:
    """Sectorized routing: DRP restricted to the quadrant holding the target.

    Only unvisited neighbors that pass `quadrant_filter` are examined (and
    counted).  With ``fallback`` enabled, a hop whose quadrant is empty
    widens to all unvisited neighbors instead of failing.
    """
    _check_ids(graph, source, target)
    if source == target:
        return _empty_route(source)

    target_pos = graph.node(target).position
    visited = {source}
    hops = [source]
    current = source
    evaluations = 0
    for _ in range(graph.node_count - 1):
        here = current
        unvisited = [graph.node(v) for v in graph.neighbors(here) if v not in visited]
        candidates = quadrant_filter(graph.node(here).position, target_pos, unvisited)
        if not candidates and fallback and unvisited:
            candidates = unvisited
        evaluations += len(candidates)
        if not candidates:
            return _fail(FailureReason.EMPTY_QUADRANT, evaluations)
        current = min(
            candidates, key=lambda node: (graph.quality(here, node.id).ber, node.id)
        ).id
        hops.append(current)
        visited.add(current)
        if current == target:
            return _finish(graph, hops, evaluations)
    return _fail(FailureReason.HOP_LIMIT, evaluations)


def quadrant_filter(current, target, candidates):
    """Keep candidates lying in the quadrant of ``target`` seen from ``current``.

    A candidate passes when its offset from the current position agrees in
    sign with the target's offset on both axes; boundary nodes (offset 0)
    pass, and an axis on which the target is aligned with the current
    position constrains nothing.  The target itself always passes.
    """
    cx, cy = current
    tx, ty = target
    dx = tx - cx
    dy = ty - cy
    return [
        node
        for node in candidates
        if (node.x - cx) * dx >= 0.0 and (node.y - cy) * dy >= 0.0
    ]


def route_dump_lines(protocol: Protocol, graph: NetworkGraph, route: Route) -> list[str]:
    """Overlay-friendly dump of a selected route.

    One ``protocol hop_index node_id x y ber_to_next`` line per visited
    node (0.0 for the final node's ber_to_next), then a trailer line
    ``protocol e2e <e2e_ber> <total_distance_m> <evaluations>``.
    """
    name = protocol.value
    lines = []
    for index, node_id in enumerate(route.hops):
        node = graph.node(node_id)
        ber_to_next = route.hop_bers[index] if index < route.hop_count else 0.0
        lines.append(
            f"{name} {index} {node_id} {node.x:.8e} {node.y:.8e} {ber_to_next:.8e}"
        )
    lines.append(
        f"{name} e2e {route.e2e_ber:.8e} {route.total_distance:.8e} {route.evaluations}"
    )
    return lines
