"""Routing policies: AMHRP, the M-ATTEMPT baseline and the SIMPLE baseline.

AMHRP: a node within transmission range of the sink sends directly;
otherwise it hands the packet to the alive neighbor that is strictly closer
to the sink and has the most residual energy (ties broken by distance to
sink, then by id). A critical packet with no route escalates to the external
WSN gateway; a normal one is held.

M-ATTEMPT: hop counts are flooded from the sink each round; normal packets
follow minimum hop count, critical packets go straight to the sink with a
boosted (more expensive) transmission. Nodes above the temperature threshold
are routed around, and a relay that overheats mid-round bounces the packet
back to its sender.

SIMPLE: one common forwarder per round, the alive node minimizing
distance-to-sink / residual-energy. Everyone else sends to it, it aggregates
and relays to the sink; the ECG node and critical packets go directly to the
sink. Follows the protocol's standard published definition.
"""
from __future__ import annotations

import math
from dataclasses import dataclass
from enum import Enum

from .core import PacketKind, SensorKind, SensorNode, Sink, distance


class RouteAction(Enum):
    SEND_TO_SINK = "send_to_sink"
    SEND_TO_FORWARDER = "send_to_forwarder"
    SEND_TO_EXTERNAL_WSN = "send_to_external_wsn"
    HOLD = "hold"


@dataclass(frozen=True)
class RoutingDecision:
    action: RouteAction
    target: int | None = None  # forwarder node id when SEND_TO_FORWARDER
    boosted: bool = False


# ---------------------------------------------------------------------------
# AMHRP
# ---------------------------------------------------------------------------

def amhrp_select_forwarder(node: SensorNode, neighbors: list[SensorNode], sink: Sink,
                           packet_kind: PacketKind = PacketKind.NORMAL,
                           d_sink: dict[int, float] | None = None) -> RoutingDecision:
    """Pick the next hop for a packet held by ``node``.

    ``neighbors`` must be the alive nodes within ``node.tx_range``. The
    optional ``d_sink`` map provides precomputed node-to-sink distances.
    """
    def to_sink(n: SensorNode) -> float:
        if d_sink is not None:
            return d_sink[n.id]
        return distance(n.position, sink.position)

    if to_sink(node) <= node.tx_range:
        return RoutingDecision(RouteAction.SEND_TO_SINK)

    own = to_sink(node)
    best = None
    best_key = None
    for nb in neighbors:
        if not nb.alive or nb.id == node.id:
            continue
        d = to_sink(nb)
        if d >= own:
            continue
        key = (-nb.residual_energy, d, nb.id)
        if best_key is None or key < best_key:
            best, best_key = nb, key
    if best is not None:
        return RoutingDecision(RouteAction.SEND_TO_FORWARDER, target=best.id)
    if packet_kind is PacketKind.CRITICAL:
        return RoutingDecision(RouteAction.SEND_TO_EXTERNAL_WSN)
    return RoutingDecision(RouteAction.HOLD)


# ---------------------------------------------------------------------------
# Equilibrium diagnostic
# ---------------------------------------------------------------------------

@dataclass(frozen=True)
class EquilibriumProfile:
    """Truncated trigonometric series over logged traffic-mix windows.

    coeffs_a[n] is the forward fraction of window n, coeffs_b[n] the send
    fraction; a0 anchors the series at the initial per-node energy. The
    score is evaluated at the current round and compared against alpha_star
    as a per-round diagnostic flag (never a routing input).
    """
    a0: float
    coeffs_a: tuple[float, ...]
    coeffs_b: tuple[float, ...]
    L: int
    alpha_star: float = 0.0

    def __post_init__(self):
        if len(self.coeffs_a) != len(self.coeffs_b):
            raise ValueError("coefficient series must have equal length")
        if self.L < 1:
            raise ValueError("L must be >= 1")

    @property
    def series_length(self) -> int:
        return len(self.coeffs_a)


def equilibrium_score(p: EquilibriumProfile, x: float) -> float:
    if not 0 <= x <= p.L:
        raise ValueError(f"x must lie in [0, {p.L}], got {x}")
    total = p.a0
    for n in range(1, p.series_length + 1):
        phase = n * math.pi * x / p.L
        total += p.coeffs_a[n - 1] * math.sin(phase) + p.coeffs_b[n - 1] * math.cos(phase)
    return total


def equilibrium_ok(p: EquilibriumProfile, x: float) -> bool:
    return equilibrium_score(p, x) > p.alpha_star


# ---------------------------------------------------------------------------
# M-ATTEMPT
# ---------------------------------------------------------------------------

@dataclass(frozen=True)
class MattemptParams:
    temp_threshold: float = 38.5
    ambient: float = 37.0
    delta_tx: float = 0.05
    delta_rx: float = 0.03
    cooling: float = 0.1  # fraction of the above-ambient excess shed per round
    boost_multiplier: float = 2.0
    hello_period: int = 1

    def validate(self) -> list[str]:
        problems = []
        if not 0 <= self.cooling < 1:
            problems.append("mattempt.cooling: must lie in [0, 1)")
        if self.boost_multiplier < 1:
            problems.append("mattempt.boost_multiplier: must be >= 1")
        if self.hello_period < 1:
            problems.append("mattempt.hello_period: must be >= 1")
        if self.delta_tx < 0 or self.delta_rx < 0:
            problems.append("mattempt.delta_tx/delta_rx: must be >= 0")
        return problems


@dataclass
class MattemptState:
    hop_counts: dict[int, float]  # node id -> hops to sink, math.inf if unreachable
    params: MattemptParams


def mattempt_build_hopcounts(nodes: list[SensorNode], sink: Sink, tx_range: float,
                             params: MattemptParams | None = None,
                             adjacency: dict[int, list[int]] | None = None,
                             sink_reach: list[int] | None = None) -> MattemptState:
    """Breadth-first hop counts from the sink over the in-range adjacency.

    Dead nodes and nodes above the temperature threshold are excluded, which
    cuts every path through them; anything left unreachable gets an infinite
    hop count and will hold (or escalate) its traffic. Callers that rebuild
    every round can pass the static in-range ``adjacency`` (node id to ids
    within tx_range) and ``sink_reach`` (ids within tx_range of the sink) to
    skip recomputing pairwise distances.
    """
    params = params or MattemptParams()
    by_id = {n.id: n for n in nodes}
    if adjacency is None:
        adjacency = {
            n.id: [
                m.id for m in nodes
                if m.id != n.id and distance(n.position, m.position) <= tx_range
            ]
            for n in nodes
        }
    if sink_reach is None:
        sink_reach = [n.id for n in nodes if distance(n.position, sink.position) <= tx_range]

    def usable(i: int) -> bool:
        n = by_id[i]
        return n.alive and n.temperature <= params.temp_threshold

    hops: dict[int, float] = {n.id: math.inf for n in nodes}
    frontier = [i for i in sink_reach if usable(i)]
    level = 1
    while frontier:
        nxt = []
        for i in frontier:
            if hops[i] <= level:
                continue
            hops[i] = level
            for j in adjacency[i]:
                if hops[j] == math.inf and usable(j):
                    nxt.append(j)
        frontier = nxt
        level += 1
    return MattemptState(hop_counts=hops, params=params)


def mattempt_next_hop(node: SensorNode, packet_kind: PacketKind, state: MattemptState,
                      neighbors: list[SensorNode], sink: Sink,
                      d_sink: dict[int, float] | None = None) -> RoutingDecision:
    """Critical traffic goes straight to the sink with a boosted transmission;
    normal traffic descends the hop-count gradient."""
    def to_sink(n: SensorNode) -> float:
        if d_sink is not None:
            return d_sink[n.id]
        return distance(n.position, sink.position)

    if packet_kind is PacketKind.CRITICAL:
        return RoutingDecision(RouteAction.SEND_TO_SINK, boosted=True)

    own = state.hop_counts.get(node.id, math.inf)
    if own == 1:
        return RoutingDecision(RouteAction.SEND_TO_SINK)
    best = None
    best_key = None
    for nb in neighbors:
        if not nb.alive or nb.id == node.id:
            continue
        h = state.hop_counts.get(nb.id, math.inf)
        if h >= own:
            continue
        key = (h, to_sink(nb), nb.id)
        if best_key is None or key < best_key:
            best, best_key = nb, key
    if best is not None:
        return RoutingDecision(RouteAction.SEND_TO_FORWARDER, target=best.id)
    return RoutingDecision(RouteAction.HOLD)


def mattempt_temperature_step(params: MattemptParams, temperature: float,
                              tx_count: int, rx_count: int) -> float:
    """End-of-round temperature update: exponential relaxation toward ambient
    plus per-transmission and per-reception heating."""
    if tx_count < 0 or rx_count < 0:
        raise ValueError("activity counts must be >= 0")
    relaxed = params.ambient + (temperature - params.ambient) * (1.0 - params.cooling)
    return relaxed + tx_count * params.delta_tx + rx_count * params.delta_rx


# ---------------------------------------------------------------------------
# SIMPLE
# ---------------------------------------------------------------------------

@dataclass(frozen=True)
class SimpleParams:
    control_period: int = 1

    def validate(self) -> list[str]:
        if self.control_period < 1:
            return ["simple.control_period: must be >= 1"]
        return []


def simple_select_forwarder(nodes: list[SensorNode], sink: Sink,
                            d_sink: dict[int, float] | None = None) -> int | None:
    """Elect the round's common forwarder: argmin of distance-to-sink over
    residual energy among alive non-ECG nodes (the ECG node always transmits
    directly). Returns None when no node is eligible."""
    best = None
    best_key = None
    for n in nodes:
        if not n.alive or n.kind is SensorKind.ECG:
            continue
        if n.residual_energy <= 0:
            continue
        d = d_sink[n.id] if d_sink is not None else distance(n.position, sink.position)
        key = (d / n.residual_energy, n.id)
        if best_key is None or key < best_key:
            best, best_key = n, key
    return best.id if best is not None else None
