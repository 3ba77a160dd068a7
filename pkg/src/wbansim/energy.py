"""Weighted per-action energy budget and per-node accounting.

Every chargeable action has a fixed cost in joules: self-computation,
a send to the destined node, a send to the external WSN gateway, a packet
forward, and a control-packet exchange. A round's budget is the weighted
sum of action frequencies. Energy never couples to transmission distance;
path loss is a reported metric, not an energy input.
"""
from __future__ import annotations

from dataclasses import dataclass
from enum import Enum

from .core import SensorNode


@dataclass(frozen=True)
class EnergyWeights:
    x_s: float  # self-computation / sensing
    x_d: float  # send to destined node (forwarder or sink)
    x_w: float  # send to external WSN gateway
    x_f: float  # forward one packet at a relay
    x_c: float  # control-packet exchange
    x_t: float  # death threshold: a node dies when residual would not stay above it

    def validate(self, allow_unconstrained: bool = False) -> list[str]:
        """Return the list of violated constraints (empty when valid)."""
        problems = []
        for name in ("x_s", "x_d", "x_w", "x_f", "x_c", "x_t"):
            if getattr(self, name) < 0:
                problems.append(f"energy.{name}: must be >= 0")
        if not allow_unconstrained:
            if abs(self.x_w - 100.0 * self.x_d) > 1e-12 * max(1.0, abs(self.x_w)):
                problems.append(
                    f"energy.x_w: must equal 100 * x_d ({100.0 * self.x_d!r}), got {self.x_w!r}"
                )
            if not (self.x_f < self.x_c < self.x_d):
                problems.append("energy.x_f/x_c/x_d: ordering x_f < x_c < x_d is required")
        return problems


@dataclass(frozen=True)
class ActionCounts:
    n1: int = 0  # self-computations
    n2: int = 0  # destined sends
    n3: int = 0  # external WSN sends
    n4: int = 0  # forwards
    n5: int = 0  # control exchanges

    def __add__(self, other: "ActionCounts") -> "ActionCounts":
        return ActionCounts(
            self.n1 + other.n1,
            self.n2 + other.n2,
            self.n3 + other.n3,
            self.n4 + other.n4,
            self.n5 + other.n5,
        )


class ChargeOutcome(Enum):
    APPLIED = "applied"
    DIED = "died"


@dataclass(frozen=True)
class ChargeResult:
    outcome: ChargeOutcome
    drained: float  # energy actually removed from the node


def round_cost(w: EnergyWeights, c: ActionCounts) -> float:
    """Energy for one accounting window: n1*x_s + n2*x_d + n3*x_w + n4*x_f + n5*x_c."""
    return c.n1 * w.x_s + c.n2 * w.x_d + c.n3 * w.x_w + c.n4 * w.x_f + c.n5 * w.x_c


def charge(node: SensorNode, cost: float, w: EnergyWeights) -> ChargeResult:
    """Deduct ``cost`` joules from a live node.

    If the deduction would leave the node at or below the death threshold,
    the node dies: its residual clamps to zero and it is marked dead. The
    action the charge paid for still counts as performed (last-gasp), so a
    dying node's final transmission completes.
    """
    if not node.alive:
        raise RuntimeError(f"charge on dead node {node.id} (engine bug)")
    if cost < 0:
        raise ValueError("charge cost must be >= 0")
    if node.residual_energy - cost > w.x_t:
        node.residual_energy -= cost
        return ChargeResult(ChargeOutcome.APPLIED, cost)
    drained = node.residual_energy
    node.residual_energy = 0.0
    node.alive = False
    return ChargeResult(ChargeOutcome.DIED, drained)
