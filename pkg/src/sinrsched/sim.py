"""Slot-synchronous SINR simulator with physical carrier sensing.

Each node is driven by an :class:`Agent`. Per slot the engine collects one
action from every live agent, enforces the duplex rules, computes the exact
power every sensing node receives from that slot's transmitter set and hands
it back. Sensed power is the only thing an agent ever learns about the others;
there is no message payload anywhere in the engine.
"""
from __future__ import annotations

import enum
import json
from dataclasses import dataclass, field
from typing import Iterator, Mapping, Sequence

import numpy as np

from .errors import ProtocolViolation, ValidationError
from .geometry import Node
from .sinr import SinrParams, sensed_power


class Duplex(str, enum.Enum):
    HALF = "half"
    FULL = "full"


class Kind(str, enum.Enum):
    TRANSMIT = "transmit"
    SENSE = "sense"
    TRANSMIT_AND_SENSE = "transmit+sense"
    IDLE = "idle"


@dataclass(frozen=True)
class Action:
    kind: Kind
    power: float | None = None

    @property
    def transmits(self) -> bool:
        return self.kind in (Kind.TRANSMIT, Kind.TRANSMIT_AND_SENSE)

    @property
    def senses(self) -> bool:
        return self.kind in (Kind.SENSE, Kind.TRANSMIT_AND_SENSE)


IDLE = Action(Kind.IDLE)
SENSE = Action(Kind.SENSE)


def transmit(power: float) -> Action:
    return Action(Kind.TRANSMIT, power)


def transmit_and_sense(power: float) -> Action:
    return Action(Kind.TRANSMIT_AND_SENSE, power)


class Agent:
    """Per-node protocol state machine.

    Subclasses override :meth:`act` and :meth:`observe`. An agent sets
    ``terminal`` once it will only idle from then on; the engine stops polling it.
    Setting ``sleep_until`` promises idling before that slot, which lets the
    engine skip the agent without changing the outcome.
    """

    def __init__(self, node_id: int):
        self.node_id = node_id
        self.terminal = False
        self.sleep_until = 0
        self.rng: np.random.Generator | None = None

    def start(self, rng: np.random.Generator) -> None:
        self.rng = rng

    def act(self, slot: int) -> Action:
        return IDLE

    def observe(self, slot: int, sensed: float | None) -> None:
        pass


@dataclass(frozen=True)
class SimConfig:
    duplex: Duplex
    seed: int
    max_slots: int
    power_levels: tuple[float, ...]
    tag: int = 0

    def __post_init__(self):
        if self.max_slots <= 0:
            raise ValidationError("max_slots must be positive")
        if not self.power_levels:
            raise ValidationError("power_levels must be non-empty")
        object.__setattr__(self, "duplex", Duplex(self.duplex))
        object.__setattr__(self, "power_levels", tuple(float(p) for p in self.power_levels))


@dataclass(frozen=True)
class SlotRecord:
    slot: int
    actions: Mapping[int, Action]  # non-idle actions only
    sensed: Mapping[int, float]

    def transmitters(self) -> dict[int, float]:
        return {v: a.power for v, a in self.actions.items() if a.transmits}


TRACE_FIELDS = ("slot", "node", "action", "power", "sensed")


@dataclass
class SimTrace:
    records: list[SlotRecord] = field(default_factory=list)
    slots: int = 0
    timed_out: bool = False

    def __iter__(self) -> Iterator[SlotRecord]:
        return iter(self.records)

    def iter_rows(self) -> Iterator[dict]:
        for rec in self.records:
            for v in sorted(rec.actions.keys() | rec.sensed.keys()):
                a = rec.actions.get(v, IDLE)
                yield {"slot": rec.slot, "node": v, "action": a.kind.value,
                       "power": a.power, "sensed": rec.sensed.get(v)}

    def to_ndjson(self) -> str:
        """One line per (slot, non-idle node); keys in ``TRACE_FIELDS`` order."""
        return "".join(json.dumps(row) + "\n" for row in self.iter_rows())

    @classmethod
    def from_ndjson(cls, text: str, slots: int | None = None, timed_out: bool = False) -> "SimTrace":
        by_slot: dict[int, tuple[dict, dict]] = {}
        for line in text.splitlines():
            if not line.strip():
                continue
            row = json.loads(line)
            acts, sensed = by_slot.setdefault(row["slot"], ({}, {}))
            kind = Kind(row["action"])
            if kind is not Kind.IDLE:
                acts[row["node"]] = Action(kind, row["power"])
            if row["sensed"] is not None:
                sensed[row["node"]] = row["sensed"]
        records = [SlotRecord(s, *by_slot[s]) for s in sorted(by_slot)]
        last = records[-1].slot + 1 if records else 0
        return cls(records, last if slots is None else slots, timed_out)


def derive_node_rng(master_seed: int, node_id: int, context_tag: int) -> np.random.Generator:
    """Counter-based stream keyed by ``(seed, node, tag)``; independent of iteration order."""
    key = [int(master_seed) & 0xFFFFFFFFFFFFFFFF, int(node_id) & 0xFFFFFFFFFFFFFFFF,
           int(context_tag) & 0xFFFFFFFFFFFFFFFF]
    return np.random.Generator(np.random.Philox(np.random.SeedSequence(key)))


def run_slots(agents: Sequence[Agent], config: SimConfig, params: SinrParams,
              nodes: Mapping[int, Node]) -> SimTrace:
    """Run agents slot by slot until all are terminal or ``max_slots`` elapse.

    Returns the trace; ``timed_out`` is set when the slot limit cut off
    agents that were still live.
    """
    ids = [a.node_id for a in agents]
    if len(set(ids)) != len(ids):
        raise ValidationError("two agents drive the same node")
    for nid in ids:
        if nid not in nodes:
            raise ValidationError(f"agent for unknown node {nid}")
    levels = set(config.power_levels)
    for a in agents:
        a.start(derive_node_rng(config.seed, a.node_id, config.tag))

    trace = SimTrace()
    live = [a for a in agents if not a.terminal]
    slot = 0
    while live and slot < config.max_slots:
        actions: dict[int, Action] = {}
        awake = [a for a in live if a.sleep_until <= slot]
        for a in awake:
            act = a.act(slot)
            if act.kind is Kind.IDLE:
                continue
            if act.kind is Kind.TRANSMIT_AND_SENSE and config.duplex is Duplex.HALF:
                raise ProtocolViolation(f"node {a.node_id} transmits and senses in slot {slot} on a half-duplex radio")
            if act.transmits and act.power not in levels:
                raise ProtocolViolation(f"node {a.node_id} uses power {act.power} outside the configured levels")
            actions[a.node_id] = act
        tx = {v: act.power for v, act in actions.items() if act.transmits}
        tx_nodes = [nodes[v] for v in tx]
        sensed = {v: sensed_power(tx_nodes, nodes[v], params, tx)
                  for v, act in actions.items() if act.senses}
        for a in awake:
            a.observe(slot, sensed.get(a.node_id))
        trace.records.append(SlotRecord(slot, actions, sensed))
        slot += 1
        if any(a.terminal for a in awake):
            live = [a for a in live if not a.terminal]
    trace.slots = slot
    trace.timed_out = bool(live)
    return trace


def check_physics(trace: SimTrace, params: SinrParams, nodes: Mapping[int, Node]) -> list[tuple[int, int]]:
    """Recompute every sensed value offline; return ``(slot, node)`` pairs that differ."""
    bad = []
    for rec in trace:
        tx = rec.transmitters()
        tx_nodes = [nodes[v] for v in tx]
        for v, val in rec.sensed.items():
            if sensed_power(tx_nodes, nodes[v], params, tx) != val:
                bad.append((rec.slot, v))
    return bad


def transmit_and_sense_slots(trace: SimTrace) -> list[tuple[int, int]]:
    return [(rec.slot, v) for rec in trace for v, a in rec.actions.items() if a.kind is Kind.TRANSMIT_AND_SENSE]
