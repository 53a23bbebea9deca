"""Randomized distributed construction of an (omega1, omega2)-ruling via carrier sensing.

Every participant follows the same fixed slot schedule::

    for phase in 0 .. ceil(log2 b_max) + 1:
        for round in 1 .. C4 * ceil(log2 n):
            coordination   (1 slot full duplex, C5 * ceil(log2 n) slots half duplex)
            decision       (1 slot)

In a round each active ``W1`` node volunteers with probability
``2**(phase - 2) / b_max``. Volunteers that sense more than ``Thres(omega1)``
during coordination withdraw; the remaining volunteers transmit in the decision
slot and join ``R``, while every other active node that senses more than
``Thres(omega1)`` there joins ``Z``.
"""
from __future__ import annotations

import math
from dataclasses import dataclass, field
from typing import Iterable, Mapping

from .errors import ValidationError
from .geometry import Node, distance, verify_ruling
from .sim import IDLE, SENSE, Agent, Duplex, SimConfig, SimTrace, run_slots, transmit, transmit_and_sense
from .sinr import SinrParams, thres

W1_ROLE, W2_ROLE = 1, 2


def ceil_log2(x: int) -> int:
    if x < 1:
        raise ValueError(f"ceil_log2 of {x}")
    return (int(x) - 1).bit_length()


def ruling_ratio(alpha: float, form: str = "requirement") -> float:
    """Smallest ``omega2 / omega1`` for which far-field sensing cannot push a node into Z
    beyond ``omega2``.

    ``"requirement"`` (default) uses ``(36 (a-1)/(a-2)) ** (a-2)``; ``"coverage"`` uses the
    exponent ``1/(a-2)`` that the coverage argument itself needs. The two agree
    at ``alpha = 3``.
    """
    base = 36 * (alpha - 1) / (alpha - 2)
    if form == "requirement":
        return base ** (alpha - 2)
    if form == "coverage":
        return base ** (1 / (alpha - 2))
    raise ValueError(f"unknown ratio form {form!r}")


def eta_lower_bound(alpha: float) -> float:
    return (96 * (alpha - 1) / (alpha - 2)) ** (-1 / alpha)


@dataclass(frozen=True)
class RulingConfig:
    omega1: float
    omega2: float
    b_max: int
    C4: int = 4
    C5: int = 4
    eta: float | None = None
    scheduling_power: float | None = None
    theory_safe: bool = True
    ratio_form: str = "requirement"

    def validate(self, params: SinrParams) -> None:
        if not 0 < self.omega1 < self.omega2:
            raise ValidationError(f"need 0 < omega1 < omega2, got {self.omega1}, {self.omega2}")
        if self.b_max < 1 or self.C4 < 1 or self.C5 < 1:
            raise ValidationError("b_max, C4 and C5 must be >= 1")
        if self.theory_safe:
            need = ruling_ratio(params.alpha, self.ratio_form) * self.omega1
            if self.omega2 < need:
                raise ValidationError(f"theory-safe mode needs omega2 >= {need}, got {self.omega2}")
        if self.eta is not None and not self.eta > eta_lower_bound(params.alpha):
            raise ValidationError(f"eta must exceed {eta_lower_bound(params.alpha)}")
        if self.scheduling_power is not None and not self.scheduling_power > 0:
            raise ValidationError("scheduling power must be positive")


@dataclass(frozen=True)
class _Schedule:
    phases: int
    rounds: int
    coord_slots: int

    @property
    def round_len(self) -> int:
        return self.coord_slots + 1

    @property
    def phase_len(self) -> int:
        return self.rounds * self.round_len

    @property
    def total(self) -> int:
        return self.phases * self.phase_len

    def locate(self, slot: int) -> tuple[int, int]:
        """slot -> (phase, step within round)."""
        return slot // self.phase_len, slot % self.round_len


def _schedule(n: int, config: RulingConfig, duplex: Duplex) -> _Schedule:
    log_n = max(1, ceil_log2(max(1, n)))
    coord = 1 if Duplex(duplex) is Duplex.FULL else config.C5 * log_n
    return _Schedule(ceil_log2(config.b_max) + 2, config.C4 * log_n, coord)


def slot_budget(n: int, config: RulingConfig, duplex: Duplex) -> int:
    """Exact slot count of one ruling run over ``n`` participants."""
    if n < 1:
        raise ValueError("n must be >= 1")
    return _schedule(n, config, duplex).total


class RulingAgent(Agent):
    def __init__(self, node_id: int, role: int, sched: _Schedule, b_max: int,
                 power: float, threshold: float, full_duplex: bool):
        super().__init__(node_id)
        self.role = role
        self.sched = sched
        self.b_max = b_max
        self.power = power
        self.threshold = threshold
        self.full = full_duplex
        self.volunteer = False
        self.joined: tuple[str, int] | None = None

    def join_probability(self, phase: int) -> float:
        return min(1.0, max(0.0, 2.0 ** (phase - 2) / self.b_max))

    def act(self, slot):
        phase, step = self.sched.locate(slot)
        if step == 0:
            self.volunteer = self.role == W1_ROLE and self.rng.random() < self.join_probability(phase)
        if step < self.sched.coord_slots:
            if not self.volunteer:
                # nothing to do until this round's decision slot
                self.sleep_until = slot - step + self.sched.coord_slots
                return IDLE
            if self.full:
                return transmit_and_sense(self.power)
            if self.rng.random() < 0.5:
                return transmit(self.power)
            return SENSE
        if self.volunteer:
            return transmit(self.power)
        return SENSE

    def observe(self, slot, sensed):
        step = slot % self.sched.round_len
        if step < self.sched.coord_slots:
            if self.volunteer and sensed is not None and sensed > self.threshold:
                self.volunteer = False
        elif self.volunteer:
            self.joined = ("R", slot)
            self.terminal = True
        elif sensed is not None and sensed > self.threshold:
            self.joined = ("Z", slot)
            self.terminal = True
        if slot + 1 >= self.sched.total:
            self.terminal = True


@dataclass
class RulingCheck:
    subset: bool
    separated: bool          # every R node is good
    w1_resolved: bool        # Z ∩ W1 = W1 \ R
    z_covers_omega1: bool    # every W1 ∪ W2 node omega1-covered by R is in R ∪ Z
    z_within_omega2: bool    # Z ∩ W2 is omega2-covered by R
    ruling: bool             # R is an (omega1, omega2)-ruling of W1
    z_sensed_above: bool     # every Z join happened on a sensed value above Thres(omega1)

    @property
    def ok(self) -> bool:
        return all(vars(self).values())


@dataclass
class RulingResult:
    R_hat: frozenset
    Z_hat: frozenset
    slots_used: int
    timed_out: bool
    trace: SimTrace
    W1: frozenset = frozenset()
    W2: frozenset = frozenset()
    joined: dict = field(default_factory=dict)  # node -> ("R" | "Z", slot)
    config: RulingConfig | None = None
    threshold: float = math.nan
    phase_len: int = 0

    @property
    def complete(self) -> bool:
        return not self.timed_out

    def active_w1_after(self, slot: int) -> set:
        """W1 nodes still active once ``slot`` has finished."""
        return {v for v in self.W1 if v not in self.joined or self.joined[v][1] > slot}

    def check(self, nodes: Mapping[int, Node]) -> RulingCheck:
        cfg = self.config
        R = [nodes[v] for v in sorted(self.R_hat)]
        w1_rest = self.W1 - self.R_hat
        z2 = self.Z_hat & self.W2

        def covered(v, w):
            return any(distance(nodes[v], r) <= w for r in R)

        separated = all(distance(a, b) >= cfg.omega1 for i, a in enumerate(R) for b in R[i + 1:])
        return RulingCheck(
            subset=self.R_hat <= self.W1,
            separated=separated,
            w1_resolved=(self.Z_hat & self.W1) == w1_rest,
            z_covers_omega1=all(v in self.Z_hat for v in (self.W1 | self.W2) - self.R_hat
                                if covered(v, cfg.omega1)),
            z_within_omega2=all(covered(v, cfg.omega2) for v in z2),
            ruling=verify_ruling(R, [nodes[v] for v in self.W1], cfg.omega1, cfg.omega2).ok,
            z_sensed_above=self._z_joins_from_trace(),
        )

    def _z_joins_from_trace(self) -> bool:
        by_slot = {rec.slot: rec for rec in self.trace}
        for v, (kind, slot) in self.joined.items():
            if kind != "Z":
                continue
            rec = by_slot.get(slot)
            if rec is None or not rec.sensed.get(v, -math.inf) > self.threshold:
                return False
        return True


def construct_ruling(nodes: Mapping[int, Node], W1: Iterable[int], W2: Iterable[int],
                     config: RulingConfig, params: SinrParams, duplex: Duplex = Duplex.FULL,
                     seed: int = 0, tag: int = 0) -> RulingResult:
    """Run the distributed ruling protocol over ``W1`` (candidates) and ``W2`` (passive).

    ``timed_out`` reports W1 nodes left unresolved when the schedule ended.
    """
    duplex = Duplex(duplex)
    W1, W2 = frozenset(W1), frozenset(W2)
    if W1 & W2:
        raise ValidationError(f"nodes in both W1 and W2: {sorted(W1 & W2)}")
    config.validate(params)
    power = params.power if config.scheduling_power is None else config.scheduling_power
    threshold = thres(config.omega1, params, power)
    participants = sorted(W1 | W2)
    if not participants:
        return RulingResult(frozenset(), frozenset(), 0, False, SimTrace(), W1, W2, {}, config, threshold)
    sched = _schedule(len(participants), config, duplex)
    agents = [RulingAgent(v, W1_ROLE if v in W1 else W2_ROLE, sched, config.b_max, power,
                          threshold, duplex is Duplex.FULL) for v in participants]
    sim_cfg = SimConfig(duplex, seed, max_slots=64 * sched.total, power_levels=(power,), tag=tag)
    trace = run_slots(agents, sim_cfg, params, nodes)
    joined = {a.node_id: a.joined for a in agents if a.joined is not None}
    R = frozenset(v for v, (k, _) in joined.items() if k == "R")
    Z = frozenset(v for v, (k, _) in joined.items() if k == "Z")
    unresolved = W1 - R - Z
    return RulingResult(R, Z, sched.total, bool(unresolved) or trace.timed_out, trace,
                        W1, W2, joined, config, threshold, sched.phase_len)
