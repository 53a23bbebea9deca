"""Phase-per-length-class distributed link scheduling with a single scheduling power.

Phase ``i`` handles class ``L_i``:

1. one carrier-sensing slot in which senders of already selected links
   transmit and every remaining sender compares what it hears against its own
   affectance threshold (links that fail are dropped);
2. a distributed ruling over the surviving senders of class ``i`` (candidates)
   and of longer classes (passive);
3. ruling members are selected; everything the ruling covered is dropped.
"""
from __future__ import annotations

import dataclasses
import math
from dataclasses import dataclass, field
from typing import Iterable

from .errors import ValidationError
from .instance import Instance
from .oracle import C1, C2, OptResult
from .ruling import RulingConfig, RulingResult, construct_ruling, ruling_ratio
from .sim import SENSE, Agent, Duplex, SimConfig, SimTrace, run_slots, transmit
from .sinr import SinrParams, _noise_margin, affectance_threshold, is_independent


def gamma1_theory(params: SinrParams, psi: float) -> float:
    a, b, f = params.alpha, params.beta, params.phi
    return (36 * b / (1 - psi) * (a - 1) / (a - 2) * (1 + f) / f) ** (1 / a) + 2


@dataclass(frozen=True)
class SchedulerConfig:
    psi: float = 0.5
    gamma1: float = 3.0
    gamma2: float = 7.0
    ruling: RulingConfig = RulingConfig(1.0, 2.0, 1, theory_safe=False)
    duplex: Duplex = Duplex.FULL
    seed: int = 0
    theory_safe: bool = False

    @classmethod
    def theory(cls, params: SinrParams, psi: float = 0.5, **kw) -> "SchedulerConfig":
        """Constants the analysis needs. ``gamma2`` also leaves room for the adaptive variant
        (``gamma2 = (ratio + 1) * gamma1``, see :mod:`sinrsched.adaptive`)."""
        g1 = gamma1_theory(params, psi)
        ratio = ruling_ratio(params.alpha)
        rc = RulingConfig(1.0, ratio, 1, theory_safe=True)
        return cls(psi, g1, (ratio + 1) * g1, rc, theory_safe=True, **kw)

    @classmethod
    def practical(cls, **kw) -> "SchedulerConfig":
        """Small constants for demos; correctness is left to the verifiers."""
        return cls(0.5, 3.0, 7.0, RulingConfig(1.0, 2.0, 1, theory_safe=False), theory_safe=False, **kw)

    def validate(self, params: SinrParams) -> None:
        if not 0 < self.psi < 1:
            raise ValidationError(f"psi must lie in (0, 1), got {self.psi}")
        if not 1 < self.gamma1 < self.gamma2:
            raise ValidationError(f"need 1 < gamma1 < gamma2, got {self.gamma1}, {self.gamma2}")
        if self.theory_safe:
            g1 = gamma1_theory(params, self.psi)
            if self.gamma1 < g1:
                raise ValidationError(f"theory-safe mode needs gamma1 >= {g1}")
            need = ruling_ratio(params.alpha, self.ruling.ratio_form) * self.gamma1
            if self.gamma2 < need:
                raise ValidationError(f"theory-safe mode needs gamma2 >= {need}")

    def c0(self, params: SinrParams) -> float:
        return affectance_threshold(params, self.psi)


def c3(params: SinrParams, gamma2: float, psi: float) -> float:
    """Approximation constant ``C1(gamma2) + C2(c0)``."""
    return C1(gamma2, params) + C2(affectance_threshold(params, psi), params)


# ---------------------------------------------------------------- step 1

def checka_threshold(d: float, params: SinrParams, c0: float, power: float | None = None) -> float:
    """Sensing threshold ``Thres(D_l)`` with ``D_l = (beta / (c0 (1 - d^a beta N / P)))**(1/a) * d``.

    Hearing at most this much from the chosen senders is the same as
    ``A(S, reverse(l)) <= c0``. Written out as ``c0 * margin * P / (beta d^a) + N``.
    """
    p = params.power if power is None else power
    return c0 * _noise_margin(d, params) * p / (params.beta * d ** params.alpha) + params.noise


class CheckAAgent(Agent):
    def __init__(self, node_id: int, transmitter: bool, power: float, threshold: float = math.nan):
        super().__init__(node_id)
        self.transmitter = transmitter
        self.power = power
        self.threshold = threshold
        self.passed: bool | None = None

    def act(self, slot):
        return transmit(self.power) if self.transmitter else SENSE

    def observe(self, slot, sensed):
        if not self.transmitter:
            self.passed = sensed <= self.threshold
        self.terminal = True


@dataclass
class CheckAResult:
    Y_a: frozenset
    Y_b: frozenset
    Y_a_bar: frozenset
    Y_b_bar: frozenset
    trace: SimTrace
    slots: int = 1


def check_affectance(instance: Instance, Y: Iterable[int], Y_prime: Iterable[int], S: Iterable[int],
                     psi: float = 0.5, duplex: Duplex = Duplex.FULL) -> CheckAResult:
    """One slot: senders of ``S`` transmit, senders of ``Y`` and ``Y'`` sense and self-classify.

    All arguments are link ids; the returned sets are link ids too.
    """
    Y, Yp, S = frozenset(Y), frozenset(Y_prime), frozenset(S)
    if Y & Yp or Y & S or Yp & S:
        raise ValidationError("Y, Y' and S must be pairwise disjoint")
    p = instance.params
    c0 = affectance_threshold(p, psi)
    agents = [CheckAAgent(instance.sender_of[l], True, p.power) for l in sorted(S)]
    sensers = {}
    for l in sorted(Y | Yp):
        a = CheckAAgent(instance.sender_of[l], False, p.power, checka_threshold(instance.lengths[l], p, c0))
        sensers[l] = a
        agents.append(a)
    if not agents:
        return CheckAResult(frozenset(), frozenset(), frozenset(), frozenset(), SimTrace(slots=1), 1)
    trace = run_slots(agents, SimConfig(duplex, 0, 1, (p.power,)), p, instance.nodes)
    ok = {l for l, a in sensers.items() if a.passed}
    return CheckAResult(frozenset(Y & ok), frozenset(Yp & ok), frozenset(Y - ok), frozenset(Yp - ok), trace, 1)


# ---------------------------------------------------------------- driver

@dataclass
class PhaseRecord:
    i: int
    J: frozenset           # class-i links still alive at phase start
    J_gt: frozenset        # alive links of longer classes
    J_a: frozenset
    J_b: frozenset
    J_a_bar: frozenset
    J_b_bar: frozenset
    J_r: frozenset
    J_z: frozenset
    J_unresolved: frozenset  # J_a links the ruling left undecided (only after a timeout)
    slots: int
    omega1: float
    omega2: float
    ruling: RulingResult | None = None
    timed_out: bool = False
    extra: dict = field(default_factory=dict)


@dataclass
class ScheduleResult:
    S: frozenset
    phases: list
    total_slots: int
    timed_out: bool

    def independent(self, instance: Instance):
        return is_independent(instance.subset(self.S), instance.nodes, instance.params)

    def rulings_good(self) -> bool:
        """Every phase's ruling members are pairwise ``omega1``-separated."""
        return all(ph.extra.get("separated", True) for ph in self.phases)


def bookkeeping_errors(instance: Instance, result: ScheduleResult) -> list[str]:
    """Check the per-phase set identities and that every link left in exactly one way."""
    errs = []
    exits: dict[int, str] = {}
    for ph in result.phases:
        tag = f"phase {ph.i}"
        if ph.J_a | ph.J_a_bar != ph.J or ph.J_a & ph.J_a_bar:
            errs.append(f"{tag}: J_a, J_a_bar do not split J_i")
        if ph.J_b | ph.J_b_bar != ph.J_gt or ph.J_b & ph.J_b_bar:
            errs.append(f"{tag}: J_b, J_b_bar do not split J_i^>")
        if not ph.J_r <= ph.J_a:
            errs.append(f"{tag}: J_r not inside J_a")
        if ph.J_z & ph.J_a != ph.J_a - ph.J_r - ph.J_unresolved:
            errs.append(f"{tag}: J_z ∩ J_a != J_a \\ J_r")
        for name in ("J_r", "J_a_bar", "J_b_bar", "J_z", "J_unresolved"):
            for l in getattr(ph, name):
                if l in exits:
                    errs.append(f"link {l} exits twice ({exits[l]}, {tag} {name})")
                exits[l] = f"{tag} {name}"
    missing = set(instance.sender_of) - exits.keys()
    if missing:
        errs.append(f"links never decided: {sorted(missing)}")
    if result.S != frozenset().union(*(ph.J_r for ph in result.phases)):
        errs.append("S is not the union of the J_r")
    return errs


def _ruling_step(instance, i, J_a, J_b, config, omega1, omega2):
    """Non-adaptive step 2: ConstructR(omega1, omega2, X(J_a), X(J_b), m)."""
    rc = dataclasses.replace(config.ruling, omega1=omega1, omega2=omega2, b_max=max(1, instance.m),
                             theory_safe=config.theory_safe)
    res = construct_ruling(instance.nodes, instance.senders(J_a), instance.senders(J_b), rc, instance.params,
                           config.duplex, seed=config.seed, tag=i)
    J_r = frozenset(instance.links_of(res.R_hat))
    J_z = frozenset(instance.links_of(res.Z_hat))
    extra = {"separated": res.check(instance.nodes).separated}
    return J_r, J_z, res.slots_used, res.timed_out, res, extra


def run_phases(instance: Instance, config: SchedulerConfig, step2) -> ScheduleResult:
    config.validate(instance.params)
    cls = instance.classes
    alive = set(instance.sender_of)
    S: set = set()
    phases, total, any_timeout = [], 0, False
    for i in range(1, cls.g + 1):
        J = frozenset(cls.members(i) & alive)
        J_gt = frozenset(cls.longer_than(i) & alive)
        d_i = cls.bound(i)
        omega1, omega2 = config.gamma1 * d_i, config.gamma2 * d_i
        chk = check_affectance(instance, J, J_gt, S, config.psi, config.duplex)
        slots = chk.slots
        J_r = J_z = frozenset()
        ruling, timed_out, extra = None, False, {}
        if chk.Y_a or chk.Y_b:
            J_r, J_z, used, timed_out, ruling, extra = step2(instance, i, chk.Y_a, chk.Y_b, config, omega1, omega2)
            slots += used
        unresolved = chk.Y_a - J_r - J_z
        S |= J_r
        alive -= J_r | chk.Y_a_bar | chk.Y_b_bar | J_z | unresolved
        phases.append(PhaseRecord(i, J, J_gt, chk.Y_a, chk.Y_b, chk.Y_a_bar, chk.Y_b_bar, J_r, J_z,
                                  frozenset(unresolved), slots, omega1, omega2, ruling, timed_out, extra))
        total += slots
        any_timeout |= timed_out
    return ScheduleResult(frozenset(S), phases, total, any_timeout)


def max_link_schedule(instance: Instance, config: SchedulerConfig) -> ScheduleResult:
    """Distributed schedule with one uniform power for both scheduling and data."""
    return run_phases(instance, config, _ruling_step)


@dataclass(frozen=True)
class RatioReport:
    size_S: int
    size_opt: int
    C3: float
    ratio: float
    ok: bool


def approx_ratio_certificate(result: ScheduleResult, opt: OptResult, config: SchedulerConfig,
                             params: SinrParams) -> RatioReport:
    bound = c3(params, config.gamma2, config.psi)
    s = len(result.S)
    ratio = opt.size / s if s else (math.inf if opt.size else 1.0)
    return RatioReport(s, opt.size, bound, ratio, opt.size <= bound * s)
