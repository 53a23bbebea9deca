"""Scheduling with per-class scheduling powers.

Step 2 of each phase becomes: a constant-density dominating set of the
candidate senders at range ``omega3``, a ruling over that set with
``b_max = C9`` (so no ``log m`` phase factor), and a one-slot postprocessing
that puts every non-member candidate into ``Z'``. Data transmission still uses
the uniform power ``P``.
"""
from __future__ import annotations

import math
from dataclasses import dataclass

from .errors import ValidationError
from .geometry import LinkClasses, Node, distance
from .instance import Instance
from .oracle import DominatingSet, sequential_dominating_set
from .ruling import RulingConfig, RulingResult, construct_ruling, ruling_ratio
from .scheduler import SchedulerConfig, ScheduleResult, run_phases
from .sim import Duplex
from .sinr import SinrParams


def power_level_for_class(i: int, gamma3: float, params: SinrParams, classes: LinkClasses) -> float:
    """``P_i = beta N (gamma3 d_i)**alpha``: the power whose transmission range is ``gamma3 d_i``."""
    return params.beta * params.noise * (gamma3 * classes.bound(i)) ** params.alpha


@dataclass(frozen=True)
class AdaptiveConfig:
    gamma3: float = 3.0
    gamma4: float = 4.0
    C9: int = 9
    c_pre: float = 1.0

    @classmethod
    def theory(cls, sched: SchedulerConfig, params: SinrParams, **kw) -> "AdaptiveConfig":
        # gamma3 = gamma1 keeps omega1-balls inside the omega3-balls the density bound speaks about
        ratio = ruling_ratio(params.alpha, sched.ruling.ratio_form)
        return cls(sched.gamma1, ratio * sched.gamma1, **kw)

    def validate(self, params: SinrParams, sched: SchedulerConfig) -> None:
        if self.C9 < 1 or self.c_pre < 0:
            raise ValidationError("need C9 >= 1 and c_pre >= 0")
        if not self.gamma3 > 0 or not self.gamma4 > sched.gamma1:
            raise ValidationError("need gamma3 > 0 and gamma4 > gamma1")
        if sched.gamma2 < self.gamma3 + self.gamma4:
            raise ValidationError(f"need gamma2 >= gamma3 + gamma4, got {sched.gamma2} < {self.gamma3 + self.gamma4}")
        if sched.theory_safe:
            need = ruling_ratio(params.alpha, sched.ruling.ratio_form) * sched.gamma1
            if self.gamma4 < need:
                raise ValidationError(f"theory-safe mode needs gamma4 >= {need}")
            if self.gamma3 < sched.gamma1:
                raise ValidationError("theory-safe mode needs gamma3 >= gamma1 for the C9 density bound")

    def power_levels(self, params: SinrParams, classes: LinkClasses) -> tuple[float, ...]:
        return tuple(power_level_for_class(i, self.gamma3, params, classes) for i in range(1, classes.g + 1))


def preprocessing_slots(m: int, c_pre: float) -> int:
    """Slots charged for the dominating-set protocol, ``ceil(c_pre * log2 m)``."""
    return math.ceil(c_pre * math.log2(m)) if m > 1 else 0


@dataclass
class AdaptiveStep:
    R_hat: frozenset
    Z_prime: frozenset
    dom: DominatingSet
    ruling: RulingResult
    slots: int
    pre_slots: int
    timed_out: bool
    omega: dict  # omega1..omega4 of the phase


def adaptive_phase_step2(instance: Instance, J_a_senders, J_b_senders, i: int, sched: SchedulerConfig,
                         config: AdaptiveConfig, duplex: Duplex | None = None,
                         seed: int | None = None) -> AdaptiveStep:
    """Dominating set, ruling over it with ``b_max = C9`` at power ``P_i``, then ``Z'``."""
    params = instance.params
    config.validate(params, sched)
    duplex = sched.duplex if duplex is None else Duplex(duplex)
    seed = sched.seed if seed is None else seed
    A, B = frozenset(J_a_senders), frozenset(J_b_senders)
    d_i = instance.classes.bound(i)
    om = {"omega1": sched.gamma1 * d_i, "omega2": sched.gamma2 * d_i,
          "omega3": config.gamma3 * d_i, "omega4": config.gamma4 * d_i}
    pre = preprocessing_slots(instance.m, config.c_pre)
    nodes = instance.nodes
    if A:
        dom = sequential_dominating_set([nodes[v] for v in sorted(A)], om["omega3"], config.C9)
    else:
        dom = DominatingSet((), 0, 0, config.C9)
    p_i = power_level_for_class(i, config.gamma3, params, instance.classes)
    rc = RulingConfig(om["omega1"], om["omega4"], config.C9, sched.ruling.C4, sched.ruling.C5,
                      sched.ruling.eta, p_i, sched.theory_safe, sched.ruling.ratio_form)
    res = construct_ruling(nodes, dom.ids, B, rc, params, duplex, seed=seed, tag=i)
    Z_prime = res.Z_hat | (A - res.R_hat)
    return AdaptiveStep(res.R_hat, frozenset(Z_prime), dom, res, pre + res.slots_used + 1, pre,
                        res.timed_out, om)


def postprocessing_errors(nodes, A, B, R, Z_prime, omega1: float, omega2: float) -> list[str]:
    """The three properties ``Z'`` must have with respect to candidates ``A`` and passives ``B``."""
    errs = []
    Rn = [nodes[r] for r in R]

    def covered(v, w):
        return any(distance(nodes[v], r) <= w for r in Rn)

    if Z_prime & A != A - R:
        errs.append("Z' ∩ A != A \\ R")
    low = {v for v in B if covered(v, omega1)}
    if not low <= Z_prime:
        errs.append(f"omega1-covered passives missing from Z': {sorted(low - Z_prime)}")
    far = {v for v in Z_prime & B if not covered(v, omega2)}
    if far:
        errs.append(f"Z' passives not omega2-covered: {sorted(far)}")
    return errs


def dominating_set_errors(W: list[Node], dom: DominatingSet, rng: float) -> list[str]:
    errs = []
    ids = {v.id for v in W}
    if not dom.ids <= ids:
        errs.append("dominating set not a subset of W")
    for v in W:
        k = sum(1 for u in dom.nodes if distance(v, u) <= rng)
        if not 1 <= k <= dom.C9:
            errs.append(f"node {v.id} sees {k} dominators within range")
    return errs


def _adaptive_step(config: AdaptiveConfig):
    def step(instance, i, J_a, J_b, sched, omega1, omega2):
        st = adaptive_phase_step2(instance, instance.senders(J_a), instance.senders(J_b), i, sched, config)
        J_r = frozenset(instance.links_of(st.R_hat))
        J_z = frozenset(instance.links_of(st.Z_prime))
        extra = {"separated": st.ruling.check(instance.nodes).separated, "dom_size": len(st.dom.nodes),
                 "dom_max_density": st.dom.max_density, "pre_slots": st.pre_slots}
        return J_r, J_z, st.slots, st.timed_out, st.ruling, extra
    return step


def adaptive_max_link_schedule(instance: Instance, sched: SchedulerConfig, config: AdaptiveConfig) -> ScheduleResult:
    """Same contract as :func:`sinrsched.scheduler.max_link_schedule`, fewer slots."""
    config.validate(instance.params, sched)
    return run_phases(instance, sched, _adaptive_step(config))
