"""Distributed constant-approximation link scheduling under SINR with carrier sensing."""
from .errors import (DomainError, InfeasibleLinkError, PreconditionError, ProtocolViolation,
                     RefusalError, SinrschedError, UnknownNodeError, ValidationError)
from .geometry import Link, LinkClasses, Node, distance, is_covered, partition_link_classes, verify_ruling
from .instance import Instance
from .sinr import (SinrParams, affectance, affectance_set, independence_via_affectance, is_independent,
                   min_feasible_power, proposition1_bound, sensed_power, thres)
from .sim import Duplex, SimConfig, SimTrace, derive_node_rng, run_slots
from .ruling import RulingConfig, RulingResult, construct_ruling, slot_budget
from .oracle import OptResult, brute_force_opt, centralized_greedy, greedy_ruling, sequential_dominating_set
from .scheduler import (SchedulerConfig, ScheduleResult, approx_ratio_certificate, check_affectance,
                        max_link_schedule)
from .adaptive import AdaptiveConfig, adaptive_max_link_schedule, adaptive_phase_step2, power_level_for_class

__version__ = "0.1.0"

__all__ = [
    "DomainError", "InfeasibleLinkError", "PreconditionError", "ProtocolViolation", "RefusalError",
    "SinrschedError", "UnknownNodeError", "ValidationError",
    "Link", "LinkClasses", "Node", "distance", "is_covered", "partition_link_classes", "verify_ruling",
    "Instance",
    "SinrParams", "affectance", "affectance_set", "independence_via_affectance", "is_independent",
    "min_feasible_power", "proposition1_bound", "sensed_power", "thres",
    "Duplex", "SimConfig", "SimTrace", "derive_node_rng", "run_slots",
    "RulingConfig", "RulingResult", "construct_ruling", "slot_budget",
    "OptResult", "brute_force_opt", "centralized_greedy", "greedy_ruling", "sequential_dominating_set",
    "SchedulerConfig", "ScheduleResult", "approx_ratio_certificate", "check_affectance", "max_link_schedule",
    "AdaptiveConfig", "adaptive_max_link_schedule", "adaptive_phase_step2", "power_level_for_class",
]
