"""Experiment specs, per-seed runs and the metrics CSV."""
from __future__ import annotations

import csv
import io
import json
import traceback
from dataclasses import asdict, dataclass, field
from pathlib import Path

from ..adaptive import AdaptiveConfig, adaptive_max_link_schedule
from ..errors import ValidationError
from ..geometry import verify_ruling
from ..instance import Instance
from ..oracle import brute_force_opt, centralized_greedy
from ..scheduler import SchedulerConfig, ScheduleResult, approx_ratio_certificate, c3, max_link_schedule
from ..sim import Duplex
from .generate import generate_instance
from .io import dumps, load_instance, schedule_to_dict

ALGORITHMS = ("centralized", "distributed-nonadaptive", "distributed-adaptive")
PRESETS = ("theory-safe", "practical")
CSV_FIELDS = ("seed", "m", "n", "g", "S", "slots", "opt", "ratio", "independent", "timed_out",
              "ruling_valid", "error")


@dataclass
class ExperimentSpec:
    """``instance`` is ``{"file": path}`` or ``{"generate": {"m", "side", "d_min", "d_max"}}``.

    Generated instances are drawn with each run's seed; a file instance is
    shared and the seed only drives the protocol.
    """
    instance: dict
    seeds: list
    algorithm: str = "distributed-nonadaptive"
    duplex: str = "full"
    preset: str = "theory-safe"
    oracle: bool = False
    max_m: int = 14

    def __post_init__(self):
        if not self.seeds:
            raise ValidationError("seeds must be non-empty")
        if self.algorithm not in ALGORITHMS:
            raise ValidationError(f"algorithm must be one of {ALGORITHMS}")
        if self.preset not in PRESETS:
            raise ValidationError(f"preset must be one of {PRESETS}")
        Duplex(self.duplex)
        if ("file" in self.instance) == ("generate" in self.instance):
            raise ValidationError("instance needs exactly one of 'file' or 'generate'")
        if self.oracle and "generate" in self.instance and self.instance["generate"]["m"] > self.max_m:
            raise ValidationError(f"oracle needs m <= max_m={self.max_m}")

    @classmethod
    def from_json(cls, text: str) -> "ExperimentSpec":
        return cls(**json.loads(text))

    def to_json(self) -> str:
        return dumps(asdict(self))

    def make_instance(self, seed: int) -> Instance:
        if "file" in self.instance:
            return load_instance(self.instance["file"])
        g = self.instance["generate"]
        return generate_instance(seed, int(g["m"]), float(g["side"]), float(g["d_min"]), float(g["d_max"]))


@dataclass
class MetricsRow:
    seed: int
    m: int
    n: int
    g: int
    S: int = 0
    slots: int = 0
    opt: int | None = None
    ratio: float | None = None
    independent: bool = False
    timed_out: bool = False
    ruling_valid: bool = True
    error: str = ""

    @property
    def correctness_failure(self) -> bool:
        if self.error:
            return True
        if not self.timed_out and not self.independent:
            return True
        return bool(self.ratio_violation)

    ratio_violation: bool = field(default=False, repr=False)


def scheduler_config(spec: ExperimentSpec, inst: Instance, seed: int) -> SchedulerConfig:
    duplex = Duplex(spec.duplex)
    if spec.preset == "theory-safe":
        return SchedulerConfig.theory(inst.params, seed=seed, duplex=duplex)
    return SchedulerConfig.practical(seed=seed, duplex=duplex)


def adaptive_config(spec: ExperimentSpec, sched: SchedulerConfig, inst: Instance) -> AdaptiveConfig:
    if spec.preset == "theory-safe":
        return AdaptiveConfig.theory(sched, inst.params)
    return AdaptiveConfig()


def rulings_valid(inst: Instance, res: ScheduleResult) -> bool:
    """Every completed phase's selected senders form an (omega1, omega2)-ruling of its candidates."""
    for ph in res.phases:
        if ph.ruling is None or ph.timed_out:
            continue
        R = [inst.nodes[v] for v in inst.senders(ph.J_r)]
        W = [inst.nodes[v] for v in inst.senders(ph.J_a)]
        if not verify_ruling(R, W, ph.omega1, ph.omega2).ok:
            return False
    return True


def run_one(spec: ExperimentSpec, seed: int) -> tuple[MetricsRow, dict]:
    inst = spec.make_instance(seed)
    row = MetricsRow(seed, inst.m, inst.n, inst.classes.g)
    sched = scheduler_config(spec, inst, seed)
    doc: dict = {"seed": seed, "algorithm": spec.algorithm}
    if spec.algorithm == "centralized":
        S = centralized_greedy(inst, psi=sched.psi)
        res = ScheduleResult(S, [], 0, False)
    elif spec.algorithm == "distributed-nonadaptive":
        res = max_link_schedule(inst, sched)
    else:
        res = adaptive_max_link_schedule(inst, sched, adaptive_config(spec, sched, inst))
    row.S, row.slots, row.timed_out = len(res.S), res.total_slots, res.timed_out
    row.independent = res.independent(inst).ok
    row.ruling_valid = rulings_valid(inst, res)
    doc["schedule"] = schedule_to_dict(res)
    if spec.oracle:
        opt = brute_force_opt(inst, spec.max_m)
        rep = approx_ratio_certificate(res, opt, sched, inst.params)
        row.opt, row.ratio = opt.size, rep.ratio
        row.ratio_violation = not res.timed_out and not rep.ok
        doc["opt"] = {"best_set": sorted(opt.best_set), "size": opt.size, "C3": rep.C3}
    return row, doc


@dataclass
class ExperimentOutcome:
    rows: list
    csv_text: str
    results: dict  # seed -> result document

    @property
    def failures(self) -> list:
        return [r for r in self.rows if r.correctness_failure]

    @property
    def exit_code(self) -> int:
        return 1 if self.failures else 0


def _fmt(v):
    if v is None:
        return ""
    if isinstance(v, bool):
        return "true" if v else "false"
    return repr(v) if isinstance(v, float) else str(v)


def metrics_csv(rows) -> str:
    buf = io.StringIO()
    w = csv.writer(buf, lineterminator="\n")
    w.writerow(CSV_FIELDS)
    for r in sorted(rows, key=lambda r: r.seed):
        w.writerow([_fmt(getattr(r, f)) for f in CSV_FIELDS])
    return buf.getvalue()


def run_experiment(spec: ExperimentSpec, out_dir=None) -> ExperimentOutcome:
    """One row per seed; an exception in one seed becomes that row's error, the rest still run."""
    rows, results = [], {}
    for seed in sorted(set(spec.seeds)):
        try:
            row, doc = run_one(spec, seed)
        except Exception as e:  # per-seed isolation
            m = spec.instance.get("generate", {}).get("m", 0)
            row = MetricsRow(seed, int(m), 0, 0, error=f"{type(e).__name__}: {e}")
            doc = {"seed": seed, "error": traceback.format_exception_only(type(e), e)[-1].strip()}
        rows.append(row)
        results[seed] = doc
    text = metrics_csv(rows)
    if out_dir is not None:
        out = Path(out_dir)
        (out / "results").mkdir(parents=True, exist_ok=True)
        (out / "metrics.csv").write_text(text)
        (out / "spec.json").write_text(spec.to_json())
        for seed, doc in results.items():
            (out / "results" / f"seed-{seed}.json").write_text(dumps(doc))
    return ExperimentOutcome(rows, text, results)


def c3_for(spec: ExperimentSpec, inst: Instance) -> float:
    sched = scheduler_config(spec, inst, 0)
    return c3(inst.params, sched.gamma2, sched.psi)
