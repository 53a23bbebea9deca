"""The acceptance suite. Each test records one PASS/FAIL line, printed at the end of the run."""
import itertools
import math
import random
import statistics

import numpy as np

from sinrsched import (Node, RulingConfig, SchedulerConfig, construct_ruling, independence_via_affectance,
                       is_independent, max_link_schedule, proposition1_bound, sensed_power, slot_budget)
from sinrsched.adaptive import (AdaptiveConfig, adaptive_max_link_schedule, adaptive_phase_step2,
                                dominating_set_errors, postprocessing_errors)
from sinrsched.harness import ExperimentSpec, default_side, generate_instance, run_experiment
from sinrsched.harness.cli import main
from sinrsched.oracle import brute_force_opt
from sinrsched.scheduler import approx_ratio_certificate
from sinrsched.sim import transmit_and_sense_slots

import reference
from conftest import P4


def ac1_instance(seed):
    m = 1 + seed % 10
    return generate_instance(seed, m, side=max(2.5, 1.5 * m ** 0.5), d_min=0.2, d_max=1.0)


def test_ac1_sinr_affectance_equivalence(record):
    disagree, checked, both = 0, 0, set()
    for seed in range(100):
        inst = ac1_instance(seed)
        links = inst.links
        if inst.m <= 6:
            subsets = [S for k in range(inst.m + 1) for S in itertools.combinations(links, k)]
        else:
            rng = random.Random(seed)
            subsets = [[l for l in links if rng.random() < 0.5] for _ in range(1000)]
        for S in subsets:
            a = is_independent(S, inst.nodes, inst.params).ok
            b = independence_via_affectance(S, inst.nodes, inst.params).ok
            disagree += a != b
            checked += 1
            both.add(a)
    ok = disagree == 0 and both == {True, False}
    record("AC1 sinr/affectance equivalence", ok, f"{checked} subsets, {disagree} disagreements")
    assert ok


def ruling_inputs(seed):
    rng = np.random.default_rng([seed, 80])
    pts = rng.uniform(0, 8.0, (80, 2))
    nodes = {i: Node(i, float(x), float(y)) for i, (x, y) in enumerate(pts)}
    return nodes, range(40), range(40, 80)


THEORY_RULING = RulingConfig(1.0, 72.0, 80, theory_safe=True)


def test_ac2_ruling_correctness(record):
    completed = prop_fail = over_budget = 0
    for seed in range(100):
        nodes, W1, W2 = ruling_inputs(seed)
        r = construct_ruling(nodes, W1, W2, THEORY_RULING, P4, "full", seed)
        over_budget += r.slots_used > slot_budget(80, THEORY_RULING, "full")
        if r.complete:
            completed += 1
            c = r.check(nodes)
            prop_fail += not (c.subset and c.separated and c.w1_resolved and c.z_covers_omega1
                              and c.z_within_omega2 and c.ruling)
    ok = prop_fail == 0 and completed >= 95 and over_budget == 0
    record("AC2 ruling correctness (full duplex)", ok,
           f"completed {completed}/100, property failures {prop_fail}")
    assert ok


def test_ac3_half_duplex_goodness(record):
    good = invariant_ok = 0
    for seed in range(100):
        nodes, W1, W2 = ruling_inputs(seed)
        r = construct_ruling(nodes, W1, W2, THEORY_RULING, P4, "half", seed)
        good += r.check(nodes).separated
        invariant_ok += transmit_and_sense_slots(r.trace) == []
    ok = good >= 95 and invariant_ok == 100
    record("AC3 half-duplex goodness", ok, f"all-good {good}/100, no transmit+sense {invariant_ok}/100")
    assert ok


def test_ac4_scheduler_correctness(record):
    runs = completed = bad = 0
    for m in (8, 32, 128):
        for seed in range(100):
            inst = generate_instance(seed, m, default_side(m, 8.0), 1.0, 8.0)
            res = max_link_schedule(inst, SchedulerConfig.theory(inst.params, seed=seed))
            runs += 1
            if not res.timed_out:
                completed += 1
                bad += not res.independent(inst).ok
    ok = bad == 0
    record("AC4 scheduler correctness", ok, f"{completed}/{runs} completed, {bad} not independent")
    assert ok


def test_ac5_approximation_ratio(record):
    worst, violations, completed = 0.0, 0, 0
    worst_adaptive = 0.0
    for seed in range(100):
        m = 3 + seed % 10
        inst = generate_instance(seed, m, default_side(m, 8.0), 1.0, 8.0)
        cfg = SchedulerConfig.theory(inst.params, seed=seed)
        opt = brute_force_opt(inst, max_m=12)
        for adaptive in (False, True):
            res = adaptive_max_link_schedule(inst, cfg, AdaptiveConfig.theory(cfg, inst.params)) if adaptive \
                else max_link_schedule(inst, cfg)
            if res.timed_out:
                continue
            completed += 1
            rep = approx_ratio_certificate(res, opt, cfg, inst.params)
            violations += not rep.ok
            if adaptive:
                worst_adaptive = max(worst_adaptive, rep.ratio)
            else:
                worst = max(worst, rep.ratio)
    ok = violations == 0
    record("AC5 approximation ratio", ok,
           f"{completed} runs, {violations} violations, max OPT/|S| {worst:.2f} (adaptive {worst_adaptive:.2f})")
    assert ok


def fit_residual(ms, slots, g, k):
    """Least squares for log c in log(slots) = log c + log(g log2(m)^k); returns the residual sum."""
    resid = [math.log(s) - math.log(g * math.log2(m) ** k) for m, s in zip(ms, slots)]
    c = sum(resid) / len(resid)
    return sum((r - c) ** 2 for r in resid)


SCALING = {("half", False): 3, ("full", False): 2, ("half", True): 2, ("full", True): 1}


def test_ac6_slot_scaling(record):
    ms = (16, 64, 256)
    med = {}
    for (duplex, adaptive) in SCALING:
        med[duplex, adaptive] = []
        for m in ms:
            slots = []
            for seed in range(20):
                inst = generate_instance(seed, m, default_side(m, 8.0), 1.0, 8.0)
                assert inst.classes.g == 3
                cfg = SchedulerConfig.theory(inst.params, duplex=duplex, seed=seed)
                res = adaptive_max_link_schedule(inst, cfg, AdaptiveConfig.theory(cfg, inst.params)) if adaptive \
                    else max_link_schedule(inst, cfg)
                slots.append(res.total_slots)
            med[duplex, adaptive].append(statistics.median(slots))
    fails, notes = [], []
    for key, k in SCALING.items():
        r = {j: fit_residual(ms, med[key], 3, j) for j in (k - 1, k, k + 1)}
        best = min(r, key=r.get)
        notes.append(f"{key[0]}/{'ad' if key[1] else 'non'} k={best}")
        if best != k:
            fails.append(key)
    faster = all(med[d, True][-1] < med[d, False][-1] for d in ("full", "half"))
    ok = not fails and faster
    record("AC6 slot-count scaling", ok, ", ".join(notes) + f", adaptive faster at 256: {faster}")
    assert ok, (med, fails)


def test_ac7_sensed_power_bound(record):
    below = 0
    v = Node(0, 0.0, 0.0)
    for seed in range(100):
        pts, rho1, rho2 = reference.separated_config(seed)
        below += sensed_power(pts, v, P4) < proposition1_bound(pts, v, rho1, rho2, P4)
    record("AC7 sensed-power bound", below == 100, f"{below}/100 strictly below")
    assert below == 100


def test_ac8_substep_identities(record):
    bad = []
    for seed in range(100):
        m = 30 + seed % 30
        inst = generate_instance(seed, m, default_side(m, 8.0), 1.0, 8.0)
        sched = SchedulerConfig.theory(inst.params, seed=seed)
        acfg = AdaptiveConfig.theory(sched, inst.params)
        cls = inst.classes
        i = 1 + seed % cls.g
        A = inst.senders(cls.members(i))
        B = inst.senders(cls.longer_than(i))
        if not A:
            continue
        st = adaptive_phase_step2(inst, A, B, i, sched, acfg)
        om = st.omega
        errs = dominating_set_errors([inst.nodes[v] for v in A], st.dom, om["omega3"])
        errs += postprocessing_errors(inst.nodes, A, B, st.R_hat, st.Z_prime, om["omega1"], om["omega2"])
        if errs:
            bad.append((seed, errs))
    record("AC8 dominating-set and postprocessing identities", not bad, f"{len(bad)} failing phase inputs")
    assert not bad


def test_ac9_determinism(record, tmp_path, capsys):
    mismatched = []
    for algorithm in ("centralized", "distributed-nonadaptive", "distributed-adaptive"):
        for duplex in ("full", "half"):
            spec = ExperimentSpec({"generate": {"m": 10, "side": 25.0, "d_min": 1.0, "d_max": 8.0}}, [0, 1, 2],
                                  algorithm=algorithm, duplex=duplex, oracle=True)
            outs = [tmp_path / f"{algorithm}-{duplex}-{k}" for k in (0, 1)]
            for o in outs:
                run_experiment(spec, o)
            files = sorted(p.relative_to(outs[0]) for p in outs[0].rglob("*") if p.is_file())
            for f in files:
                if (outs[0] / f).read_bytes() != (outs[1] / f).read_bytes():
                    mismatched.append(f"{algorithm}/{duplex}/{f}")
    texts = []
    for _ in range(2):
        main(["run", "--m", "12", "--seed", "5", "--duplex", "half"])
        texts.append(capsys.readouterr().out)
    if texts[0] != texts[1]:
        mismatched.append("cli run")
    record("AC9 determinism", not mismatched, f"{len(mismatched)} differing outputs")
    assert not mismatched
