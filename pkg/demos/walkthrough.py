"""Schedule one random instance phase by phase and compare with the exact optimum.

    python demos/walkthrough.py [seed]
"""
import sys

from sinrsched import SchedulerConfig, max_link_schedule
from sinrsched.adaptive import AdaptiveConfig, adaptive_max_link_schedule
from sinrsched.harness import default_side, generate_instance
from sinrsched.oracle import brute_force_opt, centralized_greedy

seed = int(sys.argv[1]) if len(sys.argv) > 1 else 0
m = 12
inst = generate_instance(seed, m, default_side(m, 8.0), 1.0, 8.0)
print(inst)
for i, members in enumerate(inst.classes.classes, 1):
    print(f"  class {i} (lengths <= {inst.classes.bound(i):g}): links {sorted(members)}")

# small constants so that something actually happens in each phase
cfg = SchedulerConfig.practical(seed=seed)
res = max_link_schedule(inst, cfg)
print("\nnon-adaptive, practical constants")
for ph in res.phases:
    print(f"  phase {ph.i}: candidates {sorted(ph.J_a)}, dropped by sensing {sorted(ph.J_a_bar | ph.J_b_bar)}, "
          f"selected {sorted(ph.J_r)}, covered {sorted(ph.J_z)}, {ph.slots} slots")
print(f"  S = {sorted(res.S)}, {res.total_slots} slots, independent: {res.independent(inst).ok}")

ares = adaptive_max_link_schedule(inst, cfg, AdaptiveConfig())
print(f"\nadaptive: S = {sorted(ares.S)}, {ares.total_slots} slots, independent: {ares.independent(inst).ok}")

opt = brute_force_opt(inst)
print(f"\nexact optimum {sorted(opt.best_set)} (size {opt.size}, {opt.subsets_examined} subsets tried)")
print(f"sequential greedy {sorted(centralized_greedy(inst))}")
