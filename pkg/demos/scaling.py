"""Median slot counts as m grows, for both variants and both duplex modes.

The non-adaptive variant pays a log m factor for its phase count that the
adaptive one avoids; half duplex pays another log factor per round.
"""
import statistics

from sinrsched import SchedulerConfig, max_link_schedule
from sinrsched.adaptive import AdaptiveConfig, adaptive_max_link_schedule
from sinrsched.harness import default_side, generate_instance

seeds = range(10)
print(f"{'m':>5} {'duplex':>6} {'non-adaptive':>13} {'adaptive':>9}")
for m in (16, 64, 256):
    for duplex in ("full", "half"):
        non, ada = [], []
        for seed in seeds:
            inst = generate_instance(seed, m, default_side(m, 8.0), 1.0, 8.0)
            cfg = SchedulerConfig.theory(inst.params, duplex=duplex, seed=seed)
            non.append(max_link_schedule(inst, cfg).total_slots)
            ada.append(adaptive_max_link_schedule(inst, cfg, AdaptiveConfig.theory(cfg, inst.params)).total_slots)
        print(f"{m:>5} {duplex:>6} {statistics.median(non):>13} {statistics.median(ada):>9}")
