"""Watch the randomized ruling protocol thin out a crowd of candidates.

Prints how many candidates are still undecided at the end of each phase,
then checks the outcome against the geometric definition.
"""
import numpy as np

from sinrsched import Node, RulingConfig, SinrParams, construct_ruling, slot_budget

params = SinrParams(3.0, 2.0, 1.0, 1.0, 4.0)
rng = np.random.default_rng(7)
pts = rng.uniform(0, 6.0, (60, 2))
nodes = {i: Node(i, float(x), float(y)) for i, (x, y) in enumerate(pts)}
W1, W2 = range(40), range(40, 60)

cfg = RulingConfig(1.0, 72.0, 60)
for duplex in ("full", "half"):
    r = construct_ruling(nodes, W1, W2, cfg, params, duplex, seed=1)
    print(f"{duplex} duplex: budget {slot_budget(60, cfg, duplex)} slots, phase length {r.phase_len}")
    n_phases = r.slots_used // r.phase_len
    left = [len(r.active_w1_after((k + 1) * r.phase_len - 1)) for k in range(n_phases)]
    print("  undecided after each phase:", left)
    print(f"  R = {sorted(r.R_hat)}")
    print(f"  {len(r.Z_hat & set(W1))} candidates and {len(r.Z_hat & set(W2))} passive nodes covered")
    c = r.check(nodes)
    print(f"  separated {c.separated}, ruling {c.ruling}, Z consistent {c.z_covers_omega1 and c.z_within_omega2}")
