"""``python -m sinrsched {gen,run,oracle,verify,sweep}``."""
from __future__ import annotations

import argparse
import json
import sys
from pathlib import Path

from ..instance import Instance
from ..oracle import brute_force_opt, centralized_greedy
from ..sinr import is_independent
from .experiment import ALGORITHMS, PRESETS, ExperimentSpec, run_experiment, run_one
from .generate import default_side, generate_instance
from .io import dumps, instance_to_dict, load_instance, save_instance


def parse_seeds(text: str) -> list[int]:
    """``"3"``, ``"0-99"`` or ``"1,4,9"``."""
    out = []
    for part in text.split(","):
        if "-" in part.strip()[1:]:
            lo, hi = part.rsplit("-", 1)
            out.extend(range(int(lo), int(hi) + 1))
        else:
            out.append(int(part))
    return out


def _emit(text: str, path) -> None:
    if path:
        Path(path).write_text(text)
    else:
        sys.stdout.write(text)


def _add_instance_args(p):
    p.add_argument("--instance", help="instance JSON file")
    p.add_argument("--m", type=int, help="generate this many links instead of reading a file")
    p.add_argument("--side", type=float, help="square side for generated instances (default d_max * max(2.5, sqrt(m)))")
    p.add_argument("--d-min", type=float, default=1.0)
    p.add_argument("--d-max", type=float, default=8.0)


def _instance_source(args) -> dict:
    if (args.instance is None) == (args.m is None):
        raise SystemExit("give exactly one of --instance or --m")
    if args.instance:
        return {"file": args.instance}
    side = args.side if args.side is not None else default_side(args.m, args.d_max)
    return {"generate": {"m": args.m, "side": side, "d_min": args.d_min, "d_max": args.d_max}}


def cmd_gen(args) -> int:
    side = args.side if args.side is not None else default_side(args.m, args.d_max)
    inst = generate_instance(args.seed, args.m, side, args.d_min, args.d_max)
    if args.out:
        save_instance(inst, args.out)
    else:
        sys.stdout.write(dumps(instance_to_dict(inst)))
    return 0


def _spec(args, seeds) -> ExperimentSpec:
    return ExperimentSpec(_instance_source(args), seeds, args.algorithm, args.duplex, args.preset,
                          args.oracle, args.max_m)


def cmd_run(args) -> int:
    spec = _spec(args, [args.seed])
    row, doc = run_one(spec, args.seed)
    doc["metrics"] = {k: getattr(row, k) for k in ("m", "n", "g", "S", "slots", "opt", "ratio",
                                                    "independent", "timed_out", "ruling_valid")}
    _emit(dumps(doc), args.out)
    return 1 if row.correctness_failure else 0


def cmd_oracle(args) -> int:
    inst = load_instance(args.instance)
    opt = brute_force_opt(inst, args.max_m)
    doc = {"opt": sorted(opt.best_set), "size": opt.size, "subsets_examined": opt.subsets_examined,
           "greedy": sorted(centralized_greedy(inst))}
    _emit(dumps(doc), args.out)
    return 0


def _selected(doc: dict) -> list[int]:
    if "schedule" in doc:
        return doc["schedule"]["S"]
    if "S" in doc:
        return doc["S"]
    raise SystemExit("result file has no selected link set")


def cmd_verify(args) -> int:
    inst: Instance = load_instance(args.instance)
    S = _selected(json.loads(Path(args.result).read_text()))
    verdict = is_independent(inst.subset(S), inst.nodes, inst.params)
    for lid, sinr in verdict.failures:
        print(f"link {lid}: SINR {sinr!r} below beta={inst.params.beta!r}")
    print(f"{len(S)} links, independent={'yes' if verdict.ok else 'no'}")
    return 0 if verdict.ok else 1


def cmd_sweep(args) -> int:
    if args.spec:
        spec = ExperimentSpec.from_json(Path(args.spec).read_text())
    else:
        if args.seeds is None:
            raise SystemExit("--seeds is required without --spec")
        spec = _spec(args, parse_seeds(args.seeds))
    outcome = run_experiment(spec, args.out_dir)
    if not args.out_dir:
        sys.stdout.write(outcome.csv_text)
    for r in outcome.failures:
        print(f"seed {r.seed}: correctness failure {r.error or ''}".rstrip(), file=sys.stderr)
    return outcome.exit_code


def build_parser() -> argparse.ArgumentParser:
    ap = argparse.ArgumentParser(prog="sinrsched", description=__doc__)
    sub = ap.add_subparsers(dest="cmd", required=True)

    g = sub.add_parser("gen", help="generate a random instance")
    g.add_argument("--seed", type=int, required=True)
    g.add_argument("--m", type=int, required=True)
    g.add_argument("--side", type=float, help="default d_max * max(2.5, sqrt(m))")
    g.add_argument("--d-min", type=float, default=1.0)
    g.add_argument("--d-max", type=float, default=8.0)
    g.add_argument("--out")
    g.set_defaults(func=cmd_gen)

    def algo_args(p):
        p.add_argument("--algorithm", choices=ALGORITHMS, default="distributed-nonadaptive")
        p.add_argument("--duplex", choices=("full", "half"), default="full")
        p.add_argument("--preset", choices=PRESETS, default="theory-safe")
        p.add_argument("--oracle", action="store_true", help="brute-force OPT and report the ratio")
        p.add_argument("--max-m", type=int, default=14)

    r = sub.add_parser("run", help="schedule one instance with one seed")
    _add_instance_args(r)
    algo_args(r)
    r.add_argument("--seed", type=int, required=True)
    r.add_argument("--out")
    r.set_defaults(func=cmd_run)

    o = sub.add_parser("oracle", help="exact OPT and the greedy baseline")
    o.add_argument("--instance", required=True)
    o.add_argument("--max-m", type=int, default=14)
    o.add_argument("--out")
    o.set_defaults(func=cmd_oracle)

    v = sub.add_parser("verify", help="check a result's link set against the SINR inequality")
    v.add_argument("--instance", required=True)
    v.add_argument("--result", required=True)
    v.set_defaults(func=cmd_verify)

    s = sub.add_parser("sweep", help="many seeds, one metrics CSV")
    s.add_argument("--spec", help="experiment spec JSON (overrides the flags below)")
    _add_instance_args(s)
    algo_args(s)
    s.add_argument("--seeds", help="e.g. 0-99 or 1,2,5")
    s.add_argument("--out-dir")
    s.set_defaults(func=cmd_sweep)
    return ap


def main(argv=None) -> int:
    args = build_parser().parse_args(argv)
    return args.func(args)
