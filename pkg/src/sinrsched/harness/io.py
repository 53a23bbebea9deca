"""File formats: instance JSON, result JSON, metrics CSV."""
from __future__ import annotations

import json
from pathlib import Path

from ..errors import ValidationError
from ..geometry import Link, Node
from ..instance import Instance
from ..sinr import SinrParams

PARAM_KEYS = ("alpha", "beta", "noise", "phi", "power")


def instance_to_dict(inst: Instance) -> dict:
    return {
        "params": {k: getattr(inst.params, k) for k in PARAM_KEYS},
        "nodes": [{"id": v.id, "x": v.x, "y": v.y} for v in inst.nodes.values()],
        "links": [{"id": l.id, "sender": l.sender, "receiver": l.receiver} for l in inst.links],
        "length_bounds": {"d_min": inst.d_min, "d_max": inst.d_max},
    }


def instance_from_dict(doc: dict) -> Instance:
    try:
        params = SinrParams(**{k: float(doc["params"][k]) for k in PARAM_KEYS})
        nodes = [Node(int(v["id"]), float(v["x"]), float(v["y"])) for v in doc["nodes"]]
        links = [Link(int(l["id"]), int(l["sender"]), int(l["receiver"])) for l in doc["links"]]
    except (KeyError, TypeError) as e:
        raise ValidationError(f"malformed instance document: {e!r}") from None
    bounds = doc.get("length_bounds") or {}
    return Instance(nodes, links, params, bounds.get("d_min"), bounds.get("d_max"))


def dumps(doc) -> str:
    # json writes floats with repr, which round-trips exactly
    return json.dumps(doc, sort_keys=True, indent=1) + "\n"


def save_instance(inst: Instance, path) -> None:
    Path(path).write_text(dumps(instance_to_dict(inst)))


def load_instance(path) -> Instance:
    return instance_from_dict(json.loads(Path(path).read_text()))


def _ids(s):
    return sorted(s)


def schedule_to_dict(res) -> dict:
    return {
        "S": _ids(res.S),
        "total_slots": res.total_slots,
        "timed_out": res.timed_out,
        "phases": [{
            "i": ph.i, "omega1": ph.omega1, "omega2": ph.omega2, "slots": ph.slots, "timed_out": ph.timed_out,
            **{k: _ids(getattr(ph, k)) for k in
               ("J", "J_gt", "J_a", "J_b", "J_a_bar", "J_b_bar", "J_r", "J_z", "J_unresolved")},
        } for ph in res.phases],
    }


def ruling_to_dict(res) -> dict:
    return {"R_hat": _ids(res.R_hat), "Z_hat": _ids(res.Z_hat), "slots_used": res.slots_used,
            "timed_out": res.timed_out, "trace_slots": res.trace.slots}
