"""Seeded random instances."""
from __future__ import annotations

import math

import numpy as np

from ..errors import SinrschedError, ValidationError
from ..geometry import Link, Node, distance, link_diversity
from ..instance import Instance
from ..sinr import SinrParams

EDGE = 1e-9  # relative distance kept from every class boundary


class GenerationError(SinrschedError):
    pass


def default_side(m: int, d_max: float) -> float:
    """Square side giving roughly one link per ``d_max``-cell."""
    return d_max * max(2.5, m ** 0.5)


def _near_boundary(d, d_min, g):
    for k in range(g + 1):
        b = math.ldexp(d_min, k)
        if abs(d - b) <= EDGE * b and not (k == 0 and d == d_min):
            return True
    return False


def generate_instance(seed: int, m: int, side: float, d_min: float, d_max: float,
                      params: SinrParams | None = None, max_tries: int = 1000) -> Instance:
    """``m`` links with senders uniform in ``[0, side]^2``, log-uniform lengths, random directions.

    Node ``2k`` sends on link ``k`` to node ``2k + 1``. Same arguments give the same instance.
    """
    if m < 1:
        raise ValidationError("m must be >= 1")
    if not 0 < d_min <= d_max:
        raise ValidationError("need 0 < d_min <= d_max")
    if not side > 2 * d_max:
        raise ValidationError("side must exceed 2 * d_max")
    params = params or SinrParams.default(d_max)
    g = link_diversity(d_min, d_max)
    rng = np.random.default_rng([seed, m])
    nodes: list[Node] = []
    seen = set()
    lo, hi = math.log(d_min), math.log(d_max)
    for k in range(m):
        for _ in range(max_tries):
            sx, sy = (float(t) for t in rng.uniform(0.0, side, 2))
            length = math.exp(rng.uniform(lo, hi))
            theta = rng.uniform(0.0, 2 * math.pi)
            rx, ry = sx + length * math.cos(theta), sy + length * math.sin(theta)
            s, r = Node(2 * k, sx, sy), Node(2 * k + 1, rx, ry)
            d = distance(s, r)
            if not d_min <= d <= d_max or _near_boundary(d, d_min, g):
                continue
            if (sx, sy) in seen or (rx, ry) in seen or (sx, sy) == (rx, ry):
                continue
            break
        else:
            raise GenerationError(f"could not place link {k} after {max_tries} tries")
        seen.update({(sx, sy), (rx, ry)})
        nodes += [s, r]
    links = [Link(k, 2 * k, 2 * k + 1) for k in range(m)]
    return Instance(nodes, links, params, d_min, d_max)
