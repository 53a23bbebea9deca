"""Problem instance: nodes, directed links and the SINR parameters they run under."""
from __future__ import annotations

from functools import cached_property
from typing import Iterable

from .errors import UnknownNodeError, ValidationError
from .geometry import Link, LinkClasses, Node, distance, partition_link_classes
from .sinr import SinrParams


class Instance:
    """Validated link-scheduling input.

    ``d_min``/``d_max`` are the length bounds every node shares; they default
    to the observed extremes of the link lengths. Treat instances as immutable.
    """

    def __init__(self, nodes: Iterable[Node], links: Iterable[Link], params: SinrParams,
                 d_min: float | None = None, d_max: float | None = None):
        node_map: dict[int, Node] = {}
        for v in nodes:
            if v.id in node_map:
                raise ValidationError(f"duplicate node id {v.id}")
            node_map[v.id] = v
        links = tuple(sorted(links, key=lambda l: l.id))
        index = {}
        for l in links:
            if l.id in index:
                raise ValidationError(f"duplicate link id {l.id}")
            index[l.id] = l
        self.nodes = dict(sorted(node_map.items()))
        self.links = links
        self.params = params
        self._link_index = index
        lengths = self._validate()
        if lengths:
            lo, hi = min(lengths.values()), max(lengths.values())
        else:
            lo = hi = 1.0
        self.d_min = lo if d_min is None else float(d_min)
        self.d_max = hi if d_max is None else float(d_max)
        if not 0 < self.d_min <= lo or not hi <= self.d_max:
            raise ValidationError(
                f"length bounds [{self.d_min}, {self.d_max}] do not contain observed [{lo}, {hi}]")
        if not params.supports(self.d_max):
            raise ValidationError(f"power {params.power} cannot support links of length d_max={self.d_max}")

    def _validate(self) -> dict[int, float]:
        pts = sorted(self.nodes.values(), key=lambda v: (v.x, v.y))
        for a, b in zip(pts, pts[1:]):
            if a.x == b.x and a.y == b.y:
                raise ValidationError(f"nodes {a.id} and {b.id} coincide")
        senders, receivers = {}, set()
        lengths = {}
        for l in self.links:
            for end in (l.sender, l.receiver):
                if end not in self.nodes:
                    raise ValidationError(f"link {l.id}: unknown node {end}")
            if l.sender in senders:
                raise ValidationError(f"node {l.sender} sends on links {senders[l.sender]} and {l.id}")
            senders[l.sender] = l.id
            receivers.add(l.receiver)
            lengths[l.id] = distance(self.nodes[l.sender], self.nodes[l.receiver])
        both = receivers & senders.keys()
        if both:
            raise ValidationError(f"nodes act as both sender and receiver: {sorted(both)}")
        return lengths

    def __repr__(self):
        return f"Instance(n={self.n}, m={self.m}, d_min={self.d_min}, d_max={self.d_max})"

    @property
    def m(self) -> int:
        return len(self.links)

    @property
    def n(self) -> int:
        return len(self.nodes)

    def node(self, nid: int) -> Node:
        try:
            return self.nodes[nid]
        except KeyError:
            raise UnknownNodeError(nid) from None

    def link(self, lid: int) -> Link:
        return self._link_index[lid]

    def distance(self, u: int, v: int) -> float:
        return distance(self.node(u), self.node(v))

    @cached_property
    def lengths(self) -> dict[int, float]:
        return {l.id: distance(self.nodes[l.sender], self.nodes[l.receiver]) for l in self.links}

    @cached_property
    def classes(self) -> LinkClasses:
        return partition_link_classes(self.lengths, self.d_min, self.d_max)

    @cached_property
    def sender_of(self) -> dict[int, int]:
        """link id -> sender node id."""
        return {l.id: l.sender for l in self.links}

    @cached_property
    def link_of_sender(self) -> dict[int, int]:
        return {l.sender: l.id for l in self.links}

    def senders(self, link_ids: Iterable[int]) -> set[int]:
        return {self.sender_of[lid] for lid in link_ids}

    def links_of(self, sender_ids: Iterable[int]) -> set[int]:
        return {self.link_of_sender[s] for s in sender_ids}

    def subset(self, link_ids: Iterable[int]) -> list[Link]:
        return [self._link_index[i] for i in sorted(link_ids)]
