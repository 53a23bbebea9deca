"""Euclidean node/link model, link length classes, and cover/ruling predicates."""
from __future__ import annotations

import math
from dataclasses import dataclass, field
from typing import Iterable, Mapping

from .errors import ValidationError


@dataclass(frozen=True)
class Node:
    id: int
    x: float
    y: float

    def __post_init__(self):
        if not (math.isfinite(self.x) and math.isfinite(self.y)):
            raise ValidationError(f"node {self.id}: non-finite coordinates")

    @property
    def xy(self) -> tuple[float, float]:
        return (self.x, self.y)


@dataclass(frozen=True)
class Link:
    id: int
    sender: int
    receiver: int

    def __post_init__(self):
        if self.sender == self.receiver:
            raise ValidationError(f"link {self.id}: sender equals receiver")


def distance(u: Node, v: Node) -> float:
    return math.hypot(u.x - v.x, u.y - v.y)


@dataclass(frozen=True)
class LinkClasses:
    """Partition of links into length classes ``L_1 .. L_g``.

    Class ``i`` holds lengths in ``[2**(i-1) * d_min, 2**i * d_min)``; the top
    class additionally takes lengths equal to ``d_max``.
    """

    d_min: float
    d_max: float
    g: int
    classes: tuple[frozenset, ...]
    class_of: Mapping[int, int] = field(repr=False)

    def bound(self, i: int) -> float:
        """Upper length bound ``d_i = 2**i * d_min`` of class ``i``."""
        if not 1 <= i <= self.g:
            raise IndexError(f"class index {i} outside 1..{self.g}")
        return math.ldexp(self.d_min, i)

    def members(self, i: int) -> frozenset:
        return self.classes[i - 1]

    def longer_than(self, i: int) -> frozenset:
        out: set = set()
        for c in self.classes[i:]:
            out |= c
        return frozenset(out)


def link_diversity(d_min: float, d_max: float) -> int:
    """Smallest ``g`` with ``2**g * d_min >= d_max`` (i.e. ceil(log2(d_max/d_min)))."""
    g = max(0, math.ceil(math.log2(d_max / d_min)))
    # log2 can be off by one ulp near powers of two; settle with exact scaling
    while g > 0 and math.ldexp(d_min, g - 1) >= d_max:
        g -= 1
    while math.ldexp(d_min, g) < d_max:
        g += 1
    return g


def partition_link_classes(lengths: Mapping[int, float], d_min: float, d_max: float) -> LinkClasses:
    """Assign every link (given as ``{link_id: length}``) to its length class.

    A diversity of 0 (all lengths equal ``d_min == d_max``) is promoted to a
    single class so that phase loops always run at least once.
    """
    if not (0 < d_min <= d_max):
        raise ValidationError(f"need 0 < d_min <= d_max, got {d_min}, {d_max}")
    g = max(1, link_diversity(d_min, d_max))
    buckets: list[set] = [set() for _ in range(g)]
    class_of = {}
    for lid, d in lengths.items():
        if not (d_min <= d <= d_max):
            raise ValidationError(f"link {lid}: length {d!r} outside [{d_min!r}, {d_max!r}]")
        i = min(g, max(1, math.floor(math.log2(d / d_min)) + 1))
        while i > 1 and d < math.ldexp(d_min, i - 1):
            i -= 1
        while i < g and d >= math.ldexp(d_min, i):
            i += 1
        buckets[i - 1].add(lid)
        class_of[lid] = i
    return LinkClasses(d_min, d_max, g, tuple(frozenset(b) for b in buckets), class_of)


def is_covered(v: Node, W: Iterable[Node], omega: float) -> bool:
    return any(distance(v, u) <= omega for u in W)


@dataclass(frozen=True)
class Violation:
    kind: str  # "not-subset" | "separation" | "coverage"
    nodes: tuple[int, ...]
    distance: float | None = None


@dataclass(frozen=True)
class RulingVerdict:
    violations: tuple[Violation, ...] = ()

    @property
    def ok(self) -> bool:
        return not self.violations

    def __bool__(self):
        return self.ok


def verify_ruling(R: Iterable[Node], W: Iterable[Node], omega1: float, omega2: float) -> RulingVerdict:
    """Check the three ruling conditions of ``R`` over ``W``.

    Violations name the offending nodes: ``not-subset`` (r,), ``separation``
    (r, r') with their distance, ``coverage`` (w, nearest r or -1 when R is empty).
    """
    if omega1 > omega2:
        raise ValidationError(f"omega1={omega1} exceeds omega2={omega2}")
    R = sorted(R, key=lambda n: n.id)
    W = sorted(W, key=lambda n: n.id)
    w_ids = {w.id for w in W}
    out: list[Violation] = []
    for r in R:
        if r.id not in w_ids:
            out.append(Violation("not-subset", (r.id,)))
    for a in range(len(R)):
        for b in range(a + 1, len(R)):
            d = distance(R[a], R[b])
            if d < omega1:
                out.append(Violation("separation", (R[a].id, R[b].id), d))
    for w in W:
        best, best_d = -1, math.inf
        for r in R:
            d = distance(w, r)
            if d < best_d:
                best, best_d = r.id, d
        if best_d > omega2:
            out.append(Violation("coverage", (w.id, best), None if best < 0 else best_d))
    return RulingVerdict(tuple(out))
