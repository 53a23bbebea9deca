"""Ground truth at desk scale: exhaustive OPT, the sequential greedy baseline,
sequential ruling / dominating-set constructors and the checks of the two OPT counting bounds."""
from __future__ import annotations

import math
from dataclasses import dataclass, field
from typing import Iterable

from .errors import PreconditionError, RefusalError, ValidationError
from .geometry import Link, Node, distance
from .instance import Instance
from .sinr import SinrParams, affectance_set, affectance_threshold, is_independent, received, reverse


@dataclass(frozen=True)
class OptResult:
    best_set: frozenset
    size: int
    subsets_examined: int


def brute_force_opt(instance: Instance, max_m: int = 14, links: Iterable[int] | None = None) -> OptResult:
    """Maximum independent subset of ``links`` (default: all links) by exhaustive search.

    Depth-first over id-sorted tuples, so the first maximum found is the
    lexicographically smallest one. Independence is downward closed, which is
    what makes cutting every non-independent prefix safe.
    """
    ids = sorted(instance.sender_of if links is None else set(links))
    if len(ids) > max_m:
        raise RefusalError(f"brute force refused: {len(ids)} links exceeds max_m={max_m}")
    p = instance.params
    nodes = instance.nodes
    L = [instance.link(i) for i in ids]
    k = len(L)
    signal = [received(p.power, instance.lengths[l.id], p.alpha) for l in L]
    # gain[a][b]: power sender of L[a] delivers at receiver of L[b]
    gain = [[received(p.power, distance(nodes[a.sender], nodes[b.receiver]), p.alpha) if a is not b else 0.0
             for b in L] for a in L]

    def feasible(chosen):
        for b in chosen:
            interference = math.fsum([gain[a][b] for a in chosen if a != b] + [p.noise])
            if not signal[b] / interference >= p.beta:
                return False
        return True

    best: list[int] = []
    examined = 0

    def dfs(chosen, start):
        nonlocal best, examined
        if len(chosen) > len(best):
            best = list(chosen)
        for j in range(start, k):
            if len(chosen) + (k - j) <= len(best):
                return
            chosen.append(j)
            examined += 1
            if feasible(chosen):
                dfs(chosen, j + 1)
            chosen.pop()

    dfs([], 0)
    out = frozenset(ids[j] for j in best)
    assert is_independent(instance.subset(out), nodes, p).ok
    return OptResult(out, len(out), examined)


def default_greedy_constants(params: SinrParams, psi: float = 0.5) -> tuple[float, float]:
    """``(c0, c1)`` wired to the distributed algorithm's constants so the two are comparable."""
    from .scheduler import gamma1_theory
    return affectance_threshold(params, psi), gamma1_theory(params, psi)


def centralized_greedy(instance: Instance, c0: float | None = None, c1: float | None = None,
                       psi: float = 0.5) -> frozenset:
    """Shortest-first greedy: pick, drop high-affectance links, drop links near the pick."""
    d0, d1 = default_greedy_constants(instance.params, psi)
    c0 = d0 if c0 is None else c0
    c1 = d1 if c1 is None else c1
    if not 0 < c0 < 1 or not c1 > 1:
        raise ValidationError(f"need 0 < c0 < 1 and c1 > 1, got c0={c0}, c1={c1}")
    nodes, p, lengths = instance.nodes, instance.params, instance.lengths
    remaining = sorted(instance.links, key=lambda l: (lengths[l.id], l.id))
    S: list[Link] = []
    while remaining:
        l = remaining.pop(0)
        S.append(l)
        remaining = [o for o in remaining if affectance_set(S, o, nodes, p) < c0]
        r = nodes[l.receiver]
        remaining = [o for o in remaining if distance(nodes[o.sender], r) > c1 * lengths[l.id]]
    return frozenset(l.id for l in S)


def greedy_ruling(W: Iterable[Node], omega1: float) -> list[Node]:
    """Lowest-id-first maximal ``omega1``-separated subset; covers ``W`` within ``omega1``."""
    if not omega1 > 0:
        raise ValidationError("omega1 must be positive")
    R: list[Node] = []
    for v in sorted(W, key=lambda n: n.id):
        if all(distance(v, r) > omega1 for r in R):
            R.append(v)
    return R


@dataclass(frozen=True)
class DominatingSet:
    nodes: tuple[Node, ...]
    max_density: int   # max over v in W of |B(v, range) ∩ D|
    min_density: int
    C9: int

    @property
    def ids(self) -> frozenset:
        return frozenset(v.id for v in self.nodes)

    @property
    def ok(self) -> bool:
        return self.min_density >= 1 and self.max_density <= self.C9


def density(W: Iterable[Node], D: Iterable[Node], rng: float) -> tuple[int, int]:
    D = list(D)
    counts = [sum(1 for u in D if distance(v, u) <= rng) for v in W]
    return (min(counts), max(counts)) if counts else (0, 0)


def sequential_dominating_set(W: Iterable[Node], rng: float, C9: int = 9) -> DominatingSet:
    """Constant-density dominating set of ``W`` at range ``rng`` (greedy ruling).

    Members are pairwise more than ``rng`` apart, so a ball of radius ``rng``
    holds at most 5 of them; the achieved densities come back for checking.
    """
    if not rng > 0 or C9 < 1:
        raise ValidationError("need range > 0 and C9 >= 1")
    W = list(W)
    D = greedy_ruling(W, rng)
    lo, hi = density(W, D, rng)
    return DominatingSet(tuple(D), hi, lo, C9)


def C1(gamma: float, params: SinrParams) -> float:
    return (2 * gamma + 1) ** params.alpha / params.beta


def C2(psi_prime: float, params: SinrParams, b: int = 1) -> float:
    """Constant of the affectance counting bound. The expression falls with ``b``, so ``b = 1`` bounds every case."""
    if not params.beta * b > 1:
        raise ValidationError(f"need beta * b > 1, got b={b}")
    q = (params.beta * b) ** (1 / params.alpha)
    return (2 * q / (q - 1)) ** params.alpha / psi_prime + 1


@dataclass
class LemmaVerdict:
    ok: bool
    bound: float
    worst: float
    details: list = field(default_factory=list)

    def __bool__(self):
        return self.ok


def spatial_ball(instance: Instance, lid: int, gamma: float) -> set:
    """Links of the same or a longer class whose sender lies within ``gamma * d_i`` of ``x(l)``."""
    cls = instance.classes
    i = cls.class_of[lid]
    radius = gamma * cls.bound(i)
    x = instance.nodes[instance.sender_of[lid]]
    return {o.id for o in instance.links
            if cls.class_of[o.id] >= i and distance(instance.nodes[o.sender], x) <= radius}


def check_lemma_spatial(instance: Instance, S: Iterable[int], gamma: float, max_m: int = 14) -> LemmaVerdict:
    """Every same-or-longer-class ball around a member of ``S`` has OPT at most ``C1(gamma)``."""
    if not gamma > 1:
        raise PreconditionError("gamma must exceed 1")
    bound = C1(gamma, instance.params)
    details, worst = [], 0
    for lid in sorted(S):
        size = brute_force_opt(instance, max_m, spatial_ball(instance, lid, gamma)).size
        worst = max(worst, size)
        details.append((lid, size))
    return LemmaVerdict(worst <= bound, bound, worst, details)


def check_lemma_affectance(instance: Instance, L_prime: Iterable[int], L_dbl: Iterable[int],
                           psi_prime: float, max_m: int = 14) -> LemmaVerdict:
    """``|OPT(L'')| <= C2(psi') |L'|`` when every ``l`` in ``L''`` has ``A(L', reverse(l)) > psi'``.

    ``details`` carries ``("b", b)`` with the bin capacity the counting argument
    would use for this instance; the bound itself is evaluated at ``b = 1``.
    """
    Lp, Ld = set(L_prime), set(L_dbl)
    if Lp & Ld:
        raise PreconditionError(f"L' and L'' overlap: {sorted(Lp & Ld)}")
    nodes, p = instance.nodes, instance.params
    src = [instance.link(i) for i in sorted(Lp)]
    for lid in sorted(Ld):
        a = affectance_set(src, reverse(instance.link(lid)), nodes, p)
        if not a > psi_prime:
            raise PreconditionError(f"link {lid}: A(L', reverse) = {a} does not exceed psi' = {psi_prime}")
    opt = brute_force_opt(instance, max_m, Ld).size
    bound = C2(psi_prime, p) * len(Lp)
    b = max(0, -(-opt // len(Lp)) - 1) if Lp else 0
    return LemmaVerdict(opt <= bound, bound, opt, [("b", b), ("opt", opt)])


def reverse_affectance(instance: Instance, S: Iterable[int], lid: int) -> float:
    """``A(S, reverse(l))``: interference ``S``'s senders cause at ``x(l)``, normalised by ``l``."""
    rl = reverse(instance.link(lid))
    return affectance_set((instance.link(s) for s in S), rl, instance.nodes, instance.params)
