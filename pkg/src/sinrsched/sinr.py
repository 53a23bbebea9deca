"""SINR physics: feasibility, affectance, sensed power and carrier-sensing thresholds.

All power sums go through :func:`math.fsum`, which is correctly rounded and
therefore independent of summation order. The simulator and the offline
checks rely on that to compare sensed values for exact equality.
"""
from __future__ import annotations

import math
from dataclasses import dataclass
from typing import Iterable, Mapping

from .errors import DomainError, InfeasibleLinkError, PreconditionError, ValidationError
from .geometry import Link, Node, distance


@dataclass(frozen=True)
class SinrParams:
    alpha: float
    beta: float
    noise: float
    phi: float
    power: float

    def __post_init__(self):
        if not self.alpha > 2:
            raise ValidationError(f"alpha must exceed 2, got {self.alpha}")
        if not self.beta > 1:
            raise ValidationError(f"beta must exceed 1, got {self.beta}")
        if not self.noise > 0:
            raise ValidationError(f"noise must be positive, got {self.noise}")
        if not self.phi > 0:
            raise ValidationError(f"phi must be positive, got {self.phi}")
        if not self.power > 0:
            raise ValidationError(f"power must be positive, got {self.power}")

    @classmethod
    def default(cls, d_max: float, alpha=3.0, beta=2.0, noise=1.0, phi=1.0) -> "SinrParams":
        """Standard preset with the smallest power making every link feasible."""
        return cls(alpha, beta, noise, phi, min_feasible_power(d_max, alpha=alpha, beta=beta, noise=noise, phi=phi))

    def supports(self, d: float) -> bool:
        """True if a link of length ``d`` meets the transmission condition at ``power``."""
        return self.power / (d ** self.alpha) >= self.beta * self.noise * (1 + self.phi)


def min_feasible_power(d_max: float, *, alpha: float, beta: float, noise: float, phi: float) -> float:
    if not d_max > 0:
        raise DomainError(f"d_max must be positive, got {d_max}")
    return beta * noise * (1 + phi) * d_max ** alpha


def received(power: float, d: float, alpha: float) -> float:
    """Received power at distance ``d``; the single expression every sum is built from."""
    if d <= 0:
        raise DomainError("zero distance between transmitter and observer")
    da = d ** alpha
    if da == 0:
        raise DomainError(f"distance {d!r} too small: d**alpha underflows")
    return power / da


def sensed_power(W: Iterable[Node], v: Node, params: SinrParams,
                 powers: Mapping[int, float] | None = None) -> float:
    """Total power at ``v`` from transmitters ``W`` plus noise (added once).

    ``v``'s own entry in ``W`` is skipped (perfect self-interference
    cancellation). ``powers`` overrides the uniform ``params.power`` per node id.
    """
    terms = []
    for w in W:
        if w.id == v.id:
            continue
        p = params.power if powers is None else powers[w.id]
        terms.append(received(p, distance(w, v), params.alpha))
    terms.append(params.noise)
    return math.fsum(terms)


def thres(d: float, params: SinrParams, power: float | None = None) -> float:
    """Sensed power produced by a single transmitter at distance ``d``."""
    if not d > 0:
        raise DomainError(f"threshold distance must be positive, got {d}")
    p = params.power if power is None else power
    if math.isinf(d):
        return params.noise
    return received(p, d, params.alpha) + params.noise


def link_length(l: Link, nodes: Mapping[int, Node]) -> float:
    return distance(nodes[l.sender], nodes[l.receiver])


def reverse(l: Link) -> Link:
    return Link(l.id, l.receiver, l.sender)


def _noise_margin(d: float, params: SinrParams) -> float:
    # 1 - d^alpha / (P / (beta N)); positive iff the link is feasible without interference
    margin = 1.0 - d ** params.alpha * params.beta * params.noise / params.power
    if margin <= 0:
        raise InfeasibleLinkError(f"link of length {d} cannot overcome noise at power {params.power}")
    return margin


def affectance(l_prime: Link, l: Link, nodes: Mapping[int, Node], params: SinrParams) -> float:
    """Affectance of ``l_prime``'s sender on ``l``'s receiver."""
    d = link_length(l, nodes)
    dd = distance(nodes[l_prime.sender], nodes[l.receiver])
    if dd <= 0:
        raise DomainError(f"sender of link {l_prime.id} coincides with receiver of link {l.id}")
    a = params.alpha
    return params.beta / _noise_margin(d, params) * d ** a / dd ** a


def affectance_set(L_prime: Iterable[Link], l: Link, nodes: Mapping[int, Node], params: SinrParams) -> float:
    return math.fsum(affectance(lp, l, nodes, params) for lp in L_prime)


def affectance_threshold(params: SinrParams, psi: float) -> float:
    """Reverse-link affectance cap ``psi * (1 - (phi / (beta (1 + phi)))**(1/alpha))**alpha``."""
    if not 0 < psi < 1:
        raise ValidationError(f"psi must lie in (0, 1), got {psi}")
    a, b, f = params.alpha, params.beta, params.phi
    return psi * (1 - (f / (b * (1 + f))) ** (1 / a)) ** a


@dataclass(frozen=True)
class IndependenceVerdict:
    """Per-link values (SINR or affectance sum) and the links that fail."""

    values: Mapping[int, float]
    failures: tuple[tuple[int, float], ...]

    @property
    def ok(self) -> bool:
        return not self.failures

    def __bool__(self):
        return self.ok


def is_independent(S: Iterable[Link], nodes: Mapping[int, Node], params: SinrParams) -> IndependenceVerdict:
    """Decide simultaneous feasibility of ``S`` directly from the SINR inequality."""
    S = sorted(S, key=lambda l: l.id)
    values, failures = {}, []
    for l in S:
        r = nodes[l.receiver]
        signal = received(params.power, link_length(l, nodes), params.alpha)
        interference = sensed_power((nodes[o.sender] for o in S if o.id != l.id), r, params)
        sinr = signal / interference
        values[l.id] = sinr
        if not sinr >= params.beta:
            failures.append((l.id, sinr))
    return IndependenceVerdict(values, tuple(failures))


def independence_via_affectance(S: Iterable[Link], nodes: Mapping[int, Node], params: SinrParams) -> IndependenceVerdict:
    """Same decision as :func:`is_independent`, through ``A(S - {l}, l) <= 1``."""
    S = sorted(S, key=lambda l: l.id)
    values, failures = {}, []
    for l in S:
        total = affectance_set((o for o in S if o.id != l.id), l, nodes, params)
        values[l.id] = total
        if not total <= 1.0:
            failures.append((l.id, total))
    return IndependenceVerdict(values, tuple(failures))


def proposition1_bound(V_prime: Iterable[Node], v: Node, rho1: float, rho2: float,
                       params: SinrParams, power: float | None = None) -> float:
    """Upper bound on the power ``v`` senses from a ``rho1``-separated set kept ``rho2`` away.

    Raises :class:`PreconditionError` naming the violated condition.
    """
    if not rho1 > 0:
        raise PreconditionError("rho1 must be positive")
    if not rho2 > rho1 / 2:
        raise PreconditionError(f"need rho2 > rho1/2, got rho1={rho1}, rho2={rho2}")
    V_prime = list(V_prime)
    for w in V_prime:
        if w.id == v.id:
            raise PreconditionError(f"observer {v.id} belongs to the transmitter set")
        if distance(w, v) < rho2:
            raise PreconditionError(f"node {w.id} lies closer than rho2 to the observer")
    for i in range(len(V_prime)):
        for j in range(i + 1, len(V_prime)):
            if distance(V_prime[i], V_prime[j]) < rho1:
                raise PreconditionError(
                    f"nodes {V_prime[i].id} and {V_prime[j].id} are closer than rho1")
    a = params.alpha
    p = params.power if power is None else power
    return 36 * (a - 1) / (a - 2) * (rho2 / rho1) ** 2 * p / rho2 ** a + params.noise
