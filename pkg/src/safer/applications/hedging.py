"""Choosing between two assets on top of random background wealth."""

from __future__ import annotations

from dataclasses import dataclass
from typing import Callable, Mapping

import numpy as np

from ..core import DEFAULT_TOL, DecisionProblem, SaferError, Tolerance
from ..crossing import DiscreteCDF

HEDGES_BETTER = "hedges_better"
INCONCLUSIVE = "inconclusive"


def _as_pairs(dist) -> tuple[tuple[float, float], ...]:
    if isinstance(dist, Mapping):
        items = dist.items()
    elif isinstance(dist, (int, float)):
        items = [(dist, 1.0)]
    else:
        items = dist
    pairs = tuple((float(v), float(p)) for v, p in items)
    if not pairs or any(p < 0 for _, p in pairs):
        raise SaferError("a distribution needs at least one value and nonnegative probabilities")
    if abs(sum(p for _, p in pairs) - 1.0) > 1e-9:
        raise SaferError("distribution probabilities must sum to 1")
    return pairs


def _cdf(dist) -> DiscreteCDF:
    pairs = _as_pairs(dist)
    return DiscreteCDF.from_masses([v for v, _ in pairs], [p for _, p in pairs])


def fosd(F, G, tol: Tolerance = DEFAULT_TOL) -> str:
    """First-order dominance between two discrete distributions.

    Distributions are ``{value: prob}`` mappings, ``[(value, prob), ...]`` lists
    or a bare number for a point mass.
    """
    cf, cg = _cdf(F), _cdf(G)
    support = sorted(set(cf.support) | set(cg.support))
    diffs = [cf(v) - cg(v) for v in support]
    below = any(d < -tol.abs_eps for d in diffs)
    above = any(d > tol.abs_eps for d in diffs)
    if below and above:
        return "incomparable"
    if below:
        return "F_dominates"
    if above:
        return "G_dominates"
    return "equal"


@dataclass(frozen=True)
class HedgingInstance:
    """Asset ``a`` pays ``w[k]`` and asset ``b`` pays ``v[k]`` in state ``k``;
    background wealth there is drawn from ``wealth[k]``."""

    states: tuple[str, ...]
    w: tuple[float, ...]
    v: tuple[float, ...]
    wealth: tuple[tuple[tuple[float, float], ...], ...]

    def __post_init__(self):
        n = len(self.states)
        if n < 2 or not len(self.w) == len(self.v) == len(self.wealth) == n:
            raise SaferError("need at least 2 states and one payoff and distribution per state")
        object.__setattr__(self, "wealth", tuple(_as_pairs(h) for h in self.wealth))
        tied = [s for s, x, y in zip(self.states, self.w, self.v) if x == y]
        if tied:
            raise SaferError(f"assets pay the same in state(s): {', '.join(tied)}")

    @classmethod
    def from_dict(cls, doc: dict) -> HedgingInstance:
        n = len(doc["w"])
        states = tuple(doc.get("states") or (f"s{k}" for k in range(n)))
        wealth = [{float(k): p for k, p in h.items()} if isinstance(h, Mapping) else h
                  for h in doc["wealth"]]
        return cls(states, tuple(map(float, doc["w"])), tuple(map(float, doc["v"])), tuple(wealth))

    @property
    def means(self) -> tuple[float, ...]:
        return tuple(sum(v * p for v, p in h) for h in self.wealth)

    @property
    def set_A(self) -> tuple[int, ...]:
        return tuple(k for k in range(len(self.states)) if self.w[k] > self.v[k])

    @property
    def set_B(self) -> tuple[int, ...]:
        return tuple(k for k in range(len(self.states)) if self.v[k] > self.w[k])


def hedge_problem(h: HedgingInstance) -> DecisionProblem:
    """Risk-neutral view: each asset pays its return plus mean background wealth."""
    mu = h.means
    payoff = [[w + m for w, m in zip(h.w, mu)], [v + m for v, m in zip(h.v, mu)]]
    return DecisionProblem(h.states, ("a", "b"), tuple(map(tuple, payoff)))


def hedge_expected_utilities(h: HedgingInstance, u: Callable, x) -> tuple[float, float]:
    """Expected ``u(asset + wealth)`` for both assets under belief ``x``."""
    x = np.asarray(getattr(x, "weights", x), dtype=float)
    eu = [0.0, 0.0]
    for k, dist in enumerate(h.wealth):
        vals = np.array([y for y, _ in dist])
        probs = np.array([p for _, p in dist])
        eu[0] += x[k] * float(probs @ u(vals + h.w[k]))
        eu[1] += x[k] * float(probs @ u(vals + h.v[k]))
    return eu[0], eu[1]


@dataclass(frozen=True)
class HedgeReport:
    status: str
    checked: int
    failed_condition: str | None = None
    theta: str | None = None
    theta_prime: str | None = None
    detail: str = ""

    @property
    def hedges_better(self) -> bool:
        return self.status == HEDGES_BETTER

    def to_dict(self) -> dict:
        return {"status": self.status, "checked_pairs": self.checked,
                "failed_condition": self.failed_condition, "theta": self.theta,
                "theta_prime": self.theta_prime, "detail": self.detail}


def hedge_check(h: HedgingInstance, tol: Tolerance = DEFAULT_TOL) -> HedgeReport:
    """Sufficient conditions for ``a`` to hedge better than ``b``.

    For every ``theta`` where ``a`` pays more and ``theta'`` where ``b`` does:
    ``w[theta'] >= v[theta]``, ``v[theta'] >= w[theta]`` and wealth in
    ``theta'`` first-order dominates wealth in ``theta``. A failure only means
    the test is inconclusive.
    """
    A, B = h.set_A, h.set_B
    if not A or not B:
        raise SaferError("one asset pays more in every state; both sets must be nonempty")
    checked = 0
    for i in A:
        for j in B:
            s, t = h.states[i], h.states[j]
            if h.w[j] < h.v[i]:
                return HedgeReport(INCONCLUSIVE, checked, "w_theta' >= v_theta", s, t,
                                   f"w[{t}]={h.w[j]!r} < v[{s}]={h.v[i]!r}")
            if h.v[j] < h.w[i]:
                return HedgeReport(INCONCLUSIVE, checked, "v_theta' >= w_theta", s, t,
                                   f"v[{t}]={h.v[j]!r} < w[{s}]={h.w[i]!r}")
            rel = fosd(h.wealth[j], h.wealth[i], tol)
            if rel not in ("F_dominates", "equal"):
                return HedgeReport(INCONCLUSIVE, checked, "FOSD", s, t,
                                   f"wealth in {t} vs {s}: {rel}")
            checked += 1
    return HedgeReport(HEDGES_BETTER, checked)

