"""Single-crossing of the utility distributions induced by a belief."""

from __future__ import annotations

import csv
import io
import itertools
from dataclasses import dataclass

import numpy as np

from . import kernels
from .core import (
    DEFAULT_TOL,
    Belief,
    DecisionProblem,
    PairClassification,
    SaferError,
    Tolerance,
    require_generic,
)
from .geometry import indifference_point

SINGLE_CROSS = "single_cross_from_below"
FAILS = "fails"

PERTURBATION = 1e-3


@dataclass(frozen=True)
class DiscreteCDF:
    support: tuple[float, ...]
    cum: tuple[float, ...]

    def __post_init__(self):
        if len(self.support) != len(self.cum) or not self.support:
            raise SaferError("support and cumulative lists must be nonempty and equal length")
        if any(x >= y for x, y in zip(self.support, self.support[1:])):
            raise SaferError("support must be strictly increasing")
        if any(x > y for x, y in zip(self.cum, self.cum[1:])):
            raise SaferError("cumulative probabilities must be nondecreasing")
        if self.cum[0] < 0 or abs(self.cum[-1] - 1.0) > 1e-9:
            raise SaferError("cumulative probabilities must lie in [0, 1] and end at 1")

    def __call__(self, v: float) -> float:
        k = int(np.searchsorted(self.support, v, side="right"))
        return 0.0 if k == 0 else self.cum[k - 1]

    @classmethod
    def from_masses(cls, values, weights) -> DiscreteCDF:
        masses: dict[float, float] = {}
        for v, w in zip(values, weights):
            if w > 0:
                masses[float(v)] = masses.get(float(v), 0.0) + float(w)
        support = sorted(masses)
        cum = list(itertools.accumulate(masses[v] for v in support))
        cum[-1] = 1.0 if abs(cum[-1] - 1.0) <= 1e-9 else cum[-1]
        return cls(tuple(support), tuple(cum))

    def to_csv(self) -> str:
        buf = io.StringIO()
        w = csv.writer(buf, lineterminator="\n")
        w.writerow(["value", "cumulative"])
        w.writerows(zip(self.support, self.cum))
        return buf.getvalue()


def induced_cdf(p: DecisionProblem, a: str, x: Belief) -> DiscreteCDF:
    """Distribution of the payoff of ``a`` when the state is drawn from ``x``."""
    if len(x) != p.n_states:
        raise SaferError("belief length differs from the number of states")
    return DiscreteCDF.from_masses(p.row(a), x.weights)


@dataclass(frozen=True)
class CrossingVerdict:
    crosses: str
    vbar: float | None = None
    violation: tuple[float, float] | None = None
    support: tuple[float, ...] = ()
    diff: tuple[float, ...] = ()

    @property
    def passed(self) -> bool:
        return self.crosses == SINGLE_CROSS

    def to_dict(self) -> dict:
        return {"crosses": self.crosses, "vbar": self.vbar,
                "violation": list(self.violation) if self.violation else None,
                "support": list(self.support), "diff": list(self.diff)}


def single_cross_test(Fa: DiscreteCDF, Fb: DiscreteCDF,
                      tol: Tolerance = DEFAULT_TOL) -> CrossingVerdict:
    """Does ``Fa`` single-cross ``Fb`` from below?

    ``D = Fa - Fb`` on the merged support must be nonpositive up to some
    point and nonnegative after it; values tied to zero are neutral. On
    success ``vbar`` is the smallest admissible threshold on the support; on
    failure ``violation`` is ``(v1, v2)`` with ``D(v1) > 0`` and ``D(v2) < 0``.
    """
    support = sorted(set(Fa.support) | set(Fb.support))
    fa = [Fa(v) for v in support]
    fb = [Fb(v) for v in support]
    diff = [x - y for x, y in zip(fa, fb)]
    signs = []
    for d, x, y in zip(diff, fa, fb):
        bound = tol.bound(x, y)
        signs.append(1 if d > bound else -1 if d < -bound else 0)
    first_pos = next((i for i, s in enumerate(signs) if s > 0), None)
    if first_pos is not None:
        later_neg = next((j for j in range(first_pos + 1, len(signs)) if signs[j] < 0), None)
        if later_neg is not None:
            return CrossingVerdict(FAILS, None, (support[first_pos], support[later_neg]),
                                   tuple(support), tuple(diff))
    negs = [i for i, s in enumerate(signs) if s < 0]
    k = negs[-1] + 1 if negs else 0
    return CrossingVerdict(SINGLE_CROSS, support[k], None, tuple(support), tuple(diff))


def belief_grid(n_states: int, resolution: int | None = None, seed: int = 0) -> np.ndarray:
    """Default belief sample: evenly spaced for 2 and 3 states, Dirichlet(1,...,1) above.

    ``resolution`` is the point count for 2 states, the subdivisions per edge
    for 3 states and the sample size for more.
    """
    if n_states < 2:
        raise SaferError("need at least 2 states")
    if n_states == 2:
        p = np.linspace(0.0, 1.0, resolution or 201)
        return np.column_stack([1.0 - p, p])
    if n_states == 3:
        r = resolution or 100
        pts = [(r - i - j, i, j) for i in range(r + 1) for j in range(r + 1 - i)]
        return np.array(pts, dtype=float) / r
    rng = np.random.default_rng(seed)
    return rng.dirichlet(np.ones(n_states), size=resolution or 20_000)


def augmentation(c: PairClassification, eps: float = PERTURBATION) -> np.ndarray:
    """Edge indifference points and small pushes from them toward each b-state vertex."""
    c = require_generic(c)
    n = c.n_states
    pts = []
    for s, t in itertools.product(c.set_A, c.set_B):
        x = np.array(indifference_point(c, s, t).weights)
        pts.append(x)
        for u in c.set_B:
            v = np.zeros(n)
            v[c.index(u)] = 1.0
            for sign in (1.0, -1.0):
                y = x + sign * eps * (v - x)
                if np.all(y >= 0):
                    pts.append(y / y.sum())
    return np.array(pts).reshape(-1, n)


def default_beliefs(c: PairClassification, resolution: int | None = None,
                    seed: int = 0) -> np.ndarray:
    return np.vstack([belief_grid(c.n_states, resolution, seed), augmentation(c)])


@dataclass(frozen=True)
class RobustCrossing:
    passed: bool
    n_beliefs: int
    failing_belief: Belief | None = None
    verdict: CrossingVerdict | None = None

    def to_dict(self) -> dict:
        return {"passed": self.passed, "n_beliefs": self.n_beliefs,
                "failing_belief": list(self.failing_belief.weights) if self.failing_belief else None,
                "verdict": self.verdict.to_dict() if self.verdict else None}


def robust_single_cross(c: PairClassification, beliefs=None,
                        tol: Tolerance = DEFAULT_TOL) -> RobustCrossing:
    """Single-crossing at every belief in a list (the default augmented grid if omitted)."""
    c = require_generic(c)
    if beliefs is None:
        X = default_beliefs(c)
    else:
        X = np.array([getattr(b, "weights", b) for b in beliefs], dtype=float).reshape(-1, c.n_states)
    if len(X) == 0:
        raise SaferError("empty belief list")
    alpha, beta = np.asarray(c.alpha), np.asarray(c.beta)
    start = 0
    while start < len(X):
        hit = kernels.first_crossing_failure(alpha, beta, X[start:], tol.abs_eps, tol.rel_eps)
        if hit < 0:
            break
        row = X[start + hit]
        x = Belief(tuple(row / row.sum()))
        verdict = single_cross_test(DiscreteCDF.from_masses(c.alpha, x.weights),
                                    DiscreteCDF.from_masses(c.beta, x.weights), tol)
        if not verdict.passed:
            return RobustCrossing(False, len(X), x, verdict)
        start += hit + 1  # borderline row where the scalar recheck disagrees
    return RobustCrossing(True, len(X))
