"""Preference regions inside the belief simplex.

The set of beliefs at which ``a`` is weakly preferred to ``b`` is a half-space
cut of the simplex. Its extreme points are the vertices of states where ``a``
wins plus one indifference point on every edge joining an ``a``-state to a
``b``-state, so regions are stored by those points.
"""

from __future__ import annotations

import csv
import io
import math
from dataclasses import dataclass

import numpy as np

from .core import (
    DEFAULT_TOL,
    Belief,
    PairClassification,
    SaferError,
    Tolerance,
    require_generic,
)
from .transforms import ConcaveTransform


def _edge_weight(c: PairClassification, i: int, j: int) -> float:
    gain_a = c.alpha[i] - c.beta[i]
    gain_b = c.beta[j] - c.alpha[j]
    return gain_a / (gain_a + gain_b)


def indifference_point(c: PairClassification, theta: str, theta_prime: str) -> Belief:
    """Belief on the edge between ``theta`` (a wins) and ``theta_prime`` (b wins)
    at which both actions have the same expected payoff."""
    if theta not in c.set_A:
        raise SaferError(f"state {theta!r} is not one where {c.action_a!r} wins")
    if theta_prime not in c.set_B:
        raise SaferError(f"state {theta_prime!r} is not one where {c.action_b!r} wins")
    i, j = c.index(theta), c.index(theta_prime)
    w = _edge_weight(c, i, j)
    weights = [0.0] * c.n_states
    weights[j] = w
    weights[i] = 1.0 - w
    return Belief(tuple(weights))


def to_cartesian(weights) -> tuple[float, float]:
    """Project a 3-state belief to the plane: s0 -> (0,0), s1 -> (1,0), s2 -> (0,1)."""
    return float(weights[1]), float(weights[2])


@dataclass(frozen=True)
class PreferenceRegion:
    owner: str
    other: str
    states: tuple[str, ...]
    vertices_A: tuple[str, ...]
    edge_points: dict
    halfspace_normal: tuple[float, ...]

    @property
    def extreme_points(self) -> list[Belief]:
        n = len(self.states)
        verts = [Belief.point_mass(n, self.states.index(s)) for s in self.vertices_A]
        return verts + list(self.edge_points.values())

    def contains(self, x, tol: Tolerance = DEFAULT_TOL) -> bool:
        x = np.asarray(getattr(x, "weights", x), dtype=float)
        return float(np.dot(self.halfspace_normal, x)) >= -tol.abs_eps

    def polygon(self) -> list[tuple[float, float]]:
        """Boundary of a 3-state region in the plane, counterclockwise."""
        if len(self.states) != 3:
            raise SaferError("polygons are only defined for 3-state problems")
        pts = [to_cartesian(b.weights) for b in self.extreme_points]
        cx = sum(p[0] for p in pts) / len(pts)
        cy = sum(p[1] for p in pts) / len(pts)
        return sorted(pts, key=lambda p: math.atan2(p[1] - cy, p[0] - cx))

    def area(self) -> float:
        pts = self.polygon()
        return 0.5 * sum(
            x0 * y1 - x1 * y0 for (x0, y0), (x1, y1) in zip(pts, pts[1:] + pts[:1])
        )


def preference_region(c: PairClassification) -> PreferenceRegion:
    c = require_generic(c)
    edges = {
        (s, t): indifference_point(c, s, t) for s in c.set_A for t in c.set_B
    }
    normal = tuple(x - y for x, y in zip(c.alpha, c.beta))
    return PreferenceRegion(c.action_a, c.action_b, c.states, c.set_A, edges, normal)


def transform_pair(c: PairClassification, phi: ConcaveTransform,
                   tol: Tolerance = DEFAULT_TOL) -> PairClassification:
    """The same comparison with payoffs passed through ``phi``; ties created by
    the transform are rejected."""
    fa = tuple(float(v) for v in phi(np.asarray(c.alpha)))
    fb = tuple(float(v) for v in phi(np.asarray(c.beta)))
    tied = [s for s, x, y in zip(c.states, fa, fb) if tol.tied(x, y)]
    if tied:
        raise SaferError(f"transform makes states degenerate: {', '.join(tied)}")
    return PairClassification(c.action_a, c.action_b, c.states, c.set_A, c.set_B,
                              c.degenerate, fa, fb)


def transformed_region(c: PairClassification, phi: ConcaveTransform,
                       tol: Tolerance = DEFAULT_TOL) -> PreferenceRegion:
    return preference_region(transform_pair(require_generic(c), phi, tol))


@dataclass(frozen=True)
class Inclusion:
    included: bool
    margins: dict  # (theta, theta_prime) -> transformed weight minus original weight

    def to_dict(self) -> dict:
        return {"included": self.included,
                "margins": [{"edge": list(k), "margin": v} for k, v in self.margins.items()]}


def region_included(r: PreferenceRegion, r_hat: PreferenceRegion,
                    tol: Tolerance = DEFAULT_TOL) -> Inclusion:
    """Whether ``r`` sits inside ``r_hat``, edge by edge.

    On each edge the original indifference point must lie between the vertex
    of the ``a``-state and the transformed indifference point, i.e. the weight
    on the ``b``-state must not decrease.
    """
    if (r.owner, r.other, r.states) != (r_hat.owner, r_hat.other, r_hat.states) or set(
        r.edge_points
    ) != set(r_hat.edge_points):
        raise SaferError("regions come from different comparisons")
    margins = {}
    for (s, t), x in r.edge_points.items():
        j = r.states.index(t)
        margins[(s, t)] = r_hat.edge_points[(s, t)].weights[j] - x.weights[j]
    return Inclusion(all(m >= -tol.abs_eps for m in margins.values()), margins)


def region_rows(r: PreferenceRegion, inclusion: Inclusion | None = None) -> list[list]:
    n = len(r.states)
    rows = [["edge_or_vertex", *r.states, "margin"]]
    for s in r.vertices_A:
        rows.append([f"vertex:{s}", *Belief.point_mass(n, r.states.index(s)).weights, ""])
    for (s, t), x in r.edge_points.items():
        m = "" if inclusion is None else inclusion.margins[(s, t)]
        rows.append([f"edge:{s}|{t}", *x.weights, m])
    return rows


def polygon_rows(r: PreferenceRegion) -> list[list]:
    """Counterclockwise polygon vertices with both planar and barycentric coordinates."""
    rows = [["x", "y", *r.states]]
    for x, y in r.polygon():
        rows.append([x, y, 1.0 - x - y, x, y])
    return rows


def to_csv(rows) -> str:
    buf = io.StringIO()
    csv.writer(buf, lineterminator="\n").writerows(rows)
    return buf.getvalue()
