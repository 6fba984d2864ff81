"""Deciding whether one action is safer than another, and order structure over actions."""

from __future__ import annotations

import itertools
from dataclasses import dataclass, field
from typing import Sequence

import numpy as np

from .core import (
    DEFAULT_TOL,
    Belief,
    DecisionProblem,
    NonGenericError,
    PairClassification,
    SaferError,
    Tolerance,
    classify_states,
    require_generic,
)
from .transforms import ConcaveTransform

SAFER = "safer"
NOT_SAFER = "not_safer"


@dataclass(frozen=True)
class StateWitness:
    """A failed payoff inequality between a state in A and a state in B.

    ``kind`` is ``"b_right_vs_a_right"`` for ``beta[theta_b] >= alpha[theta_a]``
    and ``"a_wrong_vs_b_wrong"`` for ``alpha[theta_b] >= beta[theta_a]``.
    """

    theta_a: str
    theta_b: str
    kind: str
    lhs: float
    rhs: float

    def describe(self) -> str:
        if self.kind == "b_right_vs_a_right":
            return f"beta[{self.theta_b}]={self.lhs!r} < alpha[{self.theta_a}]={self.rhs!r}"
        return f"alpha[{self.theta_b}]={self.lhs!r} < beta[{self.theta_a}]={self.rhs!r}"

    def to_dict(self) -> dict:
        return {"kind": "state_pair", "theta_a": self.theta_a, "theta_b": self.theta_b,
                "inequality": self.kind, "lhs": self.lhs, "rhs": self.rhs,
                "text": self.describe()}


@dataclass(frozen=True)
class SafetyVerdict:
    action_a: str
    action_b: str
    relation: str
    violations: tuple[StateWitness, ...] = ()
    boundary: bool = False
    certificate: object = None  # ViolationCertificate, attached by callers that build one

    def __post_init__(self):
        if self.relation not in (SAFER, NOT_SAFER):
            raise SaferError(f"unknown relation {self.relation!r}")
        if self.relation == NOT_SAFER and not self.violations and self.certificate is None:
            raise SaferError("a not_safer verdict needs a witness")

    @property
    def safer(self) -> bool:
        return self.relation == SAFER

    @property
    def witness(self):
        if self.violations:
            return self.violations[0]
        return self.certificate

    def with_certificate(self, cert) -> SafetyVerdict:
        return SafetyVerdict(self.action_a, self.action_b, self.relation,
                             self.violations, self.boundary, cert)

    def to_dict(self) -> dict:
        out = {"action_a": self.action_a, "action_b": self.action_b,
               "relation": self.relation, "boundary": self.boundary,
               "witness": None, "violations": [v.to_dict() for v in self.violations]}
        if self.violations:
            out["witness"] = self.violations[0].to_dict()
        if self.certificate is not None:
            out["certificate"] = self.certificate.to_dict()
            if out["witness"] is None:
                out["witness"] = out["certificate"]
        return out


def is_safer(c: PairClassification, tol: Tolerance = DEFAULT_TOL) -> SafetyVerdict:
    """Whether ``c.action_a`` is safer than ``c.action_b``.

    Every state where ``a`` wins must pay ``a`` no more than ``b`` pays in any
    state where ``b`` wins, and ``b`` in an ``a``-state must pay no more than
    ``a`` in any ``b``-state. Checked on the extremal values only, so this is
    linear in the number of states. Inequalities are exact comparisons; a
    verdict is flagged ``boundary`` when a binding pair is tied within ``tol``.
    """
    c = require_generic(c)
    alpha, beta = np.asarray(c.alpha), np.asarray(c.beta)
    ia, ib = c.idx_A, c.idx_B
    i_max_alpha = ia[int(np.argmax(alpha[ia]))]
    j_min_beta = ib[int(np.argmin(beta[ib]))]
    i_max_beta = ia[int(np.argmax(beta[ia]))]
    j_min_alpha = ib[int(np.argmin(alpha[ib]))]

    violations = []
    if not beta[j_min_beta] >= alpha[i_max_alpha]:
        violations.append(StateWitness(c.states[i_max_alpha], c.states[j_min_beta],
                                       "b_right_vs_a_right",
                                       float(beta[j_min_beta]), float(alpha[i_max_alpha])))
    if not alpha[j_min_alpha] >= beta[i_max_beta]:
        violations.append(StateWitness(c.states[i_max_beta], c.states[j_min_alpha],
                                       "a_wrong_vs_b_wrong",
                                       float(alpha[j_min_alpha]), float(beta[i_max_beta])))
    boundary = tol.tied(beta[j_min_beta], alpha[i_max_alpha]) or tol.tied(
        alpha[j_min_alpha], beta[i_max_beta]
    )
    return SafetyVerdict(c.action_a, c.action_b, NOT_SAFER if violations else SAFER,
                         tuple(violations), bool(boundary))


def _two_state(c: PairClassification) -> tuple[int, int]:
    """Indices (state where a wins, state where b wins) of a generic 2-state pair."""
    if c.n_states != 2:
        raise SaferError(f"expected exactly 2 states, got {c.n_states}")
    c = require_generic(c)
    return c.idx_A[0], c.idx_B[0]


def is_safer_two_state(c: PairClassification, tol: Tolerance = DEFAULT_TOL) -> SafetyVerdict:
    """Two states, 0 where ``a`` wins and 1 where ``b`` wins: safer iff
    ``beta_1 >= alpha_0`` and ``alpha_1 >= beta_0``, i.e. a's payoffs lie in the
    convex hull of b's."""
    s0, s1 = _two_state(c)
    a0, a1, b0, b1 = c.alpha[s0], c.alpha[s1], c.beta[s0], c.beta[s1]
    violations = []
    if not b1 >= a0:
        violations.append(StateWitness(c.states[s0], c.states[s1], "b_right_vs_a_right", b1, a0))
    if not a1 >= b0:
        violations.append(StateWitness(c.states[s0], c.states[s1], "a_wrong_vs_b_wrong", a1, b0))
    boundary = tol.tied(b1, a0) or tol.tied(a1, b0)
    return SafetyVerdict(c.action_a, c.action_b, NOT_SAFER if violations else SAFER,
                         tuple(violations), boundary)


@dataclass(frozen=True)
class SlopeReport:
    gamma_a: float
    gamma_b: float
    flatter: bool
    W_monotone: bool

    def to_dict(self) -> dict:
        return {"gamma_a": self.gamma_a, "gamma_b": self.gamma_b,
                "flatter": self.flatter, "W_monotone": self.W_monotone}


def slope_report(c: PairClassification) -> SlopeReport:
    """Payoff slopes across the two states, oriented from a's state to b's.

    The upper envelope of the two expected payoffs is monotone in the belief
    exactly when both slopes share a sign.
    """
    s0, s1 = _two_state(c)
    ga = c.alpha[s1] - c.alpha[s0]
    gb = c.beta[s1] - c.beta[s0]
    return SlopeReport(ga, gb, abs(ga) <= abs(gb), (ga >= 0 and gb >= 0) or (ga <= 0 and gb <= 0))


@dataclass
class OrderReport:
    actions: tuple[str, ...]
    pair_matrix: dict[tuple[str, str], SafetyVerdict]
    reflexive: bool
    antisymmetric: bool
    transitive: bool
    strongly_connected: bool
    total: bool
    transitivity_violations: list[tuple[str, str, str]]
    symmetric_pairs: list[tuple[str, str]]
    prop2_applicable: bool
    prop2_conditions: dict = field(default_factory=dict)

    def relates(self, a: str, b: str) -> bool:
        return a == b or self.pair_matrix[(a, b)].safer

    def to_dict(self) -> dict:
        return {
            "actions": list(self.actions),
            "pair_matrix": [
                {"a": a, "b": b, "relation": v.relation, "boundary": v.boundary}
                for (a, b), v in self.pair_matrix.items()
            ],
            "reflexive": self.reflexive,
            "antisymmetric": self.antisymmetric,
            "transitive": self.transitive,
            "strongly_connected": self.strongly_connected,
            "total": self.total,
            "transitivity_violations": [list(t) for t in self.transitivity_violations],
            "symmetric_pairs": [list(p) for p in self.symmetric_pairs],
            "prop2_applicable": self.prop2_applicable,
            "prop2_conditions": self.prop2_conditions,
        }


def _direction(values: Sequence[float], tol: Tolerance) -> set[str]:
    dirs = {"increasing", "decreasing"}
    for x, y in zip(values, values[1:]):
        if tol.tied(x, y):
            continue
        dirs.discard("decreasing" if y > x else "increasing")
    return dirs


def _monotone_ordering_conditions(p, order_idx, classes, tol) -> dict:
    """Sufficient conditions for a total order: every action monotone along the
    state order in one shared direction, and every pair's winning states split
    into an initial and a final segment of that order."""
    common = {"increasing", "decreasing"}
    non_monotone = []
    for name, row in zip(p.actions, p.payoff):
        d = _direction([row[i] for i in order_idx], tol)
        if not d:
            non_monotone.append(name)
        common &= d
    pos = {p.states[i]: k for k, i in enumerate(order_idx)}
    unseparated = []
    for (a, b), c in classes.items():
        if a > b:
            continue
        pa, pb = [pos[s] for s in c.set_A], [pos[s] for s in c.set_B]
        if not (max(pa) < min(pb) or min(pa) > max(pb)):
            unseparated.append([a, b])
    return {
        "state_order": [p.states[i] for i in order_idx],
        "common_direction": sorted(common)[0] if common else None,
        "non_monotone_actions": non_monotone,
        "monotone_common_direction": bool(common),
        "unseparated_pairs": unseparated,
        "ordered_by_optimality": not unseparated,
    }


def order_report(
    p: DecisionProblem,
    state_order: Sequence[str] | None = None,
    tol: Tolerance = DEFAULT_TOL,
) -> OrderReport:
    """Safer-than verdicts for every ordered pair and the order properties they induce.

    ``a`` is taken to be safer than itself. Raises ``NonGenericError`` naming the
    first pair that has a tied state or a dominated action.
    """
    order = list(state_order) if state_order is not None else list(p.states)
    if sorted(order) != sorted(p.states):
        raise SaferError("state_order must be a permutation of the problem's states")
    order_idx = [p.states.index(s) for s in order]

    classes, matrix = {}, {}
    for a, b in itertools.permutations(p.actions, 2):
        c = classify_states(p, a, b, tol)
        try:
            require_generic(c)
        except NonGenericError as exc:
            raise NonGenericError(f"pair ({a}, {b}): {exc}", exc.states) from exc
        classes[(a, b)] = c
        matrix[(a, b)] = is_safer(c, tol)

    rel = lambda a, b: a == b or matrix[(a, b)].safer  # noqa: E731
    symmetric = [[a, b] for a, b in itertools.combinations(p.actions, 2) if rel(a, b) and rel(b, a)]
    violations = [
        (a, b, c)
        for a, b, c in itertools.permutations(p.actions, 3)
        if rel(a, b) and rel(b, c) and not rel(a, c)
    ]
    connected = all(rel(a, b) or rel(b, a) for a, b in itertools.combinations(p.actions, 2))
    conds = _monotone_ordering_conditions(p, order_idx, classes, tol)
    applicable = conds["monotone_common_direction"] and conds["ordered_by_optimality"]
    antisym = not symmetric
    transitive = not violations
    total = connected and transitive and antisym
    if applicable:
        conds["total_as_predicted"] = connected and transitive
    return OrderReport(
        p.actions, matrix, True, antisym, transitive, connected, total,
        violations, [tuple(s) for s in symmetric], applicable, conds,
    )


def smooth_reduce(
    p: DecisionProblem, priors: Sequence[Belief], psi: ConcaveTransform
) -> DecisionProblem:
    """Recast a smooth-ambiguity comparison as an ordinary decision problem.

    The induced states are the priors; action ``a`` pays ``psi(E_pi u(a))`` in
    state ``pi``. Safety of the induced problem is safety under increased
    ambiguity aversion (``psi -> phi o psi``).
    """
    if not priors:
        raise SaferError("empty prior set")
    for k, pi in enumerate(priors):
        if len(pi) != p.n_states:
            raise SaferError(f"prior {k} has {len(pi)} weights for {p.n_states} states")
    if len(priors) == 1:
        raise NonGenericError("a single prior leaves no nontrivial comparison")
    rows = [[float(psi.scalar(pi.expect(row))) for pi in priors] for row in p.payoff]
    return DecisionProblem.from_arrays(
        rows, states=[f"pi{k}" for k in range(len(priors))], actions=p.actions
    )
