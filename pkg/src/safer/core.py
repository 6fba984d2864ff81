"""Finite decision problems, beliefs, tolerances and per-pair state classification."""

from __future__ import annotations

import json
import math
from dataclasses import dataclass
from functools import cached_property
from typing import Iterable, Sequence

import numpy as np


class SaferError(ValueError):
    """Base class for every input/contract error raised by the package."""


class ProblemFormatError(SaferError):
    pass


class NonGenericError(SaferError):
    """A compared pair has tied states or one action weakly dominates the other."""

    def __init__(self, message: str, states: Sequence[str] = ()):
        super().__init__(message)
        self.states = tuple(states)


class DominatedPairError(NonGenericError):
    pass


@dataclass(frozen=True)
class Tolerance:
    """Two values are tied iff ``|v - w| <= abs_eps + rel_eps * max(|v|, |w|)``."""

    abs_eps: float = 1e-9
    rel_eps: float = 1e-9

    def __post_init__(self):
        if not (self.abs_eps >= 0 and self.rel_eps >= 0):
            raise SaferError("tolerances must be nonnegative")

    def bound(self, v: float, w: float) -> float:
        return self.abs_eps + self.rel_eps * max(abs(v), abs(w))

    def tied(self, v: float, w: float) -> bool:
        return abs(v - w) <= self.bound(v, w)


DEFAULT_TOL = Tolerance()


@dataclass(frozen=True)
class DecisionProblem:
    """Finite states by finite actions with nonnegative payoffs in utils.

    ``payoff[i][j]`` is the payoff of action ``actions[i]`` in state ``states[j]``.
    """

    states: tuple[str, ...]
    actions: tuple[str, ...]
    payoff: tuple[tuple[float, ...], ...]

    def __post_init__(self):
        object.__setattr__(self, "states", tuple(str(s) for s in self.states))
        object.__setattr__(self, "actions", tuple(str(a) for a in self.actions))
        object.__setattr__(
            self, "payoff", tuple(tuple(float(v) for v in row) for row in self.payoff)
        )
        if len(self.actions) < 2:
            raise ProblemFormatError("fewer than 2 actions")
        if len(self.states) < 2:
            raise ProblemFormatError("fewer than 2 states")
        for axis, labels in (("state", self.states), ("action", self.actions)):
            if len(set(labels)) != len(labels):
                dup = sorted({x for x in labels if labels.count(x) > 1})
                raise ProblemFormatError(f"duplicate {axis} label: {', '.join(dup)}")
        if len(self.payoff) != len(self.actions):
            raise ProblemFormatError("payoff rows must match the action count")
        for name, row in zip(self.actions, self.payoff):
            if len(row) != len(self.states):
                raise ProblemFormatError(
                    f"action {name!r} has {len(row)} payoffs for {len(self.states)} states"
                )
            for v in row:
                if not math.isfinite(v):
                    raise ProblemFormatError(f"non-finite payoff for action {name!r}")
                if v < 0:
                    raise ProblemFormatError(f"negative payoff {v!r} for action {name!r}")

    @classmethod
    def from_arrays(cls, payoff, states=None, actions=None) -> DecisionProblem:
        payoff = np.asarray(payoff, dtype=float)
        n_act, n_st = payoff.shape
        states = states if states is not None else [f"s{j}" for j in range(n_st)]
        actions = actions if actions is not None else [f"a{i}" for i in range(n_act)]
        return cls(tuple(states), tuple(actions), tuple(map(tuple, payoff.tolist())))

    @cached_property
    def matrix(self) -> np.ndarray:
        m = np.array(self.payoff, dtype=float)
        m.setflags(write=False)
        return m

    @property
    def n_states(self) -> int:
        return len(self.states)

    def action_index(self, action: str) -> int:
        try:
            return self.actions.index(action)
        except ValueError:
            raise SaferError(f"unknown action {action!r}") from None

    def row(self, action: str) -> np.ndarray:
        return self.matrix[self.action_index(action)]


@dataclass(frozen=True)
class Belief:
    """Probability vector over the states of a problem."""

    weights: tuple[float, ...]

    def __post_init__(self):
        w = tuple(float(v) for v in self.weights)
        object.__setattr__(self, "weights", w)
        if not w:
            raise SaferError("empty belief")
        if any(not math.isfinite(v) or v < 0 for v in w):
            raise SaferError("belief weights must be finite and nonnegative")
        if abs(math.fsum(w) - 1.0) > 1e-9 * len(w):
            raise SaferError(f"belief weights sum to {math.fsum(w)!r}, not 1")

    def __len__(self):
        return len(self.weights)

    @property
    def array(self) -> np.ndarray:
        return np.array(self.weights)

    def expect(self, values: Iterable[float]) -> float:
        values = tuple(values)
        if len(values) != len(self.weights):
            raise SaferError("belief and payoff vector differ in length")
        return math.fsum(x * v for x, v in zip(self.weights, values))

    @classmethod
    def point_mass(cls, n: int, index: int) -> Belief:
        w = [0.0] * n
        w[index] = 1.0
        return cls(tuple(w))


@dataclass(frozen=True)
class PairClassification:
    """States split by which of two actions is strictly better.

    ``set_A`` holds states where ``action_a`` is strictly better, ``set_B`` where
    ``action_b`` is, ``degenerate`` the tied ones. ``alpha``/``beta`` are the
    payoff vectors of the two actions over ``states``.
    """

    action_a: str
    action_b: str
    states: tuple[str, ...]
    set_A: tuple[str, ...]
    set_B: tuple[str, ...]
    degenerate: tuple[str, ...]
    alpha: tuple[float, ...]
    beta: tuple[float, ...]

    @property
    def n_states(self) -> int:
        return len(self.states)

    def index(self, state: str) -> int:
        return self.states.index(state)

    @property
    def idx_A(self) -> list[int]:
        return [self.index(s) for s in self.set_A]

    @property
    def idx_B(self) -> list[int]:
        return [self.index(s) for s in self.set_B]

    @property
    def is_generic(self) -> bool:
        return not self.degenerate and bool(self.set_A) and bool(self.set_B)

    def swapped(self) -> PairClassification:
        return PairClassification(
            self.action_b, self.action_a, self.states,
            self.set_B, self.set_A, self.degenerate, self.beta, self.alpha,
        )

    def restricted(self, states: Sequence[str]) -> PairClassification:
        """Classification restricted to a subset of states (state order kept)."""
        keep = [s for s in self.states if s in set(states)]
        idx = [self.index(s) for s in keep]
        return PairClassification(
            self.action_a, self.action_b, tuple(keep),
            tuple(s for s in self.set_A if s in keep),
            tuple(s for s in self.set_B if s in keep),
            tuple(s for s in self.degenerate if s in keep),
            tuple(self.alpha[i] for i in idx),
            tuple(self.beta[i] for i in idx),
        )


def parse_problem(source: str) -> DecisionProblem:
    """Parse the JSON problem format into a validated DecisionProblem."""
    try:
        doc = json.loads(source)
    except json.JSONDecodeError as exc:
        raise ProblemFormatError(f"malformed document: {exc}") from exc
    if not isinstance(doc, dict) or "states" not in doc or "actions" not in doc:
        raise ProblemFormatError("malformed document: expected keys 'states' and 'actions'")
    states, actions = doc["states"], doc["actions"]
    if not isinstance(states, list) or not isinstance(actions, list):
        raise ProblemFormatError("malformed document: 'states' and 'actions' must be lists")
    names, rows = [], []
    for entry in actions:
        if not isinstance(entry, dict) or "name" not in entry or "payoffs" not in entry:
            raise ProblemFormatError("malformed document: action entries need 'name' and 'payoffs'")
        pay = entry["payoffs"]
        if not isinstance(pay, list) or not all(
            isinstance(v, (int, float)) and not isinstance(v, bool) for v in pay
        ):
            raise ProblemFormatError(f"malformed payoffs for action {entry['name']!r}")
        names.append(entry["name"])
        rows.append(pay)
    return DecisionProblem(tuple(states), tuple(names), tuple(tuple(r) for r in rows))


def problem_to_dict(p: DecisionProblem) -> dict:
    return {
        "states": list(p.states),
        "actions": [{"name": a, "payoffs": list(row)} for a, row in zip(p.actions, p.payoff)],
    }


def serialize_problem(p: DecisionProblem) -> str:
    return json.dumps(problem_to_dict(p), indent=2)


def classify_states(
    p: DecisionProblem, a: str, b: str, tol: Tolerance = DEFAULT_TOL
) -> PairClassification:
    if a == b:
        raise SaferError("cannot classify an action against itself")
    alpha = p.payoff[p.action_index(a)]
    beta = p.payoff[p.action_index(b)]
    set_A, set_B, degenerate = [], [], []
    for s, x, y in zip(p.states, alpha, beta):
        if tol.tied(x, y):
            degenerate.append(s)
        elif x > y:
            set_A.append(s)
        else:
            set_B.append(s)
    return PairClassification(
        a, b, p.states, tuple(set_A), tuple(set_B), tuple(degenerate), alpha, beta
    )


def require_generic(c: PairClassification, drop_degenerate: bool = False) -> PairClassification:
    """Return ``c`` if every state strictly favours one action and neither dominates.

    With ``drop_degenerate`` the tied states are removed instead of rejected.
    """
    if c.degenerate:
        if not drop_degenerate:
            raise NonGenericError(
                f"degenerate state present: {', '.join(c.degenerate)}", c.degenerate
            )
        c = c.restricted([s for s in c.states if s not in c.degenerate])
    if not c.set_A or not c.set_B:
        winner = c.action_a if c.set_A else c.action_b
        raise DominatedPairError(f"pairwise dominance: {winner!r} is better in every state")
    return c


def detect_risk_free(p: DecisionProblem, tol: Tolerance = DEFAULT_TOL) -> str | None:
    """The action with a state-independent payoff, if there is one."""
    constant = [
        a for a, row in zip(p.actions, p.payoff) if tol.tied(max(row), min(row))
    ]
    if len(constant) > 1:
        raise SaferError(
            "several risk-free actions (one weakly dominates the other): " + ", ".join(constant)
        )
    return constant[0] if constant else None
