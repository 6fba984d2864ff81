"""Quadratic-loss problems: match the action to the state."""

from __future__ import annotations

from typing import Sequence

import numpy as np

from ..core import DecisionProblem, NonGenericError, SaferError

VARIANTS = ("plain", "tweaked")


def _check_grid(values, what: str) -> list[float]:
    vals = [float(v) for v in values]
    if len(vals) < 2:
        raise SaferError(f"{what} grid needs at least 2 points")
    if any(x >= y for x, y in zip(vals, vals[1:])):
        raise SaferError(f"{what} grid must be strictly increasing")
    if vals[0] < 0 or vals[-1] > 1:
        raise SaferError(f"{what} grid must lie in [0, 1]")
    return vals


def quadratic_problem(variant: str, grid: Sequence[float],
                      actions: Sequence[float] | None = None,
                      tol: float = 1e-12) -> DecisionProblem:
    """Payoff ``1 - (a - theta)^2``, plus ``theta^2`` for the tweaked variant.

    ``grid`` holds the states; actions default to the same grid. Any action pair
    whose midpoint is a state would make that state a tie, so it is rejected.
    """
    if variant not in VARIANTS:
        raise SaferError(f"variant must be one of {VARIANTS}")
    states = _check_grid(grid, "state")
    acts = states if actions is None else _check_grid(actions, "action")
    for i, a in enumerate(acts):
        for b in acts[i + 1:]:
            mid = 0.5 * (a + b)
            hit = next((t for t in states if abs(t - mid) <= tol), None)
            if hit is not None:
                raise NonGenericError(
                    f"midpoint of actions {a!r} and {b!r} is the state {hit!r}", (repr(hit),)
                )
    A = np.array(acts)[:, None]
    T = np.array(states)[None, :]
    payoff = 1.0 - (A - T) ** 2
    if variant == "tweaked":
        payoff = payoff + T ** 2
    if payoff.min() < 0:
        payoff = payoff + 1.0
    return DecisionProblem.from_arrays(payoff, [repr(t) for t in states], [repr(a) for a in acts])
