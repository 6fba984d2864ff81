"""Securities on cash flow in [0, 1] as exact piecewise-linear functions.

All arithmetic uses :class:`fractions.Fraction`, so crossing points and sign
patterns are exact for any float inputs.
"""

from __future__ import annotations

from dataclasses import dataclass
from fractions import Fraction
from typing import Sequence

import numpy as np

from ..core import DominatedPairError, SaferError
from ..relation import NOT_SAFER, SAFER

SINGLE_CROSS = "single_cross_from_below"
FAILS = "fails"


def _frac(x) -> Fraction:
    return x if isinstance(x, Fraction) else Fraction(x)


@dataclass(frozen=True)
class Security:
    """Investor payoff ``S(theta)``, linear between ``breakpoints``.

    Valid securities are nondecreasing, leave the firm a nondecreasing share
    (segment slopes in [0, 1]) and satisfy ``0 <= S(theta) <= theta``.
    """

    breakpoints: tuple[Fraction, ...]
    values: tuple[Fraction, ...]
    name: str = "custom"

    def __post_init__(self):
        bps = tuple(_frac(b) for b in self.breakpoints)
        vals = tuple(_frac(v) for v in self.values)
        object.__setattr__(self, "breakpoints", bps)
        object.__setattr__(self, "values", vals)
        if len(bps) < 2 or len(bps) != len(vals):
            raise SaferError("need at least two breakpoints and one value per breakpoint")
        if bps[0] != 0 or bps[-1] != 1:
            raise SaferError("breakpoints must start at 0 and end at 1")
        if any(x >= y for x, y in zip(bps, bps[1:])):
            raise SaferError("breakpoints must be strictly increasing")
        for slope in self.slopes:
            if slope < 0:
                raise SaferError("Monotonicity I violated: S decreases on a segment")
            if slope > 1:
                raise SaferError("Monotonicity II violated: theta - S decreases on a segment")
        for b, v in zip(bps, vals):
            if not 0 <= v <= b:
                raise SaferError(f"limited liability violated at theta={b}: S={v}")

    @property
    def slopes(self) -> list[Fraction]:
        b, v = self.breakpoints, self.values
        return [(v[k + 1] - v[k]) / (b[k + 1] - b[k]) for k in range(len(b) - 1)]

    def __call__(self, theta) -> Fraction:
        theta = _frac(theta)
        if not 0 <= theta <= 1:
            raise SaferError("cash flow must lie in [0, 1]")
        b, v = self.breakpoints, self.values
        for k in range(len(b) - 1):
            if theta <= b[k + 1]:
                return v[k] + (v[k + 1] - v[k]) * (theta - b[k]) / (b[k + 1] - b[k])
        return v[-1]

    def evaluate(self, thetas) -> np.ndarray:
        return np.interp(np.asarray(thetas, dtype=float),
                         [float(b) for b in self.breakpoints], [float(v) for v in self.values])

    def to_dict(self) -> dict:
        return {"name": self.name, "breakpoints": [float(b) for b in self.breakpoints],
                "values": [float(v) for v in self.values]}


def make_security(kind: str, param=None, breakpoints: Sequence | None = None,
                  values: Sequence | None = None) -> Security:
    """``equity`` (share eta), ``debt`` (face value d), ``call`` (strike rho) or ``custom``."""
    if kind == "custom":
        if breakpoints is None or values is None:
            raise SaferError("custom securities need breakpoints and values")
        return Security(tuple(breakpoints), tuple(values), "custom")
    if kind not in ("equity", "debt", "call"):
        raise SaferError(f"unknown security kind {kind!r}")
    if param is None or not 0 < float(param) < 1:
        raise SaferError(f"{kind} parameter must lie in (0, 1)")
    p = _frac(param)
    label = f"{kind}({float(param)!r})"
    if kind == "equity":
        return Security((0, 1), (0, p), label)
    if kind == "debt":
        return Security((0, p, 1), (0, p, p), label)
    return Security((0, p, 1), (0, 0, 1 - p), label)


def security_from_dict(doc: dict) -> Security:
    if "kind" in doc:
        return make_security(doc["kind"], doc.get("param"), doc.get("breakpoints"), doc.get("values"))
    return make_security("custom", breakpoints=doc["breakpoints"], values=doc["values"])


def random_security(rng: np.random.Generator, max_pieces: int = 5) -> Security:
    pieces = int(rng.integers(1, max_pieces + 1))
    inner = np.sort(rng.uniform(0.0, 1.0, pieces - 1))
    bps = [Fraction(0)] + [Fraction(float(x)) for x in inner] + [Fraction(1)]
    if len(set(bps)) != len(bps):
        return random_security(rng, max_pieces)
    vals = [Fraction(0)]
    for k in range(pieces):
        vals.append(vals[-1] + Fraction(float(rng.uniform(0.0, 1.0))) * (bps[k + 1] - bps[k]))
    return Security(tuple(bps), tuple(vals), "random")


@dataclass(frozen=True)
class SecurityCrossing:
    """Does ``S_b - S_a`` go from nonpositive to nonnegative (at most one crossing)?"""

    crosses: str
    theta_bar: Fraction | None
    violation: tuple[Fraction, Fraction] | None
    equal: bool
    grid: tuple[Fraction, ...]
    diff: tuple[Fraction, ...]

    @property
    def passed(self) -> bool:
        return self.crosses == SINGLE_CROSS

    def to_dict(self) -> dict:
        return {"crosses": self.crosses, "equal": self.equal,
                "theta_bar": None if self.theta_bar is None else float(self.theta_bar),
                "violation": None if self.violation is None else [float(t) for t in self.violation]}


def _diff_on_grid(Sa: Security, Sb: Security):
    grid = sorted(set(Sa.breakpoints) | set(Sb.breakpoints))
    return grid, [Sb(t) - Sa(t) for t in grid]


def security_crossing(Sa: Security, Sb: Security) -> SecurityCrossing:
    """Sign analysis of ``S_b - S_a``, which is linear between merged breakpoints.

    ``theta_bar`` is the smallest admissible crossing point: the supremum of
    the cash flows where ``S_b < S_a`` (0 if there are none).
    """
    grid, g = _diff_on_grid(Sa, Sb)
    first_pos = next((k for k, d in enumerate(g) if d > 0), None)
    if first_pos is not None:
        neg = next((k for k in range(first_pos + 1, len(g)) if g[k] < 0), None)
        if neg is not None:
            return SecurityCrossing(FAILS, None, (grid[first_pos], grid[neg]), False,
                                    tuple(grid), tuple(g))
    theta_bar = Fraction(0)
    for k in range(len(grid) - 1):
        g0, g1 = g[k], g[k + 1]
        if g1 < 0:
            theta_bar = grid[k + 1]
        elif g0 < 0:
            theta_bar = grid[k] + g0 / (g0 - g1) * (grid[k + 1] - grid[k])
    return SecurityCrossing(SINGLE_CROSS, theta_bar, None, all(d == 0 for d in g),
                            tuple(grid), tuple(g))


@dataclass(frozen=True)
class SecurityVerdict:
    relation: str
    crossing: SecurityCrossing
    witness: tuple[Fraction, Fraction] | None = None
    dominated: bool = False

    @property
    def safer(self) -> bool:
        return self.relation == SAFER

    def to_dict(self) -> dict:
        return {"relation": self.relation, "dominated": self.dominated,
                "crossing": self.crossing.to_dict(),
                "witness": None if self.witness is None else [float(t) for t in self.witness]}


def security_safer(Sa: Security, Sb: Security, strict: bool = False) -> SecurityVerdict:
    """``S_a`` is safer than ``S_b`` iff ``S_b`` single-crosses ``S_a`` from below.

    On failure the witness is ``(theta1, theta2)``, ``theta1 < theta2``, with
    ``S_a < S_b`` at ``theta1`` and ``S_b < S_a`` at ``theta2``. When one
    security pays weakly more everywhere the crossing holds trivially; the
    verdict is flagged ``dominated``, or raises if ``strict``.
    """
    _, g = _diff_on_grid(Sa, Sb)
    dominated = not any(d > 0 for d in g) or not any(d < 0 for d in g)
    if dominated and strict:
        raise DominatedPairError(
            f"pairwise dominance between {Sa.name} and {Sb.name}: "
            "one security pays weakly more at every cash flow"
        )
    crossing = security_crossing(Sa, Sb)
    if crossing.passed:
        return SecurityVerdict(SAFER, crossing, dominated=dominated)
    return SecurityVerdict(NOT_SAFER, crossing, crossing.violation)
