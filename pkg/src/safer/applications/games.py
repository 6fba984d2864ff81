"""Safety of coordination equilibria in symmetric 2x2 games."""

from __future__ import annotations

from dataclasses import dataclass

from ..core import DecisionProblem, SaferError


@dataclass(frozen=True)
class CoordinationGame:
    """Row payoffs: ``alpha1`` for (a,a), ``alpha2`` for (a,b), ``beta1`` for (b,a),
    ``beta2`` for (b,b)."""

    alpha1: float
    beta1: float
    alpha2: float
    beta2: float

    def __post_init__(self):
        if not self.alpha1 > self.beta1:
            raise SaferError("need alpha1 > beta1: (a,a) must be an equilibrium")
        if not self.beta2 > self.alpha2:
            raise SaferError("need beta2 > alpha2: (b,b) must be an equilibrium")

    @classmethod
    def from_dict(cls, doc: dict) -> CoordinationGame:
        return cls(*(float(doc[k]) for k in ("alpha1", "beta1", "alpha2", "beta2")))


@dataclass(frozen=True)
class GameReport:
    aa_safe: bool
    bb_safe: bool
    aa_risk_dominant: bool
    bb_risk_dominant: bool

    @property
    def divergent(self) -> bool:
        """Safety and risk dominance disagree about (a,a)."""
        return self.aa_safe != self.aa_risk_dominant

    def to_dict(self) -> dict:
        return {"aa_safe": self.aa_safe, "bb_safe": self.bb_safe,
                "aa_risk_dominant": self.aa_risk_dominant,
                "bb_risk_dominant": self.bb_risk_dominant, "divergent": self.divergent}


def game_safety(g: CoordinationGame) -> GameReport:
    a1, b1, a2, b2 = g.alpha1, g.beta1, g.alpha2, g.beta2
    return GameReport(
        aa_safe=a2 >= b1 and b2 >= a1,
        bb_safe=b1 >= a2 and a1 >= b2,
        aa_risk_dominant=b2 - a2 <= a1 - b1,
        bb_risk_dominant=a1 - b1 <= b2 - a2,
    )


def game_as_problem(g: CoordinationGame) -> DecisionProblem:
    """One player's choice with the opponent's action as the state."""
    return DecisionProblem(("opp_a", "opp_b"), ("a", "b"),
                           ((g.alpha1, g.alpha2), (g.beta1, g.beta2)))
