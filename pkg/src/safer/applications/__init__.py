"""Securities, hedging, coordination games and quadratic-loss problems."""

from .games import CoordinationGame, game_as_problem, game_safety
from .hedging import HedgingInstance, fosd, hedge_check, hedge_problem
from .quadratic import quadratic_problem
from .securities import (
    Security,
    make_security,
    random_security,
    security_crossing,
    security_safer,
)

__all__ = [
    "CoordinationGame", "HedgingInstance", "Security", "fosd", "game_as_problem",
    "game_safety", "hedge_check", "hedge_problem", "make_security", "quadratic_problem",
    "random_security", "security_crossing", "security_safer",
]
