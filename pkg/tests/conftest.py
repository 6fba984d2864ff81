import numpy as np
import pytest

from safer.core import DecisionProblem, classify_states


def pair(alpha, beta, a="a", b="b"):
    """Classification of a two-action problem given the two payoff rows."""
    n = len(alpha)
    p = DecisionProblem(tuple(f"s{k}" for k in range(n)), (a, b), (tuple(alpha), tuple(beta)))
    return classify_states(p, a, b)


def random_generic_pair(rng, n_states):
    """Payoffs uniform on [0, 10], redrawn until neither action dominates."""
    while True:
        m = rng.uniform(0.0, 10.0, size=(2, n_states))
        d = m[0] - m[1]
        if (d > 0).any() and (d < 0).any():
            return pair(m[0].tolist(), m[1].tolist())


@pytest.fixture
def rng():
    return np.random.default_rng(20240601)
