"""Counterexamples to safety: explicit constructions and brute-force search.

A counterexample is a belief and a concave transform under which the risk
neutral ranking prefers ``a`` but the transformed one prefers ``b``.
"""

from __future__ import annotations

import math
from dataclasses import dataclass

import numpy as np

from . import kernels
from .core import (
    DEFAULT_TOL,
    Belief,
    PairClassification,
    SaferError,
    Tolerance,
    require_generic,
)
from .crossing import belief_grid, default_beliefs
from .relation import is_safer
from .transforms import MIN_SLOPE, ConcaveTransform


class CertificateError(SaferError):
    pass


@dataclass(frozen=True)
class ViolationCertificate:
    belief: Belief
    transform: ConcaveTransform
    expectations: tuple[float, float, float, float]  # E u(a), E u(b), E phi u(a), E phi u(b)
    action_a: str = "a"
    action_b: str = "b"

    @property
    def margin(self) -> float:
        return self.expectations[3] - self.expectations[2]

    def to_dict(self) -> dict:
        eu_a, eu_b, ephi_a, ephi_b = self.expectations
        return {"kind": "certificate", "action_a": self.action_a, "action_b": self.action_b,
                "belief": list(self.belief.weights), "transform": self.transform.describe(),
                "expectations": {"u_a": eu_a, "u_b": eu_b, "phi_u_a": ephi_a, "phi_u_b": ephi_b},
                "margin": self.margin}


def evaluate(alpha, beta, belief: Belief, phi: ConcaveTransform) -> tuple[float, float, float, float]:
    """The four expectations, recomputed from raw payoffs."""
    return (
        belief.expect(alpha),
        belief.expect(beta),
        belief.expect(phi(np.asarray(alpha, dtype=float)).tolist()),
        belief.expect(phi(np.asarray(beta, dtype=float)).tolist()),
    )


def certificate_is_valid(alpha, beta, belief: Belief, phi: ConcaveTransform,
                         tol: Tolerance = DEFAULT_TOL) -> bool:
    eu_a, eu_b, ephi_a, ephi_b = evaluate(alpha, beta, belief, phi)
    return eu_a >= eu_b and ephi_b - ephi_a > tol.bound(ephi_a, ephi_b)


def make_certificate(alpha, beta, belief: Belief, phi: ConcaveTransform,
                     tol: Tolerance = DEFAULT_TOL, action_a: str = "a",
                     action_b: str = "b") -> ViolationCertificate:
    exps = evaluate(alpha, beta, belief, phi)
    if not certificate_is_valid(alpha, beta, belief, phi, tol):
        raise CertificateError(f"not a violation: expectations {exps}")
    return ViolationCertificate(belief, phi, exps, action_a, action_b)


def verify_certificate(cert: ViolationCertificate, alpha, beta,
                       tol: Tolerance = DEFAULT_TOL) -> bool:
    return certificate_is_valid(alpha, beta, cert.belief, cert.transform, tol)


def sample_concave(seed, payoff_range: tuple[float, float] = (0.0, 10.0),
                   kinks: int = 2) -> ConcaveTransform:
    """Random piecewise-linear concave map, reproducible from ``seed``.

    Kinks are uniform on ``payoff_range``; slopes are log-uniform on
    ``[1e-3, 10]`` and strictly decreasing. ``kinks=0`` gives an affine map.
    """
    lo, hi = payoff_range
    if kinks < 0 or not hi >= lo:
        raise SaferError("need kinks >= 0 and a nonempty payoff range")
    rng = np.random.default_rng(seed)
    while True:
        bps = np.sort(rng.uniform(lo, hi, kinks)) if hi > lo else np.full(kinks, lo)
        slopes = np.sort(np.exp(rng.uniform(math.log(1e-3), math.log(10.0), kinks + 1)))[::-1]
        if np.all(np.diff(bps) > 0) and np.all(np.diff(slopes) < 0):
            break
        if hi == lo and kinks > 1:
            raise SaferError("cannot place distinct kinks in a degenerate range")
    slopes = np.maximum(slopes, MIN_SLOPE)
    return ConcaveTransform.piecewise(bps.tolist(), slopes.tolist(), float(rng.uniform(0.0, 1.0)))


def _standing(a0, a1, b0, b1):
    if not (a0 > b0 and b1 > a1):
        raise SaferError("need alpha0 > beta0 and beta1 > alpha1")


def flattening_coefficients(a0: float, a1: float, b0: float, b1: float) -> tuple[float, float]:
    """Slope ``k`` and intercept ``c`` of the kinked map ``min{y, k y + c}``.

    Valid when ``beta1 >= alpha0 > beta0 > alpha1``; the map then has its kink at
    ``beta0`` and ``0 < k < 1``.
    """
    _standing(a0, a1, b0, b1)
    if not (b0 > a1 and a0 <= b1):
        raise SaferError("case 1 needs beta0 > alpha1 and alpha0 <= beta1")
    denom = b0 * (a1 - b0) + a0 * (b0 - 2 * a1) + b0 * b1
    c = b0 * (b0 * b1 - a0 * a1) / denom
    k = (a0 - b0) * (b0 - a1) / denom
    if not 0 < k < 1:
        raise SaferError(f"slope k={k!r} outside (0, 1)")
    return k, c


def halving_gap(a0: float, a1: float, b0: float, b1: float) -> float:
    """Secant gap for ``min{y, (y + beta0)/2}`` when ``alpha0 > beta1`` and ``beta0 > alpha1``."""
    _standing(a0, a1, b0, b1)
    if not (b0 > a1 and a0 > b1):
        raise SaferError("case 2 needs beta0 > alpha1 and alpha0 > beta1")
    return (b0 - a1) / (2 * (a0 - a1))


def appendix_transform(case: int, a0: float, a1: float, b0: float, b1: float) -> ConcaveTransform:
    """Kinked transform that breaks the two-state safety inequality when ``beta0 > alpha1``.

    State 0 is where ``a`` wins. Case 1 (``alpha0 <= beta1``) flattens to slope
    ``k`` above ``beta0``; case 2 (``alpha0 > beta1``) halves the slope there.
    """
    if case == 1:
        k, _ = flattening_coefficients(a0, a1, b0, b1)
        return ConcaveTransform.piecewise((b0,), (1.0, k))
    if case == 2:
        halving_gap(a0, a1, b0, b1)
        return ConcaveTransform.piecewise((b0,), (1.0, 0.5))
    raise SaferError(f"unknown case {case!r}")


def cap_transform(level: float, eps: float) -> ConcaveTransform:
    """``min{y, level + eps (y - level)}``."""
    return ConcaveTransform.piecewise((level,), (1.0, eps))


def _edge_weight(x0, x1, y0, y1) -> float:
    """Weight on state 1 at which payoffs (x0, x1) and (y0, y1) tie."""
    return (x0 - y0) / ((x0 - y0) + (y1 - x1))


def _edge_certificate(c: PairClassification, i: int, j: int, phi: ConcaveTransform,
                      tol: Tolerance) -> ViolationCertificate | None:
    a0, a1, b0, b1 = c.alpha[i], c.alpha[j], c.beta[i], c.beta[j]
    fa0, fa1, fb0, fb1 = (phi.scalar(v) for v in (a0, a1, b0, b1))
    x_bar = _edge_weight(a0, a1, b0, b1)
    x_hat = _edge_weight(fa0, fa1, fb0, fb1)
    if not x_hat < x_bar:
        return None
    w = 0.5 * (x_hat + x_bar)
    weights = [0.0] * c.n_states
    weights[i], weights[j] = 1.0 - w, w
    belief = Belief(tuple(weights))
    if not certificate_is_valid(c.alpha, c.beta, belief, phi, tol):
        return None
    return make_certificate(c.alpha, c.beta, belief, phi, tol, c.action_a, c.action_b)


def construct_violation(c: PairClassification, tol: Tolerance = DEFAULT_TOL,
                        cap_eps: float = 0.5) -> ViolationCertificate:
    """Build a counterexample for a pair that is not safer.

    Works on one violating edge. If ``a`` in its losing state pays less than
    ``b`` in its losing state, the kinked transforms at ``beta0`` are used.
    Otherwise ``a``'s best payoff exceeds ``b``'s, and the map is capped at
    ``beta1`` with slope ``eps`` above it, halving ``eps`` until it works. The
    belief sits midway between the two indifference points.
    """
    c = require_generic(c)
    verdict = is_safer(c, tol)
    if verdict.safer:
        raise SaferError("pair is safer")
    ordered = sorted(verdict.violations, key=lambda v: v.kind != "a_wrong_vs_b_wrong")
    for w in ordered:
        i, j = c.index(w.theta_a), c.index(w.theta_b)
        a0, a1, b0, b1 = c.alpha[i], c.alpha[j], c.beta[i], c.beta[j]
        if w.kind == "a_wrong_vs_b_wrong":
            phi = appendix_transform(1 if a0 <= b1 else 2, a0, a1, b0, b1)
            cert = _edge_certificate(c, i, j, phi, tol)
            if cert is not None:
                return cert
            continue
        eps = cap_eps
        while eps >= 1e-12:
            cert = _edge_certificate(c, i, j, cap_transform(b1, max(eps, MIN_SLOPE)), tol)
            if cert is not None:
                return cert
            eps /= 2
        raise CertificateError("eps underflow: no cap transform separates the indifference points")
    raise CertificateError("no violating edge yielded a certificate within tolerance")


def falsify_safety(c: PairClassification, transforms: int = 2000, beliefs=None, seed: int = 42,
                   kinks: int | None = None,
                   tol: Tolerance = DEFAULT_TOL) -> ViolationCertificate | None:
    """Monte Carlo search for a counterexample, first hit in (transform, belief) order.

    ``beliefs`` may be an array of beliefs, an int resolution for
    :func:`belief_grid`, or None for the default augmented grid. Transform ``i``
    is ``sample_concave((seed, i), ...)`` with ``kinks`` kinks (cycling 1..3 if
    None).
    """
    c = require_generic(c)
    if transforms <= 0:
        return None
    if beliefs is None:
        X = default_beliefs(c, seed=seed)
    elif isinstance(beliefs, (int, np.integer)):
        X = belief_grid(c.n_states, int(beliefs), seed)
    else:
        X = np.array([getattr(b, "weights", b) for b in beliefs], dtype=float).reshape(-1, c.n_states)
    alpha, beta = np.asarray(c.alpha), np.asarray(c.beta)
    values = np.concatenate([alpha, beta])
    rng = (float(values.min()), float(values.max()))
    phis = [sample_concave((seed, i), rng, (i % 3) + 1 if kinks is None else kinks)
            for i in range(transforms)]
    pa = np.array([phi(alpha) for phi in phis])
    pb = np.array([phi(beta) for phi in phis])
    t = 0
    while t < len(phis):
        first, _ = kernels.first_violation(alpha, beta, pa[t:], pb[t:], X,
                                           tol.abs_eps, tol.rel_eps)
        if first < 0:
            return None
        t += first
        start = 0
        while start < len(X):
            # the batch scan is tie-tolerant; recheck each hit exactly
            _, j = kernels.first_violation(alpha, beta, pa[t], pb[t], X[start:],
                                           tol.abs_eps, tol.rel_eps)
            if j < 0:
                break
            row = X[start + j]
            belief = Belief(tuple(row / row.sum()))
            if certificate_is_valid(c.alpha, c.beta, belief, phis[t], tol):
                return make_certificate(c.alpha, c.beta, belief, phis[t], tol,
                                        c.action_a, c.action_b)
            start += j + 1
        t += 1
    return None
