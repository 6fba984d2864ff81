"""Vectorised numpy versions of the batch scans (used when the extension is absent)."""

from __future__ import annotations

import numpy as np

_CHUNK = 4096


def _indicator(values, support):
    return (values[:, None] <= support[None, :]).astype(float)


def first_crossing_failure(alpha, beta, beliefs, abs_eps, rel_eps):
    """Index of the first belief row at which ``F_a - F_b`` is not ``-`` then ``+``.

    Returns -1 when single-crossing from below holds at every row.
    """
    alpha = np.asarray(alpha, dtype=float)
    beta = np.asarray(beta, dtype=float)
    beliefs = np.asarray(beliefs, dtype=float)
    support = np.unique(np.concatenate([alpha, beta]))
    ia, ib = _indicator(alpha, support), _indicator(beta, support)
    for start in range(0, len(beliefs), _CHUNK):
        x = beliefs[start:start + _CHUNK]
        fa, fb = x @ ia, x @ ib
        d = fa - fb
        bound = abs_eps + rel_eps * np.maximum(np.abs(fa), np.abs(fb))
        seen_pos = np.logical_or.accumulate(d > bound, axis=1)
        fail = (seen_pos[:, :-1] & (d < -bound)[:, 1:]).any(axis=1)
        if fail.any():
            return start + int(np.argmax(fail))
    return -1


def first_violation(alpha, beta, phi_alpha, phi_beta, beliefs, abs_eps, rel_eps):
    """First ``(transform, belief)`` pair, in that lexicographic order, with
    ``E u(a) >= E u(b)`` up to the tie bound and ``E phi(u(b)) - E phi(u(a))``
    above it. Callers recheck hits exactly.

    Returns ``(-1, -1)`` if there is none.
    """
    beliefs = np.asarray(beliefs, dtype=float)
    n = len(alpha)
    phi_alpha = np.asarray(phi_alpha, dtype=float).reshape(-1, n)
    phi_beta = np.asarray(phi_beta, dtype=float).reshape(-1, n)
    if phi_alpha.shape[0] == 0:
        return -1, -1
    eu_a = beliefs @ np.asarray(alpha, dtype=float)
    eu_b = beliefs @ np.asarray(beta, dtype=float)
    prefer_a = eu_a - eu_b >= -(abs_eps + rel_eps * np.maximum(np.abs(eu_a), np.abs(eu_b)))
    rows = np.flatnonzero(prefer_a)
    if rows.size == 0:
        return -1, -1
    x = beliefs[rows]
    step = max(1, _CHUNK * 64 // max(len(rows), 1))
    for start in range(0, phi_alpha.shape[0], step):
        ea = x @ phi_alpha[start:start + step].T
        eb = x @ phi_beta[start:start + step].T
        bound = abs_eps + rel_eps * np.maximum(np.abs(ea), np.abs(eb))
        hit = (eb - ea) > bound
        cols = hit.any(axis=0)
        if cols.any():
            t = int(np.argmax(cols))
            return start + t, int(rows[np.argmax(hit[:, t])])
    return -1, -1
