"""End-to-end acceptance checks; each prints one PASS/FAIL line."""

import time
from fractions import Fraction

import numpy as np
import pytest
from conftest import pair, random_generic_pair

from safer.applications import (
    CoordinationGame,
    game_safety,
    make_security,
    quadratic_problem,
    random_security,
    security_crossing,
    security_safer,
)
from safer.core import (
    DecisionProblem,
    NonGenericError,
    classify_states,
    detect_risk_free,
)
from safer.crossing import robust_single_cross
from safer.geometry import preference_region, region_included, transformed_region
from safer.oracle import (
    construct_violation,
    evaluate,
    falsify_safety,
    flattening_coefficients,
    halving_gap,
    verify_certificate,
)
from safer.relation import is_safer, order_report, slope_report
from safer.transforms import ConcaveTransform

CORPUS_SEED = 1


@pytest.fixture
def report(capsys):
    def emit(number, ok, detail):
        with capsys.disabled():
            print(f"\ncriterion {number:>2} {'PASS' if ok else 'FAIL'}: {detail}")
        assert ok, detail
    return emit


@pytest.fixture(scope="module")
def corpus():
    rng = np.random.default_rng(CORPUS_SEED)
    return [random_generic_pair(rng, 2 + i % 5) for i in range(500)]


def test_criterion_01_oracle_agreement(corpus, report):
    start = time.perf_counter()
    disagreements, n_safer = [], 0
    for k, c in enumerate(corpus):
        if is_safer(c).safer:
            n_safer += 1
            if falsify_safety(c, transforms=2000) is not None:
                disagreements.append(k)
        else:
            cert = construct_violation(c)
            exps = evaluate(c.alpha, c.beta, cert.belief, cert.transform)
            if not (verify_certificate(cert, c.alpha, c.beta) and exps[3] - exps[2] > 1e-9):
                disagreements.append(k)
    elapsed = time.perf_counter() - start
    report(1, not disagreements and elapsed <= 60,
           f"{len(corpus)} problems ({n_safer} safer), {len(disagreements)} disagreements, "
           f"{elapsed:.1f} s")


def test_criterion_02_single_crossing_agreement(corpus, report):
    bad = [k for k, c in enumerate(corpus)
           if robust_single_cross(c).passed != is_safer(c).safer]
    report(2, not bad, f"{len(corpus)} problems, {len(bad)} disagreements")


def test_criterion_03_converse_example(report):
    c = pair((5, 3), (1, 4))
    flatter = slope_report(c).flatter
    verdict = is_safer(c)
    cert = construct_violation(c)
    ok = flatter and not verdict.safer and verify_certificate(cert, c.alpha, c.beta)
    report(3, ok, f"flatter={flatter}, relation={verdict.relation}, "
                  f"certificate margin={cert.margin:.4f}")


def test_criterion_04_power_transform_regions(report):
    start = time.perf_counter()
    safe, unsafe = pair((3, 2, 2.5), (1, 4, 5)), pair((3, 2, 0.1), (1, 4, 5))
    worst_safe, worst_unsafe = np.inf, np.inf
    for t in (2, 4, 8):
        phi = ConcaveTransform.power(t)
        inc = region_included(preference_region(safe), transformed_region(safe, phi))
        worst_safe = min(worst_safe, min(inc.margins.values()))
        inc = region_included(preference_region(unsafe), transformed_region(unsafe, phi))
        worst_unsafe = min(worst_unsafe, min(inc.margins.values()))
    elapsed = time.perf_counter() - start
    ok = worst_safe >= -1e-9 and worst_unsafe < 0 and elapsed < 1
    report(4, ok, f"min margin safe={worst_safe:.4f}, flipped={worst_unsafe:.4f}, "
                  f"{elapsed * 1000:.1f} ms")


def test_criterion_05_security_corollaries(report):
    rng = np.random.default_rng(CORPUS_SEED)
    corpus = [random_security(rng) for _ in range(200)]
    failures, boundary = 0, 0
    for p in (0.1, 0.5, 0.9):
        debt, call = make_security("debt", p), make_security("call", p)
        for s in corpus:
            for v in (security_safer(debt, s), security_safer(s, call)):
                failures += not v.safer
                boundary += v.dominated
    worst = 0.0
    for d in (0.1, 0.5, 0.9):
        for eta in (0.15, 0.55, 0.75, 0.95):
            if eta <= d:
                continue
            x = security_crossing(make_security("debt", d), make_security("equity", eta))
            expected = Fraction(d) / Fraction(eta)
            worst = max(worst, abs(float(x.theta_bar - expected)), abs(float(x.theta_bar) - d / eta))
    ok = failures == 0 and worst <= 1e-12
    report(5, ok, f"200 securities x 3 params, {failures} failures, {boundary} dominated "
                  f"(boundary), crossing error {worst:.1e}")


def test_criterion_06_quadratic_loss(report):
    actions = np.round(np.linspace(0.05, 0.95, 11), 2).tolist()
    states = np.round(0.013 + 0.1 * np.arange(10), 3).tolist() + [1.0]
    plain = order_report(quadratic_problem("plain", states, actions))
    tweaked = order_report(quadratic_problem("tweaked", states, actions))
    ranked_plain = sum(v.safer for (a, b), v in plain.pair_matrix.items() if a != b)
    mismatched = sum(
        tweaked.relates(a, b) != (float(a) <= float(b))
        for a in tweaked.actions for b in tweaked.actions
    )
    distinct = sum(1 for a, b in plain.pair_matrix if a != b)
    ok = ranked_plain == 0 and distinct == 110 and mismatched == 0
    report(6, ok, f"plain ranks {ranked_plain}/{distinct} pairs; tweaked mismatches "
                  f"{mismatched}/121 against a <= b")


def test_criterion_07_kinked_constructions(report):
    rng = np.random.default_rng(CORPUS_SEED)
    worst, bad_k = 0.0, 0
    for _ in range(100):
        # alpha1 < beta0 < alpha0 <= beta1
        a1, b0, a0, b1 = np.sort(rng.uniform(0, 10, 4))
        k, c = flattening_coefficients(a0, a1, b0, b1)
        bad_k += not 0 < k < 1
        worst = max(worst, abs(k * b0 + c - b0))
    bad_psi = 0
    for _ in range(100):
        # alpha1 below both b payoffs, alpha0 above both
        lo, m1, m2, hi = np.sort(rng.uniform(0, 10, 4))
        b0, b1 = (m1, m2) if rng.random() < 0.5 else (m2, m1)
        bad_psi += not halving_gap(hi, lo, b0, b1) > 0
    ok = bad_k == 0 and worst <= 1e-12 and bad_psi == 0
    report(7, ok, f"case 1: {bad_k} slopes outside (0,1), identity error {worst:.1e}; "
                  f"case 2: {bad_psi} nonpositive gaps")


def test_criterion_08_game_divergence(report):
    div = game_safety(CoordinationGame(5, 1, 2, 4))
    both = game_safety(CoordinationGame(3, 1, 2, 4))
    ok = div.aa_risk_dominant and not div.aa_safe and both.aa_risk_dominant and both.aa_safe
    report(8, ok, f"(5,1,2,4): safe={div.aa_safe}, risk dominant={div.aa_risk_dominant}; "
                  f"(3,1,2,4): safe={both.aa_safe}, risk dominant={both.aa_risk_dominant}")


def _verified(p, a, b):
    return is_safer(classify_states(p, a, b)).safer


def test_criterion_09_nontransitivity(report):
    rng = np.random.default_rng(CORPUS_SEED)
    found, samples = None, 0
    while samples < 10_000 and found is None:
        samples += 1
        p = DecisionProblem.from_arrays(rng.uniform(0, 10, (3, 3)), actions=["a", "b", "c"])
        try:
            r = order_report(p)
        except NonGenericError:
            continue
        if r.transitivity_violations:
            found = (p, r.transitivity_violations[0])
    ok = False
    detail = f"no triple in {samples} samples"
    if found:
        p, (x, y, z) = found
        ok = _verified(p, x, y) and _verified(p, y, z) and not _verified(p, x, z)
        detail = f"{x}>={y}, {y}>={z}, {x} not >= {z} after {samples} samples; payoffs {p.matrix.round(3).tolist()}"
    report(9, ok, detail)


def test_criterion_10_risk_free(report):
    rng = np.random.default_rng(CORPUS_SEED)
    problems, failures = 0, 0
    while problems < 100:
        n, m = int(rng.integers(2, 5)), int(rng.integers(2, 4))
        rows = rng.uniform(0, 10, (m, n))
        lo, hi = rows.min(axis=1).max(), rows.max(axis=1).min()
        if lo >= hi:
            continue
        level = rng.uniform(lo, hi)
        names = [f"x{i}" for i in range(m)]
        p = DecisionProblem.from_arrays(np.vstack([rows, np.full(n, level)]),
                                        actions=names + ["safe"])
        problems += 1
        ok = detect_risk_free(p) == "safe" and all(
            _verified(p, "safe", b) and not _verified(p, b, "safe") for b in names
        )
        failures += not ok
    report(10, failures == 0, f"{problems} problems, {failures} failures")
