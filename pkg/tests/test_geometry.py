import math

import numpy as np
import pytest
from conftest import pair, random_generic_pair
from scipy.spatial import Delaunay

from safer.core import SaferError, Tolerance
from safer.geometry import (
    indifference_point,
    polygon_rows,
    preference_region,
    region_included,
    region_rows,
    to_csv,
    transformed_region,
)
from safer.oracle import sample_concave
from safer.relation import is_safer
from safer.transforms import ConcaveTransform

CAP = ConcaveTransform.piecewise((4.0,), (1.0, 0.01))
SQRT = ConcaveTransform.power(2)


def test_indifference_examples():
    assert indifference_point(pair((3, 2), (1, 4)), "s0", "s1").weights == (0.5, 0.5)
    assert indifference_point(pair((5, 3), (1, 4)), "s0", "s1").weights[1] == pytest.approx(0.8)
    x = indifference_point(pair((3, 2, 2), (1, 4, 4)), "s0", "s2")
    assert x.weights == (0.5, 0.0, 0.5)  # exact zero off the edge


def test_indifference_rejects_wrong_side():
    with pytest.raises(SaferError):
        indifference_point(pair((3, 2), (1, 4)), "s1", "s0")


def test_region_extreme_points():
    r = preference_region(pair((3, 2, 2), (1, 4, 4)))
    pts = sorted(b.weights for b in r.extreme_points)
    assert pts == sorted([(1.0, 0.0, 0.0), (0.5, 0.5, 0.0), (0.5, 0.0, 0.5)])
    assert r.halfspace_normal == (2.0, -2.0, -2.0)
    assert r.contains((0.6, 0.2, 0.2)) and not r.contains((0.4, 0.3, 0.3))


def test_two_state_segment():
    r = preference_region(pair((3, 2), (1, 4)))
    assert sorted(b.weights for b in r.extreme_points) == [(0.5, 0.5), (1.0, 0.0)]


def test_extreme_points_tie_or_strict(rng):
    for _ in range(100):
        c = random_generic_pair(rng, int(rng.integers(2, 6)))
        r = preference_region(c)
        for x in r.edge_points.values():
            assert x.expect(c.alpha) == pytest.approx(x.expect(c.beta), abs=1e-9)
        for s in r.vertices_A:
            k = c.index(s)
            assert c.alpha[k] > c.beta[k]


def test_region_matches_grid_membership():
    c = pair((2, 2, 2), (1, 4, 0))
    r = preference_region(c)
    hull = Delaunay(np.array(r.polygon()))
    n = 200
    i, j = np.meshgrid(np.arange(n + 1), np.arange(n + 1), indexing="ij")
    keep = i + j <= n
    xy = np.column_stack([i[keep], j[keep]]) / n
    w = np.column_stack([1 - xy.sum(1), xy])
    gap = w @ (np.array(c.alpha) - np.array(c.beta))
    clear = np.abs(gap) > 1e-9
    inside_hull = hull.find_simplex(xy) >= 0
    assert np.array_equal(inside_hull[clear], (gap >= 0)[clear])


def test_polygon_area_monte_carlo(rng):
    for _ in range(5):
        c = random_generic_pair(rng, 3)
        r = preference_region(c)
        area = r.area()
        assert area > 0  # counterclockwise
        x = rng.dirichlet(np.ones(3), size=100_000)
        frac = np.mean(x @ (np.array(c.alpha) - np.array(c.beta)) >= 0)
        assert 2 * area == pytest.approx(frac, rel=0.01, abs=0.003)


def test_transformed_region_examples():
    c = pair((3, 2), (1, 4))
    r_hat = transformed_region(c, SQRT)
    expected = (math.sqrt(3) - 1) / ((math.sqrt(3) - 1) + (2 - math.sqrt(2)))
    assert r_hat.edge_points[("s0", "s1")].weights[1] == pytest.approx(expected, abs=1e-12)
    assert expected == pytest.approx(0.5554, abs=1e-4)
    inc = region_included(preference_region(c), r_hat)
    assert inc.included
    assert inc.margins[("s0", "s1")] == pytest.approx(expected - 0.5)

    c = pair((5, 3), (1, 4))
    r_hat = transformed_region(c, CAP)
    assert r_hat.edge_points[("s0", "s1")].weights[1] == pytest.approx(0.7506, abs=1e-4)
    assert not region_included(preference_region(c), r_hat).included


def test_identity_transform():
    c = pair((3, 2, 2), (1, 4, 4))
    r = preference_region(c)
    r_hat = transformed_region(c, ConcaveTransform.identity())
    assert r_hat.edge_points == r.edge_points
    inc = region_included(r, r_hat)
    assert inc.included and all(m == 0 for m in inc.margins.values())


def test_safer_implies_inclusion(rng):
    checked = 0
    for k in range(300):
        c = random_generic_pair(rng, int(rng.integers(2, 5)))
        if not is_safer(c).safer:
            continue
        lo, hi = min(c.alpha + c.beta), max(c.alpha + c.beta)
        for i in range(20):
            phi = sample_concave((k, i), (lo, hi), 1 + i % 3)
            try:
                r_hat = transformed_region(c, phi)
            except SaferError:
                continue  # transform created a tie
            assert region_included(preference_region(c), r_hat).included
            checked += 1
    assert checked > 100


def test_transform_created_tie():
    # above the kink at 4 the gap 0.5 shrinks to 5e-7
    c = pair((5, 3), (4.5, 4))
    flat = ConcaveTransform.piecewise((4.0,), (1.0, 1e-6))
    assert transformed_region(c, flat).edge_points
    with pytest.raises(SaferError, match="degenerate"):
        transformed_region(c, flat, Tolerance(1e-6, 0.0))


def test_csv_exports():
    c = pair((3, 2, 2), (1, 4, 4))
    r = preference_region(c)
    inc = region_included(r, transformed_region(c, SQRT))
    rows = region_rows(r, inc)
    assert rows[0] == ["edge_or_vertex", "s0", "s1", "s2", "margin"]
    assert rows[1][0] == "vertex:s0"
    text = to_csv(polygon_rows(r))
    assert text.splitlines()[0] == "x,y,s0,s1,s2"
    assert len(text.splitlines()) == 4


def test_polygon_needs_three_states():
    with pytest.raises(SaferError):
        preference_region(pair((3, 2), (1, 4))).polygon()
