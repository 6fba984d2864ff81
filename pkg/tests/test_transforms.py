import math

import numpy as np
import pytest
from hypothesis import given, settings
from hypothesis import strategies as st

from safer.core import SaferError
from safer.oracle import sample_concave
from safer.transforms import MIN_SLOPE, ConcaveTransform, parse_transform, secant


def test_power_values():
    phi = ConcaveTransform.power(2)
    assert phi.scalar(9.0) == 3.0
    assert np.allclose(phi([0.0, 4.0, 16.0]), [0.0, 2.0, 4.0])


def test_piecewise_values():
    phi = ConcaveTransform.piecewise((4.0,), (1.0, 0.01))
    assert phi.scalar(3.0) == 3.0
    assert phi.scalar(5.0) == pytest.approx(4.01)
    assert phi.scalar(1.0) == 1.0


@pytest.mark.parametrize("args", [
    ((1.0,), (1.0,)),          # slope count
    ((2.0, 1.0), (1.0, 0.5, 0.2)),
    ((1.0,), (0.5, 1.0)),      # convex
    ((1.0,), (1.0, 0.0)),      # flat
])
def test_piecewise_rejects(args):
    with pytest.raises(SaferError):
        ConcaveTransform.piecewise(*args)


def test_power_rejects_convex():
    with pytest.raises(SaferError, match="t >= 1"):
        ConcaveTransform.power(0.5)


def test_negative_input():
    with pytest.raises(SaferError, match="nonnegative"):
        ConcaveTransform.power(2)(-1.0)


@pytest.mark.parametrize("text,expected", [
    ("identity", ConcaveTransform.identity()),
    ("power:t=2", ConcaveTransform.power(2)),
    ("power t=4", ConcaveTransform.power(4)),
    ("pwl:breaks=4;slopes=1,0.01;intercept=0", ConcaveTransform.piecewise((4,), (1, 0.01))),
    ("pwl breaks=1,2 slopes=3,2,1 intercept=0.5", ConcaveTransform.piecewise((1, 2), (3, 2, 1), 0.5)),
])
def test_parse(text, expected):
    assert parse_transform(text) == expected


@pytest.mark.parametrize("text", ["", "cubic t=2", "power", "pwl:breaks=1;slopes=a,b"])
def test_parse_rejects(text):
    with pytest.raises(SaferError):
        parse_transform(text)


@given(st.integers(0, 2**32 - 1), st.integers(0, 4))
@settings(max_examples=100)
def test_describe_roundtrip_and_concavity(seed, kinks):
    phi = sample_concave(seed, (0.0, 10.0), kinks)
    assert parse_transform(phi.describe()) == phi
    ys = np.linspace(0.0, 12.0, 241)
    v = phi(ys)
    d = np.diff(v)
    assert (d > 0).all()
    assert (np.diff(d) <= 1e-12).all()


def test_sample_concave_structure():
    phi = sample_concave(7, (0.0, 10.0), 3)
    assert len(phi.breakpoints) == 3 and len(phi.slopes) == 4
    assert all(x > y for x, y in zip(phi.slopes, phi.slopes[1:]))
    assert all(s >= MIN_SLOPE for s in phi.slopes)
    assert sample_concave(7, (0.0, 10.0), 3) == phi
    assert sample_concave(0, (0.0, 10.0), 0).is_affine


def test_secant():
    phi = ConcaveTransform.power(2)
    assert secant(phi, 1.0, 4.0) == pytest.approx(1.0 / 3.0)
    assert math.isclose(secant(ConcaveTransform.identity(), 2.0, 7.0), 1.0)
