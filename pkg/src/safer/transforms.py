"""Strictly increasing concave maps on the nonnegative reals."""

from __future__ import annotations

import re
from dataclasses import dataclass

import numpy as np

from .core import SaferError

MIN_SLOPE = 1e-6


@dataclass(frozen=True)
class ConcaveTransform:
    """Either ``y -> y**(1/t)`` (``kind="power"``, ``t >= 1``) or a piecewise-linear map.

    The piecewise-linear form is ``intercept`` at 0, slope ``slopes[0]`` up to
    ``breakpoints[0]``, then ``slopes[1]`` and so on. Slopes must be positive
    and nonincreasing, which makes the map strictly increasing and concave.
    """

    kind: str
    t: float = 1.0
    breakpoints: tuple[float, ...] = ()
    slopes: tuple[float, ...] = (1.0,)
    intercept: float = 0.0

    def __post_init__(self):
        object.__setattr__(self, "breakpoints", tuple(float(b) for b in self.breakpoints))
        object.__setattr__(self, "slopes", tuple(float(s) for s in self.slopes))
        if self.kind == "power":
            if not self.t >= 1:
                raise SaferError("power transform needs t >= 1")
        elif self.kind == "piecewise_linear":
            b, s = self.breakpoints, self.slopes
            if len(s) != len(b) + 1:
                raise SaferError("piecewise-linear transform needs one more slope than breakpoints")
            if any(x >= y for x, y in zip(b, b[1:])):
                raise SaferError("breakpoints must be strictly increasing")
            if any(not v > 0 for v in s):
                raise SaferError("slopes must be strictly positive (strict monotonicity)")
            if any(x < y for x, y in zip(s, s[1:])):
                raise SaferError("slopes must be nonincreasing (concavity)")
            if self.intercept < 0:
                raise SaferError("transform must map nonnegative payoffs to nonnegative values")
        else:
            raise SaferError(f"unknown transform kind {self.kind!r}")

    @classmethod
    def power(cls, t: float) -> ConcaveTransform:
        return cls("power", t=float(t))

    @classmethod
    def piecewise(cls, breakpoints, slopes, intercept: float = 0.0) -> ConcaveTransform:
        return cls("piecewise_linear", breakpoints=tuple(breakpoints), slopes=tuple(slopes),
                   intercept=float(intercept))

    @classmethod
    def identity(cls) -> ConcaveTransform:
        return cls.piecewise((), (1.0,))

    @property
    def is_affine(self) -> bool:
        return (self.kind == "piecewise_linear" and not self.breakpoints) or (
            self.kind == "power" and self.t == 1
        )

    def __call__(self, y):
        y = np.asarray(y, dtype=float)
        if np.any(y < 0):
            raise SaferError("transforms are defined on nonnegative payoffs only")
        if self.kind == "power":
            return y ** (1.0 / self.t)
        out = self.intercept + self.slopes[0] * y
        for bp, s0, s1 in zip(self.breakpoints, self.slopes, self.slopes[1:]):
            out = out + (s1 - s0) * np.maximum(y - bp, 0.0)
        return out

    def scalar(self, y: float) -> float:
        return float(self(y))

    def describe(self) -> str:
        if self.kind == "power":
            return f"power t={self.t!r}"
        fmt = lambda xs: ",".join(repr(x) for x in xs)  # noqa: E731
        return (f"pwl breaks={fmt(self.breakpoints)} slopes={fmt(self.slopes)} "
                f"intercept={self.intercept!r}")


_FIELD = re.compile(r"(\w+)=([^\s;]*)")


def parse_transform(text: str) -> ConcaveTransform:
    """Inverse of :meth:`ConcaveTransform.describe`; also takes CLI forms.

    Accepted: ``identity``, ``power:t=2``, ``power t=2``,
    ``pwl:breaks=4;slopes=1,0.01;intercept=0`` and the space-separated variant.
    """
    text = text.strip()
    if text == "identity":
        return ConcaveTransform.identity()
    m = re.match(r"(\w+)[:\s]?(.*)$", text)
    if m is None:
        raise SaferError(f"cannot parse transform {text!r}")
    head, fields = m.group(1), dict(_FIELD.findall(m.group(2)))
    try:
        if head == "power":
            return ConcaveTransform.power(float(fields["t"]))
        if head in ("pwl", "piecewise_linear"):
            vec = lambda key: tuple(float(v) for v in fields.get(key, "").split(",") if v)  # noqa: E731
            return ConcaveTransform.piecewise(
                vec("breaks"), vec("slopes"), float(fields.get("intercept", 0.0))
            )
    except (KeyError, ValueError) as exc:
        raise SaferError(f"cannot parse transform {text!r}: {exc}") from exc
    raise SaferError(f"cannot parse transform {text!r}")


def secant(phi: ConcaveTransform, lo: float, hi: float) -> float:
    """Average slope of ``phi`` between two distinct points."""
    if lo == hi:
        raise SaferError("secant needs distinct points")
    return (phi.scalar(hi) - phi.scalar(lo)) / (hi - lo)
