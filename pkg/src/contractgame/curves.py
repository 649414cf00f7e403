"""One-dimensional curve families with analytic first and second derivatives.

These curves carry all scalar functions of the model: the agent's wage
utility u, the agent's effort cost v, the principal's utility B, and the
per-outcome probability components of an effort profile.  Every family
evaluates on scalars and on numpy arrays; derivatives come from the family
formula, never from numerical differencing.
"""

from __future__ import annotations

import math
from bisect import bisect_right
from dataclasses import dataclass, field

import numpy as np

from .errors import DomainError

__all__ = [
    "Curve",
    "Polynomial",
    "ExpAffine",
    "LogAffine",
    "Power",
    "Tabulated",
]


def _exp(t):
    return np.exp(t) if isinstance(t, np.ndarray) else math.exp(t)


def _log(t):
    return np.log(t) if isinstance(t, np.ndarray) else math.log(t)


class Curve:
    """Base class; subclasses implement eval/d1/d2 and a ``family`` tag."""

    family: str = "abstract"

    def eval(self, t):
        raise NotImplementedError

    def d1(self, t):
        raise NotImplementedError

    def d2(self, t):
        raise NotImplementedError

    def __call__(self, t):
        return self.eval(t)


@dataclass(frozen=True)
class Polynomial(Curve):
    """c0 + c1*t + ... + ck*t^k, evaluated by Horner's rule."""

    coefficients: tuple[float, ...]
    _d1: tuple[float, ...] = field(init=False, repr=False, compare=False)
    _d2: tuple[float, ...] = field(init=False, repr=False, compare=False)
    family = "polynomial"

    def __post_init__(self):
        if len(self.coefficients) == 0:
            raise ValueError("polynomial needs at least one coefficient")
        coeffs = tuple(float(c) for c in self.coefficients)
        object.__setattr__(self, "coefficients", coeffs)
        d1 = tuple(j * c for j, c in enumerate(coeffs))[1:] or (0.0,)
        d2 = tuple(j * (j - 1) * c for j, c in enumerate(coeffs))[2:] or (0.0,)
        object.__setattr__(self, "_d1", d1)
        object.__setattr__(self, "_d2", d2)

    def _horner(self, coeffs, t):
        if isinstance(t, np.ndarray):
            acc = np.zeros_like(t, dtype=float)
        else:
            acc = 0.0
        for c in reversed(coeffs):
            acc = acc * t + c
        return acc

    def eval(self, t):
        return self._horner(self.coefficients, t)

    def d1(self, t):
        return self._horner(self._d1, t)

    def d2(self, t):
        return self._horner(self._d2, t)

    def degree(self) -> int:
        """Effective degree: index of the last nonzero coefficient."""
        for j in range(len(self.coefficients) - 1, -1, -1):
            if self.coefficients[j] != 0.0:
                return j
        return 0


@dataclass(frozen=True)
class ExpAffine(Curve):
    """a + b * exp(c * t); defined on all reals."""

    a: float
    b: float
    c: float
    family = "exp-affine"

    def eval(self, t):
        return self.a + self.b * _exp(self.c * t)

    def d1(self, t):
        return self.b * self.c * _exp(self.c * t)

    def d2(self, t):
        return self.b * self.c * self.c * _exp(self.c * t)


@dataclass(frozen=True)
class LogAffine(Curve):
    """a + b * ln(t + c); requires t + c > 0."""

    a: float
    b: float
    c: float
    family = "log-affine"

    def _shifted(self, t):
        z = t + self.c
        if isinstance(z, np.ndarray):
            if np.any(z <= 0.0):
                raise DomainError(
                    f"log-affine curve needs t + {self.c} > 0; "
                    f"min shifted value {z.min()}"
                )
        elif z <= 0.0:
            raise DomainError(
                f"log-affine curve needs t + {self.c} > 0; got t={t}"
            )
        return z

    def eval(self, t):
        return self.a + self.b * _log(self._shifted(t))

    def d1(self, t):
        return self.b / self._shifted(t)

    def d2(self, t):
        z = self._shifted(t)
        return -self.b / (z * z)


@dataclass(frozen=True)
class Power(Curve):
    """a * (t + c)**gamma; requires t + c >= 0.

    Derivatives at t + c == 0 exist only when the differentiated exponent
    stays nonnegative; otherwise the point is rejected as outside the
    derivative's domain.
    """

    a: float
    gamma: float
    c: float
    family = "power"

    def _shifted(self, t, min_exponent):
        z = t + self.c
        if isinstance(z, np.ndarray):
            if np.any(z < 0.0):
                raise DomainError(
                    f"power curve needs t + {self.c} >= 0; min {z.min()}"
                )
            if min_exponent < 0.0 and np.any(z == 0.0):
                raise DomainError(
                    f"power curve with exponent {min_exponent} is singular "
                    f"at t + {self.c} == 0"
                )
        else:
            if z < 0.0:
                raise DomainError(
                    f"power curve needs t + {self.c} >= 0; got t={t}"
                )
            if min_exponent < 0.0 and z == 0.0:
                raise DomainError(
                    f"power curve with exponent {min_exponent} is singular "
                    f"at t + {self.c} == 0"
                )
        return z

    def eval(self, t):
        z = self._shifted(t, self.gamma)
        return self.a * z**self.gamma

    def d1(self, t):
        if self.gamma == 0.0:
            return np.zeros_like(t, dtype=float) if isinstance(t, np.ndarray) else 0.0
        z = self._shifted(t, self.gamma - 1.0)
        return self.a * self.gamma * z ** (self.gamma - 1.0)

    def d2(self, t):
        if self.gamma == 0.0 or self.gamma == 1.0:
            return np.zeros_like(t, dtype=float) if isinstance(t, np.ndarray) else 0.0
        z = self._shifted(t, self.gamma - 2.0)
        return self.a * self.gamma * (self.gamma - 1.0) * z ** (self.gamma - 2.0)


@dataclass(frozen=True)
class Tabulated(Curve):
    """Monotone cubic Hermite interpolant through (knot, value) pairs.

    Slopes follow the Fritsch-Carlson construction (weighted harmonic mean
    at interior knots, shape-limited three-point rule at the ends), so the
    interpolant is C1 and overshoot-free on monotone data.  The second
    derivative is piecewise linear and may jump at knots.  Evaluation
    outside the knot range is an error; there is no extrapolation.
    """

    knots: tuple[float, ...]
    values: tuple[float, ...]
    slopes: tuple[float, ...] = field(init=False, repr=False, compare=False)
    family = "tabulated"

    def __post_init__(self):
        knots = tuple(float(k) for k in self.knots)
        values = tuple(float(v) for v in self.values)
        if len(knots) < 3:
            raise ValueError("tabulated curve needs at least 3 knots")
        if len(knots) != len(values):
            raise ValueError("knots and values must have equal length")
        if any(b <= a for a, b in zip(knots, knots[1:])):
            raise ValueError("knot abscissae must be strictly increasing")
        object.__setattr__(self, "knots", knots)
        object.__setattr__(self, "values", values)
        object.__setattr__(self, "slopes", self._fritsch_carlson(knots, values))

    @staticmethod
    def _fritsch_carlson(x, y):
        n = len(x)
        h = [x[k + 1] - x[k] for k in range(n - 1)]
        d = [(y[k + 1] - y[k]) / h[k] for k in range(n - 1)]
        m = [0.0] * n
        for k in range(1, n - 1):
            if d[k - 1] * d[k] <= 0.0:
                m[k] = 0.0
            else:
                w1 = 2.0 * h[k] + h[k - 1]
                w2 = h[k] + 2.0 * h[k - 1]
                m[k] = (w1 + w2) / (w1 / d[k - 1] + w2 / d[k])

        def edge(h0, h1, d0, d1):
            slope = ((2.0 * h0 + h1) * d0 - h0 * d1) / (h0 + h1)
            if slope * d0 <= 0.0:
                return 0.0
            if d0 * d1 < 0.0 and abs(slope) > 3.0 * abs(d0):
                return 3.0 * d0
            return slope

        m[0] = edge(h[0], h[1], d[0], d[1])
        m[-1] = edge(h[-1], h[-2], d[-1], d[-2])
        return tuple(m)

    def _check_range(self, t):
        lo, hi = self.knots[0], self.knots[-1]
        if isinstance(t, np.ndarray):
            if np.any(t < lo) or np.any(t > hi):
                raise DomainError(
                    f"tabulated curve defined on [{lo}, {hi}]; "
                    "no extrapolation"
                )
        elif t < lo or t > hi:
            raise DomainError(
                f"tabulated curve defined on [{lo}, {hi}]; got t={t}"
            )

    def _cells(self, t):
        if isinstance(t, np.ndarray):
            idx = np.searchsorted(self.knots, t, side="right") - 1
            return np.clip(idx, 0, len(self.knots) - 2)
        idx = bisect_right(self.knots, t) - 1
        return min(max(idx, 0), len(self.knots) - 2)

    def _pieces(self, t):
        self._check_range(t)
        k = self._cells(t)
        if isinstance(t, np.ndarray):
            x = np.asarray(self.knots)
            y = np.asarray(self.values)
            m = np.asarray(self.slopes)
            h = x[k + 1] - x[k]
            s = (t - x[k]) / h
            return y[k], y[k + 1], m[k], m[k + 1], h, s
        h = self.knots[k + 1] - self.knots[k]
        s = (t - self.knots[k]) / h
        return (
            self.values[k],
            self.values[k + 1],
            self.slopes[k],
            self.slopes[k + 1],
            h,
            s,
        )

    def eval(self, t):
        y0, y1, m0, m1, h, s = self._pieces(t)
        s2 = s * s
        s3 = s2 * s
        return (
            y0 * (2.0 * s3 - 3.0 * s2 + 1.0)
            + h * m0 * (s3 - 2.0 * s2 + s)
            + y1 * (-2.0 * s3 + 3.0 * s2)
            + h * m1 * (s3 - s2)
        )

    def d1(self, t):
        y0, y1, m0, m1, h, s = self._pieces(t)
        s2 = s * s
        return (
            y0 * (6.0 * s2 - 6.0 * s)
            + h * m0 * (3.0 * s2 - 4.0 * s + 1.0)
            + y1 * (-6.0 * s2 + 6.0 * s)
            + h * m1 * (3.0 * s2 - 2.0 * s)
        ) / h

    def d2(self, t):
        y0, y1, m0, m1, h, s = self._pieces(t)
        return (
            y0 * (12.0 * s - 6.0)
            + h * m0 * (6.0 * s - 4.0)
            + y1 * (-12.0 * s + 6.0)
            + h * m1 * (6.0 * s - 2.0)
        ) / (h * h)
