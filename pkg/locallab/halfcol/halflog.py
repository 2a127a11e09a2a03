# SPDX-FileCopyrightText: 2024-present locallab contributors
#
# SPDX-License-Identifier: AGPL-3.0-or-later
"""A half-logarithm built from a fundamental interval.

Pick t₀ < t₁ < a^{t₀} and let h map [t₀, t₁) linearly onto [t₁, a^{t₀}).
The seams s₀ = t₀, s₁ = t₁, s₂ = a^{t₀}, s_{m+2} = a^{s_m} cut [t₀, ∞) into
intervals J_m = [s_m, s_{m+1}) and h carries J_m onto J_{m+1}. Beyond the
first interval h(x) = a^{h⁻¹(x)}, which makes h(h(x)) = a^x, and the inverse
f = h⁻¹ satisfies f(f(x)) = log_a x for every x ≥ a^{t₀}.

Both directions are evaluated by recursion down to the linear piece, so the
only error is floating point.
"""
from __future__ import annotations

import bisect
import logging
import math
from dataclasses import dataclass

import numpy as np
import pandas as pd

from locallab.errors import DomainError
from locallab.errors import DomainTooSmall
from locallab.utils import config

logger = logging.getLogger(__name__)

MAX_SEAMS = 64


@dataclass(frozen=True)
class HalfLog:
    base: float
    t0: float
    t1: float
    seams: tuple[float, ...]
    tolerance: float

    @property
    def upper(self) -> float:
        return self.seams[-1]

    def _interval(self, x: float) -> int:
        if not self.t0 <= x < self.seams[-1]:
            raise DomainError(f"{x} outside [{self.t0}, {self.seams[-1]})")
        return bisect.bisect_right(self.seams, x) - 1

    def _log(self, x: float) -> float:
        return math.log(x) / math.log(self.base)

    def h(self, x: float) -> float:
        """Half-exponential: h(h(x)) = a^x."""
        m = self._interval(x)
        if m == 0:
            return self.t1 + (x - self.t0) * (self.seams[2] - self.t1) / (self.t1 - self.t0)
        return self.base ** self.f(x)

    def f(self, y: float) -> float:
        """Half-logarithm: f(f(y)) = log_a y once y >= a^{t0}."""
        if y < self.t1:
            raise DomainError(f"{y} lies below the range of h (starts at {self.t1})")
        m = self._interval(y)
        if m == 1:
            return self.t0 + (y - self.t1) * (self.t1 - self.t0) / (self.seams[2] - self.t1)
        return self.h(max(self._log(y), self.seams[m - 2]))

    g = f

    def threshold(self, x: float) -> float:
        """Friendliness threshold g(x)/3."""
        return self.g(x) / 3

    def residual(self, x: float) -> float:
        return abs(self.f(self.f(x)) - self._log(x))

    def table(self, points: int = 1000, x_max: float | None = None) -> pd.DataFrame:
        """x, f(x) and h(x) on a geometric grid over [a, x_max]."""
        top = min(x_max or config.HALFLOG_X_MAX, self.upper * (1 - 1e-12))
        grid = np.geomspace(self.base, top, points)
        return pd.DataFrame(
            {
                "x": grid,
                "f(x)": [self.f(x) for x in grid],
                "h(x)": [self.h(x) for x in grid],
            }
        )


def build_halflog(
    a: float = config.HALFLOG_BASE,
    x_max: float = config.HALFLOG_X_MAX,
    tol: float = config.HALFLOG_TOLERANCE,
    t0: float = config.HALFLOG_T0,
    t1: float = config.HALFLOG_T1,
) -> HalfLog:
    if a <= 1:
        raise DomainError(f"base {a} must exceed 1")
    if not t0 < t1 < a**t0:
        raise DomainError(f"need t0 < t1 < a^t0 (t0={t0}, t1={t1}, a^t0={a ** t0:.6g})")
    seams = [t0, t1, a**t0]
    while seams[-1] <= x_max:
        if len(seams) >= MAX_SEAMS:
            raise DomainTooSmall(f"seams stall at {seams[-1]:.6g} below {x_max:.6g}")
        try:
            nxt = a ** seams[-2]
        except OverflowError as e:
            raise DomainTooSmall(f"seams overflow before reaching {x_max:.6g}") from e
        if nxt <= seams[-1] or math.isinf(nxt):
            raise DomainTooSmall(f"seams stall at {seams[-1]:.6g} below {x_max:.6g}")
        seams.append(nxt)
    halflog = HalfLog(a, t0, t1, tuple(seams), tol)
    logger.debug("half-log with base %g covers [%g, %g) in %d intervals", a, t0, seams[-1], len(seams) - 1)
    return halflog
