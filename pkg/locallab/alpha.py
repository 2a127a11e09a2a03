# SPDX-FileCopyrightText: 2024-present locallab contributors
#
# SPDX-License-Identifier: AGPL-3.0-or-later
"""Phase exponents for decompositions under an (N, c) bound.

Phase i performs N^αᵢ rakes. The first exponent α₁ is the unique root of

    f(α₁) = (1 / (1 - cα₁))^(k - i₀) · i₀ · α₁ - 1,   i₀ = ⌊1 / (cα₁)⌋,

on (0, 1/c). The remaining exponents follow: αᵢ = α₁ up to i₀ and
αᵢ = cα₁ / (1 - cα₁) · Aᵢ₋₁ beyond, where Aᵢ is the prefix sum.
"""
from __future__ import annotations

import logging
import math
from collections.abc import Iterable
from dataclasses import dataclass

import pandas as pd
from scipy import optimize

from locallab.errors import DomainError
from locallab.errors import NoBracket
from locallab.report import Report
from locallab.utils import config

logger = logging.getLogger(__name__)

EDGE = 1e-9


@dataclass(frozen=True)
class AlphaSchedule:
    k: int
    c: float
    alpha: tuple[float, ...]
    prefix: tuple[float, ...]
    i0: int

    @property
    def alpha1(self) -> float:
        return self.alpha[0]

    @property
    def exponent(self) -> float:
        return self.c * self.alpha[0]

    def condition_exponent(self, j: int) -> float:
        """A_j / α_j, the exponent of the second decline condition at level j."""
        return self.prefix[j - 1] / self.alpha[j - 1]


def compute_i0(alpha1: float, c: float) -> int:
    """⌊1/(cα₁)⌋, snapped to a nearby integer within the configured guard."""
    y = 1.0 / (c * alpha1)
    nearest = round(y)
    if abs(y - nearest) <= config.I0_GUARD * max(1.0, y):
        return int(nearest)
    return math.floor(y)


def objective(alpha1: float, k: int, c: float) -> float:
    if not 0 < alpha1 < 1 / c:
        raise DomainError(f"alpha1={alpha1} outside (0, 1/c) for c={c}")
    x = c * alpha1
    i0 = compute_i0(alpha1, c)
    return (1.0 / (1.0 - x)) ** (k - i0) * i0 * alpha1 - 1.0


def solve_alpha1(k: int, c: float, tol: float = config.ALPHA_TOLERANCE) -> float:
    """Bisect the objective, which increases strictly on (0, 1/c)."""
    if k < 2 or c < 1 or tol <= 0:
        raise DomainError(f"need k >= 2, c >= 1 and tol > 0 (got k={k}, c={c}, tol={tol})")
    lo, hi = EDGE / c, (1 - EDGE) / c
    f_lo, f_hi = objective(lo, k, c), objective(hi, k, c)
    if f_lo * f_hi > 0:
        raise NoBracket(f"objective does not change sign on [{lo}, {hi}] for k={k}, c={c}")
    try:
        root = optimize.bisect(
            objective,
            lo,
            hi,
            args=(k, c),
            xtol=1e-15,
            maxiter=config.ALPHA_MAX_ITERATIONS,
        )
    except (ValueError, RuntimeError) as e:
        raise NoBracket(str(e)) from e
    residual = abs(objective(root, k, c))
    if residual > tol:
        logger.warning("alpha1 for k=%d c=%g has residual %.3g > %.3g", k, c, residual, tol)
    return float(root)


def derive_schedule(alpha1: float, k: int, c: float) -> AlphaSchedule:
    x = c * alpha1
    i0 = compute_i0(alpha1, c)
    alpha: list[float] = []
    prefix: list[float] = []
    total = 0.0
    for i in range(1, k):
        a = alpha1 if i <= i0 else x / (1 - x) * total
        alpha.append(a)
        total += a
        prefix.append(total)
    return AlphaSchedule(k, c, tuple(alpha), tuple(prefix), i0)


def solve_schedule(k: int, c: float, tol: float = config.ALPHA_TOLERANCE) -> AlphaSchedule:
    return derive_schedule(solve_alpha1(k, c, tol), k, c)


def verify_schedule(s: AlphaSchedule, tol: float = 1e-8) -> Report:
    """Check the closed-form identities a solved schedule satisfies.

    Prefix sums are recomputed from ``s.alpha``. The geometric step
    αᵢ = αᵢ₋₁/(1 - cα₁) only holds from i₀ + 2 on, because α_{i₀+1} is the
    first exponent of the growing regime.
    """
    report = Report("alpha-schedule")
    k, c = s.k, s.c
    alpha = list(s.alpha)
    if len(alpha) != k - 1:
        report.add("shape", [], f"{len(alpha)} exponents for k={k}")
        return report
    x = c * alpha[0]
    if not 0 < alpha[0] < 1 / c:
        report.add("range", [1], f"alpha1={alpha[0]} outside (0, 1/c)")
    prefix = []
    total = 0.0
    for a in alpha:
        total += a
        prefix.append(total)
    i0 = s.i0

    for i in range(1, k):
        if i <= i0 and abs(alpha[i - 1] - alpha[0]) > tol:
            report.add("uniform", [i], f"alpha_{i}={alpha[i - 1]:.12g} differs from alpha1")
        if i > i0:
            ratio = alpha[i - 1] / prefix[i - 1]
            if abs(ratio - x) > tol:
                report.add("ratio", [i], f"alpha_{i}/A_{i}={ratio:.12g}, expected c*alpha1={x:.12g}")
            if prefix[i - 1] < 1 / c - tol:
                report.add("prefix-floor", [i], f"A_{i}={prefix[i - 1]:.12g} < 1/c")
        if i >= i0 + 2:
            step = alpha[i - 2] / (1 - x)
            if abs(alpha[i - 1] - step) > tol:
                report.add("geometric", [i], f"alpha_{i}={alpha[i - 1]:.12g}, expected {step:.12g}")
    for i in range(max(i0, 1) + 1, k):
        if not alpha[i - 1] > alpha[i - 2]:
            report.add("increasing", [i - 1, i], f"alpha_{i - 1} >= alpha_{i}")
    if abs(prefix[-1] - (1 - x)) > tol:
        report.add("closure", [k - 1], f"A_{k - 1}={prefix[-1]:.12g}, expected 1-c*alpha1={1 - x:.12g}")
    if x > c / (c + 1) + tol:
        report.add("dominance", [1], f"exponent {x:.12g} exceeds c/(c+1)")
    return report


def alpha_table(ks: Iterable[int], cs: Iterable[float]) -> pd.DataFrame:
    """Solved α₁, exponent and i₀ over a (k, c) grid."""
    rows = []
    cs = list(cs)
    for k in ks:
        for c in cs:
            s = solve_schedule(k, c)
            rows.append({"k": k, "c": c, "alpha1": s.alpha1, "exponent": s.exponent, "i0": s.i0})
    return pd.DataFrame(rows, columns=["k", "c", "alpha1", "exponent", "i0"])
