# SPDX-FileCopyrightText: 2024-present locallab contributors
#
# SPDX-License-Identifier: AGPL-3.0-or-later
import math
import time

import pytest

from locallab.alpha import alpha_table
from locallab.alpha import AlphaSchedule
from locallab.alpha import compute_i0
from locallab.alpha import derive_schedule
from locallab.alpha import objective
from locallab.alpha import solve_alpha1
from locallab.alpha import solve_schedule
from locallab.alpha import verify_schedule
from locallab.errors import DomainError


def test_three_levels_cubic_bound():
    started = time.perf_counter()
    alpha1 = solve_alpha1(3, 3)
    assert time.perf_counter() - started < 1.0
    assert 3 * alpha1 == pytest.approx((7 - math.sqrt(13)) / 6, abs=1e-9)


@pytest.mark.parametrize("c", [1, 2, 3, 5])
def test_two_levels(c):
    alpha1 = solve_alpha1(2, c)
    assert alpha1 == pytest.approx(1 / (1 + c), abs=1e-10)
    assert objective(1 / (1 + c), 2, c) == pytest.approx(0, abs=1e-12)


@pytest.mark.parametrize("k", [2, 3, 4, 5, 6])
def test_polynomial_bound_with_c_one(k):
    assert solve_alpha1(k, 1) == pytest.approx(1 / k, abs=1e-10)


def test_objective_at_closed_form_root():
    assert objective(1 / 3, 2, 2) == pytest.approx(0, abs=1e-12)


def test_three_levels_schedule():
    s = solve_schedule(3, 3)
    assert s.i0 == 1
    x = (7 - math.sqrt(13)) / 6
    assert s.alpha1 == pytest.approx(x / 3, abs=1e-10)
    assert s.alpha[1] == pytest.approx(x / (1 - x) * s.alpha1, abs=1e-10)
    assert s.alpha[1] == pytest.approx(0.245678, abs=1e-6)
    assert s.prefix[1] == pytest.approx(1 - x, abs=1e-10)
    assert s.prefix[-1] == pytest.approx(1 - s.exponent, abs=1e-8)
    assert s.condition_exponent(2) == pytest.approx(s.prefix[1] / s.alpha[1])


@pytest.mark.parametrize("k", range(2, 7))
@pytest.mark.parametrize("c", range(1, 6))
def test_schedule_identities(k, c):
    s = solve_schedule(k, c)
    report = verify_schedule(s)
    assert report.ok, report.lines()
    assert s.prefix[-1] == pytest.approx(1 - c * s.alpha1, abs=1e-8)
    assert s.exponent <= c / (c + 1) + 1e-12


def test_verifier_flags_tampered_schedule():
    s = solve_schedule(4, 2)
    alpha = list(s.alpha)
    alpha[-1] *= 1.01
    broken = AlphaSchedule(s.k, s.c, tuple(alpha), s.prefix, s.i0)
    report = verify_schedule(broken)
    assert not report.ok
    assert "closure" in report.rules


@pytest.mark.parametrize("k, c", [(1, 2), (3, 0.5)])
def test_domain(k, c):
    with pytest.raises(DomainError):
        solve_alpha1(k, c)


def test_objective_outside_interval():
    with pytest.raises(DomainError):
        objective(0.5, 3, 2)


def test_i0_snaps_to_integers():
    assert compute_i0(1 / 3, 1) == 3
    assert compute_i0(0.3, 1) == 3
    assert compute_i0(0.26, 2) == 1


def test_derive_uniform_prefix():
    s = derive_schedule(0.25, 4, 1)
    assert s.alpha == (0.25, 0.25, 0.25)
    assert s.prefix == (0.25, 0.5, 0.75)


def test_table():
    frame = alpha_table([2, 3], [1.0, 3.0])
    assert list(frame.columns) == ["k", "c", "alpha1", "exponent", "i0"]
    assert len(frame) == 4
    row = frame[(frame.k == 3) & (frame.c == 3.0)].iloc[0]
    assert row.exponent == pytest.approx((7 - math.sqrt(13)) / 6, abs=1e-9)


def test_objective_continuous_at_breakpoint():
    for eps in (1e-6, 1e-9, 1e-12):
        left = objective(1 / 6 - eps, 3, 3)
        right = objective(1 / 6 + eps, 3, 3)
        assert left == pytest.approx(right, abs=25 * eps)


@pytest.mark.parametrize("k", [2, 4, 6])
@pytest.mark.parametrize("c", [1, 3, 5])
def test_objective_limit_at_zero(k, c):
    assert objective(1e-6, k, c) == pytest.approx(1 / (c * math.e) - 1, rel=0.1)


@pytest.mark.parametrize("k", [2, 3, 4, 5, 6])
@pytest.mark.parametrize("c", [1, 2, 3, 4, 5])
def test_single_sign_change(k, c):
    grid = [(i + 0.5) / (10**4 * c) for i in range(10**4)]
    values = [objective(a, k, c) for a in grid]
    changes = sum((a < 0) != (b < 0) for a, b in zip(values, values[1:]))
    assert changes == 1


def test_perturbed_second_exponent_is_flagged():
    s = solve_schedule(3, 3)
    broken = AlphaSchedule(3, 3, (s.alpha[0], s.alpha[1] + 1e-3), s.prefix, s.i0)
    assert "ratio" in verify_schedule(broken).rules


def test_two_level_schedule():
    s = solve_schedule(2, 2)
    assert s.alpha == pytest.approx((1 / 3,))
    assert s.i0 == 1
    assert s.exponent == pytest.approx(2 / 3)
    assert verify_schedule(s).ok
