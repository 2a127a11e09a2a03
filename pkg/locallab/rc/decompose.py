# SPDX-FileCopyrightText: 2024-present locallab contributors
#
# SPDX-License-Identifier: AGPL-3.0-or-later
"""Rake-and-compress decompositions under four knowledge regimes.

Every decomposition is a sequence of phases, each a run of rakes followed by
one compress, and a final run of rakes. Only the per-phase rake budget
differs. Rounds are charged to a :class:`~locallab.sim.RoundMeter`: a rake
costs ``RAKE_ROUNDS``, a compress ``COMPRESS_ROUNDS``, and the distance
coloring its reduction steps once, at the first compress that needs it.
"""
from __future__ import annotations

import logging
import math
from collections.abc import Sequence
from dataclasses import dataclass

from locallab.alpha import AlphaSchedule
from locallab.alpha import solve_schedule
from locallab.errors import BudgetExceeded
from locallab.errors import KnowledgeViolation
from locallab.errors import NonTermination
from locallab.rc.primitives import compress
from locallab.rc.primitives import Layer
from locallab.rc.primitives import rake
from locallab.rc.primitives import Residual
from locallab.sim import ExactN
from locallab.sim import KnowledgeModel
from locallab.sim import power_floor
from locallab.sim import RoundMeter
from locallab.sim import run_metered
from locallab.sim import SimTrace
from locallab.sim import UpperBound
from locallab.tree import Tree
from locallab.utils import config

logger = logging.getLogger(__name__)


@dataclass(frozen=True)
class DecompLabeling:
    layers: tuple[Layer, ...]
    gamma: int
    ell: int
    L: int

    def __getitem__(self, u: int) -> Layer:
        return self.layers[u]

    def __len__(self) -> int:
        return len(self.layers)


@dataclass(frozen=True)
class DecompResult:
    labeling: DecompLabeling
    trace: SimTrace
    residual_sizes: tuple[int, ...]
    coloring_rounds: int = 0


class Peeling:
    """A residual together with the meter its operations are charged to."""

    def __init__(self, tree: Tree, ell: int, meter: RoundMeter) -> None:
        self.residual = Residual(tree)
        self.ell = ell
        self.meter = meter
        self.coloring_rounds = 0
        self._colored = False
        self.max_sub = 0

    @property
    def empty(self) -> bool:
        return self.residual.empty

    @property
    def alive(self) -> int:
        return self.residual.count

    def rake(self, layer: int, sub: int) -> int:
        self.meter.charge(config.RAKE_ROUNDS)
        removed = rake(self.residual, layer, sub)
        if not removed:
            raise NonTermination(f"rake in layer {layer} removed nothing from {self.alive} nodes")
        self.meter.fix(removed, self.residual.layers[removed[0]])
        self.max_sub = max(self.max_sub, sub)
        return len(removed)

    def rakes(self, layer: int, budget: int | None) -> int:
        """Up to ``budget`` rakes (None: until empty); returns the number performed.

        Sublayer 1 of every layer after the first belongs to the ruling nodes
        of the previous compress.
        """
        offset = 0 if layer == 1 else 1
        done = 0
        while not self.empty and (budget is None or done < budget):
            done += 1
            self.rake(layer, done + offset)
        return done

    def compress(self, j: int) -> None:
        step_paths = compress(self.residual, self.ell, j)
        if step_paths.coloring is not None and not self._colored:
            self.coloring_rounds = step_paths.coloring.iterations
            self.meter.charge(self.coloring_rounds)
            self._colored = True
        self.meter.charge(config.COMPRESS_ROUNDS)
        if step_paths.ruling:
            self.meter.fix(step_paths.ruling, Layer.rake(j + 1, 1))
            self.max_sub = max(self.max_sub, 1)
        if step_paths.compressed:
            self.meter.fix(step_paths.compressed, Layer.compress(j))


def _phased(
    tree: Tree,
    knowledge: KnowledgeModel,
    ell: int,
    budgets: Sequence[int],
    final_budget: int | None,
    name: str,
) -> tuple[DecompResult, int]:
    """Run len(budgets) phases of (rakes, compress) and a final run of rakes."""
    sizes: list[int] = []
    stats = {"final": 0, "coloring": 0, "L": 0, "sub": 0}

    def procedure(tree: Tree, meter: RoundMeter) -> None:
        peel = Peeling(tree, ell, meter)
        layer = 0
        for budget in budgets:
            if peel.empty:
                break
            layer += 1
            peel.rakes(layer, budget)
            if not peel.empty:
                peel.compress(layer)
            sizes.append(peel.alive)
            logger.debug("%s phase %d: %d rakes budgeted, %d alive", name, layer, budget, peel.alive)
        if not peel.empty:
            layer += 1
            stats["final"] = peel.rakes(layer, final_budget)
            if not peel.empty:
                raise BudgetExceeded(f"{name}: {peel.alive} nodes left after {final_budget} final rakes")
            sizes.append(0)
        stats["coloring"] = peel.coloring_rounds
        stats["sub"] = peel.max_sub
        stats["L"] = max((lay.index for lay in peel.residual.layers if lay is not None and lay.is_rake), default=1)

    trace = run_metered(tree, procedure, knowledge)
    layers = tuple(lay for lay in (_layer_of(label) for label in trace.outputs))
    labeling = DecompLabeling(layers, stats["sub"], ell, stats["L"])
    result = DecompResult(labeling, trace, tuple(sizes), stats["coloring"])
    return result, stats["final"]


def _layer_of(label: object) -> Layer:
    assert isinstance(label, Layer)
    return label


def _with_gamma(result: DecompResult, gamma: int) -> DecompResult:
    """Declare γ, raised to the deepest sublayer used.

    Ruling nodes of a compress open the next layer as sublayer 1, so a later
    phase that spends its whole budget ends at sublayer budget + 1.
    """
    lab = result.labeling
    gamma = max(gamma, lab.gamma)
    return DecompResult(
        DecompLabeling(lab.layers, gamma, lab.ell, lab.L),
        result.trace,
        result.residual_sizes,
        result.coloring_rounds,
    )


def known_n_gamma(n: int, k: int, ell: int) -> int:
    return math.ceil(n ** (1 / k) * (ell / 2) ** (1 - 1 / k))


def decompose_known_n(
    tree: Tree,
    k: int,
    ell: int | None = None,
    knowledge: KnowledgeModel | None = None,
) -> DecompResult:
    """(γ, ℓ, k)-decomposition with γ = ⌈n^{1/k}(ℓ/2)^{1-1/k}⌉ when n is known."""
    ell = ell or config.DEFAULT_ELL
    n = tree.node_count
    knowledge = knowledge or KnowledgeModel.exact(n)
    if not isinstance(knowledge.variant, ExactN):
        raise KnowledgeViolation(f"known-n decomposition needs exact n, got {knowledge.label}")
    knowledge.check(tree)
    gamma = known_n_gamma(n, k, ell)
    result, _ = _phased(tree, knowledge, ell, [gamma] * (k - 1), gamma, "known-n")
    return _with_gamma(result, gamma)


def decompose_log(tree: Tree, gamma: int = 2, ell: int | None = None) -> DecompResult:
    """Constant-budget phases until the tree is gone; L is the number of rake layers used."""
    ell = ell or config.DEFAULT_ELL
    if gamma < 1:
        raise ValueError("gamma must be at least 1")
    phases = tree.node_count + 1
    result, final = _phased(tree, KnowledgeModel.nothing(), ell, [gamma] * phases, gamma, "log")
    return _with_gamma(result, max(gamma, final))


def _upper_bound(tree: Tree, knowledge: KnowledgeModel) -> UpperBound:
    if not isinstance(knowledge.variant, UpperBound):
        raise KnowledgeViolation(f"needs an (N, c) upper bound, got {knowledge.label}")
    knowledge.check(tree)
    return knowledge.variant


def phase_budgets(N: int, schedule: AlphaSchedule) -> list[int]:
    return [math.ceil(N**a) for a in schedule.alpha]


def decompose_poly_n(
    tree: Tree,
    k: int,
    knowledge: KnowledgeModel,
    schedule: AlphaSchedule | None = None,
    ell: int | None = None,
) -> DecompResult:
    """Phase i < k performs ⌈N^{αᵢ}⌉ rakes and one compress; phase k rakes until empty."""
    ell = ell or config.DEFAULT_ELL
    bound = _upper_bound(tree, knowledge)
    if k == 1:
        budgets: list[int] = []
    else:
        schedule = schedule or solve_schedule(k, bound.c)
        if schedule.k != k:
            raise ValueError(f"schedule is for k={schedule.k}, not {k}")
        budgets = phase_budgets(bound.N, schedule)
    result, final = _phased(tree, knowledge, ell, budgets, None, "poly-n")
    return _with_gamma(result, max(budgets + [final]))


def knuth_sequence(c: float, upto: int) -> list[int]:
    """s₁ = 2, sᵢ = sᵢ₋₁^{2c}, up to the first member exceeding ``upto``."""
    seq = [2]
    while seq[-1] <= upto:
        seq.append(power_floor(seq[-1], 2 * c))
    return seq


def integer_root(N: int, c: float) -> int:
    """⌊N^{1/c}⌋, exact when c is integral."""
    if not float(c).is_integer():
        return math.floor(N ** (1 / c))
    e = int(c)
    r = int(round(N ** (1 / e)))
    while r**e > N:
        r -= 1
    while (r + 1) ** e <= N:
        r += 1
    return r


def knuth_target(N: int, c: float) -> int:
    """The member of the sequence in [⌊N^{1/c}⌋, N] if there is one, else N."""
    low = integer_root(N, c)
    hits = [s for s in knuth_sequence(c, N) if low <= s <= N]
    return hits[0] if hits else N


def decompose_knuth_io(
    tree: Tree,
    k: int,
    knowledge: KnowledgeModel,
    ell: int | None = None,
) -> DecompResult:
    """Phases of ⌈X^{1/k}⌉ rakes, X the sequence member pinned down by N.

    On instances whose size is a sequence member X equals n and the run is as
    fast as with n known.
    """
    ell = ell or config.DEFAULT_ELL
    bound = _upper_bound(tree, knowledge)
    x = knuth_target(bound.N, bound.c)
    budget = math.ceil(x ** (1 / k))
    logger.debug("knuth-io: N=%d c=%g -> X=%d, %d rakes per phase", bound.N, bound.c, x, budget)
    result, final = _phased(tree, knowledge, ell, [budget] * (k - 1), None, "knuth-io")
    return _with_gamma(result, max(budget, final))
