# SPDX-FileCopyrightText: 2024-present locallab contributors
#
# SPDX-License-Identifier: AGPL-3.0-or-later
from __future__ import annotations

from collections.abc import Callable
from dataclasses import dataclass

from locallab.sim import KnowledgeModel
from locallab.sim import NodeProgram
from locallab.sim import RandomTape
from locallab.sim import run_sync
from locallab.sim import SimTrace
from locallab.tree import compute_levels
from locallab.tree import LevelAssignment
from locallab.tree import Tree


@dataclass(frozen=True)
class HalfColResult:
    output: tuple[str, ...]
    trace: SimTrace
    levels: LevelAssignment


def run_halfcol(
    tree: Tree,
    k: int,
    program: NodeProgram,
    knowledge: KnowledgeModel,
    seed: int = 0,
    tapes: Callable[[int], RandomTape] | None = None,
) -> HalfColResult:
    levels = compute_levels(tree, k)
    trace = run_sync(tree, program, knowledge, seed, levels=levels, tapes=tapes)
    return HalfColResult(tuple(str(x) for x in trace.outputs), trace, levels)
