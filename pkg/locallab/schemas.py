# SPDX-FileCopyrightText: 2024-present locallab contributors
#
# SPDX-License-Identifier: AGPL-3.0-or-later
from __future__ import annotations

from pathlib import Path
from typing import Literal
from typing import Optional
from typing import Union

from pydantic import BaseModel
from pydantic import ConfigDict
from pydantic import Field
from pydantic import field_validator
from pydantic import model_validator

from locallab.utils import config

Algorithm = Literal[
    "rc-known-n",
    "rc-log",
    "rc-poly-n",
    "rc-knuth-io",
    "halfcol-known-n",
    "halfcol-id",
    "halfcol-rand-k2",
    "halfcol-rand-k3",
]

Family = Literal[
    "path",
    "caterpillar2",
    "lb-poly",
    "lb-uniform",
    "threelevel",
    "spine-comb",
    "random",
    "complete",
]

KnowledgeName = Literal["exact", "upper-bound", "promise", "none", "random"]

IdName = Literal["sequential", "random", "monotone"]


def _split(value: object) -> object:
    if isinstance(value, str):
        return [part for part in value.replace(",", " ").split() if part]
    return value


class ExperimentConfig(BaseModel):
    """One benchmark sweep: an algorithm over an n grid and a seed list."""

    model_config = ConfigDict(from_attributes=True, extra="forbid")

    algo: Algorithm
    family: Family
    k: int = Field(2, ge=1)
    c: float = Field(1.0, ge=1.0)
    ell: int = Field(config.DEFAULT_ELL, ge=1)
    n: list[int] = Field(default_factory=list)
    seeds: list[int] = Field(default_factory=list)
    knowledge: Optional[KnowledgeName] = None
    N: Union[Literal["n", "n^c"], int] = "n^c"
    ids: IdName = "sequential"
    output: Optional[Path] = None
    threads: Optional[int] = Field(None, ge=1)
    timing: bool = config.RECORD_WALL_TIME

    @field_validator("n", "seeds", mode="before")
    @classmethod
    def split_lists(cls, value: object) -> object:
        return _split(value)

    @field_validator("n")
    @classmethod
    def positive_sizes(cls, value: list[int]) -> list[int]:
        if any(x < 1 for x in value):
            raise ValueError("instance sizes must be positive")
        return value

    @model_validator(mode="after")
    def randomized_needs_no_ids(self) -> ExperimentConfig:
        if self.algo.startswith("halfcol-rand") and self.knowledge not in (None, "random"):
            raise ValueError(f"{self.algo} runs with random tapes and no knowledge")
        return self


class ResultRow(BaseModel):
    model_config = ConfigDict(from_attributes=True)

    run_id: str
    algo: str
    family: str
    n: int
    k: int
    c: float
    N: int
    seed: int
    rounds_max: int
    rounds_avg: float
    verified: bool
    wall_ms: float = 0.0


class FitResult(BaseModel):
    """Least-squares line through (ln x, ln y)."""

    model_config = ConfigDict(from_attributes=True)

    slope: float
    intercept: float
    r2: float
    points: int
    x: str = "n"
    y: str = "rounds_max"
