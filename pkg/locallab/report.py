# SPDX-FileCopyrightText: 2024-present locallab contributors
#
# SPDX-License-Identifier: AGPL-3.0-or-later
from dataclasses import dataclass
from dataclasses import field


@dataclass(frozen=True)
class Violation:
    rule: str
    nodes: tuple[int, ...]
    message: str

    def line(self) -> str:
        witness = " ".join(str(u) for u in self.nodes)
        return f"violation {self.rule} [{witness}] {self.message}"


@dataclass
class Report:
    """Outcome of a verifier: clean iff no violation was recorded."""

    problem: str
    violations: list[Violation] = field(default_factory=list)

    @property
    def ok(self) -> bool:
        return not self.violations

    @property
    def rules(self) -> set[str]:
        return {v.rule for v in self.violations}

    def add(self, rule: str, nodes, message: str) -> None:
        self.violations.append(Violation(rule, tuple(nodes), message))

    def lines(self) -> list[str]:
        if self.ok:
            return [f"ok {self.problem}"]
        return [v.line() for v in self.violations]
