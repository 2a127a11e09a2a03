# SPDX-FileCopyrightText: 2024-present locallab contributors
#
# SPDX-License-Identifier: AGPL-3.0-or-later
"""Exceptions raised by locallab.

Every error carries the process exit code the command line reports for it:
2 for a violated precondition (bad input, broken promise, knowledge that does
not match the instance), 1 for an internal failure.
"""


class LocalLabError(Exception):
    exit_code = 1


class PreconditionError(LocalLabError):
    exit_code = 2


class NotATree(PreconditionError):
    pass


class DuplicateId(PreconditionError):
    pass


class DegreeExceeded(PreconditionError):
    pass


class MalformedLevel(LocalLabError):
    pass


class SizeOverflow(PreconditionError):
    pass


class RangeTooSmall(PreconditionError):
    pass


class KnowledgeViolation(PreconditionError):
    pass


class PromiseViolation(PreconditionError):
    pass


class NonTermination(LocalLabError):
    pass


class DomainError(PreconditionError):
    pass


class NoBracket(PreconditionError):
    pass


class BudgetExceeded(LocalLabError):
    pass


class UnsolvableWitness(LocalLabError):
    pass


class WrongLevel(PreconditionError):
    pass


class DomainTooSmall(PreconditionError):
    pass


class InsufficientData(PreconditionError):
    pass


class FormatError(PreconditionError):
    pass


class ConfigError(PreconditionError):
    pass
