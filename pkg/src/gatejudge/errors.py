"""Exception hierarchy for the judging engine.

Input problems (bad bundles, bad rollouts, protocol violations) derive from
:class:`InputError`; infrastructure faults derive from
:class:`EnvironmentFailure`.  The CLI maps the two families to exit codes 1
and 2 respectively.
"""

from __future__ import annotations


class JudgeError(Exception):
    """Base class for every engine error."""


class InputError(JudgeError):
    pass


class EnvironmentFailure(JudgeError):
    pass


# bundle -----------------------------------------------------------------


class MissingManifest(InputError):
    def __init__(self, path):
        super().__init__(f"no manifest found in {path}")
        self.path = path


class DuplicateId(InputError):
    def __init__(self, problem_id: str):
        super().__init__(f"duplicate problem id {problem_id!r}")
        self.problem_id = problem_id


class SchemaViolation(InputError):
    def __init__(self, problem_id: str, field: str, detail: str = ""):
        msg = f"problem {problem_id!r}: invalid field {field!r}"
        if detail:
            msg += f" ({detail})"
        super().__init__(msg)
        self.problem_id = problem_id
        self.field = field


class UnknownComplexityLabel(InputError):
    def __init__(self, problem_id: str, label: str):
        super().__init__(f"problem {problem_id!r}: unknown complexity label {label!r}")
        self.problem_id = problem_id
        self.label = label


class UnknownProblemId(InputError):
    def __init__(self, problem_id: str):
        super().__init__(f"rollout references unknown problem id {problem_id!r}")
        self.problem_id = problem_id


# record store -------------------------------------------------------------


class StoreClosed(JudgeError):
    pass


class SerializationFailure(JudgeError):
    pass


# sandbox ----------------------------------------------------------------


class UnknownLanguage(InputError):
    def __init__(self, language_tag: str):
        super().__init__(f"no runner registered for language {language_tag!r}")
        self.language_tag = language_tag


class CompilerTimeout(EnvironmentFailure):
    pass


class SpawnFailure(EnvironmentFailure):
    pass


SandboxEnvironmentFailure = EnvironmentFailure


# complexity ---------------------------------------------------------------


class GeneratorFailure(InputError):
    def __init__(self, size: int, detail: str = ""):
        super().__init__(f"input generator failed at size {size}: {detail}".rstrip(": "))
        self.size = size


class InsufficientPoints(JudgeError):
    pass


class ExternalJudgeProtocolError(InputError):
    pass


# reward / grouprl / pairwise ------------------------------------------------


class MissingVerdict(JudgeError):
    pass


class GroupTooSmall(InputError):
    pass


class EmptyDomainList(InputError):
    pass


class EmptyAfterTieFiltering(InputError):
    pass


class DivergenceDetected(JudgeError):
    pass
