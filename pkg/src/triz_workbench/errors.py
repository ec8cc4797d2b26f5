"""Exception hierarchy shared across the workbench.

Everything raised on purpose derives from WorkbenchError so callers can
catch one type at the CLI/API boundary and map it to an exit code or an
HTTP status without fishing for stray ValueErrors.
"""

from __future__ import annotations


class WorkbenchError(Exception):
    """Base class for all domain errors raised by this package."""


class KnowledgeError(WorkbenchError):
    """Invalid access into the TRIZ knowledge base (bad number, bad name)."""


class AmbiguousNameError(KnowledgeError):
    """A fuzzy name lookup matched two or more parameters equally well."""

    def __init__(self, query: str, candidates: list[int]):
        self.query = query
        self.candidates = candidates
        names = ", ".join(str(c) for c in candidates)
        super().__init__(f"name {query!r} matches parameters {names} equally well")


class DataFileError(WorkbenchError):
    """A bundled or user-supplied data file is missing or unreadable."""


class CaseValidationError(WorkbenchError):
    """A case or collection violates schema invariants."""

    def __init__(self, message: str, findings: list[str] | None = None):
        self.findings = findings or []
        super().__init__(message)


class PromptError(WorkbenchError):
    """Template rendering failed (unknown template, unbound placeholder)."""


class UsageError(WorkbenchError):
    """Caller invoked an operation with arguments that never make sense."""


class GatewayError(WorkbenchError):
    """Base for LLM gateway failures."""


class TransportError(GatewayError):
    """Network failure or timeout that survived the retry budget."""


class ProviderError(GatewayError):
    """The provider answered with an error payload."""

    def __init__(self, status: int, message: str):
        self.status = status
        super().__init__(f"provider returned {status}: {message}")


class MissingTranscriptError(GatewayError):
    """Replay backend has no stored response for the request digest."""

    def __init__(self, digest: str, tag: str = ""):
        self.digest = digest
        self.tag = tag
        where = f" (tag {tag})" if tag else ""
        super().__init__(f"no transcript recorded for digest {digest}{where}")


class SessionError(WorkbenchError):
    """Illegal session operation (bad transition, stale version, unknown id)."""


class StaleVersionError(SessionError):
    """Optimistic concurrency check failed: caller saw an older session version."""

    def __init__(self, expected: int, actual: int):
        self.expected = expected
        self.actual = actual
        super().__init__(f"session version is {actual}, caller expected {expected}")


class SessionStateError(SessionError):
    """Operation invoked in a state it is not legal in."""

    def __init__(self, operation: str, actual: str, allowed: tuple[str, ...]):
        self.operation = operation
        self.actual = actual
        self.allowed = allowed
        wanted = " or ".join(allowed)
        super().__init__(
            f"{operation} requires state {wanted}, but the session is in {actual}"
        )


class SessionNotFoundError(SessionError):
    """No persisted session with the requested id."""


class EmptyStepOutputError(SessionError):
    """A step's model output parsed to nothing usable; retry or change strategy."""


class EvaluationError(WorkbenchError):
    """Evaluation run could not produce a report."""


class MetricError(WorkbenchError):
    """Base for metric computation failures."""


class UndefinedMetricError(MetricError):
    """The metric has no value for this input (empty set, zero vector)."""


class ShapeMismatchError(MetricError):
    """Vector operands disagree in dimension."""
