"""Shared error hierarchy.

Every domain error carries a stable machine-readable ``code`` so the API
layer can map it to an HTTP status without string matching.
"""


class IclsError(Exception):
    """Base class for all domain errors."""

    code = "internal-error"

    def __init__(self, message: str = "", **context):
        super().__init__(message or self.code)
        self.context = context


# -- lookup failures ---------------------------------------------------------

class NotFoundError(IclsError):
    code = "not-found"


class UnknownLearnerError(NotFoundError):
    code = "unknown-learner"


class UnknownCountryError(NotFoundError):
    code = "unknown-country"


class UnknownUnitError(NotFoundError):
    code = "unknown-unit"


class UnknownScopeSubjectError(NotFoundError):
    code = "unknown-scope-subject"


# -- validation --------------------------------------------------------------

class ValidationError(IclsError):
    code = "invalid-field"


class InvalidParamsError(ValidationError):
    code = "invalid-params"


class InvalidEventError(ValidationError):
    code = "invalid-event"


class EmptySourceError(ValidationError):
    code = "empty-source"


class UndecodableBytesError(ValidationError):
    code = "undecodable-bytes"


class EmptyDataError(ValidationError):
    code = "empty-data"


class NoContextError(ValidationError):
    code = "no-context"


class EmptyQuestionError(ValidationError):
    code = "empty-question"


class EmptyQueryError(ValidationError):
    code = "empty-query"


class QuizMismatchError(ValidationError):
    code = "quiz-mismatch"


# -- state conflicts ---------------------------------------------------------

class ConflictError(IclsError):
    code = "conflict"


class DuplicateEmailError(ConflictError):
    code = "duplicate-email"


class SkippedRungError(ConflictError):
    code = "skipped-rung"


class RegressionAttemptError(ConflictError):
    code = "regression-attempt"


class DuplicateAwardError(ConflictError):
    code = "duplicate-award"


class AlreadyClaimedError(ConflictError):
    code = "already-claimed"


class ChallengeNotCompletedError(ConflictError):
    code = "challenge-not-completed"


class IntegrityViolationError(ConflictError):
    code = "integrity-violation"


# -- auth --------------------------------------------------------------------

class AuthenticationError(IclsError):
    code = "unauthenticated"


class ForbiddenError(IclsError):
    code = "forbidden"


# -- LLM pipeline ------------------------------------------------------------

class GatewayError(IclsError):
    code = "gateway-error"


class ContextOverflowError(GatewayError):
    code = "context-overflow"


class ProviderUnreachableError(GatewayError):
    code = "provider-unreachable"


class ProviderRejectedError(GatewayError):
    code = "provider-rejected"


class GenerationTooShortError(IclsError):
    """Summary stayed under the word floor after the retry."""

    code = "generation-too-short"

    def __init__(self, message: str = "", best_candidate: str = "", **context):
        super().__init__(message, **context)
        self.best_candidate = best_candidate


class QuizUnderfullError(IclsError):
    """Fewer than the minimum valid questions across all attempts."""

    code = "quiz-underfull"

    def __init__(self, message: str = "", best_questions=None, **context):
        super().__init__(message, **context)
        self.best_questions = list(best_questions or [])


class UnitNotChunkedError(ValidationError):
    code = "unit-not-chunked"


class UnitNotIndexedError(NotFoundError):
    code = "unit-not-indexed"
