"""Exception taxonomy shared across the package.

Every error carries a stable ``code`` string so the HTTP service and the
CLI can report machine-readable errors without string matching.
"""


class MatchevalError(Exception):
    """Base class for all domain errors."""

    code = "Error"

    def __init__(self, message: str = "", detail=None):
        super().__init__(message or self.code)
        self.detail = detail


class NotFound(MatchevalError):
    code = "NotFound"


class DuplicateEntity(MatchevalError):
    code = "DuplicateEntity"


# --- import errors -------------------------------------------------------

class SchemaError(MatchevalError):
    code = "SchemaError"


class RowArityError(MatchevalError):
    code = "RowArityError"


class DuplicateRecordId(MatchevalError):
    code = "DuplicateRecordId"


class UnknownRecordId(MatchevalError):
    code = "UnknownRecordId"


class SelfPairError(MatchevalError):
    code = "SelfPairError"


# --- clustering / metric errors ------------------------------------------

class CountInconsistency(MatchevalError):
    code = "CountInconsistency"


class InvalidSampleCount(MatchevalError):
    code = "InvalidSampleCount"


class EmptyClustering(MatchevalError):
    code = "EmptyClustering"


class FewerThanThreeExperiments(MatchevalError):
    code = "FewerThanThreeExperiments"


class UnknownMetric(MatchevalError):
    code = "UnknownMetric"


# --- exploration errors ---------------------------------------------------

class MixedDatasets(MatchevalError):
    code = "MixedDatasets"


class EmptyInclude(MatchevalError):
    code = "EmptyInclude"


class TooManySources(MatchevalError):
    code = "TooManySources"


class NoSimilarities(MatchevalError):
    code = "NoSimilarities"


class NoGold(MatchevalError):
    code = "NoGold"


class NoCandidates(MatchevalError):
    code = "NoCandidates"


# --- soft KPI errors ------------------------------------------------------

class MissingEffort(MatchevalError):
    code = "MissingEffort"


class MissingTerm(MatchevalError):
    code = "MissingTerm"
