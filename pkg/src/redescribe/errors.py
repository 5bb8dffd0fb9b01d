"""Exception types shared across the package.

Every error raised on purpose derives from RedescribeError so CLI code can
map them to a nonzero exit without catching bare Exception.
"""


class RedescribeError(RuntimeError):
    """Base class for all package errors."""


# -- dataset / ARFF ----------------------------------------------------------

class DatasetError(RedescribeError):
    pass


class MalformedHeader(DatasetError):
    pass


class ArityMismatch(DatasetError):
    pass


class NonFiniteValue(DatasetError):
    pass


class UnknownCategory(DatasetError):
    def __init__(self, attribute: str, token: str):
        super().__init__(f"value {token!r} is not a declared category of {attribute!r}")
        self.attribute = attribute
        self.token = token


class RowCountMismatch(DatasetError):
    pass


class BadSampleSize(DatasetError):
    pass


# -- query language ----------------------------------------------------------

class QueryError(RedescribeError):
    pass


class QueryDepthExceeded(QueryError):
    pass


class QueryParseError(QueryError):
    pass


class UnknownAttribute(QueryError):
    def __init__(self, view: int, name: str):
        super().__init__(f"view {view} has no attribute named {name!r}")
        self.view = view
        self.name = name


# -- measures ----------------------------------------------------------------

class MeasureError(RedescribeError):
    pass


class UniverseMismatch(MeasureError):
    pass


class EmptySupport(MeasureError):
    pass


class LengthMismatch(MeasureError):
    pass


class DegenerateVariance(MeasureError):
    pass


# -- configuration / CLI -----------------------------------------------------

class SettingsError(RedescribeError):
    pass


class DuplicateKey(SettingsError):
    def __init__(self, key: str):
        super().__init__(f"settings key {key!r} given more than once")
        self.key = key


class BadKeyValue(SettingsError):
    """Type or range violation for a known settings key."""

    def __init__(self, key: str, detail: str):
        super().__init__(f"bad value for settings key {key!r}: {detail}")
        self.key = key


class MissingRequired(SettingsError):
    def __init__(self, key: str):
        super().__init__(f"required settings key {key!r} is missing")
        self.key = key


class ConfigInvalid(RedescribeError):
    pass


# -- mining ------------------------------------------------------------------

class MiningError(RedescribeError):
    pass


class SameView(MiningError):
    """Both rule pools handed to pairing live on the same view."""


class ViewAlreadyPresent(MiningError):
    def __init__(self, view: int):
        super().__init__(f"redescription already holds a query on view {view}")
        self.view = view


class DatasetTooSmall(MiningError):
    pass


class InsufficientCandidates(UserWarning):
    """Extraction asked for more redescriptions than the store holds."""


# -- explainer ---------------------------------------------------------------

class ExplainError(RedescribeError):
    pass


class BadFoldCount(ExplainError):
    pass
