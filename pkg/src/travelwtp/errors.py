"""Exception hierarchy shared by every stage of the pipeline."""


class TravelWTPError(ValueError):
    """Base class for all errors raised by this package."""


class DomainError(TravelWTPError):
    """An argument lies outside the mathematical domain of an operation."""


class InsufficientDataError(TravelWTPError):
    """Not enough observations to carry out an estimate."""


class DegenerateDesignError(TravelWTPError):
    """The regression design has no variation in the regressor."""


class DegenerateGroupError(TravelWTPError):
    """An acceptance group has no acceptors, so its log-probability is undefined."""

    def __init__(self, message, group_index=None):
        super().__init__(message)
        self.group_index = group_index


class UnboundedWTPError(TravelWTPError):
    """Every respondent accepted the extra cost; the stated mean is unbounded."""


class DataFormatError(TravelWTPError):
    """A row of an input file could not be parsed.

    ``row`` is the 1-based line number in the source file (header is line 1).
    """

    def __init__(self, message, path=None, row=None):
        where = ""
        if path is not None:
            where += f"{path}"
        if row is not None:
            where += f":{row}"
        super().__init__(f"{where}: {message}" if where else message)
        self.path = path
        self.row = row


class ScenarioError(TravelWTPError):
    """A synthetic scenario cannot be simulated as specified."""


class ConfigError(TravelWTPError):
    """A run configuration is missing a key or holds an invalid value."""
