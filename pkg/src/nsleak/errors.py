"""Exception hierarchy shared by every module."""


class NSLeakError(Exception):
    """Base class for all errors raised by nsleak."""


class SelectorError(NSLeakError, KeyError):
    """Unknown variable name, empty selector, or overlapping selectors."""

    def __str__(self):
        # KeyError quotes its message; keep it readable.
        return str(self.args[0]) if self.args else ""


class EmptyConditionError(NSLeakError, ValueError):
    """Conditioning value is not a realization of the conditioning variables."""


class PartitionError(NSLeakError, ValueError):
    """An attribute partition does not partition the marginal range exactly."""


class OracleScaleError(NSLeakError, ValueError):
    """Exhaustive enumeration requested above the configured cap."""


class DomainError(NSLeakError, ValueError):
    """Argument outside the mathematical domain of an operation."""


class DataError(NSLeakError, ValueError):
    """Input data is unusable for the requested computation."""


class IngestionError(DataError):
    """A table could not be read or parsed."""


class EmptyDataError(DataError):
    """No usable rows remain after dropping missing values."""
