"""Exception hierarchy shared by all agt modules."""


class AGTError(Exception):
    """Base class for every error raised by agt."""

    module = "agt"


class InvalidLetter(AGTError, ValueError):
    module = "words"


class RankMismatch(AGTError, ValueError):
    module = "words"


class EmptyPattern(AGTError, ValueError):
    module = "words"


class PatternNotCyclicallyReduced(AGTError, ValueError):
    module = "words"


class TooShort(AGTError, ValueError):
    module = "words"


class PatternInvalid(AGTError, ValueError):
    module = "words"


class BudgetExceeded(AGTError, RuntimeError):
    """An enumeration would exceed the configured element budget."""

    def __init__(self, what, limit, module="agt"):
        super().__init__(f"{what} exceeds budget of {limit} elements")
        self.what = what
        self.limit = limit
        self.module = module


class DyadicOverflow(AGTError, OverflowError):
    module = "groups"


class HorizonTooSmall(AGTError, ValueError):
    module = "approx"


class OutsideHorizon(AGTError, ValueError):
    """A metric query falls outside the radius where the sample is exact."""

    module = "geometry"


class TooFewPoints(AGTError, ValueError):
    module = "geometry"


class InvalidPattern(AGTError, ValueError):
    module = "conical"


class BlockerNotFound(AGTError, LookupError):
    module = "conical"


class ConfigError(AGTError, ValueError):
    module = "cli"
