"""Exception hierarchy shared by every module."""


class QSDesignError(Exception):
    """Base class for all errors raised by qsdesign."""


class DimensionError(QSDesignError, ValueError):
    """Vectors or matrices with incompatible lengths."""


class EnumerationBudgetError(QSDesignError):
    """A span enumeration would exceed the configured budget."""


class UndefinedMinimumError(QSDesignError, ValueError):
    """Minimum weight requested for the zero code."""


class NoSelfDualCodeError(QSDesignError, ValueError):
    """No doubly even self-dual code exists at this length."""


class PermutationError(QSDesignError, ValueError):
    """A coordinate map is not a bijection on 1..n."""


class PreconditionError(QSDesignError, ValueError):
    """An operation was called outside its documented domain."""


class DegenerateNeighborError(QSDesignError, ValueError):
    """Neighbor step with a vector that already lies in the code."""


class SamplingExhaustedError(QSDesignError):
    """The neighbor walk found no code meeting the target."""


class _LineError(QSDesignError, ValueError):
    def __init__(self, message: str, line: int | None = None, source: str | None = None):
        self.line = line
        self.source = source
        location = ""
        if source:
            location = f"{source}:"
        if line is not None:
            location += f"{line}:"
        super().__init__(f"{location} {message}" if location else message)


class CodeParseError(_LineError):
    """Malformed generator matrix text."""


class DesignParseError(_LineError):
    """Malformed design text."""


class InfeasibleParametersError(QSDesignError, ValueError):
    """Design parameters violate the 2-design divisibility conditions."""


class DegenerateDesignError(QSDesignError, ValueError):
    """Too few blocks for the requested quantity."""


class MembershipError(QSDesignError, ValueError):
    """A vector expected to be a codeword is not one."""


class Stage2OverflowError(QSDesignError):
    """Too many base cliques to refine."""


class InternalConsistencyError(QSDesignError):
    """Two stages of the search disagree."""


class UnknownSeedError(QSDesignError, ValueError):
    """No built-in seed code has this name."""
