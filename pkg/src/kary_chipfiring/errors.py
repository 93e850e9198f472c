"""Exception hierarchy shared by every module."""


class ChipFiringError(Exception):
    """Base class for domain errors (CLI exit status 1)."""


class FireError(ChipFiringError):
    pass


class MissingChip(FireError):
    pass


class WrongArity(FireError):
    pass


class TerminalVertex(FireError):
    pass


class StrategyError(ChipFiringError):
    pass


class NotLayered(StrategyError):
    pass


class IncompleteStrategy(StrategyError):
    pass


class OutOfRange(ChipFiringError):
    """Chip outside the feasible interval for the requested landing order."""


class InternalInfeasible(ChipFiringError):
    """A construction hit an empty feasibility window; indicates a bug."""


class DominationViolated(ChipFiringError):
    pass


class TrivialChip(ChipFiringError):
    pass


class ScopeExceeded(ChipFiringError):
    pass


class NotAPermutation(ChipFiringError):
    pass
