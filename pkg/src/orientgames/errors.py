"""Exception types shared across the package."""


class GameError(Exception):
    """Base class for all orientgames errors."""


class OutOfRange(GameError):
    pass


class SelfLoop(GameError):
    pass


class AlreadyOriented(GameError):
    pass


class NotATournament(GameError):
    pass


class BudgetExceeded(GameError):
    pass


class ParseError(GameError):
    pass


class BadLength(GameError):
    pass


class InvalidCycle(GameError):
    pass


class SizeMismatch(GameError):
    pass


class TooLarge(GameError):
    pass


class NotFas1(GameError):
    pass


class CorruptTranscript(GameError):
    pass


class IllegalMove(GameError):
    """Raised internally when a strategy proposes an invalid move.

    The engine converts this into a forfeit for the offending side; it
    never crashes a game.
    """

    def __init__(self, role, reason):
        super().__init__(f"{role}: {reason}")
        self.role = role
        self.reason = reason


class StrategyStuck(GameError):
    """A strategy's internal invariant failed; indicates an engine bug."""


class StageComplete(GameError):
    """Control-flow signal: degree-building stage finished, hand off."""


class CriterionUnmet(GameError):
    pass


class FasTooSmall(GameError):
    pass


class NoFreeElements(GameError):
    pass


class NoAgreeingPair(GameError):
    pass


class AllDestroyed(GameError):
    pass


class UnknownStrategy(GameError):
    pass


class BadConfig(GameError):
    pass
