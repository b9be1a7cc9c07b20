"""Exception hierarchy shared by every module."""


class ThompsonError(Exception):
    pass


class DomainError(ThompsonError, ValueError):
    """Argument outside the mathematical domain of an operation."""


class UsageError(ThompsonError, ValueError):
    pass


class ParseError(ThompsonError, ValueError):
    pass


class ClassError(ThompsonError, ValueError):
    """Element or generator not in the requested group (F, T or V)."""


class PreconditionError(ThompsonError, ValueError):
    pass


class BuildError(ThompsonError, RuntimeError):
    pass


class StructuralError(ThompsonError, ValueError):
    """Certificate is malformed, so no check can run."""


class GroupMembershipError(ThompsonError, ValueError):
    pass


class ExtendNeeded(ThompsonError, ValueError):
    """Word too short to select a unique rule of a rule table."""
